import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from belltet import channels as C
from belltet.measures import coherence_l1_c, coherence_rel_entropy_c
from belltet.qstate import density_matrix, from_density_matrix, new_state, random_correlations

from test_qstate import states

qs = st.floats(0, 1)


def test_corrected_depolarizing_is_trace_preserving():
    for q in np.linspace(0, 1, 11):
        assert C.trace_preservation_error(C.depolarizing_A(q)) < 1e-12


def test_literal_weights_rejected():
    ch = C.depolarizing_A(0.2, literal=True)
    assert C.trace_preservation_error(ch) == pytest.approx(0.45, abs=1e-12)
    assert not C.is_trace_preserving(ch)
    with pytest.raises(C.NotTracePreserving):
        C.apply_channel(np.eye(4) / 4, ch)
    with pytest.raises(C.InvalidStrength):
        C.depolarizing_A(0.5, literal=True)


def test_literal_deficit_formula():
    for q in (0.05, 0.1, 0.3):
        total = C.kraus_sum(C.depolarizing_A(q, literal=True))
        assert np.allclose(total, (1 - 9 * q / 4) * np.eye(4))


def test_invalid_strength():
    for bad in (-0.1, 1.1, float("nan")):
        with pytest.raises(C.InvalidStrength):
            C.phase_flip(bad)


def test_empty_channel():
    assert C.trace_preservation_error(C.KrausChannel(())) == float("inf")


@pytest.mark.parametrize("ch", [C.depolarizing_A(0.3), C.phase_flip(0.4, "A"),
                                C.phase_flip(0.4, "B"), C.phase_flip(0.4, "both")])
def test_incoherent(ch):
    assert C.is_incoherent_channel(ch)


def test_hadamard_is_not_incoherent():
    assert not C.is_incoherent_channel(C.hadamard_A())


def test_lift_target():
    with pytest.raises(ValueError):
        C.lift(np.eye(2), "C")


def test_depolarizing_examples():
    s = new_state(0.8, 0.4, -0.6)
    out = from_density_matrix(C.apply_channel(density_matrix(s), C.depolarizing_A(0.5)))
    assert out.c == pytest.approx([0.4, 0.2, -0.3], abs=1e-14)
    out = from_density_matrix(C.apply_channel(density_matrix(s), C.depolarizing_A(1.0)))
    assert out.c == pytest.approx([0, 0, 0], abs=1e-14)


def test_phase_flip_examples():
    s = new_state(0.8, 0.4, -0.6)
    out = from_density_matrix(C.apply_channel(density_matrix(s), C.phase_flip(0.5, "both")))
    assert out.c == pytest.approx([0.2, 0.1, -0.6], abs=1e-14)
    sched = C.NoiseSchedule(1.0, (np.log(2) / 2,))
    traj = C.trajectory(s, "phase_flip_both", sched)
    assert traj.correlations[0] == pytest.approx([0.4, 0.2, -0.6], abs=1e-14)


@given(states(), qs)
def test_depolarizing_uniform_shrink(s, q):
    out = from_density_matrix(C.apply_channel(density_matrix(s), C.depolarizing_A(q))).c
    assert np.abs(out - (1 - q) * s.c).max() < 1e-12


@given(states(), qs, st.sampled_from(["A", "B", "both"]))
def test_phase_flip_closed_form(s, q, target):
    out = from_density_matrix(C.apply_channel(density_matrix(s), C.phase_flip(q, target))).c
    assert np.abs(out - C.phase_flip_map(s.c, q, target)).max() < 1e-12


@given(states(), qs)
def test_output_stays_bell_diagonal_and_valid(s, q):
    for fam in C.FAMILIES:
        rho = C.apply_channel(density_matrix(s), C.channel_for(fam, q))
        assert np.trace(rho).real == pytest.approx(1)
        assert np.linalg.eigvalsh(rho).min() > -1e-12
        from_density_matrix(rho)


def test_composition_order():
    a, b = C.phase_flip(0.3, "A"), C.depolarizing_A(0.2)
    rho = density_matrix(new_state(0.5, 0.3, 0.1))
    assert np.allclose(C.apply_channel(rho, a.then(b)), C.apply_channel(C.apply_channel(rho, a), b))


def test_schedule():
    sched = C.NoiseSchedule.linspace(2.0, 1.0, 5)
    assert sched.times == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert sched.q_of_t(0) == 0
    assert sched.q_of_t(0.5) == pytest.approx(1 - np.exp(-1))
    with pytest.raises(ValueError):
        C.NoiseSchedule(1.0, (0.5, 0.2))
    with pytest.raises(ValueError):
        C.NoiseSchedule(0.0, (0.0,))
    with pytest.raises(ValueError):
        C.NoiseSchedule(1.0, ())


def test_trajectory_is_exponential_decay():
    s = new_state(0.5, 0.3, 0.1)
    sched = C.NoiseSchedule.linspace(0.7, 3.0, 10)
    traj = C.trajectory(s, "phase_flip_both", sched)
    t = traj.times
    c = traj.correlations
    assert np.allclose(c[:, 0], 0.5 * np.exp(-2 * 0.7 * t), atol=1e-13)
    assert np.allclose(c[:, 2], 0.1)
    traj = C.trajectory(s, "depolarizing_A", sched)
    assert np.allclose(traj.correlations, np.exp(-0.7 * t)[:, None] * s.c, atol=1e-13)
    l1 = [x.measures.c_l1 for x in traj.samples]
    assert np.all(np.diff(l1) <= 1e-12)


def test_unknown_family():
    with pytest.raises(ValueError):
        C.channel_for("amplitude_damping", 0.1)


def test_coherence_monotone():
    cs = random_correlations(200, 9)
    for fam in C.FAMILIES:
        for q in np.linspace(0.1, 0.9, 9):
            out = C.closed_form_map(fam, cs, q)
            for f in (coherence_l1_c, coherence_rel_entropy_c):
                assert (f(out) - f(cs)).max() <= 1e-10
