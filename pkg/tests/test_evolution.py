import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from fincon.evolution import (
    TruncationLeakageError,
    apply_pulse,
    coherent_state,
    drive_oscillator,
    edge_phases,
    fit_coherent,
    l0_escape_demo,
    population_trace_csv,
    simulate,
)
from fincon.models import Electron, Spin, SpinHO, SystemModel, basis_state, build_operators, canonical_index, electron_ket
from fincon.numeric import fidelity
from fincon.pulses import Pulse, PulseSequence


def ion(eta=0.1, n_max=5, guard=3):
    m = SystemModel("SpinOscillator", eta=eta, n_max=n_max, guard=guard)
    return m, build_operators(m)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(["carrier", "red"]),
    st.integers(0, 7),
    st.floats(0, math.pi),
    st.floats(-3.1, 3.1),
    st.integers(0, 1000),
)
def test_apply_pulse_equals_phase_shifted_exponential(op_id, k, theta, phi, seed):
    # oracle: exp(tau * M') with M' the operator whose every edge phase is shifted by delta
    m, ops = ion(eta=0.4)
    op = next(o for o in ops if o.id == op_id)
    i, j, g = op.edges[k % len(op.edges)]
    delta = phi - edge_phases(op)[k % len(op.edges)]
    shifted = np.triu(op.matrix, 1) * np.exp(-1j * delta)
    mp = shifted - shifted.conj().T
    tau = 0.5 * theta / abs(g)
    rng = np.random.default_rng(seed)
    x = rng.normal(size=m.dim) + 1j * rng.normal(size=m.dim)
    x /= np.linalg.norm(x)
    ours = apply_pulse(x, Pulse(op_id, (i, j), theta, phi), ops)
    assert np.abs(ours - scipy.linalg.expm(tau * mp) @ x).max() <= 1e-12


def test_native_phase_pulse_is_plain_exponential():
    m, ops = ion()
    c = ops[0]
    i, j, g = c.edges[2]
    x = basis_state(m, SpinHO(Spin.DOWN, 2))
    out = apply_pulse(x, Pulse("carrier", (i, j), 1.0, edge_phases(c)[2]), ops)
    assert np.allclose(out, scipy.linalg.expm(0.5 / abs(g) * c.matrix) @ x, atol=1e-13)


def test_carrier_pi_pulse_flips_spin():
    m, ops = ion()
    down = basis_state(m, SpinHO(Spin.DOWN, 0))
    up = basis_state(m, SpinHO(Spin.UP, 0))
    out = apply_pulse(down, Pulse("carrier", (0, 1), math.pi), ops)
    assert fidelity(out, up) == pytest.approx(1.0, abs=1e-15)
    assert np.array_equal(apply_pulse(down, Pulse("carrier", (0, 1), 0.0), ops), down)


def test_apply_pulse_validation():
    m, ops = ion()
    x = basis_state(m, SpinHO(Spin.DOWN, 0))
    with pytest.raises(ValueError):
        apply_pulse(x, Pulse("blue", (0, 1), 1.0), ops)
    with pytest.raises(ValueError):
        apply_pulse(x, Pulse("carrier", (0, 3), 1.0), ops)
    hm = SystemModel("HarmonicOscillator", n_max=3, guard=0)
    with pytest.raises(ValueError):
        apply_pulse(np.eye(4)[0], Pulse("B", (0, 1), 1.0), build_operators(hm))


def electron():
    m = SystemModel("SpinTwoOscillators", n_max=1, l_max=1, guard=0)
    ops = build_operators(m)
    ix = lambda k: canonical_index(m, electron_ket(k))  # noqa: E731
    e = lambda k: basis_state(m, electron_ket(k))  # noqa: E731
    return m, ops, ix, e


def test_spin_pulse_moves_both_ends_of_the_cycle():
    m, ops, ix, e = electron()
    out = apply_pulse(e("000") + e("111"), Pulse("s", tuple(sorted((ix("000"), ix("001")))), math.pi), ops)
    assert abs(out[ix("001")]) == pytest.approx(1.0)
    assert abs(out[ix("110")]) == pytest.approx(1.0)


def test_electron_three_pulse_sequence():
    m, ops, ix, e = electron()
    seq = PulseSequence(
        (
            Pulse("s", (ix("000"), ix("001")), math.pi),
            Pulse("sa", (ix("001"), ix("010")), math.pi),
            Pulse("sc", (ix("010"), ix("111")), math.pi),
        )
    )
    assert simulate(e("000"), seq, ops, target=e("111")).fidelity_to_target == pytest.approx(1.0, abs=1e-12)
    sup = (e("000") + e("111")) / math.sqrt(2)
    assert simulate(sup, seq, ops, target=e("000")).fidelity_to_target == pytest.approx(0.5, abs=1e-12)
    back = simulate(e("111"), seq, ops).final_state
    assert abs(back[ix("000")]) == pytest.approx(1.0)


def test_electron_cycle_symmetry_for_odd_compositions():
    # An odd number of pi-pulses along a path e1 -> e2 also sends e2 back to e1.
    # Even-length paths do not: s then sc maps |001> to |101> but |101> to |100>.
    from fincon.synthesis import eigenstate_transfer

    m, ops, ix, e = electron()
    eye = np.eye(m.dim)
    for a in range(m.dim):
        for b in range(m.dim):
            if a == b:
                continue
            seq = eigenstate_transfer(a, b, ops)
            assert fidelity(simulate(eye[a], seq, ops).final_state, eye[b]) == pytest.approx(1.0)
            back = np.abs(simulate(eye[b], seq, ops).final_state)
            if len(seq) % 2:
                assert back[a] == pytest.approx(1.0)
    seq = eigenstate_transfer(ix("001"), ix("101"), ops)
    assert seq.op_ids == ["s", "sc"]
    assert abs(simulate(e("101"), seq, ops).final_state[ix("100")]) == pytest.approx(1.0)


def test_simulate_empty_sequence_and_trace():
    m, ops = ion()
    rng = np.random.default_rng(0)
    x = rng.normal(size=m.dim) + 0j
    x /= np.linalg.norm(x)
    y = basis_state(m, SpinHO(Spin.UP, 2))
    rep = simulate(x, PulseSequence(), ops, target=y)
    assert np.array_equal(rep.final_state, x)
    assert rep.fidelity_to_target == pytest.approx(abs(x[5]) ** 2)
    trace = []
    seq = PulseSequence((Pulse("carrier", (0, 1), 1.0), Pulse("red", (1, 2), 2.0)))
    rep = simulate(x, seq, ops, guard=m.guard_indices(), trace=trace)
    assert len(trace) == 3 and rep.pulse_count == 2
    text = population_trace_csv(trace, m.guard_indices())
    lines = text.strip().splitlines()
    assert len(lines) == 4 and lines[0].startswith("index,p0")
    assert lines[0].endswith("leakage")


def test_report_roundtrip_fields():
    m, ops = ion()
    d = simulate(basis_state(m, SpinHO(Spin.DOWN, 0)), PulseSequence(), ops).to_dict()
    assert list(d) == ["final_state", "fidelity_to_target", "leakage_guard", "pulse_count", "per_pulse_norm_drift"]


def test_coherent_fit_examples():
    fit = fit_coherent(np.eye(6)[0])
    assert fit.alpha == 0 and fit.fit_fidelity == pytest.approx(1.0)
    x = coherent_state(0.8, 40)
    fit = fit_coherent(x / np.linalg.norm(x))
    assert fit.fit_fidelity >= 1 - 1e-10 and abs(fit.alpha - 0.8) < 1e-10
    fit = fit_coherent(np.eye(6)[1])
    assert fit.alpha == pytest.approx(1.0)
    assert fit.fit_fidelity == pytest.approx(math.exp(-1), rel=1e-10)


def test_coherent_state_matches_displacement():
    # oracle: D(alpha)|0> on a large truncation
    from fincon.models import annihilation

    a = annihilation(60)
    alpha = 0.7 - 0.4j
    ref = scipy.linalg.expm(alpha * a.conj().T - np.conj(alpha) * a)[:, 0]
    assert np.abs(coherent_state(alpha, 60) - ref).max() < 1e-12


def test_undriven_oscillator_only_changes_phases():
    m = SystemModel("HarmonicOscillator", n_max=10, guard=4)
    rng = np.random.default_rng(1)
    x = np.zeros(m.dim, dtype=complex)
    x[:5] = rng.normal(size=5)
    x /= np.linalg.norm(x)
    out = drive_oscillator(0.0, 50, 0.1, m, state=x)
    assert np.allclose(np.abs(out), np.abs(x), atol=1e-12)


def test_weak_drive_stays_coherent():
    m = SystemModel("HarmonicOscillator", n_max=24, guard=6)
    psi, tr = drive_oscillator(0.1, 600, 0.05, m, trace=True)
    assert tr.coherent_fidelity.min() >= 1 - 1e-6
    assert tr.max_number_fidelity.max() < 0.9
    assert np.sum(np.abs(psi) ** 2) == pytest.approx(1.0, abs=1e-12)
    assert tr.mean_occupation[-1] > 0.5


def test_drive_aborts_on_guard_leakage():
    m = SystemModel("HarmonicOscillator", n_max=3, guard=2)
    with pytest.raises(TruncationLeakageError):
        drive_oscillator(0.5, 400, 0.05, m)


def test_l0_escape():
    r = l0_escape_demo(8, 1.0, 1.0)
    assert r["alternating_support"] <= 3 and r["sum_support"] == 8
    r = l0_escape_demo(8, 0.0, 0.0, 0.0)
    assert r["alternating_support"] == r["sum_support"] == 1
    assert np.array_equal(r["alternating_state"], r["sum_state"])
    with pytest.raises(ValueError):
        l0_escape_demo(7)
