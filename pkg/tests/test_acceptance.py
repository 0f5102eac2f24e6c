"""Acceptance criteria 1 to 10, one printed PASS/FAIL line each."""

import math

import numpy as np
import pytest

from fincon.evolution import drive_oscillator, l0_escape_demo, simulate
from fincon.graph import VerdictKind, fct_verdict
from fincon.lie import closure, j_embed, verify_lemma
from fincon.models import (
    SpinHO,
    Spin,
    SystemModel,
    annihilation,
    basis_state,
    build_operators,
    canonical_index,
    coupling,
    electron_ket,
)
from fincon.pulses import Pulse, PulseSequence
from fincon.synthesis import eigenstate_transfer, invert, sweep_to_ground, transfer


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


def verdict(**kw):
    m = SystemModel(**kw)
    return fct_verdict(m, build_operators(m))


def test_criterion_01_verdicts(report):
    bad = []
    for n in range(2, 9):
        checks = {
            "carrier+red": verdict(family="SpinOscillator", n_max=n).kind is VerdictKind.FINITELY_CONTROLLABLE,
            "red+blue": (lambda v: v.kind is VerdictKind.DISCONNECTED and len(v.components) == 2)(
                verdict(family="SpinOscillator", scheme="red+blue", n_max=n)
            ),
            "oscillator": verdict(family="HarmonicOscillator", n_max=n).kind is VerdictKind.OPERATOR_NOT_MATCHING,
            "scheme-a": verdict(family="NLevelOscillator", levels=3, scheme="scheme-a", n_max=n).ok,
            "scheme-b": verdict(family="NLevelOscillator", levels=3, scheme="scheme-b", n_max=n).ok,
        }
        bad += [f"{k}@n_max={n}" for k, ok in checks.items() if not ok]
    el = verdict(family="SpinTwoOscillators", n_max=1, l_max=1, guard=0)
    el_ok = el.kind is VerdictKind.CYCLIC_OBSTRUCTION and len(el.cycle) == 6
    for n in range(2, 9):
        v = verdict(family="SpinTwoOscillators", n_max=n, l_max=1)
        if v.kind is not VerdictKind.CYCLIC_OBSTRUCTION:
            bad.append(f"electron@n_max={n}")
    ok = not bad and el_ok
    report(1, ok, f"five verdict categories over n_max 2..8; electron cycle {list(el.cycle)}; mismatches {bad}")


def test_criterion_02_lie_closure(report):
    m = SystemModel("HarmonicOscillator", n_max=35, guard=4)
    ho = closure([op.matrix for op in build_operators(m)], interior=30)
    size, eta = 40, 0.1
    perm = np.ravel(np.column_stack([np.arange(size), size + np.arange(size)]))
    gens = [g[np.ix_(perm, perm)] for g in (j_embed(1j * np.eye(size)), eta * j_embed(annihilation(size)))]
    ld = closure(gens, max_dim=20, interior=50)
    ok = (
        (ho.dimension_found, ho.saturated) == (4, True)
        and (ld.dimension_found, ld.saturated) == (20, False)
        and max(ho.residual, ld.residual) <= 1e-9
    )
    report(
        2,
        ok,
        f"oscillator dim {ho.dimension_found} saturated={ho.saturated}; "
        f"Lamb-Dicke dim {ld.dimension_found} saturated={ld.saturated}; "
        f"max in-span residual {max(ho.residual, ld.residual):.2e}",
    )


def test_criterion_03_lemma(report):
    rep = verify_lemma(annihilation(24), p_max=4)
    ok = rep.passed and rep.max_residual <= 1e-9
    report(3, ok, f"max residual {rep.max_residual:.2e} over {sorted(rep.residuals)}")


def test_criterion_04_eigenstate_moves(report):
    failures, worst = [], 0.0
    for eta in (0.05, 0.5, 1.0):
        m = SystemModel("SpinOscillator", eta=eta, n_max=8)
        ops = build_operators(m)
        for n in range(2, 7):
            src = canonical_index(m, SpinHO(Spin.DOWN, n))
            dst = canonical_index(m, SpinHO(Spin.UP, n - 2))
            try:
                seq = eigenstate_transfer(src, dst, ops)
            except ValueError as exc:
                failures.append(f"eta={eta},n={n}: {type(exc).__name__}")
                continue
            fid = simulate(np.eye(m.dim)[src], seq, ops, target=np.eye(m.dim)[dst]).fidelity_to_target
            worst = max(worst, 1 - fid)
            if seq.op_ids != ["red", "carrier", "red"] or fid < 1 - 1e-10:
                failures.append(f"eta={eta},n={n}: {seq.op_ids} fid={fid}")
    report(4, not failures, f"15 moves, worst infidelity {worst:.1e}; failures {failures}")


def test_criterion_05_kneer_law(report):
    m = SystemModel("SpinOscillator", eta=0.1, n_max=6)
    ops = build_operators(m)
    v = fct_verdict(m, ops)
    x = (basis_state(m, SpinHO(Spin.UP, 3)) + basis_state(m, SpinHO(Spin.DOWN, 2))) / math.sqrt(2)
    seq = sweep_to_ground(x, v, ops, m.guard_indices())
    ground = basis_state(m, SpinHO(Spin.DOWN, 0))
    fid = simulate(ground, invert(seq), ops, target=x).fidelity_to_target
    pattern = seq.op_ids == ["carrier", "red"] * 3 + ["carrier"]
    first_pi = abs(seq.pulses[0].theta - math.pi) <= 1e-12
    ok = pattern and first_pi and fid >= 1 - 1e-9
    report(5, ok, f"{len(seq)} pulses {'-'.join(p[0] for p in seq.op_ids)}, first theta {seq.pulses[0].theta:.15f}, fidelity {fid:.15f}")


def test_criterion_06_round_trip_density(report):
    m = SystemModel("SpinOscillator", eta=0.1, n_max=16, guard=4)
    ops = build_operators(m)
    v = fct_verdict(m, ops)
    rng = np.random.default_rng(20240601)
    inter, guard, basis = m.interior_indices(), m.guard_indices(), m.basis()
    worst_fid, worst_leak, over = 1.0, 0.0, 0
    for _ in range(100):
        pair = []
        for _ in range(2):
            k = int(rng.integers(1, 9))
            idx = rng.choice(inter, size=k, replace=False)
            z = np.zeros(m.dim, dtype=complex)
            z[idx] = rng.normal(size=k) + 1j * rng.normal(size=k)
            pair.append(z / np.linalg.norm(z))
        seq = transfer(pair[0], pair[1], v, ops, guard)
        rep = simulate(pair[0], seq, ops, target=pair[1], guard=guard)
        max_level = max(basis[i].n for z in pair for i in np.flatnonzero(z))
        worst_fid = min(worst_fid, rep.fidelity_to_target)
        worst_leak = max(worst_leak, rep.leakage_guard)
        over += len(seq) > 4 * max_level + 2
    ok = worst_fid >= 1 - 1e-9 and worst_leak <= 1e-12 and over == 0
    report(6, ok, f"100 pairs: worst fidelity {worst_fid:.15f}, max guard leakage {worst_leak:.1e}, over pulse bound {over}")


def test_criterion_07_electron(report):
    m = SystemModel("SpinTwoOscillators", n_max=1, l_max=1, guard=0)
    ops = build_operators(m)
    ix = lambda k: canonical_index(m, electron_ket(k))  # noqa: E731
    e = lambda k: basis_state(m, electron_ket(k))  # noqa: E731
    seq = PulseSequence(
        (
            Pulse("s", (ix("000"), ix("001")), math.pi),
            Pulse("sa", (ix("001"), ix("010")), math.pi),
            Pulse("sc", (ix("010"), ix("111")), math.pi),
        )
    )
    f1 = simulate(e("000"), seq, ops, target=e("111")).fidelity_to_target
    f2 = simulate((e("000") + e("111")) / math.sqrt(2), seq, ops, target=e("000")).fidelity_to_target
    ok = abs(f1 - 1) <= 1e-12 and abs(f2 - 0.5) <= 1e-9
    report(7, ok, f"|000> -> |111> fidelity {f1:.15f}; superposition fidelity to |000> {f2:.15f}")


def test_criterion_08_driven_oscillator(report):
    m = SystemModel("HarmonicOscillator", n_max=32, guard=8)
    _, tr = drive_oscillator(0.1, 1200, 0.05, m, trace=True)
    ok = (
        tr.coherent_fidelity.min() >= 1 - 1e-6
        and tr.max_number_fidelity.max() < 0.9
        and tr.mean_occupation.max() <= m.n_max / 4
    )
    report(
        8,
        ok,
        f"min coherent fidelity {tr.coherent_fidelity.min():.12f}, max number-state fidelity "
        f"{tr.max_number_fidelity.max():.4f}, max <n> {tr.mean_occupation.max():.3f} (limit {m.n_max / 4})",
    )


def test_criterion_09_lamb_dicke_asymptotics(report):
    worst, where = 0.0, None
    for eta in (0.01, 0.02, 0.05, 0.08, 0.1):
        for n in range(1, 7):
            dev = abs(abs(coupling(n, n - 1, eta)) / (eta * math.sqrt(n)) - 1)
            if dev > worst:
                worst, where = dev, (eta, n)
    report(9, worst <= 0.02, f"max relative deviation {worst:.4f} at (eta, n) = {where}; bound 0.02")


def test_criterion_10_l0_escape(report):
    r = l0_escape_demo(8, 1.0, 1.0, 1.0, threshold=1e-14)
    ok = r["alternating_support"] <= 3 and r["sum_support"] == 8
    report(10, ok, f"alternating support {r['alternating_support']}, exp(A+B) support {r['sum_support']} of 8")
