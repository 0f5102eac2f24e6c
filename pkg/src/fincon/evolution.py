"""Exact pulse simulation and the oscillator diagnostics.

Matching operators are exponentiated in closed form: a pulse on such an
operator is a product of commuting two-level rotations, one per edge.  The
generic matrix exponential is only used for the driven oscillator, whose
position coupling is not a matching.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .graph import check_matching
from .models import ControlOperator, Family, SystemModel, build_operators
from .numeric import apply_rotation, as_state, expm_skew, fidelity
from .pulses import Pulse, PulseSequence

__all__ = [
    "DARK_COUPLING",
    "DarkTransitionError",
    "TruncationLeakageError",
    "edge_phases",
    "apply_pulse",
    "SimulationReport",
    "simulate",
    "population_trace_csv",
    "drive_oscillator",
    "DriveTrace",
    "CoherentFit",
    "coherent_state",
    "fit_coherent",
    "l0_escape_demo",
]

DARK_COUPLING = 1e-12
GUARD_ABORT = 1e-6


class DarkTransitionError(ValueError):
    """A pulse targets an edge whose coupling (numerically) vanishes."""


class TruncationLeakageError(ArithmeticError):
    """Weight reached the guard band beyond the allowed level."""


def _ops_by_id(ops: Sequence[ControlOperator]) -> dict:
    return {op.id: op for op in ops}


def edge_phases(op: ControlOperator) -> np.ndarray:
    """Phase each edge of ``op`` has when the operator is exponentiated as is.

    For an edge block ``[[0, g], [-conj(g), 0]]`` the exponential is the
    package rotation with ``phi = angle(-conj(g))``.
    """
    g = np.array([e[2] for e in op.edges], dtype=complex)
    return np.angle(-np.conj(g))


def apply_pulse(state, pulse: Pulse, ops: Sequence[ControlOperator]) -> np.ndarray:
    """Apply ``pulse`` as the full operator to ``state``.

    The target edge ``(i, j)`` rotates by ``theta / 2`` with phase ``phi``.
    Every other edge ``(k, l)`` rotates by ``theta/2 * |g_kl| / |g_ij|`` and
    has its phase shifted by the same amount as the target, which is exactly
    ``exp(tau * M')`` for ``M'`` the operator with a shifted drive phase.

    Raises
    ------
    DarkTransitionError
        If ``|g_ij| < 1e-12``.
    ValueError
        For an unknown operator or edge, or a non-matching operator.
    """
    op = _ops_by_id(ops).get(pulse.op_id)
    if op is None:
        raise ValueError(f"unknown operator {pulse.op_id!r}")
    x = as_state(state, op.dim).copy()
    if not op.edges:
        raise ValueError(f"operator {op.id!r} has no edges to pulse")
    if check_matching(op) is not None:
        raise ValueError(f"operator {op.id!r} is not a matching; closed-form pulses need disjoint blocks")
    rows = np.array([e[0] for e in op.edges])
    cols = np.array([e[1] for e in op.edges])
    mags = np.abs(np.array([e[2] for e in op.edges], dtype=complex))
    hit = np.flatnonzero((rows == pulse.target_edge[0]) & (cols == pulse.target_edge[1]))
    if hit.size == 0:
        raise ValueError(f"edge {pulse.target_edge} is not an edge of {op.id!r}")
    t = int(hit[0])
    if mags[t] < DARK_COUPLING:
        raise DarkTransitionError(
            f"edge {pulse.target_edge} of {op.id!r} has coupling {mags[t]:.3e} < {DARK_COUPLING:g} (dark transition)"
        )
    if pulse.theta == 0:
        return x
    phases = edge_phases(op)
    angles = 0.5 * pulse.theta * mags / mags[t]
    shifted = phases + (pulse.phi - phases[t])
    x[rows], x[cols] = apply_rotation(x[rows], x[cols], angles, shifted)
    return x


@dataclass(frozen=True)
class SimulationReport:
    final_state: np.ndarray
    fidelity_to_target: float | None
    leakage_guard: float
    pulse_count: int
    per_pulse_norm_drift: float

    def to_dict(self) -> dict:
        return {
            "final_state": [[float(z.real), float(z.imag)] for z in self.final_state],
            "fidelity_to_target": self.fidelity_to_target,
            "leakage_guard": self.leakage_guard,
            "pulse_count": self.pulse_count,
            "per_pulse_norm_drift": self.per_pulse_norm_drift,
        }


def simulate(state, seq: PulseSequence, ops, target=None, guard=None, trace: list | None = None) -> SimulationReport:
    """Fold :func:`apply_pulse` over ``seq``.

    Parameters
    ----------
    guard : array of int, optional
        Guard-band indices; ``leakage_guard`` is the largest population seen
        there, before or after any pulse.
    trace : list, optional
        If given, the population vector after each pulse (and the initial
        one) is appended to it.
    """
    psi = as_state(state, ops[0].dim).copy()
    norm0 = float(np.linalg.norm(psi))
    guard = np.asarray([] if guard is None else guard, dtype=int)

    def leak(v):
        return float(np.max(np.abs(v[guard]) ** 2, initial=0.0))

    worst_leak, drift = leak(psi), 0.0
    if trace is not None:
        trace.append(np.abs(psi) ** 2)
    for p in seq:
        psi = apply_pulse(psi, p, ops)
        drift = max(drift, abs(float(np.linalg.norm(psi)) - norm0))
        worst_leak = max(worst_leak, leak(psi))
        if trace is not None:
            trace.append(np.abs(psi) ** 2)
    fid = None if target is None else fidelity(psi, as_state(target, psi.size))
    return SimulationReport(psi, fid, worst_leak, len(seq), drift)


def population_trace_csv(trace: Sequence[np.ndarray], guard=None) -> str:
    """CSV text with one row per step: index, populations, leakage."""
    guard = np.asarray([] if guard is None else guard, dtype=int)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if len(trace):
        w.writerow(["index"] + [f"p{k}" for k in range(len(trace[0]))] + ["leakage"])
    for k, pops in enumerate(trace):
        w.writerow([k] + [format(float(p), ".17g") for p in pops] + [format(float(np.sum(pops[guard])), ".17g")])
    return buf.getvalue()


@dataclass(frozen=True)
class CoherentFit:
    alpha: complex
    fit_fidelity: float


def coherent_state(alpha: complex, size: int) -> np.ndarray:
    """Truncated ``|alpha>`` with the standard ``alpha**n / sqrt(n!)`` weights (not renormalized)."""
    n = np.arange(size)
    logmag = n * math.log(abs(alpha)) if alpha != 0 else np.where(n == 0, 0.0, -np.inf)
    mag = np.exp(logmag - 0.5 * gammaln(n + 1) - 0.5 * abs(alpha) ** 2)
    return mag * np.exp(1j * np.angle(alpha) * n)


def fit_coherent(state) -> CoherentFit:
    """Moment fit of a coherent state to an oscillator state.

    ``|alpha|**2`` is the mean occupation and the phase is that of ``<a>``.
    """
    x = as_state(state)
    if abs(np.linalg.norm(x) - 1.0) > 1e-9:
        raise ValueError("fit_coherent expects a unit vector")
    n = np.arange(x.size)
    mean_n = float(np.sum(n * np.abs(x) ** 2))
    a_mean = np.sum(np.sqrt(n[1:]) * np.conj(x[:-1]) * x[1:])
    alpha = math.sqrt(mean_n) * np.exp(1j * np.angle(a_mean)) if mean_n > 0 else 0j
    ref = coherent_state(complex(alpha), x.size)
    fid = float(min(1.0, abs(np.vdot(ref, x)) ** 2))
    return CoherentFit(complex(alpha), fid)


@dataclass(frozen=True)
class DriveTrace:
    times: np.ndarray
    coherent_fidelity: np.ndarray
    max_number_fidelity: np.ndarray  # max_{n>=1} |<n|psi>|^2
    mean_occupation: np.ndarray
    leakage: np.ndarray


def drive_oscillator(amplitude: float, steps: int, dt: float, model: SystemModel, state=None, trace: bool = False):
    """Resonantly drive the oscillator with ``u(t) = amplitude * cos(omega t)``.

    The drive is held constant over each step at its midpoint value and the
    step propagator is ``expm_skew((A + u B) dt)``.  Starts from ``|0>``
    unless ``state`` is given.

    Returns the final state, or ``(state, DriveTrace)`` if ``trace``.

    Raises
    ------
    TruncationLeakageError
        If the guard band population exceeds 1e-6.
    """
    if model.family is not Family.HARMONIC_OSCILLATOR:
        raise ValueError("drive_oscillator needs a HarmonicOscillator model")
    if steps < 0 or dt <= 0:
        raise ValueError("need steps >= 0 and dt > 0")
    a_op, b_op = build_operators(model)
    A, B = np.asarray(a_op.matrix), np.asarray(b_op.matrix)
    omega = model.drift_freqs["omega_m"]
    guard = model.guard_indices()
    if state is None:
        psi = np.zeros(model.dim, dtype=complex)
        psi[0] = 1.0
    else:
        psi = as_state(state, model.dim).copy()
    rows = []

    def record(t, v):
        pops = np.abs(v) ** 2
        rows.append((t, fit_coherent(v).fit_fidelity, float(pops[1:].max(initial=0.0)),
                     float(np.sum(np.arange(v.size) * pops)), float(pops[guard].sum())))

    if trace:
        record(0.0, psi)
    for k in range(steps):
        u = amplitude * math.cos(omega * (k + 0.5) * dt)
        psi = expm_skew(A + u * B, dt) @ psi
        lk = float(np.sum(np.abs(psi[guard]) ** 2))
        if lk > GUARD_ABORT:
            raise TruncationLeakageError(
                f"guard-band population {lk:.3e} > {GUARD_ABORT:g} after step {k + 1}; "
                f"mean occupation {np.sum(np.arange(psi.size) * np.abs(psi) ** 2):.3f}, raise n_max"
            )
        if trace:
            record((k + 1) * dt, psi)
    if not trace:
        return psi
    cols = [np.array(c) for c in zip(*rows)]
    return psi, DriveTrace(*cols)


def l0_escape_demo(dim: int = 8, u: float = 1.0, v: float = 1.0, t: float = 1.0, threshold: float = 1e-14) -> dict:
    """Support of ``exp(Au) exp(Bv) e1`` against that of ``exp((A+B)t) e1``.

    ``A`` and ``B`` are the block-rotation generators on a chain of ``dim``
    sites.  Alternating exponentials stay finitely supported while the
    exponential of the sum reaches every site.
    """
    if dim < 6 or dim % 2:
        raise ValueError("dim must be even and >= 6")
    model = SystemModel(Family.BLOCK_EXAMPLE, n_max=dim - 1, guard=0)
    a_op, b_op = build_operators(model)
    A, B = np.asarray(a_op.matrix), np.asarray(b_op.matrix)
    e1 = np.zeros(dim, dtype=complex)
    e1[0] = 1.0
    alt = expm_skew(A, u) @ (expm_skew(B, v) @ e1)
    summed = expm_skew(A + B, t) @ e1
    return {
        "dim": dim,
        "u": float(u),
        "v": float(v),
        "t": float(t),
        "threshold": float(threshold),
        "alternating_support": int(np.count_nonzero(np.abs(alt) > threshold)),
        "sum_support": int(np.count_nonzero(np.abs(summed) > threshold)),
        "alternating_state": alt,
        "sum_state": summed,
    }
