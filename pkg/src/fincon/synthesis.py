"""Constructive pulse synthesis through the ground pass state.

The sweep walks the peel order of a finite-controllability certificate.  At
each peeled vertex with nonzero amplitude it emits one pulse on the tree
edge to the vertex's parent, choosing angle and phase so the vertex's
amplitude vanishes.  The pulse is then *simulated* as the full operator,
other edges included, before the next vertex is looked at.  Arbitrary
transfers run one sweep forward and the inverse of a second sweep.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Sequence

import numpy as np

from .evolution import DARK_COUPLING, DarkTransitionError, apply_pulse
from .graph import ControllabilityVerdict, build_transfer_graph
from .models import ControlOperator
from .numeric import as_state, givens_zero, wrap_phase
from .pulses import Pulse, PulseSequence

__all__ = [
    "SynthesisError",
    "NotControllableError",
    "GuardSupportError",
    "sweep_to_ground",
    "invert",
    "transfer",
    "eigenstate_transfer",
]

ZERO_AMPLITUDE = 1e-13  # leaves below this are skipped
DESCENT_TOL = 1e-12  # peeled vertices must stay below this
ROOT_TOL = 1e-10


class SynthesisError(ValueError):
    pass


class NotControllableError(SynthesisError):
    """The verdict carries no finite-controllability certificate."""


class GuardSupportError(SynthesisError):
    """The input state has weight in the guard band."""


def _edge_coupling(ops_by_id: dict, op_id: str, i: int, j: int) -> complex:
    for a, b, g in ops_by_id[op_id].edges:
        if (a, b) == (i, j):
            return g
    raise SynthesisError(f"({i}, {j}) is not an edge of {op_id!r}")


def _zeroing_pulse(x: np.ndarray, leaf: int, edge, note: str) -> Pulse:
    i, j, op_id = edge
    if leaf == i:
        rot = givens_zero(x[i], x[j])
        phi = rot.phi
    else:
        # same rotation with the roles of the pair swapped
        rot = givens_zero(x[j], x[i])
        phi = wrap_phase(math.pi - rot.phi)
    return Pulse(op_id, (i, j), 2.0 * rot.theta, phi, note)


def _check_inputs(state, verdict, ops, guard):
    if not isinstance(verdict, ControllabilityVerdict) or not verdict.ok:
        kind = getattr(getattr(verdict, "kind", None), "value", verdict)
        raise NotControllableError(f"synthesis needs a FinitelyControllable verdict, got {kind}")
    x = as_state(state, ops[0].dim).copy()
    if abs(np.linalg.norm(x) - 1.0) > 1e-9:
        raise SynthesisError("state must have unit norm")
    if guard is not None and len(guard):
        bad = [int(g) for g in guard if abs(x[g]) > 0]
        if bad:
            raise GuardSupportError(f"state has support on guard-band indices {bad[:5]}")
    return x


def sweep_to_ground(state, verdict: ControllabilityVerdict, ops: Sequence[ControlOperator], guard=None) -> PulseSequence:
    """Pulses that move ``state`` onto the certificate's root, up to phase.

    Parameters
    ----------
    state : array
        Unit vector on the operators' basis.
    verdict : ControllabilityVerdict
        Must be ``FinitelyControllable``; its peel order drives the sweep.
    ops : sequence of ControlOperator
    guard : array of int, optional
        Indices the input may not touch.

    Raises
    ------
    NotControllableError, GuardSupportError, DarkTransitionError
    """
    x = _check_inputs(state, verdict, ops, guard)
    by_id = {op.id: op for op in ops}
    pulses = []
    done: list[int] = []
    for v, edge in verdict.peel_order:
        if edge is None:
            break
        if abs(x[v]) > ZERO_AMPLITUDE:
            i, j, op_id = edge
            g = _edge_coupling(by_id, op_id, i, j)
            if abs(g) < DARK_COUPLING:
                raise DarkTransitionError(f"edge ({i}, {j}) of {op_id!r} is dark (|g| = {abs(g):.3e})")
            p = _zeroing_pulse(x, v, edge, f"zero amplitude of vertex {v}")
            x = apply_pulse(x, p, ops)
            pulses.append(p)
        done.append(v)
        worst = float(np.abs(x[done]).max())
        if worst > DESCENT_TOL:
            raise SynthesisError(f"descent invariant broken at vertex {v}: peeled amplitude {worst:.3e}")
    if abs(abs(x[verdict.root]) - 1.0) > ROOT_TOL:
        raise SynthesisError(f"sweep ended with |root amplitude| = {abs(x[verdict.root]):.12f}")
    return PulseSequence(tuple(pulses))


def invert(seq: PulseSequence) -> PulseSequence:
    """Time reverse: reversed order, each phase advanced by pi."""
    return PulseSequence(tuple(p.inverse() for p in reversed(seq.pulses)))


def transfer(initial, final, verdict: ControllabilityVerdict, ops, guard=None) -> PulseSequence:
    """Sweep ``initial`` to the root, then run the inverse sweep of ``final``."""
    a = sweep_to_ground(initial, verdict, ops, guard)
    b = sweep_to_ground(final, verdict, ops, guard)
    return a + invert(b)


def eigenstate_transfer(src: int, dst: int, ops: Sequence[ControlOperator]) -> PulseSequence:
    """pi-pulses along the shortest transfer-graph path from ``src`` to ``dst``.

    On an acyclic component the path is unique, so this is the direct
    eigenstate-to-eigenstate move rather than a detour through the root.

    Raises
    ------
    DarkTransitionError
        If no path exists; with vanishing couplings dropped from the graph
        this is how a dark transition on the route shows up.
    """
    graph = build_transfer_graph(ops)
    adj = graph.adjacency()
    if not (0 <= src < graph.n_vertices and 0 <= dst < graph.n_vertices):
        raise IndexError("vertex out of range")
    prev = {src: None}
    queue = deque([src])
    while queue and dst not in prev:
        v = queue.popleft()
        for w, op in adj[v]:
            if w not in prev:
                prev[w] = (v, op)
                queue.append(w)
    if dst not in prev:
        raise DarkTransitionError(
            f"no coupled path from {src} to {dst}; a transition on the route is dark or absent"
        )
    steps = []
    v = dst
    while prev[v] is not None:
        u, op = prev[v]
        steps.append((u, v, op))
        v = u
    steps.reverse()
    by_id = {op.id: op for op in ops}
    pulses = []
    for u, v, op_id in steps:
        i, j = min(u, v), max(u, v)
        g = _edge_coupling(by_id, op_id, i, j)
        if abs(g) < DARK_COUPLING:
            raise DarkTransitionError(f"edge ({i}, {j}) of {op_id!r} is dark (|g| = {abs(g):.3e})")
        pulses.append(Pulse(op_id, (i, j), math.pi, 0.0, f"move {u} -> {v}"))
    return PulseSequence(tuple(pulses))
