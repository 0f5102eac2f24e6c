"""Transfer graphs and the finite-controllability verdict.

The verdict is a sufficient-condition check on the truncated graph: every
control operator must be a disjoint union of two-level blocks (a matching),
and the union of all edges must form a spanning tree.  When both hold, the
tree is peeled leaf by leaf towards the ground state, which is exactly the
order in which :mod:`fincon.synthesis` zeroes amplitudes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .models import ControlOperator, SystemModel, _operator

__all__ = [
    "TransferGraph",
    "VerdictKind",
    "ControllabilityVerdict",
    "build_transfer_graph",
    "check_matching",
    "fct_verdict",
    "restrict_operators",
]


@dataclass(frozen=True)
class TransferGraph:
    n_vertices: int
    edges: tuple  # (i, j, op_id, weight) with i < j

    def adjacency(self) -> list[list[tuple[int, str]]]:
        adj: list[list[tuple[int, str]]] = [[] for _ in range(self.n_vertices)]
        for i, j, op, _ in self.edges:
            adj[i].append((j, op))
            adj[j].append((i, op))
        for nbrs in adj:
            nbrs.sort()
        return adj

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        adj = self.adjacency()
        seen = [False] * self.n_vertices
        comps = []
        for start in range(self.n_vertices):
            if seen[start]:
                continue
            seen[start] = True
            comp, queue = [], deque([start])
            while queue:
                v = queue.popleft()
                comp.append(v)
                for w, _ in adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def shortest_cycle(self) -> list[int] | None:
        """A minimum-length cycle, or ``None`` for a forest.

        Each edge is removed in turn and the shortest path between its
        endpoints found by BFS; the first shortest result in edge order wins.
        Parallel edges between the same pair count as a 2-cycle.
        """
        adj = self.adjacency()
        best = None
        seen_pairs = set()
        for i, j, op, _ in self.edges:
            if (i, j) in seen_pairs:
                cyc = [i, j]
                if best is None or len(cyc) < len(best):
                    best = cyc
                continue
            seen_pairs.add((i, j))
            path = _bfs_path(adj, i, j, skip=(i, j, op))
            if path is not None and (best is None or len(path) < len(best)):
                best = path
        return best


def _bfs_path(adj, src, dst, skip):
    si, sj, sop = skip
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for w, op in adj[v]:
            if op == sop and {v, w} == {si, sj}:
                continue
            if w not in prev:
                prev[w] = v
                queue.append(w)
    if dst not in prev:
        return None
    path = [dst]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def build_transfer_graph(ops: Sequence[ControlOperator]) -> TransferGraph:
    """One labelled edge per nonzero strict-upper-triangle entry of each operator."""
    if not ops:
        raise ValueError("need at least one operator")
    dim = ops[0].dim
    edges = []
    for op in ops:
        if op.dim != dim:
            raise ValueError(f"operator {op.id!r} has dimension {op.dim}, expected {dim}")
        rows, cols = np.nonzero(np.triu(op.matrix, 1))
        for i, j in zip(rows.tolist(), cols.tolist()):
            edges.append((i, j, op.id, float(abs(op.matrix[i, j]))))
    edges.sort(key=lambda e: (e[0], e[1], e[2]))
    return TransferGraph(dim, tuple(edges))


def check_matching(op: ControlOperator) -> int | None:
    """``None`` if no vertex has degree > 1 in ``op``, else the first such vertex."""
    m = np.asarray(op.matrix)
    off = m - np.diag(np.diag(m))
    degree = np.count_nonzero(off, axis=1)
    bad = np.flatnonzero(degree >= 2)
    return int(bad[0]) if bad.size else None


class VerdictKind(str, Enum):
    FINITELY_CONTROLLABLE = "FinitelyControllable"
    DISCONNECTED = "Disconnected"
    CYCLIC_OBSTRUCTION = "CyclicObstruction"
    OPERATOR_NOT_MATCHING = "OperatorNotMatching"


@dataclass(frozen=True)
class ControllabilityVerdict:
    """Outcome of :func:`fct_verdict`.

    For ``FinitelyControllable`` the certificate is ``root``, ``h1`` (the
    vertices of the base subspace) and ``peel_order``: ``(vertex, edge)``
    pairs where ``edge = (i, j, op_id)`` joins the vertex to its parent, and
    the final entry is ``(root, None)``.  Obstructions carry exactly one of
    ``components``, ``cycle`` or ``witness_op``/``witness_vertex``.
    """

    kind: VerdictKind
    root: int | None = None
    h1: tuple = ()
    peel_order: tuple = ()
    components: tuple = ()
    cycle: tuple = ()
    witness_op: str | None = None
    witness_vertex: int | None = None
    parent: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return self.kind is VerdictKind.FINITELY_CONTROLLABLE

    def depth(self, v: int) -> int:
        """Number of tree edges between ``v`` and the root."""
        d = 0
        while self.parent.get(v) is not None:
            v = self.parent[v][0]
            d += 1
        return d

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "root": self.root,
            "peel_order": [[v, None if e is None else [e[0], e[1], e[2]]] for v, e in self.peel_order],
            "components": [list(c) for c in self.components],
            "cycle": list(self.cycle),
            "witness_op": self.witness_op,
        }


def fct_verdict(model: SystemModel | None, ops: Sequence[ControlOperator], root: int | None = None) -> ControllabilityVerdict:
    """Decide finite controllability of ``ops`` on the truncated basis.

    Checks, in order: each operator is a matching; the union graph is
    connected; the union graph is acyclic.  The root defaults to the canonical
    ground state (index 0).  ``model`` is only used for that default and may
    be ``None``.
    """
    if not ops:
        raise ValueError("need at least one operator")
    for op in ops:
        w = check_matching(op)
        if w is not None:
            return ControllabilityVerdict(VerdictKind.OPERATOR_NOT_MATCHING, witness_op=op.id, witness_vertex=w)
    graph = build_transfer_graph(ops)
    comps = graph.components()
    if len(comps) > 1:
        return ControllabilityVerdict(VerdictKind.DISCONNECTED, components=tuple(tuple(c) for c in comps))
    cycle = graph.shortest_cycle()
    if cycle is not None:
        return ControllabilityVerdict(VerdictKind.CYCLIC_OBSTRUCTION, cycle=tuple(cycle))
    root = 0 if root is None else int(root)
    adj = graph.adjacency()
    h1 = (root,) if len(adj[root]) <= 1 else (root, adj[root][0][0])
    dist, parent = {root: 0}, {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w, op in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                parent[w] = (v, op)
                queue.append(w)
    order = sorted(range(graph.n_vertices), key=lambda v: (-dist[v], -v))
    peel = []
    for v in order:
        if parent[v] is None:
            peel.append((v, None))
        else:
            p, op = parent[v]
            peel.append((v, (min(v, p), max(v, p), op)))
    return ControllabilityVerdict(
        VerdictKind.FINITELY_CONTROLLABLE, root=root, h1=h1, peel_order=tuple(peel), parent=parent
    )


def restrict_operators(ops: Sequence[ControlOperator], vertices: Sequence[int]) -> list[ControlOperator]:
    """Operators compressed onto ``vertices`` (relabelled ``0..len-1`` in the given order)."""
    pos = {v: k for k, v in enumerate(vertices)}
    out = []
    for op in ops:
        upper = [(pos[i], pos[j], g) for i, j, g in op.edges if i in pos and j in pos]
        out.append(_operator(op.id, len(vertices), upper))
    return out
