"""Numerical Lie brackets on truncated operators.

Brackets of banded truncated matrices are only wrong near the truncation
edge: each bracket with a bandwidth-``b`` operator can spoil ``b`` more rows
and columns.  All comparisons here are therefore made on an *interior
window*, a set of low-lying basis indices far enough from the edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .numeric import is_skew_hermitian

__all__ = [
    "bracket",
    "j_embed",
    "k_embed",
    "JKEmbed",
    "LieClosureReport",
    "closure",
    "LemmaReport",
    "verify_lemma",
    "window",
]


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"bracket needs equal square shapes, got {x.shape} and {y.shape}")
    return x @ y - y @ x


def j_embed(t: np.ndarray) -> np.ndarray:
    """``[[0, T], [-T^H, 0]]`` on the doubled space."""
    t = np.asarray(t, dtype=complex)
    z = np.zeros_like(t)
    return np.block([[z, t], [-t.conj().T, z]])


def k_embed(t: np.ndarray) -> np.ndarray:
    """``[[T, 0], [0, -T]]`` on the doubled space."""
    t = np.asarray(t, dtype=complex)
    z = np.zeros_like(t)
    return np.block([[t, z], [z, -t]])


@dataclass(frozen=True, eq=False)
class JKEmbed:
    T: np.ndarray
    J_of_T: np.ndarray
    K_of_T: np.ndarray

    @classmethod
    def of(cls, t: np.ndarray) -> "JKEmbed":
        return cls(np.asarray(t, dtype=complex), j_embed(t), k_embed(t))


def window(interior, dim: int) -> np.ndarray:
    """Normalize an interior specification to an index array.

    An integer ``k`` means the leading ``k x k`` block; a sequence is taken
    as explicit indices.
    """
    if np.isscalar(interior):
        k = int(interior)
        if not 0 < k <= dim:
            raise ValueError(f"interior window {k} must be in 1..{dim}")
        return np.arange(k)
    idx = np.asarray(interior, dtype=int)
    if idx.ndim != 1 or idx.size == 0 or idx.min() < 0 or idx.max() >= dim:
        raise ValueError("interior indices out of range")
    return idx


def _real_vec(m: np.ndarray, idx: np.ndarray) -> np.ndarray:
    sub = m[np.ix_(idx, idx)].ravel()
    return np.concatenate([sub.real, sub.imag])


@dataclass(frozen=True)
class LieClosureReport:
    generators: tuple
    dimension_found: int
    saturated: bool
    depth: int
    interior_dim: int
    residual: float = 0.0  # largest in-span residual among rejected brackets
    elements: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "dimension_found": self.dimension_found,
            "saturated": self.saturated,
            "depth": self.depth,
            "interior_dim": self.interior_dim,
        }


class _Span:
    """Incremental real orthonormal basis for interior projections.

    Candidates arrive divided by their natural scale (the product of the
    operand norms), so a bracket that is rounding noise, or that only lives on
    the truncation border, has a tiny projection and is rejected instead of
    being blown up to unit size.
    """

    def __init__(self, tol: float):
        self.tol = tol
        self.q: list[np.ndarray] = []

    def residual(self, v: np.ndarray) -> np.ndarray:
        r = v.copy()
        for _ in range(2):  # re-orthogonalize once
            for q in self.q:
                r -= (q @ r) * q
        return r

    def try_add(self, v: np.ndarray) -> tuple[bool, float]:
        r = self.residual(v)
        rel = float(np.linalg.norm(r))
        if rel > self.tol:
            self.q.append(r / rel)
            return True, rel
        return False, rel


def closure(
    gens: Sequence[np.ndarray],
    max_dim: int = 24,
    tol: float = 1e-9,
    interior=None,
    max_depth: int = 8,
    ids: Sequence[str] | None = None,
) -> LieClosureReport:
    """Breadth-first Lie closure of ``gens`` measured on an interior window.

    Level ``d+1`` brackets every generator with each element first found at
    level ``d``.  A bracket counts as new when its interior projection is
    independent of everything kept so far: divided by the product of its
    operand norms, its projection must leave a residual above ``tol``.
    Stops when a level adds nothing (``saturated``), when ``max_dim``
    elements are found, or after ``max_depth`` levels.
    """
    gens = [np.asarray(g, dtype=complex) for g in gens]
    if not gens:
        raise ValueError("need at least one generator")
    if max_dim < len(gens):
        raise ValueError("max_dim is smaller than the number of generators")
    dim = gens[0].shape[0]
    for g in gens:
        if g.shape != (dim, dim):
            raise ValueError("generators must share one square shape")
        if not is_skew_hermitian(g):
            raise ValueError("generators must be skew-Hermitian")
    idx = window(dim if interior is None else interior, dim)
    ids = tuple(ids) if ids is not None else tuple(f"G{k}" for k in range(len(gens)))

    span = _Span(tol)
    kept: list[np.ndarray] = []
    frontier: list[np.ndarray] = []
    worst = 0.0

    def consider(m, scale):
        # scale: natural size of m (product of operand norms for a bracket)
        nonlocal worst
        added, rel = span.try_add(_real_vec(m, idx) / scale)
        if added:
            kept.append(m / np.linalg.norm(m))
            return kept[-1]
        worst = max(worst, rel)
        return None

    gnorm = [float(np.linalg.norm(g)) for g in gens]
    for g, gn in zip(gens, gnorm):
        if gn == 0:
            continue
        m = consider(g, gn)
        if m is not None:
            frontier.append(m)
        if len(kept) >= max_dim:
            break

    depth = 1
    saturated = False
    while len(kept) < max_dim:
        if depth >= max_depth + 1:
            break
        new = []
        for f in frontier:
            for g, gn in zip(gens, gnorm):
                if gn == 0:
                    continue
                b = bracket(g, f)
                if not is_skew_hermitian(b, tol=1e-9):
                    raise ArithmeticError("bracket lost skew-Hermiticity")
                m = consider(b, gn)
                if m is not None:
                    new.append(m)
                if len(kept) >= max_dim:
                    break
            if len(kept) >= max_dim:
                break
        if not new:
            saturated = True
            break
        depth += 1
        frontier = new
    return LieClosureReport(
        generators=ids,
        dimension_found=len(kept),
        saturated=saturated,
        depth=depth,
        interior_dim=int(idx.size),
        residual=float(worst),
        elements=tuple(kept),
    )


@dataclass(frozen=True)
class LemmaReport:
    passed: bool
    max_residual: float
    residuals: dict
    window_levels: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_residual": self.max_residual,
            "residuals": dict(self.residuals),
            "window_levels": self.window_levels,
        }


def verify_lemma(t: np.ndarray, p_max: int, tol: float = 1e-9) -> LemmaReport:
    """Check the bracket identities generated by ``J(iI)`` and ``J(T)``.

    With ``W = i(T + T^H)`` the identities are::

        [J(T), J(iI)] = K(W)
        [J(iI), K(W)] = J(-2i W)
        ad_{J(W)}^p K(W) = (-2)^p J(W^{p+1})   p odd
                         = (-2)^p K(W^{p+1})   p even

    Each is compared on the leading ``size - 2*p_max`` levels of both
    halves of the doubled space.
    """
    t = np.asarray(t, dtype=complex)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValueError("T must be square")
    size = t.shape[0]
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    if size < 2 * p_max + 4:
        raise ValueError(f"truncation {size} too small for depth {p_max}; need >= {2 * p_max + 4}")
    keep = size - 2 * p_max
    idx = np.concatenate([np.arange(keep), size + np.arange(keep)])

    def resid(x, y):
        return float(np.abs((x - y)[np.ix_(idx, idx)]).max(initial=0.0))

    eye = np.eye(size, dtype=complex)
    w = 1j * (t + t.conj().T)
    jt, ji = j_embed(t), j_embed(1j * eye)
    jw, kw = j_embed(w), k_embed(w)
    res = {
        "J(T),J(iI)": resid(bracket(jt, ji), kw),
        "J(iI),K(W)": resid(bracket(ji, kw), j_embed(-2j * w)),
    }
    ad = kw
    for p in range(1, p_max + 1):
        ad = bracket(jw, ad)
        wp = np.linalg.matrix_power(w, p + 1)
        rhs = (-2.0) ** p * (j_embed(wp) if p % 2 else k_embed(wp))
        res[f"ad^{p}"] = resid(ad, rhs)
    worst = max(res.values())
    return LemmaReport(bool(worst <= tol), worst, res, keep)
