"""Dense complex linear algebra used throughout the package.

States are 1-D complex ``numpy`` arrays and operators are 2-D complex
arrays; nothing here wraps them in classes.  The one piece of shared
convention is the two-level rotation:

    new_a = cos(theta) * a - exp(-1j*phi) * sin(theta) * b
    new_b = exp(1j*phi) * sin(theta) * a + cos(theta) * b

Every module that rotates a pair of amplitudes goes through
:func:`rotation_matrix` / :func:`apply_rotation` so phases stay consistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "NotSkewHermitianError",
    "Rotation2",
    "UNITARY_TOL",
    "expm",
    "expm_skew",
    "is_skew_hermitian",
    "rotation_matrix",
    "apply_rotation",
    "givens_zero",
    "wrap_phase",
    "orthonormal_rank",
    "fidelity",
    "as_state",
]

UNITARY_TOL = 1e-10
SKEW_TOL = 1e-12
RANK_TOL = 1e-10
UNIT_NORM_TOL = 1e-9

# Taylor kernel: order 18 at scaled norm <= 1/2 leaves truncation error ~1e-23.
_TAYLOR_ORDER = 18
_SCALED_NORM = 0.5


class NotSkewHermitianError(ValueError):
    """Raised when a generator that must be skew-Hermitian is not."""


@dataclass(frozen=True)
class Rotation2:
    """Two-level rotation ``(theta, phi)`` in the package-wide convention."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (-1e-15 <= self.theta <= math.pi + 1e-15):
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not (-math.pi < self.phi <= math.pi):
            raise ValueError(f"phi={self.phi} outside (-pi, pi]")

    @property
    def matrix(self) -> np.ndarray:
        return rotation_matrix(self.theta, self.phi)

    def inverse(self) -> "Rotation2":
        return Rotation2(self.theta, wrap_phase(self.phi + math.pi))


def wrap_phase(phi: float) -> float:
    """Map an angle into (-pi, pi]."""
    out = math.remainder(phi, 2 * math.pi)
    if out <= -math.pi:
        out += 2 * math.pi
    return out


def rotation_matrix(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [[c, -np.exp(-1j * phi) * s], [np.exp(1j * phi) * s, c]], dtype=complex
    )


def apply_rotation(a, b, theta, phi):
    """Rotate amplitude pairs; broadcasts over arrays of ``a, b, theta, phi``."""
    c, s = np.cos(theta), np.sin(theta)
    e = np.exp(1j * np.asarray(phi))
    return c * a - np.conj(e) * s * b, e * s * a + c * b


def givens_zero(a: complex, b: complex) -> Rotation2:
    """Return the rotation that moves all weight of ``(a, b)`` onto ``b``.

    Parameters
    ----------
    a, b : complex
        Amplitudes; ``a`` is the one to be zeroed.

    Returns
    -------
    Rotation2
        ``theta`` in ``[0, pi/2]``; ``theta == 0`` (and ``phi == 0``) when
        ``a`` is already zero.
    """
    a, b = complex(a), complex(b)
    if a == 0 and b == 0:
        raise ValueError("cannot zero a component of the zero vector")
    if a == 0:
        return Rotation2(0.0, 0.0)
    theta = math.atan2(abs(a), abs(b))
    phi = wrap_phase(np.angle(b) - np.angle(a)) if b != 0 else wrap_phase(-np.angle(a))
    return Rotation2(theta, phi)


def _check_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")


def is_skew_hermitian(m: np.ndarray, tol: float = SKEW_TOL) -> bool:
    m = np.asarray(m)
    scale = max(np.abs(m).max(initial=0.0), 1.0)
    return bool(np.abs(m + m.conj().T).max(initial=0.0) <= tol * scale)


def expm(m: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Matrix exponential ``exp(t*m)`` by scaling and squaring.

    A fixed-order Taylor kernel is applied to ``t*m / 2**s`` with ``s`` chosen
    so the scaled 1-norm is at most 1/2, then squared back ``s`` times.  No
    structure is assumed; see :func:`expm_skew` for the checked unitary case.
    """
    m = np.asarray(m, dtype=complex)
    _check_square(m)
    a = t * m
    norm = np.abs(a).sum(axis=0).max(initial=0.0)
    s = 0 if norm <= _SCALED_NORM else int(math.ceil(math.log2(norm / _SCALED_NORM)))
    a = a / (2.0**s)
    n = m.shape[0]
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, _TAYLOR_ORDER + 1):
        term = term @ a / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def expm_skew(m: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Unitary ``exp(t*m)`` for a skew-Hermitian generator ``m``.

    Raises
    ------
    ValueError
        If ``m`` is not square.
    NotSkewHermitianError
        If ``||m + m^H|| > 1e-12 ||m||``.
    """
    m = np.asarray(m, dtype=complex)
    _check_square(m)
    if not is_skew_hermitian(m):
        resid = np.abs(m + m.conj().T).max()
        raise NotSkewHermitianError(f"generator is not skew-Hermitian (|M + M^H|max = {resid:.3e})")
    u = expm(m, t)
    err = np.abs(u.conj().T @ u - np.eye(m.shape[0])).max(initial=0.0)
    if err > UNITARY_TOL:
        raise ArithmeticError(f"exponential lost unitarity: {err:.3e}")
    return u


def _as_real_rows(vecs: Sequence[np.ndarray]) -> np.ndarray:
    flat = [np.asarray(v, dtype=complex).ravel() for v in vecs]
    shapes = {f.shape for f in flat}
    if len(shapes) > 1:
        raise ValueError("all inputs must have the same shape")
    return np.array([np.concatenate([f.real, f.imag]) for f in flat])


def orthonormal_rank(vecs: Sequence[np.ndarray], tol: float = RANK_TOL):
    """Dimension of the real span of ``vecs`` under ``Re tr(X^H Y)``.

    Returns ``(rank, basis)`` where ``basis`` is a list of arrays with the
    input shape, orthonormal in the same inner product.  Singular values
    below ``tol`` times the largest one are treated as zero.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if len(vecs) == 0:
        return 0, []
    shape = np.asarray(vecs[0]).shape
    rows = _as_real_rows(vecs)
    _, sv, vt = np.linalg.svd(rows, full_matrices=False)
    if sv.size == 0 or sv[0] == 0:
        return 0, []
    rank = int(np.count_nonzero(sv > tol * sv[0]))
    half = rows.shape[1] // 2
    basis = [(vt[k, :half] + 1j * vt[k, half:]).reshape(shape) for k in range(rank)]
    return rank, basis


def as_state(x, dim: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("a state must be a non-empty 1-D array")
    if dim is not None and v.size != dim:
        raise ValueError(f"state has dimension {v.size}, expected {dim}")
    if not np.all(np.isfinite(v)):
        raise ValueError("state has non-finite entries")
    return v


def fidelity(psi, phi) -> float:
    """``|<phi|psi>|^2`` for unit vectors; insensitive to global phase."""
    psi, phi = as_state(psi), as_state(phi)
    if psi.shape != phi.shape:
        raise ValueError(f"dimension mismatch: {psi.size} vs {phi.size}")
    for v in (psi, phi):
        if abs(np.linalg.norm(v) - 1.0) > UNIT_NORM_TOL:
            raise ValueError("fidelity expects unit-norm states")
    return float(min(1.0, abs(np.vdot(phi, psi)) ** 2))
