"""System families, basis orderings and truncated control operators.

Five families are supported:

``HarmonicOscillator``
    Resonantly driven oscillator; drift ``A`` and position coupling ``B``.
``SpinOscillator``
    Two-level ion in a trap; carrier, red and blue sideband operators.
``NLevelOscillator``
    ``N``-level ion with ``N-1`` internal carriers and one ladder field.
``SpinTwoOscillators``
    Trapped electron: spin, spin-axial and spin-cyclotron transitions.
``BlockExample``
    The two block-rotation generators ``A`` and ``B`` on a bare chain.

Every sideband matrix element comes from :func:`coupling`, which carries the
full Debye-Waller factor ``exp(-eta**2/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import NamedTuple, Union

import numpy as np

__all__ = [
    "Family",
    "Spin",
    "HO",
    "SpinHO",
    "NLevelHO",
    "Electron",
    "Site",
    "BasisState",
    "SystemModel",
    "ControlOperator",
    "DEFAULT_SCHEMES",
    "canonical_index",
    "basis_state",
    "electron_ket",
    "laguerre",
    "coupling",
    "annihilation",
    "build_operators",
    "field_constants",
]


class Family(str, Enum):
    HARMONIC_OSCILLATOR = "HarmonicOscillator"
    SPIN_OSCILLATOR = "SpinOscillator"
    NLEVEL_OSCILLATOR = "NLevelOscillator"
    SPIN_TWO_OSCILLATORS = "SpinTwoOscillators"
    BLOCK_EXAMPLE = "BlockExample"


class Spin(IntEnum):
    DOWN = 0
    UP = 1

    @property
    def symbol(self) -> str:
        return "↓" if self is Spin.DOWN else "↑"


class HO(NamedTuple):
    n: int


class SpinHO(NamedTuple):
    spin: Spin
    n: int


class NLevelHO(NamedTuple):
    k: int  # internal level, 1-based
    n: int


class Electron(NamedTuple):
    n: int  # cyclotron
    l: int  # axial
    spin: Spin


class Site(NamedTuple):
    i: int  # 0-based position on the bare chain


BasisState = Union[HO, SpinHO, NLevelHO, Electron, Site]

_LABEL_TYPE = {
    Family.HARMONIC_OSCILLATOR: HO,
    Family.SPIN_OSCILLATOR: SpinHO,
    Family.NLEVEL_OSCILLATOR: NLevelHO,
    Family.SPIN_TWO_OSCILLATORS: Electron,
    Family.BLOCK_EXAMPLE: Site,
}

DEFAULT_SCHEMES = {
    Family.HARMONIC_OSCILLATOR: "drive",
    Family.SPIN_OSCILLATOR: "carrier+red",
    Family.NLEVEL_OSCILLATOR: "scheme-a",
    Family.SPIN_TWO_OSCILLATORS: "s+sa+sc",
    Family.BLOCK_EXAMPLE: "block",
}

_SCHEMES = {
    Family.HARMONIC_OSCILLATOR: ("drive",),
    Family.SPIN_OSCILLATOR: ("carrier+red", "red+blue"),
    Family.NLEVEL_OSCILLATOR: ("scheme-a", "scheme-b"),
    Family.SPIN_TWO_OSCILLATORS: ("s+sa+sc",),
    Family.BLOCK_EXAMPLE: ("block",),
}

_DEFAULT_LEVELS = {
    Family.HARMONIC_OSCILLATOR: 1,
    Family.SPIN_OSCILLATOR: 2,
    Family.NLEVEL_OSCILLATOR: 3,
    Family.SPIN_TWO_OSCILLATORS: 2,
    Family.BLOCK_EXAMPLE: 1,
}

DRIFT_FREQ_NAMES = ("omega_m", "omega_0", "omega_s", "omega_c_prime", "omega_z")


@dataclass(frozen=True)
class SystemModel:
    """Parameters of one truncated model.

    The oscillator is kept on number states ``0..n_max`` plus ``guard`` extra
    levels; operators act on the full ``n_max + guard + 1`` levels and any
    weight found above ``n_max`` is reported as leakage.  For the trapped
    electron ``n_max`` bounds the cyclotron and ``l_max`` the axial mode.
    """

    family: Family
    scheme: str | None = None
    eta: float = 0.1
    n_max: int = 4
    guard: int = 4
    levels: int | None = None
    mu: float = 1.0
    l_max: int | None = None
    drift_freqs: dict = field(default_factory=lambda: {k: 1.0 for k in DRIFT_FREQ_NAMES})

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        scheme = DEFAULT_SCHEMES[fam] if self.scheme is None else self.scheme
        if scheme not in _SCHEMES[fam]:
            raise ValueError(f"unknown scheme {scheme!r} for {fam.value}; expected one of {_SCHEMES[fam]}")
        object.__setattr__(self, "scheme", scheme)
        levels = _DEFAULT_LEVELS[fam] if self.levels is None else int(self.levels)
        if fam is Family.NLEVEL_OSCILLATOR:
            if levels < 3:
                raise ValueError("NLevelOscillator needs levels >= 3")
        elif levels != _DEFAULT_LEVELS[fam]:
            raise ValueError(f"{fam.value} has exactly {_DEFAULT_LEVELS[fam]} internal level(s)")
        object.__setattr__(self, "levels", levels)
        if fam is Family.SPIN_TWO_OSCILLATORS:
            object.__setattr__(self, "l_max", self.n_max if self.l_max is None else int(self.l_max))
        elif self.l_max is not None:
            raise ValueError("l_max only applies to SpinTwoOscillators")
        if not (self.eta >= 0 and math.isfinite(self.eta)):
            raise ValueError("eta must be finite and >= 0")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.guard < 0:
            raise ValueError("guard must be >= 0")
        if fam is Family.SPIN_TWO_OSCILLATORS and self.l_max < 1:
            raise ValueError("l_max must be >= 1")
        freqs = {k: 1.0 for k in DRIFT_FREQ_NAMES}
        freqs.update(self.drift_freqs or {})
        object.__setattr__(self, "drift_freqs", freqs)

    @property
    def n_size(self) -> int:
        return self.n_max + self.guard + 1

    @property
    def l_size(self) -> int:
        return self.l_max + self.guard + 1

    @property
    def dim(self) -> int:
        d = self.levels * self.n_size
        if self.family is Family.SPIN_TWO_OSCILLATORS:
            d *= self.l_size
        return d

    def basis(self) -> list:
        """All basis labels in canonical order."""
        out = [None] * self.dim
        for s in self._labels():
            out[canonical_index(self, s)] = s
        return out

    def _labels(self):
        fam = self.family
        if fam is Family.HARMONIC_OSCILLATOR:
            return [HO(n) for n in range(self.n_size)]
        if fam is Family.BLOCK_EXAMPLE:
            return [Site(i) for i in range(self.n_size)]
        if fam is Family.SPIN_OSCILLATOR:
            return [SpinHO(s, n) for n in range(self.n_size) for s in Spin]
        if fam is Family.NLEVEL_OSCILLATOR:
            return [NLevelHO(k, n) for n in range(self.n_size) for k in range(1, self.levels + 1)]
        return [Electron(n, l, s) for l in range(self.l_size) for n in range(self.n_size) for s in Spin]

    def in_guard(self, s) -> bool:
        if isinstance(s, (int, np.integer)):
            s = self.basis()[s]
        if isinstance(s, Site):
            return s.i > self.n_max
        if isinstance(s, Electron):
            return s.n > self.n_max or s.l > self.l_max
        return s.n > self.n_max

    def guard_indices(self) -> np.ndarray:
        return np.array([i for i, s in enumerate(self.basis()) if self.in_guard(s)], dtype=int)

    def interior_indices(self) -> np.ndarray:
        """Indices of the non-guard basis states, ascending."""
        return np.array([i for i, s in enumerate(self.basis()) if not self.in_guard(s)], dtype=int)

    def to_dict(self) -> dict:
        d = {
            "family": self.family.value,
            "scheme": self.scheme,
            "eta": float(self.eta),
            "n_max": int(self.n_max),
            "guard": int(self.guard),
            "levels": int(self.levels),
            "mu": float(self.mu),
        }
        if self.l_max is not None:
            d["l_max"] = int(self.l_max)
        d["drift_freqs"] = {k: float(self.drift_freqs[k]) for k in DRIFT_FREQ_NAMES}
        d["dim"] = self.dim
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SystemModel":
        known = {"family", "scheme", "eta", "n_max", "guard", "levels", "mu", "l_max", "drift_freqs"}
        extra = set(d) - known - {"dim"}
        if extra:
            raise ValueError(f"unknown system fields: {sorted(extra)}")
        if "family" not in d:
            raise ValueError("system spec needs a 'family'")
        kwargs = {k: d[k] for k in known if k in d and d[k] is not None}
        return cls(**kwargs)


def field_constants(model: SystemModel) -> dict:
    """Field-to-control conversion factors for the carrier and red fields.

    The Debye-Waller factor is already inside :func:`coupling`, so only the
    ``0.25*mu`` and ``0.25*eta*mu`` scales are reported.
    """
    return {"c1": 0.25 * model.mu, "c2": 0.25 * model.eta * model.mu}


def canonical_index(model: SystemModel, s) -> int:
    """Position of basis label ``s`` in the model's ordering.

    SpinOscillator interleaves spins, ``|↓,0>, |↑,0>, |↓,1>, ...``;
    NLevelOscillator is oscillator-major with the internal level inside;
    SpinTwoOscillators runs axial ``l`` slowest, then cyclotron ``n``, then spin.
    """
    fam = model.family
    want = _LABEL_TYPE[fam]
    if not isinstance(s, want):
        raise TypeError(f"{fam.value} expects {want.__name__} labels, got {s!r}")
    if fam in (Family.HARMONIC_OSCILLATOR, Family.BLOCK_EXAMPLE):
        (v,) = s
        if not 0 <= v < model.n_size:
            raise IndexError(f"{s!r} outside truncation 0..{model.n_size - 1}")
        return int(v)
    if fam is Family.SPIN_OSCILLATOR:
        spin, n = Spin(s.spin), s.n
        if not 0 <= n < model.n_size:
            raise IndexError(f"{s!r} outside truncation")
        return 2 * n + int(spin)
    if fam is Family.NLEVEL_OSCILLATOR:
        if not (1 <= s.k <= model.levels and 0 <= s.n < model.n_size):
            raise IndexError(f"{s!r} outside truncation")
        return s.n * model.levels + (s.k - 1)
    if not (0 <= s.n < model.n_size and 0 <= s.l < model.l_size):
        raise IndexError(f"{s!r} outside truncation")
    return (s.l * model.n_size + s.n) * 2 + int(Spin(s.spin))


def basis_state(model: SystemModel, s) -> np.ndarray:
    v = np.zeros(model.dim, dtype=complex)
    v[canonical_index(model, s)] = 1.0
    return v


def electron_ket(ket: str) -> Electron:
    """Parse a three-digit ket ``"nlj"``; ``j = 0`` is spin-up, ``j = 1`` spin-down.

    With this reading the spin pulse takes ``|000>`` to ``|001>``, the
    spin-axial pulse ``|001>`` to ``|010>`` and the spin-cyclotron pulse
    ``|010>`` to ``|111>``.
    """
    if len(ket) != 3 or not ket.isdigit() or ket[2] not in "01":
        raise ValueError(f"bad electron ket {ket!r}")
    return Electron(int(ket[0]), int(ket[1]), Spin.UP if ket[2] == "0" else Spin.DOWN)


def laguerre(n: int, alpha: int, x: float) -> float:
    """Associated Laguerre polynomial ``L_n^alpha(x)`` by forward recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    prev, cur = 1.0, 1.0 + alpha - x
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def coupling(n_from: int, n_to: int, eta: float) -> complex:
    """``<n_to| exp(i eta (a + a^dag)) |n_from>`` in closed form.

    ``exp(-eta^2/2) sqrt(n_<!/n_>!) (i eta)^|d| L_{n_<}^{|d|}(eta^2)`` with
    ``d = n_to - n_from``.
    """
    if n_from < 0 or n_to < 0:
        raise ValueError("number states are non-negative")
    lo, hi = min(n_from, n_to), max(n_from, n_to)
    d = hi - lo
    ratio = math.exp(0.5 * (math.lgamma(lo + 1) - math.lgamma(hi + 1)))
    return complex(math.exp(-0.5 * eta * eta) * ratio * (1j * eta) ** d * laguerre(lo, d, eta * eta))


def annihilation(size: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, size, dtype=float)), 1).astype(complex)


@dataclass(frozen=True, eq=False)
class ControlOperator:
    """Truncated skew-Hermitian control generator with its edge list.

    ``edges`` holds ``(i, j, matrix[i, j])`` with ``i < j`` for every
    structurally coupled pair, in ascending ``(i, j)`` order.
    """

    id: str
    matrix: np.ndarray
    edges: tuple

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def relabel(self, new_id: str) -> "ControlOperator":
        return ControlOperator(new_id, self.matrix, self.edges)

    def scaled(self, factor: float) -> "ControlOperator":
        return _operator(self.id, self.dim, [(i, j, g * factor) for i, j, g in self.edges])


def _operator(op_id: str, dim: int, upper) -> ControlOperator:
    m = np.zeros((dim, dim), dtype=complex)
    edges = []
    for i, j, g in upper:
        if i == j:
            raise ValueError("diagonal entries are not edges")
        if g == 0:
            continue
        if i > j:
            i, j, g = j, i, -np.conj(g)
        m[i, j] = g
        m[j, i] = -np.conj(g)
        edges.append((int(i), int(j), complex(g)))
    edges.sort(key=lambda e: (e[0], e[1]))
    m.setflags(write=False)
    return ControlOperator(op_id, m, tuple(edges))


def _sideband(model: SystemModel, pairs, op_id: str) -> ControlOperator:
    # pairs: (index of |↑,n'>, index of |↓,n>, n, n'); element i * conj(<n'|D|n>)
    upper = []
    for up_idx, down_idx, n, n2 in pairs:
        upper.append((up_idx, down_idx, 1j * np.conj(coupling(n, n2, model.eta))))
    return _operator(op_id, model.dim, upper)


def _spin_oscillator(model: SystemModel):
    idx = lambda s, n: canonical_index(model, SpinHO(s, n))  # noqa: E731
    N = model.n_size
    carrier = _sideband(model, [(idx(Spin.UP, n), idx(Spin.DOWN, n), n, n) for n in range(N)], "carrier")
    red = _sideband(model, [(idx(Spin.UP, n - 1), idx(Spin.DOWN, n), n, n - 1) for n in range(1, N)], "red")
    blue = _sideband(model, [(idx(Spin.UP, n + 1), idx(Spin.DOWN, n), n, n + 1) for n in range(N - 1)], "blue")
    return [carrier, red] if model.scheme == "carrier+red" else [red, blue]


def _nlevel(model: SystemModel):
    N, lev = model.n_size, model.levels
    idx = lambda k, n: canonical_index(model, NLevelHO(k, n))  # noqa: E731
    ops = []
    for k in range(1, lev):
        upper = [(idx(k, n), idx(k + 1, n), 1j) for n in range(N)]
        ops.append(_operator(f"c{k}", model.dim, upper))
    start = 1 if model.scheme == "scheme-a" else 2
    pairs = [(idx(lev, n - 1), idx(start, n), n, n - 1) for n in range(1, N)]
    ops.append(_sideband(model, pairs, "r"))
    return ops


def _electron(model: SystemModel):
    N, L = model.n_size, model.l_size
    idx = lambda n, l, s: canonical_index(model, Electron(n, l, s))  # noqa: E731
    d, u = Spin.DOWN, Spin.UP
    s_edges = [(idx(n, l, d), idx(n, l, u), 1j) for l in range(L) for n in range(N)]
    sa_edges = [
        (idx(n, l, d), idx(n, l + 1, u), 1j * math.sqrt(l + 1)) for l in range(L - 1) for n in range(N)
    ]
    sc_edges = [(idx(n - 1, l, u), idx(n, l, d), 1j * math.sqrt(n)) for l in range(L) for n in range(1, N)]
    return [
        _operator("s", model.dim, s_edges),
        _operator("sa", model.dim, sa_edges),
        _operator("sc", model.dim, sc_edges),
    ]


def _harmonic(model: SystemModel):
    N = model.n_size
    w = model.drift_freqs["omega_m"]
    a_mat = np.diag(-1j * w * (np.arange(N) + 0.5))
    a_mat.setflags(write=False)
    drift = ControlOperator("A", a_mat, ())
    # x = (a + a^dag)/sqrt(2): <n-1|x|n> = sqrt(n/2); B = -i x
    upper = [(n - 1, n, -1j * math.sqrt(n / 2.0)) for n in range(1, N)]
    return [drift, _operator("B", model.dim, upper)]


def _block(model: SystemModel):
    dim = model.dim
    a_edges = [(i, i + 1, 1.0) for i in range(0, dim - 1, 2)]
    b_edges = [(i, i + 1, 1.0) for i in range(1, dim - 1, 2)]
    return [_operator("A", dim, a_edges), _operator("B", dim, b_edges)]


_BUILDERS = {
    Family.HARMONIC_OSCILLATOR: _harmonic,
    Family.SPIN_OSCILLATOR: _spin_oscillator,
    Family.NLEVEL_OSCILLATOR: _nlevel,
    Family.SPIN_TWO_OSCILLATORS: _electron,
    Family.BLOCK_EXAMPLE: _block,
}


def build_operators(model: SystemModel, scheme: str | None = None) -> list[ControlOperator]:
    """Control operators for ``model`` on its full (guarded) truncation.

    ``scheme`` overrides ``model.scheme`` when given.
    """
    if scheme is not None and scheme != model.scheme:
        model = SystemModel(**{**_fields(model), "scheme": scheme})
    if model.n_size < 2:
        raise ValueError("truncation must keep at least 2 oscillator levels")
    return _BUILDERS[model.family](model)


def _fields(model: SystemModel) -> dict:
    return {
        "family": model.family,
        "scheme": model.scheme,
        "eta": model.eta,
        "n_max": model.n_max,
        "guard": model.guard,
        "levels": model.levels,
        "mu": model.mu,
        "l_max": model.l_max,
        "drift_freqs": dict(model.drift_freqs),
    }
