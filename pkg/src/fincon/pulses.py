"""Pulse records and their JSON form.

A :class:`Pulse` is described at the level of its *target edge*: ``theta``
is the pulse area seen by that edge, so ``theta = pi`` fully exchanges the
two populations.  In the two-level convention of :mod:`fincon.numeric` the
edge is rotated by ``theta / 2``.  Every other edge of the same operator is
driven at the same time; see :func:`fincon.evolution.apply_pulse`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numeric import wrap_phase

__all__ = ["Pulse", "PulseSequence"]


@dataclass(frozen=True)
class Pulse:
    op_id: str
    target_edge: tuple
    theta: float
    phi: float = 0.0
    provenance: str = ""

    def __post_init__(self):
        i, j = (int(v) for v in self.target_edge)
        if i == j:
            raise ValueError("target edge needs two distinct vertices")
        object.__setattr__(self, "target_edge", (min(i, j), max(i, j)))
        theta, phi = float(self.theta), float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise ValueError("pulse angles must be finite")
        if not -1e-12 <= theta <= math.pi + 1e-12:
            raise ValueError(f"theta={theta} outside [0, pi]")
        object.__setattr__(self, "theta", min(max(theta, 0.0), math.pi))
        object.__setattr__(self, "phi", wrap_phase(phi))

    def inverse(self) -> "Pulse":
        note = f"inverse of: {self.provenance}" if self.provenance else "inverse"
        return Pulse(self.op_id, self.target_edge, self.theta, self.phi + math.pi, note)

    def to_dict(self) -> dict:
        return {
            "op": self.op_id,
            "edge": list(self.target_edge),
            "theta": self.theta,
            "phi": self.phi,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Pulse":
        missing = {"op", "edge", "theta"} - set(d)
        if missing:
            raise ValueError(f"pulse is missing {sorted(missing)}")
        edge = d["edge"]
        if len(edge) != 2:
            raise ValueError("pulse edge must have two entries")
        return cls(str(d["op"]), tuple(edge), float(d["theta"]), float(d.get("phi", 0.0)), str(d.get("provenance", "")))


@dataclass(frozen=True)
class PulseSequence:
    pulses: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))

    def __len__(self) -> int:
        return len(self.pulses)

    def __iter__(self):
        return iter(self.pulses)

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        return PulseSequence(self.pulses + other.pulses)

    @property
    def op_ids(self) -> list[str]:
        return [p.op_id for p in self.pulses]

    def check_ops(self, ops) -> None:
        """Raise ``ValueError`` if a pulse names an unknown operator or edge."""
        by_id = {op.id: op for op in ops}
        for k, p in enumerate(self.pulses):
            op = by_id.get(p.op_id)
            if op is None:
                raise ValueError(f"pulse {k}: unknown operator {p.op_id!r}")
            if not any((i, j) == p.target_edge for i, j, _ in op.edges):
                raise ValueError(f"pulse {k}: edge {p.target_edge} is not an edge of {p.op_id!r}")

    def to_dict(self) -> dict:
        return {"pulses": [p.to_dict() for p in self.pulses]}

    @classmethod
    def from_dict(cls, d: dict) -> "PulseSequence":
        if "pulses" not in d:
            raise ValueError("pulse sequence needs a 'pulses' list")
        return cls(tuple(Pulse.from_dict(p) for p in d["pulses"]))
