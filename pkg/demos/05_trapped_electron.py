"""Eigenstates move, superpositions do not: the trapped electron.

The three transitions form a cycle in the transfer graph.  The pulses that
carry |000> to |111> carry |111> back to |000> at the same time, so an equal
superposition of the two is left where it was.
"""

import math

from fincon.evolution import simulate
from fincon.graph import fct_verdict
from fincon.models import SystemModel, basis_state, build_operators, canonical_index, electron_ket
from fincon.pulses import Pulse, PulseSequence

model = SystemModel("SpinTwoOscillators", n_max=1, l_max=1, guard=0)
ops = build_operators(model)
v = fct_verdict(model, ops)
labels = model.basis()
print("verdict:", v.kind.value, "cycle", [f"{s.n}{s.l}{s.spin.symbol}" for s in (labels[i] for i in v.cycle)])

ix = lambda k: canonical_index(model, electron_ket(k))  # noqa: E731
ket = lambda k: basis_state(model, electron_ket(k))  # noqa: E731
seq = PulseSequence(
    (
        Pulse("s", (ix("000"), ix("001")), math.pi),
        Pulse("sa", (ix("001"), ix("010")), math.pi),
        Pulse("sc", (ix("010"), ix("111")), math.pi),
    )
)
print("|000> -> |111>:", simulate(ket("000"), seq, ops, target=ket("111")).fidelity_to_target)
print("|111> -> |000>:", simulate(ket("111"), seq, ops, target=ket("000")).fidelity_to_target)
sup = (ket("000") + ket("111")) / math.sqrt(2)
print("superposition, fidelity to |000>:", simulate(sup, seq, ops, target=ket("000")).fidelity_to_target)
