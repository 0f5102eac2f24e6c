"""Which model families are finitely controllable?

Builds each family's control operators on a modest truncation and prints the
verdict together with its certificate or obstruction witness.
"""

from fincon.graph import fct_verdict
from fincon.models import SystemModel, build_operators

cases = [
    ("trapped ion, carrier + red", SystemModel("SpinOscillator", scheme="carrier+red", n_max=4)),
    ("trapped ion, red + blue", SystemModel("SpinOscillator", scheme="red+blue", n_max=4)),
    ("3-level ion, scheme a", SystemModel("NLevelOscillator", levels=3, scheme="scheme-a", n_max=4)),
    ("3-level ion, scheme b", SystemModel("NLevelOscillator", levels=3, scheme="scheme-b", n_max=4)),
    ("trapped electron", SystemModel("SpinTwoOscillators", n_max=1, l_max=1, guard=0)),
    ("driven oscillator", SystemModel("HarmonicOscillator", n_max=6)),
    ("block example", SystemModel("BlockExample", n_max=7, guard=0)),
]

for name, model in cases:
    v = fct_verdict(model, build_operators(model))
    print(f"{name:28s} dim {model.dim:3d}  {v.kind.value}")
    if v.ok:
        chain = " ".join(str(p) for p, _ in v.peel_order[:8])
        print(f"{'':28s} peel order starts {chain} ...")
    elif v.components:
        print(f"{'':28s} components of size {[len(c) for c in v.components]}")
    elif v.cycle:
        labels = model.basis()
        print(f"{'':28s} cycle {[f'{labels[i].n}{labels[i].l}{labels[i].spin.symbol}' for i in v.cycle]}")
    else:
        print(f"{'':28s} operator {v.witness_op} couples vertex {v.witness_vertex} to two others")
