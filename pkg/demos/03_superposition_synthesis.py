"""Preparing a superposition on a trapped ion through the ground state.

Sweeps (|up,3> + |down,2>)/sqrt(2) down to |down,0>, prints the pulses, then
runs the time-reversed sequence from the ground state and checks that the
superposition comes back.  Finishes with a random-to-random transfer.
"""

import math

import numpy as np

from fincon.evolution import simulate
from fincon.graph import fct_verdict
from fincon.models import Spin, SpinHO, SystemModel, basis_state, build_operators
from fincon.synthesis import invert, sweep_to_ground, transfer

model = SystemModel("SpinOscillator", eta=0.1, n_max=6, guard=4)
ops = build_operators(model)
verdict = fct_verdict(model, ops)
labels = model.basis()

x = (basis_state(model, SpinHO(Spin.UP, 3)) + basis_state(model, SpinHO(Spin.DOWN, 2))) / math.sqrt(2)
seq = sweep_to_ground(x, verdict, ops, model.guard_indices())
print(f"sweep to ground: {len(seq)} pulses")
for p in seq:
    i, j = p.target_edge
    print(f"  {p.op_id:8s} {labels[i].spin.symbol}{labels[i].n} <-> {labels[j].spin.symbol}{labels[j].n}"
          f"  theta/pi = {p.theta / math.pi:.4f}  phi = {p.phi:+.4f}")

ground = basis_state(model, SpinHO(Spin.DOWN, 0))
rep = simulate(ground, invert(seq), ops, target=x, guard=model.guard_indices())
print(f"prepared from ground: fidelity {rep.fidelity_to_target:.15f}, guard leakage {rep.leakage_guard:.1e}")

rng = np.random.default_rng(3)
a, b = (rng.normal(size=model.dim) + 1j * rng.normal(size=model.dim) for _ in range(2))
a[model.guard_indices()] = b[model.guard_indices()] = 0
a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
seq = transfer(a, b, verdict, ops, model.guard_indices())
rep = simulate(a, seq, ops, target=b)
print(f"dense random transfer: {len(seq)} pulses, fidelity {rep.fidelity_to_target:.15f}")
