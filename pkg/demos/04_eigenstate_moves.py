"""Eigenstate moves |down,n> -> |up,n-2> with three pi-pulses.

Shows the red/carrier/red path in and beyond the Lamb-Dicke regime, and the
one place it breaks: at eta = 1 the carrier between |down,1> and |up,1> is
exactly dark because L_1(1) = 0.
"""

import numpy as np

from fincon.evolution import DarkTransitionError, simulate
from fincon.models import Spin, SpinHO, SystemModel, build_operators, canonical_index, coupling
from fincon.synthesis import eigenstate_transfer

for eta in (0.05, 0.5, 1.0):
    model = SystemModel("SpinOscillator", eta=eta, n_max=8)
    ops = build_operators(model)
    eye = np.eye(model.dim)
    for n in range(2, 7):
        src = canonical_index(model, SpinHO(Spin.DOWN, n))
        dst = canonical_index(model, SpinHO(Spin.UP, n - 2))
        try:
            seq = eigenstate_transfer(src, dst, ops)
        except DarkTransitionError as exc:
            print(f"eta={eta:<4} n={n}: {exc}")
            continue
        fid = simulate(eye[src], seq, ops, target=eye[dst]).fidelity_to_target
        print(f"eta={eta:<4} n={n}: {'-'.join(seq.op_ids)}  fidelity {fid:.15f}")

print("carrier coupling at n=1, eta=1:", coupling(1, 1, 1.0))
