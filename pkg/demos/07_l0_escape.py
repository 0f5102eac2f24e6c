"""Alternating exponentials keep finite support; exp(A+B) does not.

The block generators each rotate disjoint neighbouring pairs.  Products of
their exponentials spread e1 over at most a few sites, while the exponential
of the sum couples the whole chain at once.
"""

import numpy as np

from fincon.evolution import l0_escape_demo

for u, v in [(0.0, 0.0), (1.0, 1.0), (0.3, 2.0)]:
    r = l0_escape_demo(8, u, v, t=1.0)
    print(f"u={u}, v={v}: alternating support {r['alternating_support']}, exp(A+B) support {r['sum_support']}")

r = l0_escape_demo(8)
np.set_printoptions(precision=3, suppress=False, linewidth=120)
print("exp(A+B) e1 magnitudes:", np.abs(r["sum_state"]))
