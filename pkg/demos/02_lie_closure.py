"""Finite versus infinite Lie closures on truncated operators.

The driven oscillator closes on a four-dimensional algebra.  The Lamb-Dicke
generators keep producing new directions however far we go, which a finite
truncation can only show as "not saturated at max_dim".
"""

import numpy as np

from fincon.lie import closure, j_embed, verify_lemma
from fincon.models import SystemModel, annihilation, build_operators

m = SystemModel("HarmonicOscillator", n_max=35, guard=4)
ops = build_operators(m)
r = closure([op.matrix for op in ops], interior=30, ids=[op.id for op in ops])
print(f"oscillator {{A, B}}: dimension {r.dimension_found}, saturated={r.saturated}, depth {r.depth}")

size, eta = 40, 0.1
# interleave the two halves so the leading window covers low levels of both
perm = np.ravel(np.column_stack([np.arange(size), size + np.arange(size)]))
gens = [g[np.ix_(perm, perm)] for g in (j_embed(1j * np.eye(size)), eta * j_embed(annihilation(size)))]
for cap in (8, 14, 20):
    r = closure(gens, max_dim=cap, interior=50)
    print(f"Lamb-Dicke pair, max_dim {cap:2d}: found {r.dimension_found}, saturated={r.saturated}")

rep = verify_lemma(annihilation(24), p_max=4)
print("bracket identities:", "hold" if rep.passed else "FAIL", f"(max residual {rep.max_residual:.1e})")
for k, v in rep.residuals.items():
    print(f"  {k:12s} {v:.1e}")
