"""A resonantly driven oscillator only ever reaches coherent states.

Drives |0> with a weak cosine force, fits a coherent state at every step and
tracks the largest overlap with any excited number state.
"""

from fincon.evolution import drive_oscillator, fit_coherent
from fincon.models import SystemModel

model = SystemModel("HarmonicOscillator", n_max=32, guard=8)
psi, tr = drive_oscillator(0.1, 1200, 0.05, model, trace=True)
for k in range(0, len(tr.times), 200):
    print(
        f"t = {tr.times[k]:5.1f}  <n> = {tr.mean_occupation[k]:6.3f}  "
        f"coherent fidelity = {tr.coherent_fidelity[k]:.12f}  max |<n|psi>|^2 (n>=1) = {tr.max_number_fidelity[k]:.4f}"
    )
fit = fit_coherent(psi)
print(f"final alpha = {fit.alpha:.4f}, fit fidelity {fit.fit_fidelity:.12f}")
print(f"worst number-state overlap over the run: {tr.max_number_fidelity.max():.4f}")
