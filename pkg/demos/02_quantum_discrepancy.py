"""From signed sums to the matrix objective.

Shows that the quantum objective generalizes the combinatorial signed sum
(diagonal colorings against diagonal projections reproduce |chi(S)| exactly),
then estimates the quantum discrepancy of a small set system and of a
genuinely non-commuting random projection system.
"""

import numpy as np

from qdlab import (
    Coloring,
    as_coloring,
    disc_exact,
    evaluate_coloring,
    objective,
    qdisc_estimate,
    random_projection_system,
    random_set_system,
    to_projection_system,
)

system = random_set_system(8, 6, seed=11)
projs = to_projection_system(system)
print("set system on [8]:", system.sets)

signs = Coloring([1, -1, 1, 1, -1, -1, 1, -1])
chi = as_coloring(np.diag(signs.signs.astype(complex)))
print("signed sums:", evaluate_coloring(system, signs))
print("objectives: ", [objective(chi, p).value for p in projs.projections])

disc, witness = disc_exact(system)
est = qdisc_estimate(projs, restarts=4, sweeps=2, seed=0)
print(f"disc(S) = {disc} with witness {''.join('+' if s > 0 else '-' for s in witness.signs)}")
print(f"qdisc estimate = {est.value:.4f} (plus_count {est.plus_count}) <= disc: {est.value <= disc}")

print()
print("=== random projection system (nothing commutes) ===")
psys = random_projection_system(12, 24, seed=5)
est = qdisc_estimate(psys, restarts=2, sweeps=1, seed=1)
scale = np.sqrt(12 + np.log(24))
print(f"N=12, M=24: estimate {est.value:.4f}, estimate/sqrt(N + log M) = {est.value / scale:.4f}")
print(f"trivial bound N = 12 holds: {est.value <= 12}")
