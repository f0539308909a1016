"""Monte Carlo versus exact Haar moments.

Every closed-form moment used by the bound formulas is re-estimated by
simulation and reported with its z-score: the first two moments of
tr(chi P) for random colorings (both parities of N), the fixed-coloring
second moment against random projections, and the degree-4 entry moments
of a Haar unitary.
"""

from qdlab.randmat import moment_gates

TRIALS = 30_000

for n in (4, 5):
    print(f"=== N = {n} ({'even' if n % 2 == 0 else 'odd'}), {TRIALS} trials ===")
    for g in moment_gates(n, TRIALS, seed=(2027, n)):
        status = "ok" if g.passes(4.0) else "OUTSIDE 4 SE"
        print(f"  {g.name:<22} param={g.param}  exact={g.exact:+.6f}  "
              f"mc={g.estimate:+.6f}  z={g.z:+.2f}  {status}")
    print()
