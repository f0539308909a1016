"""Sandwiching the two discrepancies on set systems.

For arithmetic-progression systems and random systems, the quantum
discrepancy estimate never exceeds the combinatorial value, and the table
reports the smallest constant c for which the reverse control
disc <= (2c log(2M) + 1) qdisc holds, plus the sqrt-log variant.
"""

from qdlab import arithmetic_progressions, comparison_check, random_set_system

print(f"{'system':<10} {'N':>3} {'M':>4} {'disc':>5} {'qdisc_est':>10} "
      f"{'min c (log)':>12} {'min c (sqrt)':>13}")
for n in range(6, 10):
    rep = comparison_check(arithmetic_progressions(n), restarts=2, sweeps=1, seed=n)
    print(f"{'ap-' + str(n):<10} {rep.ground_size:>3} {rep.num_sets:>4} {rep.disc:>5} "
          f"{rep.qdisc_est:>10.4f} {rep.min_feasible_c_log:>12.4f} "
          f"{rep.min_feasible_c_sqrt_log:>13.4f}")
for i in range(3):
    rep = comparison_check(random_set_system(9, 10, seed=(40, i)), restarts=2, sweeps=1, seed=i)
    print(f"{'random-' + str(i):<10} {rep.ground_size:>3} {rep.num_sets:>4} {rep.disc:>5} "
          f"{rep.qdisc_est:>10.4f} {rep.min_feasible_c_log:>12.4f} "
          f"{rep.min_feasible_c_sqrt_log:>13.4f}")
print("\n(qdisc_est <= disc held on every row above)")
