"""Two independent routes to the same coefficients.

The loop engine works for general beta. At beta = 2 and beta = 4 the density
also satisfies a linear ODE whose large-x series gives the h_j by a fixed map.
Here both routes are run and compared entry by entry.
"""

from gmpy2 import mpq

from circjacobi import loop_engine as le
from circjacobi import ode_engine as oe

table = le.compute_table(6)

d = oe.d_series_beta2(8)
print("beta = 2 recurrence, first terms:")
for n in range(1, 5):
    print(f"  d_{n} = {d[n]}")

for label, values, ref, kappa, offset in [
    ("beta = 2, h", oe.map_to_h(d), table.h, 1, 0),
    ("beta = 4, h", oe.map_to_h(oe.g_series_beta4(8)), table.h, 2, 0),
    ("beta = 4, h~", oe.map_to_h(oe.g_tilde_series_beta4(8), tilde=True), table.h_tilde, 2, 1),
    ("beta = 1, h", oe.map_to_h(oe.g_beta1(8)), table.h, mpq(1, 2), 0),
]:
    rows = oe.compare_with_loop(values, ref, kappa, offset=offset)
    print(f"{label:14s} j = {rows[0]['j']}..{rows[-1]['j']}: {'agree' if all(r['pass'] for r in rows) else 'DISAGREE'}")

# The alternative seed g~_2 = -q does not reproduce the loop engine at first order.
bad = oe.compare_with_loop(oe.map_to_h(oe.g_tilde_series_beta4(8, seeds=oe.G_TILDE_UNCORRECTED), tilde=True),
                           table.h_tilde, 2, offset=1)
print("uncorrected g~ seed, j = 1:", "agree" if bad[0]["pass"] else "disagree")
