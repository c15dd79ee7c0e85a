"""Palindromic coefficient polynomials and their zeros.

Extracts the coefficients of p, p^2, ..., p^5 in h_5 at q = 0 as polynomials in
u = 1/kappa, classifies them, locates their zeros on the unit circle and checks
that successive zero sets interlace.
"""

import mpmath as mp

from circjacobi import loop_engine as le
from circjacobi import polyprops as pp

table = le.compute_table(6)
reports = []
for m in range(1, 6):
    P = pp.extract_upoly(table, 5, "p", m)
    r = pp.zeros_on_unit_circle(P)
    reports.append(r)
    worst = max(r.modulus_deviation)
    print(f"p^{m}: {P}")
    print(f"      {pp.classify_palindrome(P)}, max ||u| - 1| = {mp.nstr(worst, 3)}")

print("\ninterlacing (half-circle):", pp.check_interlacing(reports))
print("interlacing (full-circle):", pp.check_interlacing(reports, mode="full-circle"))

print("\nstructure function coefficients p_j(u):")
for j, coeffs in enumerate(le.structure_function_series(table, 5)):
    if j:
        P = pp.UPoly.from_list(coeffs)
        print(f"  p_{j}(u) = {P}   shape ok: {pp.structure_shape_ok(P, j)}")
