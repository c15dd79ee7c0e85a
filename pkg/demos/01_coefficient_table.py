"""Small-tau coefficients from the loop equations.

Solves the hierarchy to order 5, prints h_j and h~_j as exact polynomials in
(kappa, p, q), and specializes them to the three classical ensembles.
"""

from gmpy2 import mpq

from circjacobi import loop_engine as le

table = le.compute_table(5)

print("Stored values are (2 pi)^j h_j; kappa = beta / 2.\n")
for j in range(6):
    print(f"h_{j}  = {table.h[j]}")
    print(f"h~_{j} = {table.h_tilde[j]}\n")

# Specializing kappa picks out beta = 1, 2, 4.
for beta, kappa in ((1, mpq(1, 2)), (2, 1), (4, 2)):
    print(f"beta = {beta}: h_2 = {table.h[2].at_kappa(kappa)}")

# Duality kappa -> 1/kappa relates the ensembles beta and 4 / beta.
rows = le.verify_duality(table)
print("\nduality:", all(r["h"] and r["h_tilde"] for r in rows))
