"""Bulk density near the singularity and its Fourier transform.

Evaluates the beta = 2 and beta = 4 densities to 40 digits, checks the
beta = 2 ODE residual, and compares the numerical Fourier transform with the
triangle law at p = 1 and with the small-tau series at p = 2.
"""

import mpmath as mp

from circjacobi import loop_engine as le
from circjacobi import numeric_oracle as no
from circjacobi import ode_engine as oe

ctx = no.PrecisionContext(digits=40)
mp.mp.dps = 40

print("   x     beta=2, p=1            beta=4, p=1")
for x in ("0.25", "0.5", "1", "2", "4"):
    r2 = no.density_beta2(mp.mpf(x), 1, 0, ctx)
    r4 = no.density_beta4_q0(mp.mpf(x), 1, ctx)
    print(f"{x:>5}  {mp.nstr(r2, 18):>22} {mp.nstr(r4, 18):>22}")

xs = [mp.mpf(k) / 2 for k in range(1, 21)]
samples = [(x, no.rescaled_derivatives_beta2(x, 2, 0, ctx)) for x in xs]
print("\nODE residual, p = 2, x in [0.5, 10]:", mp.nstr(oe.ode_residual_beta2(samples, 2, 0), 3))

print("\nFourier transform at p = 1 against -1 + tau / (2 pi):")
for k in (1, 2, 3):
    tau = k * mp.pi / 2
    r = no.fourier_transform(tau, 1, ctx=ctx)
    print(f"  tau = {k} pi/2: {mp.nstr(r.value, 20)}  error {mp.nstr(abs(r.value + 1 - tau / (2 * mp.pi)), 3)}")
print("screening integral, p = 1:", mp.nstr(no.screening_integral(1, ctx=ctx).value, 20))

table = le.compute_table(5)
tau = mp.mpf(1) / 2
series = mp.mpf(0)
for j in range(6):
    for part in (table.h[j], table.h_tilde[j]):
        c = part.at_kappa(1).evaluate(2, 0)
        series += mp.mpf(int(c.re.numerator)) / int(c.re.denominator) * (tau / (2 * mp.pi)) ** j
r = no.fourier_transform(tau, 2, ctx=ctx)
print(f"\np = 2, tau = 1/2: numeric {mp.nstr(r.value, 20)}, series {mp.nstr(series, 20)}, "
      f"bound {mp.nstr(r.error_estimate, 3)}")
