"""Mono-atomic gas flows and the dispersive estimate they satisfy.

Solves a compactly supported density bump with the finite-volume scheme,
verifies the conservation structure, shows that the projectively transformed
fields solve the Euler system again (the mono-atomic miracle), and evaluates
the inertia-weighted dispersive bound with its alpha-ladder derivation.
"""

import numpy as np

from divfree.catalog import gas_bump
from divfree.estimates import check_estihp, check_inertia, functional_report
from divfree.euler import (energy_defect_residual, gamma_d,
                           initial_transformed_energy,
                           projective_invariance_residual, solve)
from divfree.tensor_field import GridSpec

print(__doc__)

d = 1
grid = GridSpec(d, (0.0, 0.8), (-4.0, 4.0), 256, 512)
state = gas_bump(grid, amplitude=0.5, radius=1.0)
print(f"gamma = gamma_d = {gamma_d(d)} (mono-atomic in d = {d})")
flow = solve(state, grid)
f = flow.functionals

print("\n1. Conservation structure")
print("-" * 60)
print(f"  mass drift      : {np.abs(f.M - f.M[0]).max():.2e}")
print(f"  energy increase : {max(0.0, np.max(np.diff(f.E))):.2e} (never grows)")
print(f"  extra law       : extra(0) = I(0) = {f.I[0]:.5f}; "
      f"max step increase {max(0.0, np.max(np.diff(f.extra))):.2e}")
t = f.t[1:]
print(f"  pressure bound  : max of p-integral * d t^2 / (2 I(0)) = "
      f"{np.max(f.p_int[1:] * d * t ** 2 / (2 * f.I[0])):.3f} <= 1")

print("\n2. The transformed fields solve the Euler system again")
print("-" * 60)
for n in (128, 256):
    g = GridSpec(d, (0.0, 0.4), (-3.0, 3.0), n // 2, n)
    fl = solve(gas_bump(g, amplitude=0.5, radius=1.0), g, support_margin=3)
    r = projective_invariance_residual(fl, alpha=1.0)
    print(f"  n = {n:4d}: residual L1 per equation " +
          ", ".join(f"{k}={v:.2e}" for k, v in r["norms"].items()))
print("  (halving the mesh roughly halves every residual)")

print("\n3. Away from gamma_d the energy law picks up a source")
print("-" * 60)
for n in (128, 256):
    g = GridSpec(d, (0.0, 0.4), (-4.0, 4.0), n // 2, n)
    fl = solve(gas_bump(g, amplitude=0.5, radius=1.0, gamma=1.4, A=0.5), g,
               support_margin=3)
    r = energy_defect_residual(fl, alpha=0.5)
    print(f"  n = {n:4d}: |defect - predicted source| = {r['mismatch_l1']:.2e}"
          f"  (source itself stays at {r['source_l1']:.3f})")

print("\n4. Dispersive bounds")
print("-" * 60)
r1 = check_estihp(flow)
print(f"  energy form : time-integral of rho^(1/d) p = {r1.lhs:.5f} <= "
      f"c * {r1.rhs_core:.5f}   (implied c = {r1.implied_constant:.3f})")
r2 = check_inertia(flow)
print(f"  inertia form: t-weighted integral         = {r2.lhs:.5f} <= "
      f"c * {r2.rhs_core:.5f}   (implied c = {r2.implied_constant:.3f})")
print("  alpha-ladder toward the inertia bound (E_alpha(0)/alpha^2 -> I(0)):")
for a in (1.0, 4.0, 16.0, 64.0):
    val = initial_transformed_energy(flow.initial_state, grid, a) / a ** 2
    print(f"    alpha = {a:5.0f}: {val:.6f}   (I(0) = {f.I[0]:.6f})")

rep = functional_report("gas-dispersion-demo", flow, [r1, r2])
print(f"\nall inequalities hold: {rep.passed}")
