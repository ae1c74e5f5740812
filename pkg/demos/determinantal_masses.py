"""Special tensors from convex potentials and their determinantal masses.

The cofactor of a convex potential's space-time Hessian is a positive
divergence-free tensor.  Degree-1 homogeneous potentials concentrate
(det S)^(1/d) into a point mass whose weight is the area enclosed by the
gradient image, and that weight scales by exactly (1 + alpha t0) under the
projective map.
"""

import numpy as np

from divfree.potentials import (cofactor_hessian, determinantal_mass,
                                exp_cosh_potential, norm_cone_potential,
                                quartic_potential, rigidity_form,
                                transform_potential)
from divfree.projective import ProjectiveMap, determinantal_mass_scale
from divfree.tensor_field import GridSpec, discrete_divergence, measure_norm

print(__doc__)

print("1. Cofactor-Hessian tensors")
print("-" * 60)
grid = GridSpec(1, (0.2, 1.2), (-1.0, 1.0), 96, 96)
for theta in (exp_cosh_potential(), quartic_potential()):
    S = cofactor_hessian(theta, grid)
    res = measure_norm(discrete_divergence(S), grid)
    print(f"  {theta.name:10s}: divergence L1 = {res:.2e} "
          f"(zero up to the stencil error)")

print("\n2. The rigidity form is the cofactor of a cone potential")
print("-" * 60)
off_grid = GridSpec(1, (1.0, 2.0), (0.5, 1.5), 24, 24)
S_rig = rigidity_form(lambda w: np.ones(w.shape[:-1]), (0.0, 0.0), 1)(off_grid.points())
S_cone = cofactor_hessian(norm_cone_potential(1.0).theta, off_grid)
print(f"  pointwise gap between z(x)z/|z|^3 and cof D^2 |z|: "
      f"{np.abs(S_rig - S_cone.values).max():.2e}")

print("\n3. Determinantal masses and their projective scaling")
print("-" * 60)
dm = determinantal_mass(norm_cone_potential(1.0).theta)
print(f"  Dm(|z|)   = {dm:.8f}   (pi: the gradient image is the unit circle)")
dm2 = determinantal_mass(norm_cone_potential(2.0).theta)
print(f"  Dm(2|z|)  = {dm2:.8f}   (4 pi: a circle of radius 2)")

print("\n  scaling under s = t/(1+t a), y = x/(1+t a):")
t0 = 1.0
hom = norm_cone_potential(1.0, p=(t0, 0.0))
for alpha in (0.5, 1.0, 2.0):
    pm = ProjectiveMap(alpha)
    theta_bar = transform_potential(hom.theta, pm)
    s0 = t0 / (1 + alpha * t0)
    got = determinantal_mass(theta_bar, p=(s0, 0.0), radius=0.05)
    want = determinantal_mass_scale(np.pi, t0, pm)
    print(f"    alpha = {alpha:3.1f}: Dm(transformed) = {got:.6f}, "
          f"(1 + alpha t0) Dm = {want:.6f}")
