"""Special divergence-free tensors built from convex space-time potentials.

The cofactor matrix of the Hessian of a convex potential theta(t, x) is a
positive divergence-free tensor.  Degree-1 positively homogeneous potentials
carry a determinantal mass: the area enclosed by the (closed) image curve of
their gradient.  The projective map acts on potentials by

    theta_bar(s, y) = (1 - alpha*s) * theta(s/(1-alpha*s), y/(1-alpha*s))

and commutes with the cofactor construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.spatial import ConvexHull
from shapely.geometry import LinearRing

from .projective import DegenerateMapError, ProjectiveMap
from .tensor_field import GridSpec, SymTensorField

__all__ = [
    "ConvexPotential",
    "HomogeneousPotential",
    "cofactor_matrix",
    "cofactor_hessian",
    "transform_potential",
    "determinantal_mass",
    "rigidity_form",
    "rigidity_form_field",
    "quadratic_potential",
    "exp_cosh_potential",
    "quartic_potential",
    "norm_cone_potential",
    "polynomial_potential",
]

CONVEXITY_TOL = -1e-8


class ConvexPotential:
    """Scalar potential of space-time points, with derivatives.

    ``value(points)`` takes points of shape (..., 1+d).  Analytic gradient
    and Hessian closures are used when supplied; otherwise 4th-order central
    finite differences with step ``1e-4 * scale`` are applied.
    """

    def __init__(self, value: Callable, grad: Callable | None = None,
                 hess: Callable | None = None, name: str = "potential",
                 scale: float = 1.0):
        self._value = value
        self._grad = grad
        self._hess = hess
        self.name = name
        self.scale = float(scale)

    def value(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(self._value(np.asarray(pts, dtype=float)), dtype=float)

    @property
    def fd_step(self) -> float:
        return 1e-4 * self.scale

    def gradient(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        if self._grad is not None:
            return np.asarray(self._grad(pts), dtype=float)
        h = self.fd_step
        n = pts.shape[-1]
        out = np.empty_like(pts)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            out[..., i] = (-self.value(pts + 2 * e) + 8 * self.value(pts + e)
                           - 8 * self.value(pts - e) + self.value(pts - 2 * e)) / (12 * h)
        return out

    def hessian(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        if self._hess is not None:
            return np.asarray(self._hess(pts), dtype=float)
        h = self.fd_step
        n = pts.shape[-1]
        out = np.empty((*pts.shape[:-1], n, n))
        for i in range(n):
            ei = np.zeros(n)
            ei[i] = h
            out[..., i, i] = (-self.value(pts + 2 * ei) + 16 * self.value(pts + ei)
                              - 30 * self.value(pts)
                              + 16 * self.value(pts - ei) - self.value(pts - 2 * ei)) / (12 * h * h)
        if self._grad is not None:
            # mixed entries from the analytic gradient, 4th-order stencil
            for i in range(n):
                ei = np.zeros(n)
                ei[i] = h
                gi = (-self.gradient(pts + 2 * ei) + 8 * self.gradient(pts + ei)
                      - 8 * self.gradient(pts - ei) + self.gradient(pts - 2 * ei)) / (12 * h)
                for j in range(i + 1, n):
                    out[..., i, j] = gi[..., j]
                    out[..., j, i] = gi[..., j]
            return out
        for i in range(n):
            for j in range(i + 1, n):
                ei = np.zeros(n)
                ej = np.zeros(n)
                ei[i] = h
                ej[j] = h

                def d_i(q):
                    return (-self.value(q + 2 * ei) + 8 * self.value(q + ei)
                            - 8 * self.value(q - ei) + self.value(q - 2 * ei)) / (12 * h)

                mixed = (-d_i(pts + 2 * ej) + 8 * d_i(pts + ej)
                         - 8 * d_i(pts - ej) + d_i(pts - 2 * ej)) / (12 * h)
                out[..., i, j] = mixed
                out[..., j, i] = mixed
        return out

    def convexity_certificate(self, pts: np.ndarray) -> float:
        """Minimum Hessian eigenvalue over the sample points."""
        return float(np.linalg.eigvalsh(self.hessian(pts))[..., 0].min())


@dataclass
class HomogeneousPotential:
    """A potential positively homogeneous of degree 1 about a base point."""

    theta: ConvexPotential
    p: tuple[float, ...]

    def euler_residual(self, pts: np.ndarray) -> np.ndarray:
        """(z . grad theta) - theta with z = pts - p; zero iff degree-1."""
        pts = np.asarray(pts, dtype=float)
        z = pts - np.asarray(self.p, dtype=float)
        return np.sum(z * self.theta.gradient(pts), axis=-1) - self.theta.value(pts)


# ---------------------------------------------------------------------------
# cofactors
# ---------------------------------------------------------------------------

def cofactor_matrix(A: np.ndarray) -> np.ndarray:
    """Cofactor matrix of stacked 2x2 or 3x3 matrices."""
    A = np.asarray(A, dtype=float)
    n = A.shape[-1]
    out = np.empty_like(A)
    if n == 2:
        out[..., 0, 0] = A[..., 1, 1]
        out[..., 0, 1] = -A[..., 1, 0]
        out[..., 1, 0] = -A[..., 0, 1]
        out[..., 1, 1] = A[..., 0, 0]
        return out
    if n == 3:
        for i in range(3):
            for j in range(3):
                r = [k for k in range(3) if k != i]
                c = [k for k in range(3) if k != j]
                minor = (A[..., r[0], c[0]] * A[..., r[1], c[1]]
                         - A[..., r[0], c[1]] * A[..., r[1], c[0]])
                out[..., i, j] = (-1.0) ** (i + j) * minor
        return out
    raise ValueError("cofactor_matrix supports 2x2 and 3x3 matrices")


def cofactor_hessian(theta: ConvexPotential, grid: GridSpec,
                     warn_nonconvex: bool = True) -> SymTensorField:
    """Per-cell cofactor of the space-time Hessian of ``theta`` on ``grid``."""
    pts = grid.points()
    H = theta.hessian(pts)
    if warn_nonconvex:
        cert = float(np.linalg.eigvalsh(H)[..., 0].min())
        if cert < CONVEXITY_TOL:
            import warnings
            warnings.warn(f"potential {theta.name!r} violates convexity: "
                          f"min Hessian eigenvalue {cert:.3e}", stacklevel=2)
    return SymTensorField(grid, cofactor_matrix(H))


# ---------------------------------------------------------------------------
# projective transform of a potential
# ---------------------------------------------------------------------------

def transform_potential(theta: ConvexPotential, pmap: ProjectiveMap) -> ConvexPotential:
    """theta_bar(s, y) = (1-alpha*s) theta(s/(1-alpha*s), y/(1-alpha*s)).

    Derivatives are chained exactly from the source potential's, so analytic
    inputs stay analytic:  grad_y theta_bar = grad_x theta  and
    D^2 theta_bar = (1+alpha*t) Q^T (D^2 theta) Q  with
    Q = [[1+alpha*t, 0], [alpha*x, I_d]]  (x the source coordinate).
    """
    a = pmap.alpha

    def pre(pts):
        pts = np.asarray(pts, dtype=float)
        q = 1.0 - a * pts[..., 0]
        if np.any(q <= 0):
            raise DegenerateMapError("1 - alpha*s <= 0 at a requested point")
        return pts / q[..., None], q

    def value(pts):
        src, q = pre(pts)
        return q * theta.value(src)

    def grad(pts):
        pts = np.asarray(pts, dtype=float)
        src, q = pre(pts)
        g = theta.gradient(src)
        out = np.empty_like(g)
        out[..., 0] = (-a * theta.value(src) + g[..., 0] / q
                       + a * np.sum(pts[..., 1:] * g[..., 1:], axis=-1) / q)
        out[..., 1:] = g[..., 1:]
        return out

    def hess(pts):
        pts = np.asarray(pts, dtype=float)
        src, q = pre(pts)
        H = theta.hessian(src)
        n = pts.shape[-1]
        k = 1.0 / q  # = 1 + alpha*t
        Q = np.zeros((*pts.shape[:-1], n, n))
        Q[..., 0, 0] = k
        Q[..., 1:, 0] = a * src[..., 1:]
        idx = np.arange(n - 1)
        Q[..., 1 + idx, 1 + idx] = 1.0
        return k[..., None, None] * np.einsum("...ji,...jk,...kl->...il", Q, H, Q)

    return ConvexPotential(
        value,
        grad=None if theta._grad is None else grad,
        hess=None if theta._hess is None else hess,
        name=f"{theta.name}@alpha={a:g}",
        scale=theta.scale,
    )


# ---------------------------------------------------------------------------
# determinantal mass
# ---------------------------------------------------------------------------

def determinantal_mass(theta: ConvexPotential, p=(0.0, 0.0),
                       n_samples: int = 10_000, radius: float = 1.0,
                       full_output: bool = False):
    """Area enclosed by the gradient image of a degree-1 homogeneous potential.

    d = 1 only (the gradient image is a closed plane curve).  The curve is
    sampled on a circle of directions about the base point and the enclosed
    area computed by the shoelace formula.  If the curve self-intersects the
    convex-hull area is returned instead, flagged in the full output.
    """
    p = np.asarray(p, dtype=float)
    if p.size != 2:
        raise ValueError("determinantal mass is implemented for d = 1 "
                         "(planar gradient image)")
    phi = 2.0 * np.pi * np.arange(n_samples) / n_samples
    pts = p + radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    G = theta.gradient(pts)

    shoelace = 0.5 * float(np.sum(G[:, 0] * np.roll(G[:, 1], -1)
                                  - np.roll(G[:, 0], -1) * G[:, 1]))
    area = abs(shoelace)

    # drop consecutive duplicates before the simplicity test
    keep = np.ones(len(G), dtype=bool)
    keep[1:] = np.any(np.abs(np.diff(G, axis=0)) > 1e-13 * max(1.0, np.abs(G).max()), axis=1)
    Gr = G[keep]
    simple = True
    if len(Gr) >= 4:
        simple = bool(LinearRing(Gr).is_simple)
    hull_area = float(ConvexHull(G).volume) if len(Gr) >= 3 else 0.0

    result = area if simple else hull_area
    if full_output:
        return result, {"simple": simple, "shoelace_area": area,
                        "hull_area": hull_area, "curve": G}
    if not simple:
        import warnings
        warnings.warn("gradient image self-intersects; returning convex-hull area",
                      stacklevel=2)
    return result


# ---------------------------------------------------------------------------
# rigidity form
# ---------------------------------------------------------------------------

def rigidity_form(mu: Callable[[np.ndarray], np.ndarray], p, d: int,
                  eps: float = 1e-12) -> Callable[[np.ndarray], np.ndarray]:
    """S(z) = mu(z/|z|) z (x) z / |z|^(d+2) with z = (t,x) - p.

    ``mu`` maps unit vectors of shape (..., 1+d) to nonnegative weights.
    The canonical homogeneous positive divergence-free tensor of degree -d.
    """
    p = np.asarray(p, dtype=float)

    def fn(pts):
        pts = np.asarray(pts, dtype=float)
        z = pts - p
        r = np.sqrt(np.sum(z * z, axis=-1))
        if np.any(r < eps):
            raise ValueError("rigidity form evaluated at its singular point")
        w = np.asarray(mu(z / r[..., None]), dtype=float)
        zz = z[..., :, None] * z[..., None, :]
        return w[..., None, None] * zz / (r ** (d + 2))[..., None, None]

    return fn


def rigidity_form_field(mu, p, grid: GridSpec) -> SymTensorField:
    return SymTensorField.from_function(grid, rigidity_form(mu, p, grid.d))


# ---------------------------------------------------------------------------
# built-in potentials
# ---------------------------------------------------------------------------

def quadratic_potential(a: float = 1.0, d: int = 1) -> ConvexPotential:
    """theta = a/2 (t^2 + |x|^2); cofactor Hessian is a^d * identity."""
    def value(pts):
        return 0.5 * a * np.sum(pts * pts, axis=-1)

    def grad(pts):
        return a * np.asarray(pts, dtype=float)

    def hess(pts):
        pts = np.asarray(pts, dtype=float)
        return a * np.broadcast_to(np.eye(d + 1), (*pts.shape[:-1], d + 1, d + 1)).copy()

    return ConvexPotential(value, grad, hess, name="quadratic")


def exp_cosh_potential() -> ConvexPotential:
    """theta = e^t cosh x (d = 1); cofactor Hessian e^t [[cosh, -sinh], [-sinh, cosh]]."""
    def value(pts):
        return np.exp(pts[..., 0]) * np.cosh(pts[..., 1])

    def grad(pts):
        t, x = pts[..., 0], pts[..., 1]
        return np.stack([np.exp(t) * np.cosh(x), np.exp(t) * np.sinh(x)], axis=-1)

    def hess(pts):
        t, x = pts[..., 0], pts[..., 1]
        H = np.empty((*t.shape, 2, 2))
        H[..., 0, 0] = np.exp(t) * np.cosh(x)
        H[..., 0, 1] = H[..., 1, 0] = np.exp(t) * np.sinh(x)
        H[..., 1, 1] = np.exp(t) * np.cosh(x)
        return H

    return ConvexPotential(value, grad, hess, name="exp-cosh")


def quartic_potential(d: int = 1) -> ConvexPotential:
    """theta = (t^4 + sum x_i^4) / 12; Hessian is diagonal (t^2, x_i^2)."""
    def value(pts):
        return np.sum(pts ** 4, axis=-1) / 12.0

    def grad(pts):
        return np.asarray(pts, dtype=float) ** 3 / 3.0

    def hess(pts):
        pts = np.asarray(pts, dtype=float)
        n = pts.shape[-1]
        H = np.zeros((*pts.shape[:-1], n, n))
        idx = np.arange(n)
        H[..., idx, idx] = pts ** 2
        return H

    return ConvexPotential(value, grad, hess, name="quartic")


def norm_cone_potential(c: float = 1.0, p=(0.0, 0.0)) -> HomogeneousPotential:
    """theta = c |z - p|, degree-1 homogeneous; gradient image is a circle of
    radius c, so the determinantal mass is pi c^2."""
    p_arr = np.asarray(p, dtype=float)

    def value(pts):
        z = np.asarray(pts, dtype=float) - p_arr
        return c * np.sqrt(np.sum(z * z, axis=-1))

    def grad(pts):
        z = np.asarray(pts, dtype=float) - p_arr
        r = np.sqrt(np.sum(z * z, axis=-1))
        return c * z / r[..., None]

    def hess(pts):
        z = np.asarray(pts, dtype=float) - p_arr
        r = np.sqrt(np.sum(z * z, axis=-1))
        zhat = z / r[..., None]
        n = z.shape[-1]
        proj = np.eye(n) - zhat[..., :, None] * zhat[..., None, :]
        return c * proj / r[..., None, None]

    theta = ConvexPotential(value, grad, hess, name="norm-cone")
    return HomogeneousPotential(theta, tuple(p_arr))


def polynomial_potential(coeffs, name: str = "polynomial") -> ConvexPotential:
    """d=1 polynomial potential from a coefficient matrix: theta = sum
    coeffs[i, j] t^i x^j.  Derivatives are formed analytically."""
    C = np.asarray(coeffs, dtype=float)
    if C.ndim != 2:
        raise ValueError("coeffs must be a 2-D array (powers of t by powers of x)")

    def eval_poly(M, t, x):
        out = np.zeros_like(t)
        for i in range(M.shape[0]):
            for j in range(M.shape[1]):
                if M[i, j] != 0.0:
                    out = out + M[i, j] * t ** i * x ** j
        return out

    def deriv(M, axis):
        if axis == 0:
            D = M[1:, :] * np.arange(1, M.shape[0])[:, None]
        else:
            D = M[:, 1:] * np.arange(1, M.shape[1])[None, :]
        return D if D.size else np.zeros((1, 1))

    Ct, Cx = deriv(C, 0), deriv(C, 1)
    Ctt, Ctx, Cxx = deriv(Ct, 0), deriv(Ct, 1), deriv(Cx, 1)

    def value(pts):
        return eval_poly(C, pts[..., 0], pts[..., 1])

    def grad(pts):
        t, x = pts[..., 0], pts[..., 1]
        return np.stack([eval_poly(Ct, t, x), eval_poly(Cx, t, x)], axis=-1)

    def hess(pts):
        t, x = pts[..., 0], pts[..., 1]
        H = np.empty((*t.shape, 2, 2))
        H[..., 0, 0] = eval_poly(Ctt, t, x)
        H[..., 0, 1] = H[..., 1, 0] = eval_poly(Ctx, t, x)
        H[..., 1, 1] = eval_poly(Cxx, t, x)
        return H

    return ConvexPotential(value, grad, hess, name=name)
