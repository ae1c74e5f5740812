"""Projective transformations acting on divergence-free symmetric tensors.

The one-parameter map

    s = t / (1 + t*alpha),      y = x / (1 + t*alpha)

sends space-time lines to lines.  A divergence-free symmetric tensor field
transforms blockwise (``transform_tensor_values``) and stays divergence-free;
the same transform arises from the general construction

    lift  ->  congruence by P in GL_{d+2}  ->  restrict

which realizes an action of the projective linear group on tensor fields
(``group_action``).  Also here: transport of non-zero divergence residuals
with their total-variation bookkeeping, the scaling of determinantal masses,
and the invariance check of Newtonian trajectories under the map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import RegularGridInterpolator

from .tensor_field import (GridSpec, SymTensorField, discrete_divergence,
                           measure_norm)

__all__ = [
    "DegenerateMapError",
    "ProjectiveMap",
    "GeneralLinearAction",
    "HomogeneousBlocks",
    "alpha_matrix",
    "transform_tensor_values",
    "congruence_matrix",
    "image_grid",
    "push_forward",
    "push_forward_with_source",
    "lift",
    "restrict",
    "restrict_to_field",
    "group_action",
    "group_action_field",
    "determinantal_mass_scale",
    "ode_invariance_check",
]


class DegenerateMapError(ValueError):
    """The projective map degenerates (1 + t*alpha <= 0) on the requested set."""


@dataclass(frozen=True)
class ProjectiveMap:
    """The alpha-parameterized map s = t/(1+t*alpha), y = x/(1+t*alpha).

    Valid wherever 1 + t*alpha > 0; ``alpha = 0`` is the identity.
    """

    alpha: float

    def factor(self, t):
        """1 + t*alpha, the dilation factor at time t."""
        return 1.0 + np.asarray(t, dtype=float) * self.alpha

    def forward(self, t, x):
        k = self.factor(t)
        if np.any(k <= 0):
            raise DegenerateMapError("1 + t*alpha <= 0 at a requested point")
        return t / k, x / _expand(k, x)

    def inverse(self, s, y):
        q = 1.0 - np.asarray(s, dtype=float) * self.alpha
        if np.any(q <= 0):
            raise DegenerateMapError("1 - s*alpha <= 0 at a requested point")
        return s / q, y / _expand(q, y)

    def check_grid(self, grid: GridSpec) -> None:
        if np.any(self.factor(np.asarray(grid.t_range)) <= 0):
            raise DegenerateMapError("map degenerate on the grid's time range")


def _expand(k, x):
    """Broadcast a factor over the trailing component axis of x, if any."""
    k = np.asarray(k, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim == k.ndim + 1:
        return k[..., None]
    return k


@dataclass(frozen=True)
class GeneralLinearAction:
    """An invertible (n+1) x (n+1) matrix acting projectively, n = d+1."""

    P: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError("P must be square")
        if abs(np.linalg.det(P)) < 1e-300:
            raise ValueError("P must be invertible")
        object.__setattr__(self, "P", P)

    @property
    def n(self) -> int:
        return self.P.shape[0] - 1

    @property
    def normalization(self) -> float:
        """(det P)^(-1) |det P|^(-2/(n+1)), making scalar multiples act alike."""
        det = np.linalg.det(self.P)
        return (1.0 / det) * abs(det) ** (-2.0 / (self.n + 1))


def alpha_matrix(alpha: float, d: int) -> GeneralLinearAction:
    """The frozen GL_{d+2} representative of the alpha-map.

    Acting on homogeneous coordinates (lam, t, x), the matrix
    I + alpha*E_{01} sends the ray of (1, t, x) to the ray of
    (1+t*alpha, t, x) ~ (1, s, y); pushing it through the
    lift/congruence/restrict pipeline reproduces the blockwise transform.
    """
    P = np.eye(d + 2)
    P[0, 1] = alpha
    return GeneralLinearAction(P)


# ---------------------------------------------------------------------------
# pointwise blockwise transform (exact arithmetic, no grids)
# ---------------------------------------------------------------------------

def transform_tensor_values(pmap: ProjectiveMap, t, x, S):
    """Blockwise transform of tensor values given at points (t, x).

    ``t``: (...,), ``x``: (..., d), ``S``: (..., 1+d, 1+d).  Returns the
    transformed matrices at the image points (no interpolation involved).
    """
    t = np.asarray(t, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    S = np.asarray(S, dtype=float)
    d = S.shape[-1] - 1
    if x.shape[-1] != d:
        raise ValueError("x component count does not match tensor dimension")
    k = pmap.factor(t)
    if np.any(k <= 0):
        raise DegenerateMapError("1 + t*alpha <= 0 at a sample point")
    a = pmap.alpha
    rho = S[..., 0, 0]
    m = S[..., 1:, 0]
    T = S[..., 1:, 1:]
    kd = k ** d
    rb = kd * rho
    mb = k[..., None] ** (d + 1) * m - a * kd[..., None] * rho[..., None] * x
    mx = m[..., :, None] * x[..., None, :]
    xx = x[..., :, None] * x[..., None, :]
    Tb = (k[..., None, None] ** (d + 2) * T
          - a * k[..., None, None] ** (d + 1) * (mx + np.swapaxes(mx, -1, -2))
          + a * a * kd[..., None, None] * rho[..., None, None] * xx)
    out = np.zeros_like(S)
    out[..., 0, 0] = rb
    out[..., 1:, 0] = mb
    out[..., 0, 1:] = mb
    out[..., 1:, 1:] = Tb
    return out


def congruence_matrix(pmap: ProjectiveMap, t, x) -> np.ndarray:
    """P(t, x) with  S_bar = (1+t*alpha)^d P S P^T  (the congruence form)."""
    t = np.asarray(t, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = x.shape[-1]
    k = pmap.factor(t)
    P = np.zeros((*t.shape, d + 1, d + 1))
    P[..., 0, 0] = 1.0
    P[..., 1:, 0] = -pmap.alpha * x
    idx = np.arange(d)
    P[..., 1 + idx, 1 + idx] = k[..., None]
    return P


# ---------------------------------------------------------------------------
# gridded push-forward
# ---------------------------------------------------------------------------

def image_grid(grid: GridSpec, pmap: ProjectiveMap,
               shrink: float = 1e-9) -> GridSpec:
    """Largest rectangular (s, y) grid whose preimage stays inside ``grid``."""
    pmap.check_grid(grid)
    t0, t1 = grid.t_range
    k0, k1 = pmap.factor(t0), pmap.factor(t1)
    s_lo, s_hi = sorted((t0 / k0, t1 / k1))
    y_range = []
    for lo, hi in grid.x_range:
        y_lo = max(lo / k0, lo / k1)
        y_hi = min(hi / k0, hi / k1)
        if not y_lo < y_hi:
            raise DegenerateMapError("image of the spatial domain is empty")
        pad = shrink * (y_hi - y_lo)
        y_range.append((y_lo + pad, y_hi - pad))
    pad_s = shrink * (s_hi - s_lo)
    return GridSpec(grid.d, (s_lo + pad_s, s_hi - pad_s), tuple(y_range),
                    grid.n_t, grid.n_x, grid.periodic)


def _preimage_points(out_grid: GridSpec, pmap: ProjectiveMap):
    pts = out_grid.points()
    s = pts[..., 0]
    y = pts[..., 1:]
    t, x = pmap.inverse(s, y)
    return t, x


def push_forward(S: SymTensorField, pmap: ProjectiveMap,
                 out_grid: GridSpec | None = None) -> SymTensorField:
    """Push a sampled tensor field through the map.

    Values at each (s, y) cell center are obtained by evaluating the source
    field at the exact preimage (t, x) via multilinear interpolation, then
    applying the blockwise transform.
    """
    pmap.check_grid(S.grid)
    if out_grid is None:
        out_grid = image_grid(S.grid, pmap)
    t, x = _preimage_points(out_grid, pmap)
    interp = S.interpolator()
    pts = np.concatenate([t[..., None], x], axis=-1)
    S_pre = interp(pts.reshape(-1, S.grid.n)).reshape(*out_grid.shape,
                                                      S.grid.n, S.grid.n)
    vals = transform_tensor_values(pmap, t, x, S_pre)
    return SymTensorField(out_grid, vals)


def push_forward_with_source(S: SymTensorField, pmap: ProjectiveMap,
                             residual: np.ndarray | None = None,
                             out_grid: GridSpec | None = None) -> dict:
    """Push-forward with a non-zero divergence, plus total-variation bookkeeping.

    The divergence residual transforms as a measure: its density picks up the
    inverse Jacobian (1+t*alpha)^(d+2), the first row unchanged, the
    momentum rows mixed as (1+t*alpha)*R_m - alpha*x*R_rho.  Returns the
    transformed field, the transformed residual density on the image grid,
    and both sides of the two mass-norm relations, each side computed by an
    independent midpoint quadrature (source grid vs image grid):

        ||row0_bar||_M  =  ||row0||_M
        ||rows_bar||_M  <= ||(1+alpha*t) rows||_M + alpha*|| |x| row0 ||_M
    """
    grid = S.grid
    d = grid.d
    if residual is None:
        residual = discrete_divergence(S)
    residual = np.asarray(residual, dtype=float)
    if out_grid is None:
        out_grid = image_grid(grid, pmap)
    S_bar = push_forward(S, pmap, out_grid)

    t, x = _preimage_points(out_grid, pmap)
    r_interp = RegularGridInterpolator(grid.axes, residual, method="linear",
                                       bounds_error=False, fill_value=None)
    pts = np.concatenate([t[..., None], x], axis=-1)
    r_pre = r_interp(pts.reshape(-1, grid.n)).reshape(*out_grid.shape, grid.n)
    k = pmap.factor(t)
    jac = k ** (d + 2)
    r_bar = np.empty_like(r_pre)
    r_bar[..., 0] = jac * r_pre[..., 0]
    r_bar[..., 1:] = jac[..., None] * (k[..., None] * r_pre[..., 1:]
                                       - pmap.alpha * x * r_pre[..., 0][..., None])

    tt, xx = grid.meshgrid()[0], np.stack(grid.meshgrid()[1:], axis=-1)
    k_src = pmap.factor(tt)
    absx = np.sqrt(np.sum(xx * xx, axis=-1))
    bounds = {
        "row0_image": measure_norm(r_bar[..., 0], out_grid),
        "row0_source": measure_norm(residual[..., 0], grid),
        "rows_image": measure_norm(r_bar[..., 1:], out_grid),
        "rows_source_bound": (measure_norm(k_src[..., None] * residual[..., 1:], grid)
                              + pmap.alpha * measure_norm(absx * residual[..., 0], grid)),
    }
    return {"field": S_bar, "residual": r_bar, "bounds": bounds}


# ---------------------------------------------------------------------------
# lift / congruence / restrict pipeline
# ---------------------------------------------------------------------------

class HomogeneousBlocks:
    """Blocks (h, Z, H) of a degree -(n+1) homogeneous tensor on R^{1+n}.

    The assembled tensor is Sigma(lam, z) = lam^(-n-1) * B(z/lam) with

        B(x) = [[h(x), Z(x)^T],
                [Z(x), H(x)  ]].

    ``block_fn(x) -> (n+1, n+1)`` evaluates B; batch evaluation takes
    ``x`` of shape (..., n).  For lam < 0 the integer-exponent extension
    lam^(-n-1) is used, which is what makes scalar multiples c*P (c of any
    sign) act identically after normalization.
    """

    def __init__(self, block_fn: Callable[[np.ndarray], np.ndarray], n: int):
        self.block_fn = block_fn
        self.n = n

    def blocks(self, x: np.ndarray):
        B = np.asarray(self.block_fn(np.asarray(x, dtype=float)))
        return B[..., 0, 0], B[..., 0, 1:], B[..., 1:, 1:]

    def sigma(self, lam, z) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        z = np.asarray(z, dtype=float)
        if np.any(lam == 0):
            raise ValueError("homogeneous tensor evaluated at lam = 0")
        B = np.asarray(self.block_fn(z / lam[..., None]))
        return lam[..., None, None] ** (-(self.n + 1)) * B

    def congruence(self, action: GeneralLinearAction) -> "HomogeneousBlocks":
        P = action.P
        Pinv = np.linalg.inv(P)
        c = action.normalization
        sigma = self.sigma

        def block_fn(x):
            x = np.asarray(x, dtype=float)
            w = np.concatenate([np.ones((*x.shape[:-1], 1)), x], axis=-1)
            lz = np.einsum("ij,...j->...i", Pinv, w)
            core = sigma(lz[..., 0], lz[..., 1:])
            return c * np.einsum("ij,...jk,lk->...il", P, core, P)

        return HomogeneousBlocks(block_fn, self.n)


def lift(S_fn: Callable[[np.ndarray], np.ndarray], d: int) -> HomogeneousBlocks:
    """Extend an n x n field (n = d+1) to a homogeneous tensor one level up."""
    n = d + 1

    def block_fn(x):
        S = np.asarray(S_fn(np.asarray(x, dtype=float)))
        out = np.zeros((*S.shape[:-2], n + 1, n + 1))
        out[..., 1:, 1:] = S
        return out

    return HomogeneousBlocks(block_fn, n)


def restrict(blocks: HomogeneousBlocks) -> Callable[[np.ndarray], np.ndarray]:
    """H~(x) = H(x) - x (x) Z - Z (x) x + h(x) x (x) x, divergence-free again."""

    def H_fn(x):
        x = np.asarray(x, dtype=float)
        h, Z, H = blocks.blocks(x)
        xZ = x[..., :, None] * Z[..., None, :]
        xx = x[..., :, None] * x[..., None, :]
        return H - xZ - np.swapaxes(xZ, -1, -2) + h[..., None, None] * xx

    return H_fn


def restrict_to_field(blocks: HomogeneousBlocks, grid: GridSpec,
                      div_tol: float | None = None) -> SymTensorField:
    """Sample the restriction on a grid; optionally verify the source tensor
    was divergence-free to ``div_tol`` (L1 of its own discrete divergence)."""
    H_fn = restrict(blocks)
    out = SymTensorField.from_function(grid, H_fn)
    if div_tol is not None:
        res = discrete_divergence(out)
        l1 = measure_norm(res, grid)
        if not np.isfinite(l1) or l1 > div_tol:
            raise ValueError(f"restricted tensor fails divergence check: "
                             f"L1 residual {l1:.3e} > {div_tol:.3e}")
    return out


def group_action(S_fn: Callable[[np.ndarray], np.ndarray],
                 action: GeneralLinearAction, d: int) -> Callable:
    """lift -> congruence -> restrict, as a function of space-time points.

    Scalar multiples of ``action.P`` give identical output; composing actions
    corresponds to multiplying the matrices.
    """
    return restrict(lift(S_fn, d).congruence(action))


def group_action_field(S: SymTensorField, action: GeneralLinearAction,
                       out_grid: GridSpec) -> SymTensorField:
    """Group action on a sampled field (source values by interpolation)."""
    interp = S.interpolator()

    def S_fn(x):
        flat = np.asarray(x, dtype=float).reshape(-1, S.grid.n)
        return interp(flat).reshape(*np.asarray(x).shape[:-1], S.grid.n, S.grid.n)

    return SymTensorField.from_function(out_grid, group_action(S_fn, action, S.grid.d))


def determinantal_mass_scale(dm: float, t0: float, pmap: ProjectiveMap) -> float:
    """Scaling of a determinantal mass concentrated at (t0, x0)."""
    k = pmap.factor(t0)
    if k <= 0:
        raise DegenerateMapError("1 + alpha*t0 <= 0")
    return float(k) * dm


# ---------------------------------------------------------------------------
# ODE invariance
# ---------------------------------------------------------------------------

def _potential_force(potential):
    """Return (force(x) = -grad U, has_singularity) for the potential."""
    if potential == "free":
        return lambda x: np.zeros_like(x), False
    if isinstance(potential, tuple) and potential[0] == "calogero_moser":
        A = float(potential[1])

        def force(x):
            r2 = float(np.dot(x, x))
            # U = A / r^2  ->  -grad U = 2 A x / r^4
            return 2.0 * A * x / r2**2

        return force, True
    if isinstance(potential, tuple) and potential[0] == "quadratic":
        A = float(potential[1])
        return lambda x: -2.0 * A * x, False  # U = A r^2
    if callable(potential):
        return potential, True
    raise ValueError(f"unknown potential: {potential!r}")


def ode_invariance_check(potential, init, pmap: ProjectiveMap, t_max: float,
                         n_eval: int = 200, rtol: float = 1e-9,
                         atol: float = 1e-12, r_min: float = 1e-6) -> dict:
    """Integrate x'' = -grad U, transform the trajectory pointwise, reintegrate
    in the new variables, and return the maximal pointwise deviation.

    The transformed initial velocity is v(0) = u(0) - alpha*x(0).  Free motion
    and the inverse-square (Calogero-Moser) potential are invariant; generic
    potentials are not (useful as a negative control).
    """
    x0 = np.atleast_1d(np.asarray(init[0], dtype=float))
    u0 = np.atleast_1d(np.asarray(init[1], dtype=float))
    dim = x0.size
    force, singular = _potential_force(potential)

    def rhs(_, state):
        x, u = state[:dim], state[dim:]
        return np.concatenate([u, force(x)])

    events = None
    if singular:
        def too_close(_, state):
            return float(np.linalg.norm(state[:dim])) - r_min
        too_close.terminal = True
        events = [too_close]

    sol = solve_ivp(rhs, (0.0, t_max), np.concatenate([x0, u0]),
                    rtol=rtol, atol=atol, dense_output=True, events=events,
                    method="DOP853")
    if events and sol.t_events[0].size:
        raise ValueError(f"trajectory passed within r_min={r_min} of the singularity")
    ts = np.linspace(0.0, t_max, n_eval)
    xs = sol.sol(ts)[:dim].T

    k = pmap.factor(ts)
    if np.any(k <= 0):
        raise DegenerateMapError("map degenerate on the trajectory time range")
    ss = ts / k
    ys = xs / k[:, None]

    v0 = u0 - pmap.alpha * x0
    sol2 = solve_ivp(rhs, (0.0, ss[-1]), np.concatenate([x0, v0]),
                     rtol=rtol, atol=atol, dense_output=True, events=events,
                     method="DOP853")
    if events and sol2.t_events[0].size:
        raise ValueError(f"transformed trajectory passed within r_min={r_min} "
                         "of the singularity")
    ys2 = sol2.sol(ss)[:dim].T
    dev = np.sqrt(np.sum((ys - ys2) ** 2, axis=1))
    return {
        "max_deviation": float(dev.max()),
        "s": ss, "t": ts,
        "transformed": ys, "reintegrated": ys2,
        "deviation": dev,
    }
