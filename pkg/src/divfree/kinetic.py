"""Kinetic densities, moment tensors, the simplex-volume determinant formula,
the kinetic projective transform, and collisionless (free) transport.

Two representations share the operation contracts: weighted particle lists
(the precision path; transport is exact) and velocity-space grids (the
generality path; transport is semi-Lagrangian).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .projective import DegenerateMapError
from .tensor_field import GridSpec, SymTensorField

__all__ = [
    "ParticleState",
    "GridState",
    "EnergyFluxPair",
    "velocity_moment",
    "moment_tensor",
    "moment_field",
    "det_via_simplex",
    "free_transport",
    "kinetic_push_forward",
    "hyperplane_degeneracy_test",
    "energy_flux_pair",
]


@dataclass
class ParticleState:
    """Weighted particles (x_i, xi_i, w_i) at a common time."""

    x: np.ndarray    # (N, d)
    xi: np.ndarray   # (N, d)
    w: np.ndarray    # (N,)

    def __post_init__(self):
        self.x = np.atleast_2d(np.asarray(self.x, dtype=float))
        self.xi = np.atleast_2d(np.asarray(self.xi, dtype=float))
        self.w = np.asarray(self.w, dtype=float)
        if self.x.shape != self.xi.shape or self.w.shape != (self.x.shape[0],):
            raise ValueError("inconsistent particle arrays")
        if np.any(self.w < 0):
            raise ValueError("particle weights must be nonnegative")

    @property
    def d(self) -> int:
        return self.x.shape[1]

    @property
    def mass(self) -> float:
        return float(self.w.sum())

    @property
    def kinetic_energy(self) -> float:
        return float(0.5 * np.sum(self.w * np.sum(self.xi ** 2, axis=1)))

    @property
    def inertia(self) -> float:
        return float(0.5 * np.sum(self.w * np.sum(self.x ** 2, axis=1)))

    @property
    def xdotxi(self) -> float:
        return float(np.sum(self.w * np.sum(self.x * self.xi, axis=1)))

    def entropy(self) -> float:
        """Discrete stand-in sum w log w; exactly conserved by transport."""
        w = self.w[self.w > 0]
        return float(np.sum(w * np.log(w)))

    def rho_moments(self):
        """(mass, sum w x, sum w |x|^2) of the spatial density."""
        return (self.mass, self.w @ self.x,
                float(np.sum(self.w * np.sum(self.x ** 2, axis=1))))


@dataclass
class GridState:
    """Velocity-space density f(x, xi) sampled on cell-centered axes."""

    x_axes: tuple[np.ndarray, ...]
    xi_axes: tuple[np.ndarray, ...]
    f: np.ndarray    # shape (*n_x, *n_xi)

    def __post_init__(self):
        self.x_axes = tuple(np.asarray(a, dtype=float) for a in self.x_axes)
        self.xi_axes = tuple(np.asarray(a, dtype=float) for a in self.xi_axes)
        self.f = np.asarray(self.f, dtype=float)
        want = tuple(len(a) for a in self.x_axes) + tuple(len(a) for a in self.xi_axes)
        if self.f.shape != want:
            raise ValueError(f"f has shape {self.f.shape}, expected {want}")
        if np.any(self.f < 0):
            raise ValueError("density must be nonnegative")

    @property
    def d(self) -> int:
        return len(self.x_axes)

    @property
    def dx_vol(self) -> float:
        """Spatial cell volume; single-cell axes count as unit length."""
        return float(np.prod([a[1] - a[0] if len(a) > 1 else 1.0 for a in self.x_axes]))

    @property
    def dxi_vol(self) -> float:
        return float(np.prod([a[1] - a[0] if len(a) > 1 else 1.0 for a in self.xi_axes]))

    def xi_mesh(self):
        return np.meshgrid(*self.xi_axes, indexing="ij")

    @property
    def mass(self) -> float:
        return float(self.f.sum() * self.dx_vol * self.dxi_vol)

    @property
    def kinetic_energy(self) -> float:
        xi2 = sum(m ** 2 for m in self.xi_mesh())
        d = self.d
        return float(0.5 * np.sum(self.f * xi2[(None,) * d]) * self.dx_vol * self.dxi_vol)

    @property
    def inertia(self) -> float:
        xm = np.meshgrid(*self.x_axes, indexing="ij")
        x2 = sum(m ** 2 for m in xm)
        d = self.d
        return float(0.5 * np.sum(self.f * x2[(...,) + (None,) * d]) * self.dx_vol * self.dxi_vol)

    def entropy(self) -> float:
        """Integral of f log f (cells with f = 0 contribute nothing)."""
        f = self.f[self.f > 0]
        return float(np.sum(f * np.log(f)) * self.dx_vol * self.dxi_vol)

    def icb_functional(self) -> float:
        """Integral of f (1 + |xi|^2 + |x|^2 + |log f|): finite mass, energy,
        inertia, entropy in one number."""
        d = self.d
        xi2 = sum(m ** 2 for m in self.xi_mesh())[(None,) * d]
        x2 = sum(m ** 2 for m in np.meshgrid(*self.x_axes, indexing="ij"))[(...,) + (None,) * d]
        logf = np.zeros_like(self.f)
        pos = self.f > 0
        logf[pos] = np.abs(np.log(self.f[pos]))
        dens = self.f * (1.0 + xi2 + x2 + logf)
        return float(np.sum(dens) * self.dx_vol * self.dxi_vol)


@dataclass(frozen=True)
class EnergyFluxPair:
    """Energy density eps = int f |xi|^2/2 and flux q = int f |xi|^2 xi / 2."""

    eps: np.ndarray
    q: np.ndarray


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def velocity_moment(xi: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Pointwise moment matrix sum_i w_i (1, xi_i) (x) (1, xi_i)."""
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    w = np.asarray(w, dtype=float)
    one_xi = np.concatenate([np.ones((len(xi), 1)), xi], axis=1)
    return np.einsum("i,ij,ik->jk", w, one_xi, one_xi)


def _bin_index(axes, pts):
    """Cell index per point on cell-centered axes; -1 when outside."""
    idx = []
    for k, ax in enumerate(axes):
        h = ax[1] - ax[0]
        i = np.floor((pts[:, k] - (ax[0] - 0.5 * h)) / h).astype(int)
        i[(i < 0) | (i >= len(ax))] = -1
        idx.append(i)
    return idx


def moment_tensor(state, x_axes=None) -> np.ndarray:
    """Per-spatial-cell moment matrices S = int f (1,xi)(x)(1,xi) dxi.

    Grid states integrate over their velocity lattice.  Particle states are
    binned onto ``x_axes`` (cell-centered); pass None to treat the whole
    population as one unit-volume cell.
    """
    if isinstance(state, GridState):
        d = state.d
        n = d + 1
        mesh = state.xi_mesh()
        one_xi = np.stack([np.ones_like(mesh[0]), *mesh], axis=-1)
        quad = one_xi[..., :, None] * one_xi[..., None, :]
        sum_axes = tuple(range(d, 2 * d))
        S = np.tensordot(state.f, quad, axes=(sum_axes, tuple(range(d)))) * state.dxi_vol
        return S
    if x_axes is None:
        return velocity_moment(state.xi, state.w)
    d = state.d
    n = d + 1
    shape = tuple(len(a) for a in x_axes)
    vol = float(np.prod([a[1] - a[0] for a in x_axes]))
    S = np.zeros((*shape, n, n))
    idx = _bin_index(x_axes, state.x)
    ok = np.all([i >= 0 for i in idx], axis=0)
    one_xi = np.concatenate([np.ones((len(state.xi), 1)), state.xi], axis=1)
    quad = state.w[:, None, None] * one_xi[:, :, None] * one_xi[:, None, :]
    flat = np.ravel_multi_index([i[ok] for i in idx], shape)
    S_flat = S.reshape(-1, n, n)
    np.add.at(S_flat, flat, quad[ok])
    return S_flat.reshape(*shape, n, n) / vol


def energy_flux_pair(state, x_axes=None) -> EnergyFluxPair:
    """eps and q per spatial cell (grid mode) or binned particles."""
    if isinstance(state, GridState):
        d = state.d
        mesh = state.xi_mesh()
        xi2 = sum(m ** 2 for m in mesh)
        sum_axes = tuple(range(d, 2 * d))
        eps = np.tensordot(state.f, 0.5 * xi2, axes=(sum_axes, tuple(range(d)))) * state.dxi_vol
        q = np.stack([np.tensordot(state.f, 0.5 * xi2 * m, axes=(sum_axes, tuple(range(d))))
                      for m in mesh], axis=-1) * state.dxi_vol
        return EnergyFluxPair(eps, q)
    if x_axes is None:
        raise ValueError("particle mode needs spatial axes")
    d = state.d
    shape = tuple(len(a) for a in x_axes)
    vol = float(np.prod([a[1] - a[0] for a in x_axes]))
    idx = _bin_index(x_axes, state.x)
    ok = np.all([i >= 0 for i in idx], axis=0)
    flat = np.ravel_multi_index([i[ok] for i in idx], shape)
    xi2 = np.sum(state.xi ** 2, axis=1)
    eps = np.zeros(int(np.prod(shape)))
    np.add.at(eps, flat, 0.5 * state.w[ok] * xi2[ok])
    q = np.zeros((int(np.prod(shape)), d))
    np.add.at(q, flat, 0.5 * (state.w * xi2)[ok, None] * state.xi[ok])
    return EnergyFluxPair(eps.reshape(shape) / vol, q.reshape(*shape, d) / vol)


# ---------------------------------------------------------------------------
# simplex-volume determinant formula
# ---------------------------------------------------------------------------

def _gram_det_sq(xi_tuple: np.ndarray) -> np.ndarray:
    """det[(1,xi_0), .., (1,xi_d)]^2, the squared simplex volume times d!^2."""
    edges = xi_tuple[..., 1:, :] - xi_tuple[..., :1, :]
    d = xi_tuple.shape[-1]
    det = np.linalg.det(edges) if d > 1 else edges[..., 0, 0]
    return det ** 2


def det_via_simplex(state, n_samples: int = 10_000, rng=None,
                    exact_threshold: int = 200_000) -> tuple[float, float]:
    """det S from the simplex-volume (Gram) expansion of the moment matrix:

        det S = (d!^2/(d+1)!) int f(xi_0)..f(xi_d) V(xi_0..xi_d)^2 dxi_0..dxi_d

    with V the volume of the simplex spanned by xi_0..xi_d (equivalently,
    det[(1,xi_0),..,(1,xi_d)]^2 / (d+1)!; the factors coincide for d = 1).

    Treats the state as a single spatial cell (particle mode: all particles;
    grid mode: the velocity content of one x cell).  Small particle
    populations are enumerated exactly over all (d+1)-tuples (standard error
    0); otherwise Monte-Carlo sampling from the weighted mixture, with the
    standard error of the estimate.
    """
    if isinstance(state, GridState):
        if any(len(a) != 1 for a in state.x_axes):
            raise ValueError("grid det_via_simplex expects a single spatial cell")
        return _det_simplex_grid(state, n_samples, rng)
    if n_samples < 1000:
        raise ValueError("need at least 10^3 samples")
    xi, w = state.xi, state.w
    N, d = xi.shape
    if N ** (d + 1) <= exact_threshold:
        total = 0.0
        for combo in product(range(N), repeat=d + 1):
            verts = xi[list(combo)]
            total += np.prod(w[list(combo)]) * _gram_det_sq(verts[None])[0]
        return total / factorial(d + 1), 0.0
    rng = np.random.default_rng(rng)
    pw = w / w.sum()
    idx = rng.choice(N, size=(n_samples, d + 1), p=pw)
    verts = xi[idx]
    vals = _gram_det_sq(verts) * w.sum() ** (d + 1) / factorial(d + 1)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_samples))


def _det_simplex_grid(state: GridState, n_samples: int, rng) -> tuple[float, float]:
    if n_samples < 1000:
        raise ValueError("need at least 10^3 samples")
    rng = np.random.default_rng(rng)
    d = state.d
    f = state.f.reshape(-1)          # over the velocity lattice
    mesh = np.stack([m.reshape(-1) for m in state.xi_mesh()], axis=-1)
    mass = f.sum() * state.dxi_vol   # velocity-marginal mass density in the cell
    if mass <= 0:
        return 0.0, 0.0
    pw = f / f.sum()
    hs = np.array([a[1] - a[0] if len(a) > 1 else 1.0 for a in state.xi_axes])
    idx = rng.choice(len(f), size=(n_samples, d + 1), p=pw)
    verts = mesh[idx] + (rng.uniform(-0.5, 0.5, size=(n_samples, d + 1, d)) * hs)
    vals = _gram_det_sq(verts) * mass ** (d + 1) / factorial(d + 1)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_samples))


# ---------------------------------------------------------------------------
# transport and projective transform
# ---------------------------------------------------------------------------

def free_transport(state, t: float):
    """Collisionless evolution f(t, x, xi) = f0(x - t xi, xi).

    Particles advect exactly; grid states are shifted semi-Lagrangian with
    multilinear interpolation from the initial data (no step-by-step error
    accumulation).  Support reaching the spatial boundary raises.
    """
    if isinstance(state, ParticleState):
        return ParticleState(state.x + t * state.xi, state.xi.copy(), state.w.copy())
    d = state.d
    n_x = tuple(len(a) for a in state.x_axes)
    f_flat = state.f.reshape(*n_x, -1)
    xi_flat = np.stack([m.reshape(-1) for m in state.xi_mesh()], axis=-1)
    xm = np.meshgrid(*state.x_axes, indexing="ij")
    x_stack = np.stack(xm, axis=-1)
    out = np.empty_like(f_flat)
    for k in range(xi_flat.shape[0]):
        src = x_stack - t * xi_flat[k]
        if d == 1:
            out[..., k] = np.interp(src[..., 0], state.x_axes[0], f_flat[:, k],
                                    left=0.0, right=0.0)
        else:
            rgi = RegularGridInterpolator(state.x_axes, f_flat[..., k],
                                          method="linear", bounds_error=False,
                                          fill_value=0.0)
            out[..., k] = rgi(src.reshape(-1, d)).reshape(src.shape[:-1])
    new = out.reshape(state.f.shape)
    peak = float(state.f.max()) if state.f.size else 0.0
    for ax in range(d):
        for side in (0, -1):
            sl = [slice(None)] * d
            sl[ax] = side
            if np.any(new[tuple(sl)] > 1e-12 * max(peak, 1e-300)):
                raise ValueError("support left the spatial grid during transport")
    return GridState(state.x_axes, state.xi_axes, new)


def kinetic_push_forward(state, t: float, alpha: float,
                         chi_axes=None):
    """Transform a time-t state to the image time s = t/(1+t*alpha).

    New variables: y = x/(1+t*alpha), chi = (1+t*alpha) xi - alpha x.  The
    (x, xi) -> (y, chi) map is measure preserving, so particle weights are
    unchanged and the total mass is invariant.  Returns (s, new_state).
    """
    k = 1.0 + t * alpha
    if k <= 0:
        raise DegenerateMapError("1 + t*alpha <= 0")
    s = t / k
    if isinstance(state, ParticleState):
        y = state.x / k
        chi = k * state.xi - alpha * state.x
        return s, ParticleState(y, chi, state.w.copy())
    d = state.d
    y_axes = tuple(a / k for a in state.x_axes)
    if chi_axes is None:
        chi_axes = []
        for j in range(d):
            lo = k * state.xi_axes[j][0] - alpha * max(abs(state.x_axes[j][0]),
                                                       abs(state.x_axes[j][-1]))
            hi = k * state.xi_axes[j][-1] + alpha * max(abs(state.x_axes[j][0]),
                                                        abs(state.x_axes[j][-1]))
            chi_axes.append(np.linspace(lo, hi, 2 * len(state.xi_axes[j])))
        chi_axes = tuple(chi_axes)
    interp = RegularGridInterpolator(state.x_axes + state.xi_axes, state.f,
                                     method="linear", bounds_error=False,
                                     fill_value=0.0)
    ym = np.meshgrid(*y_axes, *chi_axes, indexing="ij")
    y_stack = np.stack(ym[:d], axis=-1)
    chi_stack = np.stack(ym[d:], axis=-1)
    x_src = k * y_stack
    xi_src = (chi_stack + alpha * y_stack) / k  # chi = k xi - alpha x, x = k y
    pts = np.concatenate([x_src, xi_src], axis=-1).reshape(-1, 2 * d)
    f_new = interp(pts).reshape(ym[0].shape)
    return s, GridState(y_axes, chi_axes, f_new)


def hyperplane_degeneracy_test(state, x_axes=None, tol: float = 1e-10) -> dict:
    """Smallest eigenvalue of the velocity covariance, per spatial cell.

    Degenerate (support in an affine hyperplane of velocity space) iff the
    smallest eigenvalue is <= tol; the corresponding eigenvector is the
    plane normal.  Zero-mass cells are skipped (masked entries).
    """
    S = moment_tensor(state, x_axes)
    S = np.asarray(S, dtype=float)
    if S.ndim == 2:
        S = S[None]
        squeeze = True
    else:
        squeeze = False
    rho = S[..., 0, 0]
    d = S.shape[-1] - 1
    out_deg = np.zeros(rho.shape, dtype=bool)
    out_norm = np.full((*rho.shape, d), np.nan)
    valid = rho > 0
    if np.any(valid):
        mean = np.zeros_like(S[..., 1:, 0])
        mean[valid] = S[..., 1:, 0][valid] / rho[valid][..., None]
        cov = np.zeros_like(S[..., 1:, 1:])
        cov[valid] = (S[..., 1:, 1:][valid] / rho[valid][..., None, None]
                      - mean[valid][..., :, None] * mean[valid][..., None, :])
        evals, evecs = np.linalg.eigh(cov)
        scale = np.maximum(np.abs(evals).max(axis=-1), 1.0)
        deg = evals[..., 0] <= tol * scale
        out_deg = valid & deg
        out_norm[out_deg] = evecs[out_deg][..., :, 0]
    result = {"is_degenerate": out_deg, "plane_normal": out_norm, "valid": valid}
    if squeeze:
        result = {k: v[0] for k, v in result.items()}
    return result


def moment_field(f0, st_grid: GridSpec) -> SymTensorField:
    """Space-time moment tensor field of the free transport of ``f0``.

    ``f0`` is the state at t = 0.  Grid states must share the grid's spatial
    cell centers; particle states are binned onto them per time slice.
    """
    d = st_grid.d
    if isinstance(f0, GridState):
        for ax, centers in zip(f0.x_axes, st_grid.x_centers):
            if len(ax) != len(centers) or np.max(np.abs(ax - centers)) > 1e-9:
                raise ValueError("grid state axes must match the space-time grid")
    vals = np.empty((*st_grid.shape, d + 1, d + 1))
    for it, t in enumerate(st_grid.t_centers):
        state_t = free_transport(f0, float(t))
        vals[it] = moment_tensor(state_t, st_grid.x_centers)
    return SymTensorField(st_grid, vals)
