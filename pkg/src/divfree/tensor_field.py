"""Sampled symmetric space-time tensor fields and their basic diagnostics.

A field lives on a cell-centered rectangular grid over (t, x_1, .., x_d),
d in {1, 2}.  Per cell it stores a symmetric (1+d) x (1+d) matrix S with
the block layout

    S = [[rho, m^T],
         [m,   T  ]]

rho scalar, m a d-vector, T a d x d symmetric block.  All operations here
are pure functions of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import RegularGridInterpolator

__all__ = [
    "GridSpec",
    "SymTensorField",
    "PositivityReport",
    "discrete_divergence",
    "positivity_report",
    "det_power",
    "space_time_integral",
    "schur_stress",
    "measure_norm",
    "slice_measure_norm",
]


@dataclass(frozen=True)
class GridSpec:
    """Cell-centered space-time grid, row-major over (t, x_1, .., x_d).

    ``x_range`` accepts one (lo, hi) pair (broadcast over axes) or one pair
    per axis; ``n_x`` and ``periodic`` accept a scalar or one entry per axis.
    """

    d: int
    t_range: tuple[float, float]
    x_range: tuple[tuple[float, float], ...]
    n_t: int
    n_x: tuple[int, ...]
    periodic: tuple[bool, ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError("only d=1 and d=2 grids are supported")
        object.__setattr__(self, "t_range", (float(self.t_range[0]), float(self.t_range[1])))
        xr = self.x_range
        if np.isscalar(xr[0]):  # a single (lo, hi) pair
            xr = tuple(xr for _ in range(self.d))
        xr = tuple((float(lo), float(hi)) for lo, hi in xr)
        object.__setattr__(self, "x_range", xr)
        nx = self.n_x
        if np.isscalar(nx):
            nx = tuple(nx for _ in range(self.d))
        object.__setattr__(self, "n_x", tuple(int(n) for n in nx))
        per = self.periodic
        if per is None:
            per = tuple(False for _ in range(self.d))
        elif np.isscalar(per):
            per = tuple(bool(per) for _ in range(self.d))
        object.__setattr__(self, "periodic", tuple(bool(p) for p in per))
        if not len(self.x_range) == len(self.n_x) == len(self.periodic) == self.d:
            raise ValueError("x_range, n_x, periodic must have one entry per spatial axis")
        if self.n_t < 2 or any(n < 2 for n in self.n_x):
            raise ValueError("need at least 2 cells per axis")
        if not self.t_range[0] < self.t_range[1]:
            raise ValueError("empty time range")
        for lo, hi in self.x_range:
            if not lo < hi:
                raise ValueError("empty spatial range")

    # -- geometry ----------------------------------------------------------
    @property
    def n(self) -> int:
        """Matrix dimension 1+d."""
        return 1 + self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_t, *self.n_x)

    @property
    def dt(self) -> float:
        return (self.t_range[1] - self.t_range[0]) / self.n_t

    @property
    def dx(self) -> tuple[float, ...]:
        return tuple((hi - lo) / n for (lo, hi), n in zip(self.x_range, self.n_x))

    @property
    def spacings(self) -> tuple[float, ...]:
        return (self.dt, *self.dx)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    @property
    def t_centers(self) -> np.ndarray:
        t0, t1 = self.t_range
        return t0 + (np.arange(self.n_t) + 0.5) * self.dt

    @property
    def x_centers(self) -> tuple[np.ndarray, ...]:
        out = []
        for (lo, hi), n in zip(self.x_range, self.n_x):
            h = (hi - lo) / n
            out.append(lo + (np.arange(n) + 0.5) * h)
        return tuple(out)

    @property
    def axes(self) -> tuple[np.ndarray, ...]:
        return (self.t_centers, *self.x_centers)

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        """Cell-center coordinate arrays of shape ``self.shape``, (t, x_1, ..)."""
        return tuple(np.meshgrid(*self.axes, indexing="ij"))

    def points(self) -> np.ndarray:
        """All cell centers as an array of shape (*shape, 1+d)."""
        return np.stack(self.meshgrid(), axis=-1)

    def refine(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.d, self.t_range, self.x_range,
                        self.n_t * factor, tuple(n * factor for n in self.n_x),
                        self.periodic)


@dataclass(frozen=True)
class SymTensorField:
    """Per-cell symmetric (1+d) x (1+d) matrices on a :class:`GridSpec`."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        n = self.grid.n
        if v.shape != (*self.grid.shape, n, n):
            raise ValueError(f"values shape {v.shape} does not match grid "
                             f"{(*self.grid.shape, n, n)}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: GridSpec, fn: Callable[[np.ndarray], np.ndarray],
                      symmetrize: bool = False) -> "SymTensorField":
        """Sample ``fn(points) -> (..., 1+d, 1+d)`` at all cell centers."""
        vals = np.asarray(fn(grid.points()), dtype=float)
        if symmetrize:
            vals = 0.5 * (vals + np.swapaxes(vals, -1, -2))
        return cls(grid, vals)

    # -- blocks ------------------------------------------------------------
    @property
    def rho(self) -> np.ndarray:
        return self.values[..., 0, 0]

    @property
    def m(self) -> np.ndarray:
        return self.values[..., 1:, 0]

    @property
    def T(self) -> np.ndarray:
        return self.values[..., 1:, 1:]

    def symmetry_error(self) -> float:
        return float(np.max(np.abs(self.values - np.swapaxes(self.values, -1, -2))))

    def interpolator(self, extrapolate: bool = True):
        """Multilinear interpolant of the matrix field over (t, x)."""
        rgi = RegularGridInterpolator(
            self.grid.axes, self.values, method="linear",
            bounds_error=False, fill_value=None if extrapolate else 0.0)
        return rgi

    def __add__(self, other: "SymTensorField") -> "SymTensorField":
        return SymTensorField(self.grid, self.values + other.values)

    def __rmul__(self, c: float) -> "SymTensorField":
        return SymTensorField(self.grid, float(c) * self.values)


def _axis_gradient(arr: np.ndarray, h: float, axis: int, periodic: bool) -> np.ndarray:
    """Central differences; one-sided first order at non-periodic boundaries."""
    if periodic:
        return (np.roll(arr, -1, axis=axis) - np.roll(arr, 1, axis=axis)) / (2.0 * h)
    return np.gradient(arr, h, axis=axis, edge_order=1)


def discrete_divergence(S: SymTensorField) -> np.ndarray:
    """Row-wise divergence: out[..., i] = d_t S[i,0] + sum_j d_{x_j} S[i,j].

    Exact (to roundoff) for tensor entries affine in (t, x).
    """
    grid = S.grid
    if grid.n_t < 2 or any(n < 2 for n in grid.n_x):
        raise ValueError("grid too small for finite differences")
    n = grid.n
    out = np.zeros((*grid.shape, n))
    for i in range(n):
        acc = _axis_gradient(S.values[..., i, 0], grid.dt, 0, False)
        for j in range(grid.d):
            acc = acc + _axis_gradient(S.values[..., i, 1 + j], grid.dx[j],
                                       1 + j, grid.periodic[j])
        out[..., i] = acc
    return out


@dataclass(frozen=True)
class PositivityReport:
    min_eigenvalue: float
    fraction_psd: float
    min_eig_field: np.ndarray = field(repr=False)


def positivity_report(S: SymTensorField, tol: float = 1e-10) -> PositivityReport:
    """Per-cell minimal eigenvalue and the fraction of cells PSD up to ``tol``."""
    eigs = np.linalg.eigvalsh(S.values)
    min_field = eigs[..., 0]
    frac = float(np.mean(min_field >= -tol))
    return PositivityReport(float(min_field.min()), frac, min_field)


def det_power(S: SymTensorField, exponent: float,
              return_clamp_count: bool = False):
    """Per-cell (max(det S, 0))**exponent.

    Negative determinants (discretization noise on semidefinite tensors) are
    clamped to zero; the clamp tally is available via ``return_clamp_count``.
    """
    dets = np.linalg.det(S.values)
    n_clamped = int(np.count_nonzero(dets < 0))
    out = np.power(np.maximum(dets, 0.0), exponent)
    if return_clamp_count:
        return out, n_clamped
    return out


def space_time_integral(values: np.ndarray, grid: GridSpec,
                        weight: str = "1") -> float:
    """Midpoint-rule integral of weight(t) * values over the grid.

    weight is "1" or "t".
    """
    v = np.asarray(values, dtype=float)
    if v.shape != grid.shape:
        raise ValueError("field shape does not match grid")
    if weight == "1":
        w = 1.0
    elif weight == "t":
        w = grid.t_centers.reshape((-1,) + (1,) * grid.d)
    else:
        raise ValueError("weight must be '1' or 't'")
    return float(np.sum(v * w) * grid.cell_volume)


def schur_stress(S: SymTensorField, rho_floor: float = 0.0) -> np.ndarray:
    """Schur complement sigma = T - m (x) m / rho where rho > rho_floor, else NaN."""
    rho = S.rho
    m = S.m
    sigma = np.full_like(S.T, np.nan)
    ok = rho > rho_floor
    mm = m[..., :, None] * m[..., None, :]
    sigma[ok] = S.T[ok] - mm[ok] / rho[ok][..., None, None]
    return sigma


def measure_norm(values: np.ndarray, grid: GridSpec) -> float:
    """Total-variation mass of a (possibly vector-valued) density field.

    Scalar fields: sum |v| * cell volume.  Vector fields (trailing axis):
    Euclidean norm per cell.
    """
    v = np.asarray(values, dtype=float)
    if v.shape == grid.shape:
        mag = np.abs(v)
    elif v.shape[:-1] == grid.shape:
        mag = np.sqrt(np.sum(v * v, axis=-1))
    else:
        raise ValueError("field shape does not match grid")
    return float(np.sum(mag) * grid.cell_volume)


def slice_measure_norm(values: np.ndarray, grid: GridSpec) -> float:
    """Total-variation mass over one spatial slice (no dt factor)."""
    v = np.asarray(values, dtype=float)
    if v.shape == grid.shape[1:]:
        mag = np.abs(v)
    elif v.shape[:-1] == grid.shape[1:]:
        mag = np.sqrt(np.sum(v * v, axis=-1))
    else:
        raise ValueError("slice shape does not match spatial grid")
    dx_vol = float(np.prod(grid.dx))
    return float(np.sum(mag) * dx_vol)
