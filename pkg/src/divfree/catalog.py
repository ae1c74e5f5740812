"""Built-in catalog of potentials, gas initial data, and kinetic states.

Every entry has a factory plus a parameter schema so the CLI can list and
construct them from config files; user configs may register more entries.
"""

from __future__ import annotations

import numpy as np

from .euler import GasState, gamma_d
from .kinetic import GridState, ParticleState
from .potentials import (exp_cosh_potential, norm_cone_potential,
                         polynomial_potential, quadratic_potential,
                         quartic_potential)
from .tensor_field import GridSpec, SymTensorField

__all__ = [
    "bump_profile",
    "gaussian_profile",
    "gas_bump",
    "gas_riemann",
    "gas_two_bump",
    "two_beam_state",
    "beam_cloud_state",
    "maxwellian_grid_state",
    "hyperplane_beams_state",
    "uniform_square_state",
    "gaussian_free_streaming_field",
    "POTENTIALS",
    "GAS_INITIAL_DATA",
    "KINETIC_STATES",
    "list_entries",
]


def bump_profile(r, radius: float):
    """Smooth compactly supported mollifier profile, equal to 1 at r = 0 and
    exactly 0 for |r| >= radius."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = np.abs(r) < radius
    q = (r[inside] / radius) ** 2
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - q))
    return out


def gaussian_profile(r, width: float):
    r = np.asarray(r, dtype=float)
    return np.exp(-0.5 * (r / width) ** 2)


def _radii(grid: GridSpec, center):
    xs = np.meshgrid(*grid.x_centers, indexing="ij")
    c = np.atleast_1d(np.asarray(center, dtype=float))
    return np.sqrt(sum((x - c[i]) ** 2 for i, x in enumerate(xs)))


def gas_bump(grid: GridSpec, amplitude: float = 0.5, radius: float = 1.0,
             center=0.0, rho_floor: float = 1e-9, gamma: float | None = None,
             model: str = "full", A: float = 1.0 / 3.0,
             velocity: float = 0.0, profile: str = "compact") -> GasState:
    """Density bump at rest on a quiet floor, entropy-uniform internal energy.

    With ``model='full'`` the internal energy is set to the isentropic value
    e = A rho^(gamma-1) / (gamma-1), so smooth evolution coincides with the
    isentropic gas until shocks form.
    """
    d = grid.d
    gamma = gamma_d(d) if gamma is None else gamma
    center = np.broadcast_to(np.atleast_1d(center).astype(float), (d,))
    r = _radii(grid, center)
    prof = bump_profile(r, radius) if profile == "compact" else gaussian_profile(r, radius)
    rho = rho_floor + amplitude * prof
    u = np.zeros((*grid.shape[1:], d))
    if velocity:
        u[..., 0] = velocity * prof
    if model == "isentropic":
        return GasState(rho, u, None, gamma, A=A)
    e = A * rho ** (gamma - 1.0) / (gamma - 1.0)
    return GasState(rho, u, e, gamma, A=A)


def gas_riemann(grid: GridSpec, left=(1.0, 0.0, 1.0), right=(0.125, 0.0, 0.1),
                x0: float = 0.0, gamma: float = 1.4) -> GasState:
    """1D shock-tube data: (rho, u, p) on each side of x0."""
    if grid.d != 1:
        raise ValueError("riemann data is one-dimensional")
    x = grid.x_centers[0]
    rho_l, u_l, p_l = left
    rho_r, u_r, p_r = right
    mask = x < x0
    rho = np.where(mask, rho_l, rho_r)
    u = np.where(mask, u_l, u_r)[:, None]
    p = np.where(mask, p_l, p_r)
    e = p / ((gamma - 1.0) * rho)
    return GasState(rho, u, e, gamma)


def gas_two_bump(grid: GridSpec, amplitude: float = 0.4, radius: float = 0.8,
                 separation: float = 2.5, rho_floor: float = 1e-9,
                 gamma: float | None = None, model: str = "full",
                 A: float = 1.0 / 3.0) -> GasState:
    """Two symmetric bumps, as in a mild collision experiment."""
    d = grid.d
    gamma = gamma_d(d) if gamma is None else gamma
    c1 = np.zeros(d)
    c2 = np.zeros(d)
    c1[0] = -separation / 2
    c2[0] = separation / 2
    rho = (rho_floor + amplitude * bump_profile(_radii(grid, c1), radius)
           + amplitude * bump_profile(_radii(grid, c2), radius))
    u = np.zeros((*grid.shape[1:], d))
    if model == "isentropic":
        return GasState(rho, u, None, gamma, A=A)
    e = A * rho ** (gamma - 1.0) / (gamma - 1.0)
    return GasState(rho, u, e, gamma, A=A)


# ---------------------------------------------------------------------------
# kinetic states
# ---------------------------------------------------------------------------

def two_beam_state(a: float = 0.0, b: float = 1.0, weight: float = 1.0,
                   x: float = 0.0, d: int = 1) -> ParticleState:
    """Two velocity beams at one point; det of the moment matrix is
    weight^2 (a-b)^2 for d = 1."""
    pos = np.zeros((2, d))
    pos[:, 0] = x
    xi = np.zeros((2, d))
    xi[0, 0] = a
    xi[1, 0] = b
    return ParticleState(pos, xi, [weight, weight])


def beam_cloud_state(n: int = 400, d: int = 1, spread_x: float = 1.0,
                     beams=(-0.5, 0.7), beam_width: float = 0.05,
                     seed: int = 0) -> ParticleState:
    """Spatially spread particles drawn around a few velocity beams."""
    rng = np.random.default_rng(seed)
    x = rng.normal(scale=spread_x, size=(n, d))
    which = rng.integers(0, len(beams), size=n)
    xi = rng.normal(scale=beam_width, size=(n, d))
    xi[:, 0] += np.asarray(beams, dtype=float)[which]
    w = np.full(n, 1.0 / n)
    return ParticleState(x, xi, w)


def maxwellian_grid_state(d: int = 1, n_x: int = 48, n_xi: int = 48,
                          x_extent: float = 4.0, xi_extent: float = 4.0,
                          sigma: float = 0.6, theta: float = 0.4,
                          u0: float = 0.0, support_fraction: float = 0.45) -> GridState:
    """Gaussian-in-x, maxwellian-in-xi density, tapered to compact support.

    Mollifier tapers (radius = support_fraction * extent) make the support
    honest so free transport stays inside a grid sized for
    x_extent >= x-support + t * xi-support.
    """
    def centers(lo, hi, n):
        h = (hi - lo) / n
        return lo + (np.arange(n) + 0.5) * h

    x_axes = tuple(centers(-x_extent, x_extent, n_x) for _ in range(d))
    xi_axes = tuple(centers(-xi_extent + u0, xi_extent + u0, n_xi) for _ in range(d))
    xm = np.meshgrid(*x_axes, indexing="ij")
    xim = np.meshgrid(*xi_axes, indexing="ij")
    rx = np.sqrt(sum(m ** 2 for m in xm))
    rxi = np.sqrt(sum((m - u0) ** 2 for m in xim))
    fx = np.exp(-0.5 * rx ** 2 / sigma ** 2) * bump_profile(rx, support_fraction * x_extent)
    fxi = np.exp(-0.5 * rxi ** 2 / theta) * bump_profile(rxi, support_fraction * xi_extent)
    f = fx[(...,) + (None,) * d] * fxi[(None,) * d]
    return GridState(x_axes, xi_axes, f)


def hyperplane_beams_state(n_beams: int = 3, d: int = 2, x: float = 0.0,
                           seed: int = 1) -> ParticleState:
    """Beams confined to the hyperplane xi_d = 0 of velocity space."""
    rng = np.random.default_rng(seed)
    pos = np.zeros((n_beams, d))
    pos[:, 0] = x
    xi = np.zeros((n_beams, d))
    xi[:, :-1] = rng.normal(size=(n_beams, d - 1))
    return ParticleState(pos, xi, np.full(n_beams, 1.0))


def uniform_square_state(n_xi: int = 12, d: int = 2) -> GridState:
    """f = 1 on the unit velocity square at a single spatial cell."""
    h = 1.0 / n_xi
    xi_ax = (np.arange(n_xi) + 0.5) * h
    x_axes = tuple(np.array([0.0]) for _ in range(d))
    f = np.ones((1,) * d + (n_xi,) * d)
    return GridState(x_axes, tuple(xi_ax for _ in range(d)), f)


def gaussian_free_streaming_field(grid: GridSpec, sigma: float = 1.0,
                                  theta: float = 0.5, u0=0.0,
                                  amplitude: float = 1.0) -> SymTensorField:
    """Closed-form moment tensor of a freely transported gaussian beam.

    f0(x, xi) = amplitude * prod_i exp(-x_i^2/(2 sigma^2)) exp(-(xi_i-u0_i)^2/(2 theta))
    transports to a density whose velocity moments are gaussian integrals:
    per axis a = t^2/sigma^2 + 1/theta, b_i = x_i t/sigma^2 + u0_i/theta, and

        rho  = amplitude * prod_i sqrt(2 pi / a) exp(-(c_i - b_i^2/a)/2)
        ubar = b/a,   covariance = I/a,
        S    = [[rho, rho ubar^T], [rho ubar, rho (ubar (x) ubar + I/a)]].

    Analytically divergence-free (it is the moment tensor of an exact
    free-transport solution).
    """
    d = grid.d
    u0 = np.broadcast_to(np.atleast_1d(u0).astype(float), (d,))

    def fn(pts):
        t = pts[..., 0]
        x = pts[..., 1:]
        a = t ** 2 / sigma ** 2 + 1.0 / theta
        b = x * (t / sigma ** 2)[..., None] + u0 / theta
        c = x ** 2 / sigma ** 2 + u0 ** 2 / theta
        log_rho = 0.5 * d * np.log(2 * np.pi) - 0.5 * d * np.log(a) \
            - 0.5 * np.sum(c - b ** 2 / a[..., None], axis=-1)
        rho = amplitude * np.exp(log_rho)
        ubar = b / a[..., None]
        S = np.zeros((*t.shape, d + 1, d + 1))
        S[..., 0, 0] = rho
        m = rho[..., None] * ubar
        S[..., 1:, 0] = m
        S[..., 0, 1:] = m
        S[..., 1:, 1:] = rho[..., None, None] * (
            ubar[..., :, None] * ubar[..., None, :])
        idx = np.arange(d)
        S[..., 1 + idx, 1 + idx] += (rho / a)[..., None]
        return S

    return SymTensorField.from_function(grid, fn)


# ---------------------------------------------------------------------------
# registries
# ---------------------------------------------------------------------------

POTENTIALS = {
    "quadratic": {
        "factory": quadratic_potential,
        "params": {"a": "curvature (default 1)", "d": "spatial dimension"},
    },
    "exp-cosh": {
        "factory": exp_cosh_potential,
        "params": {},
    },
    "quartic": {
        "factory": quartic_potential,
        "params": {"d": "spatial dimension"},
    },
    "norm-cone": {
        "factory": norm_cone_potential,
        "params": {"c": "slope (gradient-image radius)", "p": "apex (t0, x0)"},
    },
    "polynomial": {
        "factory": polynomial_potential,
        "params": {"coeffs": "matrix of t^i x^j coefficients"},
    },
}

GAS_INITIAL_DATA = {
    "gaussian-bump": {
        "factory": lambda grid, **kw: gas_bump(grid, profile="gaussian", **kw),
        "params": {"amplitude": "peak density", "radius": "width",
                   "gamma": "adiabatic exponent (default mono-atomic)",
                   "model": "'full' or 'isentropic'", "A": "entropy constant",
                   "velocity": "initial axial velocity amplitude"},
    },
    "compact-bump": {
        "factory": gas_bump,
        "params": {"amplitude": "peak density", "radius": "support radius",
                   "gamma": "adiabatic exponent (default mono-atomic)",
                   "model": "'full' or 'isentropic'", "A": "entropy constant",
                   "velocity": "initial axial velocity amplitude"},
    },
    "riemann": {
        "factory": gas_riemann,
        "params": {"left": "(rho, u, p) left state", "right": "(rho, u, p) right state",
                   "x0": "interface position", "gamma": "adiabatic exponent"},
    },
    "two-bump": {
        "factory": gas_two_bump,
        "params": {"amplitude": "peak density", "radius": "support radius",
                   "separation": "center distance", "gamma": "adiabatic exponent",
                   "model": "'full' or 'isentropic'", "A": "entropy constant"},
    },
}

KINETIC_STATES = {
    "two-beam": {
        "factory": two_beam_state,
        "params": {"a": "first beam velocity", "b": "second beam velocity",
                   "weight": "beam weight", "d": "dimension"},
    },
    "beam-cloud": {
        "factory": beam_cloud_state,
        "params": {"n": "particle count", "d": "dimension",
                   "beams": "beam velocities", "seed": "RNG seed"},
    },
    "maxwellian": {
        "factory": maxwellian_grid_state,
        "params": {"d": "dimension", "n_x": "spatial cells", "n_xi": "velocity cells",
                   "sigma": "spatial width", "theta": "temperature"},
    },
    "hyperplane-beams": {
        "factory": hyperplane_beams_state,
        "params": {"n_beams": "beam count", "d": "dimension (>= 2)", "seed": "RNG seed"},
    },
    "uniform-square": {
        "factory": uniform_square_state,
        "params": {"n_xi": "velocity cells per axis", "d": "dimension"},
    },
}


def list_entries(user_entries: dict | None = None) -> dict:
    """Merged catalog description, optionally extended by user config."""
    out = {
        "potentials": {k: sorted(v["params"]) for k, v in POTENTIALS.items()},
        "gas": {k: sorted(v["params"]) for k, v in GAS_INITIAL_DATA.items()},
        "kinetic": {k: sorted(v["params"]) for k, v in KINETIC_STATES.items()},
    }
    for section, entries in (user_entries or {}).items():
        out.setdefault(section, {})
        for name, spec in entries.items():
            out[section][name] = sorted(spec.get("params", {}))
    return out
