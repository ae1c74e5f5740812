"""Standard corpus of tensors, flows, and kinetic states used by the
verification campaigns and the acceptance suite.

Builders are resolution-parameterized so refinement (slope) studies run the
same construction at n, 2n, 4n.
"""

from __future__ import annotations

import numpy as np

from . import catalog
from .euler import EulerFlow, mass_momentum_tensor, solve
from .potentials import cofactor_hessian, exp_cosh_potential, rigidity_form_field
from .tensor_field import GridSpec, SymTensorField

__all__ = ["corpus_tensor", "corpus_flow", "TENSOR_NAMES", "FLOW_NAMES",
           "fit_slope", "refinement_slopes"]

TENSOR_NAMES = ("constant", "gas", "cofactor", "rigidity", "kinetic-moment")


def _constant_tensor(n: int) -> SymTensorField:
    grid = GridSpec(1, (0.0, 1.0), (-1.0, 1.0), n, n)
    eye = np.broadcast_to(np.eye(2), (*grid.shape, 2, 2)).copy()
    return SymTensorField(grid, eye)


def _gas_tensor(n: int) -> SymTensorField:
    grid = GridSpec(1, (0.0, 0.4), (-3.0, 3.0), n // 2, n)
    # the bump spreads to |x| < 1.5 over this horizon; a thin margin suffices
    # even on the coarse members of refinement ladders
    flow = solve(catalog.gas_bump(grid, amplitude=0.5, radius=1.0), grid,
                 support_margin=3)
    return mass_momentum_tensor(flow)


def _cofactor_tensor(n: int) -> SymTensorField:
    grid = GridSpec(1, (0.2, 1.2), (-1.0, 1.0), n, n)
    return cofactor_hessian(exp_cosh_potential(), grid)


def _rigidity_tensor(n: int) -> SymTensorField:
    grid = GridSpec(1, (0.2, 1.2), (0.4, 1.4), n, n)

    def mu(w):
        angle = np.arctan2(w[..., 1], w[..., 0])
        return 1.0 + 0.5 * np.cos(angle)

    return rigidity_form_field(mu, (0.0, 0.0), grid)


def _kinetic_moment_tensor(n: int) -> SymTensorField:
    grid = GridSpec(1, (0.1, 0.9), (-4.0, 4.0), n, n)
    return catalog.gaussian_free_streaming_field(grid, sigma=1.0, theta=0.5,
                                                 u0=0.2)


def corpus_tensor(name: str, n: int = 64) -> SymTensorField:
    """One of the five standard divergence-free tensors at resolution n."""
    builders = {
        "constant": _constant_tensor,
        "gas": _gas_tensor,
        "cofactor": _cofactor_tensor,
        "rigidity": _rigidity_tensor,
        "kinetic-moment": _kinetic_moment_tensor,
    }
    if name not in builders:
        raise KeyError(f"unknown corpus tensor {name!r}; have {sorted(builders)}")
    return builders[name](n)


FLOW_NAMES = ("bump-d1-monoatomic", "twobump-d1-isentropic",
              "bump-d2-monoatomic", "bump-d1-diatomic")

#: pre-shock windows of the same data, for smooth-flow diagnostics
SHORT_FLOW_NAMES = ("bump-d1-monoatomic-short", "bump-d1-diatomic-short")


def corpus_flow(name: str, n: int = 256) -> EulerFlow:
    """Solver corpus: desk-scale admissible flows, d in {1, 2}."""
    if name == "bump-d1-monoatomic":
        grid = GridSpec(1, (0.0, 0.8), (-4.0, 4.0), n // 2, n)
        return solve(catalog.gas_bump(grid, amplitude=0.5, radius=1.0), grid)
    if name == "bump-d1-monoatomic-short":
        grid = GridSpec(1, (0.0, 0.4), (-3.0, 3.0), n // 2, n)
        return solve(catalog.gas_bump(grid, amplitude=0.5, radius=1.0), grid,
                     support_margin=3)
    if name == "bump-d1-diatomic-short":
        grid = GridSpec(1, (0.0, 0.4), (-4.0, 4.0), n // 2, n)
        state = catalog.gas_bump(grid, amplitude=0.5, radius=1.0, gamma=1.4, A=0.5)
        return solve(state, grid, support_margin=3)
    if name == "twobump-d1-isentropic":
        grid = GridSpec(1, (0.0, 0.8), (-5.0, 5.0), n // 2, n)
        state = catalog.gas_two_bump(grid, amplitude=0.4, radius=0.8,
                                     separation=2.5, model="isentropic")
        return solve(state, grid)
    if name == "bump-d2-monoatomic":
        n2 = max(n // 4, 48)
        grid = GridSpec(2, (0.0, 0.6), ((-3.0, 3.0), (-3.0, 3.0)), n2, (n2, n2))
        # the lower floor keeps the (floor-skipping) direct double integral
        # within 1e-6 of the closed-form minimizer identity
        return solve(catalog.gas_bump(grid, amplitude=0.5, radius=1.0,
                                      rho_floor=1e-10), grid)
    if name == "bump-d1-diatomic":
        # gamma=1.4 expands fast (vacuum front at 2c/(gamma-1)); wide domain
        grid = GridSpec(1, (0.0, 0.8), (-6.0, 6.0), n, n)
        state = catalog.gas_bump(grid, amplitude=0.5, radius=1.0, gamma=1.4, A=0.5)
        return solve(state, grid)
    raise KeyError(f"unknown corpus flow {name!r}; have {FLOW_NAMES}")


# ---------------------------------------------------------------------------
# refinement studies
# ---------------------------------------------------------------------------

def fit_slope(hs, errors) -> float:
    """Least-squares slope of log(error) against log(h)."""
    hs = np.asarray(hs, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0):
        return float("inf")  # exact zeros: better than any finite order
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])


def refinement_slopes(measure, ns, zero_floor: float = 1e-12) -> dict:
    """Run ``measure(n) -> error`` over resolutions and fit the decay slope.

    Errors below ``zero_floor`` mean the quantity is exact at machine level;
    the slope is then reported as inf and counts as converged.
    """
    ns = list(ns)
    errors = [float(measure(n)) for n in ns]
    hs = [1.0 / n for n in ns]
    if max(errors) <= zero_floor:
        return {"ns": ns, "errors": errors, "slope": float("inf"), "exact": True}
    return {"ns": ns, "errors": errors, "slope": fit_slope(hs, errors),
            "exact": False}
