"""Reference solutions used to validate the finite-volume solver.

These are deliberately independent code paths: an exact Riemann solver for
the 1D ideal-gas shock tube (Toro's iteration) and characteristic tracing
for the inviscid Burgers equation, which governs both Riemann invariants of
the 1D gamma = 3 gas (with A = 1/3, so the sound speed equals rho).
"""

from __future__ import annotations

import numpy as np

__all__ = ["riemann_exact", "burgers_characteristic", "gamma3_invariants_exact"]


def _f_K(p, rho_K, p_K, c_K, gamma):
    """Toro's flux function for one side of the star region, plus derivative."""
    A = 2.0 / ((gamma + 1.0) * rho_K)
    B = (gamma - 1.0) / (gamma + 1.0) * p_K
    if p > p_K:  # shock
        sq = np.sqrt(A / (p + B))
        f = (p - p_K) * sq
        df = sq * (1.0 - 0.5 * (p - p_K) / (p + B))
    else:  # rarefaction
        pr = p / p_K
        f = 2.0 * c_K / (gamma - 1.0) * (pr ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        df = 1.0 / (rho_K * c_K) * pr ** (-(gamma + 1.0) / (2.0 * gamma))
    return f, df


def _p_star(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma, tol=1e-12, max_iter=100):
    c_l = np.sqrt(gamma * p_l / rho_l)
    c_r = np.sqrt(gamma * p_r / rho_r)
    du = u_r - u_l
    if 2.0 * (c_l + c_r) / (gamma - 1.0) <= du:
        raise ValueError("vacuum-generating Riemann data")
    p = max(0.5 * (p_l + p_r) - 0.125 * du * (rho_l + rho_r) * (c_l + c_r), 1e-8 * min(p_l, p_r))
    for _ in range(max_iter):
        f_l, df_l = _f_K(p, rho_l, p_l, c_l, gamma)
        f_r, df_r = _f_K(p, rho_r, p_r, c_r, gamma)
        g = f_l + f_r + du
        step = g / (df_l + df_r)
        p_new = p - step
        if p_new <= 0:
            p_new = 0.5 * p
        if abs(p_new - p) < tol * (1.0 + p):
            p = p_new
            break
        p = p_new
    f_l, _ = _f_K(p, rho_l, p_l, c_l, gamma)
    f_r, _ = _f_K(p, rho_r, p_r, c_r, gamma)
    u_star = 0.5 * (u_l + u_r) + 0.5 * (f_r - f_l)
    return p, u_star


def riemann_exact(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma, xi):
    """Sample the exact Riemann solution at similarity coordinates xi = x/t.

    Returns (rho, u, p) arrays, plus a dict of wave speeds:
    left/right head/tail (rarefactions) or shock speeds, and the contact.
    """
    xi = np.asarray(xi, dtype=float)
    c_l = np.sqrt(gamma * p_l / rho_l)
    c_r = np.sqrt(gamma * p_r / rho_r)
    p_s, u_s = _p_star(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma)

    gp = (gamma + 1.0) / (2.0 * gamma)
    gm = (gamma - 1.0) / (2.0 * gamma)
    waves = {"contact": u_s}

    rho = np.empty_like(xi)
    u = np.empty_like(xi)
    p = np.empty_like(xi)

    # left wave
    if p_s > p_l:  # shock
        S_l = u_l - c_l * np.sqrt(gp * p_s / p_l + gm)
        rho_sl = rho_l * ((p_s / p_l + (gamma - 1.0) / (gamma + 1.0))
                          / ((gamma - 1.0) / (gamma + 1.0) * p_s / p_l + 1.0))
        waves["left"] = ("shock", S_l)
        left_mask = xi < S_l
        mid_l_mask = (xi >= S_l) & (xi < u_s)
        rho[left_mask], u[left_mask], p[left_mask] = rho_l, u_l, p_l
        rho[mid_l_mask], u[mid_l_mask], p[mid_l_mask] = rho_sl, u_s, p_s
    else:  # rarefaction
        c_sl = c_l * (p_s / p_l) ** gm
        head, tail = u_l - c_l, u_s - c_sl
        rho_sl = rho_l * (p_s / p_l) ** (1.0 / gamma)
        waves["left"] = ("rarefaction", head, tail)
        left_mask = xi < head
        fan_mask = (xi >= head) & (xi < tail)
        mid_l_mask = (xi >= tail) & (xi < u_s)
        rho[left_mask], u[left_mask], p[left_mask] = rho_l, u_l, p_l
        if np.any(fan_mask):
            xf = xi[fan_mask]
            u_f = 2.0 / (gamma + 1.0) * (c_l + (gamma - 1.0) / 2.0 * u_l + xf)
            c_f = c_l - (gamma - 1.0) / 2.0 * (u_f - u_l)
            rho[fan_mask] = rho_l * (c_f / c_l) ** (2.0 / (gamma - 1.0))
            u[fan_mask] = u_f
            p[fan_mask] = p_l * (c_f / c_l) ** (2.0 * gamma / (gamma - 1.0))
        rho[mid_l_mask], u[mid_l_mask], p[mid_l_mask] = rho_sl, u_s, p_s

    # right wave
    if p_s > p_r:  # shock
        S_r = u_r + c_r * np.sqrt(gp * p_s / p_r + gm)
        rho_sr = rho_r * ((p_s / p_r + (gamma - 1.0) / (gamma + 1.0))
                          / ((gamma - 1.0) / (gamma + 1.0) * p_s / p_r + 1.0))
        waves["right"] = ("shock", S_r)
        right_mask = xi >= S_r
        mid_r_mask = (xi >= u_s) & (xi < S_r)
        rho[right_mask], u[right_mask], p[right_mask] = rho_r, u_r, p_r
        rho[mid_r_mask], u[mid_r_mask], p[mid_r_mask] = rho_sr, u_s, p_s
    else:  # rarefaction
        c_sr = c_r * (p_s / p_r) ** gm
        head, tail = u_r + c_r, u_s + c_sr
        rho_sr = rho_r * (p_s / p_r) ** (1.0 / gamma)
        waves["right"] = ("rarefaction", head, tail)
        right_mask = xi >= head
        fan_mask = (xi >= tail) & (xi < head)
        mid_r_mask = (xi >= u_s) & (xi < tail)
        rho[right_mask], u[right_mask], p[right_mask] = rho_r, u_r, p_r
        if np.any(fan_mask):
            xf = xi[fan_mask]
            u_f = 2.0 / (gamma + 1.0) * (-c_r + (gamma - 1.0) / 2.0 * u_r + xf)
            c_f = c_r + (gamma - 1.0) / 2.0 * (u_f - u_r)
            rho[fan_mask] = rho_r * (c_f / c_r) ** (2.0 / (gamma - 1.0))
            u[fan_mask] = u_f
            p[fan_mask] = p_r * (c_f / c_r) ** (2.0 * gamma / (gamma - 1.0))
        rho[mid_r_mask], u[mid_r_mask], p[mid_r_mask] = rho_sr, u_s, p_s

    return rho, u, p, waves


def burgers_characteristic(w0, dw0, x, t, tol=1e-13, max_iter=100):
    """Pre-shock solution of w_t + w w_x = 0 by characteristic back-tracing.

    Solves x* + t w0(x*) = x per point by Newton; requires
    t < 1 / max(-w0').
    """
    x = np.asarray(x, dtype=float)
    xs = x.copy()
    for _ in range(max_iter):
        g = xs + t * w0(xs) - x
        dg = 1.0 + t * dw0(xs)
        if np.any(dg <= 0):
            raise ValueError("characteristics cross: past the shock time")
        step = g / dg
        xs = xs - step
        if np.max(np.abs(step)) < tol * (1.0 + np.max(np.abs(x))):
            break
    return w0(xs)


def gamma3_invariants_exact(rho0, drho0, u0, du0, x, t):
    """Exact pre-shock (rho, u) for the 1D gamma=3, A=1/3 isentropic gas.

    Both Riemann invariants w_pm = u +- rho solve independent Burgers
    equations; the state is recovered as rho = (w_+ - w_-)/2, u = (w_+ + w_-)/2.
    """
    wp = burgers_characteristic(lambda q: u0(q) + rho0(q),
                                lambda q: du0(q) + drho0(q), x, t)
    wm = burgers_characteristic(lambda q: u0(q) - rho0(q),
                                lambda q: du0(q) - drho0(q), x, t)
    return 0.5 * (wp - wm), 0.5 * (wp + wm)
