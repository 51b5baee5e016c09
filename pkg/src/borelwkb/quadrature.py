"""Adaptive quadrature along complex polyline contours.

Panels use Gauss-Legendre rules; the error estimate per panel compares an
8-point rule against a 16-point rule and panels are bisected until the
requested absolute tolerance is met.  Integrands may return arrays (the
same contour integrates a whole batch of parameter values at once); the
panel error is then the max over the batch.

A square-root endpoint weakness (path ending at a turning point) is
handled by the ``sqrt_end`` flags: the affected panel is reparametrized
with t = u**2 which makes the integrand analytic again.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureFailure

_GL_CACHE: dict = {}


def _gl(n: int):
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (x, w)
    return _GL_CACHE[n]


def gauss_panel(f, a: complex, b: complex, n: int = 16):
    """Fixed n-point Gauss-Legendre integral of f over the segment [a, b]."""
    x, w = _gl(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    pts = mid + half * x
    vals = f(pts)
    vals = np.asarray(vals)
    if vals.ndim == 1:
        return half * np.sum(w * vals)
    return half * np.tensordot(vals, w, axes=([-1], [0]))


def _panel_pair(f, a, b):
    lo = gauss_panel(f, a, b, 8)
    hi = gauss_panel(f, a, b, 16)
    err = np.max(np.abs(hi - lo))
    return hi, err


def adaptive_segment(f, a: complex, b: complex, tol: float, max_depth: int = 24):
    """Adaptive bisection integral of f over one segment."""
    total = None
    stack = [(a, b, tol, 0)]
    while stack:
        x0, x1, t, depth = stack.pop()
        val, err = _panel_pair(f, x0, x1)
        if err <= t or depth >= max_depth:
            if err > t and depth >= max_depth:
                raise QuadratureFailure(
                    f"segment [{x0}, {x1}] stalled at error {err:.3e} > {t:.3e}"
                )
            total = val if total is None else total + val
        else:
            xm = 0.5 * (x0 + x1)
            stack.append((x0, xm, 0.5 * t, depth + 1))
            stack.append((xm, x1, 0.5 * t, depth + 1))
    return total


def integrate_polyline(f, waypoints, tol: float = 1e-10,
                       sqrt_start: bool = False, sqrt_end: bool = False):
    """Integrate f(z) dz along the polyline through ``waypoints``.

    sqrt_start / sqrt_end flag an integrable z**(1/2)-type endpoint (a path
    terminating exactly on a turning point); the touching segment is then
    mapped through t = u**2 so plain Gauss panels converge.
    """
    pts = [complex(z) for z in waypoints]
    if len(pts) < 2:
        return 0.0 + 0.0j
    nseg = len(pts) - 1
    seg_tol = tol / nseg
    total = 0.0 + 0.0j
    for k in range(nseg):
        a, b = pts[k], pts[k + 1]
        if a == b:
            continue
        if sqrt_start and k == 0:
            # z = a + (b-a) u^2 tames a sqrt zero at the start point.
            g = lambda u, a=a, b=b: f(a + (b - a) * u * u) * 2 * u * (b - a)
            total += adaptive_segment(g, 0.0, 1.0, seg_tol)
        elif sqrt_end and k == nseg - 1:
            # z = b + (a-b) u^2, u: 1 -> 0 traverses a -> b.
            g = lambda u, a=a, b=b: f(b + (a - b) * u * u) * 2 * u * (a - b)
            total += adaptive_segment(g, 1.0, 0.0, seg_tol)
        else:
            total += adaptive_segment(f, a, b, seg_tol)
    return total
