"""Marching in action coordinates.

The map x -> w = S(x) is conformal away from turning points and turns
the Stokes geometry into horizontal lines: Stokes curves are level sets
of Im w, the canonical metric |p dy| is the Euclidean metric of the
w-plane, and region boundaries become horizontal gates.  These helpers
march a lifted point along prescribed w-space segments (dx = dw / p
with a Newton correction), slide along Im-w level curves, and walk
circular arcs around a turning point in the x-plane.
"""

from __future__ import annotations

import numpy as np

from .branch import ActionBranch, LiftedPoint
from .errors import TraceStalled

MIN_STEP = 1e-6


def _hop(branch: ActionBranch, lift: LiftedPoint, x_new: complex) -> LiftedPoint:
    return branch._continue_segment(lift, x_new, 1e-12)


def newton_to_w(branch: ActionBranch, lift: LiftedPoint, w_target: complex,
                iters: int = 5) -> LiftedPoint:
    """Polish a lifted point so that S(x) = w_target (local Newton)."""
    cur = lift
    for _ in range(iters):
        err = cur.s - w_target
        if abs(err) < 1e-13:
            break
        cur = _hop(branch, cur, cur.x - err / cur.p)
    return cur


def march_w(branch: ActionBranch, lift: LiftedPoint, w_target: complex,
            step: float = 0.05, stop=None, max_steps: int = 40000):
    """March along the straight w-segment from lift.s to w_target.

    Returns (final lift, trail of lifts, stopped_early).  ``stop`` is an
    optional predicate on lifts; marching halts once it turns true.
    Steps shrink near turning points, where dx = dw/p blows up.
    """
    cur = lift
    trail = [cur]
    total = w_target - lift.s
    if abs(total) < 1e-14:
        return cur, trail, False
    u = total / abs(total)
    done = 0.0
    n = 0
    while done < abs(total) - 1e-12:
        n += 1
        if n > max_steps:
            raise TraceStalled("march_w exceeded step budget")
        d_tp = branch._tp_dist(cur.x)
        local = min(step, abs(total) - done, max(0.3 * d_tp * abs(cur.p), 1e-9))
        done += local
        cur = _hop(branch, cur, cur.x + u * local / cur.p)
        cur = newton_to_w(branch, cur, lift.s + u * done)
        trail.append(cur)
        if stop is not None and stop(cur):
            return cur, trail, True
    cur = newton_to_w(branch, cur, w_target, iters=6)
    trail.append(cur)
    return cur, trail, False


def level_slide(branch: ActionBranch, lift: LiftedPoint, direction: int,
                stop, step: float = 0.05, max_steps: int = 40000):
    """Slide along the Im-w level curve through the lifted point.

    ``direction`` (+1/-1) fixes the initial sign of d(Re w); along a level
    the sign of d(Re w) only reverses at anti-Stokes folds, which the
    marcher passes smoothly since it steps in arc length.  ``stop`` is a
    predicate on lifts and must eventually trigger.

    Returns (final lift, trail, True) or raises TraceStalled.
    """
    level = lift.s.imag
    cur = lift
    trail = [cur]
    # unit tangent with Im dS = 0: dx = +-|p|/p * dt
    sgn = 1 if direction >= 0 else -1
    for n in range(max_steps):
        d_tp = branch._tp_dist(cur.x)
        local = min(step, max(0.3 * d_tp * abs(cur.p), 1e-9))
        t = sgn * abs(cur.p) / cur.p
        nxt = _hop(branch, cur, cur.x + t * local / abs(cur.p))
        # correct back onto the level: dw = i * err needs dx = i*err/p
        err = level - nxt.s.imag
        nxt = _hop(branch, nxt, nxt.x + 1j * err / nxt.p)
        if abs(nxt.s.imag - level) > 1e-9:
            nxt = _hop(branch, nxt, nxt.x + 1j * (level - nxt.s.imag) / nxt.p)
        cur = nxt
        trail.append(cur)
        if stop(cur):
            return cur, trail, True
    raise TraceStalled("level_slide exhausted its step budget")


def arc_around(branch: ActionBranch, lift: LiftedPoint, center: complex,
               dtheta: float, n_steps: int = 0):
    """Walk a circular x-plane arc of angle dtheta around ``center``.

    The lifted point must already sit on the circle; the radius is kept
    fixed.  Returns (final lift, trail).
    """
    r = abs(lift.x - center)
    th0 = float(np.angle(lift.x - center))
    if n_steps == 0:
        n_steps = max(8, int(abs(dtheta) / 0.1) + 1)
    cur = lift
    trail = [cur]
    for k in range(1, n_steps + 1):
        th = th0 + dtheta * k / n_steps
        cur = _hop(branch, cur, center + r * np.exp(1j * th))
        trail.append(cur)
    return cur, trail


def polyline_of(trail) -> list:
    """x-plane waypoints of a trail of lifts, deduplicated."""
    out = []
    for lf in trail:
        if not out or abs(lf.x - out[-1]) > 0:
            out.append(lf.x)
    return out
