"""Stokes curve tracing.

Stokes curves are level sets Im[S(x) - S(x_t)] = 0 emanating from the
turning points.  In action coordinates they are horizontal rays, so
tracing is a level slide: a predictor step dx = +-h/p followed by a
Newton correction dx = i err / p restoring the level.  Each simple
turning point emits three curves; the one along which Re S decreases
(with the global determination) is L_j, the other two are L'_j and
L''_j, distinguished by the side of the branch cut c_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .branch import ActionBranch, LiftedPoint
from .domain import DomainSpec
from .errors import AmbiguousDirection, NotFound, TraceStalled
from .potential import TurningPoint
from .wnav import _hop, level_slide, march_w, newton_to_w


@dataclass
class StokesCurve:
    label: str                 # e.g. "L1", "L1p", "L1pp", "L0", "L3", "L3p"
    kind: str                  # internal | base | generalized | external
    origin: complex            # turning point / x3 / x0 in the x-plane
    origin_id: str
    level: float               # Im S along the curve, in the trace branch
    samples: list              # LiftedPoint samples, origin side first
    re_s_direction: int = 0    # +1 if Re S grows away from the origin

    def xs(self):
        return np.array([lf.x for lf in self.samples])

    def ws(self):
        return np.array([lf.s for lf in self.samples])


def classify_re_direction(curve: StokesCurve, trace_tol: float = 1e-8) -> int:
    """Sign of the Re S trend along the curve, away from its origin."""
    if len(curve.samples) < 2:
        raise AmbiguousDirection("curve has fewer than 2 samples")
    res = np.array([lf.s.real for lf in curve.samples])
    total = res[-1] - res[0]
    if abs(total) < trace_tol:
        raise AmbiguousDirection(
            f"|Delta Re S| = {abs(total):.3e} below trace_tol along {curve.label}")
    return 1 if total > 0 else -1


def selfseed_angles(branch: ActionBranch, tp: TurningPoint, r: float):
    """The three local Stokes directions at a simple turning point."""
    # local model: S(x) - S(x_t) ~ (2C/3) (x - x_t)^{3/2}
    probe = tp.location + r
    c = np.sqrt(branch.pot(probe)) / np.sqrt(r)
    phi = float(np.angle(c))
    return [(-phi + k * np.pi) * 2.0 / 3.0 for k in range(3)]


def lift_at_angle(branch: ActionBranch, tp: TurningPoint, theta: float,
                  r: float, cut_angle: float) -> LiftedPoint:
    """Lift of x_t + r e^{i theta}, continued from the base point.

    The branch is carried from x0 straight to the approach ring and then
    along the circle, sweeping in the direction that does not cross the
    branch cut of the turning point.
    """
    x0 = branch.basepoint
    th_app = float(np.angle(x0 - tp.location))
    ring = tp.location + r * np.exp(1j * th_app)
    lift = branch.continue_along(branch.base(), [x0, ring],
                                 check_clearance=False)
    # sweep from th_app to theta without crossing cut_angle
    def norm(a):
        return float(np.mod(a, 2 * np.pi))
    span_ccw = norm(theta - th_app)
    cut_off = norm(cut_angle - th_app)
    if cut_off < span_ccw - 1e-12 and cut_off > 1e-12:
        sweep = span_ccw - 2 * np.pi     # go clockwise instead
    else:
        sweep = span_ccw
    if abs(sweep) > 1e-12:
        n = max(12, int(abs(sweep) / 0.05))
        for k in range(1, n + 1):
            th = th_app + sweep * k / n
            lift = _hop(branch, lift, tp.location + r * np.exp(1j * th))
    return lift


def tp_action(branch: ActionBranch, tp: TurningPoint) -> complex:
    """S at a turning point, integrated straight in from the base side."""
    x0 = branch.basepoint
    th_app = float(np.angle(x0 - tp.location))
    ring = tp.location + 1e-7 * np.exp(1j * th_app)
    lift = branch.continue_along(branch.base(), [x0, ring],
                                 check_clearance=False)
    return lift.s


def trace_stokes_curves(tp: TurningPoint, branch: ActionBranch,
                        domain: DomainSpec, seed_r: float = 1e-3,
                        step: float | None = None):
    """The three Stokes curves of a simple turning point.

    Curves are traced as level slides of Im S until |x| exceeds
    domain.r_max; each is returned with its Re S trend sign.  Labels are
    assigned later by the region builder (which knows the cut side).
    """
    if not tp.simple:
        raise NotFound(f"turning point {tp.location} is not simple")
    if step is None:
        step = domain.delta / 4
    i = domain.cut_angles and len(domain.cut_angles) or 0
    cut_angle = (domain.cut_angles[tp.index]
                 if tp.index < len(domain.cut_angles)
                 else float(np.angle(-1 - 1j)))
    curves = []
    for theta in selfseed_angles(branch, tp, max(seed_r, 1e-4)):
        seed = lift_at_angle(branch, tp, theta, max(seed_r, 1e-4), cut_angle)
        level = seed.s.imag
        # slide outward: the direction that moves away from the tp
        trial = _hop(branch, seed, seed.x + 1e-6 * np.exp(1j * theta))
        sgn = 1 if (trial.s.real - seed.s.real) > 0 else -1
        stop = lambda lf: abs(lf.x) > domain.r_max
        try:
            _, trail, _ = level_slide(branch, seed, sgn, stop, step=step)
        except TraceStalled:
            trail = [seed]
        curve = StokesCurve(label="?", kind="internal", origin=tp.location,
                            origin_id=f"x{tp.index + 1}", level=level,
                            samples=trail)
        curve.re_s_direction = classify_re_direction(curve, domain.trace_tol)
        curves.append(curve)
    return curves


def trace_base_curve(branch: ActionBranch, domain: DomainSpec,
                     step: float | None = None) -> StokesCurve:
    """L0: the curve Im S = 0 through the base point, both arms."""
    if step is None:
        step = domain.delta / 4
    stop = lambda lf: abs(lf.x) > domain.r_max
    base = branch.base()
    _, right, _ = level_slide(branch, base, +1, stop, step=step)
    _, left, _ = level_slide(branch, base, -1, stop, step=step)
    samples = list(reversed(left))[:-1] + right
    return StokesCurve(label="L0", kind="base", origin=branch.basepoint,
                       origin_id="x0", level=0.0, samples=samples)


def trace_level_arms(branch: ActionBranch, center: LiftedPoint,
                     domain: DomainSpec, labels=("a", "b"),
                     step: float | None = None):
    """Two arms of the Im S level curve through a regular lifted point."""
    if step is None:
        step = domain.delta / 4
    stop = lambda lf: abs(lf.x) > domain.r_max
    arms = []
    for sgn in (+1, -1):
        _, trail, _ = level_slide(branch, center, sgn, stop, step=step)
        arms.append(trail)
    return arms
