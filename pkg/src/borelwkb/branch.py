"""Branch tracking for p = sqrt(V) and the action S = int p.

A determination of sqrt(V) is carried along paths by sign continuity:
segments are subdivided so that each piece stays well clear of every
turning point, and on each piece the principal square root is aligned
node by node against the running value.  A LiftedPoint bundles the
position with the continued (p, S) pair and the accumulated winding
angles around each turning point, which makes every determination used
in the construction reproducible.

S_1 = int p_1 with p_1 the branch determination, and p_2 = -p_1, so
S_2 = -S_1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PathThroughTurningPoint, QuadratureFailure
from .potential import Potential, TurningPoint, find_turning_points

QUAD_TOL = 1e-10

_GLX8, _GLW8 = np.polynomial.legendre.leggauss(8)
_GLX16, _GLW16 = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class LiftedPoint:
    """A point of the universal cover: position plus continued (p, S)."""

    x: complex
    p: complex
    s: complex
    angles: tuple = ()

    def winding(self):
        """Signed half-turns accumulated around each turning point."""
        return tuple(int(round(a / np.pi)) for a in self.angles)


def _seg_point_dist(a: complex, b: complex, z: complex) -> float:
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0:
        return abs(z - a)
    t = ((z - a) * d.conjugate()).real / L2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * d))


class ActionBranch:
    """A determination of sqrt(V) anchored at a base point.

    Parameters
    ----------
    pot : Potential
    basepoint : complex
        The point x0 with V(x0) != 0.
    base_p : complex, optional
        Chosen determination of sqrt(V(x0)); defaults to the principal
        square root.
    sign : int
        1 or 2; p_1 is the branch determination, p_2 = -p_1.
    """

    def __init__(self, pot: Potential, basepoint, base_p=None, sign: int = 1,
                 turning_points=None):
        self.pot = pot
        self.basepoint = complex(basepoint)
        v0 = pot(self.basepoint)
        if abs(v0) == 0:
            raise ValueError("basepoint must not be a turning point")
        principal = np.sqrt(complex(v0))
        if base_p is None:
            base_p = principal
        base_p = complex(base_p)
        if min(abs(base_p - principal), abs(base_p + principal)) > 1e-8 * abs(principal):
            raise ValueError("base_p is not a determination of sqrt(V(basepoint))")
        self.base_p = -principal if abs(base_p + principal) < abs(base_p - principal) else principal
        self.sign = sign
        if turning_points is None:
            turning_points = find_turning_points(pot)
        self.turning_points = tuple(turning_points)
        self._tp_locs = np.array([t.location for t in self.turning_points])
        seps = [abs(a.location - b.location)
                for i, a in enumerate(self.turning_points)
                for b in self.turning_points[i + 1:]]
        self.tp_separation = min(seps) if seps else 1.0
        self.path_clearance = 1e-3 * self.tp_separation

    # -- continuation machinery -------------------------------------------

    def base(self) -> LiftedPoint:
        return LiftedPoint(self.basepoint, self.base_p, 0.0 + 0.0j,
                           (0.0,) * len(self.turning_points))

    def _tp_dist(self, z: complex) -> float:
        if len(self._tp_locs) == 0:
            return np.inf
        return float(np.min(np.abs(self._tp_locs - z)))

    def _aligned_values(self, xs, p_ref):
        """Principal sqrt(V) at ordered points, sign-aligned from p_ref."""
        q = np.sqrt(self.pot(np.asarray(xs, dtype=complex)))
        out = np.empty_like(q)
        prev = p_ref
        for k in range(len(q)):
            if abs(q[k] - prev) <= abs(q[k] + prev):
                out[k] = q[k]
            else:
                out[k] = -q[k]
            prev = out[k]
        return out

    def _substep(self, a, b, p_ref, tol):
        """Integral of p over the short segment [a, b] plus end value of p."""
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        pts16 = mid + half * _GLX16
        v16 = self._aligned_values(pts16, p_ref)
        i16 = half * np.sum(_GLW16 * v16)
        pts8 = mid + half * _GLX8
        v8 = self._aligned_values(pts8, p_ref)
        i8 = half * np.sum(_GLW8 * v8)
        err = abs(i16 - i8)
        p_end = self._aligned_values([b], v16[-1])[0]
        return i16, err, p_end

    def _continue_segment(self, lift: LiftedPoint, b: complex, tol: float):
        """Continue (p, S, winding) from lift.x to b along the straight segment."""
        a = lift.x
        if a == b:
            return lift
        s_acc = lift.s
        p_ref = lift.p
        angles = list(lift.angles)
        total_len = abs(b - a)
        # march in substeps bounded by the local turning-point clearance;
        # the stack is ordered so pieces are consumed left to right
        stack = [(a, b)]
        guard = 0
        while stack:
            x0, x1 = stack.pop()
            guard += 1
            if guard > 200000:
                raise QuadratureFailure("substep subdivision runaway")
            d = self._tp_dist(x0)
            length = abs(x1 - x0)
            if length > 0.4 * d and length > 1e-9:
                xm = x0 + (x1 - x0) * min(0.5, max(0.35 * d / length, 1e-6))
                stack.append((xm, x1))
                stack.append((x0, xm))
                continue
            val, err, p_end = self._substep(x0, x1, p_ref, tol)
            if err > tol * max(length / total_len, 1e-3) and length > 1e-12:
                xm = 0.5 * (x0 + x1)
                stack.append((xm, x1))
                stack.append((x0, xm))
                continue
            s_acc += val
            p_ref = p_end
            for i, tp in enumerate(self.turning_points):
                angles[i] += float(np.angle((x1 - tp.location) / (x0 - tp.location)))
        return LiftedPoint(b, p_ref, s_acc, tuple(angles))

    def continue_along(self, lift: LiftedPoint, waypoints, tol: float = QUAD_TOL,
                       clearance=None, check_clearance: bool = True) -> LiftedPoint:
        """Continue a lifted point along a polyline of waypoints."""
        pts = [complex(z) for z in waypoints]
        if pts and pts[0] != lift.x:
            pts = [lift.x] + pts
        if clearance is None:
            clearance = self.path_clearance
        if check_clearance:
            for k in range(len(pts) - 1):
                for tp in self.turning_points:
                    d = _seg_point_dist(pts[k], pts[k + 1], tp.location)
                    endpoint_hit = (k == len(pts) - 2 and
                                    abs(pts[-1] - tp.location) < clearance)
                    start_hit = (k == 0 and abs(pts[0] - tp.location) < clearance)
                    if d < clearance and not (endpoint_hit or start_hit):
                        raise PathThroughTurningPoint(
                            f"segment {k} passes {d:.2e} from turning point "
                            f"{tp.location} (clearance {clearance:.2e})")
        out = lift
        n = max(1, len(pts) - 1)
        for k in range(len(pts) - 1):
            out = self._continue_segment(out, pts[k + 1], tol / n)
        return out

    def lift(self, waypoints, tol: float = QUAD_TOL, **kw) -> LiftedPoint:
        """Lift of the endpoint of a polyline starting at the basepoint."""
        return self.continue_along(self.base(), waypoints, tol=tol, **kw)

    # -- action values ------------------------------------------------------

    def action(self, waypoints, tol: float = QUAD_TOL, j: int | None = None,
               start: LiftedPoint | None = None, **kw) -> complex:
        """int p_j along the polyline (from the basepoint by default)."""
        if start is None:
            start = self.base()
            pts = [complex(z) for z in waypoints]
            if not pts or pts[0] != self.basepoint:
                pts = [self.basepoint] + pts
        else:
            pts = [complex(z) for z in waypoints]
        end = self.continue_along(start, pts, tol=tol, **kw)
        val = end.s - start.s
        j = self.sign if j is None else j
        return val if j == 1 else -val

    @staticmethod
    def p_j(j: int, lift: LiftedPoint) -> complex:
        return lift.p if j == 1 else -lift.p

    @staticmethod
    def S_j(j: int, lift: LiftedPoint) -> complex:
        return lift.s if j == 1 else -lift.s
