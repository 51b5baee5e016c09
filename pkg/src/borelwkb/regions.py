"""Stokes regions as horizontal strips in action coordinates.

In w = S(x) the universal cover of the cut domain splits into
horizontally convex strips glued along rays that end at the
turning-point images.  For the two-turning-point flagship configuration
the strips are

    A  (-delta/2, m1)      base strip, contains x0 (w = 0)
    B  (m1, m2)            across L1
    C  (m2, m2 + A'/2)     across L2
    D  (m1, m2)            across L'2 (a further sheet)
    D' (m2 - m1, m1)       across L3 / L'3
    E  (m2, m1 + m2)       across L''2
    F  (0, m1)             across L''1
    G  (m1, 2 m1)          across L'1

where m_j = Im S(x_j).  Gates are the boundary rays, split at the
corner w-images S(x1), S(x2) of the turning points; crossing a boundary
on the non-gate side leaves the modeled domain (the external Stokes
curves).  The canonical metric |p dy| is Euclidean in w, so canonical
distances are computed on this strip complex directly.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .branch import ActionBranch, LiftedPoint
from .domain import DomainSpec
from .errors import NotFound, TopologyMismatch, UnknownRegion
from .stokes import (StokesCurve, tp_action, trace_base_curve,
                     trace_level_arms, trace_stokes_curves)
from .wnav import _hop, march_w, newton_to_w


@dataclass(frozen=True)
class GeneralizedTurningPoint:
    """A point x3 with S(x3) = S(x1) on a further sheet (not a zero of V)."""

    location: LiftedPoint
    matched_action: complex


@dataclass
class Gate:
    side: str        # 'lo' or 'hi' boundary of the strip
    re_side: str     # 'lt' (Re w < corner) or 'gt'
    corner: complex  # w-image of the turning point splitting the boundary
    neighbor: str | None   # adjacent region label, None = exits the domain
    curve: str       # curve label of the boundary ray


@dataclass
class Region:
    label: str
    im_lo: float
    im_hi: float
    parent: str | None
    entry_curve: str | None
    gates: list
    depth: int = 0
    probe: LiftedPoint | None = None
    probe_path: list = field(default_factory=list)

    def contains_w(self, w: complex, margin: float = 0.0) -> bool:
        return self.im_lo + margin < w.imag < self.im_hi - margin

    def gate_for(self, neighbor: str):
        for g in self.gates:
            if g.neighbor == neighbor:
                return g
        return None


class RegionMap:
    """Region decomposition with gates, probes and the partial order."""

    def __init__(self, branch: ActionBranch, domain: DomainSpec):
        self.branch = branch
        self.domain = domain
        self.regions: dict[str, Region] = {}
        self.curves: list[StokesCurve] = []
        self.s_tp: list[complex] = []
        self.x3: GeneralizedTurningPoint | None = None

    # -- queries -----------------------------------------------------------

    def __getitem__(self, label: str) -> Region:
        return self.regions[label]

    @property
    def labels(self):
        return list(self.regions)

    def partial_order(self, a: str, b: str) -> bool:
        """True when region a is earlier than region b (strictly)."""
        cur = self.regions[b].parent
        while cur is not None:
            if cur == a:
                return True
            cur = self.regions[cur].parent
        return False

    def ancestors(self, label: str):
        out = []
        cur = self.regions[label].parent
        while cur is not None:
            out.append(cur)
            cur = self.regions[cur].parent
        return out

    def corners_of(self, label: str):
        return sorted({g.corner for g in self.regions[label].gates},
                      key=lambda c: (c.real, c.imag))

    # -- point classification ----------------------------------------------

    def transition(self, label: str, w_cross: complex, upward: bool):
        """Region reached when the boundary of ``label`` is crossed at w."""
        reg = self.regions[label]
        side = 'hi' if upward else 'lo'
        for g in reg.gates:
            if g.side != side:
                continue
            if (g.re_side == 'lt') == (w_cross.real < g.corner.real):
                return g.neighbor, g.curve
        return None, None

    def classify_walk(self, waypoints, start_region: str = 'A',
                      start: LiftedPoint | None = None):
        """Continue along a polyline from x0, tracking region transitions.

        Returns (region label, lift at the endpoint).  Raises
        UnknownRegion if the walk leaves the modeled domain.
        """
        br = self.branch
        lift = br.base() if start is None else start
        label = start_region
        pts = [complex(z) for z in waypoints]
        if pts and pts[0] != lift.x:
            pts = [lift.x] + pts
        for k in range(len(pts) - 1):
            a, b = pts[k], pts[k + 1]
            n = max(2, int(abs(b - a) / 0.05) + 1)
            subs = [a + (b - a) * t for t in np.linspace(0, 1, n + 1)[1:]]
            for x_next in subs:
                nxt = _hop(br, lift, x_next)
                label, lift = self._advance(label, lift, nxt)
        return label, lift

    def _advance(self, label, lift, nxt, depth=0):
        reg = self.regions[label]
        lo, hi = reg.im_lo, reg.im_hi
        y0, y1 = lift.s.imag, nxt.s.imag
        crossed_hi = y0 < hi <= y1
        crossed_lo = y0 > lo >= y1
        if not (crossed_hi or crossed_lo):
            return label, nxt
        if depth > 60:
            raise UnknownRegion("could not isolate a boundary crossing")
        level = hi if crossed_hi else lo
        t = (level - y0) / (y1 - y0)
        x_mid = lift.x + (nxt.x - lift.x) * t
        mid = _hop(self.branch, lift, x_mid)
        if abs(mid.s.imag - level) > 1e-9:
            mid = newton_to_w(self.branch, mid,
                              mid.s.real + 1j * level)
        nbr, curve = self.transition(label, mid.s, crossed_hi)
        if nbr is None:
            raise UnknownRegion(
                f"walk leaves the domain across {curve or 'a cap'} of {label} "
                f"at w = {mid.s:.4f}")
        # continue the remainder of the hop inside the neighbor
        rest = _hop(self.branch, mid, nxt.x)
        return self._advance(nbr, mid, rest, depth + 1)

    # -- canonical distance --------------------------------------------------

    def _segment_feasible(self, label_a: str, wa: complex, wb: complex):
        """Walk the straight w-segment through gates; region at the end."""
        label = label_a
        t_done = 0.0
        guard = 0
        while True:
            guard += 1
            if guard > 40:
                return None
            reg = self.regions[label]
            dy = wb.imag - wa.imag
            crossings = []
            for level, upward in ((reg.im_hi, True), (reg.im_lo, False)):
                if dy == 0:
                    continue
                t = (level - wa.imag) / dy
                if t_done + 1e-12 < t <= 1.0 and ((dy > 0) == upward):
                    crossings.append((t, level, upward))
            if not crossings:
                return label
            t, level, upward = min(crossings)
            w_cross = wa + (wb - wa) * t
            nbr, _ = self.transition(label, w_cross, upward)
            if nbr is None:
                return None
            label = nbr
            t_done = t

    def canonical_distance(self, label_a: str, wa: complex,
                           label_b: str, wb: complex) -> float:
        """Length of the shortest w-path in the strip complex.

        Exact for straight and corner-bent geodesics; an upper bound in
        general, within cd_tol for the geometries used here.
        """
        if label_a == label_b and self._segment_feasible(label_a, wa, wb) == label_b:
            return abs(wb - wa)
        nodes = [(label_a, wa), (label_b, wb)]
        for lbl, reg in self.regions.items():
            for c in self.corners_of(lbl):
                nodes.append((lbl, c))
        dist = {0: 0.0}
        pq = [(0.0, 0)]
        best = np.inf
        while pq:
            d, i = heapq.heappop(pq)
            if d > dist.get(i, np.inf):
                continue
            li, wi = nodes[i]
            if i == 1:
                best = d
                break
            for jj, (lj, wj) in enumerate(nodes):
                if jj == i:
                    continue
                if self._segment_feasible(li, wi, wj) == lj:
                    nd = d + abs(wj - wi)
                    if nd < dist.get(jj, np.inf) - 1e-15:
                        dist[jj] = nd
                        heapq.heappush(pq, (nd, jj))
        if not np.isfinite(best):
            raise UnknownRegion(
                f"no path between {label_a} and {label_b} in the strip complex")
        return best

    def distance_to_curves(self, label: str, w: complex) -> dict:
        """Canonical distance from a lifted point to each bounding gate ray."""
        out = {}
        for g in self.regions[label].gates:
            level = self.regions[label].im_hi if g.side == 'hi' else self.regions[label].im_lo
            dy = abs(w.imag - level)
            if (g.re_side == 'lt') == (w.real < g.corner.real):
                out[g.curve] = dy
            else:
                out[g.curve] = abs(w - (g.corner.real + 1j * level))
        return out


# -- construction ------------------------------------------------------------


def _label_curves(curves_by_tp, branch, tps):
    """Assign L / L' / L'' labels per turning point."""
    labeled = {}
    for idx, curves in curves_by_tp.items():
        tp = tps[idx]
        dec = [c for c in curves if c.re_s_direction < 0]
        inc = [c for c in curves if c.re_s_direction > 0]
        if len(dec) != 1 or len(inc) != 2:
            raise TopologyMismatch(
                f"turning point {tp.location}: expected one Re-decreasing and "
                f"two Re-increasing Stokes curves, got {len(dec)}/{len(inc)}")
        L = dec[0]
        ang = lambda c: float(np.angle(c.samples[0].x - tp.location))
        if len(tps) > 1:
            other = tps[1 - idx] if len(tps) == 2 else tps[(idx + 1) % len(tps)]
            ref = float(np.angle(other.location - tp.location))
        else:
            ref = float(np.angle(branch.basepoint - tp.location))

        def contains(a, b, t):
            # is angle t inside the ccw sector from a to b?
            span = np.mod(b - a, 2 * np.pi)
            off = np.mod(t - a, 2 * np.pi)
            return off < span

        thL = ang(L)
        th0, th1 = ang(inc[0]), ang(inc[1])
        # sector between L and each increasing curve avoiding the third curve
        def adjacent_to(th_inc, th_other):
            return (contains(thL, th_inc, ref) and not contains(thL, th_inc, th_other)) or \
                   (contains(th_inc, thL, ref) and not contains(th_inc, thL, th_other))

        if len(tps) > 1:
            # L''_j bounds the sector containing the other turning point
            if adjacent_to(th0, th1):
                Lpp, Lp = inc[0], inc[1]
            else:
                Lpp, Lp = inc[1], inc[0]
        else:
            # single turning point: L'_j bounds the base-point sector
            if adjacent_to(th0, th1):
                Lp, Lpp = inc[0], inc[1]
            else:
                Lp, Lpp = inc[1], inc[0]
        j = idx + 1
        L.label, Lp.label, Lpp.label = f"L{j}", f"L{j}p", f"L{j}pp"
        labeled[idx] = (L, Lp, Lpp)
    return labeled


def build_region_map(branch: ActionBranch, domain: DomainSpec,
                     trace_curves: bool = True) -> RegionMap:
    """Trace the Stokes skeleton and assemble the strip complex."""
    rm = RegionMap(branch, domain)
    tps = branch.turning_points
    if not all(t.simple for t in tps):
        raise TopologyMismatch("all turning points must be simple")
    if len(tps) not in (1, 2):
        raise TopologyMismatch(
            f"supported configurations have 1 or 2 turning points, got {len(tps)}")

    s_tp = [tp_action(branch, t) for t in tps]
    order = np.argsort([s.imag for s in s_tp])
    if len(tps) == 2 and order[0] != 0:
        # relabel so that x1 carries the smaller level
        tps = (tps[1], tps[0])
        s_tp = [s_tp[1], s_tp[0]]
    rm.s_tp = s_tp
    m1 = s_tp[0].imag
    m2 = s_tp[1].imag if len(tps) == 2 else None
    domain.validate_levels(m1, m2)
    r1 = s_tp[0].real
    S1c = s_tp[0]

    d = domain.delta
    if len(tps) == 2:
        r2 = s_tp[1].real
        S2c = s_tp[1]
        M = m2 - m1
        if M >= m1:
            raise TopologyMismatch(
                f"configuration needs Im[S(x2)-S(x1)] = {M:.4g} < Im S(x1) = {m1:.4g} "
                "for the region D' to be nonempty")
        regs = [
            Region('A', -d / 2, m1, None, None, [
                Gate('hi', 'lt', S1c, 'B', 'L1'),
                Gate('hi', 'gt', S1c, 'G', 'L1p'),
                Gate('lo', 'lt', -1e30 + 1j * 0, None, 'cap_B1'),
            ]),
            Region('B', m1, m2, 'A', 'L1', [
                Gate('lo', 'lt', S1c, 'A', 'L1'),
                Gate('lo', 'gt', S1c, 'F', 'L1pp'),
                Gate('hi', 'lt', S2c, 'C', 'L2'),
                Gate('hi', 'gt', S2c, 'E', 'L2pp'),
            ]),
            Region('C', m2, m2 + domain.a_prime / 2, 'B', 'L2', [
                Gate('lo', 'lt', S2c, 'B', 'L2'),
                Gate('lo', 'gt', S2c, 'D', 'L2p'),
                Gate('hi', 'lt', 1e30 + 0j, None, 'cap_B2'),
            ]),
            Region('D', m1, m2, 'C', 'L2p', [
                Gate('hi', 'gt', S2c, 'C', 'L2p'),
                Gate('hi', 'lt', S2c, None, 'ext_L2pp'),
                Gate('lo', 'gt', S1c, "D'", 'L3p'),
                Gate('lo', 'lt', S1c, "D'", 'L3'),
            ]),
            Region("D'", M, m1, 'D', 'L3p', [
                Gate('hi', 'gt', S1c, 'D', 'L3p'),
                Gate('hi', 'lt', S1c, 'D', 'L3'),
                Gate('lo', 'lt', 1e30 + 0j, None, 'cap_B3'),
            ]),
            Region('E', m2, m1 + m2, 'B', 'L2pp', [
                Gate('lo', 'gt', S2c, 'B', 'L2pp'),
                Gate('lo', 'lt', S2c, None, 'ext_L2p'),
                Gate('hi', 'lt', 1e30 + 0j, None, 'cap_B3'),
            ]),
            Region('F', 0.0, m1, 'B', 'L1pp', [
                Gate('hi', 'gt', S1c, 'B', 'L1pp'),
                Gate('hi', 'lt', S1c, None, 'ext_L1p'),
                Gate('lo', 'lt', 1e30 + 0j, None, 'cap_B4'),
            ]),
            Region('G', m1, 2 * m1, 'A', 'L1p', [
                Gate('lo', 'gt', S1c, 'A', 'L1p'),
                Gate('lo', 'lt', S1c, None, 'ext_L1pp'),
                Gate('hi', 'lt', 1e30 + 0j, None, 'cap_B4'),
            ]),
        ]
    else:
        cap_hi = m1 + 2 * domain.a_prime
        regs = [
            Region('A', -d / 2, m1, None, None, [
                Gate('hi', 'lt', S1c, 'B', 'L1'),
                Gate('hi', 'gt', S1c, 'G', 'L1p'),
            ]),
            Region('B', m1, cap_hi, 'A', 'L1', [
                Gate('lo', 'lt', S1c, 'A', 'L1'),
                Gate('lo', 'gt', S1c, 'F', 'L1pp'),
            ]),
            Region('F', 0.0, m1, 'B', 'L1pp', [
                Gate('hi', 'gt', S1c, 'B', 'L1pp'),
                Gate('hi', 'lt', S1c, None, 'ext_L1p'),
            ]),
            Region('G', m1, 2 * m1, 'A', 'L1p', [
                Gate('lo', 'gt', S1c, 'A', 'L1p'),
                Gate('lo', 'lt', S1c, None, 'ext_L1pp'),
            ]),
        ]
    for r in regs:
        rm.regions[r.label] = r
    for r in regs:
        r.depth = 0 if r.parent is None else rm.regions[r.parent].depth + 1

    if trace_curves:
        _trace_all(rm, tps)
    _build_probes(rm)
    if len(tps) == 2:
        _locate_x3(rm, trace_curves)
    return rm


def _trace_all(rm: RegionMap, tps):
    curves_by_tp = {}
    for idx, tp in enumerate(tps):
        curves_by_tp[idx] = trace_stokes_curves(tp, rm.branch, rm.domain)
    labeled = _label_curves(curves_by_tp, rm.branch, tps)
    for idx in labeled:
        rm.curves.extend(labeled[idx])
    rm.curves.append(trace_base_curve(rm.branch, rm.domain))
    # external curves are further-sheet lifts of the primed curves; their
    # plane traces coincide, so reuse the samples under external labels
    ext_of = {'L1p': 'ext_L1p', 'L1pp': 'ext_L1pp',
              'L2p': 'ext_L2p', 'L2pp': 'ext_L2pp'}
    if len(tps) == 1:
        ext_of = {'L1p': 'ext_L1p', 'L1pp': 'ext_L1pp'}
    for c in list(rm.curves):
        if c.label in ext_of:
            rm.curves.append(StokesCurve(
                label=ext_of[c.label], kind='external', origin=c.origin,
                origin_id=c.origin_id, level=c.level, samples=c.samples,
                re_s_direction=c.re_s_direction))


def _march_probe(rm: RegionMap, start: LiftedPoint, w_stops):
    lift = start
    trail = [start]
    for w in w_stops:
        lift, t, _ = march_w(rm.branch, lift, w, step=rm.domain.delta / 3)
        trail.extend(t[1:])
    return lift, trail


def _gate_point(rm: RegionMap, label: str, neighbor: str, margin_re=None,
                margin_im=None):
    """(w just before the gate, w just after) for a region transition."""
    reg = rm.regions[label]
    g = reg.gate_for(neighbor)
    if g is None:
        raise NotFound(f"no gate {label} -> {neighbor}")
    level = reg.im_hi if g.side == 'hi' else reg.im_lo
    if margin_re is None:
        margin_re = max(3 * rm.domain.delta, 0.45)
    if margin_im is None:
        margin_im = min(rm.domain.delta, 0.25 * (reg.im_hi - reg.im_lo))
    re = g.corner.real + (margin_re if g.re_side == 'gt' else -margin_re)
    sgn = 1 if g.side == 'hi' else -1
    before = re + 1j * (level - sgn * margin_im)
    after = re + 1j * (level + sgn * margin_im)
    return before, after


def _build_probes(rm: RegionMap):
    order = sorted(rm.regions.values(), key=lambda r: r.depth)
    for reg in order:
        if reg.parent is None:
            mid = 1j * 0.5 * (reg.im_lo + reg.im_hi)
            lift, trail = _march_probe(rm, rm.branch.base(), [mid])
            reg.probe, reg.probe_path = lift, trail
            continue
        parent = rm.regions[reg.parent]
        before, after = _gate_point(rm, reg.parent, reg.label)
        lift, trail = _march_probe(rm, parent.probe, [before, after])
        probe_w = after.real + 1j * 0.5 * (reg.im_lo + reg.im_hi)
        lift, t2 = _march_probe(rm, lift, [probe_w])
        reg.probe, reg.probe_path = lift, trail + t2[1:]


def _locate_x3(rm: RegionMap, trace_curves: bool):
    """Newton-solve S(x) = S(x1) on the D sheet and trace L3 / L'3."""
    target = rm.s_tp[0]
    reg_d = rm.regions['D']
    seeds = [reg_d.probe]
    for off in (0.6, 1.2, -0.6):
        try:
            lift, _ = _march_probe(rm, reg_d.probe,
                                   [reg_d.probe.s + off])
            seeds.append(lift)
        except Exception:
            pass
    for seed in seeds:
        try:
            lift, _, _ = march_w(rm.branch, seed, target,
                                 step=rm.domain.delta / 3)
            lift = newton_to_w(rm.branch, lift, target, iters=10)
        except Exception:
            continue
        if abs(lift.s - target) < rm.domain.trace_tol:
            rm.x3 = GeneralizedTurningPoint(lift, target)
            break
    if rm.x3 is None:
        raise NotFound("generalized turning point x3 not found from any seed")
    if trace_curves:
        arms = trace_level_arms(rm.branch, rm.x3.location, rm.domain)
        for trail in arms:
            curve = StokesCurve(label='?', kind='generalized',
                                origin=rm.x3.location.x, origin_id='x3',
                                level=target.imag, samples=trail)
            d_re = trail[-1].s.real - trail[0].s.real
            curve.re_s_direction = 1 if d_re > 0 else -1
            curve.label = 'L3p' if d_re > 0 else 'L3'
            rm.curves.append(curve)
