"""Borel-plane fiber models.

Over each lifted point the Borel plane carries a finite set of
singularities at positions +-S(x) + c, with c drawn from even
combinations of the turning-point actions.  Which of them sit on the
first sheet depends only on the Stokes region; the roster tables below
encode that dependence, together with the second-sheet singularities
drawn next to the cuts (they control the flap sizes) and the flaps that
are deliberately not constructed.

Every position is recomputed from the action branch, never read off a
table: the tables hold only names, colors and offset combinations.

Color convention: blue singularities are of type -S(x) + c and red ones
of type +S(x) + c.  Cuts run from each first-sheet singularity in the
positive real direction; flaps are open rectangles attached along both
sides of a cut, of height delta' except where a second-sheet singularity
approaches the cut from the given side, in which case the flap stops at
that singularity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .branch import LiftedPoint
from .errors import UnknownRegion
from .regions import RegionMap

#: name -> (color, sign, coefficient of S(x1), coefficient of S(x2))
SING_TABLE = {
    "S":      ("red",  +1, 0, 0),
    "-S":     ("blue", -1, 0, 0),
    "-s1":    ("blue", -1, 2, 0),
    "-s2":    ("blue", -1, 0, 2),
    "-s1p":   ("red",  +1, -2, 0),
    "-s1pp":  ("red",  +1, -2, 0),
    "-s2p":   ("red",  +1, 0, -2),
    "-s2pp":  ("red",  +1, 0, -2),
    "-s12p":  ("red",  +1, 2, -2),
    "-s12pp": ("red",  +1, 2, -2),
}

PRETTY = {
    "S": "S", "-S": "−S", "-s1": "−s₁", "-s2": "−s₂",
    "-s1p": "−s₁′", "-s1pp": "−s₁″",
    "-s2p": "−s₂′", "-s2pp": "−s₂″",
    "-s12p": "−s₁₂′", "-s12pp": "−s₁₂″",
}

#: first-sheet roster per Stokes region (canonical top-to-bottom order)
ROSTERS = {
    "A":  ["S", "-S"],
    "B":  ["S", "-s1", "-S"],
    "C":  ["S", "-s2", "-s1", "-S"],
    "D":  ["-s2", "S", "-s1", "-s12p", "-S", "-s2p"],
    "D'": ["-s2", "-s1", "S", "-s12p", "-S", "-s2p"],
    "E":  ["S", "-s12pp", "-s1", "-s2pp", "-S"],
    "F":  ["-s1", "S", "-S", "-s1pp"],
    "G":  ["S", "-s1p", "-S"],
}

#: second-sheet singularities drawn on the per-region figures, as
#: (ghost name, cut owner it hides under)
DRAWN_GHOSTS = {
    "A":  [("-s1", "S"), ("-s2", "S")],
    "B":  [("-s2", "S"), ("-s1p", "-S"), ("-s2p", "-S")],
    "C":  [("-s12p", "-s1"), ("-s1p", "-S"), ("-s2p", "-S")],
    "D":  [("-s1p", "-S")],
    "D'": [("-s1p", "-S")],
    "E":  [("-s2", "S")],
    "F":  [("-s2", "S"), ("-s2p", "-S"), ("-s12pp", "-s1")],
    "G":  [("-s1", "S"), ("-s2", "S"), ("-s2p", "-S")],
}

#: flaps that are not constructed, per region: (owner name, side)
FLAP_ABSENT = {
    "A":  set(),
    "B":  set(),
    "C":  set(),
    "D":  {("S", "upper"), ("-s12p", "upper"), ("-s2p", "upper")},
    "D'": {("S", "upper"), ("-s12p", "upper"), ("-s2p", "upper")},
    "E":  {("-s12pp", "lower"), ("-s2pp", "lower")},
    "F":  {("S", "upper"), ("-s1pp", "upper")},
    "G":  {("-s1p", "lower")},
}


def _names_for(n_tp: int):
    if n_tp >= 2:
        return set(SING_TABLE)
    return {n for n, (_, _, c1, c2) in SING_TABLE.items() if c2 == 0}


def offset_of(name: str, s1: complex, s2: complex | None) -> complex:
    _, _, c1, c2 = SING_TABLE[name]
    return c1 * s1 + (c2 * s2 if s2 is not None else 0)


def position_of(name: str, lift_s: complex, s1: complex,
                s2: complex | None) -> complex:
    _, sign, _, _ = SING_TABLE[name]
    return sign * lift_s + offset_of(name, s1, s2)


@dataclass(frozen=True)
class BorelSingularity:
    name: str
    color: str
    sign: int
    offset: complex
    position: complex
    sheet: str = "first"          # first | second
    under_cut_of: str | None = None


@dataclass(frozen=True)
class Flap:
    cut_origin: str
    side: str                     # upper | lower
    vertical_size: float
    re_start: float
    limited_by: str | None = None


@dataclass(frozen=True)
class AttachedStrip:
    cut_owner: str
    crosser: str
    side: str                     # side of the owner cut the crosser enters on
    kind: str                     # generic | single_flap | none
    curve: str


@dataclass(frozen=True)
class CrossingRecord:
    singularity: str
    cut_owner: str
    side: str                     # '+i0' | '-i0' (position in the later region)
    event: str                    # appears | disappears
    home_region: str = ""         # region where the crosser sits first-sheet


@dataclass
class FiberModel:
    x: LiftedPoint
    region: str
    singularities: list
    flaps: list
    attached: list
    distances: dict
    n_right: float
    delta_prime: float
    s_tp: tuple = ()
    near_curves: dict = field(default_factory=dict)

    def first_sheet(self):
        return [s for s in self.singularities if s.sheet == "first"]

    def by_name(self, name: str) -> BorelSingularity:
        for s in self.singularities:
            if s.name == name:
                return s
        raise KeyError(name)

    def flap(self, owner: str, side: str):
        for f in self.flaps:
            if f.cut_origin == owner and f.side == side:
                return f
        return None

    def ordered_first_sheet(self):
        return sorted(self.first_sheet(), key=lambda s: -s.position.imag)


def region_distances(lift_s: complex, s1: complex, s2: complex | None) -> dict:
    d = {"d0": 2 * lift_s.imag,
         "d1": 2 * (lift_s - s1).imag}
    if s2 is not None:
        d["d2"] = 2 * (s2 - lift_s).imag
        d["d12"] = 2 * (lift_s + s1 - s2).imag
        d["d1+2"] = 2 * (s1 + s2 - lift_s).imag
    return d


def _flap_sizes(region: str, roster, lift_s, s1, s2, delta_prime, names):
    """min(delta', gap to each approaching second-sheet singularity)."""
    flaps = {}
    absent = FLAP_ABSENT.get(region, set())
    roster_set = set(roster)
    for owner in roster:
        o_pos = position_of(owner, lift_s, s1, s2)
        o_color = SING_TABLE[owner][0]
        for side in ("upper", "lower"):
            if (owner, side) in absent:
                continue
            size = delta_prime
            limited = None
            for other in names:
                if other in roster_set or other == owner:
                    continue
                if SING_TABLE[other][0] == o_color:
                    continue
                gap = (position_of(other, lift_s, s1, s2) - o_pos).imag
                if side == "upper" and gap > 0 and gap < size:
                    size, limited = gap, other
                if side == "lower" and gap < 0 and -gap < size:
                    size, limited = -gap, other
            flaps[(owner, side)] = (max(size, 0.0), limited)
    return flaps


def fiber(lift: LiftedPoint, region_map: RegionMap, region: str | None = None,
          delta_prime: float | None = None, attach: bool = True) -> FiberModel:
    """Fiber model over a lifted point.

    The region label is taken from the caller when known (paths are
    built region-aware); otherwise the point is classified by a straight
    walk from the base point.
    """
    rm = region_map
    if region is None:
        region, lift = rm.classify_walk([lift.x])
    if region not in ROSTERS:
        raise UnknownRegion(f"no roster for region {region!r}")
    if delta_prime is None:
        delta_prime = rm.domain.delta
    s1 = rm.s_tp[0]
    s2 = rm.s_tp[1] if len(rm.s_tp) > 1 else None
    names = _names_for(len(rm.s_tp))
    roster = [n for n in ROSTERS[region] if n in names]

    sings = []
    for n in roster:
        color, sign, _, _ = SING_TABLE[n]
        sings.append(BorelSingularity(
            name=n, color=color, sign=sign, offset=offset_of(n, s1, s2),
            position=position_of(n, lift.s, s1, s2), sheet="first"))
    for n, owner in DRAWN_GHOSTS.get(region, []):
        if n not in names or owner not in roster:
            continue
        color, sign, _, _ = SING_TABLE[n]
        sings.append(BorelSingularity(
            name=n, color=color, sign=sign, offset=offset_of(n, s1, s2),
            position=position_of(n, lift.s, s1, s2), sheet="second",
            under_cut_of=owner))

    sizes = _flap_sizes(region, roster, lift.s, s1, s2, delta_prime, names)
    flaps = []
    for (owner, side), (size, limited) in sorted(sizes.items()):
        if size <= 0:
            continue
        pos = position_of(owner, lift.s, s1, s2)
        flaps.append(Flap(cut_origin=owner, side=side, vertical_size=size,
                          re_start=pos.real, limited_by=limited))

    n_right = max((s.position.real for s in sings), default=0.0) + rm.domain.n_right
    fm = FiberModel(x=lift, region=region, singularities=sings, flaps=flaps,
                    attached=[], distances=region_distances(lift.s, s1, s2),
                    n_right=n_right, delta_prime=delta_prime,
                    s_tp=(s1, s2))
    fm.near_curves = {
        lbl: dist for lbl, dist in rm.distance_to_curves(region, lift.s).items()
        if dist < rm.domain.delta / 2 and not lbl.startswith("cap")}
    if attach and fm.near_curves:
        _attach_for_curves(fm, rm)
    return fm


# -- crossings and attached strips -------------------------------------------


def _red_blue_pairs(names):
    reds = [n for n in names if SING_TABLE[n][0] == "red"]
    blues = [n for n in names if SING_TABLE[n][0] == "blue"]
    return [(r, b) for r in reds for b in blues]


def classify_crossing(curve: str, fiber_before: FiberModel,
                      fiber_after: FiberModel):
    """Appearance / disappearance records for a Stokes-curve crossing.

    A pair (red r, blue b) collides on the curve when the vertical gap
    Im[pos_r - pos_b] changes sign between the two fibers.  The cut
    owner is the member with the smaller real part at the collision.
    """
    fb, fa = fiber_before, fiber_after
    names = _names_for(2 if fb.s_tp[1] is not None else 1)
    sb = {s.name for s in fb.first_sheet()}
    sa = {s.name for s in fa.first_sheet()}
    records = []
    seen = set()
    for r, b in _red_blue_pairs(names):
        pr_b = _pos_in(fb, r)
        pb_b = _pos_in(fb, b)
        pr_a = _pos_in(fa, r)
        pb_a = _pos_in(fa, b)
        gap_b = (pr_b - pb_b).imag
        gap_a = (pr_a - pb_a).imag
        if gap_b == 0 or gap_a == 0 or np.sign(gap_b) == np.sign(gap_a):
            continue
        # collision confirmed; owner by Re position at the crossing
        if (pr_a.real + pr_b.real) < (pb_a.real + pb_b.real):
            owner, crosser = r, b
        else:
            owner, crosser = b, r
        if (owner, crosser) in seen:
            continue
        seen.add((owner, crosser))
        if owner not in sb or owner not in sa:
            continue
        # the crosser emerges on the side opposite to its approach
        gap_before = (_pos_in(fb, crosser) - _pos_in(fb, owner)).imag
        side = '-i0' if gap_before > 0 else '+i0'
        in_b, in_a = crosser in sb, crosser in sa
        if in_a and in_b:
            records.append(CrossingRecord(crosser, owner, side, "appears"))
            records.append(CrossingRecord(
                crosser, owner, '+i0' if side == '-i0' else '-i0', "disappears"))
        elif in_a:
            records.append(CrossingRecord(crosser, owner, side, "appears"))
        elif in_b:
            records.append(CrossingRecord(
                crosser, owner, '+i0' if side == '-i0' else '-i0', "disappears"))
    return records


def _pos_in(fm: FiberModel, name: str) -> complex:
    return position_of(name, fm.x.s, fm.s_tp[0], fm.s_tp[1])


def attach_strips(fm: FiberModel, records) -> FiberModel:
    """Attach the glued strips for the given crossing records.

    Two-flap crossers get the generic pair of strips, one-flap crossers
    the single variant; when the owner cut has no flap on the entry
    side, nothing is attached.
    """
    for rec in records:
        if rec.event != "appears":
            continue
        side = "upper" if rec.side == '+i0' else "lower"
        owner_flap = fm.flap(rec.cut_owner, side)
        if owner_flap is None:
            kind = "none"
        else:
            absent = FLAP_ABSENT.get(fm.region, set())
            n_flaps = 2 - sum((rec.singularity, s) in absent
                              for s in ("upper", "lower"))
            kind = "generic" if n_flaps == 2 else "single_flap"
        fm.attached.append(AttachedStrip(
            cut_owner=rec.cut_owner, crosser=rec.singularity,
            side=rec.side, kind=kind, curve=""))
    return fm


def _attach_for_curves(fm: FiberModel, rm: RegionMap):
    """Populate attached strips for a fiber near one or more curves."""
    reg = rm.regions[fm.region]
    for lbl in fm.near_curves:
        gate = next((g for g in reg.gates if g.curve == lbl), None)
        if gate is None or gate.neighbor is None:
            continue
        other = gate.neighbor
        if rm.regions[other].depth < reg.depth:
            before, after = other, fm.region
        else:
            before, after = fm.region, other
        # mirror the lift across the curve level so the two fibers sit on
        # opposite sides (positions depend on the lift only through S)
        level = reg.im_hi if gate.side == 'hi' else reg.im_lo
        w_mirror = fm.x.s.real + 1j * (2 * level - fm.x.s.imag)
        mirror = LiftedPoint(fm.x.x, fm.x.p, w_mirror, fm.x.angles)
        here = fm.region
        fib_here = _fiber_plain(rm, here, fm)
        fib_there = fiber(mirror, rm, region=other,
                          delta_prime=fm.delta_prime, attach=False)
        fb, fa = (fib_here, fib_there) if here == before else (fib_there, fib_here)
        recs = classify_crossing(lbl, fb, fa)
        before_n = len(fm.attached)
        attach_strips(fm, recs)
        fm.attached = fm.attached[:before_n] + [
            AttachedStrip(a.cut_owner, a.crosser, a.side, a.kind, lbl)
            for a in fm.attached[before_n:]]


def _fiber_plain(rm: RegionMap, region: str, like: FiberModel) -> FiberModel:
    """Fiber with the same lift data but another region's roster."""
    return fiber(like.x, rm, region=region,
                 delta_prime=like.delta_prime, attach=False)
