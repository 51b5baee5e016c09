"""Polynomial potentials and their turning points.

A potential is a polynomial V(x) with complex coefficients stored in
ascending degree.  Turning points are the zeros of V; the two-simple-zero
configuration is the flagship case, but arbitrary polynomial degree is
supported.  Roots come from the companion matrix, polished by Newton.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTurningPoint

#: Relative root tolerance, in the scale of the coefficient norm.
ROOT_TOL = 1e-10


@dataclass(frozen=True)
class Potential:
    """Polynomial V(x), coefficients in ascending degree."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if len(coeffs) == 0:
            raise ValueError("potential needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        """Evaluate V(x) by Horner's scheme (vectorized)."""
        x = np.asarray(x, dtype=complex)
        acc = np.full_like(x, self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc if acc.shape else complex(acc)

    def derivative(self) -> "Potential":
        if self.degree == 0:
            return Potential((0.0,))
        dc = [k * c for k, c in enumerate(self.coeffs)][1:]
        return Potential(tuple(dc))

    def scale(self) -> float:
        """Coefficient norm used to make root tolerances dimensionless."""
        return max(abs(c) for c in self.coeffs) or 1.0


@dataclass(frozen=True)
class TurningPoint:
    """A zero of V with its multiplicity."""

    location: complex
    multiplicity: int = 1
    index: int = 0

    @property
    def simple(self) -> bool:
        return self.multiplicity == 1


def _newton_polish(pot: Potential, z: complex, steps: int = 8) -> complex:
    dpot = pot.derivative()
    for _ in range(steps):
        dv = dpot(z)
        if abs(dv) == 0:
            break
        step = pot(z) / dv
        z = z - step
        if abs(step) < 1e-16 * (1 + abs(z)):
            break
    return z


def find_turning_points(pot: Potential, require_simple: bool = False):
    """All roots of V with multiplicities, via companion-matrix eigenvalues.

    Multiplicities are assigned by clustering eigenvalues within root_tol of
    each other (after Newton polishing of each cluster representative).
    Raises DegenerateTurningPoint when ``require_simple`` is set and a
    multiple zero shows up.
    """
    if pot.degree < 1:
        raise ValueError("constant potential has no turning points")
    scale = pot.scale()
    tol = ROOT_TOL * scale
    monic = np.array(pot.coeffs, dtype=complex) / pot.coeffs[-1]
    n = pot.degree
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -monic[:-1]
    raw = np.linalg.eigvals(comp)

    dpot = pot.derivative()
    clusters: list[list[complex]] = []
    for z in sorted(raw, key=lambda w: (round(w.real, 8), round(w.imag, 8))):
        if abs(dpot(z)) > tol:
            z = _newton_polish(pot, z)
        for cl in clusters:
            if abs(z - cl[0]) < 1e-6 * (1 + abs(cl[0])):
                cl.append(z)
                break
        else:
            clusters.append([z])

    tps = []
    for k, cl in enumerate(clusters):
        loc = complex(np.mean(cl))
        mult = len(cl)
        if mult == 1 and abs(dpot(loc)) <= tol:
            # Newton did not separate a genuinely multiple root.
            mult = 1
        tps.append(TurningPoint(loc, mult, index=k))
    tps.sort(key=lambda t: (t.location.real, t.location.imag))
    tps = [TurningPoint(t.location, t.multiplicity, index=k) for k, t in enumerate(tps)]

    if require_simple and any(not t.simple for t in tps):
        bad = [t for t in tps if not t.simple][0]
        raise DegenerateTurningPoint(
            f"turning point at {bad.location} has multiplicity {bad.multiplicity}"
        )
    total = sum(t.multiplicity for t in tps)
    if total != pot.degree:
        raise DegenerateTurningPoint(
            f"root multiplicities sum to {total}, expected {pot.degree}"
        )
    return tps
