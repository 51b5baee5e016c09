"""Domain constants and their validity checks.

DomainSpec carries the geometric constants of a run: the flap parameter
delta, the chart margin epsilon, the outer-boundary constant A', the cut
directions at each turning point and the truncation radii.  The small-
delta inequalities are checked against the measured turning-point levels
m1 = Im S(x1) and m2 = Im S(x2) once a branch is available.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError


@dataclass
class DomainSpec:
    delta: float
    epsilon: float = 0.05
    a_prime: float = 1.0
    cut_angles: tuple = ()        # one cut direction per turning point
    r_max: float = 8.0            # x-plane truncation for curve tracing
    n_right: float = 2.0          # right chart boundary offset (action units)
    trace_tol: float = 1e-8
    min_step: float = 1e-6
    collision_tol: float = 1e-4
    quad_tol: float = 1e-10
    # measured levels, filled in by build_region_map
    m1: float | None = None
    m2: float | None = None

    def __post_init__(self):
        if self.delta <= 0:
            raise ConfigError("delta must be positive")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")
        if self.a_prime <= 0:
            raise ConfigError("A' must be positive")

    @property
    def rho0(self) -> float:
        """Turning-point detour radius, in action units."""
        return self.delta / 4.0

    @property
    def rho(self) -> float:
        """Default slot radius / lift clearance."""
        return self.delta / 10.0

    @property
    def cd_tol(self) -> float:
        return self.delta / 10.0

    def validate_levels(self, m1: float, m2: float | None):
        """Check the small-delta inequalities against measured levels."""
        if m1 <= 0:
            raise ConfigError(
                f"Im S(x1) = {m1:.6g} must be positive for the chosen branch")
        if self.delta >= m1 / 3.0:
            raise ConfigError(
                f"delta = {self.delta:.6g} violates delta < Im S(x1)/3 = {m1 / 3:.6g}")
        if m2 is not None:
            gap = m2 - m1
            if gap <= 0:
                raise ConfigError(
                    f"Im S(x2) - Im S(x1) = {gap:.6g} must be positive")
            if self.delta >= gap / 3.0:
                raise ConfigError(
                    f"delta = {self.delta:.6g} violates delta < Im[S(x2)-S(x1)]/3 = {gap / 3:.6g}")
        self.m1 = m1
        self.m2 = m2
