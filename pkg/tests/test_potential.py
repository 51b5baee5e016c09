import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borelwkb.errors import DegenerateTurningPoint
from borelwkb.potential import Potential, find_turning_points


def test_monomial_root():
    tps = find_turning_points(Potential((0, 1)))  # V = x
    assert len(tps) == 1
    assert tps[0].location == pytest.approx(0)
    assert tps[0].multiplicity == 1


def test_two_simple_roots():
    tps = find_turning_points(Potential((-1, 0, 1)))  # V = x^2 - 1
    locs = sorted(t.location.real for t in tps)
    assert locs == pytest.approx([-1.0, 1.0])
    assert all(t.multiplicity == 1 for t in tps)


def test_double_root_detected_and_rejected():
    # V = (x - i)^2 = x^2 - 2 i x - 1
    pot = Potential((-1, -2j, 1))
    tps = find_turning_points(pot)
    assert len(tps) == 1
    assert tps[0].location == pytest.approx(1j)
    assert tps[0].multiplicity == 2
    with pytest.raises(DegenerateTurningPoint):
        find_turning_points(pot, require_simple=True)


def test_leading_zero_coefficients_trimmed():
    pot = Potential((1, 2, 0, 0))
    assert pot.degree == 1


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False,
                                   allow_infinity=False), min_size=2, max_size=6))
@settings(max_examples=60, deadline=None)
def test_horner_matches_numpy_eval(coeffs):
    if all(abs(c) < 1e-12 for c in coeffs):
        coeffs = coeffs[:-1] + [1.0 + 0j]
    pot = Potential(tuple(coeffs))
    xs = np.array([0.3 + 0.1j, -1.2j, 2.0, -0.5 + 0.5j])
    expect = np.polyval(np.array(pot.coeffs[::-1]), xs)
    assert np.allclose(pot(xs), expect, rtol=1e-12, atol=1e-12)


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=2 ** 30))
@settings(max_examples=40, deadline=None)
def test_multiplicities_sum_to_degree(deg, seed):
    rng = np.random.default_rng(seed)
    coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    coeffs[-1] += 2.0  # keep the leading coefficient away from zero
    tps = find_turning_points(Potential(tuple(coeffs)))
    assert sum(t.multiplicity for t in tps) == deg
    for t in tps:
        assert abs(Potential(tuple(coeffs))(t.location)) < 1e-6
