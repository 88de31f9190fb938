import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rsaint.errors import ConvergenceError, DomainError
from rsaint.quadrature import QuadratureSpec, integrate, integrate_with_error


def test_polynomial_exact():
    assert integrate(lambda t: t**5 - 3 * t**2, -1.0, 2.0) == pytest.approx(10.5 - 9.0, rel=1e-14)


def test_reversed_and_empty():
    assert integrate(np.exp, 1.0, 0.0) == pytest.approx(1 - math.e, rel=1e-13)
    assert integrate(np.exp, 3.0, 3.0) == 0.0


@pytest.mark.parametrize("shift", [0.0, 0.3, 1e-7, 0.5 - 1e-9])
def test_step_function(shift):
    f = lambda t: np.floor(t + shift)
    value, err = integrate_with_error(f, 0.0, 10.5)
    exact = sum(k * (min(10.5, k + 1 - shift) - max(0.0, k - shift)) for k in range(0, 12) if k - shift < 10.5)
    assert value == pytest.approx(exact, rel=1e-9)
    assert abs(value - exact) <= err + 1e-12


def test_jump_near_panel_edge_is_found():
    # one jump inside the gap between x=0 and the first Kronrod node
    f = lambda t: (t > 0.001).astype(float)
    assert integrate(f, 0.0, 1.0) == pytest.approx(0.999, rel=1e-9)


def test_convergence_error_carries_estimate():
    spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-300, max_subdivisions=3)
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda t: np.floor(7 * t), 0.0, 1.0, spec)
    assert info.value.estimate == pytest.approx(3.0, rel=0.1)
    assert info.value.error > 0


def test_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_subdivisions=0)


def test_deterministic():
    f = lambda t: np.sin(t) ** 2 + np.floor(3 * t)
    assert integrate(f, 0.0, 7.3) == integrate(f, 0.0, 7.3)


@settings(max_examples=150, deadline=None)
@given(
    jumps=st.lists(st.floats(0.0, 50.0, allow_nan=False), min_size=1, max_size=30),
    heights=st.lists(st.floats(0.1, 3.0), min_size=30, max_size=30),
)
def test_monotone_steps_within_estimate(jumps, heights):
    jumps = np.sort(np.array(jumps))
    levels = np.concatenate([[0.0], np.cumsum(heights[: len(jumps)])])
    f = lambda t: levels[np.searchsorted(jumps, t, side="right")]
    exact = math.fsum(h * (50.0 - j) for h, j in zip(heights, jumps))
    value, err = integrate_with_error(f, 0.0, 50.0)
    assert abs(value - exact) <= max(err, 1e-9 * exact) + 1e-9
