import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from recurspec.errors import IllConditionedError, SingularError, ValidationError
from recurspec.numkernel import find_roots, poly_from_roots, root_residuals
from recurspec.recurrence import (
    ClosedForm,
    Recurrence,
    characteristic_polynomial,
    closed_form_residual,
    evaluate_closed_form,
    iterate,
    solve_closed_form,
)
from recurspec.spectral import poly_at_matrix
from recurspec.vandermonde import vandermonde_matrix

from conftest import separated_points
from oracles import companion_terms

FIB = Recurrence((1, 1), (0, 1))


def recurrence_with_roots(roots, initial):
    p = poly_from_roots(roots)
    # x^m - a_{m-1} x^{m-1} - ... - a_0
    return Recurrence(tuple(-c for c in p.coeffs[:-1]), tuple(initial))


def companion(rec):
    m = rec.order
    C = np.zeros((m, m), dtype=complex)
    C[:-1, 1:] = np.eye(m - 1)
    C[-1, :] = rec.coeffs
    return C


def test_iterate_fibonacci():
    assert iterate(FIB, 10)[10] == 55


def test_iterate_geometric():
    assert iterate(Recurrence((2,), (3,)), 4) == [3, 6, 12, 24, 48]


def test_iterate_short_horizon():
    assert iterate(Recurrence((1, 1, 1), (4, 5, 6)), 1) == [4, 5]


def test_iterate_matches_companion(rng):
    a = rng.normal(size=4) + 1j * rng.normal(size=4)
    x0 = rng.normal(size=4)
    rec = Recurrence(tuple(a), tuple(x0))
    ref = companion_terms(a, x0, 20)
    got = iterate(rec, 20)
    scale = max(map(abs, ref))
    assert max(abs(g - r) for g, r in zip(got, ref)) <= 1e-10 * scale


def test_recurrence_validation():
    with pytest.raises(ValidationError):
        Recurrence((1, 2), (1,))
    with pytest.raises(ValidationError):
        Recurrence((), ())
    with pytest.raises(ValidationError):
        iterate(FIB, -1)


def test_characteristic_polynomial():
    assert characteristic_polynomial(FIB).coeffs == (-1, -1, 1)
    assert characteristic_polynomial(Recurrence((2,), (3,))).coeffs == (-2, 1)


def test_characteristic_polynomial_random_residual(rng):
    rec = Recurrence(tuple(rng.normal(size=5)), tuple(rng.normal(size=5)))
    p = characteristic_polynomial(rec)
    rs = find_roots(p)
    assert (root_residuals(p, rs.as_array()) < 1e-10).all()


def test_fibonacci_closed_form():
    cf = solve_closed_form(FIB)
    phi, psi = (1 + math.sqrt(5)) / 2, (1 - math.sqrt(5)) / 2
    assert cf.roots[0] == pytest.approx(phi, abs=1e-14)
    assert cf.roots[1] == pytest.approx(psi, abs=1e-14)
    # Binet coefficients from the 2x2 system c1 + c2 = 0, c1*phi + c2*psi = 1
    ref = np.linalg.solve([[1, 1], [phi, psi]], [0, 1])
    assert cf.coefficients[0] == pytest.approx(ref[0], abs=1e-12)
    assert cf.coefficients[1] == pytest.approx(ref[1], abs=1e-12)
    assert cf.coefficients[0].real == pytest.approx(0.4472135955, abs=1e-10)
    assert abs(evaluate_closed_form(cf, 10) - 55) < 1e-9


def test_geometric_closed_form():
    cf = solve_closed_form(Recurrence((2,), (3,)))
    assert cf.roots.roots == (2,)
    assert cf.coefficients[0] == pytest.approx(3)


def test_evaluate_at_zero_is_coefficient_sum(rng):
    cf = ClosedForm(find_roots(poly_from_roots([1, 2, 3])), (1 + 1j, 2, -0.5))
    assert evaluate_closed_form(cf, 0) == pytest.approx(sum(cf.coefficients))


def test_random_order_six_round_trip(rng):
    roots = separated_points(rng, 6, 0.3, 0.5, 1.2)
    rec = recurrence_with_roots(roots, rng.normal(size=6))
    cf = solve_closed_form(rec)
    xs = iterate(rec, 30)
    assert closed_form_residual(cf, xs) < 1e-8
    assert abs(evaluate_closed_form(cf, 25) - xs[25]) <= 1e-8 * max(map(abs, xs))


def test_zero_root_rejected():
    with pytest.raises(SingularError, match="non-zero roots"):
        solve_closed_form(Recurrence((0, 1), (1, 1)))


def test_repeated_root_rejected():
    rec = Recurrence((-1, 2), (1, 2))  # (x - 1)^2
    with pytest.raises(IllConditionedError):
        solve_closed_form(rec)


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_round_trip_and_linear_solve(m, seed):
    rng = np.random.default_rng(seed)
    roots = separated_points(rng, m, 0.25, 0.5, 1.3)
    rec = recurrence_with_roots(roots, rng.normal(size=m) + 1j * rng.normal(size=m))
    cf = solve_closed_form(rec)
    xs = iterate(rec, 30)
    assert closed_form_residual(cf, xs) < 1e-8
    V = vandermonde_matrix(cf.roots)
    ref = np.linalg.solve(V, np.array(xs[1:m + 1]))
    assert np.abs(np.array(cf.coefficients) - ref).max() <= 1e-8 * np.abs(ref).max()


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_cayley_hamilton_on_companion(m, seed):
    rng = np.random.default_rng(seed)
    rec = Recurrence(tuple(rng.uniform(-1, 1, size=m)), tuple(rng.normal(size=m)))
    C = companion(rec)
    assert np.abs(poly_at_matrix(characteristic_polynomial(rec), C)).max() < 1e-9
