"""Linear recurrent sequences x_n = a_{m-1} x_{n-1} + ... + a_0 x_{n-m}.

Closed forms x_n = sum_i c_i * root_i**n are supported for characteristic
polynomials with nonzero, pairwise distinct roots.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NumericalError, SingularError, ValidationError
from .numkernel import (
    DEFAULT_TOLERANCES,
    Polynomial,
    RootSet,
    Tolerances,
    as_complex_list,
    find_roots,
)
from .vandermonde import check_nodes, vandermonde_inverse


@dataclass(frozen=True)
class Recurrence:
    """``coeffs`` is [a_0, ..., a_{m-1}]; ``initial`` is [x_0, ..., x_{m-1}]."""

    coeffs: tuple[complex, ...]
    initial: tuple[complex, ...]

    def __post_init__(self):
        a = tuple(as_complex_list(self.coeffs))
        x = tuple(as_complex_list(self.initial))
        if len(a) < 1:
            raise ValidationError("recurrence order must be at least 1")
        if len(a) != len(x):
            raise ValidationError(
                f"need one initial value per coefficient, got {len(a)} coeffs and {len(x)} initial")
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "initial", x)

    @property
    def order(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class ClosedForm:
    roots: RootSet
    coefficients: tuple[complex, ...]

    def __post_init__(self):
        if len(self.coefficients) != len(self.roots):
            raise ValidationError("one coefficient per root required")


def iterate(rec: Recurrence, n: int) -> list[complex]:
    """[x_0, ..., x_n] by direct recursion."""
    if n < 0:
        raise ValidationError("n must be nonnegative")
    m = rec.order
    xs = list(rec.initial[: n + 1])
    # a_0 multiplies the oldest term
    for k in range(m, n + 1):
        xs.append(sum(a * x for a, x in zip(rec.coeffs, xs[k - m:k])))
    return xs


def characteristic_polynomial(rec: Recurrence) -> Polynomial:
    """T^m - a_{m-1} T^{m-1} - ... - a_1 T - a_0."""
    return Polynomial(tuple(-a for a in rec.coeffs) + (1 + 0j,))


def coefficients_from_terms(roots: RootSet, terms: Sequence,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> tuple[complex, ...]:
    """Solve sum_i c_i root_i**t = terms[t-1] for t = 1..m in closed form."""
    x = np.asarray(as_complex_list(terms), dtype=complex)
    if len(x) != len(roots):
        raise ValidationError("need exactly one term per root")
    W = vandermonde_inverse(roots, tol)
    return tuple(complex(c) for c in W @ x)


def evaluate_closed_form(cf: ClosedForm, n: int) -> complex:
    if n < 0:
        raise ValidationError("n must be nonnegative")
    return complex(sum(c * r ** n for c, r in zip(cf.coefficients, cf.roots)))


def closed_form_residual(cf: ClosedForm, xs: Sequence[complex]) -> float:
    """max_n |cf(n) - xs[n]| relative to max_n |xs[n]|."""
    xs = np.asarray(xs, dtype=complex)
    approx = np.array([evaluate_closed_form(cf, n) for n in range(len(xs))])
    scale = max(float(np.abs(xs).max()), 1e-300)
    return float(np.abs(approx - xs).max() / scale)


def solve_closed_form(rec: Recurrence, tol: float = 1e-8,
                      tolerances: Tolerances = DEFAULT_TOLERANCES) -> ClosedForm:
    """Roots of the characteristic polynomial and the constant coefficients c_i.

    The coefficients are fitted to x_1..x_m (x_m is one step past the initial
    conditions). The result is checked against direct iteration up to n = 2m
    and NumericalError is raised if the relative mismatch exceeds ``tol``.
    """
    if rec.coeffs[0] == 0:
        raise SingularError("closed form requires non-zero roots (a_0 = 0)")
    roots = find_roots(characteristic_polynomial(rec), tolerances=tolerances)
    try:
        check_nodes(roots, tolerances)
    except SingularError:
        raise SingularError("closed form requires non-zero roots") from None
    m = rec.order
    xs = iterate(rec, 2 * m)
    cf = ClosedForm(roots, coefficients_from_terms(roots, xs[1:m + 1], tolerances))
    res = closed_form_residual(cf, xs)
    if res > tol:
        raise NumericalError(f"closed form disagrees with iteration (relative residual {res:.3e})",
                             best=cf, residual=res)
    return cf
