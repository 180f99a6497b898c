"""Characteristic polynomials, spectra and closed forms for matrix-power entries."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import RepeatedEigenvalueError, ValidationError, ZeroEigenvalueError
from .numkernel import DEFAULT_TOLERANCES, Polynomial, RootSet, Tolerances, find_roots
from .recurrence import ClosedForm, coefficients_from_terms

SOFT_SIZE_CAP = 60


def as_square(A) -> np.ndarray:
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValidationError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise ValidationError("matrix has non-finite entries")
    return M


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: RootSet
    all_simple: bool
    all_nonzero: bool
    dominant: complex
    rho: float


def char_poly(A) -> Polynomial:
    """det(xI - A) by the Faddeev-LeVerrier recursion."""
    M = as_square(A)
    m = M.shape[0]
    if m > SOFT_SIZE_CAP:
        warnings.warn(f"char_poly on a {m}x{m} matrix is badly conditioned", RuntimeWarning,
                      stacklevel=2)
    coeffs = np.zeros(m + 1, dtype=complex)
    coeffs[m] = 1
    eye = np.eye(m, dtype=complex)
    Mk = np.zeros_like(M)
    for k in range(1, m + 1):
        Mk = M @ Mk + coeffs[m - k + 1] * eye
        coeffs[m - k] = -np.trace(M @ Mk) / k
    return Polynomial(tuple(coeffs))


def poly_at_matrix(p: Polynomial, A) -> np.ndarray:
    """Evaluate p at a square matrix by Horner's rule."""
    M = as_square(A)
    out = np.zeros_like(M)
    eye = np.eye(M.shape[0], dtype=complex)
    for c in reversed(p.coeffs):
        out = out @ M + c * eye
    return out


def spectrum_from_roots(roots: RootSet, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    dominant = roots[0]
    top = abs(dominant)
    cut = top - tol.distinct_rel * max(top, 1e-300)
    below = [abs(r) for r in roots if abs(r) < cut]
    return Spectrum(
        eigenvalues=roots,
        all_simple=roots.is_distinct(tol),
        all_nonzero=roots.is_nonzero(tol),
        dominant=dominant,
        rho=max(below, default=0.0),
    )


def eigenvalues(A, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    M = as_square(A)
    if M.shape[0] == 1:
        roots = RootSet((complex(M[0, 0]),))
    else:
        roots = find_roots(char_poly(M), tolerances=tol)
    return spectrum_from_roots(roots, tol)


def require_simple_nonzero(spec: Spectrum) -> None:
    if not spec.all_nonzero:
        raise ZeroEigenvalueError("spectrum contains a zero eigenvalue")
    if not spec.all_simple:
        raise RepeatedEigenvalueError(
            f"spectrum is not simple (min separation {spec.eigenvalues.sep_min:.3e})")


def matrix_powers(A, count: int) -> list[np.ndarray]:
    """[A^1, ..., A^count] by successive multiplication."""
    M = np.asarray(A)
    out = [M.copy()]
    for _ in range(count - 1):
        out.append(out[-1] @ M)
    return out


def power_entry_closed_form(A, i: int, j: int, spectrum: Spectrum | None = None,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> ClosedForm:
    """Closed form of n -> (A^n)[i, j] as sum_r c_r * eigenvalue_r**n.

    The entries (A^1)[i, j] .. (A^m)[i, j] satisfy the recurrence whose
    characteristic polynomial is char_poly(A), so their coefficients come
    from the same closed-form Vandermonde solve used for recurrences.
    """
    M = as_square(A)
    m = M.shape[0]
    if not (0 <= i < m and 0 <= j < m):
        raise ValidationError(f"index ({i}, {j}) out of range for {m}x{m} matrix")
    spec = eigenvalues(M, tol) if spectrum is None else spectrum
    require_simple_nonzero(spec)
    terms = [P[i, j] for P in matrix_powers(M, m)]
    return ClosedForm(spec.eigenvalues, coefficients_from_terms(spec.eigenvalues, terms, tol))
