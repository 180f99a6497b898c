"""Complex scalar helpers, polynomials, elementary symmetric functions and
simultaneous-iteration root finding.

Scalars are plain Python ``complex``; vectors and matrices are numpy
``complex128`` arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericalError, ValidationError

EPS = np.finfo(float).eps
# absolute coefficient error assumed for computed polynomials, relative to max|coeff|
COEFF_ERROR = 64 * EPS


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the package.

    ``distinct_rel`` and ``zero_rel`` are relative to the largest modulus in
    the set being classified.
    """

    root_tol: float = 1e-10
    distinct_rel: float = 1e-8
    zero_rel: float = 1e-8
    max_iter: int = 1000


DEFAULT_TOLERANCES = Tolerances()


def as_complex(value) -> complex:
    """Coerce a number or an ``[re, im]`` pair to a finite ``complex``."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValidationError(f"complex pair must have two components, got {value!r}")
        z = complex(float(value[0]), float(value[1]))
    else:
        z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"non-finite scalar {value!r}")
    return z


def as_complex_list(values: Iterable) -> list[complex]:
    return [as_complex(v) for v in values]


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with complex coefficients in ascending degree order."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        cs = [as_complex(c) for c in self.coeffs] or [0j]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0j * x if isinstance(x, np.ndarray) else 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0j,))
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


@dataclass(frozen=True)
class RootSet:
    """An ordered set of complex values with its spacing statistics.

    ``radii`` are optional error radii: a true value lies within radii[k] of
    roots[k]. Values whose disks overlap are not certified as distinct.
    """

    roots: tuple[complex, ...]
    radii: tuple[float, ...] | None = None
    sep_min: float = field(init=False)
    abs_min: float = field(init=False)

    def __post_init__(self):
        rs = tuple(as_complex(r) for r in self.roots)
        object.__setattr__(self, "roots", rs)
        radii = tuple(0.0 for _ in rs) if self.radii is None else tuple(map(float, self.radii))
        if len(radii) != len(rs):
            raise ValidationError("one radius per root required")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "sep_min", _min_separation(rs))
        object.__setattr__(self, "abs_min", min((abs(r) for r in rs), default=0.0))

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, k):
        return self.roots[k]

    @property
    def max_modulus(self) -> float:
        return max((abs(r) for r in self.roots), default=0.0)

    def is_distinct(self, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        if len(self.roots) < 2:
            return True
        if self.sep_min <= tol.distinct_rel * max(self.max_modulus, 1e-300):
            return False
        z = self.as_array()
        r = np.asarray(self.radii)
        gap = np.abs(z[:, None] - z[None, :]) - (r[:, None] + r[None, :])
        np.fill_diagonal(gap, np.inf)
        return bool(gap.min() > 0)

    def is_nonzero(self, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        if not self.roots:
            return True
        return self.abs_min > tol.zero_rel * max(self.max_modulus, 1e-300)

    def as_array(self) -> np.ndarray:
        return np.array(self.roots, dtype=complex)


def _min_separation(rs: Sequence[complex]) -> float:
    if len(rs) < 2:
        return 0.0
    z = np.asarray(rs, dtype=complex)
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def _product_sweep(values: Iterable[complex]) -> list[complex]:
    # coefficients of prod(x + v), highest power first: out[j] == e_j
    out = [1 + 0j]
    for v in values:
        out.append(0j)
        for j in range(len(out) - 1, 0, -1):
            out[j] += v * out[j - 1]
    return out


def elementary_symmetric(values: Sequence, j: int) -> complex:
    """e_j of ``values``, read off the expanded product prod(x + v)."""
    vals = as_complex_list(values)
    if not 0 <= j <= len(vals):
        raise ValidationError(f"j={j} out of range for {len(vals)} values")
    return _product_sweep(vals)[j]


def elementary_symmetric_all_excluding(values: Sequence, i: int) -> list[complex]:
    """[e_0, ..., e_{n-1}] of ``values`` with entry ``i`` left out."""
    vals = as_complex_list(values)
    if not 0 <= i < len(vals):
        raise ValidationError(f"index {i} out of range for {len(vals)} values")
    return _product_sweep(v for k, v in enumerate(vals) if k != i)


def poly_from_roots(roots: Sequence) -> Polynomial:
    """Monic polynomial vanishing at each of ``roots``."""
    e = _product_sweep(-r for r in as_complex_list(roots))
    # e is prod(x - r) in descending order
    return Polynomial(tuple(reversed(e)))


def sort_roots(roots: Sequence[complex]) -> list[complex]:
    """Descending modulus, then descending real part, then descending imaginary part.

    Keys are quantised at 1e-9 of the largest modulus so rounding noise
    (e.g. between conjugates) cannot reorder ties.
    """
    rs = [complex(r) for r in roots]
    return [rs[k] for k in root_order(rs)]


def root_order(roots: Sequence[complex]) -> list[int]:
    """Indices that put ``roots`` in the order used by ``sort_roots``."""
    rs = [complex(r) for r in roots]
    if not rs:
        return []
    q = 1e-9 * max(max(abs(r) for r in rs), 1e-300)
    return sorted(range(len(rs)),
                  key=lambda k: (-round(abs(rs[k]) / q), -round(rs[k].real / q), -round(rs[k].imag / q)))


def root_residuals(p: Polynomial, z: np.ndarray) -> np.ndarray:
    """Scaled residual |p(z)| / (max|coeff| * (1 + |z|)^deg)."""
    scale = max(abs(c) for c in p.coeffs)
    return np.abs(p(z)) / (scale * (1.0 + np.abs(z)) ** p.degree)


def inclusion_radii(p: Polynomial, z: np.ndarray) -> np.ndarray:
    """n * |p(z_k)| / |lead * prod_{j != k}(z_k - z_j)|, with |p(z_k)| inflated
    to cover an absolute error of COEFF_ERROR * max|coeff| in every coefficient.

    The union of these disks holds every root of any polynomial within that
    coefficient error, and an isolated disk holds exactly one.
    """
    n = len(z)
    absz = np.abs(z)
    eta = COEFF_ERROR * max(abs(c) for c in p.coeffs)
    slack = eta * sum(absz ** k for k in range(len(p.coeffs)))
    num = np.abs(p(z)) + slack
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    den = abs(p.leading) * np.abs(diff).prod(axis=1)
    with np.errstate(divide="ignore"):
        return np.where(den > 0, n * num / den, np.inf)


def _initial_guesses(p: Polynomial) -> np.ndarray:
    n = p.degree
    lead = abs(p.leading)
    radius = 1.0 + max(abs(c) for c in p.coeffs[:-1]) / lead
    # fixed offset breaks the symmetry of roots lying on a common circle
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return radius * np.exp(1j * angles)


def _aberth(p: Polynomial, z: np.ndarray, tol: float, max_iter: int):
    dp = p.derivative()
    n = len(z)
    done = np.zeros(n, dtype=bool)
    for it in range(max_iter):
        pz = p(z)
        dpz = dp(z)
        dpz = np.where(dpz == 0, EPS, dpz)
        ratio = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        w = ratio / (1.0 - ratio * inv.sum(axis=1))
        w = np.where(done | ~np.isfinite(w), 0, w)
        z = z - w
        done |= np.abs(w) <= 4 * EPS * (1 + np.abs(z))
        if done.all():
            return z, it + 1
        if it > 50 and (root_residuals(p, z) < tol * 1e-3).all():
            return z, it + 1
    return z, max_iter


def _durand_kerner(p: Polynomial, z: np.ndarray, tol: float, max_iter: int):
    lead = p.leading
    for it in range(max_iter):
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        w = p(z) / (lead * diff.prod(axis=1))
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if (np.abs(w) <= 4 * EPS * (1 + np.abs(z))).all():
            return z, it + 1
    return z, max_iter


def find_roots(p: Polynomial, tol: float | None = None,
               tolerances: Tolerances = DEFAULT_TOLERANCES) -> RootSet:
    """All complex roots of ``p`` by Aberth-Ehrlich iteration.

    Falls back to Durand-Kerner when Aberth leaves a residual above ``tol``.
    Raises NumericalError carrying the best iterate if neither succeeds within
    ``tolerances.max_iter`` iterations.
    """
    tol = tolerances.root_tol if tol is None else tol
    if p.degree < 1:
        raise ValidationError("find_roots needs a polynomial of degree >= 1")
    if p.degree == 1:
        z = np.array([-p.coeffs[0] / p.coeffs[1]])
        return RootSet(tuple(z), tuple(inclusion_radii(p, z)))

    z0 = _initial_guesses(p)
    z, _ = _aberth(p, z0, tol, tolerances.max_iter)
    res = root_residuals(p, z)
    if not (np.isfinite(res).all() and (res < tol).all()):
        z_dk, _ = _durand_kerner(p, z0, tol, tolerances.max_iter)
        res_dk = root_residuals(p, z_dk)
        if np.nanmax(res_dk) < np.nanmax(res):
            z, res = z_dk, res_dk
    worst = float(np.nanmax(res)) if np.isfinite(res).any() else math.inf
    if not (np.isfinite(res).all() and worst < tol):
        raise NumericalError(
            f"root finding did not converge (worst residual {worst:.3e})",
            best=[complex(v) for v in z], residual=worst,
        )
    radii = inclusion_radii(p, z)
    order = root_order(z)
    return RootSet(tuple(complex(z[k]) for k in order), tuple(float(radii[k]) for k in order))


def is_real(z: complex, tol: float = 1e-10) -> bool:
    return abs(z.imag) < tol * (1 + abs(z.real))
