"""Finite discrete-time Markov chains: validation, structure, stationary
distribution and spectral convergence bounds.

For an irreducible aperiodic chain whose eigenvalues are nonzero and simple,
every n-step probability obeys

    |p_ij^(n) - pi_j| <= phi[i, j] * rho**n      (phi_bound)
    |p_ij^(n) - pi_j| <= psi * rho**(n - 1)      (psi_bound)

where rho is the largest modulus among the non-dominant eigenvalues.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (
    DominantEigenvalueError,
    HypothesisError,
    NumericalError,
    PeriodicChainError,
    ReducibleChainError,
    ValidationError,
)
from .numkernel import DEFAULT_TOLERANCES, RootSet, Tolerances
from .spectral import Spectrum, eigenvalues, require_simple_nonzero, spectrum_from_roots

ENTRY_SLACK = 1e-12
ROW_SUM_TOL = 1e-10
INTEGER_SNAP = 1e-12


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    P: np.ndarray

    @property
    def m(self) -> int:
        return self.P.shape[0]

    def support(self) -> np.ndarray:
        return self.P > 0


@dataclass(frozen=True)
class ChainStructure:
    irreducible: bool
    period: int | None
    aperiodic: bool


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    pi: np.ndarray
    residual: float
    power_gap: float


@dataclass(frozen=True, eq=False)
class ConvergenceBound:
    rho: float | None
    phi: np.ndarray | None
    psi: float | None
    hypothesis_ok: bool
    failure_reason: str | None = None

    @property
    def phi_max(self) -> float | None:
        return None if self.phi is None else float(self.phi.max())


def validate(grid) -> TransitionMatrix:
    try:
        P = np.array(grid, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"transition matrix is not numeric: {exc}") from None
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
        raise ValidationError(f"transition matrix must be square and non-empty, got shape {P.shape}")
    if not np.isfinite(P).all():
        raise ValidationError("transition matrix has non-finite entries")
    for i, row in enumerate(P):
        if (row < -ENTRY_SLACK).any() or (row > 1 + ENTRY_SLACK).any():
            raise ValidationError(f"row {i}: entries must lie in [0, 1]")
        if abs(row.sum() - 1.0) > ROW_SUM_TOL:
            raise ValidationError(f"row {i}: sums to {row.sum():.17g}, expected 1")
    return TransitionMatrix(np.clip(P, 0.0, 1.0))


def _reach(adj: np.ndarray, start: int) -> np.ndarray:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    stack = [start]
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(adj[u]):
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return seen


def _bfs_levels(adj: np.ndarray, start: int) -> list[int]:
    level = [-1] * adj.shape[0]
    level[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def support_structure(adj: np.ndarray) -> ChainStructure:
    """Irreducibility and period of the digraph with boolean adjacency ``adj``."""
    adj = np.asarray(adj, dtype=bool)
    irreducible = bool(_reach(adj, 0).all() and _reach(adj.T, 0).all())
    if not irreducible:
        return ChainStructure(irreducible=False, period=None, aperiodic=False)
    level = _bfs_levels(adj, 0)
    g = 0
    for u, v in zip(*np.nonzero(adj)):
        g = math.gcd(g, abs(level[u] + 1 - level[v]))
    return ChainStructure(irreducible=True, period=g, aperiodic=g == 1)


def structure(tm: TransitionMatrix) -> ChainStructure:
    return support_structure(tm.support())


def _require_ergodic(tm: TransitionMatrix) -> ChainStructure:
    st = structure(tm)
    if not st.irreducible:
        raise ReducibleChainError("chain is not irreducible")
    if not st.aperiodic:
        raise PeriodicChainError(f"chain has period {st.period}", period=st.period)
    return st


def power_iteration(tm: TransitionMatrix, steps: int = 500) -> np.ndarray:
    x = np.full(tm.m, 1.0 / tm.m)
    for _ in range(steps):
        x = x @ tm.P
    return x


def stationary(tm: TransitionMatrix) -> StationaryDistribution:
    """Unique pi with pi P = pi and sum(pi) = 1 (irreducible aperiodic chains)."""
    _require_ergodic(tm)
    m = tm.m
    A = (tm.P - np.eye(m)).T
    A[-1, :] = 1.0
    b = np.zeros(m)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"stationary system is singular: {exc}") from None
    residual = float(np.abs(pi @ tm.P - pi).max())
    if residual > 1e-8 or abs(pi.sum() - 1) > 1e-8:
        raise NumericalError(f"stationary solve residual {residual:.3e}", best=pi, residual=residual)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    power_gap = float(np.abs(power_iteration(tm) - pi).max())
    return StationaryDistribution(pi=pi, residual=residual, power_gap=power_gap)


def markov_spectrum(tm: TransitionMatrix, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """Spectrum with the eigenvalue nearest 1 snapped to exactly 1 and listed first."""
    found = eigenvalues(tm.P, tol).eigenvalues
    raw, radii = found.roots, found.radii
    k = min(range(len(raw)), key=lambda r: abs(raw[r] - 1))
    if abs(raw[k] - 1) > 1e-8:
        raise DominantEigenvalueError(f"no eigenvalue within 1e-8 of 1 (nearest {raw[k]})")
    rest = [idx for idx in range(len(raw)) if idx != k]
    snapped = RootSet((1 + 0j, *(raw[r] for r in rest)),
                      (radii[k], *(radii[r] for r in rest)))
    return spectrum_from_roots(snapped, tol)


def check_hypotheses(tm: TransitionMatrix, tol: Tolerances = DEFAULT_TOLERANCES):
    """Return (structure, spectrum) or raise the first failing hypothesis."""
    st = _require_ergodic(tm)
    spec = markov_spectrum(tm, tol)
    require_simple_nonzero(spec)
    return st, spec


def _null_vector(M: np.ndarray) -> np.ndarray:
    """Unit vector spanning the (numerical) null space of M."""
    return np.linalg.svd(M)[2][-1].conj()


def spectral_projector(P: np.ndarray, lam: complex) -> np.ndarray:
    """E = r l^T / (l^T r) for the simple eigenvalue lam of P.

    E equals P prod_{t != k}(P - lam_t I) / (lam_k prod_{t != k}(lam_k - lam_t)),
    the matrix behind the Phi numerators, without the cancellation that the
    expanded product suffers when eigenvalues cluster.
    """
    shifted = P - lam * np.eye(P.shape[0])
    r = _null_vector(shifted)
    l = _null_vector(shifted.T)
    return np.outer(r, l) / (l @ r)


def _phi_from(tm: TransitionMatrix, spec: Spectrum) -> np.ndarray:
    """Phi[i, j] = sum over non-dominant k of |sum_l (-1)**(m-l) e_{m-l}(lam without k) p_ij^(l)|
    divided by |lam_k| prod_{t != k} |lam_k - lam_t|.

    With a simple spectrum the k-th term is |E_k[i, j]|, E_k the spectral
    projector of lam_k, and that is what gets evaluated.
    """
    lam = spec.eigenvalues.roots
    P = tm.P.astype(complex)
    phi = np.zeros(P.shape)
    for k in range(1, len(lam)):
        phi += np.abs(spectral_projector(P, lam[k]))
    return phi


def phi_grid(tm: TransitionMatrix, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Phi for every (i, j) pair; the n-step probabilities come from explicit powers."""
    _, spec = check_hypotheses(tm, tol)
    return _phi_from(tm, spec)


def phi_bound(tm: TransitionMatrix, i: int, j: int,
              tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    if not (0 <= i < tm.m and 0 <= j < tm.m):
        raise ValidationError(f"state pair ({i}, {j}) out of range")
    return float(phi_grid(tm, tol)[i, j])


def _psi_from(spec: Spectrum) -> float:
    lam = spec.eigenvalues.roots
    psi = 0.0
    for k in range(1, len(lam)):
        term = 1.0
        for t in range(len(lam)):
            if t != k:
                term *= (1 + abs(lam[t])) / abs(lam[k] - lam[t])
        psi += term
    return psi


def psi_bound(tm: TransitionMatrix, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    _, spec = check_hypotheses(tm, tol)
    return _psi_from(spec)


def convergence_bound(tm: TransitionMatrix, tol: Tolerances = DEFAULT_TOLERANCES) -> ConvergenceBound:
    """Non-raising wrapper: hypothesis failures come back with hypothesis_ok=False."""
    try:
        _, spec = check_hypotheses(tm, tol)
    except HypothesisError as exc:
        return ConvergenceBound(None, None, None, False, f"{exc.reason}: {exc}")
    return ConvergenceBound(spec.rho, _phi_from(tm, spec), _psi_from(spec), True)


def _log_steps(constant: float, rho: float, epsilon: float) -> float:
    if constant <= 0:
        return -math.inf
    x = math.log(constant / epsilon) / math.log(1 / rho)
    # round-off of a few ulps in Phi must not push an exact integer up a step
    if abs(x - round(x)) <= INTEGER_SNAP * max(1.0, abs(x)):
        return round(x)
    return math.ceil(x)


def mixing_time(tm: TransitionMatrix, epsilon: float,
                mode: Literal["phi-max", "psi"] = "phi-max",
                tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    """Smallest n at which the chosen bound drops below ``epsilon``."""
    if not 0 < epsilon < 1:
        raise ValidationError("epsilon must lie in (0, 1)")
    if mode not in ("phi-max", "psi"):
        raise ValidationError(f"unknown mode {mode!r}")
    _, spec = check_hypotheses(tm, tol)
    if spec.rho == 0:
        return 1
    if mode == "phi-max":
        steps = _log_steps(float(_phi_from(tm, spec).max()), spec.rho, epsilon)
    else:
        steps = 1 + _log_steps(_psi_from(spec), spec.rho, epsilon)
    return int(max(0, steps))


def random_transition_matrix(rng: np.random.Generator, m: int, density: float = 0.7) -> TransitionMatrix:
    """Random row-stochastic matrix; each row keeps at least one positive entry."""
    mask = rng.random((m, m)) < density
    mask[np.arange(m), rng.integers(0, m, size=m)] = True
    W = rng.exponential(size=(m, m)) * mask
    return TransitionMatrix(W / W.sum(axis=1, keepdims=True))
