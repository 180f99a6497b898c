"""Directed graphs, Markov matrices built from them, and diameter bounds."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import HypothesisError, ValidationError
from .markov import TransitionMatrix, _phi_from, check_hypotheses, stationary, structure
from .numkernel import DEFAULT_TOLERANCES, Tolerances

INTEGER_SNAP = 1e-12


@dataclass(frozen=True)
class Digraph:
    m: int
    edges: frozenset[tuple[int, int]]
    out_degree: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.m < 0:
            raise ValidationError("vertex count must be nonnegative")
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        for i, j in edges:
            if not (0 <= i < self.m and 0 <= j < self.m):
                raise ValidationError(f"edge ({i}, {j}) has an endpoint outside [0, {self.m})")
        deg = [0] * self.m
        for i, _ in edges:
            deg[i] += 1
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "out_degree", tuple(deg))

    @classmethod
    def from_edges(cls, pairs: Iterable, m: int | None = None) -> "Digraph":
        pairs = [(int(i), int(j)) for i, j in pairs]
        if m is None:
            m = 1 + max((max(p) for p in pairs), default=-1)
        return cls(m, frozenset(pairs))

    @classmethod
    def from_adjacency(cls, adj) -> "Digraph":
        adj = np.asarray(adj, dtype=bool)
        return cls(adj.shape[0], frozenset(zip(*np.nonzero(adj))))

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.m, self.m), dtype=bool)
        for i, j in self.edges:
            adj[i, j] = True
        return adj

    def is_symmetric(self) -> bool:
        return all((j, i) in self.edges for i, j in self.edges)


@dataclass(frozen=True, eq=False)
class DiameterReport:
    exact: float
    bound: int | None
    hypothesis_ok: bool
    per_j_terms: list[int] | None
    failure_reason: str | None = None
    pi: np.ndarray | None = None
    rho: float | None = None
    phi_max: float | None = None


def markov_matrix_uniform(G: Digraph) -> TransitionMatrix:
    """p_ij = 1 / outdeg(i) on edges, 0 elsewhere."""
    for v, d in enumerate(G.out_degree):
        if d == 0:
            raise ValidationError(f"vertex {v} has no outgoing edge")
    P = G.adjacency().astype(float)
    P /= np.asarray(G.out_degree, dtype=float)[:, None]
    return TransitionMatrix(P)


def markov_matrix_lazy_undirected(G: Digraph) -> TransitionMatrix:
    """Symmetric walk: 1/d on edges, 1 - deg(v)/d on the diagonal, d = max degree.

    Self-loops in the input are ignored; the diagonal is set by the construction.
    """
    if not G.is_symmetric():
        raise ValidationError("lazy undirected construction needs a symmetric edge set")
    adj = G.adjacency()
    np.fill_diagonal(adj, False)
    deg = adj.sum(axis=1)
    d = int(deg.max()) if G.m else 0
    if d == 0:
        if G.m == 1:
            return TransitionMatrix(np.ones((1, 1)))
        raise ValidationError("graph has no edges")
    P = adj / d
    P[np.diag_indices(G.m)] = 1 - deg / d
    return TransitionMatrix(P)


def _bfs(adj: np.ndarray, s: int) -> list[float]:
    dist = [math.inf] * adj.shape[0]
    dist[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        for v in np.flatnonzero(adj[u]):
            if dist[v] == math.inf:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def exact_diameter(G: Digraph) -> float:
    """Largest shortest-path distance over ordered pairs i != j; inf if some pair is unreachable."""
    adj = G.adjacency()
    best = 0
    for s in range(G.m):
        dist = _bfs(adj, s)
        best = max([best] + [d for t, d in enumerate(dist) if t != s])
    return best


def _strict_ceil(x: float) -> int:
    """Smallest integer strictly greater than x (an integer x bumps to x + 1)."""
    c = math.ceil(x)
    if abs(x - round(x)) <= INTEGER_SNAP * max(1.0, abs(x)):
        c = round(x) + 1
    return c


def pair_terms(phi: np.ndarray, pi: np.ndarray, rho: float) -> np.ndarray:
    """Per ordered pair i != j, a walk length n >= 1 after which p_ij^(n) > 0 is guaranteed.

    The diagonal is left at 0 since d(v, v) does not enter the diameter.
    """
    m = len(pi)
    out = np.zeros((m, m), dtype=int)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if rho == 0 or phi[i, j] <= 0:
                out[i, j] = 1
                continue
            x = math.log(phi[i, j] / pi[j]) / math.log(1 / rho)
            out[i, j] = max(1, _strict_ceil(x))
    return out


def diameter_bound(G: Digraph, P: TransitionMatrix | None = None,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> DiameterReport:
    """Spectral upper bound on the diameter of G from a Markov matrix P for G.

    The bound is the max over ordered pairs (i, j), i != j, of the first n with
    phi[i, j] * rho**n < pi_j; ``per_j_terms`` holds the max over i for each j.
    """
    if P is None:
        P = markov_matrix_uniform(G)
    if P.m != G.m or not np.array_equal(P.support(), G.adjacency()):
        raise ValidationError("support of the Markov matrix does not match the graph's edges")
    exact = exact_diameter(G)
    try:
        _, spec = check_hypotheses(P, tol)
    except HypothesisError as exc:
        return DiameterReport(exact, None, False, None, f"{exc.reason}: {exc}")
    pi = stationary(P).pi
    phi = _phi_from(P, spec)
    terms = pair_terms(phi, pi, spec.rho)
    per_j = [int(terms[:, j].max()) for j in range(G.m)]
    return DiameterReport(exact, max(per_j, default=0), True, per_j,
                          pi=pi, rho=spec.rho, phi_max=float(phi.max()))


def chung_bound(m: int, k: int, tau: float) -> int:
    """ceil(log(m - 1) / log(k / tau)) for a k-regular graph with second adjacency eigenvalue tau."""
    if m < 2:
        raise ValidationError("chung_bound needs m >= 2")
    if not 0 < tau < k:
        raise ValidationError(f"need 0 < tau < k, got tau={tau}, k={k}")
    return math.ceil(math.log(m - 1) / math.log(k / tau))


def random_digraph(rng: np.random.Generator, m: int, p: float = 0.4) -> Digraph:
    """Erdos-Renyi digraph with at least one self-loop."""
    adj = rng.random((m, m)) < p
    v = rng.integers(m)
    adj[v, v] = True
    return Digraph.from_adjacency(adj)


def random_accepted_digraph(rng: np.random.Generator, m: int, p: float = 0.4,
                            max_tries: int = 10_000,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> Digraph:
    """Rejection-sample a strongly connected digraph whose uniform walk meets every hypothesis."""
    for _ in range(max_tries):
        G = random_digraph(rng, m, p)
        if min(G.out_degree) == 0:
            continue
        P = markov_matrix_uniform(G)
        if not structure(P).irreducible:
            continue
        try:
            check_hypotheses(P, tol)
        except HypothesisError:
            continue
        return G
    raise RuntimeError(f"no accepted digraph on {m} vertices after {max_tries} tries")


def random_regular_graph(rng: np.random.Generator, m: int, k: int, swaps: int | None = None) -> Digraph:
    """Simple undirected k-regular graph (as a symmetric digraph).

    Starts from a circulant graph and randomises it with degree-preserving
    double-edge swaps.
    """
    if (m * k) % 2 or not 0 <= k < m:
        raise ValidationError(f"no simple {k}-regular graph on {m} vertices")
    und = set()
    for i in range(m):
        for s in range(1, k // 2 + 1):
            und.add(frozenset((i, (i + s) % m)))
        if k % 2:
            und.add(frozenset((i, (i + m // 2) % m)))
    edges = [tuple(e) for e in und]
    swaps = 10 * len(edges) if swaps is None else swaps
    for _ in range(swaps):
        if len(edges) < 2:
            break
        x, y = rng.choice(len(edges), size=2, replace=False)
        (a, b), (c, d) = edges[x], edges[y]
        if rng.random() < 0.5:
            c, d = d, c
        new1, new2 = frozenset((a, d)), frozenset((c, b))
        if a == d or c == b or new1 in und or new2 in und or new1 == new2:
            continue
        und -= {frozenset((a, b)), frozenset((c, d))}
        und |= {new1, new2}
        edges[x], edges[y] = (a, d), (c, b)
    directed = {(i, j) for i, j in edges} | {(j, i) for i, j in edges}
    return Digraph(m, frozenset(directed))
