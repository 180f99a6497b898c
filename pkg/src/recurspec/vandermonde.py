"""Vandermonde matrices whose rows run over powers 1..n, with a closed-form
determinant and inverse.

Row ``t`` (0-based) of the matrix holds ``node ** (t + 1)``, so the first row
is the nodes themselves rather than a row of ones.
"""
from __future__ import annotations

import math
import warnings
from typing import Sequence

import numpy as np

from .errors import IllConditionedError, SingularError
from .numkernel import (
    DEFAULT_TOLERANCES,
    RootSet,
    Tolerances,
    elementary_symmetric_all_excluding,
)

SOFT_SIZE_CAP = 25


def _nodes(nodes) -> RootSet:
    return nodes if isinstance(nodes, RootSet) else RootSet(tuple(nodes))


def vandermonde_matrix(nodes: RootSet | Sequence) -> np.ndarray:
    lam = _nodes(nodes).as_array()
    powers = np.arange(1, len(lam) + 1)[:, None]
    return lam[None, :] ** powers


def vandermonde_det(nodes: RootSet | Sequence) -> complex:
    lam = list(_nodes(nodes).roots)
    n = len(lam)
    det = complex((-1) ** math.comb(n, 2))
    for x in lam:
        det *= x
    for i in range(n):
        for j in range(i):
            det *= lam[j] - lam[i]
    return det


def check_nodes(nodes: RootSet, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
    """Raise unless every node is nonzero and the nodes are pairwise distinct."""
    if len(nodes) == 0:
        return
    if nodes.abs_min == 0 or not nodes.is_nonzero(tol):
        raise SingularError("singular: zero node")
    if not nodes.is_distinct(tol):
        raise IllConditionedError(
            f"ill-conditioned: node separation below threshold (sep_min={nodes.sep_min:.3e})",
            sep_min=nodes.sep_min,
        )


def vandermonde_inverse(nodes: RootSet | Sequence,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Closed-form inverse W with W @ vandermonde_matrix(nodes) == I.

    Entry (i, j), 1-based, is
        (-1)**(n-j) * e_{n-j}(nodes without i) / (node_i * prod_{k != i}(node_i - node_k)).
    """
    ns = _nodes(nodes)
    check_nodes(ns, tol)
    n = len(ns)
    if n > SOFT_SIZE_CAP:
        warnings.warn(f"closed-form Vandermonde inverse with n={n} > {SOFT_SIZE_CAP} "
                      "loses accuracy in double precision", RuntimeWarning, stacklevel=2)
    lam = ns.roots
    W = np.empty((n, n), dtype=complex)
    for i in range(n):
        e = elementary_symmetric_all_excluding(lam, i)
        denom = lam[i]
        for k in range(n):
            if k != i:
                denom *= lam[i] - lam[k]
        for j in range(1, n + 1):
            W[i, j - 1] = (-1) ** (n - j) * e[n - j] / denom
    return W
