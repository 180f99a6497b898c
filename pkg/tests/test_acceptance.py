"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a PASS/FAIL line that pytest prints in an
"acceptance criteria" section at the end of the run.
"""
import itertools
import math
import time

import numpy as np

from recurspec.graphs import (
    Digraph,
    chung_bound,
    diameter_bound,
    exact_diameter,
    markov_matrix_lazy_undirected,
    random_accepted_digraph,
    random_regular_graph,
)
from recurspec.markov import (
    TransitionMatrix,
    convergence_bound,
    random_transition_matrix,
    stationary,
    support_structure,
)
from recurspec.numkernel import elementary_symmetric_all_excluding, poly_from_roots
from recurspec.recurrence import Recurrence, evaluate_closed_form, iterate, solve_closed_form
from recurspec.spectral import char_poly, matrix_powers, poly_at_matrix
from recurspec.vandermonde import vandermonde_inverse, vandermonde_matrix

from conftest import separated_points
from oracles import adjugate_inverse_2x2, brute_structure

WITNESS = TransitionMatrix(np.array([[0.75, 0.25], [0.25, 0.75]]))


def _accepted_chains(rng, count, m_max=8):
    out = []
    while len(out) < count:
        tm = random_transition_matrix(rng, int(rng.integers(2, m_max + 1)))
        b = convergence_bound(tm)
        if b.hypothesis_ok:
            out.append((tm, b, stationary(tm).pi))
    return out


def _deviation_and_bounds(tm, b, pi, n_max=40):
    """Largest excess of |p_ij^(n) - pi_j| over each bound, for n = 1..n_max."""
    worst_phi = worst_psi = -math.inf
    for n, Pn in enumerate(matrix_powers(tm.P, n_max), 1):
        dev = np.abs(Pn - pi)
        worst_phi = max(worst_phi, float((dev - b.phi * b.rho ** n).max()))
        worst_psi = max(worst_psi, float((dev - b.psi * b.rho ** (n - 1)).max()))
    return worst_phi, worst_psi


def test_ac1_vandermonde_correctness(rng, record_criterion):
    start = time.perf_counter()
    worst_res = worst_rel = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 9))
        nodes = separated_points(rng, n, 0.2, 0.3, 3.0)
        V = vandermonde_matrix(nodes)
        W = vandermonde_inverse(nodes)
        ref = np.linalg.inv(V)
        worst_res = max(worst_res, float(np.abs(W @ V - np.eye(n)).max()))
        worst_rel = max(worst_rel, float(np.abs(W - ref).max() / np.abs(ref).max()))
    elapsed = time.perf_counter() - start
    ok = worst_res < 1e-9 and worst_rel < 1e-8 and elapsed < 5
    record_criterion("AC1 Vandermonde inverse", ok,
                     f"max|WV-I|={worst_res:.2e}, rel vs elimination={worst_rel:.2e}, {elapsed:.2f}s")
    assert ok


def test_ac2_sign_convention(record_criterion):
    nodes = [1.0, 2.0]
    W = vandermonde_inverse(nodes)
    oracle = adjugate_inverse_2x2(vandermonde_matrix(nodes))
    # the same closed form with the sign flipped to (-1)**(j-1), j 1-based
    n = len(nodes)
    flipped = np.zeros((n, n), dtype=complex)
    for i, lam in enumerate(nodes):
        e = elementary_symmetric_all_excluding(nodes, i)
        denom = lam * math.prod(lam - mu for k, mu in enumerate(nodes) if k != i)
        for j in range(1, n + 1):
            flipped[i, j - 1] = (-1) ** (j - 1) * e[n - j] / denom
    ok = (abs(W[0, 0] - 2) < 1e-12 and np.allclose(W, oracle, atol=1e-12)
          and abs(flipped[0, 0] + 2) < 1e-12 and not np.allclose(flipped, oracle))
    record_criterion("AC2 sign convention", ok,
                     f"w11={W[0, 0].real:g} (oracle 2), flipped sign gives {flipped[0, 0].real:g}")
    assert ok


def test_ac3_recurrence_round_trip(rng, record_criterion):
    worst = 0.0
    for _ in range(200):
        m = int(rng.integers(1, 9))
        roots = separated_points(rng, m, 0.2, 0.3, 2.0)
        p = poly_from_roots(roots)
        coeffs = tuple(-c for c in p.coeffs[:m])
        initial = tuple(complex(v) for v in rng.normal(size=m) + 1j * rng.normal(size=m))
        rec = Recurrence(coeffs, initial)
        cf = solve_closed_form(rec)
        xs = np.array(iterate(rec, 30))
        closed = np.array([evaluate_closed_form(cf, n) for n in range(31)])
        worst = max(worst, float(np.abs(closed - xs).max() / np.abs(xs).max()))

    fib = solve_closed_form(Recurrence((1, 1), (0, 1)))
    c_err = max(abs(fib.coefficients[0] - 5 ** -0.5), abs(fib.coefficients[1] + 5 ** -0.5))
    x10 = evaluate_closed_form(fib, 10)
    ok = worst < 1e-8 and c_err < 1e-10 and abs(x10 - 55) < 1e-9
    record_criterion("AC3 recurrence round trip", ok,
                     f"worst rel={worst:.2e}, Fibonacci |c-1/sqrt5|={c_err:.1e}, x10={x10.real:.12g}")
    assert ok


def test_ac4_phi_bound(rng, record_criterion):
    worst = max(_deviation_and_bounds(*chain)[0] for chain in _accepted_chains(rng, 200))
    b = convergence_bound(WITNESS)
    tight = max(abs(float(np.abs(Pn - 0.5).max()) - 0.5 * 0.5 ** n)
                for n, Pn in enumerate(matrix_powers(WITNESS.P, 40), 1))
    tight = max(tight, float(np.abs(b.phi - 0.5).max()))
    ok = worst <= 1e-9 and abs(b.rho - 0.5) < 1e-12 and tight < 1e-12
    record_criterion("AC4 phi bound", ok,
                     f"200 chains, worst excess={worst:.2e}; witness phi=rho=1/2, equality gap={tight:.1e}")
    assert ok


def test_ac5_psi_bound(rng, record_criterion):
    worst = max(_deviation_and_bounds(*chain)[1] for chain in _accepted_chains(rng, 200))
    psi = convergence_bound(WITNESS).psi
    ok = worst <= 1e-9 and abs(psi - 4) < 1e-12
    record_criterion("AC5 psi bound", ok, f"200 chains, worst excess={worst:.2e}; witness psi={psi:.15g}")
    assert ok


def test_ac6_diameter_soundness(rng, record_criterion):
    failures = 0
    for _ in range(100):
        G = random_accepted_digraph(rng, int(rng.integers(2, 8)))
        rep = diameter_bound(G)
        if not (rep.hypothesis_ok and rep.bound >= rep.exact):
            failures += 1
    two = diameter_bound(Digraph.from_edges([(0, 0), (0, 1), (1, 0)]))
    ok = failures == 0 and two.exact == 1 and two.bound is not None and 1 <= two.bound < math.inf
    record_criterion("AC6 diameter soundness", ok,
                     f"100 digraphs, {failures} violations; 2-vertex exact={two.exact}, bound={two.bound}")
    assert ok


def test_ac7_chung_specialization(rng, record_criterion):
    formula = chung_bound(10, 3, 2)
    accepted = tries = 0
    worst_phi = worst_pi = 0.0
    exceed = 0
    while accepted < 30:
        tries += 1
        m = int(rng.integers(5, 13))
        k = int(rng.integers(2, m - 1))
        if (m * k) % 2:
            continue
        G = random_regular_graph(rng, m, k)
        P = markov_matrix_lazy_undirected(G)
        b = convergence_bound(P)
        if not b.hypothesis_ok:
            continue
        accepted += 1
        ev = np.linalg.eigvalsh(G.adjacency().astype(float))
        tau = float(np.sort(np.abs(ev))[-2])
        pi = stationary(P).pi
        worst_phi = max(worst_phi, float((b.phi - (m - 1) / m).max()))
        worst_pi = max(worst_pi, float(np.abs(pi - 1 / m).max()))
        rep = diameter_bound(Digraph.from_adjacency(P.support()), P)
        if rep.bound > chung_bound(m, k, tau):
            exceed += 1
    ok = formula == 6 and worst_phi <= 1e-9 and worst_pi <= 1e-9 and exceed == 0
    record_criterion("AC7 Chung specialization", ok,
                     f"chung(10,3,2)={formula}; {accepted} regular chains ({tries} tries): "
                     f"max phi-(m-1)/m={worst_phi:.2e}, max|pi-1/m|={worst_pi:.1e}, exceedances={exceed}")
    assert ok


def test_ac8_structure(rng, record_criterion):
    checked = mismatches = 0

    def compare(adj):
        nonlocal checked, mismatches
        st = support_structure(adj)
        irr, period = brute_structure(adj)
        checked += 1
        if st.irreducible != irr or st.period != period:
            mismatches += 1

    for m in (1, 2, 3):
        for bits in itertools.product([False, True], repeat=m * m):
            compare(np.array(bits).reshape(m, m))
    for _ in range(2000):
        compare(rng.random((4, 4)) < rng.uniform(0.2, 0.7))
    ok = mismatches == 0 and checked >= 1000
    record_criterion("AC8 structure checks", ok,
                     f"{checked} digraphs (all m<=3, 2000 sampled m=4), {mismatches} mismatches")
    assert ok


def test_ac9_cayley_hamilton(rng, record_criterion):
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 7))
        A = rng.normal(size=(m, m))
        res = float(np.abs(poly_at_matrix(char_poly(A), A)).max())
        worst = max(worst, res / (1 + np.abs(A).max()) ** m)
    ok = worst < 1e-8
    record_criterion("AC9 Cayley-Hamilton", ok, f"100 matrices, worst scaled residual={worst:.2e}")
    assert ok
