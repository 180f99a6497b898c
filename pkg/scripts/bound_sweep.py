"""Sweep random chains and compare |p_ij^(n) - pi_j| with the phi and psi bounds.

    python3 scripts/bound_sweep.py --chains 300 --max-states 8 --horizon 40
"""
import argparse
import collections
import dataclasses
import json

import numpy as np

from recurspec.markov import convergence_bound, random_transition_matrix, stationary
from recurspec.spectral import matrix_powers


@dataclasses.dataclass
class SweepConfig:
    chains: int = 300
    max_states: int = 8
    horizon: int = 40
    density: float = 0.7
    seed: int = 0


def run(cfg: SweepConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    rejected = collections.Counter()
    worst_phi = worst_psi = -np.inf
    tightest = np.inf
    accepted = 0
    while accepted < cfg.chains:
        tm = random_transition_matrix(rng, int(rng.integers(2, cfg.max_states + 1)), cfg.density)
        b = convergence_bound(tm)
        if not b.hypothesis_ok:
            rejected[b.failure_reason.split(":")[0]] += 1
            continue
        accepted += 1
        pi = stationary(tm).pi
        for n, Pn in enumerate(matrix_powers(tm.P, cfg.horizon), 1):
            dev = np.abs(Pn - pi)
            phi_n = b.phi * b.rho ** n
            worst_phi = max(worst_phi, float((dev - phi_n).max()))
            worst_psi = max(worst_psi, float((dev - b.psi * b.rho ** (n - 1)).max()))
            tightest = min(tightest, float((phi_n - dev).min()))
    return {
        "config": dataclasses.asdict(cfg),
        "accepted": accepted,
        "rejected": dict(rejected),
        "phi_excess_max": worst_phi,
        "psi_excess_max": worst_psi,
        "phi_slack_min": tightest,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in dataclasses.fields(SweepConfig):
        ap.add_argument("--" + f.name.replace("_", "-"), type=type(f.default), default=f.default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
