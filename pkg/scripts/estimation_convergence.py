"""Trace distance of the EM and linear-inversion estimates against sample size.

    python scripts/estimation_convergence.py --seed 42
"""

import argparse

import numpy as np

from naimark.bridge import joint_distribution, sample_outcomes
from naimark.dilation import build_dilation, prepare
from naimark.estimation import EstimationProblem, estimate_state
from naimark.linalg import trace_distance
from naimark.povms import ket, projector, tetrahedral_povm


def main():
    ap = argparse.ArgumentParser(description="estimation error vs n")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 1000, 10_000, 100_000, 1_000_000])
    args = ap.parse_args()
    rho0 = projector(ket(np.cos(0.3), np.exp(0.4j) * np.sin(0.3)))
    p = prepare(tetrahedral_povm())
    jd = joint_distribution(rho0, build_dilation(p))
    print(f"{'n':>8} {'linear td':>10} {'em td':>10} {'em iters':>9}  1/sqrt(n)")
    for n in args.sizes:
        counts = sample_outcomes(jd, n, args.seed)
        lin = estimate_state(EstimationProblem(p, counts, "linear_inversion"))
        em = estimate_state(EstimationProblem(p, counts, "em"))
        print(f"{n:8d} {trace_distance(lin.rho, rho0):10.4f} {trace_distance(em.rho, rho0):10.4f} "
              f"{em.diagnostics['iterations']:9d}  {1 / np.sqrt(n):.4f}")


if __name__ == "__main__":
    main()
