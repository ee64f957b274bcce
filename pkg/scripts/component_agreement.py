"""Measure how far the two compressions of a Naimark-space element differ.

component() takes the base corner in a W-orthonormal basis; compress_G()
restricts G U G to range(G). Both are t x t on the expanded dilation. The
product property holds for compress_G only; this prints the gap.
"""

import argparse

import numpy as np

from naimark.dilation import prepare
from naimark.model import build_expanded, build_model_basis, component, compress_G
from naimark.povms import random_family


def main():
    ap = argparse.ArgumentParser(description="component vs compress_G")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'m':>2} {'k':>2} {'|comp - GUG|':>13} {'comp product gap':>17} {'GUG product gap':>16}")
    for m, k in [(2, 2), (2, 3), (3, 3), (2, 5)]:
        e = build_expanded(prepare(random_family(rng, m, k)))
        mb = build_model_basis(e.dilation)
        gap = cgap = ggap = 0.0
        for _ in range(args.trials):
            U, V = e.lift(rng.normal(size=k)), e.lift(rng.normal(size=k))
            cu, cv = component(U, mb, e.t), component(V, mb, e.t)
            gu, gv = compress_G(U, e), compress_G(V, e)
            gap = max(gap, np.linalg.norm(cu - gu))
            cgap = max(cgap, np.linalg.norm(component(U @ V, mb, e.t) - cu @ cv))
            ggap = max(ggap, np.linalg.norm(compress_G(U @ V, e) - gu @ gv))
        print(f"{m:2d} {k:2d} {gap:13.3e} {cgap:17.3e} {ggap:16.3e}")


if __name__ == "__main__":
    main()
