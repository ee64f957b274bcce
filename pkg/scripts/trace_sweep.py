"""Trace preservation and isometry over a grid of (m, k).

    python scripts/trace_sweep.py --instances 50 --seed 1
"""

import argparse
import time

import numpy as np

from naimark.dilation import build_dilation, embed_vector, prepare, verify_trace_preservation
from naimark.linalg import w_inner
from naimark.povms import random_family, random_hermitian


def sweep(instances, seed, dims=(2, 3, 4), ks=range(2, 7)):
    rng = np.random.default_rng(seed)
    rows = []
    for m in dims:
        for k in ks:
            start = time.perf_counter()
            trace = iso = shift = 0.0
            for _ in range(instances):
                p = prepare(random_family(rng, m, k, scale=rng.uniform(0.2, 3.0)))
                d = build_dilation(p)
                As = [random_hermitian(rng, m) for _ in range(3)]
                r = verify_trace_preservation(As, p, d)
                trace = max(trace, r["max_dev_regularized"], r["max_dev_original"])
                phi = rng.normal(size=m) + 1j * rng.normal(size=m)
                pt = embed_vector(phi, d)
                iso = max(iso, abs(w_inner(pt, pt, d.metric) - np.vdot(phi, phi)))
                shift = max(shift, p.shift)
            rows.append((m, k, trace, iso, shift, time.perf_counter() - start))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    print(f"{'m':>2} {'k':>2} {'trace dev':>10} {'isometry':>10} {'max a':>8} {'secs':>6}")
    for m, k, trace, iso, shift, secs in sweep(args.instances, args.seed):
        print(f"{m:2d} {k:2d} {trace:10.2e} {iso:10.2e} {shift:8.3f} {secs:6.2f}")


if __name__ == "__main__":
    main()
