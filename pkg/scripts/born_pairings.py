"""Compare the Born-value expressions around a resolved observable.

Only tr[X (U~)_H] = tr[X U] is certified by the package. This script
prints how far the two tensor-product pairings tr[(X (x) I) U~] and
tr[(X (x) Pbar) U~] land from it on random instances.
"""

import argparse

import numpy as np

from naimark.dilation import build_dilation, prepare
from naimark.model import build_model_basis, verify_born_preservation
from naimark.povms import random_hermitian, random_povm, random_state


def _complex(v):
    return complex(*v) if isinstance(v, list) else complex(v)


def main():
    ap = argparse.ArgumentParser(description="Born pairing comparison")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    m = args.m
    print(f"{'k':>2} {'|UH - U|':>10} {'|XI - U|':>10} {'|XPbar - U|':>12}")
    for _ in range(args.trials):
        k = int(rng.integers(m * m, m * m + 3))
        p = prepare(random_povm(rng, m, k))
        d = build_dilation(p)
        r = verify_born_preservation(random_state(rng, m), random_hermitian(rng, m), d, build_model_basis(d))
        base = _complex(r["tr_X_U0"])
        devs = [abs(_complex(r[name]) - base) for name in ("tr_X_UH", "tr_XI_U", "tr_XPbar_U")]
        print(f"{k:2d} {devs[0]:10.2e} {devs[1]:10.2e} {devs[2]:12.2e}")


if __name__ == "__main__":
    main()
