"""Command-line interface.

Exit codes: 0 success / all verdicts PASS, 1 a verification verdict
failed, 2 usage or input-format error.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bridge import joint_distribution, unregularize_probabilities, sample_outcomes, verify_correlation_structure
from .config import DEFAULT_TOL
from .dilation import (
    build_dilation, extend_state, prepare, spans_hermitian, verify_dilation, verify_trace_preservation,
)
from .errors import NaimarkError
from .estimation import EstimationProblem, estimate_state, linear_inversion, project_to_states
from .fileio import (
    counts_doc, digest_files, dumps, read_counts_file, read_operator_file, read_state_file,
    report_doc, write_operator_file, write_state_file, write_text,
)
from .merging import halfsum_probabilities, merge_double_dilation, merge_halfsum
from .model import (
    build_expanded, build_model_basis, component, compress_G, verify_born_preservation, verify_expanded,
)
from .polynomial import Leaf, lift_functional
from .linalg import eigen_hermitian, trace_distance
from .povms import (
    SIGMA_Z, TETRAHEDRON, ket, projector, random_hermitian, random_state, tetrahedral_povm, validate_povm,
)
from .reports import Report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _tolerances(args):
    tol = DEFAULT_TOL
    if getattr(args, "tol", None) is not None:
        tol = tol.with_check_tol(args.tol)
    return tol


def _emit(report, args, inputs, tol):
    print(report.summary())
    if getattr(args, "out", None):
        doc = report_doc(report, digest_files(inputs), tol.as_dict(), __version__)
        write_text(args.out, dumps(doc))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_validate(args):
    tol = _tolerances(args)
    f = read_operator_file(args.file)
    report = Report("validate")
    report.info("dim", f.dim)
    report.info("count", len(f.operators))
    ops = f.operators
    for name, op in zip(f.names, ops):
        lo = float(eigen_hermitian(op).values[0])
        if args.general:
            report.info(f"psd_margin[{name}]", lo)
        else:
            report.bound(f"psd_violation[{name}]", max(-lo, 0.0), tol.povm)
            report.info(f"psd_margin[{name}]", lo)
    residual = float(np.linalg.norm(sum(ops) - np.eye(f.dim)))
    if args.general:
        report.info("identity_sum_residual", residual)
    else:
        report.bound("identity_sum_residual", residual, tol.povm)
    return _emit(report, args, [args.file], tol)


def _prepared(args, tol):
    f = read_operator_file(args.file)
    p = prepare(f.operators, args.margin, tol=tol)
    return f, p, build_dilation(p, tol)


def cmd_dilate(args):
    tol = _tolerances(args)
    _, p, d = _prepared(args, tol)
    report = verify_dilation(d, np.random.default_rng(args.seed), tol=tol)
    report.data["elements"] = list(p.elements)
    return _emit(report, args, [args.file], tol)


def _random_pairs(rng, k, count):
    for _ in range(count):
        yield rng.normal(size=k), rng.normal(size=k)


def cmd_verify(args):
    tol = _tolerances(args)
    rng = np.random.default_rng(args.seed)
    inputs = [args.file]
    _, p, d = _prepared(args, tol)
    m = p.m
    if args.observables:
        As = read_operator_file(args.observables).operators
        inputs.append(args.observables)
    else:
        As = [random_hermitian(rng, m) for _ in range(3)]
    if args.state:
        rho = read_state_file(args.state)
        inputs.append(args.state)
    else:
        rho = random_state(rng, m)

    report = Report("verify")
    report.extend(verify_dilation(d, rng, tol=tol), "dilation.")
    report.extend(verify_trace_preservation(As, p, d, tol), "trace.")

    mb = build_model_basis(d)
    comp = max(float(np.linalg.norm(component(E, mb, m) - b)) for E, b in zip(d.projectors, p.elements))
    report.bound("component.E_i", comp, tol.component)
    report.bound("component.identity", np.linalg.norm(component(np.eye(d.n), mb, m) - np.eye(m)), tol.component)
    report.bound("component.state", np.linalg.norm(component(extend_state(rho, d), mb, m) - rho), tol.component)

    e = build_expanded(p, tol)
    report.extend(verify_expanded(e, tol), "expanded.")
    worst = sym = 0.0
    for a, b in _random_pairs(rng, p.k, 20):
        U, V = e.lift(a), e.lift(b)
        cu, cv = compress_G(U, e), compress_G(V, e)
        worst = max(worst, np.linalg.norm(compress_G(U @ V, e) - cu @ cv))
        sym = max(sym, np.linalg.norm(cu @ cv - cv @ cu))
    report.bound("product.compress_G", worst, tol.product)
    report.bound("product.commute", sym, tol.product)

    if spans_hermitian(p, tol):
        report.extend(verify_born_preservation(rho, As[0], d, mb, tol), "born.")
        report.extend(verify_correlation_structure(As[0], As[-1], rho, p, tol=tol), "correlation.")
        X = Leaf("X")
        report.extend(lift_functional(X @ X, {"X": As[0]}, p, e, tol=tol), "lift.")
    else:
        report.info("born", "skipped: family does not span the Hermitian operators")
    return _emit(report, args, inputs, tol)


def _sample(args, tol):
    _, p, d = _prepared(args, tol)
    rho = read_state_file(args.state)
    jd = joint_distribution(rho, d, tol)
    counts = sample_outcomes(jd, args.n, args.seed)
    return p, jd, counts


def cmd_sample(args):
    tol = _tolerances(args)
    p, jd, counts = _sample(args, tol)
    q = unregularize_probabilities(jd, p)
    print(f"outcomes k={p.k}  n={args.n}  seed={args.seed}  shift={p.shift!r}")
    for i, (c, pi, qi) in enumerate(zip(counts, jd.probs, q)):
        print(f"  {i}: count={c}  p={pi!r}  born_original={qi!r}")
    doc = counts_doc(counts, args.n, args.seed, {"povm": str(args.file), "state": str(args.state)})
    if args.out:
        write_text(args.out, dumps(doc))
    return EXIT_OK


def cmd_estimate(args):
    tol = _tolerances(args)
    _, p, _ = _prepared(args, tol)
    counts, _ = read_counts_file(args.counts)
    method = {"linear": "linear_inversion", "em": "em"}[args.method]
    ep = EstimationProblem(p, counts, method, args.max_iters, args.tol if args.tol is not None else 1e-10)
    result = estimate_state(ep)
    rho = result.rho
    print(f"method={method}  n={result.diagnostics['n']}")
    for r in rho:
        print("  " + "  ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in r))
    for key in ("iterations", "converged", "monotone", "diluted_steps", "spanning", "raw_min_eigenvalue"):
        if key in result.diagnostics:
            print(f"  {key}: {result.diagnostics[key]}")
    if args.out:
        write_state_file(args.out, rho, f"{method} estimate from {args.counts}")
    return EXIT_OK


def cmd_merge(args):
    tol = _tolerances(args)
    P = read_operator_file(args.p).operators
    Q = read_operator_file(args.q).operators
    if args.mode == "halfsum":
        merged = merge_halfsum(P, Q, tol)
        validate_povm(merged, 2 * tol.povm)
        report = Report("merge_halfsum")
        report.info("elements", len(merged))
        report.bound("identity_sum_residual", np.linalg.norm(sum(merged) - np.eye(merged[0].shape[0])), 2 * tol.povm)
        m = merged[0].shape[0]
        stats = halfsum_probabilities(merged, np.eye(m) / m)
        report.data.update(stats)
        print(report.summary())
        if args.out:
            names = [f"P{i}/2" for i in range(len(P))] + [f"Q{j}/2" for j in range(len(Q))]
            write_operator_file(args.out, merged, names, "half-sum merge")
        return EXIT_OK if report.passed else EXIT_FAIL
    result = merge_double_dilation(P, Q, margin=args.margin, tol=tol, seed=args.seed)
    return _emit(result.report, args, [args.p, args.q], tol)


def run_demo(out_dir=None, seed=42, n=100_000, margin=DEFAULT_TOL.margin, tol=DEFAULT_TOL, stream=sys.stdout):
    """Tetrahedral POVM → dilate → verify → sample → estimate."""
    povm = tetrahedral_povm()
    rho0 = projector(ket(1, 0))
    p = prepare(povm, margin, tol=tol)
    d = build_dilation(p, tol)
    rng = np.random.default_rng(seed)
    report = Report("demo")
    report.extend(verify_dilation(d, rng, tol=tol), "dilation.")
    report.extend(verify_trace_preservation([rho0] + [random_hermitian(rng, 2) for _ in range(2)], p, d, tol), "trace.")
    mb = build_model_basis(d)
    report.extend(verify_born_preservation(rho0, SIGMA_Z, d, mb, tol), "born.")
    jd = joint_distribution(rho0, d, tol)
    q = unregularize_probabilities(jd, p)
    closed = 0.25 * (1 + TETRAHEDRON[:, 2])
    report.bound("born.tetrahedral_closed_form", np.max(np.abs(q - closed)), tol.probability)
    counts = sample_outcomes(jd, n, seed)
    report.info("sample.counts", [int(c) for c in counts])
    exact = project_to_states(linear_inversion(p.elements, jd.probs)[0])
    report.bound("estimate.linear_exact", np.linalg.norm(exact - rho0), tol.component)
    lin = estimate_state(EstimationProblem(p, counts, "linear_inversion"))
    em = estimate_state(EstimationProblem(p, counts, "em"))
    report.info("estimate.linear_td", trace_distance(lin.rho, rho0))
    report.bound("estimate.em_td", trace_distance(em.rho, rho0), 0.05)
    report.bound("estimate.em_monotone", 0.0 if em.diagnostics["monotone"] else 1.0, 0.0)
    print(report.summary(), file=stream)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_operator_file(out / "tetrahedral.op", povm, [f"B{i}" for i in range(4)], "qubit tetrahedral POVM")
        write_state_file(out / "state.op", rho0, "|0><0|")
        write_text(out / "counts.json", dumps(counts_doc(counts, n, seed)))
        write_state_file(out / "estimate_em.op", em.rho, "EM estimate")
        doc = report_doc(report, digest_files([out / "tetrahedral.op", out / "state.op"]), tol.as_dict(), __version__)
        write_text(out / "demo.report.json", dumps(doc))
    return report


def cmd_demo(args):
    report = run_demo(args.out, args.seed, args.n, args.margin, _tolerances(args))
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser():
    parser = _Parser(prog="naimark", description="Naimark / Sz.-Nagy dilations of observable families.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, margin=True, seed=True, out=True):
        sp.add_argument("--tol", type=float, default=None, help="override every verification threshold")
        if margin:
            sp.add_argument("--margin", type=float, default=DEFAULT_TOL.margin, help="regularization margin")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        if out:
            sp.add_argument("--out", type=str, default=None, help="write a machine-readable file here")

    sp = sub.add_parser("validate", help="check an operator file as a POVM")
    sp.add_argument("file")
    sp.add_argument("--general", action="store_true", help="report PSD/identity margins without verdicts")
    common(sp, margin=False, seed=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("dilate", help="build the dilation and check its invariants")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_dilate)

    sp = sub.add_parser("verify", help="run every identity check on a family")
    sp.add_argument("file")
    sp.add_argument("--observables", help="operator file with the A_j set (default: seeded random)")
    sp.add_argument("--state", help="state file (default: seeded random state)")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sample", help="sample outcome counts of the commuting model")
    sp.add_argument("file")
    sp.add_argument("--state", required=True)
    sp.add_argument("-n", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("merge", help="merge two POVMs")
    sp.add_argument("p")
    sp.add_argument("q")
    sp.add_argument("--mode", choices=("halfsum", "double"), default="double")
    common(sp)
    sp.set_defaults(func=cmd_merge)

    sp = sub.add_parser("estimate", help="estimate a state from counts")
    sp.add_argument("file")
    sp.add_argument("--counts", required=True)
    sp.add_argument("--method", choices=("linear", "em"), default="em")
    sp.add_argument("--max-iters", type=int, default=5000)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("demo", help="run the tetrahedral-POVM pipeline end to end")
    sp.add_argument("-n", type=int, default=100_000)
    common(sp)
    sp.set_defaults(func=cmd_demo, seed=42)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        parser.error("-n must be at least 1")
    try:
        return args.func(args)
    except (NaimarkError, ValueError, OSError) as exc:
        print(f"naimark {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
