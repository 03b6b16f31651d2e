"""Command-line front end: frame ingestion, seeded generation, analysis
orchestration, and canonical JSON report emission.

Exit codes: 0 success, 1 usage or parse error, 2 violated mathematical
precondition (NotAFrame and friends), 3 verification failure (inequality
violated, bound or reconstruction check failed).  Reports are byte-identical
across runs given identical inputs, flags, and seed.
"""

import argparse
import hashlib
import math
import os
import sys

from . import __version__
from .exceptions import (
    BaseNotIndependent,
    DegenerateSpan,
    GFrameError,
    InequalityNotVerified,
    ParseError,
)
from .families import KINDS, generate
from .frames import (
    canonical_dual,
    frame_bounds,
    is_tight,
    reconstruction_residual,
    verify_dual,
)
from .perturb import (
    HAT_HAT,
    HAT_ORIGINAL,
    PerturbationParams,
    check_perturbation_inequality,
    independence_transfer,
    verify_perturbed_frame,
)
from .represent import (
    check_representation_bounds,
    independence_analysis,
    solve_representation,
    tightness_contradiction_certificate,
    CYCLIC_CAVEAT,
    LINEAR_CAVEAT,
)
from .serialize import (
    FORMAT_VERSION,
    dumps_canonical,
    frame_to_document,
    load_frame,
    load_vector,
    vector_to_document,
    write_atomic,
)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GFRAMEMOD_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise ParseError(f"GFRAMEMOD_SEED must be an integer, got {env!r}") from exc


def _digest(named_paths) -> str:
    sha = hashlib.sha256()
    for _, path in named_paths:
        try:
            with open(path, "rb") as handle:
                sha.update(handle.read())
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc}") from exc
    return sha.hexdigest()


def _emit(report: dict, output) -> None:
    text = dumps_canonical(report)
    if output:
        write_atomic(output, text)
    else:
        sys.stdout.write(text)


def _report(command: str, seed: int, digest: str, results: dict, caveats) -> dict:
    return {
        "command": command,
        "version": __version__,
        "seed": seed,
        "inputs_digest": digest,
        "results": results,
        "caveats": list(caveats),
    }


def _cmd_analyze(args) -> int:
    seed = _resolve_seed(args)
    frame = load_frame(args.frame)
    tight_tol = args.tol if args.tol is not None else 1e-9
    dual_tol = args.tol if args.tol is not None else 1e-8
    lower, upper = frame_bounds(frame)
    dual = canonical_dual(frame)
    residual = reconstruction_residual(frame, dual)
    verified = verify_dual(frame, dual, samples=100, tol=dual_tol, seed=seed)
    results = {
        "bounds": {"lower": lower, "upper": upper},
        "condition_number": upper / lower,
        "tight": is_tight(frame, tight_tol),
        "tightness_gap": (upper - lower) / upper,
        "dual": {"reconstruction_residual": residual, "verified": verified},
    }
    report = _report("analyze", seed, _digest([("frame", args.frame)]), results, [])
    _emit(report, args.output)
    return 0 if verified else 3


def _cmd_represent(args) -> int:
    seed = _resolve_seed(args)
    frame = load_frame(args.frame)
    tol = args.tol if args.tol is not None else 1e-8
    rep = solve_representation(frame, args.convention, tol)
    caveats = [CYCLIC_CAVEAT if rep.convention == "cyclic" else LINEAR_CAVEAT]
    results = {
        "convention": rep.convention,
        "residual": rep.residual,
        "residual_frobenius": rep.residual_frobenius,
        "norm_T": rep.norm_T,
        "scale": rep.scale,
        "representable": rep.is_representable(tol),
        "span_rank": rep.span_projection.rank,
    }
    failed = False
    if args.check_theorem21:
        check = check_representation_bounds(frame, rep, samples=100, tol=tol, seed=seed)
        results["bound_checks"] = {
            "norm_T": check.norm_T,
            "lower": {"bound": check.bound_lower, "ok": check.lower_ok},
            "upper": {"bound": check.bound_upper, "ok": check.upper_ok},
        }
        results["kernel_check"] = {
            "samples": check.kernel_samples,
            "defect": check.kernel_defect if math.isfinite(check.kernel_defect) else None,
            "ok": check.kernel_ok,
        }
        for caveat in check.caveats:
            if caveat not in caveats:
                caveats.append(caveat)
        failed = failed or not (check.lower_ok and check.upper_ok and check.kernel_ok)
    if args.tight_certificate:
        if not args.vector:
            raise ParseError("--tight-certificate requires --vector")
        f = load_vector(args.vector)
        cert = tightness_contradiction_certificate(frame, rep, f, tol)
        results["certificate"] = {
            "norm_T": cert.norm_T,
            "norm_T_inverse": cert.norm_T_inverse,
            "isometry_ok": cert.isometry_ok,
            "norm_bounds_ok": cert.norm_bounds_ok,
            "term_norms": list(cert.term_norms),
            "constant_norms_ok": cert.constant_norms_ok,
            "degenerate": cert.degenerate,
            "window": cert.window,
            "ratio": cert.ratio,
            "upper_bound": cert.upper_bound,
        }
        if not cert.degenerate:
            failed = failed or not (cert.isometry_ok and cert.constant_norms_ok
                                    and cert.norm_bounds_ok)
    report = _report("represent", seed, _digest([("frame", args.frame)]), results, caveats)
    _emit(report, args.output)
    return 3 if failed else 0


def _witness_json(witness) -> dict:
    return {
        "coefficients": [[float(z.real), float(z.imag)] for z in witness.coefficients],
        "vector": vector_to_document(witness.vector),
        "lhs": witness.lhs,
        "rhs": witness.rhs,
        "margin": witness.margin,
    }


def _cmd_perturb(args) -> int:
    seed = _resolve_seed(args)
    frame = load_frame(args.frame)
    perturbed = load_frame(args.perturbed)
    try:
        params = PerturbationParams(args.eta, args.beta)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    seq_samples = args.samples
    vec_samples = max(8, seq_samples // 4)
    slack = args.tol if args.tol is not None else 1e-10
    verdict = check_perturbation_inequality(
        frame, perturbed, params, seq_samples=seq_samples,
        vec_samples=vec_samples, seed=seed, slack=slack,
    )
    results = {
        "params": {"eta": params.eta, "beta": params.beta},
        "interpretation": args.interpretation,
        "samples": {"sequences": verdict.n_sequences, "vectors": verdict.n_vectors},
        "inequality_holds": verdict.inequality_holds,
        "witness": _witness_json(verdict.witness),
        "derived_bounds": None,
        "empirical_bounds": None,
        "perturbed_frame_check": None,
        "independence_transfer": None,
    }
    caveats = list(verdict.caveats)
    digest = _digest([("frame", args.frame), ("perturbed", args.perturbed)])
    if not verdict.inequality_holds:
        report = _report("perturb", seed, digest, results, caveats)
        _emit(report, args.output)
        return 3
    checked = verify_perturbed_frame(
        frame, perturbed, params, interpretation=args.interpretation,
        vec_samples=vec_samples, seed=seed, inequality=verdict,
    )
    results["derived_bounds"] = {"lower": checked.derived_lower, "upper": checked.derived_upper}
    results["empirical_bounds"] = {"lower": checked.empirical_lower, "upper": checked.empirical_upper}
    results["perturbed_frame_check"] = {
        "bounds_contained": checked.bounds_contained,
        "sample_failures": checked.sample_failures,
    }
    for caveat in checked.caveats:
        if caveat not in caveats:
            caveats.append(caveat)
    transfer_failed = False
    try:
        transferred = independence_transfer(frame, perturbed, params, seed=seed, inequality=verdict)
        results["independence_transfer"] = {"checked": True, "independent": transferred}
    except BaseNotIndependent:
        results["independence_transfer"] = {
            "checked": False,
            "reason": "base family is linearly dependent",
        }
    except InequalityNotVerified as exc:
        results["independence_transfer"] = {"checked": True, "inconsistent": str(exc)}
        transfer_failed = True
    report = _report("perturb", seed, digest, results, caveats)
    _emit(report, args.output)
    return 0 if checked.bounds_contained and not transfer_failed else 3


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args)
    frame = generate(args.kind, args.n, args.d, args.m, seed)
    metadata = {
        "kind": args.kind,
        "seed": str(seed),
        "format": FORMAT_VERSION,
        "generator": f"gframemod {__version__}",
    }
    write_atomic(args.out_path, dumps_canonical(frame_to_document(frame, metadata)))
    return 0


def _cmd_independence(args) -> int:
    seed = _resolve_seed(args)
    frame = load_frame(args.frame)
    tol = args.tol if args.tol is not None else 1e-10
    try:
        rep = solve_representation(frame) if len(frame) >= 2 else None
    except DegenerateSpan:
        rep = None
    report_data = independence_analysis(frame, tol, rep=rep)
    results = {
        "verdict": report_data.verdict,
        "invariant_span_dim": report_data.invariant_span_dim,
        "coefficients": None,
        "null_combination_norm": report_data.null_combination_norm,
        "span_invariance": None,
    }
    if report_data.coefficients is not None:
        results["coefficients"] = [[float(z.real), float(z.imag)]
                                   for z in report_data.coefficients]
    failed = False
    if report_data.span_invariance is not None:
        inv = report_data.span_invariance
        results["span_invariance"] = {
            "alpha": inv.alpha,
            "b": inv.b,
            "max_defect": inv.max_defect,
            "max_defect_inverse": inv.max_defect_inverse,
            "ok": inv.ok,
        }
        failed = not inv.ok
    report = _report("independence", seed, _digest([("frame", args.frame)]), results, [])
    _emit(report, args.output)
    return 3 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="override the command's default verification tolerance")
    common.add_argument("--output", default=None,
                        help="write the JSON report to this path instead of stdout")
    common.add_argument("--seed", type=int, default=None,
                        help="sampling seed (default: $GFRAMEMOD_SEED, then 0)")

    parser = argparse.ArgumentParser(
        prog="gframemod",
        description="finite-dimensional g-fusion frame analysis over matrix algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="frame bounds, tightness, canonical dual reconstruction")
    p.add_argument("frame", help="frame document (JSON)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("represent", parents=[common],
                       help="solve the shift representation and optional checks")
    p.add_argument("frame")
    p.add_argument("--convention", choices=("linear", "cyclic"), default=None,
                   help="index convention override (default: the document's)")
    p.add_argument("--check-theorem21", action="store_true",
                   help="check the representing operator's norm bounds and "
                        "the shift invariance of the synthesis kernel")
    p.add_argument("--tight-certificate", action="store_true",
                   help="emit the tight-frame non-representability certificate")
    p.add_argument("--vector", default=None,
                   help="vector document for the certificate (JSON)")
    p.set_defaults(func=_cmd_represent)

    p = sub.add_parser("perturb", parents=[common],
                       help="two-family perturbation inequality and derived bounds")
    p.add_argument("frame")
    p.add_argument("perturbed")
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--interpretation", choices=(HAT_HAT, HAT_ORIGINAL), default=HAT_HAT)
    p.add_argument("--samples", type=int, default=256,
                   help="coefficient-sequence samples; vector samples are "
                        "max(8, samples // 4)")
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("gen", help="write a deterministic frame document")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--seed", type=int, default=None,
                   help="generation seed (default: $GFRAMEMOD_SEED, then 0)")
    p.add_argument("out_path")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("independence", parents=[common],
                       help="linear independence of the operator family")
    p.add_argument("frame")
    p.set_defaults(func=_cmd_independence)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except GFrameError as exc:
        print(f"gframemod: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
