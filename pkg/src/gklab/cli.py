"""Command line entry point: ``gklab <subcommand> ...``.

Data goes to stdout, diagnostics to stderr.  Exit status is 0 on success, 1
when a computation fails (row budget, non-confluent presentation where exact
ranks were demanded, unsupported presentation) and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .analysis import DEFAULT_MAX_DEGREE, DEFAULT_WINDOW, InsufficientData, estimate_gkdim
from .calculus import EmptyBound, MalformedExpression, bergman_normalize, eval_construction, parse_expr
from .coeff import DomainMismatch, format_scalar
from .growth import (
    BudgetExceeded,
    MonomialModule,
    NotAFrame,
    NotQuasiCommutative,
    growth_sequence,
    make_frame,
    module_growth_sequence,
    row_cap_from_env,
    tdeg_pool_estimate,
)
from .presentation import (
    PresentationError,
    confluence_check,
    format_poly,
    format_word,
    load_presentation,
    validate_pbw_shape,
)
from .zoo import RunConfig, load_zoo, parse_list, parse_monomials, verify_consistency

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class ComputeError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(path: str):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{path}: file not found")
    try:
        return load_presentation(p)
    except PresentationError as e:
        raise UsageError(f"{path}:{e.line or 0}:{e.col or 0}: {type(e).__name__}: {e.message}") from None


def _arg_polys(text: str, pres, option: str):
    try:
        return parse_list(text, pres)
    except PresentationError as e:
        raise UsageError(f"{option}: col {e.col or 0}: {type(e).__name__}: {e.message}") from None


def _frame(text: str, pres, option: str = "--frame"):
    try:
        return make_frame(pres, _arg_polys(text, pres, option))
    except NotAFrame as e:
        raise UsageError(f"{option}: {e}") from None


def _require_exact(seq, args):
    if getattr(args, "require_exact", False) and not seq.exact:
        raise ComputeError("presentation is not confluent; ranks are upper bounds only")


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_growth(args) -> int:
    pres = _load(args.file)
    frame = _frame(args.frame, pres)
    seq = growth_sequence(pres, frame, args.n, row_cap_from_env())
    _require_exact(seq, args)
    if not seq.exact:
        print("warning: presentation not certified confluent; ranks are upper bounds", file=sys.stderr)
    if args.format == "csv":
        sys.stdout.write(seq.to_csv())
    else:
        _emit(seq.to_record())
    return EXIT_OK


def cmd_estimate(args) -> int:
    pres = _load(args.file)
    frame = _frame(args.frame, pres)
    seq = growth_sequence(pres, frame, args.n, row_cap_from_env())
    _require_exact(seq, args)
    est = estimate_gkdim(seq, args.window, args.max_degree)
    record = {"ranks": list(seq.values), "sequence_exact": seq.exact, "estimate": est.to_json()}
    _emit(record)
    return EXIT_OK


def cmd_confluence(args) -> int:
    pres = _load(args.file)
    deg = args.max_degree if args.max_degree is not None else max(2 * pres.max_lhs_length, 2)
    if pres.rules and deg < pres.max_lhs_length:
        raise UsageError(f"--max-degree must be at least {pres.max_lhs_length}")
    amb = confluence_check(pres, deg)
    _emit({
        "max_overlap_degree": deg,
        "ambiguities": [
            {
                "word": format_word(a.overlap_word, pres),
                "kind": a.kind,
                "rules": list(a.rules),
                "reduction_a": format_poly(a.reduction_a, pres),
                "reduction_b": format_poly(a.reduction_b, pres),
                "resolved": a.resolved,
            }
            for a in amb
        ],
        "unresolved": sum(1 for a in amb if not a.resolved),
        "confluent": all(a.resolved for a in amb),
    })
    return EXIT_OK


def cmd_validate_pbw(args) -> int:
    pres = _load(args.file)
    r = validate_pbw_shape(pres)
    names = pres.generators
    param = pres.domain.parameter_name or "q"
    _emit({
        "pbw_shape": r.pbw_shape,
        "quasi_commutative": r.quasi_commutative,
        "bijective_constants": r.bijective_constants,
        "constants": {f"{names[j]} {names[i]}": format_scalar(c, param) for (i, j), c in r.constants.items()},
        "problems": list(r.problems),
        "declared_flags_consistent": r.claims_consistent,
    })
    return EXIT_OK


def cmd_module_growth(args) -> int:
    pres = _load(args.file)
    frame = _frame(args.frame, pres)
    try:
        module = MonomialModule(
            parse_monomials(args.annihilators, pres), parse_monomials(args.gens, pres)
        )
    except PresentationError as e:
        raise UsageError(f"module monomials: {e.message}") from None
    seq = module_growth_sequence(pres, module, frame, args.n)
    if args.format == "csv":
        sys.stdout.write(seq.to_csv())
    else:
        _emit(seq.to_record())
    return EXIT_OK


def cmd_tdeg(args) -> int:
    pres = _load(args.file)
    frames = [_frame(part, pres, "--frames") for part in args.frames.split(";") if part.strip()]
    cands = _arg_polys(args.candidates, pres, "--candidates")
    if not frames or not cands:
        raise UsageError("--frames and --candidates must be nonempty")
    try:
        rep = tdeg_pool_estimate(pres, frames, cands, args.n, args.window, args.max_degree, row_cap_from_env())
    except ValueError as e:
        if isinstance(e, InsufficientData):
            raise
        raise UsageError(str(e)) from None
    _emit({
        "label": rep.label,
        "summary_dim": str(rep.summary),
        "per_frame_min": [str(e.dim) for e in rep.per_frame],
        "entries": [
            {
                "frame": e.frame_index,
                "candidate": format_poly(e.candidate, pres),
                "ranks": list(e.sequence.values),
                "estimate": e.estimate.to_json(),
            }
            for e in rep.entries
        ],
    })
    return EXIT_OK


def cmd_calculus(args) -> int:
    try:
        expr = parse_expr(args.expr)
    except MalformedExpression as e:
        raise UsageError(f"calculus: {e}") from None
    try:
        bound, trace = eval_construction(expr)
    except MalformedExpression as e:
        raise UsageError(f"calculus: {e}") from None
    out = bound.to_json()
    if args.normalize:
        norm = bergman_normalize(bound)
        out["normalized"] = norm.to_json()
    out["trace"] = [t.to_json() for t in trace]
    _emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        entries = load_zoo(args.zoo)
    except (FileNotFoundError, ValueError) as e:
        raise UsageError(str(e)) from None
    try:
        config = RunConfig(args.n, args.window, args.max_degree, None, "json" if args.format == "json" else "csv", args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    reports = [verify_consistency(e, config) for e in entries]
    if args.format == "json":
        _emit([r.to_json() for r in reports])
    else:
        for r in reports:
            print(r.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_COMPUTE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gklab", description="Growth and GK dimension of finitely presented algebras.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def growth_opts(sp, frame=True):
        sp.add_argument("file")
        if frame:
            sp.add_argument("--frame", required=True, help="comma separated frame elements, e.g. '1,x,y'")
        sp.add_argument("-n", type=int, required=True, help="largest power to compute")

    def classify_opts(sp):
        sp.add_argument("--window", type=int, default=DEFAULT_WINDOW)
        sp.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)

    sp = sub.add_parser("growth", help="ranks of frame powers")
    growth_opts(sp)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--require-exact", action="store_true")
    sp.set_defaults(func=cmd_growth)

    sp = sub.add_parser("estimate", help="classify growth and estimate GKdim")
    growth_opts(sp)
    classify_opts(sp)
    sp.add_argument("--require-exact", action="store_true")
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("confluence", help="overlap ambiguities of the rules")
    sp.add_argument("file")
    sp.add_argument("--max-degree", type=int, default=None)
    sp.set_defaults(func=cmd_confluence)

    sp = sub.add_parser("validate-pbw", help="check the skew PBW shape of the rules")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate_pbw)

    sp = sub.add_parser("module-growth", help="growth of a monomial cyclic module")
    growth_opts(sp)
    sp.add_argument("--annihilators", required=True)
    sp.add_argument("--gens", default="1")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_module_growth)

    sp = sub.add_parser("tdeg", help="pool-restricted transcendence degree estimate")
    growth_opts(sp, frame=False)
    sp.add_argument("--frames", required=True, help="frames separated by ';', elements by ','")
    sp.add_argument("--candidates", required=True)
    classify_opts(sp)
    sp.set_defaults(func=cmd_tdeg)

    sp = sub.add_parser("calculus", help="evaluate a construction expression")
    sp.add_argument("expr")
    sp.add_argument("--normalize", action="store_true", help="also intersect with {0} u {1} u [2, inf]")
    sp.set_defaults(func=cmd_calculus)

    sp = sub.add_parser("verify", help="check the example zoo for consistency")
    sp.add_argument("--zoo", default=None)
    sp.add_argument("-n", type=int, default=10)
    classify_opts(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_verify)
    return p


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "n", 0) is not None and getattr(args, "n", 0) < 0:
            raise UsageError("-n must be nonnegative")
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, NotQuasiCommutative, InsufficientData, ComputeError, EmptyBound) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_COMPUTE
    except (PresentationError, DomainMismatch, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
