"""Command line entry point: ``mtto <subcommand> ...``.

Exit codes: 0 success (for checks: criterion and oracle agree), 1 I/O,
schema or configuration error, 2 hypothesis violation.
"""

from __future__ import annotations

import argparse
import sys

from . import fast
from .analysis import (
    HypothesisError,
    NotToeplitzError,
    coefficient_criteria,
    difference_condition,
    extract_symbol,
    product_condition,
)
from .linalg import DEFAULT_TOL, Conjugation
from .model import build_mtto
from .serialize import (
    SCHEMA,
    SchemaError,
    conjugation_from_json,
    conjugation_to_json,
    decomposition_to_json,
    dump_json,
    load_json,
    operator_from_json,
    operator_to_json,
    symbol_from_json,
    symbol_hash,
    symbol_to_json,
)
from .suite import SuiteConfig, run_suite
from .symbols import decompose


class UsageError(Exception):
    pass


def _load(loader, path, flag):
    if path is None:
        raise UsageError(f"{flag} is required")
    try:
        return loader(load_json(path))
    except OSError as exc:
        raise UsageError(f"cannot read {flag} {path}: {exc.strerror or exc}") from None
    except ValueError as exc:  # json.JSONDecodeError and SchemaError
        raise UsageError(f"invalid {flag} {path}: {exc}") from None


def _gamma(args, d: int) -> Conjugation:
    if args.gamma is None:
        return Conjugation.identity(d)
    g = _load(conjugation_from_json, args.gamma, "--gamma")
    if g.d != d:
        raise UsageError(f"--gamma has d={g.d} but the symbols have d={d}")
    return g


def _emit(args, obj: dict) -> None:
    text = dump_json(obj, args.report)
    if args.report is None and not args.quiet:
        sys.stdout.write(text)


def cmd_decompose(args) -> int:
    s = _load(symbol_from_json, args.phi, "--phi")
    _emit(args, {"schema": SCHEMA, "decomposition": decomposition_to_json(decompose(s))})
    return 0


def cmd_build(args) -> int:
    s = _load(symbol_from_json, args.phi, "--phi")
    _emit(args, {"schema": SCHEMA, "operator": operator_to_json(build_mtto(s))})
    return 0


def cmd_extract(args) -> int:
    A = _load(operator_from_json, args.operator, "--operator")
    try:
        s = extract_symbol(A, args.tol)
    except NotToeplitzError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, {"schema": SCHEMA, "symbol": symbol_to_json(s)})
    return 0


def _check_report(args, rep, symbols: dict, g: Conjugation) -> int:
    out = {"schema": SCHEMA, "seed": None, **rep.to_dict()}
    first = next(iter(symbols.values()))
    out["N"], out["d"] = first.N, first.d
    out["symbol_hashes"] = {k: symbol_hash(s) for k, s in symbols.items()}
    if not rep.agree:
        out["inputs"] = {k: symbol_to_json(s) for k, s in symbols.items()}
        out["inputs"]["gamma"] = conjugation_to_json(g)
    _emit(args, out)
    if not args.quiet:
        print(
            f"{rep.check}: verdict={rep.verdict} oracle={rep.oracle_verdict} "
            f"agree={rep.agree} residual={rep.residual:.3e}",
            file=sys.stderr,
        )
    return 0 if rep.agree else 1


def cmd_check_product(args) -> int:
    phi = _load(symbol_from_json, args.phi, "--phi")
    psi = _load(symbol_from_json, args.psi, "--psi")
    g = _gamma(args, phi.d)
    rep = product_condition(phi, psi, g, args.tol)
    coef = coefficient_criteria(phi, psi, g, args.tol)
    rc = _check_report(args, rep, {"phi": phi, "psi": psi}, g)
    if coef.verdict != rep.verdict:
        print("coefficient criteria disagree with the product condition", file=sys.stderr)
        return 1
    return rc


def cmd_check_difference(args) -> int:
    syms = {k: _load(symbol_from_json, getattr(args, k), f"--{k}") for k in ("phi", "psi", "chi", "zeta")}
    g = _gamma(args, syms["phi"].d)
    rep = difference_condition(syms["phi"], syms["psi"], syms["chi"], syms["zeta"], g, args.tol)
    return _check_report(args, rep, syms, g)


def cmd_suite(args) -> int:
    cfg = SuiteConfig(
        seed=args.seed,
        trials=args.trials,
        max_N=args.max_N,
        max_d=args.max_d,
        poly_degree=args.poly_degree,
        tol=args.tol,
        include_positive_generators=not args.no_positive,
        include_negative_probes=not args.no_probes,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(f"invalid suite configuration: {exc}") from None
    report = run_suite(cfg)
    _emit(args, report)
    if not args.quiet:
        print(f"suite: {report['trials']} trials, {report['failures']} failures", file=sys.stderr)
    return 0 if report["failures"] == 0 else 1


def cmd_bench(args) -> int:
    if args.N < 2 or args.d < 1 or args.reps < 1:
        raise UsageError(f"bench needs N >= 2, d >= 1, reps >= 1 (got N={args.N}, d={args.d}, reps={args.reps})")
    row = fast.benchmark(args.N, args.d, args.reps, args.seed)
    if not args.quiet:
        print(fast.CSV_HEADER)
    print(fast.csv_row(row))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mtto", description="Products of matrix-valued truncated Toeplitz operators on K_{z^N}.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--report", help="write JSON output here instead of stdout")
    common.add_argument("--quiet", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, *flags):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for f in flags:
            sp.add_argument(f"--{f}")
        sp.set_defaults(func=fn)
        return sp

    add("decompose", cmd_decompose, "split a symbol into Φ₀, Φ₊, Φ₋", "phi")
    add("build", cmd_build, "assemble the block Toeplitz operator of a symbol", "phi")
    add("extract", cmd_extract, "recover the symbol of a block Toeplitz operator", "operator")
    add("check-product", cmd_check_product, "decide whether A_Φ A_Ψ is truncated Toeplitz", "phi", "psi", "gamma")
    add("check-difference", cmd_check_difference, "decide whether A_Φ A_Ψ - A_χ A_ζ is truncated Toeplitz",
        "phi", "psi", "chi", "zeta", "gamma")

    sp = add("suite", cmd_suite, "run the randomized verification battery")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--max-N", dest="max_N", type=int, default=6)
    sp.add_argument("--max-d", dest="max_d", type=int, default=3)
    sp.add_argument("--poly-degree", dest="poly_degree", type=int, default=2)
    sp.add_argument("--no-positive", action="store_true", help="skip positive-instance generators")
    sp.add_argument("--no-probes", action="store_true", help="skip non-compatible probes")

    sp = sub.add_parser("bench", help="benchmark fast apply against dense matvec (CSV)")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--reps", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--quiet", action="store_true", help="omit the CSV header")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
