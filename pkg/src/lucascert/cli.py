"""Command-line front end.

Every library capability is a subcommand; reports come out as text or JSON
(same verdicts either way), delimited exports and figures land next to each
other, and the exit code is the machine contract: 0 verified / no findings,
1 failed / findings, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

from . import apparition, certified, lehmer, proof, report, sequences
from .arith import FactorBudget, IncompleteFactorizationError, primes_up_to
from .certified import EnclosureContext
from .sequences import SequenceKind

CONFIG_ENV_VAR = "LUCASCERT_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    """Run-wide knobs; every report echoes these for replayability."""

    format: str = "text"
    workers: int = 1
    partitions: int = 1
    seed: int = 1
    rho_iterations: int = 2_000_000
    trial_bound: int = 10_000
    precision_bits: int = certified.DEFAULT_BITS
    escalations: int = certified.DEFAULT_ESCALATIONS
    identity_limit: int = 2000
    chain_limit: int = 101
    partition_limit: int = 101
    reciprocal_limit: int = 101
    small_scan_limit: int = 10_000
    wall_exact_limit: int = 500
    exception_scan_limit: int = 300
    inequality_limit: int = 100_000
    inequality_threshold: int = 1800
    final_lo: int = 97
    final_hi: int = 1800
    wall_limit: int = 100_000
    monotone_limit: int = 100_000
    ratio_instance_limit: int = 90
    c1: str = "9/10"
    c2: str = "11/5"

    def budget(self) -> FactorBudget:
        return FactorBudget(rho_iterations=self.rho_iterations,
                            trial_bound=self.trial_bound, seed=self.seed)

    def params(self) -> proof.InequalityParams:
        return proof.InequalityParams.create(
            self.precision_bits, self.escalations,
            Fraction(self.c1), Fraction(self.c2))

    def proof_config(self) -> proof.ProofConfig:
        return proof.ProofConfig(
            identity_limit=self.identity_limit,
            chain_limit=self.chain_limit,
            partition_limit=self.partition_limit,
            reciprocal_limit=self.reciprocal_limit,
            small_scan_limit=self.small_scan_limit,
            wall_exact_limit=self.wall_exact_limit,
            exception_scan_limit=self.exception_scan_limit,
            inequality_limit=self.inequality_limit,
            inequality_threshold=self.inequality_threshold,
            final_range=(self.final_lo, self.final_hi),
            wall_limit=self.wall_limit,
            monotone_limit=self.monotone_limit,
            ratio_instance_limit=self.ratio_instance_limit,
            precision_bits=self.precision_bits,
            escalations=self.escalations,
            rho_iterations=self.rho_iterations,
            trial_bound=self.trial_bound,
            seed=self.seed,
            workers=self.workers,
            partitions=self.partitions,
            c1=Fraction(self.c1),
            c2=Fraction(self.c2),
        )

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_INT_KEYS = {f.name for f in fields(RunConfig)
             if f.type == "int"}


def load_config_file(path: str | Path) -> dict:
    """key = value lines; # starts a comment; unknown keys are rejected."""
    known = {f.name for f in fields(RunConfig)}
    values: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise ValueError(f"malformed config line: {raw!r}")
        if key not in known:
            raise ValueError(f"unknown config key: {key}")
        values[key] = int(value) if key in _INT_KEYS else value
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    file_values: dict = {}
    config_path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
    if config_path:
        file_values = load_config_file(config_path)
        cfg = replace(cfg, **file_values)
    overrides = {}
    for name in ("format", "workers", "partitions", "seed", "rho_iterations",
                 "trial_bound", "precision_bits", "escalations"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    # the certificate is the proof report, so that subcommand speaks JSON
    # unless told otherwise
    if (getattr(args, "subcommand", None) == "proof"
            and getattr(args, "format", None) is None
            and "format" not in file_values):
        overrides["format"] = "json"
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg


# --- output plumbing --------------------------------------------------------

def _emit(args: argparse.Namespace, cfg: RunConfig, payload: dict,
          text_lines: list[str]) -> None:
    if cfg.format == "json":
        payload = dict(payload)
        payload["config"] = cfg.to_dict()
        rendered = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    else:
        rendered = "\n".join(text_lines) + "\n"
    output = getattr(args, "output", None)
    if output:
        Path(output).write_text(rendered)
    else:
        sys.stdout.write(rendered)


def _verdict(exit_code: int) -> str:
    return "ok" if exit_code == 0 else "findings"


# --- subcommand handlers ----------------------------------------------------

def handle_seq(args: argparse.Namespace, cfg: RunConfig) -> int:
    kind = SequenceKind(args.kind)
    if args.lucas is not None:
        value = sequences.lucas_exact(args.lucas)
        _emit(args, cfg, {"command": "seq", "query": "lucas",
                          "index": args.lucas, "value": str(value),
                          "verdict": "ok"},
              [str(value)])
        return 0
    if args.fib is not None:
        value = sequences.fib_exact(args.fib)
        _emit(args, cfg, {"command": "seq", "query": "fibonacci",
                          "index": args.fib, "value": str(value),
                          "verdict": "ok"},
              [str(value)])
        return 0
    if args.pair is not None:
        pair = sequences.sequence_pair(args.pair)
        _emit(args, cfg, {"command": "seq", "query": "pair",
                          "index": pair.index, "fib": str(pair.fib),
                          "lucas": str(pair.lucas), "verdict": "ok"},
              [f"F_{pair.index} = {pair.fib}", f"L_{pair.index} = {pair.lucas}"])
        return 0
    if args.two_adic_max:
        value = sequences.max_two_adic_valuation_lucas()
        _emit(args, cfg, {"command": "seq", "query": "two_adic_max",
                          "max_valuation": value, "verdict": "ok"},
              [f"max 2-adic valuation of any Lucas value: {value}"])
        return 0
    if args.identities is not None:
        failures = identity_failures(args.identities)
        code = 0 if not failures else 1
        _emit(args, cfg, {"command": "seq", "query": "identities",
                          "limit": args.identities, "failures": failures,
                          "verdict": _verdict(code)},
              [f"identity checks to {args.identities}: "
               + ("all hold" if not failures else f"failures {failures}")])
        return code
    if args.period:
        if args.modulus is None:
            raise ValueError("--period needs --modulus")
        period = sequences.period_mod(args.modulus, kind)
        residues = sequences.residues_mod(args.modulus, kind, period + 2)
        _emit(args, cfg, {"command": "seq", "query": "period",
                          "kind": kind.value, "modulus": args.modulus,
                          "period": period, "residues": residues,
                          "verdict": "ok"},
              [f"period of {kind.value} mod {args.modulus}: {period}",
               "residues: " + ",".join(str(r) for r in residues)])
        return 0
    raise ValueError("seq needs one of --lucas/--fib/--pair/--identities/"
                     "--period/--two-adic-max")


def identity_failures(limit: int) -> list[int]:
    failures = []
    for n in range(0, limit + 1):
        ok = sequences.check_identity_square(n)
        if n >= 2 and n % 2 == 0:
            ok = ok and sequences.check_identity_even(n)
        if n % 2 == 1:
            ok = ok and sequences.check_identity_odd(n)
        if not ok:
            failures.append(n)
    return failures


def handle_rank(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.prime is not None:
        record = apparition.wall_record(args.prime)
        _emit(args, cfg, {"command": "rank", "prime": record.prime,
                          "rank": record.rank,
                          "wall_exponent": record.wall_exponent,
                          "cofactor_coprime": record.cofactor_coprime,
                          "verdict": "ok"},
              [f"prime {record.prime}: rank {record.rank}, "
               f"wall exponent {record.wall_exponent}"])
        return 0
    if args.limit is None:
        raise ValueError("rank needs --prime or --limit")
    records = [apparition.wall_record(p)
               for p in primes_up_to(args.limit) if p % 2]
    if args.csv or args.figure:
        report.write_rank_csv(records, args.csv, figure_path=args.figure)
    _emit(args, cfg, {"command": "rank", "limit": args.limit,
                      "records": len(records),
                      "csv": args.csv, "figure": args.figure,
                      "verdict": "ok"},
          [f"computed {len(records)} rank records up to {args.limit}"
           + (f", wrote {args.csv}" if args.csv else "")])
    return 0


def handle_wall_scan(args: argparse.Namespace, cfg: RunConfig) -> int:
    exceptions = apparition.wall_scan(args.limit, partitions=cfg.partitions,
                                      workers=cfg.workers)
    code = 0 if not exceptions else 1
    if args.csv or args.figure:
        records = None
        if args.figure:
            records = [apparition.wall_record(p)
                       for p in primes_up_to(args.limit) if p % 2]
        report.write_wall_csv(args.limit, exceptions, args.csv,
                              records=records, figure_path=args.figure)
    _emit(args, cfg, {"command": "wall-scan", "limit": args.limit,
                      "exceptions": exceptions,
                      "exception_count": len(exceptions),
                      "verdict": _verdict(code)},
          [f"wall scan to {args.limit}: {len(exceptions)} exceptions"
           + (f" {exceptions}" if exceptions else "")])
    return code


def handle_primitive(args: argparse.Namespace, cfg: RunConfig) -> int:
    kind = SequenceKind(args.kind)
    rep = apparition.primitive_prime_divisors(args.index, kind, cfg.budget())
    _emit(args, cfg, {"command": "primitive", "index": rep.index,
                      "kind": rep.kind.value,
                      "primitive_primes": [str(p) for p in rep.primitive_primes],
                      "exceptional": rep.exceptional,
                      "congruence_checked": rep.congruence_checked,
                      "verdict": "ok"},
          [f"{kind.value} index {rep.index}: primitive primes "
           f"{list(rep.primitive_primes) or '{}'}"
           + (" (exceptional)" if rep.exceptional else "")])
    return 0


def handle_lehmer_search(args: argparse.Namespace, cfg: RunConfig) -> int:
    verdicts = lehmer.lehmer_search_lucas(args.max_index, cfg.budget(),
                                          workers=cfg.workers)
    hits = [v.index for v in verdicts if v.is_lehmer]
    undecided = [v.index for v in verdicts if v.is_lehmer is None]
    code = 0 if not hits and not undecided else 1
    if args.jsonl:
        report.write_verdicts_jsonl(verdicts, args.jsonl,
                                    figure_path=args.figure)
    _emit(args, cfg, {"command": "lehmer-search", "max_index": args.max_index,
                      "indices_checked": len(verdicts),
                      "lehmer_hits": hits, "undecided": undecided,
                      "verdict": _verdict(code)},
          [f"searched indices 2..{args.max_index}: "
           f"{len(hits)} Lehmer hits, {len(undecided)} undecided"])
    return code


def handle_proof(args: argparse.Namespace, cfg: RunConfig) -> int:
    pcfg = cfg.proof_config()
    if args.step:
        step = proof.run_step(args.step, pcfg)
        code = 0 if step.status is not proof.StepStatus.FAILED else 1
        _emit(args, cfg, {"command": "proof", "format_version": "1",
                          "step": step.to_dict(),
                          "verdict": "ok" if code == 0 else "failed"},
              [f"{step.id}: {step.status.value}"])
        return code
    certificate = proof.run_full_proof(pcfg)
    code = 0 if certificate.overall_status == "verified_with_assumptions" else 1
    rendered = certificate.to_json()
    if cfg.format == "json":
        if args.output:
            Path(args.output).write_text(rendered)
        else:
            sys.stdout.write(rendered)
    else:
        # text mode still persists the machine-readable certificate when an
        # output path is given; the step summary goes to stdout
        lines = [f"{s.id}: {s.status.value}" for s in certificate.steps]
        lines.append(f"overall: {certificate.overall_status}")
        if args.output:
            Path(args.output).write_text(rendered)
            lines.append(f"certificate written to {args.output}")
        sys.stdout.write("\n".join(lines) + "\n")
    return code


def _parse_range(text: str) -> tuple[int, int]:
    lo_text, sep, hi_text = text.partition(":")
    if not sep:
        raise ValueError("range must look like LO:HI")
    lo, hi = int(lo_text), int(hi_text)
    if lo > hi:
        raise ValueError("range must be increasing")
    return lo, hi


def handle_check_ineq(args: argparse.Namespace, cfg: RunConfig) -> int:
    lo, hi = _parse_range(args.range)
    params = cfg.params()
    ctx = EnclosureContext(params.precision_bits)
    rows: list[dict] = []
    findings: list[int] = []
    skipped: list[int] = []
    if args.which == "eq9":
        for p in primes_up_to(hi):
            if p < lo:
                continue
            holds, _ = proof.smallest_prime_inequality_holds(p, params)
            rhs = proof.smallest_prime_rhs(ctx, p, params.c1, params.c2)
            rows.append({"point": p, "lhs": str(ctx.ln_int(p).lo),
                         "rhs_lo": str(rhs.lo), "rhs_hi": str(rhs.hi),
                         "holds": holds})
            if holds and p >= cfg.inequality_threshold:
                findings.append(p)
        satisfied = [r["point"] for r in rows if r["holds"]]
        summary = (f"satisfying primes in [{lo}, {hi}]: {satisfied}; "
                   f"beyond threshold {cfg.inequality_threshold}: {findings}")
    elif args.which == "final":
        for p in primes_up_to(hi):
            if p < lo:
                continue
            holds, _ = proof.final_contradiction_holds(p, params)
            rhs = proof.final_rhs(ctx, p, params.c1, params.c2)
            rows.append({"point": p, "lhs": str(rhs.hi),
                         "rhs_lo": str(ctx.log_two().lo),
                         "rhs_hi": str(ctx.log_two().hi),
                         "holds": holds})
            if not holds:
                findings.append(p)
        summary = (f"bound below ln 2 for all primes in [{lo}, {hi}]"
                   if not findings else f"bound failures at {findings}")
    elif args.which == "imp":
        start = max(lo, 11)
        if start % 2 == 0:
            start += 1
        for d in range(start, hi + 1, 2):
            try:
                check = apparition.reciprocal_sum_bound_check(
                    d, cfg.budget(), bits=params.precision_bits,
                    escalations=params.escalations,
                    c1=params.c1, c2=params.c2)
            except certified.PrecisionExhaustedError:
                findings.append(d)
                continue
            except IncompleteFactorizationError:
                skipped.append(d)
                continue
            rows.append({"point": d, "lhs": f"{float(check.lhs):.10g}",
                         "rhs_lo": str(check.rhs.lo),
                         "rhs_hi": str(check.rhs.hi),
                         "holds": check.holds})
            if not check.holds:
                findings.append(d)
        summary = (f"reciprocal bound holds at all odd indices in "
                   f"[{start}, {hi}]" if not findings
                   else f"violations at {findings}")
    else:
        raise ValueError(f"unknown inequality selector: {args.which}")
    if args.csv:
        report.write_inequality_csv(rows, args.csv, which=args.which,
                                    figure_path=args.figure)
    code = 0 if not findings else 1
    _emit(args, cfg, {"command": "check-ineq", "which": args.which,
                      "range": [lo, hi], "points": len(rows),
                      "findings": findings, "skipped": skipped,
                      "verdict": _verdict(code)},
          [summary])
    return code


# --- parser -----------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default=None,
                        help="report format (default text)")
    parser.add_argument("--output", default=None, metavar="FILE",
                        help="write the report to FILE instead of stdout")
    parser.add_argument("--config", default=None, metavar="FILE",
                        help=f"config file (also via ${CONFIG_ENV_VAR})")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--partitions", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--rho-iterations", type=int, default=None,
                        dest="rho_iterations",
                        help="factorization work budget in walk steps")
    parser.add_argument("--trial-bound", type=int, default=None,
                        dest="trial_bound")
    parser.add_argument("--precision-bits", type=int, default=None,
                        dest="precision_bits")
    parser.add_argument("--escalations", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lucascert",
        description=("Verification toolkit for Lucas/Fibonacci arithmetic "
                     "and the Lehmer property of Lucas numbers."))
    sub = parser.add_subparsers(dest="subcommand", required=True)

    seq = sub.add_parser("seq", help="values, identities, periods")
    seq.add_argument("--lucas", type=int, default=None, metavar="N")
    seq.add_argument("--fib", type=int, default=None, metavar="N")
    seq.add_argument("--pair", type=int, default=None, metavar="N")
    seq.add_argument("--identities", type=int, default=None, metavar="N",
                     help="check the square/even/odd identities up to N")
    seq.add_argument("--period", action="store_true",
                     help="least period modulo --modulus")
    seq.add_argument("--modulus", type=int, default=None, metavar="M")
    seq.add_argument("--two-adic-max", action="store_true",
                     dest="two_adic_max",
                     help="largest power of 2 dividing any Lucas value")
    seq.add_argument("--kind", choices=("lucas", "fibonacci"),
                     default="lucas")
    _add_common(seq)
    seq.set_defaults(handler=handle_seq)

    rank = sub.add_parser("rank", help="rank of apparition and Wall exponent")
    rank.add_argument("--prime", type=int, default=None, metavar="P")
    rank.add_argument("--limit", type=int, default=None, metavar="N",
                      help="records for every odd prime up to N")
    rank.add_argument("--csv", default=None, metavar="FILE")
    rank.add_argument("--figure", default=None, metavar="FILE")
    _add_common(rank)
    rank.set_defaults(handler=handle_rank)

    wall = sub.add_parser("wall-scan",
                          help="search for Wall exponents above 1")
    wall.add_argument("--limit", type=int, required=True, metavar="N")
    wall.add_argument("--csv", default=None, metavar="FILE")
    wall.add_argument("--figure", default=None, metavar="FILE")
    _add_common(wall)
    wall.set_defaults(handler=handle_wall_scan)

    prim = sub.add_parser("primitive",
                          help="primitive prime divisors of one term")
    prim.add_argument("--index", type=int, required=True, metavar="D")
    prim.add_argument("--kind", choices=("lucas", "fibonacci"),
                      default="lucas")
    _add_common(prim)
    prim.set_defaults(handler=handle_primitive)

    search = sub.add_parser("lehmer-search",
                            help="decide the Lehmer property per index")
    search.add_argument("--max-index", type=int, required=True,
                        dest="max_index", metavar="N")
    search.add_argument("--jsonl", default=None, metavar="FILE",
                        help="write the verdict stream (one object per line)")
    search.add_argument("--figure", default=None, metavar="FILE")
    _add_common(search)
    search.set_defaults(handler=handle_lehmer_search)

    prf = sub.add_parser("proof", help="run the proof certificate pipeline")
    prf.add_argument("--full", action="store_true",
                     help="run every step in order")
    prf.add_argument("--step", default=None, metavar="ID",
                     help="run a single step by id")
    _add_common(prf)
    prf.set_defaults(handler=handle_proof)

    ineq = sub.add_parser("check-ineq",
                          help="certified inequality checks over a range")
    ineq.add_argument("--which", choices=("eq9", "final", "imp"),
                      required=True,
                      help="eq9: per-prime bound linking ln p to ln ln p; "
                           "final: closing bound against ln 2; "
                           "imp: primitive reciprocal-sum bound per index")
    ineq.add_argument("--range", default=None, metavar="LO:HI")
    ineq.add_argument("--csv", default=None, metavar="FILE")
    ineq.add_argument("--figure", default=None, metavar="FILE")
    _add_common(ineq)
    ineq.set_defaults(handler=handle_check_ineq)

    return parser


_DEFAULT_RANGES = {"eq9": "2:100000", "final": "97:1800", "imp": "11:101"}


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_call:
        return 2 if exit_call.code not in (0, None) else int(exit_call.code or 0)
    try:
        cfg = build_config(args)
        if args.subcommand == "proof" and not args.full and not args.step:
            parser.error("proof needs --full or --step ID")
        if args.subcommand == "check-ineq" and args.range is None:
            args.range = _DEFAULT_RANGES[args.which]
        return args.handler(args, cfg)
    except SystemExit as exit_call:
        return 2 if exit_call.code not in (0, None) else int(exit_call.code or 0)
    except (ValueError, KeyError) as error:
        print(f"error: {error}", file=sys.stderr)
        print(parser.format_usage(), file=sys.stderr, end="")
        return 2
    except ArithmeticError as error:
        print(f"failed: {error}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
