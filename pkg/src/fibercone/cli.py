"""Command-line front end.

Subcommands: chain, verify, certify, gamma, gauss.
Exit codes: 0 success, 1 check failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .blowup_chain import ChainError, chain_from_json, paper_chain
from .filtration_values import (
    HasCenter,
    LexPair,
    SubadditivityError,
    ValueSequence,
    center_criterion,
    composite_value_sequence,
    distinct_components_certificate,
    gamma,
    paper_value_sequence,
    verify_certificate,
)
from .gauss_valuation import (
    GaussPolynomial,
    gauss_multiplicativity_check,
    gauss_value,
    random_polynomial,
)
from .sweeps import ALL_CHECKS, SweepConfig, parse_family, run_sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 20240101


class UsageError(Exception):
    pass


def _timestamp() -> str:
    # SOURCE_DATE_EPOCH pins the timestamp for reproducible reports
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch is not None else int(time.time())
    return datetime.fromtimestamp(t, tz=timezone.utc).isoformat()


@dataclass
class Report:
    command: list[str]
    checks: dict[str, dict] = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    timestamp: str = field(default_factory=_timestamp)

    @property
    def failures(self) -> int:
        return sum(c["failed"] for c in self.checks.values())

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "timestamp": self.timestamp,
            "checks": self.checks,
            "total_checks": sum(c["total"] for c in self.checks.values()),
            "failures": self.failures,
            "witnesses": self.witnesses,
            **self.data,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _counts(passed: int, failed: int, first=None) -> dict:
    return {"passed": passed, "failed": failed, "total": passed + failed, "first_counterexample": first}


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(args, text: str) -> None:
    # prose goes to stderr when stdout carries the machine-readable payload
    print(text, file=sys.stdout if args.output else sys.stderr)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None


def _tsv(rows, header=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    if header:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_chain(args) -> int:
    try:
        if args.file:
            chain = chain_from_json(_load_json(args.file))
        else:
            chain = paper_chain(args.length)
    except ChainError as exc:
        raise UsageError(str(exc)) from None
    level = args.level or chain.length
    try:
        form = chain.form(level)
    except ChainError as exc:
        raise UsageError(str(exc)) from None
    report = Report(
        args.argv,
        checks={"negative_definite": _counts(int(form.is_negative_definite()), int(not form.is_negative_definite()))},
        data={"chain": chain.to_json(), "level": level, "form": form.as_lists(), "minors": form.leading_minors()},
    )
    if args.format == "tsv":
        _emit(args, _tsv(form.as_lists()))
    else:
        _emit(args, report.dumps())
    return EXIT_OK if report.failures == 0 else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        cfg = SweepConfig(
            l_max=args.l_max,
            m_max=args.m_max,
            n_max=args.n_max,
            bridge_m_max=args.bridge_m_max,
            checks=tuple(args.checks.split(",")) if args.checks else ALL_CHECKS,
            family=parse_family(args.family) if args.family else None,
            rows=args.format == "tsv",
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = run_sweep(cfg, jobs=args.jobs)
    report = Report(
        args.argv,
        checks={name: c.to_json() for name, c in result.checks.items()},
        witnesses=result.witnesses,
        data={
            "config": {
                "l_max": cfg.l_max,
                "m_max": cfg.m_max,
                "n_max": cfg.n_max,
                "bridge_m_max": cfg.bridge_m_max,
                "family": [str(c) for c in cfg.family] if cfg.family else None,
            }
        },
    )
    if args.format == "tsv":
        _emit(args, _tsv(result.rows, ("l", "m", "n", "matrix_value", "closed_form_value", "agree")))
        for name, c in result.checks.items():
            print(f"{name}\tpassed={c.passed}\tfailed={c.failed}", file=sys.stderr)
    else:
        _emit(args, report.dumps())
    return EXIT_OK if report.failures == 0 else EXIT_FAIL


def cmd_certify(args) -> int:
    if args.n < 2:
        raise UsageError("certify needs --n >= 2")
    cert = distinct_components_certificate(args.n)
    problems = verify_certificate(cert)
    payload = cert.to_json()
    payload["verified"] = not problems
    payload["problems"] = problems
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if problems:
        _note(args, f"certificate FAILED re-verification: {len(problems)} problem(s)")
        return EXIT_FAIL
    _note(args, f"certified {args.n} distinct one-dimensional components at truncation (m={cert.m}, l={cert.l})")
    return EXIT_OK


def _load_sequence(args) -> ValueSequence:
    if args.file:
        try:
            return ValueSequence.from_json(_load_json(args.file))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad value sequence: {exc}") from None
    if args.preset is None:
        raise UsageError("gamma needs --file or --preset")
    M = args.M
    if args.composite:
        return composite_value_sequence(args.preset, M)
    return paper_value_sequence(args.preset, M)


def cmd_gamma(args) -> int:
    seq = _load_sequence(args)
    try:
        rep = gamma(seq)
    except SubadditivityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    verdict = center_criterion(seq)
    data = rep.to_json()
    data["center"] = (
        {"kind": "HasCenter", "witness": verdict.witness}
        if isinstance(verdict, HasCenter)
        else {"kind": "UnknownUpTo", "bound": verdict.bound}
    )
    data["M"] = seq.bound
    data["provenance"] = seq.provenance
    if args.format == "tsv":
        rows = []
        for m in range(1, seq.bound + 1):
            v = seq[m]
            shown = f"{v.first},{v.second}" if isinstance(v, LexPair) else v
            rows.append((m, shown, data["trace"][m - 1]))
        _emit(args, _tsv(rows, ("m", "value", "running_inf")))
        _note(args, f"gamma={data['gamma']} status={data['status']}")
    else:
        _emit(args, json.dumps(data, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_gauss(args) -> int:
    polys = []
    if args.file:
        doc = _load_json(args.file)
        raw = doc.get("polynomials", [doc]) if isinstance(doc, dict) else doc
        try:
            polys = [GaussPolynomial.from_json(p) for p in raw]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad polynomial: {exc}") from None
    values = []
    for i, f in enumerate(polys):
        w = gauss_value(f)
        values.append({"index": i, "value": None if f.is_zero() else w, "zero": f.is_zero()})
    ok = bad = 0
    first = None
    nonzero = [f for f in polys if not f.is_zero()]
    pairs = [(f, g) for i, f in enumerate(nonzero) for g in nonzero[i:]]
    rng = random.Random(args.seed)
    pairs += [(random_polynomial(rng), random_polynomial(rng)) for _ in range(args.random)]
    for f, g in pairs:
        if gauss_multiplicativity_check(f, g):
            ok += 1
        else:
            bad += 1
            first = first or {"f": f.to_json(), "g": g.to_json()}
    report = Report(args.argv, checks={"multiplicativity": _counts(ok, bad, first)}, data={"values": values})
    if args.format == "tsv":
        _emit(args, _tsv([(v["index"], "inf" if v["zero"] else v["value"], int(v["zero"])) for v in values], ("index", "w", "zero")))
    else:
        _emit(args, report.dumps())
    for v in values:
        if v["zero"]:
            _note(args, f"polynomial {v['index']} is zero: w = +infinity")
    return EXIT_OK if bad == 0 else EXIT_FAIL


def _add_global_flags(p: argparse.ArgumentParser, with_defaults: bool) -> None:
    def d(value):
        return value if with_defaults else argparse.SUPPRESS

    p.add_argument("--output", "-o", default=d(None), help="write the report here instead of stdout")
    p.add_argument("--format", choices=("tsv", "json"), default=d("json"))
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for sweeps")
    p.add_argument("--seed", type=int, default=d(DEFAULT_SEED))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fibercone", description=__doc__.splitlines()[0])
    _add_global_flags(parser, with_defaults=True)
    # global flags are accepted after the subcommand too; SUPPRESS keeps the
    # subparser from overwriting values given before it
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, with_defaults=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chain", parents=[common], help="print the intersection form of a blowup chain")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=("paper",), default="paper")
    src.add_argument("--file", help="JSON chain description {length, parents}")
    p.add_argument("--length", type=int, default=5)
    p.add_argument("--level", type=int)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("verify", parents=[common], help="sweep the nefness/pullback/positivity identities")
    p.add_argument("--l-max", type=int, default=12)
    p.add_argument("--m-max", type=int, default=4096)
    p.add_argument("--n-max", type=int, default=10, help="largest curve index in the coefficient bridge check")
    p.add_argument("--bridge-m-max", type=int, default=512)
    p.add_argument("--checks", help=f"comma list from {','.join(ALL_CHECKS)}")
    p.add_argument("--family", help="comma list of rational coefficients of a different Q-divisor to test for nefness")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", parents=[common], help="certificate of N distinct fiber-cone components")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("gamma", parents=[common], help="infimum of v(I_m)/m and the center criterion")
    p.add_argument("--file", help="JSON {M, values}")
    p.add_argument("--preset", type=int, metavar="N", help="use the v_{E_N} value sequence")
    p.add_argument("--composite", action="store_true", help="with --preset: the rank-two composite valuation")
    p.add_argument("--M", type=int, default=64)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("gauss", parents=[common], help="Gauss valuation of polynomials")
    p.add_argument("--file", help="JSON {polynomials: [{coeffs: [{t_exp: 'p/q'}, ...]}, ...]}")
    p.add_argument("--random", type=int, default=100, help="seeded random multiplicativity spot-checks")
    p.set_defaults(func=cmd_gauss)
    return parser


def _echo(argv: list[str]) -> list[str]:
    """Command echo without flags that change where/how fast, not what, is computed."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--jobs", "--output", "-o"):
            skip = True
            continue
        if tok.startswith(("--jobs=", "--output=")):
            continue
        out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = _echo(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
