"""Command-line interface.

Exit codes: 0 success, 1 internal mismatch, 2 input error, 3 capacity
(budget exceeded), 4 parameter outside its regime. Exact numbers are written
as decimal strings; the only float is the pipeline's presentation exponent.
The global enumeration budget can be overridden with ``SIDON_BUDGET``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .constructions import FAMILIES, construct
from .core import (
    CapacityError,
    DomainError,
    GroundSet,
    Mode,
    ParseError,
    RationalSet,
    RegimeError,
    format_rational,
    parse_rational,
    parse_rational_set,
    parse_set,
    serialize_rational_set,
    serialize_set,
)
from .extract import MASK64, SamplingParams, extract_sidon, theorem_pipeline
from .incidence import IncidenceInstance, hyperbolic_count_brute, theorem_ratio
from .representation import energy
from .sidon import is_Bhg, measure_g

log = logging.getLogger("sidonkit")

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_CAPACITY, EXIT_REGIME = 0, 1, 2, 3, 4

CSV_COLUMNS = {
    "energy": ["op", "s", "k", "mode", "value"],
    "verify": ["op", "h", "g", "mode", "verdict", "g_measured", "witness"],
    "extract": ["op", "h", "g", "mode", "seed", "p", "size", "sampled", "deletions", "passes", "g_measured"],
    "pipeline": ["op", "h", "g", "side", "source", "size", "input_size", "exponent"],
    "construct": ["op", "family", "sizes"],
    "incidence": ["op", "lambda", "H", "H_brute", "match", "bound_value", "K", "in_regime"],
}


@dataclass
class ExperimentReport:
    op: str
    command: list[str]
    parameters: dict[str, Any]
    results: dict[str, Any] = field(default_factory=dict)
    input_digest: str = ""
    seeds: list[str] = field(default_factory=list)
    timing_s: float = 0.0

    def payload(self) -> dict[str, Any]:
        """Everything except timing; identical inputs reproduce it exactly."""
        out = {"op": self.op, **self.parameters, **self.results}
        out["input_digest"] = self.input_digest
        if self.seeds:
            out["seed_schedule"] = self.seeds
        return out

    def to_json(self) -> str:
        out = self.payload()
        out["command"] = self.command
        out["timing_s"] = f"{self.timing_s:.6f}"
        return json.dumps(out, indent=2)

    def to_csv(self) -> str:
        flat = self.payload()
        columns = CSV_COLUMNS[self.op]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerow([_csv_cell(flat.get(c, "")) for c in columns])
        return buf.getvalue()


def _csv_cell(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return str(v)


def _digest(*texts: str) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()


def _read_bytes(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _load_set(path: str) -> GroundSet:
    A, _ = parse_set(_read_bytes(path), label=None)
    return A


def _load_rationals(path: str) -> RationalSet:
    X, _ = parse_rational_set(_read_bytes(path))
    return X


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".txt")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _strs(xs) -> list[str]:
    return [str(x) for x in xs]


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise RegimeError(f"bad rational {text!r}: {exc}") from None


# --------------------------------------------------------------------------
# commands


def cmd_energy(args: argparse.Namespace) -> ExperimentReport:
    A = _load_set(args.set)
    mode = Mode.parse(args.mode)
    e = energy(A, args.s, args.k, mode)
    return ExperimentReport(
        "energy", [], {"s": str(args.s), "k": str(args.k), "mode": mode.short},
        {"value": str(e.value)}, _digest(serialize_set(A)))


def _cert_fields(cert) -> dict[str, Any]:
    return {
        "g_measured": str(cert.g_measured),
        "certificate_witness": None if cert.witness is None else str(cert.witness),
        "certificate_multisets": [_strs(m) for m in cert.witness_multisets],
    }


def cmd_verify(args: argparse.Namespace) -> ExperimentReport:
    A = _load_set(args.set)
    mode = Mode.parse(args.mode)
    verdict = is_Bhg(A, args.h, args.g, mode)
    results: dict[str, Any] = {"verdict": verdict.ok}
    if len(A):
        cert = measure_g(A, args.h, mode)
        results.update(_cert_fields(cert))
    else:
        cert = None
        results.update({"g_measured": "0", "certificate_witness": None, "certificate_multisets": []})
    # the reported witness is the most-represented value; the first value to
    # overflow during enumeration is kept alongside it
    if verdict.ok or cert is None:
        results.update({"witness": None, "witness_multisets": [], "first_violation": None})
    else:
        results.update({
            "witness": str(cert.witness),
            "witness_multisets": [_strs(m) for m in cert.witness_multisets[: args.g + 1]],
            "first_violation": str(verdict.witness),
        })
    return ExperimentReport(
        "verify", [], {"h": str(args.h), "g": str(args.g), "mode": mode.short},
        results, _digest(serialize_set(A)))


def cmd_extract(args: argparse.Namespace) -> ExperimentReport:
    A = _load_set(args.set)
    mode = Mode.parse(args.mode)
    if not 0 <= args.seed <= MASK64:
        raise RegimeError("seed must be an unsigned 64-bit integer")
    p = _rational_arg(args.p) if args.p is not None else None
    delta = _rational_arg(args.delta) if args.delta is not None else None
    try:
        params = SamplingParams(p, args.seed, delta)
    except DomainError as exc:
        raise RegimeError(str(exc)) from None
    out = extract_sidon(A, args.h, args.g, mode, params)
    if args.out:
        write_atomic(args.out, serialize_set(out.subset))
    results = {
        "p": format_rational(out.params.p),
        "size": str(len(out.subset)),
        "sampled": str(out.sampled),
        "deletions": str(out.deletions),
        "passes": str(out.passes),
        "subset": _strs(out.subset),
        **_cert_fields(out.certificate),
    }
    return ExperimentReport(
        "extract", [],
        {"h": str(args.h), "g": str(args.g), "mode": mode.short, "seed": str(args.seed),
         "delta": None if delta is None else format_rational(delta)},
        results, _digest(serialize_set(A)), [str(args.seed)])


def cmd_pipeline(args: argparse.Namespace) -> ExperimentReport:
    A = _load_set(args.set)
    res = theorem_pipeline(A, args.h, args.g, seeds=args.seeds, trials=args.trials, seed=args.seed)
    best = res.best
    results = {
        "side": res.side.value,
        "source": res.source,
        "size": str(len(best.subset)),
        "input_size": str(len(A)),
        "exponent": round(res.exponent, 4),
        "exponent_note": "presentation only: log|best| / log|A|",
        "subset": _strs(best.subset),
        "p": format_rational(best.params.p),
        "best_seed": str(best.params.seed),
        "decomposition": {
            "B_size": str(len(res.decomposition.B)),
            "C_size": str(len(res.decomposition.C)),
            "E": str(res.decomposition.e_value),
            "M": str(res.decomposition.m_value),
            "objective": format_rational(res.decomposition.objective),
        },
        **_cert_fields(best.certificate),
    }
    seeds = [str((args.seed + i) & MASK64) for i in range(args.seeds)]
    return ExperimentReport(
        "pipeline", [], {"h": str(args.h), "g": str(args.g), "seeds": str(args.seeds)},
        results, _digest(serialize_set(A)), seeds)


FAMILY_PARAMS = {
    "prime_product": ("size_p", "size_q"),
    "power_sumset": ("N", "M"),
    "balog_wooley": ("M", "N"),
    "incidence_lb_one": ("N", "M"),
    "incidence_lb_two": ("N", "M", "interval"),
}


def _family_params(family: str, raw: Sequence[str]) -> dict[str, int]:
    names = FAMILY_PARAMS[family]
    params: dict[str, int] = {}
    positional = 0
    for token in raw:
        key, sep, value = token.partition("=")
        if not sep:
            if positional >= len(names):
                raise RegimeError(f"too many parameters for {family}")
            key, value = names[positional], token
            positional += 1
        if key not in names:
            raise RegimeError(f"{family} takes parameters {names}, got {key!r}")
        try:
            params[key] = int(value)
        except ValueError:
            raise RegimeError(f"parameter {key} must be an integer, got {value!r}") from None
    missing = [n for n in names if n not in params and n != "interval"]
    if missing:
        raise RegimeError(f"{family} is missing parameter(s) {missing}")
    return params


def cmd_construct(args: argparse.Namespace) -> ExperimentReport:
    params = _family_params(args.family, args.params)
    built = construct(args.family, **params)
    files: dict[str, str] = {}
    extra: dict[str, Any] = {}
    if args.family in ("prime_product", "power_sumset"):
        A, P, Q = built
        files = {"A": serialize_set(A), "P": serialize_set(P), "Q": serialize_set(Q)}
        sizes = {"A": len(A), "P": len(P), "Q": len(Q)}
    elif args.family == "balog_wooley":
        files = {"A": serialize_set(built)}
        sizes = {"A": len(built)}
    else:
        X, Y = built[0], built[1]
        files = {"X": serialize_rational_set(X), "Y": serialize_rational_set(Y)}
        sizes = {"X": len(X), "Y": len(Y)}
        if args.family == "incidence_lb_two":
            extra["lambda"] = format_rational(built[2])
    written = []
    if args.out:
        for name, text in files.items():
            path = f"{args.out}_{name}.txt"
            write_atomic(path, text)
            written.append(path)
    for name, n in sizes.items():
        print(f"|{name}| = {n}", file=sys.stderr)
    results = {"sizes": [f"{k}={v}" for k, v in sizes.items()], "files": written, **extra}
    return ExperimentReport(
        "construct", [], {"family": args.family, **{k: str(v) for k, v in params.items()}},
        results, _digest(*files.values()))


def cmd_incidence(args: argparse.Namespace) -> ExperimentReport:
    X = _load_rationals(args.x)
    Y = _load_rationals(args.y)
    lam = _rational_arg(args.lam)
    if lam == 0:
        raise RegimeError("lambda must be nonzero")
    inst = IncidenceInstance(X, Y, lam)
    ratio = theorem_ratio(inst)
    results: dict[str, Any] = {
        "H": str(ratio.H),
        "bound_value": str(ratio.bound_value),
        "K": str(ratio.K),
        "in_regime": ratio.in_regime,
    }
    if args.brute:
        hb = hyperbolic_count_brute(inst)
        results["H_brute"] = str(hb)
        results["match"] = "match" if hb == ratio.H else "mismatch"
    return ExperimentReport(
        "incidence", [], {"lambda": format_rational(lam)}, results,
        _digest(serialize_rational_set(X), serialize_rational_set(Y)))


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sidonkit",
        description="Exact energies, B_h[g] verification and Sidon-subset extraction.",
        epilog="Exit codes: 0 ok, 1 mismatch, 2 input error, 3 capacity, 4 parameter regime. "
               "SIDON_BUDGET overrides every enumeration budget; SIDON_KERNEL picks numba|numpy|python.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_text: str) -> argparse.ArgumentParser:
        cols = ", ".join(CSV_COLUMNS[name])
        p = sub.add_parser(name, help=help_text, description=f"{help_text} CSV columns: {cols}.")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
        fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="CSV output")
        p.set_defaults(func=fn, fmt="json")
        return p

    mode_kw = dict(choices=["add", "mul", "additive", "multiplicative"], default="add")

    p = add("energy", cmd_energy, "Exact E_{s,k} or M_{s,k} of a set.")
    p.add_argument("--set", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", **mode_kw)

    p = add("verify", cmd_verify, "Decide whether a set is B_h[g] and certify its g.")
    p.add_argument("--set", required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--mode", **mode_kw)

    p = add("extract", cmd_extract, "Sample and delete down to a certified B_h[g] subset.")
    p.add_argument("--set", required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--mode", **mode_kw)
    p.add_argument("--seed", type=int, default=0)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--p", help="inclusion probability, e.g. 1/2")
    grp.add_argument("--delta", help="exponent offset used to derive p")
    p.add_argument("--out", help="write the extracted subset here")

    p = add("pipeline", cmd_pipeline, "Decompose, extract on both sides, report the larger subset.")
    p.add_argument("--set", required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--trials", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)

    p = add("construct", cmd_construct, "Generate one of the explicit set families.")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--out", help="output prefix; files are PREFIX_<name>.txt")
    p.add_argument("params", nargs="*", help="family parameters, positional or KEY=VALUE")

    p = add("incidence", cmd_incidence, "Count (x1-y1)(x2-y2) = lambda over X, Y.")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--brute", action="store_true", help="also run the brute-force oracle")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except RegimeError as exc:
        print(f"parameter: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.command = list(sys.argv[1:] if argv is None else argv)
    report.timing_s = time.perf_counter() - start
    sys.stdout.write(report.to_csv() if args.fmt == "csv" else report.to_json() + "\n")
    if report.results.get("match") == "mismatch":
        return EXIT_MISMATCH
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
