"""Batch front end: ``compdyn <command> --model NAME | --input FILE [options]``.

Exit codes: 0 certified, 2 refuted, 3 inconclusive, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .criteria.certificates import horizon_of
from .criteria import (
    Horizon,
    Verdict,
    VerdictKind,
    check_c3_c4,
    runaway_sweep,
    salas_mixing,
    salas_unilateral,
    search_mixing,
    search_transitivity,
)
from .dynamics import boundedness_constant, bimeasurability_probe, pullback_sigma_algebra_equals
from .errors import CompDynError
from .hypercyclic import ApproximationRequest, construct_phi
from .io import dumps, encode_number, fingerprint, system_from_json, system_to_json, to_jsonable
from .measure import AtomicSpace, SimpleFunction, h4_epsilon, to_number
from .models import ModelInstance, parse_model
from .models.disk import disk_report, parse_disk
from .models.interval import interval_analyze, parse_interval_system
from .models.odometer import rn_table

EXIT_CODES = {VerdictKind.CERTIFIED: 0, VerdictKind.REFUTED: 2, VerdictKind.INCONCLUSIVE: 3}

COMMANDS = (
    "analyze",
    "certify-transitive",
    "certify-mixing",
    "runaway-sweep",
    "hypercyclic",
    "rn-derivative",
    "disk-report",
    "interval-report",
    "export",
)


class UsageError(Exception):
    """Bad configuration; the message names the offending field."""


@dataclass
class Outcome:
    kind: VerdictKind
    report: dict
    rows: list | None = None  # CSV rows, first row is the header


def _positive(name: str, value):
    if value is not None and not value > 0:
        raise UsageError(f"--{name.replace('_', '-')} must be positive, got {value}")
    return value


def _number(text: str):
    try:
        return to_number(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compdyn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--model", help="model name, e.g. odometer:4 or shift:corollary32")
        src.add_argument("--input", help="JSON system file")
        p.add_argument("--epsilon", type=_number, default=Fraction(1, 10))
        p.add_argument("--eta", type=_number, default=Fraction(1, 2))
        p.add_argument("--p", type=_number, default=1)
        p.add_argument("--k-max", type=int, default=64)
        p.add_argument("--k0-max", type=int)
        p.add_argument("--depth", "--horizon", dest="depth", type=int, help="window size of the model")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", help="report path (default: stdout)")
        p.add_argument("--all", action="store_true", help="list every row, not only the summary")
        p.add_argument("--psi1", help="block=value,... (default: indicator of A)")
        p.add_argument("--psi2", help="block=value,... (default: indicator of A)")
    return parser


def _validate(args) -> None:
    for name in ("epsilon", "eta", "k_max", "k0_max", "depth", "tol"):
        _positive(name, getattr(args, name))
    if args.p < 1:
        raise UsageError(f"--p must be >= 1, got {args.p}")
    if args.k0_max is not None and args.k0_max > args.k_max:
        raise UsageError("--k0-max must not exceed --k-max")


def load_system(args) -> ModelInstance:
    if args.model:
        try:
            return parse_model(args.model, args.depth)
        except ValueError as exc:
            raise UsageError(f"--model: {exc}") from None
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"--input: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"--input: not valid JSON ({exc})") from None
    try:
        space, f, A = system_from_json(doc)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return ModelInstance(args.input, space, f, A)


def _parse_function(text: str, space: AtomicSpace, p, flag: str) -> SimpleFunction:
    values = {}
    for item in text.split(","):
        try:
            b, v = item.split("=")
            block, value = int(b), to_number(v)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"{flag}: expected block=value pairs, got {item!r}") from None
        if not 0 <= block < space.n_blocks:
            raise UsageError(f"{flag}: unknown block {block}")
        values[block] = value
    return SimpleFunction(values, p)


def _config(args) -> dict:
    return {
        "command": args.command,
        "epsilon": args.epsilon,
        "eta": args.eta,
        "p": args.p,
        "k_max": args.k_max,
        "k0_max": args.k0_max,
        "depth": args.depth,
        "tol": args.tol,
    }


def _report(args, model: ModelInstance | None, verdict, **extra) -> dict:
    out = {
        "model": args.model or args.input,
        "config": _config(args),
        "verdict": verdict.kind,
        "details": verdict.details,
        "horizon": verdict.horizon,
    }
    if verdict.certificate is not None:
        out["certificate"] = verdict.certificate
    if model is not None:
        out["fingerprint"] = fingerprint(model.space, model.f)
    out.update(extra)
    return out


def cmd_certify_transitive(args) -> Outcome:
    m = load_system(args)
    v = search_transitivity(m.space, m.f, args.epsilon, m.default_A, args.k_max)
    return Outcome(v.kind, _report(args, m, v))


def cmd_certify_mixing(args) -> Outcome:
    m = load_system(args)
    k0_max = args.k0_max or args.k_max
    v = search_mixing(m.space, m.f, args.epsilon, m.default_A, k0_max, args.k_max)
    status = v.details["per_k_status"]
    rows = [["k", "status"]] + [[k, s] for k, s in enumerate(status, 1)]
    return Outcome(v.kind, _report(args, m, v), rows)


def cmd_runaway_sweep(args) -> Outcome:
    m = load_system(args)
    results = runaway_sweep(m.space, m.f, args.epsilon, args.k_max)
    sweep = [
        {
            "k": r.k,
            "max_mass": r.max_mass,
            "complement_mass": r.complement_mass,
            "exact": r.exact,
            "verdict": r.kind,
        }
        for r in results
    ]
    hit = next((r for r in results if r.certificate is not None), None)
    if hit is not None:
        kind = VerdictKind.CERTIFIED
    elif results and all(r.kind is VerdictKind.REFUTED for r in results):
        kind = VerdictKind.REFUTED
    else:
        kind = VerdictKind.INCONCLUSIVE
    details = {"first_certified_k": hit.k if hit else None}
    v = Verdict(kind, horizon_of(m.space, args.k_max), details, hit.certificate if hit else None)
    rows = [["k", "max_mass", "complement_mass", "exact", "verdict"]]
    rows += [[r.k, r.max_mass, r.complement_mass, r.exact, _short(r.kind)] for r in results]
    return Outcome(kind, _report(args, m, v, sweep=sweep), rows)


def _short(kind: VerdictKind) -> str:
    return {VerdictKind.CERTIFIED: "certified", VerdictKind.REFUTED: "refuted"}.get(kind, "inconclusive")


def cmd_hypercyclic(args) -> Outcome:
    m = load_system(args)
    A = m.default_A
    A_set = A if A is not None else m.space.everything()
    p = args.p
    psi1 = _parse_function(args.psi1, m.space, p, "--psi1") if args.psi1 else SimpleFunction.indicator(A_set, p)
    psi2 = _parse_function(args.psi2, m.space, p, "--psi2") if args.psi2 else SimpleFunction.indicator(A_set, p)
    req = ApproximationRequest(psi1, psi2, args.eta, p)
    eps = min(args.epsilon, h4_epsilon(args.eta, req.M, p)) if req.M > 0 else args.epsilon
    v = search_transitivity(m.space, m.f, eps, A, args.k_max)
    extra = {"epsilon_used": eps}
    if v.certified:
        try:
            phi = construct_phi(m.space, m.f, req, v.certificate)
        except CompDynError as exc:
            v = Verdict(VerdictKind.INCONCLUSIVE, v.horizon, {**v.details, "construction_error": str(exc)})
            return Outcome(v.kind, _report(args, m, v, **extra))
        extra["phi"] = {
            "values": dict(phi.phi.values),
            "k": phi.k,
            "err1": phi.err1,
            "err2": phi.err2,
            "tail_charge": phi.tail_charge,
            "within_eta": phi.within(args.eta),
        }
        if not phi.within(args.eta):
            v = Verdict(VerdictKind.INCONCLUSIVE, v.horizon, v.details, v.certificate)
    return Outcome(v.kind, _report(args, m, v, **extra))


def cmd_rn_derivative(args) -> Outcome:
    if not args.model or not args.model.startswith("odometer:"):
        raise UsageError("--model: rn-derivative needs an odometer:m model")
    try:
        depth = int(args.model.split(":", 1)[1])
    except ValueError:
        raise UsageError(f"--model: bad odometer depth in {args.model!r}") from None
    _positive("depth", depth)
    table = rn_table(depth)
    values = [v for _, v in table]
    lo = min(values)
    rows = [["atom", "rn_derivative"]]
    chosen = table if args.all else [t for t in table if t[1] == lo]
    rows += [["-".join(map(str, x)), encode_number(v)] for x, v in chosen]
    v = Verdict(VerdictKind.CERTIFIED, Horizon(None, len(table) + 1, Fraction(0)), {"min": lo, "max": max(values), "atoms": len(table)})
    m = parse_model(args.model)
    return Outcome(v.kind, _report(args, m, v, table=[{"atom": x, "value": val} for x, val in chosen]), rows)


def cmd_disk_report(args) -> Outcome:
    if not args.model or not args.model.startswith("disk:"):
        raise UsageError("--model: disk-report needs a disk:a,theta model")
    try:
        aut = parse_disk(args.model.split(":", 1)[1])
    except ValueError as exc:
        raise UsageError(f"--model: {exc}") from None
    rep = disk_report(aut, float(args.epsilon), args.k_max)
    cls = rep["classification"]
    if not cls.transitive:
        kind = VerdictKind.REFUTED
    elif rep["k0"] is not None:
        kind = VerdictKind.CERTIFIED
    else:
        kind = VerdictKind.INCONCLUSIVE
    v = Verdict(kind, Horizon(args.k_max, None, None), rep)
    rows = [["k", "pullback_mass", "push_mass"]]
    rows += [[k, a, b] for k, (a, b) in enumerate(zip(rep["pullback_mass"], rep["push_mass"]), 1)]
    return Outcome(kind, _report(args, None, v), rows)


def cmd_interval_report(args) -> Outcome:
    if not args.model or not args.model.startswith("interval:"):
        raise UsageError("--model: interval-report needs an interval:<spec> model")
    try:
        system = parse_interval_system(args.model.split(":", 1)[1])
    except ValueError as exc:
        raise UsageError(f"--model: {exc}") from None
    rep = interval_analyze(system, args.k_max, args.tol)
    if rep.verdict in ("E1", "dissipative"):
        kind = VerdictKind.CERTIFIED
    elif rep.verdict == "E2":
        kind = VerdictKind.REFUTED
    else:
        kind = VerdictKind.INCONCLUSIVE
    v = Verdict(kind, Horizon(args.k_max, None, None), {"analysis": rep})
    rows = [["k", "image_mass"]] + [[k, _csv_value(x)] for k, x in enumerate(rep.image_masses)]
    return Outcome(kind, _report(args, None, v), rows)


def cmd_analyze(args) -> Outcome:
    m = load_system(args)
    space, f, A = m.space, m.f, m.default_A
    transitive = search_transitivity(space, f, args.epsilon, A, args.k_max)
    k0_max = args.k0_max or args.k_max
    mixing = search_mixing(space, f, args.epsilon, A, k0_max, args.k_max)
    facts = {
        "boundedness": boundedness_constant(space, f, args.p),
        "pullback": pullback_sigma_algebra_equals(space, f),
        "bimeasurability_probe": bimeasurability_probe(space, f),
        "transitivity": {"verdict": transitive.kind, "details": transitive.details},
        "mixing": {"verdict": mixing.kind, "details": mixing.details},
    }
    if space.is_finite:
        facts["liminf_runaway"] = check_c3_c4(space, f, args.epsilon, args.k_max, args.tol)
    if args.model and args.model.startswith("shift:"):
        facts["weight_patterns"] = {
            "liminf": salas_unilateral(space.weights),
            "limit": salas_mixing(space.weights),
        }
    return Outcome(transitive.kind, _report(args, m, transitive, analysis=facts))


def cmd_export(args) -> Outcome:
    """The model as a generic JSON system, suitable for ``--input``."""
    m = load_system(args)
    return Outcome(VerdictKind.CERTIFIED, system_to_json(m.space, m.f, m.default_A))


HANDLERS = {
    "analyze": cmd_analyze,
    "certify-transitive": cmd_certify_transitive,
    "certify-mixing": cmd_certify_mixing,
    "runaway-sweep": cmd_runaway_sweep,
    "hypercyclic": cmd_hypercyclic,
    "rn-derivative": cmd_rn_derivative,
    "disk-report": cmd_disk_report,
    "interval-report": cmd_interval_report,
    "export": cmd_export,
}


def _csv_value(x):
    v = to_jsonable(x)
    return json.dumps(v) if isinstance(v, (list, dict)) else v


def render(outcome: Outcome, fmt: str) -> str:
    if fmt == "json" or outcome.rows is None:
        return dumps(outcome.report)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in outcome.rows:
        writer.writerow([_csv_value(x) for x in row])
    return buf.getvalue()


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        outcome = HANDLERS[args.command](args)
        text = render(outcome, args.format)
    except (UsageError, CompDynError, ValueError) as exc:
        print(f"compdyn: error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_CODES[outcome.kind]


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
