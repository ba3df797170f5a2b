"""Command-line interface: ``activerank {generate,rank,benchmark,diagnose}``.

Exit codes: 0 success, 1 I/O failure, 2 usage or validation error,
3 algorithm failure (an item could not be inserted).
JSON and CSV results go to stdout (or ``-o``); messages go to stderr.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile

from . import __version__
from .diagnostics import gap_profile, lower_bound_eq1, lower_bound_eq2
from .errors import ActiveRankError, InvalidInstance, ScheduleExhausted
from .harness import PHASE_INSTANCE, PHASE_TRIAL, FAMILY_CODES, TrialSpec, run_sweep, stream, write_csv
from .instance import ComparisonOracle, Family, Instance, NoiselessOracle, generate_instance, instance_to_json
from .listwise import MergeCounter, listwise_merge_sort
from .ranking import DEFAULT_SCHEDULE_CAP, iir

EXIT_IO = 1
EXIT_USAGE = 2
EXIT_ALGORITHM = 3


class CliIOError(Exception):
    pass


def _sweep(text: str) -> list[int]:
    try:
        ns = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid sweep list {text!r}") from None
    if not ns:
        raise argparse.ArgumentTypeError("sweep list is empty")
    return ns


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="activerank", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="draw an instance and write it as JSON")
    g.add_argument("--family", required=True, choices=[f.value for f in Family])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--delta", type=float, help="gap for the homo and random families")
    g.add_argument("--seed", type=_seed, required=True)
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(handler=cmd_generate, subparser=g)

    r = sub.add_parser("rank", help="rank the items of an instance file")
    r.add_argument("--instance", required=True, help="instance JSON path, or - for stdin")
    r.add_argument("--confidence", type=float, default=0.01, help="failure probability delta")
    r.add_argument("--algorithm", choices=["iir", "lwms"], default="iir")
    r.add_argument("--m", type=int, default=2, help="comparison width for lwms")
    r.add_argument("--noiseless", action="store_true", help="answer every comparison correctly")
    r.add_argument("--schedule-cap", type=int, default=DEFAULT_SCHEDULE_CAP)
    r.add_argument("--seed", type=_seed, required=True)
    r.add_argument("-o", "--output", default="-")
    r.set_defaults(handler=cmd_rank, subparser=r)

    b = sub.add_parser("benchmark", help="Monte-Carlo sweep over n, written as CSV")
    b.add_argument("--family", required=True, choices=[f.value for f in Family])
    b.add_argument("--sweep", type=_sweep, required=True, help="comma-separated item counts")
    b.add_argument("--delta", type=float)
    b.add_argument("--confidence", type=float, default=0.01)
    b.add_argument("--algorithm", choices=["iir", "lwms"], default="iir")
    b.add_argument("--m", type=int, default=2)
    b.add_argument("--trials", type=int, default=100)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--seed", type=_seed, required=True)
    b.add_argument("-o", "--output", default="-")
    b.set_defaults(handler=cmd_benchmark, subparser=b)

    d = sub.add_parser("diagnose", help="gap profile, transitivity flags and lower bounds")
    d.add_argument("--instance", required=True)
    d.add_argument("--confidence", type=float, default=0.01)
    d.add_argument("-o", "--output", default="-")
    d.set_defaults(handler=cmd_diagnose, subparser=d)
    return parser


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliIOError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    tmp = None
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".activerank-")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if tmp is not None and os.path.exists(tmp):
            os.unlink(tmp)
        raise CliIOError(f"cannot write {path}: {exc.strerror}") from None


def _load_instance(path: str) -> tuple[Instance, bool]:
    text = _read(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliIOError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidInstance("instance document must be a JSON object")
    return Instance.from_dict(doc), doc.get("true_ranking") is not None


def _check_confidence(parser, value):
    if not 0.0 < value < 1.0:
        parser.error(f"--confidence must lie in (0, 1), got {value}")


def cmd_generate(args, parser) -> None:
    if args.family != Family.MNL.value and args.delta is None:
        parser.error(f"--delta is required for the {args.family} family")
    rng = stream(args.seed, PHASE_INSTANCE, FAMILY_CODES[Family(args.family)], max(args.n, 0))
    prov = f"seed={args.seed} family={args.family} n={args.n}"
    if args.delta is not None and args.family != Family.MNL.value:
        prov += f" delta={args.delta!r}"
    inst = generate_instance(args.family, args.n, args.delta, rng, seed_provenance=prov)
    _write(args.output, instance_to_json(inst))


def cmd_rank(args, parser) -> None:
    _check_confidence(parser, args.confidence)
    if args.algorithm == "lwms" and args.m < 2:
        parser.error("--m must be at least 2")
    if args.schedule_cap < 1:
        parser.error("--schedule-cap must be positive")
    inst, has_truth = _load_instance(args.instance)
    if args.noiseless and not has_truth:
        parser.error("--noiseless needs an instance file that carries true_ranking")
    if args.algorithm == "lwms" and args.m > 2 and not (args.noiseless or inst.supports_listwise):
        parser.error(f"a {inst.kind} instance cannot answer {args.m}-wise comparisons")
    rng = stream(args.seed, PHASE_TRIAL)
    oracle = NoiselessOracle(inst) if args.noiseless else ComparisonOracle(inst, rng)
    if args.algorithm == "iir":
        outcome = iir(oracle, inst.n, args.confidence, rng if args.noiseless else None,
                      schedule_cap=args.schedule_cap)
        ranking, used = list(outcome.ranking), outcome.comparisons_used
    else:
        counter = MergeCounter()
        ranking = listwise_merge_sort(oracle, range(1, inst.n + 1), args.m, counter)
        used = counter.listwise_comparisons
    result = {"ranking": ranking, "comparisons": used}
    if has_truth:
        result["correct"] = tuple(ranking) == inst.true_ranking
    _write(args.output, json.dumps(result) + "\n")


def cmd_benchmark(args, parser) -> None:
    _check_confidence(parser, args.confidence)
    if args.family != Family.MNL.value and args.delta is None:
        parser.error(f"--delta is required for the {args.family} family")
    if args.workers < 1:
        parser.error("--workers must be positive")
    spec = TrialSpec(args.family, args.sweep[0], args.delta, args.confidence, args.algorithm,
                     args.m, args.trials, args.seed)
    reports = run_sweep(spec, args.sweep, workers=args.workers)
    buf = io.StringIO()
    write_csv(reports, buf)
    _write(args.output, buf.getvalue())
    for rep in reports:
        failed = [r for r in rep.records if r.error]
        if failed:
            print(f"n={rep.spec.n}: {len(failed)} trial(s) failed: {failed[0].error}", file=sys.stderr)


def _finite(values) -> list:
    return [float(v) if math.isfinite(v) else None for v in values]


def cmd_diagnose(args, parser) -> None:
    _check_confidence(parser, args.confidence)
    inst, _ = _load_instance(args.instance)
    prof = gap_profile(inst)
    result = {
        "n": inst.n,
        "confidence": args.confidence,
        "delta_i": _finite(prof.delta_i),
        "delta_tilde_i": _finite(prof.delta_tilde_i),
        "sst_holds": prof.sst_holds,
        "sti_holds": prof.sti_holds,
        "bound_eq1": lower_bound_eq1(prof, inst.n, args.confidence),
        "bound_eq2": lower_bound_eq2(prof, inst.n, args.confidence),
    }
    _write(args.output, json.dumps(result, indent=1) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = args.subparser
    try:
        args.handler(args, sub)
    except CliIOError as exc:
        print(f"activerank: {exc}", file=sys.stderr)
        return EXIT_IO
    except ScheduleExhausted as exc:
        print(f"activerank: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM
    except (ActiveRankError, ValueError) as exc:
        sub.print_usage(sys.stderr)
        print(f"activerank {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
