"""Command-line front end: ``qcost optimize|cost|check|templates|bench``.

Exit codes: 0 success, 1 not equivalent / bench mismatch / invalid template,
2 unreadable or malformed input, 3 a pass broke equivalence, 4 the
simulation oracle is too small for the circuit.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .circuit import Circuit, Mode, circuit_permutation, equivalent
from .costing import pipeline_report, quantum_cost, report
from .errors import InvalidTemplate, OracleTooLarge, ParseError, QCostError, RoleMismatch, VerificationError
from .formats import parse_circuit, write_circuit, write_report
from .optimizer import PassOptions, pipeline
from .templates import builtin_set, format_template, load_templates, validate

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_VERIFY = 3
EXIT_ORACLE = 4


def _read_circuit(path: str) -> Circuit:
    return parse_circuit(Path(path).read_text(encoding="utf-8"))


def _store(extra: str | None):
    store = builtin_set("MIXED")
    if extra:
        store += load_templates(Path(extra).read_text(encoding="utf-8"))
    return store


def _options(args) -> PassOptions:
    return PassOptions(
        skip_pre_optimization=args.skip_pre_opt,
        max_iterations=args.max_iters,
        move_window=args.move_window,
        verify_each_pass=not args.no_verify,
    )


def _fail(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# --------------------------------------------------------------------------
# optimize


@dataclass(frozen=True)
class _Job:
    src: str
    out: str
    report: str
    extra_templates: str | None
    opts: PassOptions


def _optimize_one(job: _Job) -> tuple[int, str]:
    """Run one file; returns (exit code, summary text). Safe to run in a worker."""
    try:
        c = _read_circuit(job.src)
        store = _store(job.extra_templates)
        out, trace = pipeline(c, store, job.opts)
    except (OSError, ParseError, InvalidTemplate) as exc:
        return EXIT_INPUT, f"{job.src}: error: {exc}"
    except VerificationError as exc:
        return EXIT_VERIFY, f"{job.src}: error: {exc}"
    except OracleTooLarge as exc:
        return EXIT_ORACLE, f"{job.src}: error: {exc}"
    rep = pipeline_report(out, trace, job.opts.move_window)
    Path(job.out).write_text(write_circuit(out, allow_merged=True), encoding="utf-8")
    Path(job.report).write_text(write_report(rep, trace), encoding="utf-8")
    lines = [
        f"{job.src}:",
        f"  raw quantum_cost {quantum_cost(c, job.opts.move_window)}",
        f"  optimized quantum_cost {rep.quantum_cost}",
        f"  total_cost {rep.total_cost}",
    ]
    return EXIT_OK, "\n".join(lines)


def _jobs(args) -> list[_Job]:
    opts = _options(args)
    single = len(args.inputs) == 1
    if not single and (args.output or args.report):
        raise ValueError("--output/--report need a single input; use --out-dir for batches")
    jobs = []
    for src in args.inputs:
        p = Path(src)
        folder = Path(args.out_dir) if args.out_dir else p.parent
        out = args.output if single and args.output else str(folder / f"{p.stem}.opt.real")
        rep = args.report if single and args.report else str(folder / f"{p.stem}.report.json")
        jobs.append(_Job(src, out, rep, args.templates, opts))
    return jobs


def cmd_optimize(args) -> int:
    try:
        jobs = _jobs(args)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    if args.out_dir:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_optimize_one, jobs))
    else:
        results = [_optimize_one(j) for j in jobs]
    worst = EXIT_OK
    for code, text in results:
        print(text, file=sys.stdout if code == EXIT_OK else sys.stderr)
        worst = max(worst, code)
    return worst


# --------------------------------------------------------------------------
# cost / check / templates


def cmd_cost(args) -> int:
    try:
        c = _read_circuit(args.input)
    except (OSError, ParseError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    rep = report(c, args.move_window)
    print(write_report(rep), end="")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        a, b = _read_circuit(args.a), _read_circuit(args.b)
    except (OSError, ParseError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    try:
        same = equivalent(a, b, Mode(args.mode))
    except OracleTooLarge as exc:
        return _fail(str(exc), EXIT_ORACLE)
    except RoleMismatch as exc:
        return _fail(f"circuits are not comparable: {exc}", EXIT_INPUT)
    print("equivalent" if same else "not equivalent")
    return EXIT_OK if same else EXIT_MISMATCH


def cmd_templates(args) -> int:
    try:
        if args.file:
            store = load_templates(Path(args.file).read_text(encoding="utf-8"))
        else:
            store = builtin_set(args.library)
    except InvalidTemplate as exc:
        return _fail(f"template {exc.template_id} is not an identity", EXIT_MISMATCH)
    except (OSError, ParseError, QCostError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    bad = 0
    for t in store:
        ok = validate(t)
        bad += not ok
        print(f"{t.id:<28} arity {t.arity}  gates {len(t):>2}  {'ok' if ok else 'NOT IDENTITY'}")
        if args.show:
            print(format_template(t))
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


# --------------------------------------------------------------------------
# bench


@dataclass(frozen=True)
class BenchCase:
    name: str
    fixture: str
    expected: int
    at_most: bool = False  # lower values also pass
    optimize: bool = True
    skip_pre_opt: bool = False


BENCH = (
    BenchCase("fredkin", "fredkin_nct.real", 5),
    BenchCase("fredkin-no-preopt", "fredkin_nct.real", 11, at_most=True, skip_pre_opt=True),
    BenchCase("3_17", "3_17.real", 7, at_most=True),
    BenchCase("toffoli", "toffoli.real", 5, optimize=False),
    BenchCase("peres", "peres.real", 4, optimize=False),
    BenchCase("swap", "swap_cnots.real", 1, optimize=False),
)


def _fixture_text(name: str, folder: str | None) -> str:
    if folder:
        return (Path(folder) / name).read_text(encoding="utf-8")
    return resources.files("qcost.data.fixtures").joinpath(name).read_text(encoding="utf-8")


def run_case(case: BenchCase, folder: str | None = None) -> tuple[int | None, bool, str]:
    """Returns (cost, passed, note)."""
    c = parse_circuit(_fixture_text(case.fixture, folder))
    if not case.optimize:
        cost = quantum_cost(c)
        return cost, cost == case.expected, ""
    out, _ = pipeline(c, builtin_set("MIXED"), PassOptions(skip_pre_optimization=case.skip_pre_opt))
    cost = quantum_cost(out)
    if not equivalent(c, out, Mode.FULL):
        return cost, False, "not equivalent"
    if c.is_classical() and out.is_classical() and circuit_permutation(c) != circuit_permutation(out):
        return cost, False, "permutation changed"
    ok = cost <= case.expected if case.at_most else cost == case.expected
    return cost, ok, ""


def cmd_bench(args) -> int:
    print(f"{'name':<20} {'expected':>9} {'got':>5}  status")
    failed = 0
    for case in BENCH:
        try:
            got, ok, note = run_case(case, args.fixtures)
        except (OSError, QCostError) as exc:
            got, ok, note = None, False, str(exc)
        failed += not ok
        want = f"<={case.expected}" if case.at_most else str(case.expected)
        status = "pass" if ok else "FAIL"
        print(f"{case.name:<20} {want:>9} {'-' if got is None else got:>5}  {status} {note}".rstrip())
    return EXIT_OK if failed == 0 else EXIT_MISMATCH


# --------------------------------------------------------------------------


def _add_pass_flags(p: argparse.ArgumentParser):
    d = PassOptions()
    p.add_argument("--skip-pre-opt", action="store_true", help="skip reversible-level pre-optimisation")
    p.add_argument("--max-iters", type=_positive, default=d.max_iterations)
    p.add_argument("--move-window", type=_non_negative, default=d.move_window)
    p.add_argument("--templates", metavar="FILE", help="extra template file")
    p.add_argument("--no-verify", action="store_true", help="skip per-pass equivalence checks")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _non_negative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcost", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="minimise quantum cost of one or more circuit files")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output", help="optimised circuit (single input only)")
    p.add_argument("--report", metavar="PATH", help="JSON report (single input only)")
    p.add_argument("--out-dir", help="folder for outputs of a batch")
    p.add_argument("-j", "--jobs", type=_positive, default=1, help="files optimised in parallel")
    _add_pass_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("cost", help="raw cost report (decompose and merge only)")
    p.add_argument("input")
    p.add_argument("--move-window", type=_non_negative, default=PassOptions.move_window)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("check", help="equivalence of two circuit files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.FULL.value)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("templates", help="list and validate templates")
    p.add_argument("--library", default="MIXED", choices=["NCT", "NCV", "MIXED"])
    p.add_argument("--file", help="validate this template file instead of the built-ins")
    p.add_argument("--show", action="store_true", help="print template bodies")
    p.set_defaults(func=cmd_templates)

    p = sub.add_parser("bench", help="reproduce the reference costs on shipped fixtures")
    p.add_argument("--fixtures", help="folder overriding the shipped fixture files")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
