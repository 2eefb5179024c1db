"""Command-line front end.

Exit codes: 0 success or holds, 1 failure (property, robustness, relation or
example mismatch), 2 inconclusive, 64 usage error, 65 bad input data,
70 resolution or memo cap exceeded.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import records
from .examples import expected_table, verify_examples
from .limits import CapExceeded
from .modelfile import Model, ParseError, emit_dot, emit_model, parse_fraction, parse_model, \
    rename_states
from .properties import run_property, select
from .pts import ModelError, parallel_compose
from .relations import FAMILIES, TESTING_FAMILIES, TRACE_FAMILIES, MetricSelector, RelationQuery, \
    check_relation, check_robustness
from .testing_metrics import CyclicInteraction, TestingMetricSpec, TestSuite, testing_hemimetric
from .trace_metrics import TraceMetricSpec, trace_hemimetric

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_CAP = 64, 65, 70


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text):
    try:
        return parse_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _param(text):
    name, eq, value = text.partition("=")
    if not eq or not name.strip():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return name.strip(), _rational(value)


def _add_common(p, grid=True):
    p.add_argument("--param", type=_param, action="append", default=[], metavar="NAME=VALUE",
                   help="override a param of the model file")
    p.add_argument("--sched", choices=("det", "rand"), default="det")
    p.add_argument("--lambda", dest="lam", type=_rational, default=Fraction(1))
    p.add_argument("--json", action="store_true", help="print one JSON record per line")
    if grid:
        p.add_argument("--grid", type=_positive_int, help="grid-search dis/rand instead of the LP")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptsmetrics", description="Trace and testing distances on "
                     "nondeterministic probabilistic transition systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("trace", help="trace distance between two states")
    p.add_argument("file")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("--approach", choices=("dis", "tbt", "sup"), required=True)
    p.add_argument("--depth", type=_positive_int, default=2)
    p.add_argument("--hemi", choices=("left", "right"),
                   help="one direction only; without it the symmetric distance is printed")
    _add_common(p)

    p = sub.add_parser("test", help="testing distance between two states")
    p.add_argument("file")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("--suite", help="model file whose npt blocks form the suite "
                   "(default: the npt blocks of FILE)")
    p.add_argument("--tests", help="comma-separated subset of test names")
    p.add_argument("--omega", help="file with 'omega TEST = VALUE' lines")
    p.add_argument("--approach", choices=("may", "must", "mm", "tbt", "sup"), required=True)
    p.add_argument("--depth", type=_positive_int,
                   help="trace depth for tbt/sup (default: depth of the interaction)")
    p.add_argument("--hemi", choices=("left", "right"))
    _add_common(p, grid=False)

    p = sub.add_parser("robust", help="is IMPL within EPSILON of SPEC?")
    p.add_argument("spec", metavar="SPECFILE:ROOT")
    p.add_argument("impl", metavar="IMPLFILE:ROOT")
    p.add_argument("--epsilon", type=_rational, required=True)
    p.add_argument("--family", choices=FAMILIES, default="tr-tbt")
    p.add_argument("--depth", type=_positive_int)
    p.add_argument("--suite", help="model file with the tests (testing families)")
    p.add_argument("--tests", help="comma-separated subset of test names")
    p.add_argument("--view", choices=("lower", "upper"), default="lower",
                   help="lower: h(spec, impl); upper: h(impl, spec)")
    _add_common(p)

    p = sub.add_parser("relation", help="decide a preorder or equivalence")
    p.add_argument("file")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("--rel", choices=FAMILIES, required=True)
    p.add_argument("--kind", choices=("preorder", "equivalence"), default="equivalence")
    p.add_argument("--depth", type=_positive_int)
    p.add_argument("--suite", help="model file with the tests (default: FILE)")
    p.add_argument("--tests", help="comma-separated subset of test names")
    _add_common(p)

    p = sub.add_parser("compose", help="synchronous parallel composition of two states")
    p.add_argument("file")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("-o", "--output")
    p.add_argument("--name", default="composed")
    p.add_argument("--param", type=_param, action="append", default=[], metavar="NAME=VALUE")

    p = sub.add_parser("properties", help="run randomized property suites")
    p.add_argument("--suite", default="all", help="'all', a group, a property name or prefix")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("examples", help="list or verify the bundled examples")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("dot", help="Graphviz rendering of a model file")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--param", type=_param, action="append", default=[], metavar="NAME=VALUE")
    return parser


# --- helpers -------------------------------------------------------------------

def _load(path, params=()) -> Model:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}")
    try:
        return parse_model(text, dict(params))
    except ParseError as exc:
        raise DataError(f"{path}: {exc}")


def _state(model: Model, ref, path="model"):
    try:
        return model.find_state(ref)
    except KeyError as exc:
        raise DataError(f"{path}: {exc.args[0]}")


def _split_ref(text):
    """``file:root`` where root may itself be ``block:state``."""
    for i, ch in enumerate(text):
        if ch == ":" and Path(text[:i]).is_file():
            return text[:i], text[i + 1:]
    raise UsageError(f"expected FILE:ROOT with an existing file, got {text!r}")


def _suite(args, model: Model, default_path) -> TestSuite:
    source = _load(args.suite, args.param) if args.suite else model
    tests = {o.name: o for o in source.tests()}
    if getattr(args, "tests", None):
        names = [n.strip() for n in args.tests.split(",") if n.strip()]
        missing = [n for n in names if n not in tests]
        if missing:
            raise DataError(f"unknown test(s): {', '.join(missing)}")
        tests = {n: tests[n] for n in names}
    if not tests:
        raise DataError(f"no npt blocks found in {args.suite or default_path}")
    omega = {n: w for n, w in source.omega.items() if n in tests}
    if getattr(args, "omega", None):
        extra = _load(args.omega, args.param).omega
        omega.update({n: w for n, w in extra.items() if n in tests})
    return TestSuite(tests, omega)


def _emit(args, record, out):
    out.write((records.dumps(record) if args.json else records.human(record)) + "\n")


def _direction(args):
    return args.hemi or "symmetric"


# --- subcommands ---------------------------------------------------------------

def cmd_trace(args, out):
    model = _load(args.file, args.param)
    p, s = _state(model, args.s, args.file)
    p_t, t = _state(model, args.t, args.file)
    try:
        spec = TraceMetricSpec(args.approach, args.sched, args.lam, args.depth,
                               _direction(args), args.grid)
    except ValueError as exc:
        raise UsageError(str(exc))
    result = trace_hemimetric(p, s, t, spec, p_t)
    _emit(args, records.metric_record(result, left=args.s, right=args.t), out)
    return EXIT_OK


def cmd_test(args, out):
    model = _load(args.file, args.param)
    p, s = _state(model, args.s, args.file)
    p_t, t = _state(model, args.t, args.file)
    try:
        spec = TestingMetricSpec(args.approach, args.sched, args.lam, args.depth, _direction(args))
    except ValueError as exc:
        raise UsageError(str(exc))
    suite = _suite(args, model, args.file)
    result = testing_hemimetric(p, s, t, suite, spec, p_t)
    _emit(args, records.metric_record(result, left=args.s, right=args.t), out)
    return EXIT_OK


def _selector(args, family, suite_model=None, default_path=None):
    if args.grid is not None and (family != "tr-dis" or args.sched != "rand"):
        raise UsageError("--grid only applies to tr-dis with --sched rand")
    suite = None
    if family in TESTING_FAMILIES:
        suite = _suite(args, suite_model, default_path)
    depth = args.depth
    if depth is None and family not in TESTING_FAMILIES:
        depth = 2
    try:
        selector = MetricSelector(family, args.sched, args.lam, depth, suite, args.grid)
        if family in TESTING_FAMILIES:
            TestingMetricSpec(TESTING_FAMILIES[family], args.sched, args.lam, depth)
        else:
            TraceMetricSpec(TRACE_FAMILIES[family], args.sched, args.lam, depth, "left", args.grid)
    except ValueError as exc:
        raise UsageError(str(exc))
    return selector


def cmd_robust(args, out):
    spec_path, spec_ref = _split_ref(args.spec)
    impl_path, impl_ref = _split_ref(args.impl)
    spec_model = _load(spec_path, args.param)
    impl_model = _load(impl_path, args.param)
    sp, s = _state(spec_model, spec_ref, spec_path)
    ip, i = _state(impl_model, impl_ref, impl_path)
    selector = _selector(args, args.family, spec_model, spec_path)
    verdict = check_robustness(sp, s, ip, i, args.epsilon, selector, args.view)
    _emit(args, records.verdict_record(verdict, spec_root=args.spec, impl_root=args.impl), out)
    return {"holds": EXIT_OK, "fails": EXIT_FAIL}.get(verdict.status, EXIT_INCONCLUSIVE)


def cmd_relation(args, out):
    model = _load(args.file, args.param)
    p, s = _state(model, args.s, args.file)
    p_t, t = _state(model, args.t, args.file)
    selector = _selector(args, args.rel, model, args.file)
    outcome = check_relation(p, s, t, RelationQuery(args.kind, selector), p_t)
    name = f"{args.rel}-{args.sched}-{args.kind}"
    _emit(args, records.relation_record(outcome, name, left=args.s, right=args.t), out)
    return EXIT_OK if outcome.holds else EXIT_FAIL


def cmd_compose(args, out):
    model = _load(args.file, args.param)
    p1, a = _state(model, args.p, args.file)
    p2, b = _state(model, args.q, args.file)
    comp = rename_states(parallel_compose(p1, p2, roots=[(a, b)]), args.name)
    text = emit_model(Model(systems={comp.name: comp}))
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_properties(args, out):
    try:
        props = select(args.suite)
    except KeyError as exc:
        raise UsageError(exc.args[0])
    failed = False
    for prop in props:
        report = run_property(prop, args.trials, args.seed)
        failed |= not report.ok
        if args.json:
            out.write(records.dumps({
                "kind": "property", "name": report.name, "ok": report.ok,
                "trials": report.trials, "passed": report.passed, "failed": report.failed,
                "skipped": report.skipped, "expect_failure": report.expect_failure,
                "seed": args.seed,
                "counterexamples": [{"seed": s, "message": m, "model": t}
                                    for s, m, t in report.counterexamples]}) + "\n")
            continue
        status = "ok" if report.ok else "FAILED"
        out.write(f"{report.name:45s} {status:6s} passed={report.passed} "
                  f"failed={report.failed} skipped={report.skipped}\n")
        for seed, message, text in report.counterexamples:
            out.write(f"  counterexample (seed {seed}): {message}\n")
            out.write("".join(f"    {line}\n" for line in text.splitlines()))
    return EXIT_FAIL if failed else EXIT_OK


def cmd_examples(args, out):
    outcomes = verify_examples() if args.verify else None
    if outcomes is None:
        for entry in expected_table():
            out.write(f"{entry['id']}: expected {entry['expected']}\n")
        return EXIT_OK
    bad = 0
    for o in outcomes:
        bad += not o.ok
        if args.json:
            out.write(records.dumps(records.metric_record(
                o.result, kind="example", id=o.id, expected=o.entry["expected"], ok=o.ok,
                reference=o.entry.get("reference"))) + "\n")
            continue
        line = f"{'ok  ' if o.ok else 'FAIL'} {o.id}: got {records.fraction_str(o.result.value)}"
        if not o.ok:
            line += f", expected {o.entry['expected']}"
        if o.reference_differs:
            line += f" (reference value {o.entry['reference']})"
        out.write(line + "\n")
    if not args.json:
        out.write(f"{len(outcomes) - bad}/{len(outcomes)} examples match\n")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_dot(args, out):
    text = emit_dot(_load(args.file, args.param))
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


COMMANDS = {"trace": cmd_trace, "test": cmd_test, "robust": cmd_robust,
            "relation": cmd_relation, "compose": cmd_compose, "properties": cmd_properties,
            "examples": cmd_examples, "dot": cmd_dot}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"ptsmetrics: usage error: {exc}\n")
        return EXIT_USAGE
    except (DataError, ModelError, CyclicInteraction) as exc:
        sys.stderr.write(f"ptsmetrics: {exc}\n")
        return EXIT_DATA
    except CapExceeded as exc:
        sys.stderr.write(f"ptsmetrics: {exc}\n")
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
