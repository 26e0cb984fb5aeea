"""Command-line surface for instance generation, separator queries, union
reports, kernelization, exact solving and corpus-scale validation.

Exit codes: 0 success (including REDUCED), 10 YES, 11 NO or failed checks,
1 usage/input error, 2 internal failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import checks, reports
from .families import (
    FamilyOrderError,
    ImportantSeparatorFamily,
    check_axioms,
    counting_audit,
    enumerate_principal,
    parse_family_text,
)
from .graph import (
    MwcInstance,
    ParseError,
    SeparatorInstance,
    generate_lowerbound,
    generate_random,
    load_any,
    parse_instance,
    serialize_instance,
    serialize_separator_instance,
)
from .kernelizer import (
    ExactProvider,
    GreedyProvider,
    PipelineError,
    kernelize,
    solve_exact,
)
from .oracle import OracleBudget, OracleBudgetError
from .separators import min_separator, smallest_important_separator

EXIT_OK = 0
EXIT_YES = 10
EXIT_NO = 11
EXIT_USAGE = 1
EXIT_INTERNAL = 2

# brute-force comparisons refuse anything larger than this
ORACLE_N_LIMIT = 16


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(lines, output: str | None) -> None:
    text = "\n".join(lines)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    print(text)


def _figure_target(args, suffix: str = "") -> str | None:
    """Explicit --figure wins; otherwise a written report gets a PNG sibling."""
    if getattr(args, "figure", None):
        return args.figure
    if getattr(args, "output", None):
        return str(Path(args.output + suffix).with_suffix(".png"))
    return None


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_sep(path: str) -> SeparatorInstance:
    inst = load_any(_read(path))
    if isinstance(inst, SeparatorInstance):
        return inst
    if len(inst.terminals) != 2:
        raise ParseError(1, "need a separation instance or exactly two terminals")
    a, b = sorted(inst.terminals)
    return SeparatorInstance(inst.graph, frozenset({a}), frozenset({b}))


def cmd_gen(args) -> int:
    if args.kind == "lowerbound":
        si = generate_lowerbound(args.r, args.x)
        if args.mwc:
            inst = MwcInstance(si.graph, si.sources | si.sinks, args.k)
            text = serialize_instance(inst)
        else:
            text = serialize_separator_instance(si)
    else:
        inst = generate_random(args.n, args.p, args.t, args.seed, k=args.k)
        text = serialize_instance(inst)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_min_sep(args) -> int:
    si = _load_sep(args.input)
    sep = min_separator(si)
    if sep is None:
        print("feasible=false")
        return EXIT_NO
    print("feasible=true")
    print(f"size={sep.size}")
    print(f"separator={' '.join(map(str, sorted(sep.vertices)))}")
    return EXIT_OK


def cmd_important_sm(args) -> int:
    si = _load_sep(args.input)
    sep = smallest_important_separator(si)
    if sep is None:
        print("feasible=false")
        return EXIT_NO
    print("feasible=true")
    print(f"size={sep.size}")
    print(f"separator={' '.join(map(str, sorted(sep.vertices)))}")
    print(f"source_side={' '.join(map(str, sorted(sep.source_side)))}")
    return EXIT_OK


def _principal_report(args):
    """Report or an infeasibility message; bad input files raise instead."""
    si = _load_sep(args.input)
    try:
        fam = ImportantSeparatorFamily(si)
    except ValueError as exc:
        return None, str(exc)
    return enumerate_principal(fam, args.x), None


def cmd_union(args) -> int:
    report, problem = _principal_report(args)
    if report is None:
        print(f"error={problem}")
        return EXIT_NO
    lines = reports.principal_summary_lines(report)
    _emit(lines, args.output)
    target = _figure_target(args)
    if target:
        reports.render_principal_figure(report, target)
    return EXIT_OK


def cmd_principal(args) -> int:
    report, problem = _principal_report(args)
    if report is None:
        print(f"error={problem}")
        return EXIT_NO
    lines = reports.principal_set_lines(report) + reports.principal_summary_lines(report)
    _emit(lines, args.output)
    target = _figure_target(args)
    if target:
        reports.render_principal_figure(report, target)
    return EXIT_OK


def cmd_kernelize(args) -> int:
    inst = parse_instance(_read(args.input))
    provider = GreedyProvider() if args.provider == "greedy" else ExactProvider()
    outcome = kernelize(inst, provider, jobs=args.jobs)
    lines = reports.kernel_report_lines(outcome, inst)
    if args.output:
        reports.write_report(f"{args.output}.report.txt", lines)
        if outcome.verdict == "reduced":
            Path(f"{args.output}.mwc").write_text(
                serialize_instance(outcome.result.reduced), encoding="utf-8"
            )
    print("\n".join(lines))
    target = _figure_target(args)
    if target:
        reports.render_kernel_figure(outcome, inst, target)
    if outcome.verdict == "yes":
        return EXIT_YES
    if outcome.verdict == "no":
        return EXIT_NO
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.input))
    budget = inst.k if args.budget is None else args.budget
    cut = solve_exact(inst, budget)
    if cut is None:
        print("answer=no")
        print(f"budget={budget}")
        return EXIT_NO
    print("answer=yes")
    print(f"budget={budget}")
    print(f"cut_size={len(cut)}")
    print(f"cut={' '.join(map(str, sorted(cut)))}")
    return EXIT_YES


def _run_corpus_checks(args, *, full_family: bool) -> tuple[list, list[str]]:
    instances = checks.separator_corpus(args.corpus, args.n, args.seed, args.x)
    tasks = [
        (
            i,
            serialize_separator_instance(si),
            args.x,
            ORACLE_N_LIMIT,
            full_family,
        )
        for i, si in enumerate(instances)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(checks.separator_check_task, tasks))
    else:
        results = [checks.separator_check_task(t) for t in tasks]
    lines = [reports.separator_check_line(i, chk) for i, chk in results]
    return results, lines


def cmd_check(args) -> int:
    if args.input:
        text = _read(args.input)
        first = next(
            (ln for ln in text.splitlines() if ln.strip() and not ln.startswith("c")),
            "",
        )
        if first.startswith("p family"):
            fam = parse_family_text(text)
            report = check_axioms(fam)
            lines = reports.axiom_summary_lines(report)
            if len(fam) and fam.smallest_index() is not None:
                max_ex = max(fam.excess(i) for i in range(len(fam)))
                lines += reports.audit_summary_lines(counting_audit(fam, max_ex))
            _emit(lines, args.output)
            return EXIT_OK if report.passed else EXIT_NO
        si = _load_sep(args.input)
        chk = checks.run_separator_check(
            si, args.x, OracleBudget(max_n=ORACLE_N_LIMIT), full_family=True
        )
        if chk is None:
            print("degenerate=true")
            return EXIT_NO
        lines = reports.axiom_summary_lines(chk.axiom_report)
        lines.append(f"r={chk.r}")
        lines.append(f"union_size={chk.union_sizes[-1]}")
        lines.append(f"union_bound={chk.union_bounds[-1]}")
        lines.append(f"principal_match={'true' if chk.principal_match else 'false'}")
        lines.append(f"union_match={'true' if chk.union_match else 'false'}")
        lines.extend(f"failure: {d}" for d in chk.details)
        _emit(lines, args.output)
        return EXIT_OK if chk.passed else EXIT_NO

    results, lines = _run_corpus_checks(args, full_family=True)
    failures = [(i, chk) for i, chk in results if not chk.passed]
    axiom_total = sum(len(chk.axiom_report.checks) for _, chk in results)
    axiom_pass = sum(
        sum(1 for c in chk.axiom_report.checks if c.passed) for _, chk in results
    )
    lines.append(f"instances={len(results)}")
    lines.append(f"axioms_passed={axiom_pass}/{axiom_total}")
    lines.append(f"failures={len(failures)}")
    for i, chk in failures[:10]:
        for d in chk.details[:3]:
            lines.append(f"failure instance={i}: {d}")
    _emit(lines, args.output)
    target = _figure_target(args)
    if target:
        rows = [(chk.union_sizes[-1], chk.union_bounds[-1]) for _, chk in results]
        reports.render_union_scatter(rows, target)
    return EXIT_OK if not failures else EXIT_NO


def cmd_oracle_compare(args) -> int:
    results, lines = _run_corpus_checks(args, full_family=False)
    agreement = {
        "smallest": all(chk.smallest_match for _, chk in results),
        "importance": all(chk.importance_match for _, chk in results),
        "witness": all(chk.witness_match for _, chk in results),
        "enumeration": all(chk.enumeration_match for _, chk in results),
        "principal": all(chk.principal_match for _, chk in results),
        "union": all(chk.union_match for _, chk in results),
        "mass": all(chk.mass_match for _, chk in results),
    }
    failures = [i for i, chk in results if not chk.passed]
    lines.append(f"instances={len(results)}")
    for name, ok in agreement.items():
        lines.append(f"{name}_agree={'true' if ok else 'false'}")
    lines.append(f"failures={len(failures)}")
    _emit(lines, args.output)
    return EXIT_OK if not failures else EXIT_NO


def build_parser() -> _Parser:
    parser = _Parser(prog="mwckernel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate instances")
    gensub = p.add_subparsers(dest="kind", required=True)
    lb = gensub.add_parser("lowerbound", help="source/sink pair joined by binary trees")
    lb.add_argument("--r", type=int, required=True, help="number of trees")
    lb.add_argument("--x", type=int, required=True, help="tree height")
    lb.add_argument("--mwc", action="store_true", help="emit a multiway-cut instance")
    lb.add_argument("--k", type=int, default=0, help="parameter for --mwc")
    lb.add_argument("-o", "--output")
    lb.set_defaults(func=cmd_gen)
    rnd = gensub.add_parser("random", help="seeded random instance")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--p", type=float, required=True)
    rnd.add_argument("--t", type=int, required=True)
    rnd.add_argument("--seed", type=int, required=True)
    rnd.add_argument("--k", type=int, default=0)
    rnd.add_argument("-o", "--output")
    rnd.set_defaults(func=cmd_gen)

    p = sub.add_parser("min-sep", help="minimum separator of a separation instance")
    p.add_argument("input")
    p.set_defaults(func=cmd_min_sep)

    p = sub.add_parser("important-sm", help="smallest important separator")
    p.add_argument("input")
    p.set_defaults(func=cmd_important_sm)

    for name, fn in (("union", cmd_union), ("principal", cmd_principal)):
        p = sub.add_parser(
            name,
            help="union of important separators within an excess budget"
            if name == "union"
            else "principal sets per excess level",
        )
        p.add_argument("input")
        p.add_argument("--x", type=int, required=True, help="excess budget")
        p.add_argument("-o", "--output")
        p.add_argument("--figure", help="write a PNG rendering of the report")
        p.set_defaults(func=fn)

    p = sub.add_parser("kernelize", help="reduce a multiway-cut instance")
    p.add_argument("input")
    p.add_argument("--provider", choices=["exact", "greedy"], default="exact")
    p.add_argument("--jobs", type=int, default=1, help="parallel per-terminal unions")
    p.add_argument("-o", "--output", help="prefix for .mwc and .report.txt files")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("solve", help="exact multiway-cut decision")
    p.add_argument("input")
    p.add_argument("--budget", type=int, default=None, help="defaults to the instance k")
    p.set_defaults(func=cmd_solve)

    for name, fn in (("check", cmd_check), ("oracle-compare", cmd_oracle_compare)):
        p = sub.add_parser(
            name,
            help="axiom and bound checks" if name == "check" else "engine vs. oracle agreement",
        )
        p.add_argument("--input", help="separation instance or family file" if name == "check" else argparse.SUPPRESS)
        p.add_argument("--corpus", type=int, default=0, help="number of random instances")
        p.add_argument("--n", type=int, default=12, help="max vertices per instance")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--x", type=int, default=3, help="excess budget")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("-o", "--output")
        p.add_argument("--figure")
        p.set_defaults(func=fn)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.func in (cmd_check, cmd_oracle_compare) and not args.input and args.corpus <= 0:
            parser.error("need --input or --corpus N")
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ParseError, FileNotFoundError, OracleBudgetError, FamilyOrderError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
