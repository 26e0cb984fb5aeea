"""Plain-text reports with stable key=value lines, and matplotlib renderings
of the same numbers written next to them.

Figures are rendered with the Agg backend so report generation works in
headless runs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .checks import KernelCheck, SeparatorCheck
from .families import AxiomReport, CountingAudit, PrincipalFamilyReport
from .graph import MwcInstance
from .kernelizer import KernelOutcome


def principal_set_lines(report: PrincipalFamilyReport) -> list[str]:
    """One principal set per line, prefixed by its excess level."""
    lines = []
    for level, sets in enumerate(report.levels):
        for s in sets:
            lines.append(f"{level}: {' '.join(str(v) for v in sorted(s))}")
    return lines


def principal_summary_lines(report: PrincipalFamilyReport) -> list[str]:
    counts = report.cumulative_counts()
    lines = [
        f"r={report.r}",
        f"x={report.x}",
        f"union_size={len(report.union)}",
        f"union_bound={report.union_bound}",
        f"principal_total={counts[-1]}",
        f"principal_bound={report.count_bound(report.x)}",
        f"within_bounds={'true' if report.within_bounds else 'false'}",
    ]
    for level, sets in enumerate(report.levels):
        lines.append(f"level_{level}_new={len(sets)}")
    for level, mass in enumerate(report.level_mass):
        lines.append(f"mass_{level}={mass}")
    return lines


def audit_summary_lines(audit: CountingAudit) -> list[str]:
    lines = [
        f"r={audit.r}",
        f"x={audit.x}",
        f"mass_bound_ok={'true' if audit.mass_bound_ok else 'false'}",
        f"doubling_ok={'true' if audit.doubling_ok else 'false'}",
        f"private_bound_ok={'true' if audit.private_bound_ok else 'false'}",
        f"transfer_ok={'true' if audit.transfer_ok else 'false'}",
        f"private_complement_ok={'true' if audit.private_complement_ok else 'false'}",
    ]
    for level, mass in enumerate(audit.level_mass):
        lines.append(f"mass_{level}={mass}")
    lines.extend(f"failure: {f}" for f in audit.failures)
    return lines


def axiom_summary_lines(report: AxiomReport) -> list[str]:
    lines = []
    passed = sum(1 for c in report.checks if c.passed)
    lines.append(f"axioms_passed={passed}/{len(report.checks)}")
    for c in report.checks:
        lines.append(f"{c.name}={'pass' if c.passed else 'fail'}")
        if not c.passed and c.detail:
            lines.append(f"counterexample: {c.detail}")
    return lines


def kernel_report_lines(outcome: KernelOutcome, original: MwcInstance) -> list[str]:
    lines = [
        f"verdict={outcome.verdict}",
        f"n_original={original.graph.n}",
        f"k={original.k}",
    ]
    if outcome.verdict == "yes":
        cut = sorted(outcome.cut or ())
        lines.append(f"cut={' '.join(map(str, cut))}")
        lines.append(f"cut_size={len(cut)}")
    elif outcome.verdict == "no":
        lines.append(f"reason={outcome.reason}")
    else:
        res = outcome.result
        lines.extend(
            [
                f"n_reduced={res.n_reduced}",
                f"k_reduced={res.k_reduced}",
                f"terminals={len(res.reduced.terminals)}",
                f"forced={' '.join(map(str, sorted(res.forced)))}",
                f"r_min={res.r_min}",
                f"size_bound={res.size_bound}",
                f"refined_bound={res.refined_bound}",
                f"within_bound={'true' if res.within_bound else 'false'}",
            ]
        )
        for t in sorted(res.per_terminal_r):
            lines.append(f"terminal_r_{t}={res.per_terminal_r[t]}")
    return lines


def separator_check_line(index: int, chk: SeparatorCheck) -> str:
    return (
        f"instance={index} n={chk.n} r={chk.r} x={chk.x} "
        f"union={chk.union_sizes[-1]} bound={chk.union_bounds[-1]} "
        f"ok={1 if chk.passed else 0}"
    )


def kernel_check_line(index: int, chk: KernelCheck) -> str:
    return (
        f"instance={index} n={chk.n} k={chk.k} verdict={chk.verdict} "
        f"ok={1 if chk.passed else 0}"
    )


def write_report(path: str | Path, lines: Iterable[str]) -> None:
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# figures


def render_principal_figure(report: PrincipalFamilyReport, path: str | Path) -> None:
    """Per-level principal counts against their bound, plus union growth."""
    levels = list(range(report.x + 1))
    cumulative = report.cumulative_counts()
    bounds = [report.count_bound(i) for i in levels]
    union_growth = []
    seen: set[int] = set()
    for level_sets in report.levels:
        for s in level_sets:
            seen |= s
        union_growth.append(len(seen))

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(levels, [len(s) for s in report.levels], color="#4878d0", label="new principal sets")
    ax.plot(levels, cumulative, "o-", color="#225588", label="cumulative principal sets")
    ax.plot(levels, bounds, "k--", label="count bound")
    ax.plot(levels, union_growth, "s-", color="#d65f5f", label="union size")
    ax.set_xlabel("excess level")
    ax.set_ylabel("count")
    ax.set_title(f"principal sets and union growth (r={report.r})")
    ax.set_xticks(levels)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_union_scatter(
    rows: Sequence[tuple[int, int]], path: str | Path
) -> None:
    """Union size against the bound per corpus instance."""
    fig, ax = plt.subplots(figsize=(5.4, 5.0))
    if rows:
        xs = [b for _u, b in rows]
        ys = [u for u, _b in rows]
        top = max(xs + ys)
        ax.plot([0, top], [0, top], "k--", alpha=0.5, label="bound")
        ax.scatter(xs, ys, s=14, alpha=0.6, color="#4878d0")
    ax.set_xlabel("union bound")
    ax.set_ylabel("union size")
    ax.set_title("union of important separators vs. bound")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_kernel_figure(
    outcome: KernelOutcome, original: MwcInstance, path: str | Path
) -> None:
    """Original size, kernel size and the size bound side by side."""
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    if outcome.verdict == "reduced":
        res = outcome.result
        labels = ["original", "kernel", "bound"]
        values = [original.graph.n, res.n_reduced, res.size_bound]
        colors = ["#999999", "#4878d0", "#d65f5f"]
    else:
        labels = ["original"]
        values = [original.graph.n]
        colors = ["#999999"]
        ax.set_title(f"verdict: {outcome.verdict}")
    bars = ax.bar(labels, values, color=colors)
    ax.bar_label(bars)
    ax.set_ylabel("vertices")
    if outcome.verdict == "reduced":
        ax.set_title("kernel size vs. bound")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
