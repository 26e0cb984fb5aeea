from mwckernel.checks import run_separator_check
from mwckernel.families import (
    ImportantSeparatorFamily,
    check_axioms,
    counting_audit,
    enumerate_principal,
)
from mwckernel.graph import MwcInstance, generate_lowerbound
from mwckernel.kernelizer import kernelize
from mwckernel.oracle import enum_important
from mwckernel import reports


def h11_report(x=1):
    return enumerate_principal(ImportantSeparatorFamily(generate_lowerbound(1, 1)), x)


def test_principal_set_lines_prefix_excess_levels():
    lines = reports.principal_set_lines(h11_report())
    assert lines == ["0: 1", "1: 2 3"]


def test_principal_summary_has_stable_keys():
    lines = reports.principal_summary_lines(h11_report())
    assert "r=1" in lines
    assert "union_size=3" in lines
    assert "union_bound=4" in lines
    assert "level_1_new=1" in lines
    assert "mass_1=2" in lines


def test_audit_summary_lines():
    fam = enum_important(generate_lowerbound(1, 1), 2)
    lines = reports.audit_summary_lines(counting_audit(fam, 1))
    assert "mass_bound_ok=true" in lines
    assert "mass_0=1" in lines


def test_axiom_summary_lines_report_counterexamples():
    from mwckernel.families import EnumeratedFamily

    fam = EnumeratedFamily([frozenset({0}), frozenset({1})], [(0, 1)])
    lines = reports.axiom_summary_lines(check_axioms(fam))
    assert "size_monotone=fail" in lines
    assert any(line.startswith("counterexample:") for line in lines)


def test_kernel_report_lines_reduced():
    si = generate_lowerbound(1, 2)
    inst = MwcInstance(si.graph, si.sources | si.sinks, 3)
    outcome = kernelize(inst)
    lines = reports.kernel_report_lines(outcome, inst)
    assert "verdict=reduced" in lines
    assert "n_reduced=9" in lines
    assert "within_bound=true" in lines
    assert any(line.startswith("terminal_r_") for line in lines)


def test_figures_render_to_files(tmp_path):
    rep = h11_report(2)
    p1 = tmp_path / "principal.png"
    reports.render_principal_figure(rep, p1)
    assert p1.stat().st_size > 1000

    chk = run_separator_check(generate_lowerbound(1, 1), 2)
    p2 = tmp_path / "scatter.png"
    reports.render_union_scatter([(chk.union_sizes[-1], chk.union_bounds[-1])], p2)
    assert p2.stat().st_size > 1000

    si = generate_lowerbound(1, 2)
    inst = MwcInstance(si.graph, si.sources | si.sinks, 3)
    p3 = tmp_path / "kernel.png"
    reports.render_kernel_figure(kernelize(inst), inst, p3)
    assert p3.stat().st_size > 1000
