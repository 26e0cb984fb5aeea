"""Corpus validation: run the flow engine and the brute-force oracle side by
side on one instance and report every agreement and bound check.

Used by the CLI ``check``/``oracle-compare`` commands and by the acceptance
suite, so both see exactly the same checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .families import (
    AxiomReport,
    ImportantSeparatorFamily,
    check_axioms,
    counting_audit,
    enumerate_principal,
)
from .graph import (
    MwcInstance,
    SeparatorInstance,
    VertexSet,
    generate_random,
    random_separator_instance,
)
from .kernelizer import kernelize, solve_exact
from .oracle import (
    OracleBudget,
    bruteforce_opt_within,
    enum_mwc_cuts,
    enum_separators,
    enum_important,
    is_multiway_cut,
)
from .separators import (
    Separator,
    is_important,
    iter_important_separators,
    smallest_important_separator,
    witness,
)


def min_separator_size_bruteforce(si: SeparatorInstance) -> int | None:
    """Smallest separating subset size by direct enumeration; None when an
    edge joins the two sides."""
    from itertools import combinations

    from .graph import mask_of, reachable_mask

    g = si.graph
    interior = sorted(si.interior)
    src = mask_of(si.sources)
    snk = mask_of(si.sinks)
    for size in range(len(interior) + 1):
        for combo in combinations(interior, size):
            if not reachable_mask(g, snk, mask_of(combo)) & src:
                return size
    return None


@dataclass
class SeparatorCheck:
    """Engine-versus-oracle comparison on one separation instance."""

    n: int
    r: int
    x: int
    axiom_report: AxiomReport
    smallest_match: bool
    importance_match: bool
    witness_match: bool
    enumeration_match: bool
    principal_match: bool
    union_match: bool
    union_sizes: tuple[int, ...]  # per excess level 0..x
    union_bounds: tuple[int, ...]
    counts_ok: bool
    audit_ok: bool
    mass_match: bool
    details: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.axiom_report.passed
            and self.smallest_match
            and self.importance_match
            and self.witness_match
            and self.enumeration_match
            and self.principal_match
            and self.union_match
            and self.counts_ok
            and self.audit_ok
            and self.mass_match
            and all(s <= b for s, b in zip(self.union_sizes, self.union_bounds))
        )


def run_separator_check(
    si: SeparatorInstance,
    x: int,
    budget: OracleBudget | None = None,
    full_family: bool = False,
) -> SeparatorCheck | None:
    """Compare engine and oracle on one instance; None when the instance is
    degenerate (sides adjacent or already disconnected).

    ``full_family`` enumerates important separators of every size instead of
    stopping at excess ``x``; the structural axiom checks then cover the
    entire family.
    """
    budget = budget or OracleBudget(max_n=15)
    budget.admit(si.graph.n)
    r = min_separator_size_bruteforce(si)
    if r is None or r == 0:
        return None
    max_size = len(si.interior) if full_family else min(r + x, len(si.interior))
    fam = enum_important(si, max_size, budget)
    details: list[str] = []

    engine_smallest = smallest_important_separator(si)
    smallest_match = (
        engine_smallest is not None and fam.smallest_element() == engine_smallest.vertices
    )
    if not smallest_match:
        details.append("smallest important separator disagrees with the oracle")

    def witness_fn(s: VertexSet, v: int) -> VertexSet | None:
        w = witness(Separator.from_vertices(si, s), v)
        if w is None:
            return None
        # a witness beyond the enumeration cap is invisible to the family
        if len(w.vertices) > max_size:
            return None
        return w.vertices

    axiom_report = check_axioms(
        fam,
        witness_fn=witness_fn,
        smallest_fn=lambda: None if engine_smallest is None else engine_smallest.vertices,
    )
    witness_match = axiom_report.by_name("engine_agreement").passed
    for c in axiom_report.failures():
        details.append(f"{c.name}: {c.detail}")

    importance_match = True
    family_sets = set(fam.sets)
    for cand in enum_separators(si, max_size, budget):
        if is_important(Separator.from_vertices(si, cand)) != (cand in family_sets):
            importance_match = False
            details.append(f"importance disagrees on {sorted(cand)}")
            break

    engine_family = {
        s.vertices for s in iter_important_separators(si, max_size)
    }
    enumeration_match = engine_family == family_sets
    if not enumeration_match:
        details.append("engine enumeration differs from the oracle family")

    view = ImportantSeparatorFamily(si)
    report = enumerate_principal(view, x)
    audit = counting_audit(fam, x)
    oracle_levels = fam.principal_levels(x)
    principal_match = True
    union_match = True
    union_sizes = []
    union_bounds = []
    seen: set[VertexSet] = set()
    for level in range(x + 1):
        if set(report.levels[level]) != set(oracle_levels[level]):
            principal_match = False
            details.append(f"principal sets differ at excess {level}")
        seen |= set(report.levels[level])
        covered = frozenset().union(*seen) if seen else frozenset()
        if covered != fam.union_up_to(level):
            union_match = False
            details.append(f"union differs at excess {level}")
        union_sizes.append(len(covered))
        union_bounds.append(2 ** (level + 1) * r)
    counts_ok = report.within_bounds
    if not counts_ok:
        details.append("principal counts, union or mass exceed their bounds")
    audit_ok = audit.passed
    if not audit_ok:
        details.extend(audit.failures)
    mass_match = audit.level_mass == report.level_mass
    if not mass_match:
        details.append(
            f"mass disagrees: engine {report.level_mass} vs oracle {audit.level_mass}"
        )

    return SeparatorCheck(
        n=si.graph.n,
        r=r,
        x=x,
        axiom_report=axiom_report,
        smallest_match=smallest_match,
        importance_match=importance_match,
        witness_match=witness_match,
        enumeration_match=enumeration_match,
        principal_match=principal_match,
        union_match=union_match,
        union_sizes=tuple(union_sizes),
        union_bounds=tuple(union_bounds),
        counts_ok=counts_ok,
        audit_ok=audit_ok,
        mass_match=mass_match,
        details=details,
    )


@dataclass
class KernelCheck:
    """Round trip of the kernelizer against the exact solver and brute force."""

    n: int
    k: int
    verdict: str
    equivalence_ok: bool
    certificate_ok: bool
    optimum_ok: bool
    size_bound_ok: bool
    terminal_bound_ok: bool
    forced_ok: bool
    details: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.equivalence_ok
            and self.certificate_ok
            and self.optimum_ok
            and self.size_bound_ok
            and self.terminal_bound_ok
            and self.forced_ok
        )


def run_kernel_check(
    inst: MwcInstance, budget: OracleBudget | None = None
) -> KernelCheck:
    budget = budget or OracleBudget(max_n=18)
    details: list[str] = []
    outcome = kernelize(inst)
    original = solve_exact(inst, inst.k)

    equivalence_ok = True
    certificate_ok = True
    optimum_ok = True
    size_bound_ok = True
    terminal_bound_ok = True
    forced_ok = True

    if outcome.verdict == "yes":
        equivalence_ok = original is not None
        certificate_ok = (
            outcome.cut is not None
            and len(outcome.cut) <= inst.k
            and is_multiway_cut(inst.graph, inst.terminals, outcome.cut)
        )
        if not certificate_ok:
            details.append("yes-certificate is not a valid cut within budget")
        forced = outcome.cut or frozenset()
    elif outcome.verdict == "no":
        equivalence_ok = original is None
        forced = frozenset()
    else:
        result = outcome.result
        reduced_answer = solve_exact(result.reduced, result.k_reduced)
        equivalence_ok = (original is None) == (reduced_answer is None)
        size_bound_ok = result.n_reduced <= result.size_bound
        if not size_bound_ok:
            details.append(
                f"kernel has {result.n_reduced} vertices, bound {result.size_bound}"
            )
        kr = result.k_reduced
        terminal_bound_ok = len(result.reduced.terminals) <= 2 * kr * (kr + 1)
        if not terminal_bound_ok:
            details.append("terminal count exceeds the squeeze bound")
        opt = bruteforce_opt_within(inst, inst.k, budget)
        if opt is not None:
            opt_kernel = bruteforce_opt_within(result.reduced, kr, budget)
            if opt_kernel is None or opt_kernel + len(result.forced) != opt:
                optimum_ok = False
                details.append(
                    f"optimum {opt} not preserved: kernel "
                    f"{opt_kernel} + {len(result.forced)} forced"
                )
        forced = result.forced
    if not equivalence_ok:
        details.append(f"verdict {outcome.verdict} contradicts the exact solver")

    if forced:
        for cut in enum_mwc_cuts(inst, inst.k, budget):
            if not forced <= cut:
                forced_ok = False
                details.append(
                    f"forced vertices {sorted(forced)} miss the cut {sorted(cut)}"
                )
                break

    return KernelCheck(
        n=inst.graph.n,
        k=inst.k,
        verdict=outcome.verdict,
        equivalence_ok=equivalence_ok,
        certificate_ok=certificate_ok,
        optimum_ok=optimum_ok,
        size_bound_ok=size_bound_ok,
        terminal_bound_ok=terminal_bound_ok,
        forced_ok=forced_ok,
        details=details,
    )


def separator_check_task(
    task: tuple[int, str, int, int, bool],
) -> tuple[int, SeparatorCheck]:
    """Picklable corpus worker: (index, instance text, x, max_n, full)."""
    from .graph import parse_separator_instance

    idx, text, x, max_n, full = task
    si = parse_separator_instance(text)
    chk = run_separator_check(si, x, OracleBudget(max_n=max_n), full_family=full)
    if chk is None:
        raise RuntimeError(f"instance {idx} is degenerate; corpus should prevent this")
    return idx, chk


# ---------------------------------------------------------------------------
# seeded corpora


def separator_corpus(
    count: int, n_max: int, seed: int, x: int = 3
) -> list[SeparatorInstance]:
    """Seeded stream of non-degenerate separation instances: the sides are
    neither adjacent nor already disconnected."""
    rng = random.Random(seed)
    out: list[SeparatorInstance] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("corpus generation keeps hitting degenerate instances")
        n = rng.randint(max(4, n_max - 8), n_max)
        p = rng.choice([0.2, 0.3, 0.45, 0.6])
        si = random_separator_instance(n, p, rng.randrange(2**31))
        r = min_separator_size_bruteforce(si)
        if r is None or r == 0:
            continue
        out.append(si)
    return out


def mwc_corpus(
    count: int, n_max: int, seed: int, t_max: int = 4, k_max: int = 4
) -> list[MwcInstance]:
    """Seeded stream of multiway-cut instances, terminals possibly adjacent."""
    rng = random.Random(seed)
    out: list[MwcInstance] = []
    while len(out) < count:
        n = rng.randint(max(5, n_max - 10), n_max)
        t_count = rng.randint(2, min(t_max, n - 1))
        k = rng.randint(0, k_max)
        p = rng.choice([0.15, 0.25, 0.4])
        out.append(generate_random(n, p, t_count, rng.randrange(2**31), k=k))
    return out
