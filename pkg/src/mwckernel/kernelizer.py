"""Preprocessing pipeline for multiway-cut instances: terminal-count
reduction, per-terminal unions of important isolating cuts, and kernel
construction by contracting everything else away.

Cut providers are pluggable: the exact branching solver doubles as the
default provider (budget 2k), and a greedy union of minimum isolating cuts
is available for instances the exact solver should not touch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .families import ImportantSeparatorFamily, enumerate_principal
from .graph import (
    Graph,
    MwcInstance,
    SeparatorInstance,
    VertexSet,
    connected_components,
    induced_subgraph,
    contract_outside,
    mask_of,
    bits,
    reachable_mask,
    set_of,
)
from .separators import Separator, iter_important_separators, min_separator


class PipelineError(RuntimeError):
    """The pipeline cannot continue with the configured provider."""


class _Unknown:
    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "UNKNOWN"


#: Sentinel a provider may return when it cannot produce a cut or a refusal.
UNKNOWN = _Unknown()

MwcProvider = Callable[[MwcInstance], "VertexSet | None | _Unknown"]


class ExactProvider:
    """Provider backed by the exact solver with budget ``factor * k``.

    Returns None only when provably no cut within that budget exists.
    """

    def __init__(self, factor: int = 2):
        self.factor = factor

    def __call__(self, inst: MwcInstance) -> VertexSet | None:
        return solve_exact(inst, self.factor * inst.k)


class GreedyProvider:
    """Provider returning the union of minimum isolating cuts.

    Always yields a valid cut on feasible instances, with no size guarantee;
    it never answers None.
    """

    def __call__(self, inst: MwcInstance) -> VertexSet:
        return greedy_mwc(inst)


def min_isolating_cut(inst: MwcInstance, t: int) -> Separator | None:
    """Minimum separator between terminal ``t`` and all other terminals;
    None when ``t`` is adjacent to another terminal."""
    if t not in inst.terminals:
        raise ValueError(f"{t} is not a terminal")
    others = inst.terminals - {t}
    if not others:
        raise ValueError("isolating cuts need at least two terminals")
    return min_separator(SeparatorInstance(inst.graph, frozenset({t}), others))


def greedy_mwc(inst: MwcInstance) -> VertexSet:
    """Union of minimum isolating cuts over all terminals: a valid multiway
    cut of size at most the sum of the per-terminal minima."""
    if not inst.feasible:
        raise ValueError("adjacent terminals admit no multiway cut")
    if len(inst.terminals) <= 1:
        return frozenset()
    out: set[int] = set()
    for t in sorted(inst.terminals):
        sep = min_isolating_cut(inst, t)
        assert sep is not None, "feasible instance must have isolating cuts"
        out |= sep.vertices
    return frozenset(out)


def _connected_terminal(g: Graph, terminals: VertexSet) -> int | None:
    tmask = mask_of(terminals)
    for t in sorted(terminals):
        if reachable_mask(g, 1 << t) & (tmask ^ (1 << t)):
            return t
    return None


def solve_exact(inst: MwcInstance, budget: int) -> VertexSet | None:
    """A multiway cut of size at most ``budget`` or None when none exists.

    Branches over important isolating cuts of a terminal still connected to
    the rest; the smallest pushed cut is tried first, so easy instances
    resolve without exploring the branching tree.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if len(inst.terminals) <= 1:
        return frozenset()
    if not inst.feasible:
        return None
    return _solve(inst.graph, inst.terminals, budget)


def _solve(g: Graph, terminals: VertexSet, budget: int) -> VertexSet | None:
    t = _connected_terminal(g, terminals)
    if t is None:
        return frozenset()
    if budget == 0:
        return None
    si = SeparatorInstance(g, frozenset({t}), terminals - {t})
    for cand in iter_important_separators(si, budget):
        cut = cand.vertices
        if not cut:
            continue
        sub, old_ids = induced_subgraph(g, frozenset(g.vertices) - cut)
        new_of = {old: new for new, old in enumerate(old_ids)}
        sub_terms = frozenset(new_of[v] for v in terminals)
        rest = _solve(sub, sub_terms, budget - len(cut))
        if rest is not None:
            return cut | frozenset(old_ids[v] for v in rest)
    return None


@dataclass(frozen=True)
class SqueezeResult:
    """Outcome of the terminal-count reduction."""

    verdict: str  # "reduced" | "yes" | "no"
    instance: MwcInstance | None  # surviving instance, re-indexed
    old_ids: tuple[int, ...] | None  # new id -> original id
    forced: VertexSet  # removed vertices, original ids
    cut: VertexSet | None  # certificate when verdict == "yes"
    provider_cut_size: int | None = None


def _drop_lonely_components(
    g: Graph, alive: int, term_mask: int
) -> tuple[int, int]:
    """Drop components of g[alive] holding at most one terminal."""
    keep = 0
    for comp in connected_components(g, alive):
        if (comp & term_mask).bit_count() >= 2:
            keep |= comp
    return keep, term_mask & keep


def squeeze_terminals(inst: MwcInstance, provider: MwcProvider) -> SqueezeResult:
    """Shrink the terminal set below ``|S|*(k+1)`` for a provider cut S by
    repeatedly removing a cut vertex adjacent to many terminal components.

    Every removed vertex lies in each multiway cut within the remaining
    budget, so removals are forced; components left with at most one
    terminal are deleted as already settled.
    """
    g = inst.graph
    if not inst.feasible:
        return SqueezeResult("no", None, None, frozenset(), None)
    alive = g.full_mask
    term_mask = mask_of(inst.terminals)
    k = inst.k
    forced: set[int] = set()

    while True:
        alive, term_mask = _drop_lonely_components(g, alive, term_mask)
        if term_mask == 0:
            certificate = frozenset(forced)
            return SqueezeResult("yes", None, None, certificate, certificate)
        sub_g, old_ids = induced_subgraph(g, set_of(alive))
        new_of = {old: new for new, old in enumerate(old_ids)}
        sub_terms = frozenset(new_of[t] for t in bits(term_mask))
        sub_inst = MwcInstance(sub_g, sub_terms, k)
        answer = provider(sub_inst)
        if answer is UNKNOWN:
            if len(sub_terms) > 2 * k * (k + 1):
                raise PipelineError(
                    "provider returned UNKNOWN on an instance with "
                    f"{len(sub_terms)} terminals; rerun with the exact provider"
                )
            return SqueezeResult(
                "reduced", sub_inst, old_ids, frozenset(forced), None, None
            )
        if answer is None:
            return SqueezeResult("no", None, None, frozenset(forced), None)
        cut_size = len(answer)
        if len(sub_terms) <= cut_size * (k + 1):
            return SqueezeResult(
                "reduced", sub_inst, old_ids, frozenset(forced), None, cut_size
            )
        if k == 0:
            return SqueezeResult("no", None, None, frozenset(forced), None)

        cut_orig = frozenset(old_ids[v] for v in answer)
        cut_mask = mask_of(cut_orig)
        comp_masks = [
            c
            for c in connected_components(g, alive & ~cut_mask)
            if c & term_mask
        ]
        chosen = None
        for v in sorted(cut_orig):
            hits = sum(1 for c in comp_masks if g.adj_mask[v] & c)
            if hits >= k + 2:
                chosen = v
                break
        assert chosen is not None, "pigeonhole pick must exist above threshold"
        forced.add(chosen)
        alive &= ~(1 << chosen)
        k -= 1


@dataclass(frozen=True)
class KernelResult:
    """Reduced instance with traceability and size-bound bookkeeping."""

    reduced: MwcInstance
    old_ids: tuple[int, ...]  # reduced id -> original id
    forced: VertexSet  # original ids
    k_reduced: int
    per_terminal_r: dict[int, int]  # original terminal id -> isolating minimum
    r_min: int
    size_bound: int  # |T'| * (2^(k'-r) * r + 1) + |T'|
    refined_bound: int  # sum over terminals of 2^(k'-r_t+1) * r_t, plus |T'|

    @property
    def n_reduced(self) -> int:
        return self.reduced.graph.n

    @property
    def within_bound(self) -> bool:
        return self.n_reduced <= self.size_bound


@dataclass(frozen=True)
class KernelOutcome:
    verdict: str  # "reduced" | "yes" | "no"
    result: KernelResult | None = None
    cut: VertexSet | None = None  # certificate when verdict == "yes"
    reason: str = ""


def _terminal_union(
    work: MwcInstance, t: int, k2: int
) -> tuple[int, int, VertexSet | None]:
    """Isolating minimum and union of important isolating cuts of one
    terminal; the union is None when the minimum already exceeds ``k2``."""
    sep = min_isolating_cut(work, t)
    if sep is None:
        return t, -1, None
    r_t = len(sep.vertices)
    assert r_t >= 1, "terminal reduction leaves terminals pairwise connected"
    if r_t > k2:
        return t, r_t, None
    fam = ImportantSeparatorFamily(
        SeparatorInstance(work.graph, frozenset({t}), work.terminals - {t})
    )
    return t, r_t, enumerate_principal(fam, k2 - r_t).union


def _terminal_union_task(args) -> tuple[int, int, VertexSet | None]:
    from .graph import parse_instance

    text, t, k2 = args
    return _terminal_union(parse_instance(text), t, k2)


def kernelize(
    inst: MwcInstance, provider: MwcProvider | None = None, jobs: int = 1
) -> KernelOutcome:
    """Full preprocessing: squeeze terminals, gather per-terminal unions of
    important isolating cuts within the leftover budget, and contract the
    rest of the graph away.

    The reduced instance answers YES at parameter ``k_reduced`` exactly when
    the input answers YES at ``k``.  Per-terminal unions are independent;
    ``jobs > 1`` computes them in parallel worker processes.
    """
    if provider is None:
        provider = ExactProvider()
    if not inst.feasible:
        return KernelOutcome("no", reason="two terminals are adjacent")
    sq = squeeze_terminals(inst, provider)
    if sq.verdict == "yes":
        return KernelOutcome("yes", cut=sq.cut)
    if sq.verdict == "no":
        return KernelOutcome("no", reason="terminal reduction exhausted the budget")

    work = sq.instance
    old_ids = sq.old_ids
    k2 = work.k  # already decremented once per forced removal

    terminals = sorted(work.terminals)
    if jobs > 1 and len(terminals) > 1:
        from concurrent.futures import ProcessPoolExecutor

        from .graph import serialize_instance

        text = serialize_instance(work)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_terminal_union_task, [(text, t, k2) for t in terminals]))
    else:
        rows = [_terminal_union(work, t, k2) for t in terminals]

    per_terminal_r: dict[int, int] = {}
    unions: dict[int, VertexSet] = {}
    for t, r_t, union in rows:
        if r_t < 0:
            return KernelOutcome("no", reason="a terminal became adjacent to another")
        if union is None:
            return KernelOutcome(
                "no",
                reason=f"isolating terminal {old_ids[t]} needs {r_t} > {k2} vertices",
            )
        unions[t] = union
        per_terminal_r[old_ids[t]] = r_t

    vstar: set[int] = set(work.terminals)
    for part in unions.values():
        vstar |= part
    kernel_graph, id_map = contract_outside(work.graph, frozenset(vstar))
    kernel_terms = frozenset(id_map[t] for t in work.terminals)
    reduced = MwcInstance(kernel_graph, kernel_terms, k2)
    composite_old = tuple(old_ids[v] for v in sorted(vstar))

    t_count = len(kernel_terms)
    r_min = min(per_terminal_r.values())
    size_bound = t_count * (2 ** (k2 - r_min) * r_min + 1) + t_count
    refined = sum(2 ** (k2 - r + 1) * r for r in per_terminal_r.values()) + t_count
    result = KernelResult(
        reduced=reduced,
        old_ids=composite_old,
        forced=sq.forced,
        k_reduced=k2,
        per_terminal_r=per_terminal_r,
        r_min=r_min,
        size_bound=size_bound,
        refined_bound=refined,
    )
    return KernelOutcome("reduced", result=result)
