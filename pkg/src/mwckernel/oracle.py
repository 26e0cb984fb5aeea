"""Definitional brute-force references used to validate the flow-based
engine and the kernelization pipeline on small instances.

Everything here enumerates subsets and applies the definitions literally;
nothing is shared with the engine implementations being checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import (
    Graph,
    MwcInstance,
    SeparatorInstance,
    VertexSet,
    bits,
    connected_components,
    mask_of,
    reachable_mask,
)


class OracleBudgetError(RuntimeError):
    """Input exceeds the size the brute-force routines will touch."""


@dataclass(frozen=True)
class OracleBudget:
    max_n: int = 15
    max_set_size: int | None = None

    def admit(self, n: int) -> None:
        if n > self.max_n:
            raise OracleBudgetError(
                f"instance has {n} vertices, oracle budget allows {self.max_n}"
            )

    def cap(self, requested: int) -> int:
        if self.max_set_size is None:
            return requested
        return min(requested, self.max_set_size)


DEFAULT_BUDGET = OracleBudget()


def _separating_subsets(
    si: SeparatorInstance, max_size: int
) -> list[tuple[VertexSet, VertexSet]]:
    """All subsets of the interior of size <= max_size whose removal
    disconnects the sides, each with its source side."""
    g = si.graph
    interior = sorted(si.interior)
    src = mask_of(si.sources)
    snk = mask_of(si.sinks)
    full = g.full_mask
    out = []
    for size in range(0, max_size + 1):
        for combo in combinations(interior, size):
            cut = mask_of(combo)
            reach = reachable_mask(g, snk, cut)
            if reach & src:
                continue
            side = full & ~reach & ~cut
            out.append((frozenset(combo), frozenset(bits(side))))
    return out


def _is_minimal(si: SeparatorInstance, cut: VertexSet) -> bool:
    g = si.graph
    src = mask_of(si.sources)
    snk = mask_of(si.sinks)
    return all(reachable_mask(g, snk, mask_of(cut - {v})) & src for v in cut)


def enum_separators(
    si: SeparatorInstance, max_size: int, budget: OracleBudget = DEFAULT_BUDGET
) -> list[VertexSet]:
    """All inclusion-minimal separators of size <= max_size, smallest and
    lexicographically earliest first."""
    budget.admit(si.graph.n)
    max_size = budget.cap(max_size)
    minimal = [
        cut
        for cut, _side in _separating_subsets(si, max_size)
        if _is_minimal(si, cut)
    ]
    return sorted(minimal, key=lambda s: (len(s), sorted(s)))


def enum_important(
    si: SeparatorInstance, max_size: int, budget: OracleBudget = DEFAULT_BUDGET
):
    """The family of important separators of size <= max_size, ordered by
    strict source-side inclusion, by the literal definition.

    A minimal separator is kept unless some separating subset of at most its
    size has a strictly larger source side.  When the two sides are already
    disconnected the family is the single empty separator.
    """
    from .families import EnumeratedFamily

    budget.admit(si.graph.n)
    max_size = budget.cap(max_size)
    subsets = _separating_subsets(si, max_size)
    by_size: dict[int, list[tuple[VertexSet, VertexSet]]] = {}
    for cut, side in subsets:
        by_size.setdefault(len(cut), []).append((cut, side))
    kept: list[tuple[VertexSet, VertexSet]] = []
    for cut, side in subsets:
        if not _is_minimal(si, cut):
            continue
        dominated = any(
            side < other_side
            for size in range(len(cut) + 1)
            for _other, other_side in by_size.get(size, ())
        )
        if not dominated:
            kept.append((cut, side))
    kept.sort(key=lambda pair: (len(pair[0]), sorted(pair[0])))
    sets = [cut for cut, _ in kept]
    sides = [side for _, side in kept]
    pairs = [
        (i, j)
        for i in range(len(kept))
        for j in range(len(kept))
        if sides[i] < sides[j]
    ]
    return EnumeratedFamily(sets, pairs, universe=si.interior)


def is_multiway_cut(g: Graph, terminals: VertexSet, cut: VertexSet) -> bool:
    """No component of g minus the cut holds two terminals."""
    if cut & terminals:
        return False
    tmask = mask_of(terminals)
    alive = g.full_mask & ~mask_of(cut)
    for comp in connected_components(g, alive):
        if (comp & tmask).bit_count() > 1:
            return False
    return True


def enum_mwc_cuts(
    inst: MwcInstance, max_size: int, budget: OracleBudget = DEFAULT_BUDGET
) -> list[VertexSet]:
    """All multiway cuts of size <= max_size (not only minimal ones)."""
    budget.admit(inst.graph.n)
    free = sorted(set(inst.graph.vertices) - inst.terminals)
    out = []
    for size in range(0, min(max_size, len(free)) + 1):
        for combo in combinations(free, size):
            cand = frozenset(combo)
            if is_multiway_cut(inst.graph, inst.terminals, cand):
                out.append(cand)
    return out


def bruteforce_opt_within(
    inst: MwcInstance, max_size: int, budget: OracleBudget = DEFAULT_BUDGET
) -> int | None:
    """Smallest multiway-cut size, or None if none of size <= max_size."""
    budget.admit(inst.graph.n)
    free = sorted(set(inst.graph.vertices) - inst.terminals)
    for size in range(0, min(max_size, len(free)) + 1):
        for combo in combinations(free, size):
            if is_multiway_cut(inst.graph, inst.terminals, frozenset(combo)):
                return size
    return None


def exact_mwc_bruteforce(
    inst: MwcInstance, budget: OracleBudget = DEFAULT_BUDGET
) -> int | None:
    """Optimal multiway-cut size by full subset enumeration; None when the
    instance is infeasible (some pair of terminals is adjacent)."""
    budget.admit(inst.graph.n)
    free = len(set(inst.graph.vertices) - inst.terminals)
    return bruteforce_opt_within(inst, free, budget)


def _simple_path_interiors(si: SeparatorInstance, limit: int) -> list[VertexSet]:
    """Interior vertex sets of simple source-sink paths, inclusion-minimal
    ones only; refuses graphs generating more than ``limit`` raw paths."""
    g = si.graph
    ends = si.sinks
    avoid = si.sources | si.sinks
    interiors: set[VertexSet] = set()
    count = 0

    def walk(v: int, trail: set[int]):
        nonlocal count
        for w in g.neighbors(v):
            if w in ends:
                count += 1
                if count > limit:
                    raise OracleBudgetError("too many simple paths to enumerate")
                interiors.add(frozenset(trail))
            elif w not in avoid and w not in trail:
                trail.add(w)
                walk(w, trail)
                trail.remove(w)

    for s in si.sources:
        walk(s, set())
    pruned = [
        p for p in interiors if not any(q < p for q in interiors)
    ]
    return sorted(pruned, key=lambda s: (len(s), sorted(s)))


def max_disjoint_paths(
    si: SeparatorInstance, path_limit: int = 20000
) -> int | None:
    """Maximum number of source-sink paths sharing no interior vertices,
    by exact set packing over enumerated simple paths.

    Returns None when an edge joins the sides (unbounded packing).
    """
    g = si.graph
    snk = mask_of(si.sinks)
    if any(g.adj_mask[u] & snk for u in si.sources):
        return None
    interiors = _simple_path_interiors(si, path_limit)
    masks = [mask_of(p) for p in interiors]
    best = 0

    def pack(idx: int, used: int, count: int):
        nonlocal best
        if count > best:
            best = count
        if count + (len(masks) - idx) <= best:
            return
        for i in range(idx, len(masks)):
            if masks[i] & used == 0:
                pack(i + 1, used | masks[i], count + 1)

    pack(0, 0, 0)
    return best
