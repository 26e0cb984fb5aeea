"""Flow-based machinery for separators between two vertex sets: minimum and
canonical "pushed" cuts, the side-inclusion order, importance testing, and
witness computation.

A separator K between sources X and sinks Y is a vertex set disjoint from
X and Y whose removal leaves no X-to-Y path.  Its *source side* is the set
of vertices (outside K) that the sinks can no longer reach; separators are
ordered by strict inclusion of source sides, i.e. by how far toward the
sinks they sit.  A minimal separator is *important* when no separator of at
most its size sits strictly farther toward the sinks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ._flow import min_vertex_cut
from .graph import (
    EMPTY,
    Graph,
    SeparatorInstance,
    VertexSet,
    mask_of,
    reachable_mask,
    set_of,
)


def not_reachable(g: Graph, sources: VertexSet, blocked: VertexSet) -> VertexSet:
    """Vertices outside ``blocked`` with no path from ``sources`` once
    ``blocked`` is removed.  Source vertices reach themselves and are never
    included."""
    reach = reachable_mask(g, mask_of(sources), mask_of(blocked))
    return set_of(g.full_mask & ~reach & ~mask_of(blocked))


def separates(g: Graph, sources: VertexSet, sinks: VertexSet, cut: VertexSet) -> bool:
    reach = reachable_mask(g, mask_of(sources), mask_of(cut))
    return not reach & mask_of(sinks)


@dataclass(frozen=True)
class ExcessBudget:
    """Base size of the smallest important separator plus the allowed excess,
    capping interesting separators at ``r + x`` vertices."""

    r: int
    x: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("smallest element is empty: r must be at least 1")
        if self.x < 0:
            raise ValueError("excess budget must be non-negative")

    @property
    def max_size(self) -> int:
        return self.r + self.x

    def excess_of(self, size: int) -> int:
        return size - self.r

    @property
    def union_bound(self) -> int:
        return 2 ** (self.x + 1) * self.r

    def count_bound(self, level: int) -> int:
        return 2 ** (level + 1) * self.r


@dataclass(frozen=True)
class Separator:
    """A separator with its context and cached source side."""

    instance: SeparatorInstance
    vertices: VertexSet
    source_side: VertexSet

    @classmethod
    def from_vertices(cls, si: SeparatorInstance, vertices: VertexSet) -> "Separator":
        return cls(si, vertices, not_reachable(si.graph, si.sinks, vertices))

    @property
    def size(self) -> int:
        return len(self.vertices)

    def validate(self) -> None:
        si = self.instance
        if self.vertices & (si.sources | si.sinks):
            raise ValueError("separator touches sources or sinks")
        if not separates(si.graph, si.sources, si.sinks, self.vertices):
            raise ValueError("vertex set does not separate")
        side = not_reachable(si.graph, si.sinks, self.vertices)
        if side != self.source_side:
            raise ValueError("cached source side is stale")
        if not si.sources <= self.source_side or self.source_side & si.sinks:
            raise ValueError("source side inconsistent")


def _same_context(k1: Separator, k2: Separator) -> None:
    if k1.instance != k2.instance:
        raise ValueError("separators come from different instances")


def precedes(k1: Separator, k2: Separator) -> bool:
    """True iff k2 sits strictly farther toward the sinks than k1."""
    _same_context(k1, k2)
    return k1.source_side < k2.source_side


def min_separator(si: SeparatorInstance) -> Separator | None:
    """A minimum-size separator, in its position closest to the sources.

    Returns None when an edge joins the sources to the sinks directly, in
    which case no vertex separator exists.
    """
    res = min_vertex_cut(si.graph, si.sources, si.sinks)
    if res is None:
        return None
    return Separator.from_vertices(si, res.near_sources)


def smallest_important_separator(si: SeparatorInstance) -> Separator | None:
    """The unique minimum-size important separator: the minimum cut pushed
    maximally toward the sinks."""
    res = min_vertex_cut(si.graph, si.sources, si.sinks)
    if res is None:
        return None
    return Separator.from_vertices(si, res.near_sinks)


def is_important(k: Separator) -> bool:
    """Minimality plus the push test: re-solving with the whole source side
    as the source must give back exactly this separator."""
    si = k.instance
    g = si.graph
    for v in k.vertices:
        if separates(g, si.sources, si.sinks, k.vertices - {v}):
            return False
    res = min_vertex_cut(g, k.source_side | si.sources, si.sinks)
    return res is not None and res.near_sinks == k.vertices


def witness(k: Separator, v: int) -> Separator | None:
    """The unique minimal important separator strictly beyond ``k`` that
    omits ``v``, or None when no such separator exists.

    Computed as the pushed minimum cut with the whole source side of ``k``
    acting as the source and ``v`` made uncuttable; this realizes the
    construction of collapsing the source side and making ``v`` impossible
    to delete.  A vertex adjacent to the sinks admits no witness.
    """
    if v not in k.vertices:
        raise ValueError(f"vertex {v} is not in the separator")
    si = k.instance
    g = si.graph
    if g.adj_mask[v] & mask_of(si.sinks):
        return None
    res = min_vertex_cut(
        g,
        k.source_side | si.sources,
        si.sinks,
        uncuttable=frozenset({v}),
    )
    if res is None:
        return None
    assert v not in res.near_sinks, "uncuttable vertex leaked into the cut"
    return Separator.from_vertices(si, res.near_sinks)


def _side_within(
    g: Graph, sinks: VertexSet, cut: VertexSet, removed: VertexSet
) -> VertexSet:
    """Source side of ``cut`` inside the graph minus ``removed``."""
    blocked = mask_of(cut) | mask_of(removed)
    reach = reachable_mask(g, mask_of(sinks), blocked)
    return set_of(g.full_mask & ~reach & ~blocked)


def iter_important_separators(
    si: SeparatorInstance, max_size: int
) -> Iterator[Separator]:
    """All important separators of size at most ``max_size``, lazily.

    Branches on a vertex of the current pushed minimum cut: either it joins
    the separator (recurse with it removed) or it joins the source side.
    Candidates are screened through ``is_important`` before being yielded,
    with the pushed minimum cut of each branch surfacing first.
    """
    g = si.graph
    sinks = si.sinks
    seen: set[VertexSet] = set()

    def branch(
        sources: VertexSet, removed: VertexSet, prefix: VertexSet
    ) -> Iterator[Separator]:
        res = min_vertex_cut(g, sources, sinks, removed=removed)
        if res is None or res.size + len(prefix) > max_size:
            return
        cand = prefix | res.near_sinks
        if cand not in seen:
            seen.add(cand)
            sep = Separator.from_vertices(si, cand)
            if is_important(sep):
                yield sep
        if not res.near_sinks:
            return
        v = min(res.near_sinks)
        yield from branch(sources, removed | {v}, prefix | {v})
        side = _side_within(g, sinks, res.near_sinks, removed)
        yield from branch(side | sources | {v}, removed, prefix)

    yield from branch(si.sources, EMPTY, EMPTY)
