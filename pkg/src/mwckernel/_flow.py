"""Minimum vertex cuts between vertex sets via max flow on the split digraph.

Every vertex v becomes an arc v_in -> v_out of capacity one (effectively
unbounded for source/sink/uncuttable vertices); each undirected edge becomes
a pair of unbounded arcs between the out/in copies.  The arc skeleton is
static per graph and cached on it; only the capacity vector is rebuilt per
query, so repeated cuts on one graph stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import EMPTY, Graph, VertexSet

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def _dinic(head, nxt, to, cap, source, sink, n_nodes):
    total = 0
    level = np.empty(n_nodes, dtype=np.int64)
    it = np.empty(n_nodes, dtype=np.int64)
    queue = np.empty(n_nodes, dtype=np.int64)
    path = np.empty(n_nodes + 1, dtype=np.int64)
    while True:
        for i in range(n_nodes):
            level[i] = -1
        level[source] = 0
        queue[0] = source
        qh, qt = 0, 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            a = head[u]
            while a != -1:
                if cap[a] > 0 and level[to[a]] < 0:
                    level[to[a]] = level[u] + 1
                    queue[qt] = to[a]
                    qt += 1
                a = nxt[a]
        if level[sink] < 0:
            return total
        for i in range(n_nodes):
            it[i] = head[i]
        # repeatedly trace source->sink paths in the level graph
        depth = 0
        u = source
        while True:
            if u == sink:
                bottleneck = np.int64(1) << 60
                for i in range(depth):
                    if cap[path[i]] < bottleneck:
                        bottleneck = cap[path[i]]
                for i in range(depth):
                    cap[path[i]] -= bottleneck
                    cap[path[i] ^ 1] += bottleneck
                total += bottleneck
                # retreat to the first saturated arc on the path
                u = source
                depth = 0
                continue
            a = it[u]
            advanced = False
            while a != -1:
                if cap[a] > 0 and level[to[a]] == level[u] + 1:
                    it[u] = a
                    path[depth] = a
                    depth += 1
                    u = to[a]
                    advanced = True
                    break
                a = nxt[a]
            if advanced:
                continue
            it[u] = -1
            level[u] = -1
            if u == source:
                break
            depth -= 1
            u = to[path[depth] ^ 1]
    return total


@njit(cache=True)
def _reach_forward(head, nxt, to, cap, start, n_nodes):
    seen = np.zeros(n_nodes, dtype=np.bool_)
    queue = np.empty(n_nodes, dtype=np.int64)
    seen[start] = True
    queue[0] = start
    qh, qt = 0, 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        a = head[u]
        while a != -1:
            w = to[a]
            if cap[a] > 0 and not seen[w]:
                seen[w] = True
                queue[qt] = w
                qt += 1
            a = nxt[a]
    return seen


@njit(cache=True)
def _reach_backward(head, nxt, to, cap, start, n_nodes):
    # nodes from which `start` is reachable along residual arcs: the arc
    # paired with slot a runs to[a] -> u, so scanning u's slots with cap[a^1]
    # enumerates residual in-arcs of u
    seen = np.zeros(n_nodes, dtype=np.bool_)
    queue = np.empty(n_nodes, dtype=np.int64)
    seen[start] = True
    queue[0] = start
    qh, qt = 0, 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        a = head[u]
        while a != -1:
            w = to[a]
            if cap[a ^ 1] > 0 and not seen[w]:
                seen[w] = True
                queue[qt] = w
                qt += 1
            a = nxt[a]
    return seen


class _ArcTemplate:
    """Static arc skeleton of a graph's split digraph."""

    __slots__ = (
        "n",
        "n_nodes",
        "head",
        "nxt",
        "to",
        "base_cap",
        "internal_idx",
        "source_idx",
        "sink_idx",
        "big",
    )

    def __init__(self, g: Graph):
        n = g.n
        m = g.m
        n_arcs = 2 * n + 4 * m + 4 * n  # internal, edge, source, sink slots
        self.n = n
        self.n_nodes = 2 * n + 2
        self.big = n + 16
        head = np.full(self.n_nodes, -1, dtype=np.int64)
        nxt = np.empty(n_arcs, dtype=np.int64)
        to = np.empty(n_arcs, dtype=np.int64)
        base_cap = np.zeros(n_arcs, dtype=np.int64)
        pos = 0

        def add_arc(u, v, c):
            nonlocal pos
            to[pos] = v
            base_cap[pos] = c
            nxt[pos] = head[u]
            head[u] = pos
            pos += 1

        internal_idx = np.empty(n, dtype=np.int64)
        for v in range(n):
            internal_idx[v] = pos
            add_arc(2 * v, 2 * v + 1, 0)
            add_arc(2 * v + 1, 2 * v, 0)
        for u, v in g.edges():
            add_arc(2 * u + 1, 2 * v, self.big)
            add_arc(2 * v, 2 * u + 1, 0)
            add_arc(2 * v + 1, 2 * u, self.big)
            add_arc(2 * u, 2 * v + 1, 0)
        source_idx = np.empty(n, dtype=np.int64)
        source = 2 * n
        for v in range(n):
            source_idx[v] = pos
            add_arc(source, 2 * v + 1, 0)
            add_arc(2 * v + 1, source, 0)
        sink_idx = np.empty(n, dtype=np.int64)
        sink = 2 * n + 1
        for v in range(n):
            sink_idx[v] = pos
            add_arc(2 * v, sink, 0)
            add_arc(sink, 2 * v, 0)
        self.head = head
        self.nxt = nxt
        self.to = to
        self.base_cap = base_cap
        self.internal_idx = internal_idx
        self.source_idx = source_idx
        self.sink_idx = sink_idx


def _template(g: Graph) -> _ArcTemplate:
    tpl = g._arc_template
    if tpl is None:
        tpl = _ArcTemplate(g)
        g._arc_template = tpl
    return tpl


@dataclass(frozen=True)
class CutResult:
    """A minimum vertex cut in both canonical positions."""

    size: int
    near_sources: VertexSet  # cut pushed maximally toward the source side
    near_sinks: VertexSet  # cut pushed maximally toward the sink side


def min_vertex_cut(
    g: Graph,
    sources: VertexSet,
    sinks: VertexSet,
    *,
    uncuttable: VertexSet = EMPTY,
    removed: VertexSet = EMPTY,
) -> CutResult | None:
    """Minimum set of vertices outside ``sources | sinks`` whose removal
    disconnects the two sides of ``g`` minus ``removed``.

    Returns None when no such cut exists: an edge joins the sides directly,
    or every route runs through an uncuttable vertex bridging them.
    """
    if not sources or not sinks:
        raise ValueError("source and sink sets must be nonempty")
    if sources & sinks:
        raise ValueError("source and sink sets must be disjoint")
    if (sources | sinks) & removed:
        raise ValueError("sources/sinks overlap removed vertices")

    sink_mask = 0
    for v in sinks:
        sink_mask |= 1 << v
    for u in sources:
        if g.adj_mask[u] & sink_mask:
            return None

    tpl = _template(g)
    cap = tpl.base_cap.copy()
    cap[tpl.internal_idx] = 1
    exempt = sources | sinks | uncuttable
    if exempt:
        cap[tpl.internal_idx[list(exempt)]] = tpl.big
    if removed:
        cap[tpl.internal_idx[list(removed)]] = 0
    cap[tpl.source_idx[list(sources)]] = tpl.big
    cap[tpl.sink_idx[list(sinks)]] = tpl.big

    source_node = 2 * tpl.n
    sink_node = 2 * tpl.n + 1
    flow = int(_dinic(tpl.head, tpl.nxt, tpl.to, cap, source_node, sink_node, tpl.n_nodes))
    if flow > g.n:
        # only possible when flow rides uncuttable vertices on both sides
        return None

    fwd = _reach_forward(tpl.head, tpl.nxt, tpl.to, cap, source_node, tpl.n_nodes)
    bwd = _reach_backward(tpl.head, tpl.nxt, tpl.to, cap, sink_node, tpl.n_nodes)
    # removed vertices carry zero-capacity arcs that look saturated; they are
    # not part of the graph and never belong to the cut
    near_sources = frozenset(
        v
        for v in range(g.n)
        if fwd[2 * v] and not fwd[2 * v + 1] and v not in removed
    )
    near_sinks = frozenset(
        v
        for v in range(g.n)
        if bwd[2 * v + 1] and not bwd[2 * v] and v not in removed
    )
    return CutResult(flow, near_sources, near_sinks)


def warmup() -> None:
    """Force JIT compilation of the flow kernels on a toy instance."""
    g = Graph(3, [(0, 1), (1, 2)])
    min_vertex_cut(g, frozenset({0}), frozenset({2}))
