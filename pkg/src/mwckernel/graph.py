"""Undirected simple graphs over dense integer ids, instance types and file I/O.

Vertex sets are plain ``frozenset[int]`` throughout the package; the graph
additionally keeps per-vertex neighbor bitmasks so that reachability queries
run on machine-word operations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator

VertexSet = frozenset[int]

EMPTY: VertexSet = frozenset()


class ParseError(ValueError):
    """Raised on malformed instance text; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def set_of(mask: int) -> VertexSet:
    return frozenset(bits(mask))


class Graph:
    """Immutable simple graph on vertices ``0..n-1`` with sorted adjacency."""

    __slots__ = ("n", "adj", "adj_mask", "_arc_template", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        neighbor_sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(s)) for s in neighbor_sets
        )
        self.adj_mask: tuple[int, ...] = tuple(mask_of(s) for s in neighbor_sets)
        self._arc_template = None
        self._hash = None

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj_mask[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def reachable_mask(g: Graph, sources: int, blocked: int = 0) -> int:
    """Bitmask of vertices reachable from ``sources`` avoiding ``blocked``.

    Source vertices inside ``blocked`` are dropped; a source reaches itself.
    """
    adj = g.adj_mask
    frontier = sources & ~blocked
    reached = frontier
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= adj[v]
        frontier = nxt & ~blocked & ~reached
        reached |= frontier
    return reached


def reachable_set(g: Graph, sources: VertexSet, blocked: VertexSet = EMPTY) -> VertexSet:
    return set_of(reachable_mask(g, mask_of(sources), mask_of(blocked)))


def connected_components(g: Graph, within: int | None = None) -> list[int]:
    """Component masks of the subgraph induced on the ``within`` mask."""
    todo = g.full_mask if within is None else within
    blocked = g.full_mask & ~todo
    comps = []
    while todo:
        seed = todo & -todo
        comp = reachable_mask(g, seed, blocked)
        comps.append(comp)
        todo &= ~comp
    return comps


@dataclass(frozen=True)
class MwcInstance:
    """A multiway-cut instance: graph, terminal set and parameter ``k``."""

    graph: Graph
    terminals: VertexSet
    k: int

    def __post_init__(self):
        if not all(0 <= t < self.graph.n for t in self.terminals):
            raise ValueError("terminal out of range")
        if self.k < 0:
            raise ValueError("parameter k must be non-negative")

    @property
    def feasible(self) -> bool:
        """False when two terminals are adjacent; such instances have no cut."""
        terms = sorted(self.terminals)
        tmask = mask_of(terms)
        return all(self.graph.adj_mask[t] & tmask == 0 for t in terms)


@dataclass(frozen=True)
class SeparatorInstance:
    """Separation context: graph plus disjoint nonempty source/sink sets."""

    graph: Graph
    sources: VertexSet
    sinks: VertexSet

    def __post_init__(self):
        if not self.sources or not self.sinks:
            raise ValueError("source and sink sets must be nonempty")
        if self.sources & self.sinks:
            raise ValueError("source and sink sets must be disjoint")
        if not all(0 <= v < self.graph.n for v in self.sources | self.sinks):
            raise ValueError("source/sink vertex out of range")

    @property
    def interior(self) -> VertexSet:
        return frozenset(self.graph.vertices) - self.sources - self.sinks


# ---------------------------------------------------------------------------
# generators


def generate_lowerbound(r: int, x: int) -> SeparatorInstance:
    """Source vertex feeding ``r`` complete binary trees of height ``x``,
    every leaf attached to a common sink.

    Vertex layout: source 0; tree ``i`` occupies ``1 + i*size .. (i+1)*size``
    in heap order (children of offset j at 2j+1, 2j+2); sink is the last id.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x > 24:
        raise ValueError("tree height too large for dense vertex ids")
    size = (1 << (x + 1)) - 1
    n = 2 + r * size
    s = 0
    t = n - 1
    edges = []
    for i in range(r):
        base = 1 + i * size
        edges.append((s, base))
        for j in range(size):
            left, right = 2 * j + 1, 2 * j + 2
            if left < size:
                edges.append((base + j, base + left))
            if right < size:
                edges.append((base + j, base + right))
        first_leaf = (1 << x) - 1
        for j in range(first_leaf, size):
            edges.append((base + j, t))
    return SeparatorInstance(Graph(n, edges), frozenset({s}), frozenset({t}))


def generate_random(
    n: int, edge_prob: float, t_count: int, seed: int, k: int = 0
) -> MwcInstance:
    """Seeded Erdős–Rényi graph with ``t_count`` uniformly chosen terminals."""
    if t_count > n:
        raise ValueError("more terminals than vertices")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < edge_prob
    ]
    terminals = frozenset(rng.sample(range(n), t_count))
    return MwcInstance(Graph(n, edges), terminals, k)


def random_separator_instance(
    n: int, edge_prob: float, seed: int, side_max: int = 2
) -> SeparatorInstance:
    """Seeded random separation instance with small disjoint source/sink sets."""
    if n < 2:
        raise ValueError("need at least two vertices")
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < edge_prob
    ]
    size_x = rng.randint(1, min(side_max, n - 1))
    size_y = rng.randint(1, min(side_max, n - size_x))
    chosen = rng.sample(range(n), size_x + size_y)
    return SeparatorInstance(
        Graph(n, edges), frozenset(chosen[:size_x]), frozenset(chosen[size_x:])
    )


# ---------------------------------------------------------------------------
# contraction and induced subgraphs


def induced_subgraph(g: Graph, keep: VertexSet) -> tuple[Graph, tuple[int, ...]]:
    """Subgraph on ``keep`` with re-indexed ids; returns (graph, new->old)."""
    old_ids = tuple(sorted(keep))
    new_of = {old: new for new, old in enumerate(old_ids)}
    edges = [
        (new_of[u], new_of[v])
        for u, v in g.edges()
        if u in new_of and v in new_of
    ]
    return Graph(len(old_ids), edges), old_ids


def contract_outside(g: Graph, keep: VertexSet) -> tuple[Graph, dict[int, int]]:
    """Graph on ``keep`` where u,v are adjacent iff g has a u-v path whose
    internal vertices all lie outside ``keep``; returns (graph, old->new map).
    """
    if not all(0 <= v < g.n for v in keep):
        raise ValueError("keep contains out-of-range vertices")
    old_ids = sorted(keep)
    id_map = {old: new for new, old in enumerate(old_ids)}
    keep_mask = mask_of(keep)
    outside = g.full_mask & ~keep_mask
    edges = []
    for u in old_ids:
        # direct neighbors in keep, plus keep-vertices reachable through
        # outside-only interiors
        hit = g.adj_mask[u] & keep_mask
        through = reachable_mask(g, g.adj_mask[u] & outside, blocked=keep_mask)
        for w in bits(through):
            hit |= g.adj_mask[w] & keep_mask
        hit &= ~(1 << u)
        for v in bits(hit):
            if u < v:
                edges.append((id_map[u], id_map[v]))
    return Graph(len(old_ids), edges), id_map


# ---------------------------------------------------------------------------
# instance file format
#
#   c <comment>
#   p mwc <n> <m> <k>      (multiway-cut header)   followed by e/t records
#   p sep <n> <m>          (separation header)     followed by e/x/y records
#   e <u> <v>   t <v>   x <v>   y <v>


def _parse_lines(text: str):
    header = None
    header_line = 0
    records = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if header is not None:
                raise ParseError(line_no, "duplicate header")
            header = fields
            header_line = line_no
            continue
        if header is None:
            raise ParseError(line_no, "record before header")
        records.append((line_no, fields))
    if header is None:
        raise ParseError(1, "missing header")
    return header, header_line, records


def _int_field(line_no: int, token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_no, f"expected integer, got {token!r}") from None


def _check_vertex(line_no: int, v: int, n: int) -> int:
    if not 0 <= v < n:
        raise ParseError(line_no, f"vertex id out of range: {v}")
    return v


def _collect_edges(records, n, kinds):
    edges = []
    seen = set()
    marks: dict[str, set[int]] = {kind: set() for kind in kinds}
    for line_no, fields in records:
        tag = fields[0]
        if tag == "e":
            if len(fields) != 3:
                raise ParseError(line_no, "edge record needs two endpoints")
            u = _check_vertex(line_no, _int_field(line_no, fields[1]), n)
            v = _check_vertex(line_no, _int_field(line_no, fields[2]), n)
            if u == v:
                raise ParseError(line_no, f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParseError(line_no, f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
            edges.append(key)
        elif tag in marks:
            if len(fields) != 2:
                raise ParseError(line_no, f"{tag!r} record needs one vertex")
            marks[tag].add(_check_vertex(line_no, _int_field(line_no, fields[1]), n))
        else:
            raise ParseError(line_no, f"unknown record type {tag!r}")
    return edges, marks


def parse_instance(text: str) -> MwcInstance:
    """Parse multiway-cut instance text.

    Adjacent terminals are accepted; they surface via ``feasible`` instead.
    """
    header, header_line, records = _parse_lines(text)
    if len(header) != 5 or header[1] != "mwc":
        raise ParseError(header_line, "expected header 'p mwc <n> <m> <k>'")
    n = _int_field(header_line, header[2])
    k = _int_field(header_line, header[4])
    if n < 0 or k < 0:
        raise ParseError(header_line, "n and k must be non-negative")
    edges, marks = _collect_edges(records, n, ("t",))
    return MwcInstance(Graph(n, edges), frozenset(marks["t"]), k)


def parse_separator_instance(text: str) -> SeparatorInstance:
    header, header_line, records = _parse_lines(text)
    if len(header) != 4 or header[1] != "sep":
        raise ParseError(header_line, "expected header 'p sep <n> <m>'")
    n = _int_field(header_line, header[2])
    if n < 0:
        raise ParseError(header_line, "n must be non-negative")
    edges, marks = _collect_edges(records, n, ("x", "y"))
    if marks["x"] & marks["y"]:
        raise ParseError(header_line, "x and y sets must be disjoint")
    if not marks["x"] or not marks["y"]:
        raise ParseError(header_line, "x and y sets must be nonempty")
    return SeparatorInstance(Graph(n, edges), frozenset(marks["x"]), frozenset(marks["y"]))


def serialize_instance(inst: MwcInstance) -> str:
    g = inst.graph
    lines = [f"p mwc {g.n} {g.m} {inst.k}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    lines.extend(f"t {t}" for t in sorted(inst.terminals))
    return "\n".join(lines) + "\n"


def serialize_separator_instance(si: SeparatorInstance) -> str:
    g = si.graph
    lines = [f"p sep {g.n} {g.m}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    lines.extend(f"x {v}" for v in sorted(si.sources))
    lines.extend(f"y {v}" for v in sorted(si.sinks))
    return "\n".join(lines) + "\n"


def load_any(text: str) -> MwcInstance | SeparatorInstance:
    """Parse either instance format, dispatching on the header."""
    header, header_line, _ = _parse_lines(text)
    if len(header) >= 2 and header[1] == "mwc":
        return parse_instance(text)
    if len(header) >= 2 and header[1] == "sep":
        return parse_separator_instance(text)
    raise ParseError(header_line, f"unknown instance kind {header[1] if len(header) > 1 else '?'!r}")
