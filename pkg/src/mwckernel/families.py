"""Ordered families of vertex sets: derived structure (predecessors, visible
and private parts), an executable checker for the structural conditions that
make witness-driven enumeration sound, level-by-level enumeration of
principal sets, and the counting audit behind the union size bound.

Two family flavors implement one access interface: ``EnumeratedFamily`` holds
an explicit list of sets with a strict partial order (the brute-force side),
while ``ImportantSeparatorFamily`` answers queries through the flow engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain
from typing import Callable, Iterable, Sequence

from .graph import EMPTY, ParseError, SeparatorInstance, VertexSet
from .separators import (
    ExcessBudget,
    Separator,
    smallest_important_separator,
    witness,
)


class FamilyOrderError(ValueError):
    """The supplied order is not a strict partial order (or is ambiguous)."""


class EnumeratedFamily:
    """Explicit family of distinct vertex sets under a strict partial order.

    Order rows are kept as bitmasks over element indexes, so structural
    queries stay cheap even with a few hundred elements.
    """

    def __init__(
        self,
        sets: Sequence[VertexSet],
        order_pairs: Iterable[tuple[int, int]],
        universe: VertexSet | None = None,
    ):
        self.sets: tuple[VertexSet, ...] = tuple(frozenset(s) for s in sets)
        if len(set(self.sets)) != len(self.sets):
            raise FamilyOrderError("family contains duplicate sets")
        f = len(self.sets)
        rows = [0] * f
        for i, j in order_pairs:
            if not (0 <= i < f and 0 <= j < f):
                raise FamilyOrderError(f"order pair ({i},{j}) out of range")
            if i == j:
                raise FamilyOrderError(f"order is not irreflexive at {i}")
            rows[i] |= 1 << j
        for i in range(f):
            below = rows[i]
            j_mask = below
            while j_mask:
                low = j_mask & -j_mask
                j = low.bit_length() - 1
                j_mask ^= low
                if rows[j] >> i & 1:
                    raise FamilyOrderError(f"order is not antisymmetric on ({i},{j})")
                if rows[j] & ~below:
                    raise FamilyOrderError(f"order is not transitive through {j}")
        self._rows = tuple(rows)
        cols = [0] * f
        for i in range(f):
            for j in _bits(rows[i]):
                cols[j] |= 1 << i
        self._cols = tuple(cols)
        self._index = {s: i for i, s in enumerate(self.sets)}
        if universe is None:
            universe = frozenset(chain.from_iterable(self.sets))
        self.universe: VertexSet = frozenset(universe)

    def __len__(self) -> int:
        return len(self.sets)

    def index(self, s: VertexSet) -> int:
        return self._index[frozenset(s)]

    def less(self, i: int, j: int) -> bool:
        return bool(self._rows[i] >> j & 1)

    def below(self, i: int) -> int:
        """Bitmask of indexes strictly preceding element i."""
        return self._cols[i]

    def above(self, i: int) -> int:
        return self._rows[i]

    def smallest_index(self) -> int | None:
        f = len(self.sets)
        if f == 0:
            return None
        everyone = (1 << f) - 1
        found = [i for i in range(f) if self._rows[i] | (1 << i) == everyone]
        return found[0] if len(found) == 1 else None

    def base_size(self) -> int:
        i = self.smallest_index()
        if i is None:
            raise FamilyOrderError("family has no unique smallest element")
        return len(self.sets[i])

    def excess(self, i: int) -> int:
        return len(self.sets[i]) - self.base_size()

    def predecessors(self, i: int) -> list[int]:
        """Immediate predecessors: nothing of the family fits strictly between."""
        below = self._cols[i]
        return [j for j in _bits(below) if self._rows[j] & below == 0]

    def successors(self, i: int) -> list[int]:
        above = self._rows[i]
        return [j for j in _bits(above) if self._cols[j] & above == 0]

    def covered(self, i: int) -> VertexSet:
        """Vertices lying in some predecessor of element i but not in it."""
        acc: set[int] = set()
        for j in _bits(self._cols[i]):
            acc |= self.sets[j]
        return frozenset(acc) - self.sets[i]

    def visible(self, i: int) -> VertexSet:
        preds = self.predecessors(i)
        out: set[int] = set()
        for v in set(chain.from_iterable(self.sets[p] for p in preds)):
            if not any(self._covers(p, v) for p in preds):
                out.add(v)
        return frozenset(out)

    def _covers(self, i: int, v: int) -> bool:
        return any(
            v in self.sets[j] and v not in self.sets[i]
            for j in _bits(self._cols[i])
        )

    def private(self, i: int) -> VertexSet:
        acc: set[int] = set()
        for j in _bits(self._cols[i]):
            acc |= self.sets[j]
        return self.sets[i] - acc

    def private_at(self, i: int, level: int) -> VertexSet:
        """Members of the private part not given up to any element within the
        excess budget ``level`` sitting strictly beyond element i."""
        keep = set(self.private(i))
        for j in _bits(self._rows[i]):
            if self.excess(j) <= level:
                keep -= self.sets[i] - self.sets[j]
        return frozenset(keep)

    def elements_up_to(self, level: int) -> list[int]:
        return [i for i in range(len(self.sets)) if self.excess(i) <= level]

    def principal_levels(self, x: int) -> list[list[VertexSet]]:
        """Definitional principal sets (nonempty private part) per excess level."""
        levels: list[list[VertexSet]] = [[] for _ in range(x + 1)]
        for i in range(len(self.sets)):
            ex = self.excess(i)
            if ex <= x and self.private(i):
                levels[ex].append(self.sets[i])
        for bucket in levels:
            bucket.sort(key=sorted)
        return levels

    def union_up_to(self, x: int) -> VertexSet:
        out: set[int] = set()
        for i in self.elements_up_to(x):
            out |= self.sets[i]
        return frozenset(out)

    # family-view interface -------------------------------------------------

    def smallest_element(self) -> VertexSet | None:
        i = self.smallest_index()
        return None if i is None else self.sets[i]

    def members(self, element: VertexSet) -> VertexSet:
        return element

    def precedes(self, a: VertexSet, b: VertexSet) -> bool:
        return self.less(self._index[a], self._index[b])

    def witness_of(self, element: VertexSet, v: int) -> VertexSet | None:
        i = self._index[element]
        cands = [j for j in _bits(self._rows[i]) if v not in self.sets[j]]
        cand_mask = 0
        for j in cands:
            cand_mask |= 1 << j
        minimal = [j for j in cands if self._cols[j] & cand_mask == 0]
        if not minimal:
            return None
        if len(minimal) > 1:
            raise FamilyOrderError(
                f"element {sorted(element)} has {len(minimal)} minimal successors omitting {v}"
            )
        return self.sets[minimal[0]]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# derived structure


@dataclass(frozen=True)
class FamilyStructure:
    """All definitional derived quantities of an enumerated family."""

    sets: tuple[VertexSet, ...]
    excess: tuple[int, ...]
    predecessors: tuple[tuple[int, ...], ...]
    successors: tuple[tuple[int, ...], ...]
    covered: tuple[VertexSet, ...]
    visible: tuple[VertexSet, ...]
    private: tuple[VertexSet, ...]
    private_levels: tuple[tuple[VertexSet, ...], ...]


def derive_structure(fam: EnumeratedFamily) -> FamilyStructure:
    if len(fam) == 0:
        raise FamilyOrderError("cannot derive structure of an empty family")
    max_ex = max(fam.excess(i) for i in range(len(fam)))
    private_levels = tuple(
        tuple(
            fam.private_at(i, lvl) if fam.excess(i) <= lvl else EMPTY
            for lvl in range(max_ex + 1)
        )
        for i in range(len(fam))
    )
    return FamilyStructure(
        sets=fam.sets,
        excess=tuple(fam.excess(i) for i in range(len(fam))),
        predecessors=tuple(tuple(fam.predecessors(i)) for i in range(len(fam))),
        successors=tuple(tuple(fam.successors(i)) for i in range(len(fam))),
        covered=tuple(fam.covered(i) for i in range(len(fam))),
        visible=tuple(fam.visible(i) for i in range(len(fam))),
        private=tuple(fam.private(i) for i in range(len(fam))),
        private_levels=private_levels,
    )


# ---------------------------------------------------------------------------
# axiom checker


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def by_name(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _minimal_successors_omitting(fam: EnumeratedFamily, i: int, v: int) -> list[int]:
    cands = [j for j in _bits(fam.above(i)) if v not in fam.sets[j]]
    cand_mask = 0
    for j in cands:
        cand_mask |= 1 << j
    return [j for j in cands if fam.below(j) & cand_mask == 0]


def check_axioms(
    fam: EnumeratedFamily,
    witness_fn: Callable[[VertexSet, int], VertexSet | None] | None = None,
    smallest_fn: Callable[[], VertexSet | None] | None = None,
) -> AxiomReport:
    """Run the structural conditions on an explicit family, plus agreement of
    the supplied engine callbacks with their brute-force counterparts."""
    f = len(fam)
    if f == 0:
        raise FamilyOrderError("cannot check an empty family")
    checks: list[AxiomCheck] = []

    smallest_idx = fam.smallest_index()
    checks.append(
        AxiomCheck(
            "unique_smallest",
            smallest_idx is not None,
            "" if smallest_idx is not None else "no single element precedes all others",
        )
    )

    bad = next(
        (
            (i, j)
            for i in range(f)
            for j in _bits(fam.above(i))
            if len(fam.sets[i]) >= len(fam.sets[j])
        ),
        None,
    )
    checks.append(
        AxiomCheck(
            "size_monotone",
            bad is None,
            ""
            if bad is None
            else f"{sorted(fam.sets[bad[0]])} precedes {sorted(fam.sets[bad[1]])} without being smaller",
        )
    )

    sw_fail = ""
    for i in range(f):
        for v in sorted(fam.sets[i]):
            minimal = _minimal_successors_omitting(fam, i, v)
            if len(minimal) > 1:
                sw_fail = (
                    f"element {sorted(fam.sets[i])} has {len(minimal)} minimal "
                    f"successors omitting {v}"
                )
                break
        if sw_fail:
            break
    checks.append(AxiomCheck("single_witness", not sw_fail, sw_fail))

    te_fail = ""
    for i in range(f):
        for j in _bits(fam.above(i)):
            gone = fam.sets[i] - fam.sets[j]
            if not gone:
                continue
            for k in _bits(fam.above(j)):
                back = gone & fam.sets[k]
                if back:
                    te_fail = (
                        f"vertex {min(back)} leaves {sorted(fam.sets[i])} at "
                        f"{sorted(fam.sets[j])} but returns in {sorted(fam.sets[k])}"
                    )
                    break
            if te_fail:
                break
        if te_fail:
            break
    checks.append(AxiomCheck("order_elimination", not te_fail, te_fail))

    lvs_fail = ""
    dvs_fail = ""
    for i in range(f):
        vis = fam.visible(i)
        if not lvs_fail:
            for p in fam.predecessors(i):
                if len(fam.sets[p]) > len(vis):
                    lvs_fail = (
                        f"predecessor {sorted(fam.sets[p])} outsizes the visible "
                        f"set {sorted(vis)} of {sorted(fam.sets[i])}"
                    )
                    break
        if not dvs_fail and i != smallest_idx and vis <= fam.sets[i]:
            dvs_fail = f"visible set of {sorted(fam.sets[i])} is contained in it"
    checks.append(AxiomCheck("visible_lower_bound", not lvs_fail, lvs_fail))
    checks.append(AxiomCheck("visible_not_inside", not dvs_fail, dvs_fail))

    if witness_fn is not None or smallest_fn is not None:
        agree_fail = ""
        if smallest_fn is not None:
            engine_sm = smallest_fn()
            family_sm = fam.smallest_element()
            if engine_sm != family_sm:
                agree_fail = (
                    f"engine smallest {sorted(engine_sm or ())} != "
                    f"family smallest {sorted(family_sm or ())}"
                )
        if witness_fn is not None and not agree_fail:
            for i in range(f):
                for v in sorted(fam.sets[i]):
                    minimal = _minimal_successors_omitting(fam, i, v)
                    expected = fam.sets[minimal[0]] if len(minimal) == 1 else None
                    got = witness_fn(fam.sets[i], v)
                    if got != expected:
                        agree_fail = (
                            f"witness of {v} w.r.t. {sorted(fam.sets[i])}: engine "
                            f"{sorted(got) if got else None} != family "
                            f"{sorted(expected) if expected else None}"
                        )
                        break
                if agree_fail:
                    break
        checks.append(AxiomCheck("engine_agreement", not agree_fail, agree_fail))

    return AxiomReport(tuple(checks))


# ---------------------------------------------------------------------------
# engine-backed family view


class ImportantSeparatorFamily:
    """Important separators of a separation instance, accessed through the
    flow engine (smallest element and witnesses on demand)."""

    def __init__(self, si: SeparatorInstance):
        self.si = si
        smallest = smallest_important_separator(si)
        if smallest is None:
            raise ValueError("no separator exists: the sides are adjacent")
        if not smallest.vertices:
            raise ValueError("degenerate instance: the sides are already disconnected")
        self._smallest = smallest

    @property
    def universe(self) -> VertexSet:
        return self.si.interior

    def smallest_element(self) -> Separator:
        return self._smallest

    def members(self, element: Separator) -> VertexSet:
        return element.vertices

    def witness_of(self, element: Separator, v: int) -> Separator | None:
        return witness(element, v)

    def precedes(self, a: Separator, b: Separator) -> bool:
        return a.source_side < b.source_side


# ---------------------------------------------------------------------------
# principal enumeration


@dataclass(frozen=True)
class PrincipalFamilyReport:
    """Principal sets per excess level with their private parts, the union,
    and the per-level mass values."""

    r: int
    x: int
    levels: tuple[tuple[VertexSet, ...], ...]
    private_parts: tuple[tuple[VertexSet, ...], ...]
    union: VertexSet
    level_mass: tuple[int, ...]

    def all_sets(self) -> list[VertexSet]:
        return [s for level in self.levels for s in level]

    def cumulative_counts(self) -> list[int]:
        counts = []
        total = 0
        for level in self.levels:
            total += len(level)
            counts.append(total)
        return counts

    def count_bound(self, level: int) -> int:
        return 2 ** (level + 1) * self.r

    @property
    def union_bound(self) -> int:
        return 2 ** (self.x + 1) * self.r

    @property
    def within_bounds(self) -> bool:
        counts = self.cumulative_counts()
        if any(counts[i] > self.count_bound(i) for i in range(self.x + 1)):
            return False
        if len(self.union) > self.union_bound:
            return False
        return all(
            self.level_mass[i] <= 2**i * self.r for i in range(self.x + 1)
        )


def enumerate_principal(fam, x: int) -> PrincipalFamilyReport:
    """Level-by-level enumeration of principal sets up to excess ``x``.

    Level 0 is the smallest element.  Each element discovered at level
    ``i-1`` or earlier contributes the witnesses of its members; a candidate
    of excess ``i`` joins level ``i`` unless it was seen before or the known
    principal sets preceding it already cover all of its members.
    """
    if x < 0:
        raise ValueError("excess budget must be non-negative")
    smallest = fam.smallest_element()
    if smallest is None:
        raise ValueError("family has no smallest element")
    base_members = fam.members(smallest)
    budget = ExcessBudget(r=len(base_members), x=x)
    r = budget.r

    elements: dict[VertexSet, object] = {base_members: smallest}
    levels: list[list[VertexSet]] = [[base_members]]
    witness_members: dict[tuple[VertexSet, int], VertexSet | None] = {}
    pending: dict[int, list[VertexSet]] = {}
    pending_element: dict[VertexSet, object] = {}

    def expand(element, members: VertexSet) -> None:
        for v in sorted(members):
            wit = fam.witness_of(element, v)
            if wit is None:
                witness_members[(members, v)] = None
                continue
            wm = fam.members(wit)
            witness_members[(members, v)] = wm
            if wm not in pending_element:
                pending_element[wm] = wit
                pending.setdefault(len(wm) - r, []).append(wm)

    if x > 0:
        expand(smallest, base_members)
    for level in range(1, x + 1):
        added: list[VertexSet] = []
        for wm in sorted(pending.get(level, ()), key=sorted):
            if wm in elements:
                continue
            welem = pending_element[wm]
            covered: set[int] = set()
            for pm, pe in elements.items():
                if fam.precedes(pe, welem):
                    covered |= pm
            if wm <= covered:
                continue
            elements[wm] = welem
            added.append(wm)
            if level < x:
                expand(welem, wm)
        levels.append(added)

    privates: dict[VertexSet, VertexSet] = {}
    for members, elem in elements.items():
        covered = set()
        for pm, pe in elements.items():
            if pm != members and fam.precedes(pe, elem):
                covered |= pm
        privates[members] = members - covered

    mass: list[int] = []
    for i in range(x + 1):
        total = 0
        for members, part in privates.items():
            ex = len(members) - r
            if ex > i:
                continue
            if ex == i:
                live = len(part)
            else:
                live = sum(
                    1
                    for v in part
                    if witness_members[(members, v)] is None
                    or len(witness_members[(members, v)]) - r > i
                )
            total += (1 << (i - ex)) * live
        mass.append(total)

    union: set[int] = set()
    for s in elements:
        union |= s
    return PrincipalFamilyReport(
        r=r,
        x=x,
        levels=tuple(tuple(level) for level in levels),
        private_parts=tuple(
            tuple(privates[s] for s in level) for level in levels
        ),
        union=frozenset(union),
        level_mass=tuple(mass),
    )


def union_of_excess(fam, x: int) -> VertexSet:
    """Union of all important separators of excess at most ``x``, computed
    through the principal enumeration."""
    return enumerate_principal(fam, x).union


# ---------------------------------------------------------------------------
# counting audit


@dataclass(frozen=True)
class CountingAudit:
    """Definitional mass accounting over an explicit family, with the four
    counting inequalities and the private/visible complement identity."""

    r: int
    x: int
    level_mass: tuple[int, ...]
    mass_bound_ok: bool
    doubling_ok: bool
    private_bound_ok: bool
    transfer_ok: bool
    private_complement_ok: bool
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return (
            self.mass_bound_ok
            and self.doubling_ok
            and self.private_bound_ok
            and self.transfer_ok
            and self.private_complement_ok
        )


def counting_audit(fam: EnumeratedFamily, x: int) -> CountingAudit:
    if len(fam) == 0:
        raise FamilyOrderError("cannot audit an empty family")
    r = fam.base_size()
    smallest_idx = fam.smallest_index()
    failures: list[str] = []

    scope = [i for i in range(len(fam)) if fam.excess(i) <= x]

    mass = []
    for lvl in range(x + 1):
        total = sum(
            (1 << (lvl - fam.excess(i))) * len(fam.private_at(i, lvl))
            for i in scope
            if fam.excess(i) <= lvl
        )
        mass.append(total)

    mass_bound_ok = True
    for lvl, value in enumerate(mass):
        if value > (1 << lvl) * r:
            mass_bound_ok = False
            failures.append(f"mass at level {lvl} is {value} > {(1 << lvl) * r}")

    doubling_ok = True
    for lvl in range(x):
        if mass[lvl + 1] > 2 * mass[lvl]:
            doubling_ok = False
            failures.append(
                f"mass doubles too fast: M({lvl + 1})={mass[lvl + 1]} > 2*{mass[lvl]}"
            )

    private_bound_ok = True
    for i in scope:
        if i == smallest_idx:
            continue
        part = fam.private(i)
        if not part:
            continue
        vis_out = fam.visible(i) - fam.sets[i]
        bound = 0
        ok = True
        for v in sorted(vis_out):
            origin = _private_origin(fam, i, v)
            if origin is None:
                ok = False
                failures.append(
                    f"no origin element yields {sorted(fam.sets[i])} as witness of {v}"
                )
                break
            bound += 1 << (fam.excess(i) - fam.excess(origin))
        if ok and len(part) > bound:
            private_bound_ok = False
            failures.append(
                f"private part of {sorted(fam.sets[i])} has {len(part)} members, "
                f"visible-origin bound is {bound}"
            )
        elif not ok:
            private_bound_ok = False

    transfer_ok = True
    for lvl in range(x):
        lhs = 0
        for i in scope:
            if fam.excess(i) <= lvl:
                dropped = fam.private_at(i, lvl) - fam.private_at(i, lvl + 1)
                lhs += (1 << (lvl - fam.excess(i) + 1)) * len(dropped)
        rhs = sum(
            len(fam.private(i))
            for i in scope
            if fam.excess(i) == lvl + 1
        )
        if lhs < rhs:
            transfer_ok = False
            failures.append(
                f"level {lvl} transfer fails: released weight {lhs} < incoming {rhs}"
            )

    private_complement_ok = True
    for i in scope:
        if fam.private(i) != fam.sets[i] - fam.visible(i):
            private_complement_ok = False
            failures.append(
                f"private part of {sorted(fam.sets[i])} is not its visible complement"
            )

    return CountingAudit(
        r=r,
        x=x,
        level_mass=tuple(mass),
        mass_bound_ok=mass_bound_ok,
        doubling_ok=doubling_ok,
        private_bound_ok=private_bound_ok,
        transfer_ok=transfer_ok,
        private_complement_ok=private_complement_ok,
        failures=tuple(failures),
    )


def _private_origin(fam: EnumeratedFamily, i: int, v: int) -> int | None:
    """An element preceding i that holds v in its private part and has i as
    the minimal successor omitting v."""
    for j in _bits(fam.below(i)):
        if v not in fam.private(j):
            continue
        minimal = _minimal_successors_omitting(fam, j, v)
        if minimal == [i]:
            return j
    return None


# ---------------------------------------------------------------------------
# explicit family files (used by the CLI checker)
#
#   p family <n>
#   s <v1> <v2> ...      one set per line, indexed by appearance order
#   o <i> <j>            set i strictly precedes set j


def parse_family_text(text: str) -> EnumeratedFamily:
    n = None
    sets: list[VertexSet] = []
    pairs: list[tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if n is not None:
                raise ParseError(line_no, "duplicate header")
            if len(fields) != 3 or fields[1] != "family":
                raise ParseError(line_no, "expected header 'p family <n>'")
            n = int(fields[2])
        elif fields[0] == "s":
            if n is None:
                raise ParseError(line_no, "record before header")
            try:
                members = frozenset(int(tok) for tok in fields[1:])
            except ValueError:
                raise ParseError(line_no, "set members must be integers") from None
            if any(not 0 <= v < n for v in members):
                raise ParseError(line_no, "vertex id out of range")
            sets.append(members)
        elif fields[0] == "o":
            if n is None:
                raise ParseError(line_no, "record before header")
            if len(fields) != 3:
                raise ParseError(line_no, "order record needs two indexes")
            try:
                pairs.append((int(fields[1]), int(fields[2])))
            except ValueError:
                raise ParseError(line_no, "order indexes must be integers") from None
        else:
            raise ParseError(line_no, f"unknown record type {fields[0]!r}")
    if n is None:
        raise ParseError(1, "missing header")
    try:
        return EnumeratedFamily(sets, pairs, universe=frozenset(range(n)))
    except FamilyOrderError as exc:
        raise ParseError(1, str(exc)) from None
