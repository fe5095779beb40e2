"""Level towers of property-tagged bonds.

A tower of order n holds element sets X_0..X_n. Every element above level 0
is a bond: it binds one nonempty subset of the level below (its support) and
carries exactly one property token drawn from that level's omega table.
Boundary maps dissolve bonds back into their supports; identity bonds embed
an element one level up with a singleton boundary.

All operations are functional: they return a new tower and never mutate
their input, so any value can be shared freely across threads.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    DuplicateId,
    EmptyBase,
    EmptySupport,
    LevelOutOfRange,
    MixedLevels,
    NotABond,
    PropertyNotAssigned,
    ReservedProperty,
    UnknownElement,
)
from .report import CheckReport, Finding, report

RawId = str | int
PropertyToken = str

#: Reserved token carried by identity bonds; user data may not claim it.
IDENTITY_PROPERTY: PropertyToken = "id"


def id_key(raw: RawId):
    """Total order over raw identifiers: all ints before all strings."""
    return (isinstance(raw, str), raw)


@dataclass(frozen=True)
class ElementId:
    """An element of the tower, addressed by (level, identifier)."""

    level: int
    id: RawId

    @property
    def key(self):
        return (self.level, id_key(self.id))

    def __repr__(self):
        return f"{self.level}:{self.id}"


def sorted_elements(elements: Iterable[ElementId]) -> list[ElementId]:
    return sorted(elements, key=lambda e: e.key)


@dataclass(frozen=True)
class Support:
    """A finite set of elements, all at one level.

    The empty support exists only as an omega-table key (behaviour of
    assignments under unions needs a value at the empty collection); bonds
    always bind a nonempty support.
    """

    level: int
    members: frozenset[ElementId]

    @classmethod
    def of(cls, members: Iterable[ElementId]) -> "Support":
        ms = frozenset(members)
        if not ms:
            raise EmptySupport("cannot infer a level for an empty support")
        levels = {m.level for m in ms}
        if len(levels) != 1:
            raise MixedLevels(f"support members span levels {sorted(levels)}")
        return cls(level=next(iter(levels)), members=ms)

    @classmethod
    def empty(cls, level: int) -> "Support":
        return cls(level=level, members=frozenset())

    def __iter__(self):
        return iter(sorted_elements(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, e: ElementId):
        return e in self.members

    @property
    def key(self):
        return tuple(e.key for e in sorted_elements(self.members))

    def raw_ids(self) -> list[RawId]:
        return [e.id for e in sorted_elements(self.members)]

    def union(self, other: "Support") -> "Support":
        if other.level != self.level:
            raise MixedLevels("union across levels")
        return Support(self.level, self.members | other.members)

    def intersection(self, other: "Support") -> "Support":
        if other.level != self.level:
            raise MixedLevels("intersection across levels")
        return Support(self.level, self.members & other.members)

    def issubset(self, other: "Support") -> bool:
        return self.level == other.level and self.members <= other.members

    def __repr__(self):
        return "{" + ",".join(str(e.id) for e in sorted_elements(self.members)) + "}"


@dataclass(frozen=True)
class Bond:
    """A registered binder: one support, one property token.

    A bond knows what it binds — its id never maps to a second support.
    """

    id: ElementId
    support: Support
    property: PropertyToken
    identity: bool = False

    @property
    def key(self):
        return self.id.key


@dataclass(frozen=True)
class FusionRecord:
    """One gluing event: operand levels (m, n) glued at level k."""

    k: int
    m: int
    n: int
    a: ElementId
    b: ElementId
    result: ElementId


OmegaTable = Mapping[Support, frozenset[PropertyToken]]


@dataclass(frozen=True, eq=True)
class Hyperstructure:
    order: int
    levels: tuple[frozenset[ElementId], ...]
    omegas: tuple[OmegaTable, ...]
    bonds: tuple[Bond, ...]
    fusion_log: tuple[FusionRecord, ...] = ()

    # -- derived indexes (cached; instances are immutable) --

    @cached_property
    def bond_index(self) -> dict[ElementId, Bond]:
        return {b.id: b for b in self.bonds}

    @cached_property
    def identity_index(self) -> dict[ElementId, ElementId]:
        """Maps each element to its identity bond, where one exists."""
        out: dict[ElementId, ElementId] = {}
        for b in self.bonds:
            if b.identity and len(b.support) == 1:
                (x,) = b.support.members
                out.setdefault(x, b.id)
        return out

    @cached_property
    def supports_index(self) -> dict[tuple[int, frozenset[ElementId]], list[Bond]]:
        out: dict[tuple[int, frozenset[ElementId]], list[Bond]] = {}
        for b in self.bonds:
            out.setdefault((b.id.level, b.support.members), []).append(b)
        return out

    # -- queries --

    def check_level(self, i: int) -> None:
        if not 0 <= i <= self.order:
            raise LevelOutOfRange(f"level {i} outside 0..{self.order}")

    def elements(self, i: int) -> frozenset[ElementId]:
        self.check_level(i)
        return self.levels[i]

    def all_elements(self) -> list[ElementId]:
        return [e for lvl in self.levels for e in sorted_elements(lvl)]

    def has_element(self, e: ElementId) -> bool:
        return 0 <= e.level <= self.order and e in self.levels[e.level]

    def element(self, i: int, raw: RawId) -> ElementId:
        e = ElementId(i, raw)
        if not self.has_element(e):
            raise UnknownElement(f"no element {raw!r} at level {i}")
        return e

    def support_at(self, i: int, raw_ids: Iterable[RawId]) -> Support:
        ids = list(raw_ids)
        if not ids:
            return Support.empty(i)
        return Support(i, frozenset(self.element(i, r) for r in ids))

    def bond(self, e: ElementId) -> Bond:
        if not self.has_element(e):
            raise UnknownElement(f"no element {e!r}")
        if e.level == 0:
            raise NotABond(f"{e!r} is a level-0 element")
        b = self.bond_index.get(e)
        if b is None:
            raise NotABond(f"{e!r} has no bond record")
        return b

    def is_bond(self, e: ElementId) -> bool:
        return self.has_element(e) and e in self.bond_index

    def bonds_at(self, i: int) -> list[Bond]:
        self.check_level(i)
        return sorted((b for b in self.bonds if b.id.level == i), key=lambda b: b.key)

    def omega(self, i: int, s: Support) -> frozenset[PropertyToken]:
        self.check_level(i)
        return self.omegas[i].get(s, frozenset())

    def top_level(self) -> int:
        return self.order

    @classmethod
    def empty(cls, order: int = 0) -> "Hyperstructure":
        n = order + 1
        return cls(order=order, levels=(frozenset(),) * n, omegas=({},) * n, bonds=())


# -- constructors and operations ------------------------------------------------


def new_hyperstructure(base: Iterable[RawId]) -> Hyperstructure:
    """Order-0 tower over the given base identifiers."""
    ids = list(base)
    if not ids:
        raise EmptyBase("base collection is empty")
    seen = set()
    for r in ids:
        if r in seen:
            raise DuplicateId(f"base identifier {r!r} repeats")
        seen.add(r)
    level0 = frozenset(ElementId(0, r) for r in ids)
    return Hyperstructure(order=0, levels=(level0,), omegas=({},), bonds=())


def _with_omega(h: Hyperstructure, i: int, s: Support, tokens: frozenset[PropertyToken]) -> Hyperstructure:
    tables = list(h.omegas)
    table = dict(tables[i])
    table[s] = tokens
    tables[i] = table
    return replace(h, omegas=tuple(tables))


def assign_property(h: Hyperstructure, i: int, s: Support, token: PropertyToken) -> Hyperstructure:
    """Add one property token to the omega table at level i. Idempotent."""
    h.check_level(i)
    if s.level != i:
        raise LevelOutOfRange(f"support at level {s.level}, expected {i}")
    if not s.members:
        raise EmptySupport("cannot assign a property to the empty support")
    for m in s.members:
        if not h.has_element(m):
            raise UnknownElement(f"support member {m!r} not in the tower")
    if token == IDENTITY_PROPERTY:
        raise ReservedProperty(f"{IDENTITY_PROPERTY!r} is reserved for identity bonds")
    have = h.omegas[i].get(s, frozenset())
    if token in have:
        return h
    return _with_omega(h, i, s, have | {token})


def _grow(h: Hyperstructure) -> Hyperstructure:
    return replace(
        h,
        order=h.order + 1,
        levels=h.levels + (frozenset(),),
        omegas=h.omegas + ({},),
    )


def _register(h: Hyperstructure, bond: Bond) -> Hyperstructure:
    lvl = bond.id.level
    levels = list(h.levels)
    levels[lvl] = levels[lvl] | {bond.id}
    bonds = tuple(sorted(h.bonds + (bond,), key=lambda b: b.key))  # canonical registry order
    return replace(h, levels=tuple(levels), bonds=bonds)


def add_bond(
    h: Hyperstructure,
    i: int,
    s: Support,
    token: PropertyToken,
    raw_id: RawId,
    _identity: bool = False,
) -> tuple[Hyperstructure, ElementId]:
    """Register a bond over the level-i support s; it becomes an element of X_{i+1}.

    Binding at the current top level grows the tower by one level.
    """
    h.check_level(i)
    if s.level != i:
        raise LevelOutOfRange(f"support at level {s.level}, expected {i}")
    if not s.members:
        raise EmptySupport("a bond must bind a nonempty support")
    for m in s.members:
        if not h.has_element(m):
            raise UnknownElement(f"support member {m!r} not in the tower")
    if token == IDENTITY_PROPERTY and not _identity:
        raise ReservedProperty(f"{IDENTITY_PROPERTY!r} is reserved for identity bonds")
    if token not in h.omega(i, s) and not _identity:
        raise PropertyNotAssigned(f"{token!r} not assigned to {s!r} at level {i}")
    if i == h.order:
        h = _grow(h)
    eid = ElementId(i + 1, raw_id)
    if h.has_element(eid):
        raise DuplicateId(f"element {raw_id!r} already present at level {i + 1}")
    if _identity and token not in h.omega(i, s):
        h = _with_omega(h, i, s, h.omega(i, s) | {token})
    h = _register(h, Bond(id=eid, support=s, property=token, identity=_identity))
    return h, eid


def identity_bond(h: Hyperstructure, i: int, x: ElementId) -> tuple[Hyperstructure, ElementId]:
    """The bond binding only {x}; created once and reused per element."""
    h.check_level(i)
    if x.level != i or not h.has_element(x):
        raise UnknownElement(f"no element {x!r} at level {i}")
    existing = h.identity_index.get(x)
    if existing is not None:
        return h, existing
    raw = f"{IDENTITY_PROPERTY}:{x.id}"
    s = Support(i, frozenset({x}))
    return add_bond(h, i, s, IDENTITY_PROPERTY, raw, _identity=True)


def boundary(h: Hyperstructure, b: ElementId) -> Support:
    """Dissolve a bond into the support it binds."""
    return h.bond(b).support


def iterated_boundary(h: Hyperstructure, b: ElementId, p: int) -> Support:
    """Walk boundaries one level at a time down to level p.

    At p == level(b) the result is the singleton {b}; below, it is the union
    of the iterated boundaries of all support members.
    """
    if not h.has_element(b):
        raise UnknownElement(f"no element {b!r}")
    if p < 0 or p > b.level:
        raise LevelOutOfRange(f"level {p} outside 0..{b.level}")
    frontier = {b}
    level = b.level
    while level > p:
        nxt: set[ElementId] = set()
        for e in frontier:
            nxt |= h.bond(e).support.members
        frontier = nxt
        level -= 1
    return Support(p, frozenset(frontier))


def gamma(h: Hyperstructure, i: int) -> tuple[tuple[Support, PropertyToken], ...]:
    """All admissible binding targets (support, token) at level i, canonically ordered."""
    h.check_level(i)
    pairs = [
        (s, t)
        for s, tokens in h.omegas[i].items()
        for t in sorted(tokens)
    ]
    pairs.sort(key=lambda p: (p[0].key, p[1]))
    return tuple(pairs)


# -- validation --------------------------------------------------------------------

#: Violation classes emitted by validate().
DANGLING_SUPPORT = "dangling-support"
PROPERTY_NOT_ASSIGNED = "property-not-assigned"
DUPLICATE_BOND = "duplicate-bond"
IDENTITY_LAW = "identity-law"
NON_BOND_ELEMENT = "non-bond-element"
EMPTY_SUPPORT = "empty-support"
LEVEL_MISMATCH = "level-mismatch"
MALFORMED_TOWER = "malformed-tower"
EMPTY_OMEGA = "empty-omega-entry"


def validate(h: Hyperstructure) -> CheckReport:
    """Report every violated tower invariant; an empty report means valid."""
    findings: list[Finding] = []

    def flag(code: str, message: str):
        findings.append(Finding(code, message))

    if len(h.levels) != h.order + 1 or len(h.omegas) != h.order + 1:
        flag(MALFORMED_TOWER, f"declared order {h.order} vs {len(h.levels)} levels / {len(h.omegas)} omega tables")
        return report("validate", findings)

    for i, lvl in enumerate(h.levels):
        for e in lvl:
            if e.level != i:
                flag(LEVEL_MISMATCH, f"element {e!r} stored at level {i}")

    # registry totality and single-valuedness
    by_id: dict[ElementId, list[Bond]] = {}
    for b in h.bonds:
        by_id.setdefault(b.id, []).append(b)
    for eid, records in sorted(by_id.items(), key=lambda kv: kv[0].key):
        if len(records) > 1:
            supports = {r.support.members for r in records}
            if len(supports) > 1:
                flag(DUPLICATE_BOND, f"bond {eid!r} binds two collections")
            else:
                flag(DUPLICATE_BOND, f"bond {eid!r} registered {len(records)} times")
        if not (0 < eid.level <= h.order) or eid not in h.levels[eid.level]:
            flag(LEVEL_MISMATCH, f"bond record {eid!r} is not a listed element")

    for i in range(1, h.order + 1):
        for e in sorted_elements(h.levels[i]):
            if e not in by_id:
                flag(NON_BOND_ELEMENT, f"element {e!r} above level 0 has no bond record")

    for b in h.bonds:
        s = b.support
        if not s.members:
            flag(EMPTY_SUPPORT, f"bond {b.id!r} binds nothing")
            continue
        if s.level != b.id.level - 1:
            flag(LEVEL_MISMATCH, f"bond {b.id!r} at level {b.id.level} binds level {s.level}")
            continue
        dangling = [m for m in sorted_elements(s.members) if not h.has_element(m)]
        for m in dangling:
            flag(DANGLING_SUPPORT, f"bond {b.id!r} binds missing element {m!r}")
        if not dangling and b.property not in h.omegas[s.level].get(s, frozenset()):
            flag(PROPERTY_NOT_ASSIGNED, f"bond {b.id!r} carries {b.property!r} not assigned to {s!r}")
        if b.identity and len(s.members) != 1:
            flag(IDENTITY_LAW, f"identity bond {b.id!r} binds {len(s.members)} elements")

    # one identity bond per element
    marked: dict[ElementId, list[ElementId]] = {}
    for b in h.bonds:
        if b.identity and len(b.support.members) == 1:
            (x,) = b.support.members
            marked.setdefault(x, []).append(b.id)
    for x, ids in sorted(marked.items(), key=lambda kv: kv[0].key):
        if len(ids) > 1:
            flag(IDENTITY_LAW, f"element {x!r} has {len(ids)} identity bonds")

    for i, table in enumerate(h.omegas):
        for s, tokens in table.items():
            if s.level != i:
                flag(LEVEL_MISMATCH, f"omega entry at level {i} keyed by level-{s.level} support {s!r}")
            if not tokens:
                flag(EMPTY_OMEGA, f"omega entry for {s!r} at level {i} is empty")
            for m in s.members:
                if not h.has_element(m):
                    flag(DANGLING_SUPPORT, f"omega support {s!r} references missing {m!r}")

    return report("validate", findings)
