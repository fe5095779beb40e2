"""Constructors that put a level structure on common combinatorial inputs.

Relations, hypergraphs and simplicial complexes all become towers whose
bonds record the binding pattern; Brunnian helpers detect bonds none of
whose codimension-1 sub-collections are bound.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from typing import Iterable, Sequence

from .core import (
    ElementId,
    Hyperstructure,
    RawId,
    Support,
    add_bond,
    assign_property,
    new_hyperstructure,
    sorted_elements,
)
from .errors import (
    ArityMismatch,
    DownwardClosureViolation,
    EmptyEdge,
    InvalidBranching,
    UnknownCoordinate,
    UnknownVertex,
)

REL_PROPERTY = "rel"
EDGE_PROPERTY = "edge"
SIMPLEX_PROPERTY = "simplex"
BRUNNIAN_PROPERTY = "brunnian"


def _grow_empty_level(h: Hyperstructure) -> Hyperstructure:
    return replace(h, order=h.order + 1, levels=h.levels + (frozenset(),), omegas=h.omegas + ({},))


def _canonical_name(raw_ids: Iterable[RawId]) -> str:
    return "{" + ",".join(str(r) for r in sorted(raw_ids, key=lambda r: (isinstance(r, str), r))) + "}"


def from_relation(components: Sequence[Iterable[RawId]], tuples: Iterable[Sequence[RawId]]) -> Hyperstructure:
    """Install a relation as an order-1 tower of tuple bonds.

    The base is the position-tagged disjoint union of the components (the
    tag keeps the coordinate order), and every tuple becomes one bond over
    its tagged coordinates.
    """
    comps = [set(c) for c in components]
    base = [f"{x}@{k + 1}" for k, comp in enumerate(comps) for x in sorted(comp, key=lambda r: (isinstance(r, str), r))]
    h = new_hyperstructure(base)
    h = _grow_empty_level(h)
    for t in sorted(tuples, key=lambda t: tuple(str(x) for x in t)):
        if len(t) != len(comps):
            raise ArityMismatch(f"tuple {tuple(t)!r} has arity {len(t)}, expected {len(comps)}")
        for k, x in enumerate(t):
            if x not in comps[k]:
                raise UnknownCoordinate(f"coordinate {x!r} not in component {k + 1}")
        s = h.support_at(0, [f"{x}@{k + 1}" for k, x in enumerate(t)])
        h = assign_property(h, 0, s, REL_PROPERTY)
        h, _ = add_bond(h, 0, s, REL_PROPERTY, "(" + ",".join(str(x) for x in t) + ")")
    return h


def from_hypergraph(vertices: Iterable[RawId], edges: Iterable[Iterable[RawId]]) -> Hyperstructure:
    """Install a hypergraph: vertices at level 0, one bond per edge."""
    vs = list(vertices)
    h = new_hyperstructure(vs)
    h = _grow_empty_level(h)
    vset = set(vs)
    canon = []
    for e in edges:
        members = frozenset(e)
        if not members:
            raise EmptyEdge("hypergraph edge is empty")
        for v in members:
            if v not in vset:
                raise UnknownVertex(f"edge vertex {v!r} not declared")
        canon.append(members)
    for members in sorted(set(canon), key=_canonical_name):
        s = h.support_at(0, members)
        h = assign_property(h, 0, s, EDGE_PROPERTY)
        h, _ = add_bond(h, 0, s, EDGE_PROPERTY, _canonical_name(members))
    return h


def from_simplicial_complex(
    vertices: Iterable[RawId],
    simplices: Iterable[Iterable[RawId]],
    graded: bool = False,
) -> Hyperstructure:
    """Install a simplicial complex as a tower of simplex bonds.

    Flat mode keeps one level of bonds, each binding its vertex set. Graded
    mode stacks them: a k-simplex becomes a level-k bond over its k+1
    codimension-1 face bonds, so boundaries unfold face by face.
    """
    vs = sorted(set(vertices), key=lambda r: (isinstance(r, str), r))
    sset = {frozenset(s) for s in simplices}
    sset.discard(frozenset())
    vset = set(vs)
    for s in sset:
        for v in s:
            if v not in vset:
                raise UnknownVertex(f"simplex vertex {v!r} not declared")
        if len(s) > 1:
            for face in combinations(sorted(s, key=lambda r: (isinstance(r, str), r)), len(s) - 1):
                if frozenset(face) not in sset:
                    raise DownwardClosureViolation(
                        f"simplex {_canonical_name(s)} lacks face {_canonical_name(face)}"
                    )
    for v in vs:
        if frozenset({v}) not in sset:
            raise DownwardClosureViolation(f"vertex {v!r} is not listed as a singleton simplex")

    h = new_hyperstructure(vs)
    by_size = sorted((s for s in sset if len(s) >= 2), key=lambda s: (len(s), _canonical_name(s)))
    if not by_size:
        return h

    if not graded:
        h = _grow_empty_level(h)
        for s in by_size:
            sup = h.support_at(0, s)
            h = assign_property(h, 0, sup, SIMPLEX_PROPERTY)
            h, _ = add_bond(h, 0, sup, SIMPLEX_PROPERTY, _canonical_name(s))
        return h

    # graded: the level-k bond for a k-simplex binds its (k-1)-face bonds
    name_of: dict[frozenset, ElementId] = {}
    for s in by_size:
        k = len(s) - 1
        if k == 1:
            sup = h.support_at(0, s)
        else:
            faces = [
                name_of[frozenset(face)]
                for face in combinations(sorted(s, key=lambda r: (isinstance(r, str), r)), len(s) - 1)
            ]
            sup = Support.of(faces)
        h = assign_property(h, k - 1, sup, SIMPLEX_PROPERTY)
        h, eid = add_bond(h, k - 1, sup, SIMPLEX_PROPERTY, _canonical_name(s))
        name_of[s] = eid
    return h


# -- Brunnian structure ----------------------------------------------------------


@dataclass(frozen=True)
class BrunnianComplex:
    """A vertex set plus a family of bound subsets.

    Unlike a simplicial complex the family need not be downward closed;
    the empty set and all singletons must belong to it.
    """

    vertices: frozenset
    family: frozenset[frozenset]

    @classmethod
    def of(cls, vertices: Iterable[RawId], family: Iterable[Iterable[RawId]]) -> "BrunnianComplex":
        vs = frozenset(vertices)
        fam = frozenset(frozenset(f) for f in family)
        fam |= {frozenset()} | {frozenset({v}) for v in vs}
        for f in fam:
            for v in f:
                if v not in vs:
                    raise UnknownVertex(f"family member {v!r} not a vertex")
        return cls(vertices=vs, family=fam)


def brunnian_bonds(k: BrunnianComplex) -> set[frozenset]:
    """Family members of size >= 2 none of whose codim-1 subsets are bound."""
    out = set()
    for f in k.family:
        m = len(f)
        if m < 2:
            continue
        if all(frozenset(sub) not in k.family for sub in combinations(sorted(f, key=str), m - 1)):
            out.add(f)
    return out


def is_brunnian_bond(h: Hyperstructure, bond_id: ElementId) -> bool:
    b = h.bond(bond_id)
    members = b.support.members
    if len(members) < 2:
        return False
    level_supports = {bb.support.members for bb in h.bonds_at(bond_id.level)}
    for sub in combinations(sorted_elements(members), len(members) - 1):
        if frozenset(sub) in level_supports:
            return False
    return True


def brunnian_order(h: Hyperstructure) -> int:
    """Length of the longest boundary-nested chain of Brunnian bonds."""
    brunnians = [b.id for i in range(1, h.order + 1) for b in h.bonds_at(i) if is_brunnian_bond(h, b.id)]
    bset = set(brunnians)
    depth: dict[ElementId, int] = {}
    for e in sorted(brunnians, key=lambda x: (x.level, x.key)):
        below = [m for m in h.bond(e).support.members if m in bset]
        depth[e] = 1 + max((depth[m] for m in below), default=0)
    return max(depth.values(), default=0)


def make_brunnian_tower(branching: Sequence[int]) -> Hyperstructure:
    """Nested blocks of Brunnian bonds: branching[k] blocks per level-k bond.

    For branching [3, 3] this is the nine-vertex pattern: three triples of
    base elements, each triple bound, and the three triple-bonds bound once
    more at the top — with no sub-blocks bound anywhere.
    """
    if not branching:
        raise InvalidBranching("branching list is empty")
    for n in branching:
        if not isinstance(n, int) or n < 2:
            raise InvalidBranching(f"branching factor {n!r} must be an integer >= 2")
    total = 1
    for n in branching:
        total *= n
    h = new_hyperstructure([f"v{j}" for j in range(total)])
    current = [h.element(0, f"v{j}") for j in range(total)]
    for level, n in enumerate(branching):
        nxt = []
        for j in range(len(current) // n):
            block = current[j * n : (j + 1) * n]
            sup = Support.of(block)
            h = assign_property(h, level, sup, BRUNNIAN_PROPERTY)
            h, eid = add_bond(h, level, sup, BRUNNIAN_PROPERTY, f"g{level + 1}.{j}")
            nxt.append(eid)
        current = nxt
    return h
