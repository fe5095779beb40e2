"""Bond composition: gluing bonds whose iterated boundaries are compatible.

Two bonds compose at a probe level p when their boundaries, dissolved down
to p, either coincide (strict) or merely overlap (weak). The composite binds
the union of the operands' supports and carries a combined property token.
Cross-level composition lifts the lower bond with identity bonds first; fuse
is the weak-mode gluing recorded in the tower's operation log.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

from .core import (
    Bond,
    ElementId,
    FusionRecord,
    Hyperstructure,
    IDENTITY_PROPERTY,
    PropertyToken,
    RawId,
    Support,
    add_bond,
    assign_property,
    identity_bond,
    iterated_boundary,
    sorted_elements,
)
from .errors import (
    CombinerUndefined,
    LevelOutOfRange,
    NotComposable,
    NotGluable,
)

CompatibilityMode = Literal["strict", "weak"]

UNION_SEPARATOR = "∪"  # the token-name join used by the union combiner


def union_token(a: PropertyToken, b: PropertyToken) -> PropertyToken:
    """Canonical union-name: flatten, dedupe and sort the joined parts.

    Flattening makes the naming associative and commutative, so composites
    built in any grouping agree on their property.
    """
    parts = sorted(set(a.split(UNION_SEPARATOR)) | set(b.split(UNION_SEPARATOR)))
    return UNION_SEPARATOR.join(parts)


def combine_tokens(combiner, a: PropertyToken, b: PropertyToken) -> PropertyToken:
    """Single-token form of a combiner, used for composite bond properties."""
    from .assignments import Combiner  # late import; assignments also uses core

    if combiner is None:
        return union_token(a, b)
    if not isinstance(combiner, Combiner):
        raise CombinerUndefined(f"not a combiner: {combiner!r}")
    if combiner.kind in ("union", "disjoint-union"):
        return union_token(a, b)
    if combiner.kind == "tensor-pairs":
        return f"{a}⊗{b}"
    if combiner.kind == "table":
        got = combiner.lookup(frozenset({a}), frozenset({b}), frozenset())
        if len(got) != 1:
            raise CombinerUndefined(f"table combiner returned {len(got)} tokens for a bond property")
        return next(iter(got))
    raise CombinerUndefined(f"unknown combiner kind {combiner.kind!r}")


def composable(h: Hyperstructure, a: ElementId, b: ElementId, p: int, mode: CompatibilityMode = "strict") -> bool:
    """Whether the probe-level boundaries make the pair composable."""
    ba, bb = h.bond(a), h.bond(b)
    if p < 0 or p >= min(a.level, b.level):
        raise LevelOutOfRange(f"probe level {p} not below both bonds ({a.level}, {b.level})")
    da = iterated_boundary(h, a, p).members
    db = iterated_boundary(h, b, p).members
    if mode == "strict":
        return da == db
    return bool(da & db)


def compose(
    h: Hyperstructure,
    a: ElementId,
    b: ElementId,
    p: int,
    mode: CompatibilityMode = "strict",
    combiner=None,
    raw_id: RawId | None = None,
) -> tuple[Hyperstructure, ElementId]:
    """Glue two same-level bonds into one binding the union of their supports.

    The operands are untouched; the combined property is assigned to the
    union support when absent.
    """
    if a.level != b.level:
        raise NotComposable(f"levels differ ({a.level} vs {b.level}); use compose_cross")
    if not composable(h, a, b, p, mode):
        raise NotComposable(f"{a!r} and {b!r} are not {mode}-compatible at level {p}")
    ba, bb = h.bond(a), h.bond(b)
    sup = ba.support.union(bb.support)
    token = combine_tokens(combiner, ba.property, bb.property)
    if token == IDENTITY_PROPERTY:
        # only an identity bond composed with itself reaches the reserved
        # token, and its composite is that bond again
        return h, a
    if raw_id is None:
        raw_id = f"({a.id}□{b.id})"
    h = assign_property(h, sup.level, sup, token)
    return add_bond(h, sup.level, sup, token, raw_id)


def compose_cross(
    h: Hyperstructure,
    a: ElementId,
    b: ElementId,
    p: int,
    mode: CompatibilityMode = "strict",
    combiner=None,
    raw_id: RawId | None = None,
) -> tuple[Hyperstructure, ElementId]:
    """Compose bonds at different levels by lifting the lower one.

    Identity bonds are the canonical level-raising device: the lower bond is
    wrapped until both operands sit at the same level, then compose applies.
    """
    if a.level < b.level:
        a, b = b, a
    m, n = a.level, b.level
    if not (0 <= p < n):
        raise LevelOutOfRange(f"probe level {p} must lie below the lower bond (level {n})")
    h.bond(a)
    h.bond(b)
    lifted = b
    while lifted.level < m:
        h, lifted = identity_bond(h, lifted.level, lifted)
    return compose(h, a, lifted, p, mode, combiner, raw_id)


def fuse(
    h: Hyperstructure,
    a: ElementId,
    b: ElementId,
    k: int,
    combiner=None,
    raw_id: RawId | None = None,
) -> tuple[Hyperstructure, ElementId]:
    """Weak-mode gluing at level k, logged with its (k, m, n) signature."""
    h.bond(a)
    h.bond(b)
    if not (0 <= k < min(a.level, b.level)):
        raise LevelOutOfRange(f"gluing level {k} not below both bonds")
    da = iterated_boundary(h, a, k).members
    db = iterated_boundary(h, b, k).members
    if not da & db:
        raise NotGluable(f"{a!r} and {b!r} share nothing at level {k}")
    if a.level == b.level:
        h2, eid = compose(h, a, b, k, "weak", combiner, raw_id)
    else:
        h2, eid = compose_cross(h, a, b, k, "weak", combiner, raw_id)
    rec = FusionRecord(k=k, m=max(a.level, b.level), n=min(a.level, b.level), a=a, b=b, result=eid)
    return replace(h2, fusion_log=h2.fusion_log + (rec,)), eid


def _prefix_element(e: ElementId, tag: str) -> ElementId:
    return ElementId(e.level, f"{tag}:{e.id}")


def _prefix_tower(h: Hyperstructure, tag: str) -> Hyperstructure:
    def ps(s: Support) -> Support:
        return Support(s.level, frozenset(_prefix_element(m, tag) for m in s.members))

    return Hyperstructure(
        order=h.order,
        levels=tuple(frozenset(_prefix_element(e, tag) for e in lvl) for lvl in h.levels),
        omegas=tuple({ps(s): tokens for s, tokens in table.items()} for table in h.omegas),
        bonds=tuple(
            sorted(
                (
                    Bond(id=_prefix_element(b.id, tag), support=ps(b.support), property=b.property, identity=b.identity)
                    for b in h.bonds
                ),
                key=lambda b: b.key,
            )
        ),
    )


def _pad_to_order(h: Hyperstructure, order: int) -> Hyperstructure:
    """Raise a tower's order by wrapping every top element in an identity bond."""
    while h.order < order:
        top = h.order
        for e in sorted_elements(h.levels[top]):
            h, _ = identity_bond(h, top, e)
        if h.order == top:  # empty top level: grow by hand
            h = replace(h, order=h.order + 1, levels=h.levels + (frozenset(),), omegas=h.omegas + ({},))
    return h


def disjoint_union(h1: Hyperstructure, h2: Hyperstructure) -> Hyperstructure:
    """Levelwise disjoint union with id prefixing and no cross bonds.

    Towers of unequal order are padded with identity levels first. Spanning
    bonds between the halves are the caller's next move, followed by fuse.
    """
    order = max(h1.order, h2.order)
    a = _prefix_tower(_pad_to_order(h1, order), "1")
    b = _prefix_tower(_pad_to_order(h2, order), "2")
    omegas = []
    for i in range(order + 1):
        table = dict(a.omegas[i])
        for s, tokens in b.omegas[i].items():
            table[s] = table.get(s, frozenset()) | tokens  # only the empty support can collide
        omegas.append(table)
    return Hyperstructure(
        order=order,
        levels=tuple(a.levels[i] | b.levels[i] for i in range(order + 1)),
        omegas=tuple(omegas),
        bonds=tuple(sorted(a.bonds + b.bonds, key=lambda bd: bd.key)),
    )
