"""Shared generators and independently-coded oracles for the test suite.

Oracles here deliberately avoid the library's own code paths: they recompute
definitions from scratch (naive recursion, exhaustive enumeration) so that
agreement is evidence, not circularity.
"""
from __future__ import annotations

import random
from itertools import combinations, product

from hyperstruct.core import (
    ElementId,
    Hyperstructure,
    Support,
    add_bond,
    assign_property,
    identity_bond,
    new_hyperstructure,
)

PROPS = ["p", "q", "r", "s"]


def random_tower(rng: random.Random, max_order: int = 3, max_per_level: int = 12) -> Hyperstructure:
    """A valid tower built through public operations only."""
    base_n = rng.randint(1, max(1, max_per_level - 2))
    h = new_hyperstructure([f"x{i}" for i in range(base_n)])
    order = rng.randint(0, max_order)
    for level in range(order):
        current = sorted(h.elements(level), key=lambda e: e.key)
        if not current:
            break
        n_bonds = rng.randint(1, max(1, min(max_per_level, len(current) + 2)))
        made = 0
        for j in range(n_bonds):
            size = rng.randint(1, min(len(current), 4))
            members = rng.sample(current, size)
            s = Support.of(members)
            token = rng.choice(PROPS)
            h = assign_property(h, level, s, token)
            h, _ = add_bond(h, level, s, token, f"b{level}_{j}")
            made += 1
        if made and rng.random() < 0.3:
            x = rng.choice(current)
            h, _ = identity_bond(h, level, x)
    return h


def naive_iterated_boundary(h: Hyperstructure, e: ElementId, p: int) -> frozenset[ElementId]:
    """Recursive restatement of the boundary walk, independent of the library's loop."""
    if e.level == p:
        return frozenset({e})
    out: frozenset[ElementId] = frozenset()
    for m in h.bond(e).support.members:
        out |= naive_iterated_boundary(h, m, p)
    return out


# -- naive topology oracle -----------------------------------------------------------


def _naive_support(h: Hyperstructure, e: ElementId) -> frozenset[ElementId]:
    if e.level == 0:
        return frozenset({e})
    for b in h.bonds:
        if b.id == e:
            return b.support.members
    raise AssertionError(f"no bond for {e!r}")


def naive_leq(h: Hyperstructure, a: ElementId, b: ElementId) -> bool:
    return a.level == b.level and _naive_support(h, a) <= _naive_support(h, b)


def naive_all_sieves(h: Hyperstructure, root: ElementId) -> list[frozenset[ElementId]]:
    """Brute force: every subset of the level, kept iff rooted and closed."""
    level = sorted(h.elements(root.level), key=lambda e: e.key)
    out = []
    for r in range(len(level) + 1):
        for chosen in combinations(level, r):
            cs = frozenset(chosen)
            if not all(naive_leq(h, e, root) for e in cs):
                continue
            closed = True
            for e in cs:
                for f in level:
                    if naive_leq(h, f, e) and f not in cs:
                        closed = False
            if closed:
                out.append(cs)
    return out


class NaiveStructures:
    """Per-tower tables the naive checker derives for itself, once."""

    def __init__(self, h: Hyperstructure, level: int):
        self.elements = sorted(h.elements(level), key=lambda e: e.key)
        self.leq = {
            (a, b): naive_leq(h, a, b) for a in self.elements for b in self.elements
        }
        self.maximal = {
            b: frozenset(e for e in self.elements if self.leq[(e, b)]) for b in self.elements
        }
        self.all_sieves = {b: naive_all_sieves(h, b) for b in self.elements}


def naive_check(structs: NaiveStructures, members_of) -> bool:
    """The three axioms, quantified directly from their statements."""
    elements = structs.elements
    leq = structs.leq
    for b in elements:
        if b not in members_of:
            return False
    for b in elements:
        for fam in members_of[b]:
            if not all(leq[(e, b)] for e in fam):
                return False
            for e in fam:
                for f in elements:
                    if leq[(f, e)] and f not in fam:
                        return False
        if structs.maximal[b] not in members_of[b]:
            return False
        for finer in elements:
            if finer == b or not leq[(finer, b)]:
                continue
            for fam in members_of[b]:
                pulled = frozenset(e for e in fam if leq[(e, finer)])
                if pulled not in members_of[finer]:
                    return False
        for fam in members_of[b]:
            for cand in structs.all_sieves[b]:
                if cand in members_of[b]:
                    continue
                if all(
                    frozenset(e for e in cand if leq[(e, finer)]) in members_of[finer]
                    for finer in fam
                ):
                    return False
    return True


def naive_is_topology(h: Hyperstructure, topology, level: int) -> bool:
    structs = NaiveStructures(h, level)
    members_of = {b: {frozenset(s.members) for s in topology.get(b, ())} for b in structs.elements}
    for b in structs.elements:
        if b not in topology:
            return False
    return naive_check(structs, members_of)


# -- support families as towers -------------------------------------------------------


def tower_from_supports(supports: list[frozenset[str]]) -> Hyperstructure:
    """An order-1 tower whose level-1 bonds realize the given support family."""
    from dataclasses import replace

    base = sorted({v for s in supports for v in s})
    h = new_hyperstructure(base if base else ["x0"])
    h = replace(h, order=1, levels=h.levels + (frozenset(),), omegas=h.omegas + ({},))
    for j, s in enumerate(supports):
        sup = h.support_at(0, sorted(s))
        h = assign_property(h, 0, sup, "p")
        h, _ = add_bond(h, 0, sup, "p", f"b{j}")
    return h


# -- labeled posets up to isomorphism ---------------------------------------------------


def all_posets_up_to_iso(n: int) -> list[frozenset[tuple[int, int]]]:
    """Strict-order relations on range(n), one representative per isomorphism class."""
    from itertools import permutations

    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen: set[frozenset] = set()
    out: list[frozenset] = []
    perms = list(permutations(range(n)))
    for mask in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        ok = True
        for (a, b) in rel:
            if (b, a) in rel:
                ok = False
                break
        if not ok:
            continue
        for (a, b) in rel:
            for (c, d) in rel:
                if b == c and (a, d) not in rel:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        canon = min(tuple(sorted((p[a], p[b]) for a, b in rel)) for p in perms)
        if canon not in seen:
            seen.add(canon)
            out.append(frozenset(rel))
    return out


def poset_as_supports(n: int, rel: frozenset[tuple[int, int]]) -> list[frozenset[str]]:
    """Realize an abstract poset as a support family via principal down-sets."""
    return [frozenset({f"v{j}"} | {f"v{i}" for (i, jj) in rel if jj == j}) for j in range(n)]


# -- pushout / pullback function-enumeration oracles -------------------------------------


def _all_functions(dom: list, cod: list):
    if not dom:
        yield {}
        return
    for values in product(cod, repeat=len(dom)):
        yield dict(zip(dom, values))


def naive_pushout_set(w1, w2, w12, f1, f2):
    """Pushout classes by repeated merging (no union-find)."""
    nodes = [("L", x) for x in sorted(w1)] + [("R", y) for y in sorted(w2)]
    classes = [{n} for n in nodes]

    def find(n):
        for c in classes:
            if n in c:
                return c
        raise AssertionError

    for z in sorted(w12):
        a, b = find(("L", f1[z])), find(("R", f2[z]))
        if a is not b:
            classes.remove(a)
            classes.remove(b)
            classes.append(a | b)
    return classes


def oracle_pushout_holds(w1, w2, w12, f1, f2, u1, u2, wu) -> bool:
    """Enumerate candidate comparison maps; the property holds iff a structure-
    respecting bijection from the pushout onto the union's tokens exists."""
    classes = naive_pushout_set(w1, w2, w12, f1, f2)
    reps = [frozenset(c) for c in classes]
    for h in _all_functions(reps, sorted(wu)):
        ok = True
        for c in reps:
            for side, x in c:
                want = u1[x] if side == "L" else u2[x]
                if h[c] != want:
                    ok = False
                    break
            if not ok:
                break
        if ok and len(set(h.values())) == len(reps) == len(wu):
            return True
    return len(reps) == 0 and len(wu) == 0


def oracle_pullback_holds(w1, w2, w12, r1, r2, p1, p2, wu) -> bool:
    pb = [(x, y) for x in sorted(w1) for y in sorted(w2) if r1[x] == r2[y]]
    for k in _all_functions(sorted(wu), pb):
        ok = all(k[t][0] == p1[t] and k[t][1] == p2[t] for t in wu)
        if ok and len(set(k.values())) == len(wu) == len(pb):
            return True
    return len(pb) == 0 and len(wu) == 0
