"""Sieves and Grothendieck topologies over a tower's refinement order.

Bonds at one level are preordered by support inclusion; level-0 elements
join in through the singleton embedding (each refines only itself), which
lets covering chains run all the way to the bottom. Sieves are downward
closed bond families rooted at an element, a topology assigns sieve
collections satisfying the maximality, stability and transitivity axioms,
and a site is a tower paired with a topology that passed the checks.

The axiom checker runs on a bitmask view of one level's preorder; that view
is memoized per tower instance (towers are immutable), so sweeping many
candidate topologies over one tower pays the setup cost once.
"""
from __future__ import annotations

import random
import weakref
from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import ElementId, Hyperstructure, sorted_elements
from .errors import MixedLevels, NotABond, NotATopology, NotRefinement, UnknownElement
from .report import CheckReport, Finding, report

#: Exhaustive transitivity sweeps are capped at this many bonds per level.
EXHAUSTIVE_CAP = 16
SAMPLE_SIZE = 64


def refinement_support(h: Hyperstructure, e: ElementId) -> frozenset[ElementId]:
    """The member set that orders e: its support, or {e} at level 0."""
    if e.level == 0:
        if not h.has_element(e):
            raise UnknownElement(f"no element {e!r}")
        return frozenset({e})
    return h.bond(e).support.members


def refines(h: Hyperstructure, finer: ElementId, coarser: ElementId) -> bool:
    """finer <= coarser in the refinement preorder (support inclusion)."""
    if finer.level != coarser.level:
        return False
    return refinement_support(h, finer) <= refinement_support(h, coarser)


def level_members(h: Hyperstructure, i: int) -> list[ElementId]:
    return sorted_elements(h.elements(i))


@dataclass(frozen=True)
class Sieve:
    """A downward-closed family of same-level elements under a root."""

    root: ElementId
    members: frozenset[ElementId]

    @property
    def key(self):
        return (self.root.key, tuple(e.key for e in sorted_elements(self.members)))

    def __repr__(self):
        ms = ",".join(str(e.id) for e in sorted_elements(self.members))
        return f"Sieve({self.root!r}: {{{ms}}})"


TopologyAssignment = Mapping[ElementId, frozenset[Sieve]]


def maximal_sieve(h: Hyperstructure, b: ElementId) -> Sieve:
    """All same-level elements refining b."""
    if not h.has_element(b):
        raise NotABond(f"no element {b!r}")
    members = frozenset(e for e in h.elements(b.level) if refines(h, e, b))
    return Sieve(root=b, members=members)


def is_sieve(h: Hyperstructure, candidates: Iterable[ElementId], root: ElementId) -> bool:
    """Every member refines the root and the family is downward closed."""
    cs = frozenset(candidates)
    levels = {e.level for e in cs} | {root.level}
    if len(levels) != 1:
        raise MixedLevels(f"candidates span levels {sorted(levels)}")
    for e in cs:
        if not refines(h, e, root):
            return False
    for e in cs:
        for finer in h.elements(root.level):
            if refines(h, finer, e) and finer not in cs:
                return False
    return True


def pullback_sieve(h: Hyperstructure, sieve: Sieve, finer_root: ElementId) -> Sieve:
    """Restrict a sieve along a refinement of its root."""
    if not refines(h, finer_root, sieve.root):
        raise NotRefinement(f"{finer_root!r} does not refine {sieve.root!r}")
    return Sieve(root=finer_root, members=frozenset(s for s in sieve.members if refines(h, s, finer_root)))


class _LevelOrder:
    """Bitmask view of one level's refinement preorder."""

    __slots__ = ("elements", "index", "below", "downsets")

    def __init__(self, h: Hyperstructure, level: int):
        self.elements = level_members(h, level)
        self.index = {e: i for i, e in enumerate(self.elements)}
        supports = [refinement_support(h, e) for e in self.elements]
        n = len(self.elements)
        self.below = [0] * n  # below[i] = mask of elements refining element i
        for i in range(n):
            for j in range(n):
                if supports[j] <= supports[i]:
                    self.below[i] |= 1 << j
        self.downsets: dict[int, list[int]] = {}

    def mask_of(self, members: Iterable[ElementId]) -> int:
        m = 0
        for e in members:
            m |= 1 << self.index[e]
        return m

    def unmask(self, mask: int) -> frozenset[ElementId]:
        return frozenset(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def is_downset(self, mask: int) -> bool:
        closure = 0
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            closure |= self.below[i]
            m &= m - 1
        return closure == mask

    def downsets_below(self, i: int) -> list[int]:
        """All downward-closed subsets of {j : j <= i}, memoized per root."""
        got = self.downsets.get(i)
        if got is not None:
            return got
        ideal = self.below[i]
        bits = [j for j in range(len(self.elements)) if ideal >> j & 1]
        out = []
        for k in range(1 << len(bits)):
            mask = 0
            kk = k
            for pos, j in enumerate(bits):
                if kk >> pos & 1:
                    mask |= 1 << j
            if self.is_downset(mask):
                out.append(mask)
        self.downsets[i] = out
        return out


_ORDER_CACHE: dict[tuple[int, int], tuple] = {}


def _level_order(h: Hyperstructure, level: int) -> _LevelOrder:
    key = (id(h), level)
    hit = _ORDER_CACHE.get(key)
    if hit is not None and hit[0]() is h:
        return hit[1]
    if len(_ORDER_CACHE) > 256:
        _ORDER_CACHE.clear()
    order = _LevelOrder(h, level)
    _ORDER_CACHE[key] = (weakref.ref(h), order)
    return order


def downward_closed_subsets(h: Hyperstructure, below: list[ElementId]) -> list[frozenset[ElementId]]:
    """All downward-closed subsets of the given same-level elements."""
    out: list[frozenset[ElementId]] = []
    n = len(below)
    leq = [[refines(h, below[i], below[j]) for j in range(n)] for i in range(n)]
    for mask in range(1 << n):
        chosen = [i for i in range(n) if mask >> i & 1]
        in_set = [mask >> i & 1 for i in range(n)]
        ok = True
        for i in chosen:
            for j in range(n):
                if leq[j][i] and not in_set[j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(frozenset(below[i] for i in chosen))
    return out


def all_sieves_on(h: Hyperstructure, b: ElementId) -> list[Sieve]:
    order = _level_order(h, b.level)
    masks = order.downsets_below(order.index[b])
    return [Sieve(root=b, members=order.unmask(m)) for m in masks]


def _sampled_masks(order: _LevelOrder, i: int, rng: random.Random, count: int) -> list[int]:
    ideal = order.below[i]
    bits = [j for j in range(len(order.elements)) if ideal >> j & 1]
    seen = {0, ideal}
    for _ in range(count):
        closure = 0
        for j in bits:
            if rng.random() < 0.5:
                closure |= order.below[j]
        seen.add(closure)
    return sorted(seen)


def is_grothendieck_topology(
    h: Hyperstructure,
    topology: TopologyAssignment,
    level: int,
    exhaustive: bool | None = None,
    seed: int = 0,
) -> CheckReport:
    """Check the three axioms for one level's sieve collections.

    Transitivity quantifies candidate sieves over all downward-closed
    families, which is exponential; above EXHAUSTIVE_CAP bonds the sweep
    switches to seeded sampling and says so in the report notes. Each
    violated axiom is reported with a witness.
    """
    h.check_level(level)
    order = _level_order(h, level)
    elements = order.elements
    findings: list[Finding] = []
    notes: list[str] = []

    if exhaustive is None:
        exhaustive = len(elements) <= EXHAUSTIVE_CAP
    if not exhaustive:
        notes.append(f"sampled: seed={seed} size={SAMPLE_SIZE}")
    rng = random.Random(seed)

    for b in elements:
        if b not in topology:
            findings.append(Finding("undefined", f"no sieve collection at {b!r}"))
    if findings:
        return report(f"grothendieck-topology level {level}", findings, notes)

    # convert each collection to a set of masks, validating as we go
    masks: list[set[int]] = []
    for i, b in enumerate(elements):
        got = set()
        for s in topology[b]:
            if s.root != b:
                findings.append(Finding("misrooted", f"sieve rooted at {s.root!r} listed under {b!r}"))
                continue
            m = order.mask_of(s.members)
            if m & ~order.below[i] or not order.is_downset(m):
                findings.append(Finding("not-a-sieve", f"family under {b!r} is not downward closed: {s!r}"))
                continue
            got.add(m)
        masks.append(got)

    for i, b in enumerate(elements):
        sieves = masks[i]

        # (i) maximality
        if order.below[i] not in sieves:
            findings.append(Finding("maximality", f"maximal sieve on {b!r} missing from J({b.id})"))

        # (ii) stability under pullback along every refinement
        finer_bits = order.below[i] & ~(1 << i)
        fb = finer_bits
        while fb:
            j = (fb & -fb).bit_length() - 1
            fb &= fb - 1
            for s in sorted(sieves):
                if s & order.below[j] not in masks[j]:
                    findings.append(
                        Finding(
                            "stability",
                            f"pullback of {Sieve(b, order.unmask(s))!r} along {elements[j]!r} missing from J({elements[j].id})",
                        )
                    )

        # (iii) transitivity: locally covering families must be covering
        candidates = order.downsets_below(i) if exhaustive else _sampled_masks(order, i, rng, SAMPLE_SIZE)
        for s in sorted(sieves):
            for r in candidates:
                if r in sieves:
                    continue
                sb = s
                covers = True
                while sb:
                    j = (sb & -sb).bit_length() - 1
                    sb &= sb - 1
                    if r & order.below[j] not in masks[j]:
                        covers = False
                        break
                if covers:
                    findings.append(
                        Finding(
                            "transitivity",
                            f"{Sieve(b, order.unmask(r))!r} covers locally over {Sieve(b, order.unmask(s))!r} "
                            f"but is missing from J({b.id})",
                        )
                    )
    return report(f"grothendieck-topology level {level}", findings, notes)


def maximal_topology(h: Hyperstructure) -> dict[ElementId, frozenset[Sieve]]:
    """The topology whose only covering of each element is its maximal sieve."""
    return {e: frozenset({maximal_sieve(h, e)}) for i in range(h.order + 1) for e in h.elements(i)}


@dataclass(frozen=True)
class CoveringChain:
    """A boundary-linked chain of elements with per-level covering families."""

    chain: tuple[ElementId, ...]
    families: tuple[frozenset[ElementId], ...]


def check_covering_chain(h: Hyperstructure, topology: TopologyAssignment, chain: CoveringChain) -> CheckReport:
    """Verify chain linkage, family membership in J, and inter-level linkage."""
    findings: list[Finding] = []
    n = h.order
    if len(chain.chain) != n + 1 or len(chain.families) != n + 1:
        findings.append(Finding("shape", f"chain must span levels 0..{n}"))
        return report("covering-chain", findings)
    for i, e in enumerate(chain.chain):
        if e.level != i or not h.has_element(e):
            findings.append(Finding("shape", f"chain entry {e!r} is not a level-{i} element"))
    if findings:
        return report("covering-chain", findings)

    for i in range(n):
        upper = chain.chain[i + 1]
        if chain.chain[i] not in h.bond(upper).support.members:
            findings.append(Finding("link", f"({i},{i + 1}): {chain.chain[i]!r} not in the boundary of {upper!r}"))

    for i, family in enumerate(chain.families):
        root = chain.chain[i]
        sieves = topology.get(root)
        if sieves is None:
            findings.append(Finding("family", f"no sieve collection at {root!r}"))
            continue
        if not family:
            findings.append(Finding("family", f"level {i}: family not in J (empty family)"))
            continue
        if not any(family <= s.members for s in sieves):
            findings.append(Finding("family", f"level {i}: family not contained in any sieve of J({root.id})"))

    for i in range(n):
        uppers = chain.families[i + 1]
        for f in sorted_elements(chain.families[i]):
            if not any(f in h.bond(g).support.members for g in uppers if h.is_bond(g)):
                findings.append(Finding("linkage", f"level {i}: {f!r} lies in no boundary of the level-{i + 1} family"))
    return report("covering-chain", findings)


@dataclass(frozen=True)
class Site:
    """A tower together with a topology that passed every level's axioms."""

    h: Hyperstructure
    topology: Mapping[ElementId, frozenset[Sieve]]


def make_site(h: Hyperstructure, topology: TopologyAssignment, exhaustive: bool | None = None, seed: int = 0) -> Site:
    for i in range(h.order + 1):
        rep = is_grothendieck_topology(h, topology, i, exhaustive=exhaustive, seed=seed)
        if not rep.passed:
            raise NotATopology(f"axioms fail at level {i}", report=rep)
    return Site(h=h, topology=dict(topology))
