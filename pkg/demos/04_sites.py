# Sieves, covering axioms, sites and covering chains.
#
# Bonds at one level are preordered by support inclusion. A sieve is a
# downward-closed family under a root; a topology picks covering sieves per
# element subject to maximality, stability and transitivity. The checker
# reports witnesses for whatever fails.

from hyperstruct.installers import from_simplicial_complex
from hyperstruct.topology import (
    CoveringChain,
    check_covering_chain,
    is_grothendieck_topology,
    make_site,
    maximal_sieve,
    maximal_topology,
    pullback_sieve,
)

FULL_TRIANGLE = [["v0"], ["v1"], ["v2"], ["v0", "v1"], ["v1", "v2"], ["v0", "v2"], ["v0", "v1", "v2"]]
tri = from_simplicial_complex(["v0", "v1", "v2"], FULL_TRIANGLE, graded=True)

e01 = tri.element(1, "{v0,v1}")
print("maximal sieve on an edge bond:", maximal_sieve(tri, e01))
print("pullback along itself:", pullback_sieve(tri, maximal_sieve(tri, e01), e01))

j = maximal_topology(tri)
for level in range(tri.order + 1):
    print(is_grothendieck_topology(tri, j, level).render())

site = make_site(tri, j)
print("site over", site.h.order + 1, "levels")

# break the axioms: an element with no covering sieves fails maximality
j_bad = dict(j)
j_bad[e01] = frozenset()
print(is_grothendieck_topology(tri, j_bad, 1).render())

# a covering chain runs from a base element to the top bond
top = tri.element(2, "{v0,v1,v2}")
v0 = tri.element(0, "v0")
chain = CoveringChain(
    chain=(v0, e01, top),
    families=(
        maximal_sieve(tri, v0).members,
        maximal_sieve(tri, e01).members,
        maximal_sieve(tri, top).members,
    ),
)
print(check_covering_chain(tri, j, chain).render())
