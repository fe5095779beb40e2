# Installing structure on raw combinatorial data, and Brunnian patterns.
#
# Relations, hypergraphs and simplicial complexes all become towers. A bond
# is Brunnian when none of its codimension-1 sub-collections is bound by
# anything at the same level; nesting Brunnian bonds in Brunnian bonds
# raises the order.

from hyperstruct import validate
from hyperstruct.installers import (
    BrunnianComplex,
    brunnian_bonds,
    brunnian_order,
    from_hypergraph,
    from_relation,
    from_simplicial_complex,
    make_brunnian_tower,
)

rel = from_relation([["amy", "ben"], ["stage", "sound"]], [("amy", "stage"), ("ben", "sound")])
print("relation tower:", [len(lvl) for lvl in rel.levels], "valid:", validate(rel).passed)

hg = from_hypergraph(["a", "b", "c", "d"], [["a", "b"], ["b", "c", "d"]])
print("hypergraph tower:", [len(lvl) for lvl in hg.levels])

FULL_TRIANGLE = [["v0"], ["v1"], ["v2"], ["v0", "v1"], ["v1", "v2"], ["v0", "v2"], ["v0", "v1", "v2"]]
flat = from_simplicial_complex(["v0", "v1", "v2"], FULL_TRIANGLE)
graded = from_simplicial_complex(["v0", "v1", "v2"], FULL_TRIANGLE, graded=True)
print("flat triangle levels:", [len(lvl) for lvl in flat.levels])
print("graded triangle levels:", [len(lvl) for lvl in graded.levels])

# the Borromean pattern: three vertices bound only as a whole
k = BrunnianComplex.of([1, 2, 3], [[1, 2, 3]])
print("brunnian families:", sorted(tuple(sorted(f)) for f in brunnian_bonds(k)))

# nine elements in three bound triples, the triples bound once more
tower = make_brunnian_tower([3, 3])
print("nested-triples tower:", [len(lvl) for lvl in tower.levels])
print("brunnian order:", brunnian_order(tower))

# a third nesting level
print("order of [2, 2, 2]:", brunnian_order(make_brunnian_tower([2, 2, 2])))
