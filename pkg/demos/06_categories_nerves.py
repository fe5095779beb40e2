# The categorical route: categories of elements, stacked levels, nerves.
#
# A presheaf over a finite category yields its category of elements; doing
# that twice (once through a property presheaf, once through a binding
# presheaf over the result) builds the next categorical level. Nerves turn
# categories into simplicial data; GF(2) ranks give Betti numbers.

from hyperstruct.catelem import (
    Presheaf,
    betti_gf2,
    build_level,
    category_of_elements,
    nerve,
    poset_category,
    terminal_presheaf,
)

square = poset_category(
    ["00", "01", "10", "11"],
    lambda a, b: all(x <= y for x, y in zip(a, b)),
)
print("square:", len(square.objects), "objects,", len(square.morphisms), "morphisms")

# a presheaf of sections: two summands picked at 11 and 01
picks = ["11", "01"]
on_objects = {
    x: frozenset(i for i, c in enumerate(picks) if square.hom(x, c))
    for x in square.objects
}
p = Presheaf(
    on_objects=on_objects,
    on_morphisms={m.id: {i: i for i in on_objects[m.tgt]} for m in square.morphisms},
)
elements = category_of_elements(square, p)
print("category of elements:", len(elements.objects), "objects (= sum of section counts)")

gamma, next_level = build_level(square, p, terminal_presheaf(elements))
print("next level:", len(next_level.objects), "objects,", len(next_level.morphisms), "morphisms")

# nerves and homology
n = nerve(square, 2)
print("nerve simplex counts:", [len(s) for s in n.simplices])
print("betti of the square nerve:", betti_gf2(n, 2))

discrete = poset_category(["a", "b", "c"], lambda a, b: a == b)
print("betti of three points:", betti_gf2(nerve(discrete, 2), 2))
