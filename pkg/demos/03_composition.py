# Gluing bonds: same level, across levels, and the fusion log.
#
# Two bonds compose at a probe level when their dissolved boundaries agree
# (strict) or overlap (weak). Cross-level composition lifts the lower bond
# with identity bonds first. Fuse is weak gluing with a logged signature.

from hyperstruct import add_bond, assign_property, boundary, new_hyperstructure
from hyperstruct.composition import composable, compose, compose_cross, disjoint_union, fuse
from hyperstruct.core import Support

h = new_hyperstructure(["x", "y", "z"])
sxy = h.support_at(0, ["x", "y"])
syz = h.support_at(0, ["y", "z"])
h = assign_property(h, 0, sxy, "near")
h = assign_property(h, 0, syz, "near")
h, a = add_bond(h, 0, sxy, "near", "a")
h, b = add_bond(h, 0, syz, "near", "b")

print("weak composable:", composable(h, a, b, 0, "weak"))
print("strict composable:", composable(h, a, b, 0, "strict"))

h, ab = compose(h, a, b, 0, "weak", None, "ab")
print("composite binds", boundary(h, ab), "with property", h.bond(ab).property)

# stack one more level, then glue across levels
s2 = Support.of([a, b])
h = assign_property(h, 1, s2, "pair")
h, top = add_bond(h, 1, s2, "pair", "top")
h, cross = compose_cross(h, top, a, 0, "weak", None, "cross")
print("cross-level composite lives at level", cross.level)

h, glued = fuse(h, top, b, 0, None, "glued")
record = h.fusion_log[-1]
print(f"fusion signature: level {record.k}, operands at ({record.m}, {record.n})")

# disjoint union prefixes ids and never adds cross bonds; spanning bonds
# and further fusion are up to the caller
u = disjoint_union(h, h)
print("disjoint union sizes per level:", [len(lvl) for lvl in u.levels])
