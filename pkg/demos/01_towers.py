# Building a level tower bond by bond.
#
# Elements live at level 0. Assigning a property token to a subset makes
# that subset bindable; registering a bond over it creates an element one
# level up. Bonds of bonds stack levels.

from hyperstruct import (
    add_bond,
    assign_property,
    boundary,
    gamma,
    identity_bond,
    iterated_boundary,
    new_hyperstructure,
    validate,
)

h = new_hyperstructure(["ant", "bee", "cricket"])
print("order:", h.order, " base:", sorted(e.id for e in h.elements(0)))

# observe a property of the pair {ant, bee}, then bind them
pair = h.support_at(0, ["ant", "bee"])
h = assign_property(h, 0, pair, "cooperates")
h, duo = add_bond(h, 0, pair, "cooperates", "duo")
print("after one bond the tower has order", h.order)
print("boundary of duo:", boundary(h, duo))

# gamma lists every admissible binding target at a level
trio = h.support_at(0, ["ant", "bee", "cricket"])
h = assign_property(h, 0, trio, "swarms")
print("gamma at level 0:", [(str(s), t) for s, t in gamma(h, 0)])

# a bond of bonds: bind duo together with the identity bond of cricket
h, ic = identity_bond(h, 0, h.element(0, "cricket"))
upper = h.support_at(1, [duo.id, ic.id])
h = assign_property(h, 1, upper, "team")
h, team = add_bond(h, 1, upper, "team", "team")
print("order now:", h.order)
print("team dissolved once:", boundary(h, team))
print("team dissolved to the ground:", iterated_boundary(h, team, 0))

# the validator re-checks every law; construction keeps it empty
report = validate(h)
print(report.render())
