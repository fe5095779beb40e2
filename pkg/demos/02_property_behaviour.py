# How property assignments behave under unions and intersections.
#
# A table from supports to token sets need not be functorial. Given induced
# maps along inclusions we can ask whether the union's tokens form a pushout
# (or pullback) over the overlap; without maps, a combiner predicts the
# union and anything beyond the prediction is emergent.

from hyperstruct.assignments import (
    InducedMaps,
    UNION,
    check_pushout,
    check_tensor,
    combine_phi,
    emergent,
    pair_token,
)
from hyperstruct.core import Support, new_hyperstructure

base = new_hyperstructure(["ann", "bob"])
ann = base.support_at(0, ["ann"])
bob = base.support_at(0, ["bob"])
both = base.support_at(0, ["ann", "bob"])
nobody = Support.empty(0)

# individual skills do not explain what the pair can produce together
omega = {
    ann: frozenset({"welds"}),
    bob: frozenset({"paints"}),
    nobody: frozenset(),
    both: frozenset({"welds", "paints", "builds-a-boat"}),
}
maps = InducedMaps(
    "covariant",
    {
        (nobody, ann): {},
        (nobody, bob): {},
        (nobody, both): {},
        (ann, both): {"welds": "welds"},
        (bob, both): {"paints": "paints"},
    },
)
report = check_pushout(omega, maps, ann, bob)
print(report.render())

# the same gap, seen through a combiner: the boat is emergent
print("emergent:", sorted(emergent(omega, ann, bob, UNION)))

# combiners by themselves
print("union:", sorted(combine_phi(UNION, {"p"}, {"q"}, frozenset())))

# a tensor-shaped table: the union carries exactly the pair tokens
w1, w2 = frozenset({"p", "q"}), frozenset({"x", "y", "z"})
omega_tensor = {
    ann: w1,
    bob: w2,
    both: frozenset(pair_token(a, b) for a in w1 for b in w2),
}
print(check_tensor(omega_tensor, ann, bob).render())
