# Local states folded up to a global one, and back down.
#
# States run level-reversed: base elements draw from the last space, the
# top bond from the first. A connector per transition folds each bond's
# boundary states; descent checks that covering families recompute the
# same answers. Localize distributes top states down the boundaries.

from hyperstruct.installers import from_simplicial_complex
from hyperstruct.states import (
    BROADCAST,
    PRODUCT,
    SpaceOp,
    check_amalgamation,
    check_tensor_pairing,
    globalize,
    localize,
    state_tower,
    validate_lambda,
)
from hyperstruct.topology import make_site, maximal_topology

FULL_TRIANGLE = [["v0"], ["v1"], ["v2"], ["v0", "v1"], ["v1", "v2"], ["v0", "v2"], ["v0", "v1", "v2"]]
tri = from_simplicial_complex(["v0", "v1", "v2"], FULL_TRIANGLE, graded=True)

# the dimension toy: every vertex carries 2; products fold upward
lam = globalize(tri, {"v0": 2, "v1": 2, "v2": 2}, [PRODUCT, PRODUCT])
for level, states in enumerate(lam.per_level):
    print(f"level {level}:", {str(e.id): v for e, v in sorted(states.items(), key=lambda kv: kv[0].key)})

site = make_site(tri, maximal_topology(tri))
print(check_amalgamation(site, lam, [PRODUCT, PRODUCT]).render())

# a finite state algebra: powers of two saturating into an overflow 0
tokens = frozenset({1, 2, 4, 8, 16, 32, 64, 0})
def saturating(a, b):
    if a == 0 or b == 0:
        return 0
    p = a * b
    return p if p <= 64 else 0

op = SpaceOp(unit=1, table={(a, b): saturating(a, b) for a in tokens for b in tokens})
tower = state_tower([tokens, tokens, tokens], [op, op, op])
print(validate_lambda(tri, tower, lam).render())
print(check_tensor_pairing(tri, tower, lam, 1).render())
print(check_tensor_pairing(tri, tower, lam, 2).render())

# and back down: broadcast the top state to everything reachable
top = tri.element(2, "{v0,v1,v2}")
down = localize(tri, {top: 64}, [BROADCAST, BROADCAST])
print("localized base:", {str(e.id): v for e, v in sorted(down.per_level[0].items(), key=lambda kv: kv[0].key)})
