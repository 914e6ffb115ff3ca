"""
Permissible line pairs, curve types and divisor classes
========================================================

A conjugate reconstruction is pinned down by a pair of lines on the quadric,
one through each camera center.  This script lists those pairs for a few
quadrics, then pushes curve types across to the conjugate side.
"""

from critical_configs import (
    CurveTypeError,
    basis_class,
    canonical_pair,
    conjugates_from_permissible,
    curve_type_conjugate_planes,
    curve_type_conjugate_quadric,
    hyperplane_class,
    pullback_quadric,
)

pair = canonical_pair()
FIXTURES = {
    "smooth quadric": ((0, 0, 0), (1, 0, 0), (0, 0, 1)),
    "cone with a camera at the vertex": ((1, 0, 1), (1, 1, 0), (0, 0, 0)),
    "two planes, cameras in one of them": ((0, 0, 0), (0, 0, 1), (0, 1, 0)),
}

###############################################################################
# Line pairs behind each conjugate

for name, f0 in FIXTURES.items():
    S = pullback_quadric(f0, pair)
    rep = conjugates_from_permissible(S, pair, samples=3, seed=0)
    print(f"{name}: {len(rep.entries)} pairs, permissible={rep.all_permissible}, injective={rep.injective}")
    for _, lines, check in rep.entries:
        g12, g21 = lines
        print("   ", [list(map(str, p)) for p in g12.points()], "|", [list(map(str, p)) for p in g21.points()])

###############################################################################
# Curve types.  A curve of bidegree (a, b) through the centers with
# multiplicities c1, c2 goes to a curve of type (a, a+b-c1-c2, a-c2, a-c1).

for t in [(1, 0, 0, 0), (0, 1, 0, 0), (2, 1, 1, 1), (0, 0, 1, 1)]:
    try:
        print(t, "->", curve_type_conjugate_quadric(t))
    except CurveTypeError as err:
        print(t, "->", err)

print((1, 1, 0, 0, 0), "->", curve_type_conjugate_planes((1, 1, 0, 0, 0)))

###############################################################################
# The hyperplane class of the conjugate side, checked against the intersection
# numbers that characterize it.

H = hyperplane_class("smooth")
L1, L2, E1 = (basis_class("smooth", n) for n in ("L1", "L2", "E1"))
print("smooth: H.L1 =", H * L1, " H.L2 =", H * L2, " H.(L1-E1) =", H * (L1 - E1), " H^2 =", H * H)
