"""
Two reconstructions, one pair of images
=======================================

Points on the quadric x0 x1 + x2 x3 = 0, seen by the canonical cameras, admit
two more camera pairs and point sets that produce exactly the same images.
Here we find them, check them exactly, and look at what happens to points
that sit on special lines.
"""

import random
from fractions import Fraction

from critical_configs import (
    Configuration,
    canonical_pair,
    conjugate_configuration,
    epipolar_lines,
    is_critical,
    verify_same_images,
)

pair = canonical_pair()

###############################################################################
# Rational points on the quadric: pick x1, x2, x3 and solve for x0.

rng = random.Random(1)
points = []
while len(points) < 10:
    x1, x2, x3 = (rng.randint(-6, 6) for _ in range(3))
    if x1:
        points.append((Fraction(-x2 * x3, x1), x1, x2, x3))

report = is_critical(Configuration(pair, points))
print(report.status, "-", report.verdict.quadric_kind.value)
print("conjugates found:", len(report.conjugates))

###############################################################################
# Each conjugate comes with its own cameras.  Image equality is exact.

for c in report.conjugates:
    print("F_Q =", [[str(v) for v in row] for row in c.form.matrix])
    check = verify_same_images(report.original, (c.pair, c.points))
    print("  same images:", check.all_match)
    x, y = report.original.points[0], c.points[0]
    print("  first point", [str(v) for v in x], "->", [str(v) for v in y])

###############################################################################
# A point on one of the epipolar lines of F_Q would have to go to a camera
# center of the conjugate pair, so it is flagged instead.

F_Q = report.conjugates[0].form
g12, _ = epipolar_lines(pair, F_Q)
a, b = g12.points()
on_line = tuple(2 * u + v for u, v in zip(a, b))
conj = conjugate_configuration(Configuration(pair, [on_line] + points[:3]), F_Q)
print("flags:", conj.flags)
