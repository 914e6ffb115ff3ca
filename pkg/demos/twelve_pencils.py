"""
The twelve ways a line of forms meets the rank-2 locus
=======================================================

Two cameras fix a fundamental form F_P.  Any other form F0 spans a line of
bilinear forms with it, and the determinant restricted to that line is a
binary cubic.  Where its roots fall, and what happens when it vanishes
identically, decides which quadric the line pulls back to.
"""

from critical_configs import (
    FormPencil,
    canonical_pair,
    classify_pencil,
    criticality_verdict,
    fundamental_form,
    pullback_quadric,
)

pair = canonical_pair()
F_P = fundamental_form(pair)
print("F_P =", [[str(v) for v in row] for row in F_P.matrix])

# One representative F0 for each behaviour
F0S = [
    ((0, 0, 0), (1, 0, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 0, 0), (0, 0, 1)),
    ((0, 0, 0), (0, 0, 1), (1, 0, 0)),
    ((0, 0, 1), (0, 1, 0), (1, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 1)),
    ((0, 1, 0), (0, 0, 0), (0, 0, 0)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 0)),
    ((1, 0, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 1), (0, 0, 0), (0, 0, 0)),
    ((1, 0, 1), (1, 1, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 1), (0, 1, 0)),
]

###############################################################################
# Classify every line.  The cubic's coefficients multiply a^3, a^2 b, a b^2, b^3
# for the member a F0 + b F_P.

for k, f0 in enumerate(F0S, 1):
    pencil = FormPencil.from_matrices(F_P.matrix, f0)
    case = classify_pencil(pencil)
    verdict = criticality_verdict(case)
    S = pullback_quadric(f0, pair)
    cubic = " ".join(str(c) for c in case.cubic)
    count = verdict.conjugate_count
    print(f"{k:2d}  cubic [{cubic:>8}]  rank {S.rank}  {case.tag.value:42s} {verdict.quadric_kind.value}  ({count} conjugates)")

###############################################################################
# Rows 3 and 4 are worth a closer look.  For row 3 the cubic is a b^2: the
# double root is F0 itself and the quadric is a cone.  For row 4 it is a^2 b,
# so the line is tangent at F_P and the quadric is smooth but holds the
# baseline.  Each is the other's conjugate.

for k in (3, 4):
    case = classify_pencil(FormPencil.from_matrices(F_P.matrix, F0S[k - 1]))
    v = criticality_verdict(case)
    print(f"row {k}: {v.quadric_kind.value} <-> conjugate {v.conjugate_kind.value}")
