"""Exact commutators relative to a finite-mass observer, and their frame covariance."""

from fractions import Fraction

from finite_observers import AlgebraElement, FrameSpec, commutator, normal_order, verify_covariance

# Observer s (mass 2) sees a particle i (mass 1) and another observer s' (mass 3).
frame = FrameSpec.create("s", 2, {"i": 1, "s'": 3})
print("commutation matrix A[i][j] = delta_ij + m_j/m_s:")
for body, row in zip(frame.bodies, frame.commutation_matrix()):
    print(f"  {body:3s}", [str(a) for a in row])

x_i = AlgebraElement.generator(frame, "x_i")
p_i = AlgebraElement.generator(frame, "p_i")
p_s2 = AlgebraElement.generator(frame, "p_s'")
print("\n[x_i, p_i]  =", commutator(x_i, p_i))
print("[x_i, p_s'] =", commutator(x_i, p_s2))
print("p_i x_i in normal order:", normal_order([(1, ["p_i", "x_i"])], frame))

# The same system seen from s'. Rewriting the s' generators through the
# s ones reproduces the s' commutators with no residual, and vice versa.
other = frame.relative_to("s'")
report = verify_covariance(frame, other)
print(f"\ncovariance s <-> s': {len(report.checks)} identities, all zero residual: {report.passed}")

# A heavy observer gives almost canonical commutators.
heavy = FrameSpec.create("s", 10 ** 9, {"i": 1})
xh, ph = (AlgebraElement.generator(heavy, t) for t in ("x_i", "p_i"))
print("m_s = 1e9 m_i: [x_i, p_i] =", commutator(xh, ph))
print("offset from canonical:", heavy.commutation_matrix()[0][0] - 1 == Fraction(1, 10 ** 9))
