"""Grid states: modified commutators as expectation values, and the new uncertainty bounds."""

from fractions import Fraction

import numpy as np

from finite_observers import FrameSpec, Lattice, expectation, gaussian_product_state, uncertainty_matrix
from finite_observers.lattice import (
    canonical_mutual_information,
    commutator_expr,
    gaussian_mutual_information,
    momentum_covariance,
    position_mutual_information,
)

frame = FrameSpec.create("s", 2, {"i": 1, "j": Fraction(1, 2)})
lat = Lattice.for_frame(frame, n=128, L=40.0)
psi = gaussian_product_state(lat, frame, [(-1.0, 2.0, 0.2), (1.5, 2.0, -0.3)])

print("<[x_a, p_b]> / i hbar on the grid:")
for a in frame.bodies:
    vals = [expectation(psi, commutator_expr(f"x_{a}", f"p_{b}")) / 1j for b in frame.bodies]
    print(f"  {a}:", np.round(np.real(vals), 12))
print("expected:", [[str(c) for c in row] for row in frame.commutation_matrix()])

print("\nuncertainty matrix (product, bound):")
for row in uncertainty_matrix(psi, frame):
    print("  " + "  ".join(f"dx_{e.coord} dp_{e.body}: {e.product:.4f} >= {e.bound:.4f}" for e in row))

# A product in position is generally entangled in the physical momenta.
print("\nposition mutual information:", f"{position_mutual_information(psi, 'i', 'j'):.2e}")
print("canonical pi mutual information:", f"{canonical_mutual_information(psi, 'i', 'j'):.2e}")
print("physical p mutual information (Gaussian estimate):",
      f"{gaussian_mutual_information(momentum_covariance(psi)):.4f}")
