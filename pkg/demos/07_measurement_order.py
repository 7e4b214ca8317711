"""Ordering of position and momentum readouts on two mirrors: the ΔC signature."""

import numpy as np

from finite_observers import Lattice, delta_c
from finite_observers.lattice import random_gaussian_mixture
from finite_observers.protocols import delta_c_sweep, ligo_frame

print(f"{'m_M/m_O':>10s} {'|ΔC|/hbar':>14s} {'relative error':>15s}")
for row in delta_c_sweep([1e-2, 1e-4, 1e-6, 1e-9]):
    print(f"{row['mass_ratio']:10.0e} {row['abs_delta_c_over_hbar']:14.6e} {row['relative_error']:15.1e}")

# The value does not depend on the state the moments are taken in.
frame = ligo_frame(1e-4)
lat = Lattice.for_frame(frame)
rng = np.random.default_rng(1)
vals = [delta_c(random_gaussian_mixture(lat, frame, rng), frame, "L", "R").delta_c for _ in range(5)]
print("\nΔC over five random states:", [f"{v.imag:.12f}i" for v in vals])
