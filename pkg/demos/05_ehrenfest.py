"""Expectation values under free, naive and interacting Hamiltonians."""

from fractions import Fraction

import numpy as np

from finite_observers import FrameSpec, HamiltonianSpec, HarmonicPotential, Lattice, ehrenfest_track, evolve
from finite_observers import gaussian_product_state

one = FrameSpec.create("s", 2, {"i": Fraction(1, 2)})
lat = Lattice.for_frame(one, 64, 40.0)
psi = gaussian_product_state(lat, one, [(-2.0, 2.0, 0.4)])

for kind in ("free_N", "naive"):
    rep = ehrenfest_track(evolve(psi, HamiltonianSpec(kind, one), 0.01, 100))
    ratio = np.median(rep.dxdt["i"] / (rep.p["i"][1:-1] / 0.5))
    print(f"{kind:7s} d<x>/dt divided by <p>/m = {ratio:.6f}")
print("the naive Hamiltonian picks up the factor 1 + m/m_s =", 1 + one.ratio("i"))

two = FrameSpec.create("s", 3, {"a": 2, "b": Fraction(1, 2)})
lat2 = Lattice.for_frame(two, 64, 40.0)
psi2 = gaussian_product_state(lat2, two, [(-1.5, 2.0, 0.2), (1.5, 2.0, -0.1)])
spec = HamiltonianSpec("two_body_interacting", two, HarmonicPotential("a", "b", 0.05))
rep = ehrenfest_track(evolve(psi2, spec, 0.001, 1000, save_every=2))
print("\ninteracting pair, harmonic coupling k = 0.05:")
for b in two.bodies:
    m = float(two.mass(b))
    print(f"  {b}: |dp/dt + <dV/dx>| <= {np.abs(rep.force_residual(b)).max():.1e}"
          f"   |dp/dt + <dV/dx>/m| <= {np.abs(rep.displayed_force_residual(b, m)).max():.1e}")
print("  total momentum rate:", f"{np.abs(rep.dpdt['a'] + rep.dpdt['b']).max():.1e}")
