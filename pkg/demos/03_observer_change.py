"""Changing observers on the lattice: an exact isometry, shown on a localized observer."""

import numpy as np

from finite_observers import FrameMap, FrameSpec, Lattice, amplitude_preservation_check, transform_state
from finite_observers.frames import conditional_slice, localized_observer_state, superposed_observer_state
from finite_observers.lattice import gaussian_factor, random_gaussian_mixture

frame = FrameSpec.create("s", 2, {"i": 1, "s'": 3})
lat = Lattice.for_frame(frame)
fmap = FrameMap.between(frame, "s'")
print("target frame:", fmap.target.observer_id, fmap.target.bodies)

rng = np.random.default_rng(0)
phi, psi = (random_gaussian_mixture(lat, frame, rng) for _ in range(2))
chk = amplitude_preservation_check(phi, psi, fmap)
print(f"<phi|psi> = {chk.source_amplitude:.6f}, after the change {chk.target_amplitude:.6f}, "
      f"difference {chk.difference:.1e}")

# Particle in a Gaussian, observer s' pinned at x_s' = c.
c = 2.5
particle = gaussian_factor(lat, 1.0, 2.0, 0.3)
moved = transform_state(localized_observer_state(lat, frame, particle, "s'", c), fmap)
x = lat.x()
weights = moved.probability().sum(axis=0)
print(f"\nobserver s now sits at x'_s = {x[np.argmax(weights)]:+.2f}  (c' = -c = {-c:+.2f})")
slice_ = conditional_slice(moved, "s", -c)
for shift, name in ((c, "psi(x' + c)"), (-c, "psi(x' + c')")):
    err = np.max(np.abs(slice_ - gaussian_factor(lat, 1.0 - shift, 2.0, 0.3)))
    print(f"  particle factor vs {name:13s}: max difference {err:.2e}")

# A superposed observer leaves the particle in a superposition of two translations.
sup = transform_state(superposed_observer_state(lat, frame, gaussian_factor(lat, 0, 2, 0), "s'", c), fmap)
w = sup.probability().sum(axis=0)
print("\nsuperposed observer: weights at x'_s = -c, +c:",
      round(w[np.argmin(abs(x + c))], 6), round(w[np.argmin(abs(x - c))], 6))
