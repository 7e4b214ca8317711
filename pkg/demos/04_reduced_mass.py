"""A free particle seen by a finite-mass observer spreads with the reduced mass."""

from finite_observers import reduced_mass_spreading_check

for m_s in (1, 4, 10 ** 9):
    rep = reduced_mass_spreading_check(1, m_s, sigma0=2.0, T=3.0, samples=6)
    print(f"m_i = 1, m_s = {m_s:<10}  mu = {float(rep.mu):.6f}  max relative width error {rep.max_relative_error:.1e}")
    if m_s == 1:
        for t, w, p in zip(rep.times, rep.measured, rep.predicted):
            print(f"    t = {t:4.1f}  width {w:.6f}  law {p:.6f}")

# The particle as observer and the observer as particle give the same curve.
a = reduced_mass_spreading_check(1, 3)
b = reduced_mass_spreading_check(3, 1, particle="s", observer="i")
print("role swap, largest width difference:", abs(a.measured - b.measured).max())
