"""Transition amplitudes for the friend F and Wigner W in the two-qubit toy model."""

import numpy as np

from finite_observers import check_r1_consistency, constraint_residual
from finite_observers.wigner import (
    classical_assignment,
    quantum_observer_assignment,
    solution_family,
    standard_qm_assignment,
)

a = b = 1 / np.sqrt(2)
for name, states in (("standard", standard_qm_assignment(a, b)), ("classical", classical_assignment(a, b))):
    r = check_r1_consistency(*states)
    print(f"{name:9s}  F: {r.amplitude_F.real:.6f}  W: {r.amplitude_W.real:.6f}  "
          f"violation {r.violation:.8f}  consistent {r.consistent}")
print("|alpha - |alpha|^2| =", abs(a - abs(a) ** 2))

print("\ntoy assignments satisfying alpha = a'a'' + b'b'':")
for t, toy in zip(np.linspace(0, np.pi, 4), solution_family(a, np.linspace(0, np.pi, 4))):
    r = check_r1_consistency(*quantum_observer_assignment(a, b, *toy))
    print(f"  theta = {t:.3f}  residual {constraint_residual(a, b, *toy):.1e}  consistent {r.consistent}")
