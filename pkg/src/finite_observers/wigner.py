"""Two-qubit bookkeeping for the friend (F) / Wigner (W) scenario.

Basis order is |particle, other observer> = |00>, |01>, |10>, |11>.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import FrameMismatchError

CONSISTENCY_TOL = 1e-10


def as_complex(value) -> complex:
    """Accept complex numbers or JSON-style ``[re, im]`` pairs."""
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(re, im)
    return complex(value)


@dataclass(frozen=True)
class ToyFrameState:
    frame: str  # "F" or "W"
    coefficients: tuple

    def __post_init__(self):
        if self.frame not in ("F", "W"):
            raise ValueError("frame must be 'F' or 'W'")
        c = np.asarray([as_complex(v) for v in self.coefficients], dtype=complex)
        if c.shape != (4,):
            raise ValueError("a toy state has four coefficients")
        if abs(np.vdot(c, c).real - 1) > 1e-12:
            raise ValueError(f"toy state not normalized (norm^2 = {np.vdot(c, c).real!r})")
        object.__setattr__(self, "coefficients", tuple(c))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)

    @classmethod
    def product(cls, frame, particle, other) -> "ToyFrameState":
        return cls(frame, tuple(np.kron(np.asarray(particle, complex), np.asarray(other, complex))))

    @classmethod
    def correlated(cls, frame, a, b) -> "ToyFrameState":
        """a|00> + b|11>."""
        return cls(frame, (a, 0, 0, b))


def transition_amplitude(phi: ToyFrameState, psi: ToyFrameState) -> complex:
    if phi.frame != psi.frame:
        raise FrameMismatchError(f"states belong to frames {phi.frame!r} and {psi.frame!r}")
    return complex(np.vdot(phi.vector, psi.vector))


class ConsistencyReport(NamedTuple):
    amplitude_F: complex
    amplitude_W: complex
    violation: float
    consistent: bool

    def to_json(self):
        return {
            "amplitude_F": [self.amplitude_F.real, self.amplitude_F.imag],
            "amplitude_W": [self.amplitude_W.real, self.amplitude_W.imag],
            "violation": self.violation,
            "consistent": self.consistent,
        }


def check_r1_consistency(psi_F: ToyFrameState, phi_F: ToyFrameState,
                         psi_W: ToyFrameState, phi_W: ToyFrameState) -> ConsistencyReport:
    """Equal before/after transition amplitudes in both frames."""
    if psi_F.frame != "F" or phi_F.frame != "F" or psi_W.frame != "W" or phi_W.frame != "W":
        raise FrameMismatchError("expected two F states and two W states")
    a = transition_amplitude(phi_F, psi_F)
    b = transition_amplitude(phi_W, psi_W)
    v = abs(a - b)
    return ConsistencyReport(a, b, v, v < CONSISTENCY_TOL)


def standard_qm_assignment(alpha, beta) -> tuple:
    """F collapses to |0>|0>; W keeps a unitary-measurement superposition."""
    up, down = [1, 0], [0, 1]
    psi_F = ToyFrameState.product("F", [alpha, beta], up)
    phi_F = ToyFrameState.product("F", up, up)
    psi_W = ToyFrameState.product("W", [alpha, beta], up)
    phi_W = ToyFrameState.correlated("W", alpha, beta)
    return psi_F, phi_F, psi_W, phi_W


def classical_assignment(alpha, beta) -> tuple:
    """Both frames collapse; the observers carry no quantum state (kept at |0>)."""
    up = [1, 0]
    psi_F = ToyFrameState.product("F", [alpha, beta], up)
    phi_F = ToyFrameState.product("F", up, up)
    psi_W = ToyFrameState.product("W", [alpha, beta], up)
    phi_W = ToyFrameState.product("W", up, up)
    return psi_F, phi_F, psi_W, phi_W


def quantum_observer_assignment(alpha, beta, a1, b1, a2, b2) -> tuple:
    """F as in the standard case; W uses the correlated toy states.

    The W-frame amplitude is the inner product conj(a2) a1 + conj(b2) b1,
    which coincides with a1 a2 + b1 b2 for real (a2, b2).
    """
    up = [1, 0]
    psi_F = ToyFrameState.product("F", [alpha, beta], up)
    phi_F = ToyFrameState.product("F", up, up)
    psi_W = ToyFrameState.correlated("W", a1, b1)
    phi_W = ToyFrameState.correlated("W", a2, b2)
    return psi_F, phi_F, psi_W, phi_W


def constraint_residual(alpha, beta, a1, b1, a2, b2) -> float:
    """|alpha - (a1 a2 + b1 b2)| for unit pairs (alpha, beta), (a1, b1), (a2, b2)."""
    for x, y in ((alpha, beta), (a1, b1), (a2, b2)):
        if abs(abs(complex(x)) ** 2 + abs(complex(y)) ** 2 - 1) > 1e-12:
            raise ValueError("each coefficient pair must be unit norm")
    return abs(complex(alpha) - (complex(a1) * complex(a2) + complex(b1) * complex(b2)))


def solution_family(alpha, thetas) -> list:
    """Unit pairs (a1, b1, a2, b2) with a1 a2 + b1 b2 = alpha, one per angle.

    With v = (cos t, sin t) and u its real orthogonal complement, the
    second pair alpha v + sqrt(1 - |alpha|^2) u satisfies the relation for
    every t; the family is one solution branch among many.
    """
    alpha = complex(alpha)
    if abs(alpha) > 1 + 1e-15:
        raise ValueError("|alpha| must not exceed 1")
    rest = np.sqrt(max(0.0, 1 - abs(alpha) ** 2))
    out = []
    for t in np.atleast_1d(thetas):
        v = np.array([np.cos(t), np.sin(t)])
        u = np.array([-np.sin(t), np.cos(t)])
        w = alpha * v + rest * u
        out.append((complex(v[0]), complex(v[1]), complex(w[0]), complex(w[1])))
    return out
