"""Sequential-measurement signature and the full uncertainty matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import FrameMismatchError
from .frame import FrameSpec, as_mass
from .lattice import (
    Lattice,
    LatticeState,
    PhysConstants,
    apply_physical_p,
    apply_position,
    gaussian_product_state,
    uncertainty_pair,
)

BOUND_TOL = 1e-8


@dataclass(frozen=True)
class ProtocolResult:
    xp_moment: complex  # <dx_L dp_R>, position measured last
    px_moment: complex  # <dp_R dx_L>
    delta_c: complex
    predicted: complex
    mass_ratio: float

    @property
    def error(self) -> float:
        return abs(self.delta_c - self.predicted)

    def to_json(self, hbar: float = 1.0) -> dict:
        def pair(z):
            return [z.real, z.imag]

        return {
            "moment_xp": pair(self.xp_moment),
            "moment_px": pair(self.px_moment),
            "delta_c": pair(self.delta_c),
            "predicted": pair(self.predicted),
            "mass_ratio": self.mass_ratio,
            "abs_delta_c_over_hbar": abs(self.delta_c) / hbar,
            "abs_error": self.error,
        }


def _check_state(state: LatticeState, frame: FrameSpec):
    if state.frame != frame:
        raise FrameMismatchError("state is not expressed in the given frame")


def delta_c(state: LatticeState, frame: FrameSpec, L: str, R: str) -> ProtocolResult:
    """<dx_L dp_R> - <dp_R dx_L> with means taken from ``state``.

    L and R are the two mirrors (equal mass m_M); the frame's observer has
    mass m_O, so the expected value is i hbar m_M/m_O.
    """
    _check_state(state, frame)
    if L == R:
        raise ValueError("ΔC needs two distinct bodies")
    if frame.mass(L) != frame.mass(R):
        raise ValueError(f"bodies {L!r} and {R!r} must have equal mass")
    state = state.normalized()
    mx = state.inner(apply_position(state, L)).real
    mp = state.inner(apply_physical_p(state, R)).real

    def dx(s):
        return apply_position(s, L) - s * mx

    def dp(s):
        return apply_physical_p(s, R) - s * mp

    xp = state.inner(dx(dp(state)))
    px = state.inner(dp(dx(state)))
    ratio = frame.ratio(R)
    return ProtocolResult(xp, px, xp - px, 1j * state.hbar * float(ratio), float(ratio))


class UncertaintyEntry(NamedTuple):
    coord: str
    body: str
    product: float
    bound: float
    margin: float


def uncertainty_matrix(state: LatticeState, frame: FrameSpec) -> list[list[UncertaintyEntry]]:
    """Delta x_i Delta p_j against (hbar/2)(delta_ij + m_j/m_s) for all pairs."""
    _check_state(state, frame)
    rows = []
    for i in frame.bodies:
        row = []
        for j in frame.bodies:
            u = uncertainty_pair(state, i, j)
            row.append(UncertaintyEntry(i, j, u.product, u.bound, u.product - u.bound))
        rows.append(row)
    return rows


def bounds_respected(matrix, tol: float = BOUND_TOL) -> bool:
    return all(e.margin >= -tol for row in matrix for e in row)


def ligo_frame(ratio, mirrors=("L", "R"), observer="O") -> FrameSpec:
    """Two equal mirrors of mass 1 and an observer of mass 1/ratio."""
    return FrameSpec.create(observer, 1 / as_mass(ratio), {m: 1 for m in mirrors})


def delta_c_sweep(ratios, n: int = 128, L: float = 40.0, hbar: float = 1.0,
                  params=((-3.0, 2.0, 0.3), (2.0, 2.0, -0.2))) -> list[dict]:
    """ΔC over mass ratios on one fixed Gaussian product state.

    Rows carry mass_ratio, |ΔC|/hbar, predicted and relative_error.
    """
    rows = []
    for r in ratios:
        frame = ligo_frame(r)
        lat = Lattice.for_frame(frame, n, L)
        state = gaussian_product_state(lat, frame, params, PhysConstants(hbar))
        res = delta_c(state, frame, *frame.bodies)
        measured = abs(res.delta_c) / hbar
        predicted = abs(res.predicted) / hbar
        rows.append({
            "mass_ratio": float(r),
            "abs_delta_c_over_hbar": measured,
            "predicted": predicted,
            "relative_error": abs(measured - predicted) / predicted if predicted else measured,
        })
    return rows


def spread_of(values) -> float:
    v = np.asarray(values)
    return float(np.max(np.abs(v - v[0]))) if v.size else 0.0
