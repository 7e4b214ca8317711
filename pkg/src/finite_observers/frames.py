"""Observer transformations acting on lattice states and projectors.

Changing from observer s to observer s' sends grid coordinates

    x'_k = x_k - x_{s'}   (k != s'),        x'_s = -x_{s'}

which, with a shared spacing and periodic wrap, is a permutation of grid
indices. States and grid-diagonal projectors are transported by that
permutation, so the map is an exact isometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import FrameMismatchError
from .frame import FrameSpec
from .lattice import Lattice, LatticeState, kronecker_factor, product_state


@dataclass(frozen=True)
class FrameMap:
    """Transformation from the frame of ``source`` to the frame of ``target``.

    ``target`` may list its bodies in any order; :meth:`between` keeps the
    slot layout (the old observer takes the new observer's slot).
    """

    source: FrameSpec
    target: FrameSpec

    def __post_init__(self):
        s, t = self.source, self.target
        if s.dim != 1 or t.dim != 1:
            raise ValueError("lattice frame maps need one-axis frames")
        if s.observer_id == t.observer_id:
            if sorted(s.bodies) != sorted(t.bodies) or t.with_order(s.bodies) != s:
                raise FrameMismatchError("same observer but different systems")
            return
        if not s.same_system(t) or t.observer_id not in s.bodies or s.observer_id not in t.bodies:
            raise FrameMismatchError(
                f"{s.observer_id!r} -> {t.observer_id!r}: frames must describe the same system"
            )

    @classmethod
    def between(cls, source: FrameSpec, new_observer: str) -> "FrameMap":
        return cls(source, source.relative_to(new_observer))

    def inverse(self) -> "FrameMap":
        return FrameMap(self.target, self.source)

    def source_indices(self, n: int) -> tuple[np.ndarray, ...]:
        """For every target grid point, the source grid index per source axis.

        Centered indices j = k - n/2 carry the linear rule exactly (mod n).
        """
        s, t = self.source, self.target
        D = len(t.bodies)
        jt = [j - n // 2 for j in np.indices((n,) * D)]
        tj = dict(zip(t.bodies, jt))
        out = []
        for b in s.bodies:
            if s.observer_id == t.observer_id:
                js = tj[b]
            elif b == t.observer_id:
                js = -tj[s.observer_id]
            else:
                js = tj[b] - tj[s.observer_id]
            out.append((js + n // 2) % n)
        return tuple(out)

    def permutation(self, n: int) -> np.ndarray:
        """Flat index array P with target.ravel() == source.ravel()[P]."""
        idx = self.source_indices(n)
        return np.ravel_multi_index(idx, (n,) * len(idx)).ravel()

    def target_lattice(self, lattice: Lattice) -> Lattice:
        return lattice.relabeled(self.target.bodies)


def compose(first: FrameMap, second: FrameMap) -> FrameMap:
    """Direct map equivalent to applying ``first`` then ``second``."""
    if first.target != second.source:
        raise FrameMismatchError("maps do not chain")
    return FrameMap(first.source, second.target)


def composed_permutation(first: FrameMap, second: FrameMap, n: int) -> np.ndarray:
    return first.permutation(n)[second.permutation(n)]


def transform_state(state: LatticeState, fmap: FrameMap) -> LatticeState:
    """Apply the observer transformation to a lattice state."""
    if state.frame != fmap.source:
        raise FrameMismatchError("state frame differs from the map's source frame")
    lat = state.lattice
    if lat.coords != tuple(fmap.source.bodies):
        raise FrameMismatchError("state lattice does not match the source layout")
    amp = state.amplitudes[fmap.source_indices(lat.n)]
    return LatticeState(amp, fmap.target, fmap.target_lattice(lat), state.constants)


class AmplitudeCheck(NamedTuple):
    source_amplitude: complex
    target_amplitude: complex
    difference: float


def amplitude_preservation_check(phi: LatticeState, psi: LatticeState, fmap: FrameMap) -> AmplitudeCheck:
    a = phi.inner(psi)
    b = transform_state(phi, fmap).inner(transform_state(psi, fmap))
    return AmplitudeCheck(a, b, abs(a - b))


@dataclass
class DiagonalProjector:
    """Grid-diagonal projector (a boolean mask over the joint grid)."""

    mask: np.ndarray
    frame: FrameSpec
    lattice: Lattice

    def apply(self, state: LatticeState) -> LatticeState:
        return state.replace(state.amplitudes * self.mask)

    def depends_on(self) -> tuple[str, ...]:
        """Coordinates along which the mask actually varies."""
        out = []
        for ax, c in enumerate(self.lattice.coords):
            if np.any(np.diff(self.mask, axis=ax)):
                out.append(c)
        return tuple(out)

    def support(self) -> np.ndarray:
        """Positions of the grid points kept, shape (count, D)."""
        idx = np.argwhere(self.mask)
        return self.lattice.x()[idx]

    def slice_at(self, coord: str, value: float) -> np.ndarray:
        """Mask restricted to ``coord == value`` (a grid point)."""
        ax = self.lattice.axis(coord)
        k = int(np.argmin(np.abs(self.lattice.wrap(self.lattice.x() - value))))
        return np.take(self.mask, k, axis=ax)


def window_projector(lattice: Lattice, frame: FrameSpec, coord: str, lo: float, hi: float) -> DiagonalProjector:
    """Keep grid points with lo <= x_coord <= hi on one coordinate."""
    x = lattice.coordinate(coord)
    mask = np.broadcast_to((x >= lo - 1e-12) & (x <= hi + 1e-12), lattice.shape).copy()
    return DiagonalProjector(mask, frame, lattice)


def point_projector(lattice: Lattice, frame: FrameSpec, coord: str, x_a: float) -> DiagonalProjector:
    """|x_a><x_a| on one coordinate, identity on the others."""
    hit = np.abs(kronecker_factor(lattice, x_a)) > 0
    shape = [1] * lattice.D
    shape[lattice.axis(coord)] = lattice.n
    mask = np.broadcast_to(hit.reshape(shape), lattice.shape).copy()
    return DiagonalProjector(mask, frame, lattice)


def transport_projection(projector: DiagonalProjector, fmap: FrameMap) -> DiagonalProjector:
    """T P T^dagger: the same index permutation applied to the mask."""
    if projector.frame != fmap.source:
        raise FrameMismatchError("projector frame differs from the map's source frame")
    mask = projector.mask[fmap.source_indices(projector.lattice.n)]
    return DiagonalProjector(mask, fmap.target, fmap.target_lattice(projector.lattice))


def localized_observer_state(lattice: Lattice, frame: FrameSpec, particle: np.ndarray,
                             observer: str, c: float) -> LatticeState:
    """psi(x_i) times a lattice delta of ``observer`` at position c (two coordinates)."""
    factors = []
    for coord in lattice.coords:
        factors.append(kronecker_factor(lattice, c) if coord == observer else particle)
    return product_state(lattice, frame, factors)


def superposed_observer_state(lattice: Lattice, frame: FrameSpec, particle: np.ndarray,
                              observer: str, c: float) -> LatticeState:
    """psi(x_i) times (|c> + |-c>)/sqrt(2) for the observer coordinate."""
    phi = (kronecker_factor(lattice, c) + kronecker_factor(lattice, -c)) / np.sqrt(2)
    factors = [phi if coord == observer else particle for coord in lattice.coords]
    return product_state(lattice, frame, factors)


def conditional_slice(state: LatticeState, coord: str, value: float) -> np.ndarray:
    """Amplitudes of a two-coordinate state on the line ``coord == value``.

    The lattice-delta normalization of a localized coordinate is undone, so
    for psi(x) * delta(x_coord - value) this returns psi on the grid.
    """
    lat = state.lattice
    if lat.D != 2:
        raise ValueError("conditional slices need a two-coordinate state")
    ax = lat.axis(coord)
    k = int(np.argmin(np.abs(lat.wrap(lat.x() - value))))
    return np.take(state.amplitudes, k, axis=ax) * np.sqrt(lat.spacing)
