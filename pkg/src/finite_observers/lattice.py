"""Periodic-grid realization of observer-relative wavefunctions.

Each external body of a one-axis frame gets one lattice coordinate. The
canonical auxiliary momenta pi_k = -i hbar d/dx_k are diagonal in the
discrete Fourier basis, and the physical momenta are the linear
combinations p = M pi given by :class:`MomentumMap`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import AliasingError, FrameMismatchError, UnknownBodyError
from .frame import FrameSpec

MAX_COORDS = 3


@dataclass(frozen=True)
class PhysConstants:
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")


@dataclass(frozen=True)
class Lattice:
    """Joint periodic grid, identical n and L on every coordinate."""

    coords: tuple[str, ...]
    n: int = 128
    L: float = 40.0

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if not 1 <= len(self.coords) <= MAX_COORDS:
            raise ValueError(f"lattices hold 1..{MAX_COORDS} coordinates")
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("coordinate labels must be unique")
        if self.n < 4 or self.n & (self.n - 1):
            raise ValueError("n must be a power of two (>= 4)")
        if not self.L > 0:
            raise ValueError("L must be positive")

    @classmethod
    def for_frame(cls, frame: FrameSpec, n: int = 128, L: float = 40.0) -> "Lattice":
        if frame.dim != 1:
            raise ValueError("lattice states need a one-axis frame")
        return cls(frame.bodies, n, L)

    @property
    def D(self) -> int:
        return len(self.coords)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.D

    @property
    def spacing(self) -> float:
        return self.L / self.n

    @property
    def cell(self) -> float:
        """Volume element spacing**D of the joint grid."""
        return self.spacing ** self.D

    def axis(self, coord: str) -> int:
        try:
            return self.coords.index(coord)
        except ValueError:
            raise UnknownBodyError(coord, "not a lattice coordinate") from None

    def x(self) -> np.ndarray:
        """Grid positions -L/2 + k*spacing."""
        return -self.L / 2 + self.spacing * np.arange(self.n)

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in numpy FFT order."""
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    def coordinate(self, coord: str) -> np.ndarray:
        """Broadcastable array of the positions along ``coord``."""
        shape = [1] * self.D
        shape[self.axis(coord)] = self.n
        return self.x().reshape(shape)

    def wrap(self, values):
        """Map positions onto the sawtooth interval [-L/2, L/2)."""
        return (np.asarray(values) + self.L / 2) % self.L - self.L / 2

    def relabeled(self, coords: Sequence[str]) -> "Lattice":
        return Lattice(tuple(coords), self.n, self.L)


class MomentumMap:
    """Exact linear map between physical momenta p and canonical momenta pi.

    ``p_from_pi[k][l] = delta_kl + m_k/m_s`` and its inverse
    ``pi_from_p[k][l] = delta_kl - m_k/(m_s + sum m)``.
    """

    def __init__(self, frame: FrameSpec):
        self.frame = frame
        r = [frame.ratio(b) for b in frame.bodies]
        D = len(r)
        self.p_from_pi = tuple(tuple((1 if k == l else 0) + r[k] for l in range(D)) for k in range(D))
        M = frame.total_mass()
        if M is None:
            w = [Fraction(0)] * D
        else:
            w = [frame.mass(b) / M for b in frame.bodies]
        self.pi_from_p = tuple(tuple((1 if k == l else 0) - w[k] for l in range(D)) for k in range(D))

    @staticmethod
    def _matmul(a, b):
        n = len(a)
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))

    def is_exact_inverse(self) -> bool:
        n = len(self.p_from_pi)
        ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
        return (self._matmul(self.p_from_pi, self.pi_from_p) == ident
                and self._matmul(self.pi_from_p, self.p_from_pi) == ident)

    def row(self, body: str) -> np.ndarray:
        return np.array([float(c) for c in self.p_from_pi[self.frame.index(body)]])

    def as_array(self) -> np.ndarray:
        return np.array([[float(c) for c in row] for row in self.p_from_pi])


@dataclass
class LatticeState:
    """Complex amplitudes on the joint grid of a frame.

    Physical states are built normalized (sum |a|^2 spacing^D = 1); results
    of applying operators are returned as unnormalized LatticeStates.
    """

    amplitudes: np.ndarray
    frame: FrameSpec
    lattice: Lattice
    constants: PhysConstants = field(default_factory=PhysConstants)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != self.lattice.shape:
            raise ValueError(f"amplitude shape {self.amplitudes.shape} != lattice {self.lattice.shape}")
        if tuple(self.frame.bodies) != self.lattice.coords:
            raise FrameMismatchError("lattice coordinates must match the frame's bodies")

    @property
    def hbar(self) -> float:
        return self.constants.hbar

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * self.lattice.cell))

    def normalized(self) -> "LatticeState":
        return self.replace(self.amplitudes / self.norm())

    def replace(self, amplitudes) -> "LatticeState":
        return LatticeState(amplitudes, self.frame, self.lattice, self.constants)

    def inner(self, other: "LatticeState") -> complex:
        """<self|other> with the spacing^D weight."""
        if other.lattice.shape != self.lattice.shape or other.lattice.L != self.lattice.L:
            raise FrameMismatchError("states live on different lattices")
        return complex(np.vdot(self.amplitudes, other.amplitudes) * self.lattice.cell)

    def probability(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2 * self.lattice.cell

    def __add__(self, other: "LatticeState") -> "LatticeState":
        return self.replace(self.amplitudes + other.amplitudes)

    def __sub__(self, other: "LatticeState") -> "LatticeState":
        return self.replace(self.amplitudes - other.amplitudes)

    def __mul__(self, c) -> "LatticeState":
        return self.replace(self.amplitudes * c)

    __rmul__ = __mul__


# ---------------------------------------------------------------- states

def gaussian_factor(lattice: Lattice, center: float, width: float, momentum: float = 0.0,
                    hbar: float = 1.0) -> np.ndarray:
    """Normalized periodic Gaussian with position standard deviation ``width``."""
    d = lattice.wrap(lattice.x() - center)
    psi = np.exp(-d ** 2 / (4 * width ** 2) + 1j * momentum * d / hbar)
    return psi / np.sqrt(np.sum(np.abs(psi) ** 2) * lattice.spacing)


def kronecker_factor(lattice: Lattice, position: float) -> np.ndarray:
    """Single-grid-point amplitude normalized as a lattice delta."""
    x = lattice.x()
    k = int(np.argmin(np.abs(lattice.wrap(x - position))))
    if not np.isclose(lattice.wrap(x[k] - position), 0.0, atol=1e-9 * lattice.spacing):
        raise ValueError(f"position {position} is not a grid point")
    out = np.zeros(lattice.n, dtype=complex)
    out[k] = 1 / np.sqrt(lattice.spacing)
    return out


def product_state(lattice: Lattice, frame: FrameSpec, factors: Sequence[np.ndarray],
                  constants: PhysConstants | None = None) -> LatticeState:
    """Normalized product of one 1-D factor per coordinate."""
    if len(factors) != lattice.D:
        raise ValueError(f"need {lattice.D} factors, got {len(factors)}")
    amp = np.ones(lattice.shape, dtype=complex)
    for k, f in enumerate(factors):
        f = np.asarray(f, dtype=complex)
        shape = [1] * lattice.D
        shape[k] = lattice.n
        amp = amp * f.reshape(shape)
    state = LatticeState(amp, frame, lattice, constants or PhysConstants())
    return state.normalized()


def gaussian_product_state(lattice: Lattice, frame: FrameSpec, params: Sequence[tuple],
                           constants: PhysConstants | None = None) -> LatticeState:
    """Product of Gaussians, one ``(center, width, mean_pi)`` per coordinate.

    Raises
    ------
    AliasingError
        If a width is below two grid spacings or a center sits closer than
        five widths to the periodic seam.
    """
    constants = constants or PhysConstants()
    factors = []
    for coord, (center, width, momentum) in zip(lattice.coords, params):
        if width < 2 * lattice.spacing:
            raise AliasingError(f"width {width} on {coord!r} is below 2 grid spacings")
        if lattice.L / 2 - abs(center) < 5 * width:
            raise AliasingError(f"center {center} on {coord!r} is within 5 widths of the boundary")
        factors.append(gaussian_factor(lattice, center, width, momentum, constants.hbar))
    if len(factors) != lattice.D:
        raise ValueError(f"need {lattice.D} parameter triples")
    return product_state(lattice, frame, factors, constants)


def random_gaussian_mixture(lattice: Lattice, frame: FrameSpec, rng: np.random.Generator,
                            n_components: int = 3, constants: PhysConstants | None = None,
                            spread: float = 4.0, widths=(1.5, 2.5), kmax: float = 1.0) -> LatticeState:
    """Random superposition of localized Gaussian products (test states)."""
    constants = constants or PhysConstants()
    amp = np.zeros(lattice.shape, dtype=complex)
    for _ in range(n_components):
        factors = [
            gaussian_factor(lattice, rng.uniform(-spread, spread), rng.uniform(*widths),
                            rng.uniform(-kmax, kmax), constants.hbar)
            for _ in lattice.coords
        ]
        c = rng.normal() + 1j * rng.normal()
        amp = amp + c * product_state(lattice, frame, factors, constants).amplitudes
    return LatticeState(amp, frame, lattice, constants).normalized()


# ------------------------------------------------------------- operators

def apply_position(state: LatticeState, coord: str) -> LatticeState:
    return state.replace(state.amplitudes * state.lattice.coordinate(coord))


def apply_canonical_pi(state: LatticeState, coord: str) -> LatticeState:
    """Spectral -i hbar d/dx along ``coord``."""
    lat = state.lattice
    ax = lat.axis(coord)
    k = lat.wavenumbers()
    shape = [1] * lat.D
    shape[ax] = lat.n
    spec = np.fft.fft(state.amplitudes, axis=ax)
    return state.replace(np.fft.ifft(spec * (state.hbar * k).reshape(shape), axis=ax))


def pi_grid(lattice: Lattice, hbar: float = 1.0) -> list[np.ndarray]:
    """Canonical momentum eigenvalues on the joint FFT grid, one array per coordinate."""
    k = hbar * lattice.wavenumbers()
    out = []
    for ax in range(lattice.D):
        shape = [1] * lattice.D
        shape[ax] = lattice.n
        out.append(k.reshape(shape))
    return out


def apply_physical_p(state: LatticeState, body: str) -> LatticeState:
    """p_body = sum_k (delta_bk + m_b/m_s) pi_k, applied in one spectral pass."""
    lat = state.lattice
    row = MomentumMap(state.frame).row(body)
    eig = sum(c * pk for c, pk in zip(row, pi_grid(lat, state.hbar)))
    spec = np.fft.fftn(state.amplitudes)
    return state.replace(np.fft.ifftn(spec * eig))


class Factor(NamedTuple):
    kind: str  # "x", "p" or "pi"
    coord: str


def parse_factor(token) -> Factor:
    if isinstance(token, Factor):
        return token
    if isinstance(token, str):
        kind, sep, coord = token.partition("_")
        if not sep or kind not in ("x", "p", "pi"):
            raise ValueError(f"malformed operator factor {token!r}")
        return Factor(kind, coord)
    return Factor(*token)


_APPLY = {"x": apply_position, "p": apply_physical_p, "pi": apply_canonical_pi}


def apply_product(state: LatticeState, factors: Sequence) -> LatticeState:
    """Apply an operator product, rightmost factor first."""
    out = state
    for tok in reversed(list(factors)):
        f = parse_factor(tok)
        out = _APPLY[f.kind](out, f.coord)
    return out


def expectation(state: LatticeState, expr) -> complex:
    """<Psi|O|Psi> for O a sum of ``(coefficient, [factor, ...])`` products.

    A bare list of factors is read as a single product with coefficient 1;
    factors are ``"x_i"``, ``"p_j"`` or ``"pi_j"``.
    """
    if not expr:
        return state.inner(state)
    if isinstance(expr[0], (str, Factor)):
        expr = [(1, expr)]
    total = np.zeros(state.lattice.shape, dtype=complex)
    for coef, factors in expr:
        total = total + coef * apply_product(state, factors).amplitudes
    return state.inner(state.replace(total))


def commutator_expr(a, b) -> list:
    """Expression for [a, b] with single factors or factor lists."""
    a = [a] if isinstance(a, (str, Factor)) else list(a)
    b = [b] if isinstance(b, (str, Factor)) else list(b)
    return [(1, a + b), (-1, b + a)]


class UncertaintyPair(NamedTuple):
    dx: float
    dp: float
    product: float
    bound: float


def spread(state: LatticeState, factor) -> float:
    """Standard deviation of a Hermitian single-factor operator."""
    f = parse_factor(factor)
    op = _APPLY[f.kind](state, f.coord)
    mean = state.inner(op).real
    second = op.inner(op).real
    return float(np.sqrt(max(second - mean ** 2, 0.0)))


def uncertainty_pair(state: LatticeState, coord_i: str, body_j: str) -> UncertaintyPair:
    """Delta x_i, Delta p_j, their product and (hbar/2)(delta_ij + m_j/m_s)."""
    dx = spread(state, Factor("x", coord_i))
    dp = spread(state, Factor("p", body_j))
    bound = state.hbar / 2 * ((1 if coord_i == body_j else 0) + float(state.frame.ratio(body_j)))
    return UncertaintyPair(dx, dp, dx * dp, bound)


def momentum_covariance(state: LatticeState) -> np.ndarray:
    """Symmetrized covariance matrix of the physical momenta."""
    bodies = state.frame.bodies
    ps = [apply_physical_p(state, b) for b in bodies]
    means = np.array([state.inner(p).real for p in ps])
    D = len(bodies)
    cov = np.empty((D, D))
    for a in range(D):
        for b in range(D):
            cov[a, b] = ps[a].inner(ps[b]).real - means[a] * means[b]
    return cov


def gaussian_mutual_information(cov: np.ndarray, a: int = 0, b: int = 1) -> float:
    """Mutual information of a bivariate normal with this covariance."""
    rho2 = cov[a, b] ** 2 / (cov[a, a] * cov[b, b])
    return float(-0.5 * np.log1p(-rho2))


def _discrete_mi(p: np.ndarray, a: int, b: int) -> float:
    others = tuple(ax for ax in range(p.ndim) if ax not in (a, b))
    joint = p.sum(axis=others) if others else p
    if a > b:
        joint = joint.T
    joint = joint / joint.sum()
    pa = joint.sum(axis=1, keepdims=True)
    pb = joint.sum(axis=0, keepdims=True)
    mask = joint > 0
    return float(np.sum(joint[mask] * np.log(joint[mask] / (pa @ pb)[mask])))


def position_mutual_information(state: LatticeState, a: str, b: str) -> float:
    """Mutual information between two grid coordinates of |Psi|^2."""
    return _discrete_mi(state.probability(), state.lattice.axis(a), state.lattice.axis(b))


def canonical_mutual_information(state: LatticeState, a: str, b: str) -> float:
    """Mutual information between two canonical momenta on the Fourier grid."""
    spec = np.abs(np.fft.fftn(state.amplitudes)) ** 2
    return _discrete_mi(spec, state.lattice.axis(a), state.lattice.axis(b))
