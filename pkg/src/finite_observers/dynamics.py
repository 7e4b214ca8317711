"""Frame-consistent Hamiltonians and their evolution on the lattice.

Every kinetic term used here is a quadratic form in the canonical
momenta, E(pi) = 1/2 pi^T K pi, hence diagonal in the joint Fourier
basis: free evolution is a per-mode phase, and interacting evolution is
Strang splitting with the potential applied on the position grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BoundaryContactError, StabilityError
from .frame import FrameSpec
from .lattice import (
    Lattice,
    LatticeState,
    MomentumMap,
    PhysConstants,
    apply_canonical_pi,
    apply_physical_p,
    apply_position,
    gaussian_product_state,
    pi_grid,
    spread,
)

KINDS = ("free_N", "two_body_interacting", "single_body_effective", "naive", "zero")


@dataclass(frozen=True)
class HarmonicPotential:
    """V = k/2 (x_a - x_b)^2 with the difference taken on the sawtooth."""

    a: str
    b: str
    k: float

    def value(self, d, L=None):
        return 0.5 * self.k * d ** 2

    def derivative(self, d, L=None):
        return self.k * d


@dataclass(frozen=True)
class TabulatedPotential:
    """V(x_a - x_b) sampled on the lattice positions (length n)."""

    a: str
    b: str
    samples: tuple

    def _interp(self, table, d, L):
        n = len(table)
        dx = L / n
        k = np.rint((d + L / 2) / dx).astype(int) % n
        return np.asarray(table)[k]

    def value(self, d, L):
        return self._interp(self.samples, d, L)

    def derivative(self, d, L):
        n = len(self.samples)
        k = 2 * np.pi * np.fft.fftfreq(n, d=L / n)
        dv = np.fft.ifft(1j * k * np.fft.fft(np.asarray(self.samples, dtype=float))).real
        return self._interp(dv, d, L)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Which Hamiltonian to evolve with.

    ``free_N``: sum p_k^2/2m_k - P_total^2/2M_total.
    ``two_body_interacting``: free_N plus ``potential``.
    ``single_body_effective``: p^2 / 2 m_eff with m_eff = m (1 + m/m_s).
    ``naive``: sum p_k^2 / 2m_k without the total-momentum term; it is
    not frame-consistent and exists to exhibit that.
    ``zero``: H = 0.
    """

    kind: str
    frame: FrameSpec
    potential: HarmonicPotential | TabulatedPotential | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown Hamiltonian kind {self.kind!r}")
        if self.kind == "two_body_interacting":
            if self.potential is None:
                raise ValueError("interacting Hamiltonian needs a potential")
            self.frame.index(self.potential.a)
            self.frame.index(self.potential.b)
        if self.kind == "single_body_effective" and len(self.frame.bodies) != 1:
            raise ValueError("single_body_effective needs exactly one body")

    def effective_mass(self) -> Fraction:
        (b,) = self.frame.bodies
        return self.frame.mass(b) * (1 + self.frame.ratio(b))


def build_kinetic_form(spec: HamiltonianSpec) -> tuple[tuple[Fraction, ...], ...]:
    """Exact matrix K with kinetic energy 1/2 pi^T K pi."""
    frame = spec.frame
    D = len(frame.bodies)
    zero = tuple(tuple(Fraction(0) for _ in range(D)) for _ in range(D))
    if spec.kind == "zero":
        return zero
    P = MomentumMap(frame).p_from_pi
    if spec.kind == "single_body_effective":
        # p^2/m_eff with p = (1 + m/m_s) pi
        return ((P[0][0] ** 2 / spec.effective_mass(),),)
    inv_m = [1 / frame.mass(b) for b in frame.bodies]
    G = [[(inv_m[a] if a == b else Fraction(0)) for b in range(D)] for a in range(D)]
    M = frame.total_mass()
    if spec.kind != "naive" and M is not None:
        G = [[G[a][b] - 1 / M for b in range(D)] for a in range(D)]
    # K = P^T G P
    return tuple(
        tuple(sum(P[a][k] * G[a][b] * P[b][l] for a in range(D) for b in range(D)) for l in range(D))
        for k in range(D)
    )


def kinetic_energy_grid(spec: HamiltonianSpec, lattice: Lattice, hbar: float) -> np.ndarray:
    """E(pi) on the joint FFT grid."""
    K = np.array([[float(c) for c in row] for row in build_kinetic_form(spec)])
    pis = pi_grid(lattice, hbar)
    E = np.zeros(lattice.shape)
    for a in range(lattice.D):
        for b in range(lattice.D):
            if K[a, b]:
                E = E + 0.5 * K[a, b] * pis[a] * pis[b]
    return E


def potential_grid(spec: HamiltonianSpec, lattice: Lattice) -> np.ndarray:
    if spec.potential is None:
        return np.zeros(lattice.shape)
    pot = spec.potential
    d = lattice.wrap(lattice.coordinate(pot.a) - lattice.coordinate(pot.b))
    return np.broadcast_to(pot.value(d, lattice.L), lattice.shape)


def potential_gradient(spec: HamiltonianSpec, lattice: Lattice, body: str) -> np.ndarray:
    """d V / d x_body on the grid (zero for bodies the potential ignores)."""
    pot = spec.potential
    if pot is None or body not in (pot.a, pot.b):
        return np.zeros(lattice.shape)
    d = lattice.wrap(lattice.coordinate(pot.a) - lattice.coordinate(pot.b))
    dv = pot.derivative(d, lattice.L)
    sign = 1.0 if body == pot.a else -1.0
    return np.broadcast_to(sign * dv, lattice.shape)


def energy(state: LatticeState, spec: HamiltonianSpec) -> float:
    spec_amp = np.fft.fftn(state.amplitudes)
    E = kinetic_energy_grid(spec, state.lattice, state.hbar)
    kin = np.sum(E * np.abs(spec_amp) ** 2) / np.sum(np.abs(spec_amp) ** 2)
    pot = np.sum(potential_grid(spec, state.lattice) * np.abs(state.amplitudes) ** 2) / np.sum(
        np.abs(state.amplitudes) ** 2
    )
    return float(kin + pot)


def max_stable_dt(spec: HamiltonianSpec, lattice: Lattice, hbar: float, margin: float = 0.5) -> float:
    Emax = float(np.max(np.abs(kinetic_energy_grid(spec, lattice, hbar))))
    return np.inf if Emax == 0 else margin * hbar / Emax


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    spec: HamiltonianSpec
    dt: float

    @property
    def frame(self) -> FrameSpec:
        return self.spec.frame

    @property
    def step(self) -> float:
        """Uniform time spacing between stored states."""
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else self.dt

    def __len__(self):
        return len(self.states)

    def __getitem__(self, k) -> LatticeState:
        return self.states[k]


def evolve(state: LatticeState, spec: HamiltonianSpec, dt: float, steps: int,
           save_every: int = 1) -> Trajectory:
    """Evolve ``state`` and keep every ``save_every``-th state (the first included).

    Kinetic-only Hamiltonians use exact per-mode phases; a potential
    switches to symmetric split-step (half potential, full kinetic, half
    potential), which requires dt * max E(pi) / hbar < 0.5.
    """
    if spec.frame != state.frame:
        raise ValueError("Hamiltonian and state belong to different frames")
    lat, hbar = state.lattice, state.hbar
    E = kinetic_energy_grid(spec, lat, hbar)
    times, states = [0.0], [state]
    spec_amp = np.fft.fftn(state.amplitudes)
    if spec.potential is None:
        for k in range(save_every, steps + 1, save_every):
            t = k * dt
            amp = np.fft.ifftn(spec_amp * np.exp(-1j * E * t / hbar))
            times.append(t)
            states.append(state.replace(amp))
        return Trajectory(np.array(times), states, spec, dt)

    limit = max_stable_dt(spec, lat, hbar)
    if dt >= limit:
        raise StabilityError(dt, 0.9 * limit)
    half_v = np.exp(-0.5j * dt * potential_grid(spec, lat) / hbar)
    kin = np.exp(-1j * E * dt / hbar)
    amp = state.amplitudes
    for k in range(1, steps + 1):
        amp = half_v * np.fft.ifftn(kin * np.fft.fftn(half_v * amp))
        if k % save_every == 0:
            times.append(k * dt)
            states.append(state.replace(amp))
    return Trajectory(np.array(times), states, spec, dt)


def _mean(state: LatticeState, op) -> float:
    return state.inner(op).real


def centered_slope(values: np.ndarray, h: float) -> np.ndarray:
    """Second-order centered differences at the interior samples."""
    values = np.asarray(values)
    return (values[2:] - values[:-2]) / (2 * h)


@dataclass
class EhrenfestReport:
    times: np.ndarray
    x: dict
    p: dict
    force: dict
    kinetic_velocity: dict = field(default_factory=dict)
    dxdt: dict = field(default_factory=dict)
    dpdt: dict = field(default_factory=dict)

    def velocity_residual(self, body: str, mass: float, factor: float = 1.0) -> np.ndarray:
        """d<x>/dt - factor * <p>/m at the interior samples."""
        return self.dxdt[body] - factor * self.p[body][1:-1] / mass

    def heisenberg_velocity_residual(self, body: str) -> np.ndarray:
        """d<x>/dt - <(K pi)_body>, valid for every kinetic form."""
        return self.dxdt[body] - self.kinetic_velocity[body][1:-1]

    def force_residual(self, body: str) -> np.ndarray:
        """d<p>/dt + <dV/dx_body> (Heisenberg-equation force law).

        Exact for potentials of a coordinate difference, the only kind
        supported, because their gradients sum to zero over the bodies.
        """
        return self.dpdt[body] + self.force[body][1:-1]

    def displayed_force_residual(self, body: str, mass: float) -> np.ndarray:
        """d<p>/dt + <dV/dx_body>/m_body, the form with a 1/m factor; reported only."""
        return self.dpdt[body] + self.force[body][1:-1] / mass

    def to_rows(self, frame: FrameSpec, bodies: Sequence[str]) -> list:
        rows = []
        for k, t in enumerate(self.times):
            for b in bodies:
                rows.append((t, b, self.x[b][k], self.p[b][k]))
        return rows


def ehrenfest_track(traj: Trajectory, bodies: Sequence[str] | None = None) -> EhrenfestReport:
    """Position/momentum means along a trajectory and their centered slopes."""
    bodies = list(bodies or traj.frame.bodies)
    xs = {b: [] for b in bodies}
    ps = {b: [] for b in bodies}
    fs = {b: [] for b in bodies}
    vs = {b: [] for b in bodies}
    K = np.array([[float(c) for c in row] for row in build_kinetic_form(traj.spec)])
    coords = traj.frame.bodies
    for st in traj.states:
        pis = [_mean(st, apply_canonical_pi(st, c)) for c in coords]
        for b in bodies:
            vs[b].append(float(K[traj.frame.index(b)] @ pis))
        for b in bodies:
            xs[b].append(_mean(st, apply_position(st, b)))
            ps[b].append(_mean(st, apply_physical_p(st, b)))
            grad = potential_gradient(traj.spec, st.lattice, b)
            fs[b].append(float(np.sum(grad * np.abs(st.amplitudes) ** 2) * st.lattice.cell))
    rep = EhrenfestReport(
        traj.times,
        {b: np.array(v) for b, v in xs.items()},
        {b: np.array(v) for b, v in ps.items()},
        {b: np.array(v) for b, v in fs.items()},
        {b: np.array(v) for b, v in vs.items()},
    )
    h = traj.step
    for b in bodies:
        rep.dxdt[b] = centered_slope(rep.x[b], h)
        rep.dpdt[b] = centered_slope(rep.p[b], h)
    return rep


def trajectory_series(traj: Trajectory, bodies: Sequence[str] | None = None) -> list:
    """Rows (t, body, <x>, <p>, dx, dp, energy) for CSV export."""
    bodies = list(bodies or traj.frame.bodies)
    rows = []
    for t, st in zip(traj.times, traj.states):
        e = energy(st, traj.spec)
        for b in bodies:
            rows.append((
                float(t), b,
                _mean(st, apply_position(st, b)),
                _mean(st, apply_physical_p(st, b)),
                spread(st, ("x", b)),
                spread(st, ("p", b)),
                e,
            ))
    return rows


def reduced_mass(m_i, m_s) -> Fraction:
    m_i, m_s = Fraction(m_i), Fraction(m_s)
    return 1 / (1 / m_i + 1 / m_s)


def free_gaussian_width(sigma0: float, mass: float, t, hbar: float = 1.0):
    """Position spread of a free minimum-uncertainty Gaussian."""
    return sigma0 * np.sqrt(1 + (hbar * np.asarray(t) / (2 * mass * sigma0 ** 2)) ** 2)


@dataclass
class SpreadingReport:
    times: np.ndarray
    measured: np.ndarray
    predicted: np.ndarray
    mu: Fraction

    @property
    def max_relative_error(self) -> float:
        return float(np.max(np.abs(self.measured - self.predicted) / self.predicted))


def reduced_mass_spreading_check(m_i, m_s, sigma0: float = 2.0, T: float = 3.0, samples: int = 16,
                                 n: int = 128, L: float = 40.0, hbar: float = 1.0,
                                 particle: str = "i", observer: str = "s",
                                 edge_tol: float = 1e-9) -> SpreadingReport:
    """Free spreading of a single particle seen by a finite-mass observer.

    Evolves a real Gaussian of width ``sigma0`` with the frame-consistent
    Hamiltonian and compares its measured width with the free law for the
    reduced mass 1/mu = 1/m_i + 1/m_s.
    """
    frame = FrameSpec.create(observer, m_s, {particle: m_i})
    lat = Lattice.for_frame(frame, n=n, L=L)
    consts = PhysConstants(hbar)
    psi0 = gaussian_product_state(lat, frame, [(0.0, sigma0, 0.0)], consts)
    spec = HamiltonianSpec("free_N", frame)
    traj = evolve(psi0, spec, T / samples, samples)
    edge = max(1, n // 16)
    measured = []
    for st in traj.states:
        p = st.probability()
        if p[:edge].sum() + p[-edge:].sum() > edge_tol:
            raise BoundaryContactError(
                f"wavepacket reaches the periodic boundary by t={traj.times[len(measured)]:.3g}"
            )
        measured.append(spread(st, ("x", particle)))
    mu = reduced_mass(frame.mass(particle), m_s)
    predicted = free_gaussian_width(sigma0, float(mu), traj.times, hbar)
    return SpreadingReport(traj.times, np.array(measured), predicted, mu)


def frame_consistency_check(state: LatticeState, fmap, t: float) -> float:
    """max |T U_s(t) Psi - U_s'(t) T Psi| for the free Hamiltonian."""
    from .frames import transform_state

    a = transform_state(evolve(state, HamiltonianSpec("free_N", state.frame), t, 1).states[-1], fmap)
    moved = transform_state(state, fmap)
    b = evolve(moved, HamiltonianSpec("free_N", moved.frame), t, 1).states[-1]
    return float(np.max(np.abs(a.amplitudes - b.amplitudes)))
