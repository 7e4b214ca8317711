from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finite_observers import (
    AliasingError,
    FrameMismatchError,
    FrameSpec,
    Lattice,
    LatticeState,
    MomentumMap,
    PhysConstants,
    apply_canonical_pi,
    apply_physical_p,
    expectation,
    gaussian_product_state,
    uncertainty_pair,
)
from finite_observers.lattice import (
    canonical_mutual_information,
    commutator_expr,
    momentum_covariance,
    position_mutual_information,
    random_gaussian_mixture,
)

from conftest import two_body_frame


def centered(frame, lat, width=2.0, q=(0.0, 0.0), hbar=1.0):
    return gaussian_product_state(lat, frame, [(0.0, width, q[k]) for k in range(lat.D)], PhysConstants(hbar))


def test_lattice_validation():
    with pytest.raises(ValueError):
        Lattice(("i",), n=100)
    with pytest.raises(ValueError):
        Lattice(("a", "b", "c", "d"), n=8)
    lat = Lattice(("i", "j"), 64, 20.0)
    assert lat.shape == (64, 64) and lat.spacing == 20 / 64
    assert lat.x()[0] == -10.0


def test_momentum_map_exact_inverse(frame_s):
    mm = MomentumMap(frame_s)
    assert mm.is_exact_inverse()
    assert mm.p_from_pi[0] == (Fraction(3, 2), Fraction(1, 2))
    assert MomentumMap(frame_s.classical_limit()).is_exact_inverse()


def test_normalization_and_parseval(frame_s, lattice_s):
    psi = random_gaussian_mixture(lattice_s, frame_s, np.random.default_rng(1))
    assert abs(psi.norm() - 1) < 1e-12
    spec = np.fft.fftn(psi.amplitudes)
    assert abs(np.sum(np.abs(spec) ** 2) / spec.size * lattice_s.cell - 1) < 1e-12
    assert abs(expectation(psi, []) - 1) < 1e-12


def test_aliasing_guard(frame_s, lattice_s):
    with pytest.raises(AliasingError):
        gaussian_product_state(lattice_s, frame_s, [(0, 0.4, 0), (0, 2, 0)])
    with pytest.raises(AliasingError):
        gaussian_product_state(lattice_s, frame_s, [(15, 2, 0), (0, 2, 0)])


def test_frame_must_match_lattice(frame_s):
    with pytest.raises(FrameMismatchError):
        LatticeState(np.zeros((8, 8)), frame_s, Lattice(("i", "x"), 8))


def test_canonical_pi_plane_wave():
    f = FrameSpec.create("s", 2, {"i": 1})
    lat = Lattice.for_frame(f, 64, 20.0)
    k = 2 * np.pi * 3 / lat.L
    psi = LatticeState(np.exp(1j * k * lat.x()), f, lat)
    out = apply_canonical_pi(psi, "i")
    assert np.allclose(out.amplitudes, k * psi.amplitudes, atol=1e-12)
    # p = (1 + m/m_s) pi for one body
    assert np.allclose(apply_physical_p(psi, "i").amplitudes, 1.5 * k * psi.amplitudes, atol=1e-12)


def test_single_body_commutator():
    f = FrameSpec.create("s", 2, {"i": 1})
    lat = Lattice.for_frame(f)
    psi = gaussian_product_state(lat, f, [(0.0, 2.0, 0.2)])
    val = expectation(psi, commutator_expr("x_i", "p_i"))
    assert abs(val / 1j - 1.5) < 1e-8


@pytest.mark.parametrize("ratio", [1, Fraction(1, 2), Fraction(1, 10 ** 4)])
def test_grid_commutators(ratio):
    f = two_body_frame(ratio)
    lat = Lattice.for_frame(f)
    psi = centered(f, lat)
    for a in f.bodies:
        for b in f.bodies:
            want = (a == b) + float(ratio)
            got = expectation(psi, commutator_expr(f"x_{a}", f"p_{b}")) / 1j
            assert abs(got - want) <= 1e-8 * want


def test_momenta_commute(frame_s, lattice_s):
    psi = random_gaussian_mixture(lattice_s, frame_s, np.random.default_rng(2))
    assert abs(expectation(psi, commutator_expr("p_i", "p_s'"))) < 1e-12
    assert abs(expectation(psi, commutator_expr("x_i", "x_s'"))) < 1e-12


def test_hbar_scaling():
    f = two_body_frame(Fraction(1, 2))
    lat = Lattice.for_frame(f)
    psi = centered(f, lat, hbar=0.5)
    got = expectation(psi, commutator_expr("x_i", "p_i")) / 1j
    assert abs(got - 0.5 * 1.5) < 1e-8


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), ratio=st.sampled_from([Fraction(1, 3), 1, Fraction(5, 2)]))
def test_uncertainty_bounds_random(seed, ratio):
    f = two_body_frame(ratio, Fraction(1, 7))
    lat = Lattice.for_frame(f)
    psi = random_gaussian_mixture(lat, f, np.random.default_rng(seed))
    for i in f.bodies:
        for j in f.bodies:
            u = uncertainty_pair(psi, i, j)
            assert u.product >= u.bound - 1e-8


def test_minimum_uncertainty_near_saturation():
    f = FrameSpec.create("s", 1, {"i": 1})
    lat = Lattice.for_frame(f)
    products = []
    for w in np.linspace(1.5, 3.0, 7):
        psi = gaussian_product_state(lat, f, [(0, w, 0)])
        products.append(uncertainty_pair(psi, "i", "i").product)
    best = min(products)
    assert 1.0 - 1e-8 <= best <= 1.05


def test_uncertainty_limits():
    heavy = FrameSpec.create("s", 10 ** 9, {"i": 1, "j": 1})
    lat = Lattice.for_frame(heavy)
    psi = centered(heavy, lat)
    assert abs(uncertainty_pair(psi, "i", "i").bound - 0.5) < 1e-8
    assert uncertainty_pair(psi, "i", "j").bound < 1e-9


def test_position_product_entangled_in_momentum(frame_s, lattice_s):
    psi = gaussian_product_state(lattice_s, frame_s, [(0, 2, 0), (1, 1.5, 0)])
    assert position_mutual_information(psi, "i", "s'") < 1e-12
    assert canonical_mutual_information(psi, "i", "s'") < 1e-10
    from finite_observers.lattice import gaussian_mutual_information

    assert gaussian_mutual_information(momentum_covariance(psi)) > 1e-3
