"""One test per acceptance criterion, each with its stated tolerance and time budget.

Every test records a single PASS/FAIL line; the lines are printed in the
terminal summary (and immediately when run with ``-s``).
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from finite_observers import (
    AlgebraElement,
    FrameMap,
    FrameSpec,
    HamiltonianSpec,
    HarmonicPotential,
    Lattice,
    QQi,
    amplitude_preservation_check,
    angular_momentum_check,
    check_r1_consistency,
    commutator,
    covariance_sweep,
    delta_c,
    ehrenfest_track,
    evolve,
    expectation,
    gaussian_product_state,
    reduced_mass_spreading_check,
    transform_state,
    uncertainty_pair,
)
from finite_observers.algebra import all_generators, expected_commutator
from finite_observers.covariance import random_mass
from finite_observers.dynamics import energy
from finite_observers.frames import compose, composed_permutation, conditional_slice, localized_observer_state
from finite_observers.lattice import commutator_expr, gaussian_factor, random_gaussian_mixture
from finite_observers.protocols import ligo_frame, spread_of
from finite_observers.wigner import (
    classical_assignment,
    quantum_observer_assignment,
    solution_family,
    standard_qm_assignment,
)

RESULTS = {}
SEED = 12345


def record(number, title, passed, detail, elapsed, budget):
    in_time = budget is None or elapsed < budget
    ok = passed and in_time
    limit = "" if budget is None else f" / {budget:g} s"
    line = f"[{'PASS' if ok else 'FAIL'}] C{number:<2d} {title}: {detail} ({elapsed:.2f} s{limit})"
    RESULTS[number] = line
    print(line)
    assert passed, line
    assert in_time, line


def test_c01_exact_covariance():
    t0 = time.perf_counter()
    rep = covariance_sweep(100, seed=SEED)
    dt = time.perf_counter() - t0
    bad = sum(not c.passed for c in rep.checks)
    record(1, "exact algebraic covariance", rep.passed and len(rep.info["triples"]) == 100,
           f"100 mass triples, {len(rep.checks)} identities, {bad} nonzero residuals", dt, 5)


def test_c02_angular_momentum():
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    ok, count = True, 0
    for _ in range(20):
        f = FrameSpec.create("s", random_mass(rng), {"i": random_mass(rng)}, dim=3)
        rep = angular_momentum_check(f, "i")
        ok &= rep.passed and rep.info["factor"] == str(1 + f.ratio("i"))
        count += len(rep.checks)
    canon = angular_momentum_check(FrameSpec.create("s", 2, {"i": 1}, dim=3).classical_limit(), "i")
    ok &= canon.passed and canon.info["factor"] == "1"
    dt = time.perf_counter() - t0
    record(2, "angular-momentum algebra", ok,
           f"20 mass pairs, {count} identities exact, canonical so(3) at ratio 0: {canon.passed}", dt, 2)


def test_c03_grid_commutators():
    t0 = time.perf_counter()
    worst = 0.0
    for ratio in (Fraction(1), Fraction(1, 2), Fraction(1, 10 ** 4)):
        f = FrameSpec.create("s", 1, {"i": ratio, "j": ratio})
        lat = Lattice.for_frame(f, 128, 40.0)
        psi = gaussian_product_state(lat, f, [(0.0, 2.0, 0.0), (0.0, 2.0, 0.0)])
        for a in f.bodies:
            for b in f.bodies:
                want = (a == b) + float(ratio)
                got = expectation(psi, commutator_expr(f"x_{a}", f"p_{b}")) / (1j * psi.hbar)
                worst = max(worst, abs(got - want) / want)
    dt = time.perf_counter() - t0
    record(3, "grid commutators", worst < 1e-8, f"max relative error {worst:.2e} (tol 1e-8)", dt, 5)


def test_c04_isometry_and_composition():
    t0 = time.perf_counter()
    f = FrameSpec.create("s", 2, {"i": 1, "s'": 3})
    lat = Lattice.for_frame(f)
    fmap = FrameMap.between(f, "s'")
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(50):
        phi = random_gaussian_mixture(lat, f, rng)
        psi = random_gaussian_mixture(lat, f, rng)
        worst = max(worst, amplitude_preservation_check(phi, psi, fmap).difference)
    g = FrameSpec.create("a", 2, {"i": 1, "b": 3, "c": 5})
    first = FrameMap.between(g, "b")
    second = FrameMap.between(first.target, "c")
    exact = np.array_equal(composed_permutation(first, second, 32), compose(first, second).permutation(32))
    dt = time.perf_counter() - t0
    record(4, "transformation isometry", worst < 1e-12 and exact,
           f"max |<Phi'|Psi'> - <Phi|Psi>| = {worst:.2e} over 50 pairs, composition exact: {exact}", dt, 10)


def _localized(c):
    f = FrameSpec.create("s", 2, {"i": 1, "s'": 3})
    lat = Lattice.for_frame(f)
    center, width, q = 1.0, 2.0, 0.3
    particle = gaussian_factor(lat, center, width, q)
    out = transform_state(localized_observer_state(lat, f, particle, "s'", c), FrameMap.between(f, "s'"))
    c_prime = -c
    got = conditional_slice(out, "s", c_prime)
    # psi(x + a) is the same Gaussian centered at center - a
    literal = gaussian_factor(lat, center - c_prime, width, q)
    derived = gaussian_factor(lat, center - c, width, q)
    return np.max(np.abs(got - literal)), np.max(np.abs(got - derived))


def test_c05_localized_observer_translation():
    t0 = time.perf_counter()
    literal, derived = _localized(2.5)
    dt = time.perf_counter() - t0
    record(5, "localized-observer translation psi(x'_i + c'), c' = -c", literal < 1e-12,
           f"pointwise error {literal:.2e} at c = 2.5 (tol 1e-12); "
           f"the transformed factor equals psi(x'_i + c) to {derived:.1e}", dt, 1)


def test_c05_derived_sign_form():
    """The form the coordinate rules actually produce, checked at the same tolerance."""
    for c in (-5.0, 0.0, 2.5, 6.25):
        literal, derived = _localized(c)
        assert derived < 1e-12
        if c == 0:
            assert literal < 1e-12


def test_c06_delta_c():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst, spreads = 0.0, []
    for ratio in (1e-4, 1e-6):
        f = ligo_frame(ratio)
        lat = Lattice.for_frame(f)
        vals = []
        for _ in range(10):
            psi = random_gaussian_mixture(lat, f, rng)
            res = delta_c(psi, f, "L", "R")
            worst = max(worst, abs(abs(res.delta_c) / psi.hbar - ratio))
            vals.append(res.delta_c)
        spreads.append(spread_of(vals))
    dt = time.perf_counter() - t0
    record(6, "ΔC signature", worst < 1e-8 and max(spreads) < 1e-8,
           f"max ||ΔC|/hbar - m_M/m_O| = {worst:.2e} at 1e-4 and 1e-6, state spread {max(spreads):.1e}", dt, 5)


def test_c07_uncertainty_bounds():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = np.inf
    for _ in range(100):
        m_s = Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20)))
        f = FrameSpec.create("s", m_s, {"i": Fraction(int(rng.integers(1, 20)), 4), "j": Fraction(int(rng.integers(1, 20)), 4)})
        lat = Lattice.for_frame(f)
        params = [(rng.uniform(-4, 4), rng.uniform(1.5, 3.0), rng.uniform(-1, 1)) for _ in f.bodies]
        psi = gaussian_product_state(lat, f, params)
        for a in f.bodies:
            for b in f.bodies:
                u = uncertainty_pair(psi, a, b)
                worst = min(worst, u.product - u.bound)
    f1 = FrameSpec.create("s", 1, {"i": 1})
    lat1 = Lattice.for_frame(f1)
    scan = [uncertainty_pair(gaussian_product_state(lat1, f1, [(0, w, 0)]), "i", "i") for w in np.linspace(1.5, 3, 16)]
    best = min(u.product / u.bound for u in scan)
    dt = time.perf_counter() - t0
    record(7, "uncertainty bounds", worst >= -1e-8 and 1 - 1e-8 <= best <= 1.05,
           f"min margin {worst:.2e} over 100 states, best diagonal product/bound {best:.6f}", dt, 10)


def test_c08_reduced_mass():
    t0 = time.perf_counter()
    rep = reduced_mass_spreading_check(1, 1)
    swapped = reduced_mass_spreading_check(1, 1, particle="s", observer="i")
    swap_err = float(np.max(np.abs(swapped.measured - rep.measured)))
    dt = time.perf_counter() - t0
    record(8, "reduced-mass dynamics", rep.max_relative_error < 1e-6 and swap_err < 1e-10,
           f"mu = {rep.mu}, width error {rep.max_relative_error:.2e}, role swap {swap_err:.1e}", dt, 10)


def test_c09_ehrenfest():
    t0 = time.perf_counter()
    m = 0.5
    f = FrameSpec.create("s", 2, {"i": Fraction(1, 2)})
    lat = Lattice.for_frame(f, 128, 40.0)
    psi = gaussian_product_state(lat, f, [(-2.0, 2.0, 0.4)])
    free = ehrenfest_track(evolve(psi, HamiltonianSpec("free_N", f), 0.01, 100))
    v_free = float(np.max(np.abs(free.velocity_residual("i", m))))
    p_free = float(np.max(np.abs(free.dpdt["i"])))
    naive = ehrenfest_track(evolve(psi, HamiltonianSpec("naive", f), 0.01, 100))
    v_naive = float(np.max(np.abs(naive.velocity_residual("i", m, 1 + float(f.ratio("i"))))))

    g = FrameSpec.create("s", 3, {"a": 2, "b": Fraction(1, 2)})
    lat2 = Lattice.for_frame(g, 64, 40.0)
    psi2 = gaussian_product_state(lat2, g, [(-1.5, 2.0, 0.2), (1.5, 2.0, -0.1)])
    spec = HamiltonianSpec("two_body_interacting", g, HarmonicPotential("a", "b", 0.05))
    traj = evolve(psi2, spec, 0.001, 1000, save_every=2)
    inter = ehrenfest_track(traj)
    force = max(float(np.max(np.abs(inter.force_residual(b)))) for b in g.bodies)
    shown = float(np.max(np.abs(inter.displayed_force_residual("a", 2.0))))
    dt = time.perf_counter() - t0
    ok = v_free < 1e-6 and p_free < 1e-8 and v_naive < 1e-6 and force < 1e-6
    record(9, "Ehrenfest", ok,
           f"free dx/dt-p/m {v_free:.1e}, dp/dt {p_free:.1e}; naive (1+m/m_s) slope {v_naive:.1e}; "
           f"interacting dp/dt+<dV> {force:.1e} (the 1/m form is off by {shown:.1e}, reported only)", dt, 20)


def test_c10_wigner():
    t0 = time.perf_counter()
    a = 1 / np.sqrt(2)
    std = check_r1_consistency(*standard_qm_assignment(a, a))
    cls = check_r1_consistency(*classical_assignment(a, a))
    toys = [check_r1_consistency(*quantum_observer_assignment(a, a, *t)).violation
            for t in solution_family(a, np.linspace(0, np.pi, 5))]
    dt = time.perf_counter() - t0
    ok = abs(std.violation - 0.20710678) < 1e-8 and cls.violation < 1e-10 and max(toys) < 1e-10
    record(10, "Wigner consistency", ok,
           f"standard violation {std.violation:.8f}, classical {cls.violation:.1e}, toy max {max(toys):.1e}", dt, 1)


def test_c11_classical_limit():
    t0 = time.perf_counter()
    f = FrameSpec.create("s", 10 ** 9, {"i": 1, "j": 1})
    offset = Fraction(1, 10 ** 9)
    exact = all(
        f.commutation_matrix()[k][l] - (k == l) == offset for k in range(2) for l in range(2)
    )
    for g in all_generators(f):
        for h in all_generators(f):
            got = commutator(AlgebraElement.generator(f, g), AlgebraElement.generator(f, h))
            exact &= got == expected_commutator(f, g, h)
    x = AlgebraElement.generator(f, "x_i")
    exact &= commutator(x, AlgebraElement.generator(f, "p_i")) == AlgebraElement.scalar(f, QQi(0, 1 + offset), 1)
    lat = Lattice.for_frame(f)
    psi = gaussian_product_state(lat, f, [(0, 2, 0), (0, 2, 0)])
    worst = 0.0
    for a in f.bodies:
        for b in f.bodies:
            got = expectation(psi, commutator_expr(f"x_{a}", f"p_{b}")) / 1j
            worst = max(worst, abs(got - ((a == b) + 1e-9)))
    dt = time.perf_counter() - t0
    record(11, "classical-observers limit", exact and worst < 1e-12,
           f"symbolic offsets exactly 1e-9: {exact}; grid max abs error {worst:.1e}", dt, None)
