from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from finite_observers import (
    AlgebraElement,
    FrameMismatchError,
    FrameSpec,
    Generator,
    MissingRuleError,
    QQi,
    UnknownBodyError,
    commutator,
    normal_order,
    observer_substitution,
    substitute_frame,
)
from finite_observers.algebra import (
    FrameSubstitution,
    all_generators,
    expected_commutator,
    free_hamiltonian,
    harmonic_potential,
)

masses = st.fractions(min_value=Fraction(1, 50), max_value=50, max_denominator=60).filter(lambda m: m > 0)
coeffs = st.builds(QQi, st.fractions(-5, 5, max_denominator=7), st.fractions(-5, 5, max_denominator=7))


@st.composite
def frames(draw):
    return FrameSpec.create("s", draw(masses), {"i": draw(masses), "j": draw(masses)})


def elements(frame):
    gens = [str(g) for g in all_generators(frame)]
    term = st.tuples(st.tuples(coeffs, st.integers(0, 1)), st.lists(st.sampled_from(gens), max_size=3))
    return st.lists(term, max_size=3).map(lambda ts: normal_order(ts, frame))


@st.composite
def frame_and_elements(draw, n=3):
    f = draw(frames())
    return f, [draw(elements(f)) for _ in range(n)]


def test_qqi_arithmetic():
    z = QQi(Fraction(1, 2), 3)
    assert z * z.conjugate() == QQi(Fraction(37, 4))
    assert (z - z).re == 0 and not (z - z)
    assert complex(QQi(1, -2)) == 1 - 2j
    assert QQi.from_json(z.to_json()) == z


def test_single_commutators(frame_s):
    # m_i = 1, m_s = 2: [x_i, p_i] = i hbar 3/2 and [x_i, p_s'] = i hbar 3/2
    x_i = AlgebraElement.generator(frame_s, "x_i")
    p_i = AlgebraElement.generator(frame_s, "p_i")
    p_s2 = AlgebraElement.generator(frame_s, "p_s'")
    assert commutator(x_i, p_i) == AlgebraElement.scalar(frame_s, QQi(0, Fraction(3, 2)), 1)
    assert commutator(x_i, p_s2) == AlgebraElement.scalar(frame_s, QQi(0, Fraction(3, 2)), 1)
    assert commutator(p_i, p_s2).is_zero()


def test_normal_order_example(frame_s):
    e = normal_order([(1, ["p_i", "x_i"])], frame_s)
    want = normal_order([(1, ["x_i", "p_i"]), ((QQi(0, Fraction(-3, 2)), 1), [])], frame_s)
    assert e == want
    assert str(e) == "x_i*p_i + -3/2*I*hbar"


def test_every_generator_pair(frame_s):
    for g in all_generators(frame_s):
        for h in all_generators(frame_s):
            a = AlgebraElement.generator(frame_s, g)
            b = AlgebraElement.generator(frame_s, h)
            assert commutator(a, b) == expected_commutator(frame_s, g, h)


def test_unknown_body_in_product(frame_s):
    with pytest.raises(UnknownBodyError):
        normal_order([(1, ["x_ghost"])], frame_s)


def test_frame_mismatch(frame_s):
    other = frame_s.relative_to("s'")
    with pytest.raises(FrameMismatchError):
        AlgebraElement.generator(frame_s, "x_i") + AlgebraElement.generator(other, "x_i")


def test_missing_rule(frame_s):
    sub = FrameSubstitution(frame_s, frame_s, ())
    with pytest.raises(MissingRuleError):
        substitute_frame(AlgebraElement.generator(frame_s, "x_i"), sub)


def test_json_round_trip(frame_s):
    e = normal_order([(Fraction(2, 3), ["p_s'", "x_i", "x_i"]), ((QQi(1, 1), 2), ["p_i"])], frame_s)
    assert AlgebraElement.from_json(e.to_json()) == e


def test_free_hamiltonian_two_body_form():
    # sum p^2/2m - P^2/2M with M = m_s + m_i
    f = FrameSpec.create("s", 3, {"i": 1})
    H = free_hamiltonian(f)
    p = AlgebraElement.generator(f, "p_i")
    assert H == p * p * (Fraction(1, 2) - Fraction(1, 8))


@settings(max_examples=40, deadline=None)
@given(frame_and_elements())
def test_bilinear_and_antisymmetric(fe):
    _, (a, b, c) = fe
    assert commutator(a + b, c) == commutator(a, c) + commutator(b, c)
    assert commutator(a * QQi(2, 1), c) == commutator(a, c) * QQi(2, 1)
    assert commutator(a, b) == -commutator(b, a)


@settings(max_examples=30, deadline=None)
@given(frame_and_elements())
def test_jacobi(fe):
    _, (a, b, c) = fe
    total = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
    assert total.is_zero()


@settings(max_examples=30, deadline=None)
@given(frame_and_elements(n=2))
def test_associative(fe):
    f, (a, b) = fe
    c = AlgebraElement.generator(f, "x_j") + AlgebraElement.generator(f, "p_i")
    assert (a * b) * c == a * (b * c)


@settings(max_examples=30, deadline=None)
@given(frame_and_elements(n=1))
def test_normal_order_idempotent(fe):
    f, (a,) = fe
    names = [str(g) for g in all_generators(f)]
    G = len(names) // 2
    # re-feed the normal form as raw products, already in order
    raw = []
    for (exps, n), c in a.terms.items():
        factors = [names[k] for k in range(2 * G) for _ in range(exps[k])]
        raw.append(((c, n), factors))
    assert normal_order(raw, f) == a


@settings(max_examples=25, deadline=None)
@given(frame_and_elements(n=2))
def test_substitution_is_a_homomorphism(fe):
    f, (a, b) = fe
    sub = observer_substitution(f, f.relative_to("j"))
    assert substitute_frame(a * b, sub) == substitute_frame(a, sub) * substitute_frame(b, sub)
    assert substitute_frame(commutator(a, b), sub) == commutator(substitute_frame(a, sub), substitute_frame(b, sub))


def test_galilean_examples(frame_s):
    from finite_observers import galilean_symmetry_check

    H = free_hamiltonian(frame_s)
    for b in frame_s.bodies:
        assert galilean_symmetry_check(H, b)[0]
    ok, residual = galilean_symmetry_check(H + harmonic_potential(frame_s, "i", "s'", 1), "i")
    assert not ok and not residual.is_zero()
    assert galilean_symmetry_check(AlgebraElement.scalar(frame_s, 5), "i")[0]


def test_three_axis_cross_terms():
    f = FrameSpec.create("s", 2, {"i": 1}, dim=3)
    x = AlgebraElement.generator(f, Generator("x", "i", 0))
    py = AlgebraElement.generator(f, "p_i:y")
    assert commutator(x, py).is_zero()
    pz = AlgebraElement.generator(f, "p_i:z")
    z = AlgebraElement.generator(f, "x_i:z")
    assert commutator(z, pz) == AlgebraElement.scalar(f, QQi(0, Fraction(3, 2)), 1)
