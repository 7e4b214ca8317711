from fractions import Fraction

import pytest

from finite_observers import (
    FrameSpec,
    angular_momentum_check,
    canonical_limit_check,
    composition_check,
    covariance_sweep,
    verify_covariance,
)
from finite_observers import AlgebraElement, FrameMismatchError, Generator, QQi, commutator, observer_substitution
from finite_observers.covariance import pair_frames


def test_verify_covariance_fixed(frame_s):
    rep = verify_covariance(frame_s, frame_s.relative_to("s'"))
    assert rep.passed
    # 2 directions x 4 generators x 3 partners, plus 4 round-trip rules
    assert len(rep.checks) == 2 * 4 * 3 + 4


def test_inconsistent_frames_rejected():
    fs = FrameSpec.create("s", 2, {"i": 1, "s'": 3})
    bad = FrameSpec.create("s'", 3, {"i": 1, "s": 5})
    with pytest.raises(FrameMismatchError):
        verify_covariance(fs, bad)


def test_mutated_rule_is_caught(frame_s):
    # m_i/m_s = 1/2, so [x_i, p_i] must come out as (3/2) i hbar
    target = frame_s.relative_to("s'")
    sub = observer_substitution(frame_s, target)
    want = AlgebraElement.scalar(target, QQi(0, Fraction(3, 2)), 1)
    x_img = sub.rule(Generator("x", "i"))
    assert commutator(x_img, sub.rule(Generator("p", "i"))) == want
    # dropping the mass ratio from the momentum rule breaks it
    wrong = AlgebraElement.generator(target, "p_i") - AlgebraElement.generator(target, "p_s")
    assert commutator(x_img, wrong) != want


def test_sweep_small():
    rep = covariance_sweep(10, seed=3)
    assert rep.passed
    assert len(rep.info["triples"]) == 10


def test_three_axis_covariance():
    assert verify_covariance(*pair_frames(1, Fraction(5, 3), 7, dim=3)).passed


def test_composition():
    f = FrameSpec.create("s", 5, {"a": 1, "b": Fraction(3, 2), "c": 2})
    assert composition_check(f, "b", "c").passed


def test_angular_momentum():
    f = FrameSpec.create("s", 1, {"i": 1}, dim=3)
    rep = angular_momentum_check(f, "i")
    assert rep.passed and rep.info["factor"] == "2"
    heavy = FrameSpec.create("s", 10 ** 9, {"i": 1}, dim=3)
    assert angular_momentum_check(heavy, "i").info["factor"] == "1000000001/1000000000"
    assert angular_momentum_check(f.classical_limit(), "i").info["factor"] == "1"


def test_canonical_limit(frame_s):
    assert canonical_limit_check(frame_s).passed


def test_report_json(frame_s):
    import json

    rep = verify_covariance(frame_s, frame_s.relative_to("s'"))
    data = json.loads(rep.dumps())
    assert data["passed"] and data["n_checks"] == len(rep.checks)
