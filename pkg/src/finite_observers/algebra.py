"""Exact normal-ordered polynomials in observer-relative positions and momenta.

Generators are ``x`` and ``p`` for every (body, axis) of a frame. They obey

    [x_a, p_b] = i hbar (delta_ab + m_b / m_s)     (same axis)

with every other commutator zero. Elements are stored in normal order
(all positions to the left of all momenta), which makes equality a
structural comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import FrameMismatchError, UnknownBodyError
from .frame import AXES, FrameSpec, as_mass


class QQi:
    """Gaussian rational ``re + i*im`` with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, v) -> "QQi":
        if isinstance(v, QQi):
            return v
        if isinstance(v, complex):
            return cls(Fraction(repr(v.real)), Fraction(repr(v.imag)))
        if isinstance(v, float):
            return cls(Fraction(repr(v)))
        if isinstance(v, (int, Fraction, str)):
            return cls(Fraction(v))
        raise TypeError(f"cannot use {v!r} as an exact coefficient")

    def __add__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return QQi.coerce(o) - self

    def __mul__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = QQi.coerce(o)
        d = o.re * o.re + o.im * o.im
        return QQi((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        try:
            o = QQi.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return "I" if self.im == 1 else "-I" if self.im == -1 else f"{self.im}*I"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}*I)"

    def to_json(self):
        return {"re": [self.re.numerator, self.re.denominator],
                "im": [self.im.numerator, self.im.denominator]}

    @classmethod
    def from_json(cls, d):
        return cls(Fraction(*d["re"]), Fraction(*d["im"]))


I = QQi(0, 1)


class Generator(NamedTuple):
    kind: str  # "x" or "p"
    body: str
    axis: int = 0

    def __str__(self):
        s = f"{self.kind}_{self.body}"
        return f"{s}:{AXES[self.axis]}" if self.axis else s


def parse_generator(token, frame: FrameSpec) -> Generator:
    """Turn ``"x_i"``, ``"p_s'"``, ``"x_i:y"`` or a tuple into a Generator."""
    if isinstance(token, Generator):
        g = token
    elif isinstance(token, str):
        head, _, axis = token.partition(":")
        kind, sep, body = head.partition("_")
        if not sep or kind not in ("x", "p"):
            raise ValueError(f"malformed generator {token!r}")
        ax = AXES.index(axis) if axis else 0
        g = Generator(kind, body, ax)
    else:
        g = Generator(*token)
    if g.kind not in ("x", "p"):
        raise ValueError(f"generator kind must be 'x' or 'p', got {g.kind!r}")
    frame.index(g.body)
    if not 0 <= g.axis < frame.dim:
        raise ValueError(f"axis {g.axis} not enabled in a {frame.dim}-axis frame")
    return g


def _gen_slot(frame: FrameSpec, g: Generator) -> int:
    return frame.index(g.body) * frame.dim + g.axis


def _n_slots(frame: FrameSpec) -> int:
    return len(frame.bodies) * frame.dim


@lru_cache(maxsize=None)
def _slot_commutators(frame: FrameSpec) -> tuple:
    """Per-slot table C[a][b] with [x_a, p_b] = i hbar C[a][b]."""
    A = frame.commutation_matrix()
    d = frame.dim
    G = _n_slots(frame)
    return tuple(
        tuple(A[a // d][b // d] if a % d == b % d else Fraction(0) for b in range(G))
        for a in range(G)
    )


@lru_cache(maxsize=65536)
def _reorder(frame: FrameSpec, beta: tuple, gamma: tuple) -> tuple:
    """Normal-order p^beta x^gamma.

    Returns a tuple of (coefficient, hbar_power, x_exps, p_exps). Uses
    p^beta x_a = x_a p^beta - i hbar sum_b C[a][b] beta_b p^(beta - e_b).
    """
    if not any(beta) or not any(gamma):
        return ((QQi(1), 0, gamma, beta),)
    C = _slot_commutators(frame)
    a = next(k for k, e in enumerate(gamma) if e)
    rest = gamma[:a] + (gamma[a] - 1,) + gamma[a + 1:]
    out: dict = {}

    def add(coef, n, xs, ps):
        key = (xs, ps, n)
        out[key] = out.get(key, QQi(0)) + coef

    # x_a p^beta x^rest
    for coef, n, xs, ps in _reorder(frame, beta, rest):
        xs = xs[:a] + (xs[a] + 1,) + xs[a + 1:]
        add(coef, n, xs, ps)
    # - i hbar C[a][b] beta_b p^(beta-e_b) x^rest
    for b, eb in enumerate(beta):
        if not eb or not C[a][b]:
            continue
        lower = beta[:b] + (eb - 1,) + beta[b + 1:]
        factor = QQi(0, -C[a][b] * eb)
        for coef, n, xs, ps in _reorder(frame, lower, rest):
            add(coef * factor, n + 1, xs, ps)
    return tuple((c, n, xs, ps) for (xs, ps, n), c in out.items() if c)


class AlgebraElement:
    """Immutable normal-ordered polynomial over a frame's generators.

    Terms map ``(exponents, hbar_power)`` to a Gaussian-rational
    coefficient, where ``exponents`` lists all position exponents
    (bodies in declaration order, axes x<y<z) followed by all momentum
    exponents in the same order.
    """

    __slots__ = ("frame", "_terms")

    def __init__(self, frame: FrameSpec, terms: Mapping | None = None):
        self.frame = frame
        clean = {}
        G = _n_slots(frame)
        for (exps, n), c in (terms or {}).items():
            if len(exps) != 2 * G or n < 0:
                raise ValueError("malformed term key")
            c = QQi.coerce(c)
            if c:
                clean[(tuple(exps), int(n))] = c
        self._terms = clean

    # construction helpers
    @classmethod
    def zero(cls, frame):
        return cls(frame)

    @classmethod
    def scalar(cls, frame, value=1, hbar_power=0):
        return cls(frame, {((0,) * (2 * _n_slots(frame)), hbar_power): value})

    @classmethod
    def generator(cls, frame, token) -> "AlgebraElement":
        g = parse_generator(token, frame)
        G = _n_slots(frame)
        exps = [0] * (2 * G)
        exps[_gen_slot(frame, g) + (G if g.kind == "p" else 0)] = 1
        return cls(frame, {(tuple(exps), 0): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return all(not any(exps) for exps, _ in self._terms)

    def scalar_part(self) -> dict[int, QQi]:
        """Coefficients of the constant terms keyed by hbar power."""
        return {n: c for (exps, n), c in self._terms.items() if not any(exps)}

    def degree(self) -> int:
        return max((sum(exps) for exps, _ in self._terms), default=0)

    def _check(self, other: "AlgebraElement"):
        if other.frame != self.frame:
            raise FrameMismatchError(
                f"elements belong to different frames ({self.frame.observer_id!r} vs {other.frame.observer_id!r})"
            )

    def _lift(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        return AlgebraElement.scalar(self.frame, QQi.coerce(other))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, QQi(0)) + c
        return AlgebraElement(self.frame, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.frame, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            c = QQi.coerce(other)
            return AlgebraElement(self.frame, {k: v * c for k, v in self._terms.items()})
        self._check(other)
        G = _n_slots(self.frame)
        out: dict = {}
        for (e1, n1), c1 in self._terms.items():
            x1, p1 = e1[:G], e1[G:]
            for (e2, n2), c2 in other._terms.items():
                x2, p2 = e2[:G], e2[G:]
                for c, n, xs, ps in _reorder(self.frame, p1, x2):
                    key = (
                        tuple(a + b for a, b in zip(x1, xs)) + tuple(a + b for a, b in zip(ps, p2)),
                        n1 + n2 + n,
                    )
                    out[key] = out.get(key, QQi(0)) + c1 * c2 * c
        return AlgebraElement(self.frame, out)

    def __rmul__(self, other):
        # scalars commute with everything
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = AlgebraElement.scalar(self.frame, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.frame == other.frame and self._terms == other._terms
        try:
            return self == self._lift(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.frame, frozenset(self._terms.items())))

    def __repr__(self):
        return f"AlgebraElement({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        G = _n_slots(self.frame)
        d = self.frame.dim
        names = []
        for kind in ("x", "p"):
            for slot in range(G):
                b = self.frame.bodies[slot // d]
                names.append(f"{kind}_{b}" + (f":{AXES[slot % d]}" if d > 1 else ""))
        parts = []
        for (exps, n), c in sorted(self._terms.items(), key=lambda kv: (-sum(kv[0][0]), kv[0])):
            factors = [str(c)] if c != 1 or (not any(exps) and not n) else []
            if n:
                factors.append("hbar" if n == 1 else f"hbar^{n}")
            for name, e in zip(names, exps):
                if e:
                    factors.append(name if e == 1 else f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def to_json(self) -> dict:
        G = _n_slots(self.frame)
        return {
            "frame": self.frame.to_json(),
            "terms": [
                {"x": list(exps[:G]), "p": list(exps[G:]), "hbar": n, "coeff": c.to_json()}
                for (exps, n), c in sorted(self._terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "AlgebraElement":
        frame = FrameSpec.from_json(data["frame"])
        terms = {}
        for t in data["terms"]:
            key = (tuple(t["x"]) + tuple(t["p"]), int(t["hbar"]))
            terms[key] = terms.get(key, QQi(0)) + QQi.from_json(t["coeff"])
        return cls(frame, terms)


def generators(frame: FrameSpec, body: str) -> tuple:
    """Position and momentum elements of ``body``: ``(xs, ps)`` per axis."""
    xs = tuple(AlgebraElement.generator(frame, Generator("x", body, a)) for a in range(frame.dim))
    ps = tuple(AlgebraElement.generator(frame, Generator("p", body, a)) for a in range(frame.dim))
    return xs, ps


def hbar(frame: FrameSpec) -> AlgebraElement:
    return AlgebraElement.scalar(frame, 1, 1)


def normal_order(raw_terms: Iterable, frame: FrameSpec) -> AlgebraElement:
    """Normal-order a list of ``(coefficient, [generator, ...])`` products.

    A coefficient may also be given as ``(value, hbar_power)``. Generators
    are tokens understood by :func:`parse_generator`; an unknown body
    label raises :class:`UnknownBodyError`.
    """
    total = AlgebraElement.zero(frame)
    for coef, factors in raw_terms:
        if isinstance(coef, tuple):
            value, npow = coef
        else:
            value, npow = coef, 0
        term = AlgebraElement.scalar(frame, value, npow)
        for tok in factors:
            term = term * AlgebraElement.generator(frame, tok)
        total = total + term
    return total


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    return a * b - b * a


def expected_commutator(frame: FrameSpec, g: Generator, h: Generator) -> AlgebraElement:
    """The c-number the commutation rules assign to [g, h]."""
    if g.kind == h.kind or g.axis != h.axis:
        return AlgebraElement.zero(frame)
    A = frame.commutation_matrix()
    if g.kind == "x":
        value = QQi(0, A[frame.index(g.body)][frame.index(h.body)])
    else:
        value = QQi(0, -A[frame.index(h.body)][frame.index(g.body)])
    return AlgebraElement.scalar(frame, value, 1)


def all_generators(frame: FrameSpec) -> list[Generator]:
    return [Generator(k, b, a) for k in ("x", "p") for b in frame.bodies for a in range(frame.dim)]


def free_hamiltonian(frame: FrameSpec) -> AlgebraElement:
    """Sum of p_k^2 / 2m_k minus the total-momentum term P^2 / 2M."""
    H = AlgebraElement.zero(frame)
    for a in range(frame.dim):
        P = AlgebraElement.zero(frame)
        for b in frame.bodies:
            p = AlgebraElement.generator(frame, Generator("p", b, a))
            H = H + p * p * (Fraction(1, 2) / frame.mass(b))
            P = P + p
        M = frame.total_mass()
        if M is not None:
            H = H - P * P * (Fraction(1, 2) / M)
    return H


def harmonic_potential(frame: FrameSpec, a: str, b: str, stiffness) -> AlgebraElement:
    """k/2 |x_a - x_b|^2 summed over axes."""
    k = as_mass(stiffness)
    V = AlgebraElement.zero(frame)
    for ax in range(frame.dim):
        d = AlgebraElement.generator(frame, Generator("x", a, ax)) - AlgebraElement.generator(
            frame, Generator("x", b, ax)
        )
        V = V + d * d * (k / 2)
    return V


def angular_momentum(frame: FrameSpec, body: str) -> tuple:
    """(L_x, L_y, L_z) = x cross p for one body of a 3-axis frame."""
    if frame.dim != 3:
        raise ValueError("angular momentum needs a 3-axis frame")
    (x, y, z), (px, py, pz) = generators(frame, body)
    return (y * pz - z * py, z * px - x * pz, x * py - y * px)


@dataclass(frozen=True)
class FrameSubstitution:
    """Linear rules sending each source generator to a target-frame element."""

    source: FrameSpec
    target: FrameSpec
    rules: tuple  # ((Generator, AlgebraElement), ...)

    def rule(self, g: Generator) -> AlgebraElement:
        from .errors import MissingRuleError

        for h, image in self.rules:
            if h == g:
                return image
        raise MissingRuleError(g)

    def then(self, other: "FrameSubstitution") -> "FrameSubstitution":
        """Compose: apply ``self`` and then ``other`` to the images."""
        if other.source != self.target:
            raise FrameMismatchError("substitutions do not chain")
        return FrameSubstitution(
            self.source, other.target,
            tuple((g, substitute_frame(img, other)) for g, img in self.rules),
        )


def observer_substitution(source: FrameSpec, target: FrameSpec) -> FrameSubstitution:
    """Express ``source``-frame generators through ``target``-frame ones.

    With A = source observer and B = target observer (a body of A):

        x_k^A = x_k^B - x_A^B,        p_k^A = p_k^B - (m_k/m_A) p_A^B
        x_B^A = -x_A^B,               p_B^A = -(m_B/m_A) p_A^B
    """
    A, B = source.observer_id, target.observer_id
    if not source.same_system(target) or B not in source.bodies or A not in target.bodies:
        raise FrameMismatchError(
            f"frames of {A!r} and {B!r} do not describe the same system with exchanged roles"
        )
    mA = source.observer_mass
    rules = []
    for g in all_generators(source):
        gen = lambda kind, body: AlgebraElement.generator(target, Generator(kind, body, g.axis))  # noqa: E731
        if g.body == B:
            if g.kind == "x":
                img = -gen("x", A)
            else:
                img = gen("p", A) * (-source.mass(B) / mA)
        elif g.kind == "x":
            img = gen("x", g.body) - gen("x", A)
        else:
            img = gen("p", g.body) - gen("p", A) * (source.mass(g.body) / mA)
        rules.append((g, img))
    return FrameSubstitution(source, target, tuple(rules))


def identity_substitution(frame: FrameSpec) -> FrameSubstitution:
    return FrameSubstitution(
        frame, frame, tuple((g, AlgebraElement.generator(frame, g)) for g in all_generators(frame))
    )


def substitute_frame(e: AlgebraElement, sub: FrameSubstitution) -> AlgebraElement:
    """Replace generators by their images and re-normal-order in the target frame."""
    if e.frame != sub.source:
        raise FrameMismatchError("element frame differs from substitution source")
    frame = e.frame
    G = _n_slots(frame)
    d = frame.dim
    order = [Generator("x", frame.bodies[s // d], s % d) for s in range(G)]
    order += [Generator("p", frame.bodies[s // d], s % d) for s in range(G)]
    images = {}
    out = AlgebraElement.zero(sub.target)
    for (exps, n), c in e._terms.items():
        term = AlgebraElement.scalar(sub.target, c, n)
        for g, k in zip(order, exps):
            if not k:
                continue
            if g not in images:
                images[g] = sub.rule(g)
            term = term * images[g] ** k
        out = out + term
    return out
