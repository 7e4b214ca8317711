"""Observer-relative frame descriptions with exact masses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import FrameMismatchError, UnknownBodyError

AXES = ("x", "y", "z")


def as_mass(value) -> Fraction:
    """Coerce ``value`` to an exact positive rational.

    Accepts ints, Fractions, strings such as ``"3/2"`` or ``"1e-4"``,
    ``(numerator, denominator)`` pairs and floats (taken at their decimal
    repr, so ``1e-4`` becomes exactly ``1/10000``).
    """
    if isinstance(value, Fraction):
        m = value
    elif isinstance(value, bool):
        raise TypeError("bool is not a mass")
    elif isinstance(value, int):
        m = Fraction(value)
    elif isinstance(value, float):
        m = Fraction(repr(value))
    elif isinstance(value, str):
        m = Fraction(value.strip())
    elif isinstance(value, (tuple, list)) and len(value) == 2:
        m = Fraction(int(value[0]), int(value[1]))
    else:
        raise TypeError(f"cannot interpret {value!r} as a mass")
    if m <= 0:
        raise ValueError(f"masses must be strictly positive, got {m}")
    return m


@dataclass(frozen=True)
class FrameSpec:
    """One observer's description of a system of external bodies.

    ``observer_mass=None`` stands for an infinitely massive (classical)
    observer; every mass ratio relative to it is then zero.
    """

    observer_id: str
    bodies: tuple[str, ...]
    masses: tuple[tuple[str, Fraction], ...]
    observer_mass: Fraction | None
    dim: int = 1
    _mass_map: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.bodies)) != len(self.bodies):
            raise ValueError(f"body labels must be unique: {self.bodies}")
        if self.observer_id in self.bodies:
            raise ValueError(f"observer {self.observer_id!r} cannot be one of its own bodies")
        if self.dim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2 or 3")
        mass_map = dict(self.masses)
        if set(mass_map) != set(self.bodies):
            raise ValueError("masses must be given for exactly the declared bodies")
        for m in mass_map.values():
            if m <= 0:
                raise ValueError("masses must be strictly positive")
        if self.observer_mass is not None and self.observer_mass <= 0:
            raise ValueError("observer mass must be strictly positive")
        object.__setattr__(self, "_mass_map", mass_map)

    @classmethod
    def create(cls, observer_id: str, observer_mass, masses: Mapping, dim: int = 1) -> "FrameSpec":
        bodies = tuple(masses)
        om = None if observer_mass is None else as_mass(observer_mass)
        return cls(
            observer_id=observer_id,
            bodies=bodies,
            masses=tuple((b, as_mass(masses[b])) for b in bodies),
            observer_mass=om,
            dim=dim,
        )

    @property
    def is_classical(self) -> bool:
        return self.observer_mass is None

    def index(self, body: str) -> int:
        try:
            return self.bodies.index(body)
        except ValueError:
            raise UnknownBodyError(body, f"frame of observer {self.observer_id!r}") from None

    def mass(self, body: str) -> Fraction:
        if body == self.observer_id:
            if self.observer_mass is None:
                raise ValueError("classical observer has no finite mass")
            return self.observer_mass
        try:
            return self._mass_map[body]
        except KeyError:
            raise UnknownBodyError(body, f"frame of observer {self.observer_id!r}") from None

    def ratio(self, body: str) -> Fraction:
        """m_body / m_observer, zero for a classical observer."""
        m = self.mass(body)
        if self.observer_mass is None:
            return Fraction(0)
        return m / self.observer_mass

    def total_mass(self) -> Fraction | None:
        if self.observer_mass is None:
            return None
        return self.observer_mass + sum(self._mass_map.values(), Fraction(0))

    def commutation_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        """A[i][j] = delta_ij + m_j/m_observer, so that [x_i, p_j] = i hbar A[i][j]."""
        r = [self.ratio(b) for b in self.bodies]
        n = len(self.bodies)
        return tuple(tuple((1 if i == j else 0) + r[j] for j in range(n)) for i in range(n))

    def system_masses(self) -> dict[str, Fraction]:
        out = dict(self._mass_map)
        if self.observer_mass is not None:
            out[self.observer_id] = self.observer_mass
        return out

    def relative_to(self, new_observer: str) -> "FrameSpec":
        """Frame of ``new_observer`` describing the same system.

        The old observer takes over the new observer's slot in the body
        order, which keeps lattice layouts aligned: (i, s') -> (i, s).
        """
        if self.observer_mass is None:
            raise ValueError("a classical observer cannot become a body")
        k = self.index(new_observer)
        bodies = list(self.bodies)
        bodies[k] = self.observer_id
        masses = dict(self._mass_map)
        new_mass = masses.pop(new_observer)
        masses[self.observer_id] = self.observer_mass
        return FrameSpec(
            observer_id=new_observer,
            bodies=tuple(bodies),
            masses=tuple((b, masses[b]) for b in bodies),
            observer_mass=new_mass,
            dim=self.dim,
        )

    def classical_limit(self) -> "FrameSpec":
        return FrameSpec(self.observer_id, self.bodies, self.masses, None, self.dim)

    def with_order(self, bodies: Iterable[str]) -> "FrameSpec":
        bodies = tuple(bodies)
        if sorted(bodies) != sorted(self.bodies):
            raise FrameMismatchError(f"{bodies} is not a reordering of {self.bodies}")
        return FrameSpec(
            self.observer_id, bodies, tuple((b, self._mass_map[b]) for b in bodies),
            self.observer_mass, self.dim,
        )

    def same_system(self, other: "FrameSpec") -> bool:
        """True when both frames describe the same set of massive objects."""
        return (
            self.dim == other.dim
            and not self.is_classical
            and not other.is_classical
            and self.system_masses() == other.system_masses()
        )

    # JSON: masses as [numerator, denominator] pairs
    def to_json(self) -> dict:
        def pair(m):
            return None if m is None else [m.numerator, m.denominator]

        return {
            "observer": self.observer_id,
            "observer_mass": pair(self.observer_mass),
            "bodies": list(self.bodies),
            "masses": {b: pair(m) for b, m in self.masses},
            "dim": self.dim,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FrameSpec":
        masses = data["masses"]
        bodies = data.get("bodies", list(masses))
        for b in bodies:
            if b not in masses:
                raise UnknownBodyError(b, "no mass given")
        for b in masses:
            if b not in bodies:
                raise UnknownBodyError(b, "mass given for undeclared body")
        om = data.get("observer_mass")
        return cls.create(
            data["observer"],
            None if om is None else om,
            {b: masses[b] for b in bodies},
            dim=int(data.get("dim", 1)),
        )
