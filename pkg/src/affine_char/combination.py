"""Orbit spaces and finitely supported integer combinations of orbits.

The three modules char(T, tau), K^{tau+dim T}_T(T) and R^tau(LT) are all free
abelian groups on the same finite set of orbits. They get distinct Python
types (:class:`CharElement`, ``TeKClass``, ``PosEnergyRep``) sharing the
storage defined here, so that comparing across them always goes through an
explicit isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .errors import RankMismatch
from .lattice import IntMat, Quotient, Vector, lattice_basis, quotient
from .torus import Level


@dataclass(frozen=True)
class OrbitSpace:
    """``Z^n`` modulo a full-rank sublattice, given by its Hermite basis.

    Two spaces are equal iff their sublattices are equal, whatever generators
    were used to build them.
    """

    sublattice: IntMat

    @classmethod
    def of_level(cls, tau: Level) -> OrbitSpace:
        tau.require_positive()
        return _space_of(tau.K)

    @classmethod
    def of_lattice(cls, gens: IntMat) -> OrbitSpace:
        return _space_of(gens)

    @cached_property
    def quotient(self) -> Quotient:
        return quotient(self.sublattice)

    @property
    def rank(self) -> int:
        return self.sublattice.rows

    @property
    def size(self) -> int:
        return self.quotient.size

    def canonical(self, v: Sequence[int]) -> Vector:
        return self.quotient.reduce(v)

    def representatives(self) -> list[Vector]:
        return self.quotient.representatives()

    def orbits(self) -> list[OrbitRef]:
        return [OrbitRef(self, r) for r in self.representatives()]

    def describe(self) -> dict:
        return {"kind": "torus", "rank": self.rank, "sublattice": self.sublattice.tolist(),
                "size": self.size}


@dataclass(frozen=True)
class OrbitRef:
    """A single orbit, stored by its canonical representative."""

    space: OrbitSpace
    rep: Vector

    def __post_init__(self):
        if self.space.canonical(self.rep) != tuple(self.rep):
            raise ValueError(f"{self.rep} is not a reduced representative")


@dataclass(frozen=True)
class TwistedWeight:
    """A twisted weight, as an integer vector after fixing a splitting."""

    level: Level
    coords: Vector

    def __post_init__(self):
        if len(self.coords) != self.level.rank:
            raise RankMismatch(f"weight of length {len(self.coords)} at rank {self.level.rank}")


@lru_cache(maxsize=1024)
def _space_of(gens: IntMat) -> OrbitSpace:
    # shared instances keep the cached quotient alive across calls
    return OrbitSpace(lattice_basis(gens))


@dataclass(frozen=True, eq=False)
class Combination:
    """Sorted, zero-free map from orbit representatives to integers."""

    space: Any
    terms: tuple[tuple[Vector, int], ...] = ()

    @classmethod
    def from_mapping(cls, space, mapping: Mapping[Sequence[int], int] | Iterable, **extra):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        acc: dict[Vector, int] = {}
        for rep, c in items:
            key = space.canonical(rep)
            acc[key] = acc.get(key, 0) + c
        terms = tuple(sorted((k, v) for k, v in acc.items() if v))
        return cls(space, terms, **extra)

    @classmethod
    def from_canonical(cls, space, acc: Mapping[Vector, int], **extra):
        """Build from a mapping whose keys are already canonical in ``space``."""
        return cls(space, tuple(sorted((k, v) for k, v in acc.items() if v)), **extra)

    @classmethod
    def basis(cls, space, rep: Sequence[int], **extra):
        return cls.from_mapping(space, [(tuple(rep), 1)], **extra)

    @classmethod
    def zero(cls, space, **extra):
        return cls(space, (), **extra)

    def _extra(self) -> dict:
        return {}

    def _same(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.space != self.space or other._extra() != self._extra():
            raise ValueError("elements live in different spaces")

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.space == other.space and self.terms == other.terms
                and self._extra() == other._extra())

    def __hash__(self):
        return hash((type(self).__name__, self.space, self.terms))

    def __add__(self, other):
        self._same(other)
        return type(self).from_mapping(self.space, list(self.terms) + list(other.terms),
                                       **self._extra())

    def __neg__(self):
        return type(self)(self.space, tuple((k, -v) for k, v in self.terms), **self._extra())

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c: int):
        if not isinstance(c, int):
            return NotImplemented
        return type(self).from_mapping(self.space, [(k, c * v) for k, v in self.terms],
                                       **self._extra())

    def __iter__(self) -> Iterator[tuple[Vector, int]]:
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, rep: Sequence[int]) -> int:
        key = self.space.canonical(rep)
        return dict(self.terms).get(key, 0)

    @property
    def support(self) -> tuple[Vector, ...]:
        return tuple(k for k, _ in self.terms)

    def as_dict(self) -> dict[Vector, int]:
        return dict(self.terms)

    def map_linear(self, image: Callable[[Vector], Combination], target_cls, target_space,
                   **extra):
        """Extend ``image`` (defined on basis orbits) linearly."""
        acc: dict[Vector, int] = {}
        for rep, c in self.terms:
            img = image(rep)
            if img.space is not target_space and img.space != target_space:
                raise ValueError("image does not live on the target space")
            for k, v in img.terms:
                acc[k] = acc.get(k, 0) + c * v
        return target_cls.from_canonical(target_space, acc, **extra)

    def to_json(self) -> list[dict]:
        return [{"orbit": list(k), "coeff": v} for k, v in self.terms]

    def __repr__(self):
        body = " + ".join(f"{v}{list(k)}" for k, v in self.terms) or "0"
        return f"{type(self).__name__}({body})"


class CharElement(Combination):
    """Element of the free module on orbits (the ``char`` module)."""


def require_space(x: Combination, space, what: str = "input") -> None:
    if x.space != space:
        raise ValueError(f"{what} does not live on the expected orbit space")
