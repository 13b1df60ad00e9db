"""Twisted equivariant K-theory of a torus, after the Mackey decomposition.

``K^{tau+k}_T(T)`` is free on the orbits ``Lambda / K Z^n`` when
``k = dim T`` mod 2 and zero otherwise. Classes are :class:`TeKClass`; the
Mackey-decomposition isomorphism :func:`md_iso` identifies the even ones with
``char(T, tau)`` basis by basis, for the standard orientation.

The induced map ``f^#`` is built from three finite-set operations on orbit
data: pushforward with discrete fibers, pullback along the surjection ``r``
between two quotients of the source weight lattice, and projection to a
factor. It commutes with ``char(f)`` under ``md_iso``.

There is deliberately no classical pullback here. When the rank difference is
odd it is zero, which is why ``f^#`` is not the naive composite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .combination import CharElement, Combination, OrbitSpace, require_space
from .errors import ParityMismatch, SplitFailure
from .lattice import IntMat, Vector, block_diag, coset_reps_of_inclusion, lattice_basis
from .torus import (Level, MorphismDecomposition, TorusMorphism, decompose, product_level,
                    pullback_level)

ORIENTATION = "standard (ordered basis e_1, ..., e_n of the cocharacter lattice)"

EVEN, ODD = 0, 1


@dataclass(frozen=True, eq=False, repr=False)
class TeKClass(Combination):
    """A class in ``K^{tau+k}``; ``parity`` is ``(k - dim T) mod 2``."""

    parity: int = EVEN

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise ValueError("parity must be 0 or 1")
        if self.parity == ODD and self.terms:
            raise ParityMismatch("odd-degree twisted K-group of a torus is zero",
                                 terms=[list(k) for k, _ in self.terms])

    def _extra(self) -> dict:
        return {"parity": self.parity}

    def __hash__(self):
        return hash((super().__hash__(), self.parity))


def tek_space(tau: Level) -> OrbitSpace:
    return OrbitSpace.of_level(tau)


def tek_basis(tau: Level, rep: Sequence[int]) -> TeKClass:
    return TeKClass.basis(OrbitSpace.of_level(tau), rep)


def md_iso(tau: Level, x: TeKClass) -> CharElement:
    """Mackey-decomposition isomorphism to ``char(T, tau)``."""
    if x.parity != EVEN:
        raise ParityMismatch("only even-degree classes correspond to char")
    space = OrbitSpace.of_level(tau)
    require_space(x, space)
    return CharElement(space, x.terms)


def md_iso_inverse(tau: Level, y: CharElement) -> TeKClass:
    space = OrbitSpace.of_level(tau)
    require_space(y, space)
    return TeKClass(space, y.terms)


def pushforward_finite(mapping: Callable[[Vector], Sequence[int]], x: TeKClass,
                       target: OrbitSpace) -> TeKClass:
    """Pushforward along a map of finite orbit sets: sum coefficients over fibers."""
    reduce = target.quotient.reduce
    acc: dict[Vector, int] = {}
    for rep, c in x.terms:
        k = reduce(mapping(rep))
        acc[k] = acc.get(k, 0) + c
    return TeKClass.from_canonical(target, acc, parity=x.parity)


def pullback_finite(fiber: Callable[[Vector], Sequence[Vector]], x: TeKClass,
                    target: OrbitSpace) -> TeKClass:
    """Pullback along a surjection given by its fibers: copy each coefficient.

    The fibers must consist of canonical representatives of ``target``.
    """
    acc: dict[Vector, int] = {}
    for rep, c in x.terms:
        for y in fiber(rep):
            acc[y] = acc.get(y, 0) + c
    return TeKClass.from_canonical(target, acc, parity=x.parity)


def intermediate_space(q: TorusMorphism, tau: Level) -> OrbitSpace:
    """``Lambda' / F^T K Z^n``, sitting between the two levels."""
    return OrbitSpace.of_lattice(q.F.T @ tau.K)


@lru_cache(maxsize=256)
def _r_shifts(F: IntMat, K: IntMat) -> tuple[Vector, ...]:
    pulled = F.T @ K @ F
    return tuple(coset_reps_of_inclusion(pulled, F.T @ K))


def r_fiber(q: TorusMorphism, tau: Level, c: Sequence[int]) -> tuple[Vector, ...]:
    """Preimage of the class of c under ``r``: translates of c by ``F^T K Z^n / K' Z^n``."""
    fine = OrbitSpace.of_level(pullback_level(q, tau))
    return tuple(sorted(set(fine.quotient.translates(c, _r_shifts(q.F, tau.K)))))


def r_fibers(q: TorusMorphism, tau: Level) -> dict[Vector, tuple[Vector, ...]]:
    """All fibers of ``r: Lambda'/K'Z^n -> Lambda'/F^T K Z^n``, by enumerating the source."""
    fine = OrbitSpace.of_level(pullback_level(q, tau))
    coarse = intermediate_space(q, tau)
    fibers: dict[Vector, list[Vector]] = {}
    for rep in fine.representatives():
        fibers.setdefault(coarse.canonical(rep), []).append(rep)
    return {k: tuple(v) for k, v in fibers.items()}


def q_sharp(q: TorusMorphism, tau: Level, x: TeKClass) -> TeKClass:
    """``q^#`` for a finite covering: push forward along ``F^T``, then pull back along r."""
    q.require_covering()
    tau.require_positive()
    require_space(x, OrbitSpace.of_level(tau))
    fine = OrbitSpace.of_level(pullback_level(q, tau))
    mid = intermediate_space(q, tau)
    rows = q.F.T.row_list()
    y = pushforward_finite(lambda lam: [sum(a * b for a, b in zip(r, lam)) for r in rows], x, mid)
    shifts = _r_shifts(q.F, tau.K)
    return pullback_finite(lambda c: set(fine.quotient.translates(c, shifts)), y, fine)


def check_product_splitting(tau1: Level, tau2: Level) -> None:
    """The splitting ``Lambda/K Z^n -> Lambda_1/K_1 Z x Lambda_2/K_2 Z`` is bijective
    iff ``K Z^n = K_1 Z x K_2 Z``."""
    prod = lattice_basis(product_level(tau1, tau2).K)
    split = lattice_basis(block_diag(lattice_basis(tau1.K), lattice_basis(tau2.K)))
    if prod != split:
        raise SplitFailure("product splitting is not a bijection",
                           product=prod, split=split)


def product_splitting(tau1: Level, tau2: Level) -> dict[Vector, tuple[Vector, Vector]]:
    """The splitting as an explicit table over every orbit (small levels only)."""
    prod = OrbitSpace.of_level(product_level(tau1, tau2))
    s1, s2 = OrbitSpace.of_level(tau1), OrbitSpace.of_level(tau2)
    n1 = tau1.rank
    return {rep: (s1.canonical(rep[:n1]), s2.canonical(rep[n1:]))
            for rep in prod.representatives()}


def i1_sharp(tau1: Level, tau2: Level, x: TeKClass) -> TeKClass:
    """``i_1^#``: split the product orbit set, then push forward to the first factor."""
    prod = product_level(tau1, tau2)
    require_space(x, OrbitSpace.of_level(prod))
    check_product_splitting(tau1, tau2)
    first = OrbitSpace.of_level(tau1)
    n1 = tau1.rank
    return pushforward_finite(lambda rep: rep[:n1], x, first)


def f_sharp(f: TorusMorphism, tau: Level, x: TeKClass,
            dec: MorphismDecomposition | None = None,
            perp_change: IntMat | None = None) -> TeKClass:
    """``f^# = q^# o i_1^# o (f.j)^#`` through the canonical decomposition."""
    if dec is None:
        dec = decompose(f, tau, perp_change)
    k1, k2 = dec.split_levels
    y = q_sharp(dec.fj, tau, x)
    y = i1_sharp(k1, k2, y)
    return q_sharp(dec.q, k1, y)
