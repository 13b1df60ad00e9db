"""Tori, levels and local injections.

A torus of rank n has cocharacter lattice Z^n and weight lattice Z^n with the
standard pairing. A level is the integer matrix K of the homomorphism
``Pi_T -> Lambda_T`` attached to a central extension of the loop group; it is
symmetric, and "positive" means ``-K`` is positive definite. A morphism of tori
is the integer matrix F of its tangent map; its transpose acts on weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .errors import (NotBlockDiagonal, NotCovering, NotLocalInjection, NotPositive, NotSymmetric,
                     RankMismatch)
from .lattice import (IntMat, block_diag, kernel_saturated, lattice_basis, preimage_lattice,
                      solve_rational)


@dataclass(frozen=True)
class Torus:
    rank: int

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("torus rank must be nonnegative")


@dataclass(frozen=True)
class Level:
    K: IntMat

    def __post_init__(self):
        if not self.K.is_square:
            raise ValueError(f"level matrix must be square, got {self.K.shape}")

    @classmethod
    def from_rows(cls, rows) -> Level:
        return cls(IntMat.from_rows(rows))

    @classmethod
    def diagonal(cls, values) -> Level:
        return cls(IntMat.diag(list(values)))

    @property
    def rank(self) -> int:
        return self.K.rows

    @property
    def torus(self) -> Torus:
        return Torus(self.rank)

    @cached_property
    def positive(self) -> bool:
        return is_positive(self)

    def require_positive(self, what: str = "level") -> Level:
        if not self.positive:
            raise NotPositive(f"{what} is not positive", K=self.K)
        return self


def is_positive(tau: Level) -> bool:
    """True iff ``-K`` is positive definite (Sylvester's criterion, exact)."""
    if not tau.K.is_symmetric():
        raise NotSymmetric("level matrix is not symmetric", K=tau.K)
    neg = -tau.K
    return all(neg.submatrix(range(k), range(k)).det > 0 for k in range(1, tau.rank + 1))


def product_level(tau1: Level, tau2: Level) -> Level:
    return Level(block_diag(tau1.K, tau2.K))


def split_level(tau: Level, n1: int) -> tuple[Level, Level]:
    """Inverse of :func:`product_level`; raises if the off-diagonal block is nonzero."""
    n = tau.rank
    if not 0 <= n1 <= n:
        raise ValueError(f"cannot split rank {n} at {n1}")
    off = tau.K.submatrix(range(n1), range(n1, n))
    if any(off.entries):
        raise NotBlockDiagonal(f"off-diagonal block of level is nonzero (split at {n1})",
                               K=tau.K)
    return (Level(tau.K.submatrix(range(n1), range(n1))),
            Level(tau.K.submatrix(range(n1, n), range(n1, n))))


class Kind(str, Enum):
    FINITE_COVERING = "finite_covering"
    PRODUCT_INCLUSION = "product_inclusion_first_factor"
    LOCAL_INJECTION = "local_injection"
    GENERAL = "general"


@dataclass(frozen=True)
class TorusMorphism:
    """Homomorphism ``source -> target`` given by its tangent matrix F.

    F has shape ``(target.rank, source.rank)``; ``F.T`` maps target weights to
    source weights.
    """

    source: Torus
    target: Torus
    F: IntMat

    def __post_init__(self):
        if self.F.shape != (self.target.rank, self.source.rank):
            raise ValueError(f"matrix shape {self.F.shape} does not match "
                             f"{self.source.rank} -> {self.target.rank}")

    @classmethod
    def from_matrix(cls, F) -> TorusMorphism:
        if not isinstance(F, IntMat):
            F = IntMat.from_rows(F)
        return cls(Torus(F.cols), Torus(F.rows), F)

    @classmethod
    def identity(cls, n: int) -> TorusMorphism:
        return cls.from_matrix(IntMat.identity(n))

    @classmethod
    def inclusion_first_factor(cls, n1: int, n2: int) -> TorusMorphism:
        return cls.from_matrix(IntMat.identity(n1).vstack(IntMat.zeros(n2, n1)))

    @cached_property
    def is_local_injection(self) -> bool:
        return self.F.rank == self.source.rank

    @cached_property
    def is_finite_covering(self) -> bool:
        return self.F.is_square and self.F.det != 0

    @cached_property
    def kind(self) -> Kind:
        if self.is_finite_covering:
            return Kind.FINITE_COVERING
        n1, n = self.source.rank, self.target.rank
        if n >= n1 and self.F == IntMat.identity(n1).vstack(IntMat.zeros(n - n1, n1)):
            return Kind.PRODUCT_INCLUSION
        if self.is_local_injection:
            return Kind.LOCAL_INJECTION
        return Kind.GENERAL

    @property
    def degree(self) -> int:
        if not self.is_finite_covering:
            raise NotCovering("degree is only defined for finite coverings", F=self.F)
        return abs(self.F.det)

    def require_local_injection(self) -> TorusMorphism:
        if not self.is_local_injection:
            raise NotLocalInjection(f"tangent matrix of rank {self.F.rank} on a rank "
                                    f"{self.source.rank} torus", F=self.F)
        return self

    def require_covering(self) -> TorusMorphism:
        if not self.is_finite_covering:
            raise NotCovering("morphism is not a finite covering", F=self.F)
        return self

    def __matmul__(self, other: TorusMorphism) -> TorusMorphism:
        """Composition ``self o other``."""
        return TorusMorphism(other.source, self.target, self.F @ other.F)


def pullback_level(f: TorusMorphism, tau: Level) -> Level:
    """Level ``F^T K F`` on the source; must again be positive."""
    if f.target.rank != tau.rank:
        raise RankMismatch(f"level of rank {tau.rank} on a rank {f.target.rank} target")
    pulled = Level(f.F.T @ tau.K @ f.F)
    if not pulled.positive:
        raise NotPositive("pulled-back level is not positive", K=pulled.K, F=f.F)
    return pulled


def orthogonal_complement_lattice(f: TorusMorphism, tau: Level) -> IntMat:
    """Saturated basis of the cocharacters orthogonal to the image of f.

    These are the integer b with ``F^T K b = 0``; there are ``n - n'`` of them.
    """
    f.require_local_injection()
    if f.target.rank != tau.rank:
        raise ValueError("level does not live on the target of f")
    return kernel_saturated(f.F.T @ tau.K)


@dataclass(frozen=True)
class MorphismDecomposition:
    """``f = fj o i1 o q`` with q, fj finite coverings and i1 a factor inclusion."""

    q: TorusMorphism
    i1: TorusMorphism
    fj: TorusMorphism
    perp_basis: IntMat
    split_levels: tuple[Level, Level]

    @property
    def perp_rank(self) -> int:
        return self.perp_basis.cols

    @property
    def composite(self) -> IntMat:
        return self.fj.F @ self.i1.F @ self.q.F


def decompose(f: TorusMorphism, tau: Level, perp_change: IntMat | None = None
              ) -> MorphismDecomposition:
    """Canonical decomposition of a local injection.

    The quotient ``T'/ker f`` has cocharacter lattice ``P = F^{-1}(Z^n)``, with
    its Hermite basis; q is the covering ``T' -> T'/ker f`` and fj the covering
    ``(T'/ker f) x perp -> T``. ``perp_change`` (unimodular) re-bases the
    orthogonal complement, for checking basis independence.
    """
    f.require_local_injection()
    tau.require_positive()
    pulled = pullback_level(f, tau)
    n, k = f.target.rank, f.source.rank
    N, denom = preimage_lattice(f.F)
    # q.F = denom * N^{-1}, exact since Z^k is inside (1/denom) N Z^k
    qF = _scaled_inverse(N, denom)
    G = IntMat(n, k, tuple(e // denom for e in (f.F @ N).entries))
    perp = orthogonal_complement_lattice(f, tau)
    if perp_change is not None:
        if not perp_change.is_unimodular() or perp_change.rows != perp.cols:
            raise ValueError("perp_change must be a unimodular square matrix of the perp rank")
        perp = perp @ perp_change
    fjF = G.hstack(perp)
    q = TorusMorphism(Torus(k), Torus(k), qF)
    i1 = TorusMorphism.inclusion_first_factor(k, n - k)
    fj = TorusMorphism(Torus(n), Torus(n), fjF)
    k1 = Level(G.T @ tau.K @ G)
    k2 = Level(perp.T @ tau.K @ perp)
    dec = MorphismDecomposition(q, i1, fj, perp, (k1, k2))
    # both identities are theorems; a failure here is a bug, not bad input
    assert dec.composite == f.F
    assert fjF.T @ tau.K @ fjF == product_level(k1, k2).K
    assert q.F.T @ k1.K @ q.F == pulled.K
    return dec


def _scaled_inverse(N: IntMat, denom: int) -> IntMat:
    cols = []
    for e in IntMat.identity(N.rows).col_list():
        x = solve_rational(N, [denom * v for v in e])
        if any(v.denominator != 1 for v in x):
            raise AssertionError("preimage lattice does not contain Z^k")
        cols.append([int(v) for v in x])
    return IntMat.from_columns(cols, N.rows)


def image_lattice(f: TorusMorphism, tau: Level) -> IntMat:
    """Hermite basis of ``F^T K Z^n``, the image of the level lattice in source weights."""
    return lattice_basis(f.F.T @ tau.K)
