"""The ``char`` module of a torus and its induced maps.

``char(T, tau)`` is free on the orbits ``Lambda / K Z^n``. For a local
injection f with matrix F the induced map sends an orbit ``[lam]`` to the sum
of the orbits (for the pulled-back level ``K' = F^T K F``) into which the set
``F^T (lam + K Z^n)`` splits. That set is ``F^T lam + L`` with
``L = F^T K Z^n``, and ``K' Z^n' <= L`` has finite index, so the image is the
sum over representatives of ``L / K' Z^n'``.

Composition is *not* respected in general; :func:`demo_nonfunctoriality`
shows the factor of two, and :func:`verify_partial_functoriality` checks the
composition law that does hold for the canonical decomposition.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .combination import (CharElement, Combination, OrbitRef, OrbitSpace, TwistedWeight,
                          require_space)
from .errors import NotBlockDiagonal
from .lattice import IntMat, Vector, coset_reps_of_inclusion
from .report import Report
from .torus import (Level, MorphismDecomposition, TorusMorphism, decompose, product_level,
                    pullback_level)


def orbit_space(tau: Level) -> list[OrbitRef]:
    return OrbitSpace.of_level(tau).orbits()


def char_space(tau: Level) -> OrbitSpace:
    return OrbitSpace.of_level(tau)


def char_basis(tau: Level, rep: Sequence[int]) -> CharElement:
    return CharElement.basis(OrbitSpace.of_level(tau), rep)


@lru_cache(maxsize=1024)
def _injection_data(F: IntMat, K: IntMat) -> tuple[Level, tuple[Vector, ...]]:
    f = TorusMorphism.from_matrix(F).require_local_injection()
    tau = Level(K).require_positive()
    pulled = pullback_level(f, tau)
    shifts = coset_reps_of_inclusion(pulled.K, F.T @ K)
    return pulled, tuple(shifts)


def translate_sum(target: OrbitSpace, x: Combination, rows: Sequence[Vector],
                  shifts: Sequence[Vector], cls=CharElement) -> Combination:
    """Sum over terms ``c[lam]`` of ``c * sum_s [A lam + s]``, with A given by its rows."""
    quot = target.quotient
    acc: dict[Vector, int] = {}
    for lam, c in x.terms:
        base = [sum(a * b for a, b in zip(r, lam)) for r in rows]
        for v in quot.translates(base, shifts):
            acc[v] = acc.get(v, 0) + c
    return cls.from_canonical(target, acc)


def char_image(f: TorusMorphism, tau: Level, weight: Sequence[int] | TwistedWeight
               ) -> CharElement:
    """Image of the orbit through an arbitrary (unreduced) weight."""
    if isinstance(weight, TwistedWeight):
        weight = weight.coords
    pulled, shifts = _injection_data(f.F, tau.K)
    space = OrbitSpace.of_level(pulled)
    reps = space.quotient.translates(f.F.T @ tuple(weight), shifts)
    return CharElement.from_canonical(space, {v: 1 for v in reps})


def char_local_injection(f: TorusMorphism, tau: Level, x: CharElement) -> CharElement:
    """``char(f)`` by the direct algorithm."""
    pulled, shifts = _injection_data(f.F, tau.K)
    require_space(x, OrbitSpace.of_level(tau))
    return translate_sum(OrbitSpace.of_level(pulled), x, f.F.T.row_list(), shifts)


def char_covering(q: TorusMorphism, tau: Level, x: CharElement) -> CharElement:
    """``char(q)`` for a finite covering, summing over ``Z^n / F Z^n``."""
    q.require_covering()
    tau.require_positive()
    require_space(x, OrbitSpace.of_level(tau))
    pulled = pullback_level(q, tau)
    return translate_sum(OrbitSpace.of_level(pulled), x, q.F.T.row_list(),
                          covering_shifts(q.F, tau.K))


@lru_cache(maxsize=1024)
def covering_shifts(F: IntMat, K: IntMat) -> tuple[Vector, ...]:
    """``F^T K m`` for m over representatives of ``Z^n / F Z^n``."""
    ms = coset_reps_of_inclusion(F, IntMat.identity(F.rows))
    return tuple(F.T @ (K @ m) for m in ms)


def char_i1(tau1: Level, tau2: Level, x: CharElement) -> CharElement:
    """``char`` of the inclusion ``T1 -> T1 x T2``: keep the first block of coordinates."""
    prod = product_level(tau1, tau2)
    if x.space != OrbitSpace.of_level(prod):
        if x.space.rank == prod.rank:
            raise NotBlockDiagonal("input does not live on the product level",
                                   expected=prod.K, got=x.space.sublattice)
        raise ValueError("input has the wrong rank for the product level")
    target = OrbitSpace.of_level(tau1)
    n1 = tau1.rank
    reduce = target.quotient.reduce
    acc: dict[Vector, int] = {}
    for rep, c in x.terms:
        k = reduce(rep[:n1])
        acc[k] = acc.get(k, 0) + c
    return CharElement.from_canonical(target, acc)


def char_via_decomposition(dec: MorphismDecomposition, tau: Level, x: CharElement
                           ) -> CharElement:
    """``char(q) o char(i1) o char(fj)``."""
    k1, k2 = dec.split_levels
    y = char_covering(dec.fj, tau, x)
    y = char_i1(k1, k2, y)
    return char_covering(dec.q, k1, y)


def verify_partial_functoriality(f: TorusMorphism, tau: Level,
                                 perp_change: IntMat | None = None) -> Report:
    """Compare ``char(f)`` with the decomposition route on every basis orbit."""
    dec = decompose(f, tau, perp_change)
    report = Report("partial functoriality")
    space = OrbitSpace.of_level(tau)
    bad = []
    for rep in space.representatives():
        x = CharElement.basis(space, rep)
        lhs = char_local_injection(f, tau, x)
        rhs = char_via_decomposition(dec, tau, x)
        if lhs != rhs:
            bad.append({"orbit": list(rep), "direct": lhs.to_json(),
                        "decomposed": rhs.to_json()})
    report.add("char(f) = char(q) char(i1) char(fj) on all basis orbits", not bad,
               orbits=space.size, witnesses=bad[:5])
    return report


COUNTEREXAMPLE_LEVEL = Level.diagonal([-1, -1])
COUNTEREXAMPLE_F = TorusMorphism.from_matrix([[1], [-1]])
COUNTEREXAMPLE_G = TorusMorphism.from_matrix([[1, 1], [1, -1]])
COUNTEREXAMPLE_H = TorusMorphism.from_matrix([[0], [2]])


def demo_nonfunctoriality() -> Report:
    """``char(f) o char(g) = 2 char(h)`` for ``h = g o f`` into the rank-2 torus."""
    tau = COUNTEREXAMPLE_LEVEL
    f, g, h = COUNTEREXAMPLE_F, COUNTEREXAMPLE_G, COUNTEREXAMPLE_H
    g_tau = pullback_level(g, tau)
    report = Report("char is not a functor")
    report.add("h = g o f", (g @ f).F == h.F, h=h.F.tolist())
    report.add("pulled-back levels",
               g_tau.K == IntMat.diag([-2, -2]) and pullback_level(h, tau).K == IntMat.diag([-4]),
               g_level=g_tau.K.tolist(), h_level=pullback_level(h, tau).K.tolist())

    x = char_basis(tau, (0, 0))
    ch = char_local_injection(h, tau, x)
    cg = char_local_injection(g, tau, x)
    cfg = char_local_injection(f, g_tau, cg)
    report.add("char(h)[0,0] = [0] + [2]", ch.as_dict() == {(0,): 1, (2,): 1}, value=ch.to_json())
    report.add("char(g)[0,0] = [0,0] + [1,1]", cg.as_dict() == {(0, 0): 1, (1, 1): 1},
               value=cg.to_json())
    for rep in ((0, 0), (1, 1)):
        v = char_local_injection(f, g_tau, char_basis(g_tau, rep))
        report.add(f"char(f){list(rep)} = [0] + [2]", v.as_dict() == {(0,): 1, (2,): 1},
                   value=v.to_json())
    report.add("char(f) char(g) = 2 char(h)", cfg == 2 * ch,
               lhs=cfg.to_json(), rhs=ch.to_json(), factor=2)
    report.add("char(f) char(g) != char(h)", cfg != ch)

    snapshot = {}
    for rep in char_space(g_tau).representatives():
        snapshot[str(list(rep))] = char_local_injection(f, g_tau, char_basis(g_tau, rep)).to_json()
    y = char_local_injection(f, g_tau, char_local_injection(g, tau, char_basis(tau, (0, 1))))
    report.add("char(f) char(g)[0,1] (same orbit as [0,0])", y == cfg, value=y.to_json(),
               char_f_on_basis=snapshot)
    ident = TorusMorphism.identity(2)
    z = char_local_injection(ident, tau, char_local_injection(ident, tau, x))
    report.add("identity composition is strict", z == x)
    return report
