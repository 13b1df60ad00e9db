"""Positive-energy representations of the loop group of a torus, by lowest weight.

An irreducible ``V_[lam]`` is recorded by its orbit ``[lam]`` only; the
induced operations ``q^!`` and ``i_1^!`` are determined by that index, so no
Hilbert-space data is carried. There is no plain restriction along ``i_1``:
restricting an irreducible to the first factor is never finitely reducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .combination import CharElement, Combination, OrbitSpace, require_space
from .kview import TeKClass, f_sharp, md_iso, md_iso_inverse
from .lattice import IntMat, Vector
from .orbits import char_local_injection, covering_shifts, translate_sum
from .report import Report
from .torus import (Level, MorphismDecomposition, TorusMorphism, decompose, product_level,
                    pullback_level)


@dataclass(frozen=True, eq=False, repr=False)
class PosEnergyRep(Combination):
    """Element of the Grothendieck group ``R^tau(LT)``; negative coefficients allowed."""


def irreducible(tau: Level, rep: Sequence[int]) -> PosEnergyRep:
    return PosEnergyRep.basis(OrbitSpace.of_level(tau), rep)


def irreducibles(tau: Level) -> list[PosEnergyRep]:
    space = OrbitSpace.of_level(tau)
    return [PosEnergyRep.basis(space, r) for r in space.representatives()]


def lw(tau: Level, v: PosEnergyRep) -> CharElement:
    """Lowest-weight isomorphism ``V_[lam] -> [lam]``."""
    require_space(v, OrbitSpace.of_level(tau))
    return CharElement(v.space, v.terms)


def lw_inverse(tau: Level, y: CharElement) -> PosEnergyRep:
    require_space(y, OrbitSpace.of_level(tau))
    return PosEnergyRep(y.space, y.terms)


def q_bang(q: TorusMorphism, tau: Level, v: PosEnergyRep) -> PosEnergyRep:
    """``q^! V_[lam] = sum over m in Z^n / F Z^n of V_[F^T (lam + K m)]``."""
    q.require_covering()
    tau.require_positive()
    require_space(v, OrbitSpace.of_level(tau))
    target = OrbitSpace.of_level(pullback_level(q, tau))
    return translate_sum(target, v, q.F.T.row_list(), covering_shifts(q.F, tau.K),
                         PosEnergyRep)


def i1_bang(tau1: Level, tau2: Level, v: PosEnergyRep) -> PosEnergyRep:
    """``i_1^! V_[(lam1, lam2)] = V_[lam1]``, the intertwiner-space result."""
    require_space(v, OrbitSpace.of_level(product_level(tau1, tau2)))
    target = OrbitSpace.of_level(tau1)
    n1 = tau1.rank
    reduce = target.quotient.reduce
    acc: dict[Vector, int] = {}
    for rep, c in v.terms:
        k = reduce(rep[:n1])
        acc[k] = acc.get(k, 0) + c
    return PosEnergyRep.from_canonical(target, acc)


def f_bang(f: TorusMorphism, tau: Level, v: PosEnergyRep,
           dec: MorphismDecomposition | None = None,
           perp_change: IntMat | None = None) -> PosEnergyRep:
    """``f^! = q^! o i_1^! o (f.j)^!``."""
    if dec is None:
        dec = decompose(f, tau, perp_change)
    k1, k2 = dec.split_levels
    w = q_bang(dec.fj, tau, v)
    w = i1_bang(k1, k2, w)
    return q_bang(dec.q, k1, w)


def fht(tau: Level, v: PosEnergyRep) -> TeKClass:
    """Freed-Hopkins-Teleman isomorphism for a torus, as ``md_iso^{-1} o lw``."""
    return md_iso_inverse(tau, lw(tau, v))


def verify_fht_naturality(f: TorusMorphism, tau: Level) -> Report:
    """``FHT o f^! = f^# o FHT`` on every irreducible at level tau."""
    pulled = pullback_level(f, tau)
    dec = decompose(f, tau)
    report = Report("FHT naturality")
    bad = []
    for v in irreducibles(tau):
        lhs = fht(pulled, f_bang(f, tau, v, dec))
        rhs = f_sharp(f, tau, fht(tau, v), dec)
        if lhs != rhs:
            bad.append({"irreducible": list(v.support[0]), "fht_f_bang": lhs.to_json(),
                        "f_sharp_fht": rhs.to_json()})
    report.add("FHT o f^! = f^# o FHT on all irreducibles", not bad,
               irreducibles=OrbitSpace.of_level(tau).size, witnesses=bad[:5])
    return report


def verify_naturality_k(f: TorusMorphism, tau: Level) -> Report:
    """``md_iso o f^# = char(f) o md_iso`` on every basis class."""
    pulled = pullback_level(f, tau)
    dec = decompose(f, tau)
    space = OrbitSpace.of_level(tau)
    report = Report("naturality of M.d.")
    bad = []
    for rep in space.representatives():
        x = TeKClass.basis(space, rep)
        lhs = md_iso(pulled, f_sharp(f, tau, x, dec))
        rhs = char_local_injection(f, tau, md_iso(tau, x))
        if lhs != rhs:
            bad.append({"orbit": list(rep), "md_f_sharp": lhs.to_json(),
                        "char_md": rhs.to_json()})
    report.add("M.d. o f^# = char(f) o M.d. on all basis classes", not bad,
               orbits=space.size, witnesses=bad[:5])
    return report


def verify_naturality_rl(f: TorusMorphism, tau: Level) -> Report:
    """``lw o f^! = char(f) o lw`` on every irreducible."""
    pulled = pullback_level(f, tau)
    dec = decompose(f, tau)
    report = Report("naturality of l.w.")
    bad = []
    for v in irreducibles(tau):
        lhs = lw(pulled, f_bang(f, tau, v, dec))
        rhs = char_local_injection(f, tau, lw(tau, v))
        if lhs != rhs:
            bad.append({"irreducible": list(v.support[0]), "lw_f_bang": lhs.to_json(),
                        "char_lw": rhs.to_json()})
    report.add("l.w. o f^! = char(f) o l.w. on all irreducibles", not bad,
               orbits=OrbitSpace.of_level(tau).size, witnesses=bad[:5])
    return report
