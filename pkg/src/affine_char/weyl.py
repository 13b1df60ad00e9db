"""Compact connected groups reduced to their maximal torus.

A group is given by its level K on the maximal torus and generators of its
Weyl group W, as matrices acting on weights. ``W`` acts on the orbit space
``Lambda / K Z^n`` because ``w K w^T = K``; the extended affine Weyl group
``Z^n x| W`` then has orbits equal to the W-orbits of torus orbits, and such an
orbit is regular exactly when it has ``|W|`` torus orbits (the translation
part acts freely since K is injective).

The Lie-bracket part of the decomposable condition is not computable from
this data. :func:`check_decomposable` checks the two lattice consequences used
to construct ``char(f)`` instead: weight equivariance of ``f_*`` and trivial
action of ``f_*(W(H))`` on the orthogonal complement.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .combination import CharElement, Combination, OrbitSpace, TwistedWeight
from .errors import (AffineCharError, ClosureCapExceeded, GroupingFailure, NotBijective,
                     NotEquivariant, NotRegular, RankMismatch)
from .lattice import IntMat, Vector
from .orbits import char_local_injection
from .report import Report
from .torus import Level, TorusMorphism, orthogonal_complement_lattice

DEFAULT_CLOSURE_CAP = 100_000
CAP_ENV = "AFFINE_CHAR_CLOSURE_CAP"


def closure_cap() -> int:
    return int(os.environ.get(CAP_ENV, DEFAULT_CLOSURE_CAP))


@dataclass(frozen=True)
class WeylGroup:
    rank: int
    generators: tuple[IntMat, ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if g.shape != (self.rank, self.rank):
                raise ValueError(f"generator of shape {g.shape} at rank {self.rank}")
            if not g.is_unimodular():
                raise ValueError(f"generator {g.tolist()} is not unimodular")

    @classmethod
    def from_lists(cls, rank: int, gens) -> WeylGroup:
        return cls(rank, tuple(IntMat.from_rows(g) if g else IntMat.zeros(rank, rank)
                               for g in gens))

    @classmethod
    def trivial(cls, rank: int) -> WeylGroup:
        return cls(rank, ())

    @classmethod
    def symmetric(cls, n: int) -> WeylGroup:
        """Coordinate permutations generated by adjacent transpositions."""
        gens = []
        for i in range(n - 1):
            p = list(range(n))
            p[i], p[i + 1] = p[i + 1], p[i]
            gens.append(IntMat.from_rows([[int(p[r] == c) for c in range(n)]
                                          for r in range(n)]))
        return cls(n, tuple(gens))

    def closure(self, cap: int | None = None) -> tuple[IntMat, ...]:
        cap = closure_cap() if cap is None else cap
        if cap == closure_cap() and "_closure" in self.__dict__:
            return self.__dict__["_closure"]
        elements = _closure(self, cap)
        if cap == closure_cap():
            self.__dict__["_closure"] = elements
        return elements

    @property
    def order(self) -> int:
        return len(self.closure())


def _closure(w: WeylGroup, cap: int) -> tuple[IntMat, ...]:
    ident = IntMat.identity(w.rank)
    seen = {ident}
    out = [ident]
    todo = deque([ident])
    while todo:
        e = todo.popleft()
        for g in w.generators:
            p = g @ e
            if p not in seen:
                if len(out) >= cap:
                    raise ClosureCapExceeded(f"more than {cap} elements", cap=cap)
                seen.add(p)
                out.append(p)
                todo.append(p)
    return tuple(out)


@dataclass(frozen=True)
class CompactGroupData:
    level: Level
    weyl: WeylGroup
    rho: Vector | None = None

    def __post_init__(self):
        if self.weyl.rank != self.level.rank:
            raise RankMismatch("Weyl group and level have different ranks")
        if self.rho is not None and len(self.rho) != self.rank:
            raise RankMismatch("rho has the wrong length")
        K = self.level.K
        for i, g in enumerate(self.weyl.generators):
            if g @ K @ g.T != K:
                raise NotEquivariant(f"generator {i} does not preserve the level",
                                     generator=g, K=K)

    @classmethod
    def torus(cls, tau: Level) -> CompactGroupData:
        return cls(tau, WeylGroup.trivial(tau.rank))

    @property
    def rank(self) -> int:
        return self.level.rank

    @cached_property
    def torus_space(self) -> OrbitSpace:
        return OrbitSpace.of_level(self.level)

    @cached_property
    def orbit_space(self) -> GroupOrbitSpace:
        return GroupOrbitSpace(self)

    def weyl_orbit(self, lam: Sequence[int]) -> tuple[Vector, ...]:
        """Distinct torus orbits ``[w lam]``, sorted."""
        space = self.torus_space
        return tuple(sorted({space.canonical(w @ tuple(lam)) for w in self.weyl.closure()}))


@dataclass(frozen=True)
class GroupOrbitSpace:
    """Regular extended-affine-Weyl orbits; each stored by its least torus orbit."""

    group: CompactGroupData

    @property
    def rank(self) -> int:
        return self.group.rank

    def canonical(self, v: Sequence[int]) -> Vector:
        members = self.group.weyl_orbit(v)
        if len(members) != self.group.weyl.order:
            raise NotRegular(f"orbit of {list(v)} has a nontrivial stabilizer",
                             weight=tuple(v), orbit_size=len(members))
        return members[0]

    def members(self, v: Sequence[int]) -> tuple[Vector, ...]:
        return self.group.weyl_orbit(v)

    def describe(self) -> dict:
        return {"kind": "group", "rank": self.rank,
                "level": self.group.level.K.tolist(), "weyl_order": self.group.weyl.order}


class GroupCharElement(Combination):
    """Element of ``char(G, tau)``, free on regular orbits."""


@dataclass(frozen=True)
class RegularOrbit:
    rep: Vector
    members: tuple[Vector, ...]


def is_regular(lam: Sequence[int] | TwistedWeight, group: CompactGroupData) -> bool:
    if isinstance(lam, TwistedWeight):
        lam = lam.coords
    return len(group.weyl_orbit(lam)) == group.weyl.order


def char_group(group: CompactGroupData) -> list[RegularOrbit]:
    """All regular orbits, sorted by representative."""
    seen: set[Vector] = set()
    out = []
    order = group.weyl.order
    for rep in group.torus_space.representatives():
        if rep in seen:
            continue
        members = group.weyl_orbit(rep)
        seen.update(members)
        if len(members) == order:
            out.append(RegularOrbit(members[0], members))
    return sorted(out, key=lambda o: o.rep)


def group_basis(group: CompactGroupData, rep: Sequence[int]) -> GroupCharElement:
    return GroupCharElement.basis(group.orbit_space, rep)


def char_max_torus(group: CompactGroupData, x: GroupCharElement) -> CharElement:
    """``char(i)`` for the maximal torus: a regular orbit goes to its |W| torus orbits."""
    if x.space != group.orbit_space:
        raise RankMismatch("input does not live on this group's orbit space")
    space = group.torus_space

    def image(rep):
        members = group.weyl_orbit(rep)
        if len(members) != group.weyl.order:
            raise NotRegular("orbit is not regular", weight=rep)
        return CharElement.from_mapping(space, [(m, 1) for m in members])

    return x.map_linear(image, CharElement, space)


@dataclass(frozen=True)
class GroupMorphismData:
    """``f: H -> G`` via its torus map ``S -> T`` and ``f_*`` on Weyl generators.

    ``f_star[i]`` is the image in W(G) of the i-th generator of W(H).
    """

    source: CompactGroupData
    target: CompactGroupData
    torus_map: TorusMorphism
    f_star: tuple[IntMat, ...] = ()

    def __post_init__(self):
        if self.torus_map.F.shape != (self.target.rank, self.source.rank):
            raise RankMismatch("torus map does not match the group ranks")
        if len(self.f_star) != len(self.source.weyl.generators):
            raise RankMismatch("f_star needs one image per source Weyl generator")
        for w in self.f_star:
            if w.shape != (self.target.rank, self.target.rank):
                raise RankMismatch("f_star image has the wrong shape")


def _extend_homomorphism(m: GroupMorphismData) -> tuple[dict | None, str]:
    """Pair up closures along words in the generators; None if inconsistent."""
    H, G = m.source.weyl, m.target.weyl
    start = (IntMat.identity(H.rank), IntMat.identity(G.rank))
    table = {start[0]: start[1]}
    todo = deque([start])
    cap = closure_cap()
    while todo:
        h, g = todo.popleft()
        for gh, gg in zip(H.generators, m.f_star):
            hp, gp = gh @ h, gg @ g
            if hp in table:
                if table[hp] != gp:
                    return None, f"word images disagree on {hp.tolist()}"
                continue
            if len(table) >= cap:
                raise ClosureCapExceeded(f"more than {cap} elements", cap=cap)
            table[hp] = gp
            todo.append((hp, gp))
    return table, ""


def check_decomposable(m: GroupMorphismData) -> Report:
    report = Report("decomposable condition")
    f, tau = m.torus_map, m.target.level
    F = f.F
    report.add("torus map is a local injection", f.is_local_injection, F=F.tolist())
    if not f.is_local_injection:
        return report
    pulled = Level(F.T @ tau.K @ F)
    report.add("(1) pulled-back level is positive", pulled.positive, K=pulled.K.tolist())
    report.add("source level equals pulled-back level", pulled.K == m.source.level.K,
               expected=pulled.K.tolist(), got=m.source.level.K.tolist())

    g_elems = set(m.target.weyl.closure())
    bad = [i for i, w in enumerate(m.f_star) if w not in g_elems]
    report.add("f_* lands in W(G)", not bad, bad_generators=bad)

    table, why = _extend_homomorphism(m)
    hom_ok = table is not None
    injective = hom_ok and len(set(table.values())) == len(table)
    report.add("f_* extends to an injective homomorphism", hom_ok and injective,
               reason=why or ("" if injective else "f_* is not injective"))

    bad = [i for i, (wh, wg) in enumerate(zip(m.source.weyl.generators, m.f_star))
           if F.T @ wg != wh @ F.T]
    report.add("(3) weight equivariance F^T f_*(w) = w F^T", not bad, bad_generators=bad)

    perp = orthogonal_complement_lattice(f, tau)
    bad = [{"generator": i, "vector": list(b)}
           for i, wg in enumerate(m.f_star) for b in perp.col_list() if wg.T @ b != b]
    report.add("(3) f_*(W(H)) fixes the orthogonal complement", not bad, witnesses=bad[:5])
    report.notes.append("(2) torsion-free fundamental group of H/ker f: USER-ASSERTED, not checked")
    return report


def char_general(m: GroupMorphismData, x: GroupCharElement, check: bool = True
                 ) -> GroupCharElement:
    """``char(f)`` for a decomposable homomorphism.

    Each regular orbit is pushed to the maximal torus, mapped by the torus
    ``char(f|_S)``, and the resulting multiset of torus orbits is regrouped
    into W(H)-orbits; every block must be a whole regular W(H)-orbit with a
    single multiplicity.
    """
    if check:
        rep = check_decomposable(m)
        if not rep.ok:
            raise GroupingFailure("decomposable condition fails: "
                                  + "; ".join(c.name for c in rep.failures()))
    H, G = m.source, m.target
    h_space = H.orbit_space

    def image(rep):
        torus_img = char_local_injection(m.torus_map, G.level,
                                         char_max_torus(G, group_basis(G, rep)))
        return regroup(H, torus_img)

    return x.map_linear(image, GroupCharElement, h_space)


def regroup(H: CompactGroupData, y: CharElement) -> GroupCharElement:
    """Inverse of :func:`char_max_torus` on its image; raises on anything else."""
    remaining = y.as_dict()
    order = H.weyl.order
    out = {}
    while remaining:
        first = min(remaining)
        block = H.weyl_orbit(first)
        if len(block) != order:
            raise GroupingFailure("image contains a non-regular W(H)-orbit",
                                  orbit=first, size=len(block))
        c = remaining[first]
        for b in block:
            if remaining.get(b) != c:
                raise GroupingFailure("W(H)-orbit is split or has mixed multiplicity",
                                      orbit=first, member=b)
        for b in block:
            del remaining[b]
        out[first] = c
    return GroupCharElement.from_mapping(H.orbit_space, out)


@dataclass(frozen=True)
class RhoShiftTable:
    entries: tuple[tuple[Vector, Vector], ...]

    def to_json(self) -> list[dict]:
        return [{"low": list(a), "high": list(b)} for a, b in self.entries]


def all_orbits(group: CompactGroupData) -> list[tuple[Vector, ...]]:
    """Every extended-affine-Weyl orbit (regular or not), as sorted member tuples."""
    seen: set[Vector] = set()
    out = []
    for rep in group.torus_space.representatives():
        if rep not in seen:
            members = group.weyl_orbit(rep)
            seen.update(members)
            out.append(members)
    return out


def rho_shift(low: CompactGroupData, high: CompactGroupData) -> RhoShiftTable:
    """Tabulate ``[lam] -> [lam + rho]`` and verify it is a bijection onto regular orbits.

    Each low orbit is shifted through its canonical (least) representative.
    """
    if low.rank != high.rank:
        raise RankMismatch("levels have different ranks")
    if set(low.weyl.closure()) != set(high.weyl.closure()):
        raise AffineCharError("the two groups have different Weyl groups")
    if high.rho is None:
        raise AffineCharError("rho is required on the higher level")
    low.level.require_positive("lower level")
    high.level.require_positive("higher level")
    regular = {o.rep for o in char_group(high)}
    order = high.weyl.order
    entries = []
    hit: dict[Vector, Vector] = {}
    for members in all_orbits(low):
        lam = members[0]
        shifted = tuple(a + b for a, b in zip(lam, high.rho))
        image = high.weyl_orbit(shifted)
        if len(image) != order:
            raise NotBijective("shifted orbit is not regular", orbit=lam, image=image[0])
        if image[0] in hit:
            raise NotBijective("two orbits shift to the same regular orbit",
                               orbit=lam, other=hit[image[0]], image=image[0])
        hit[image[0]] = lam
        entries.append((lam, image[0]))
    missed = sorted(regular - set(hit))
    if missed:
        raise NotBijective("regular orbits not reached by the shift", missed=missed[:5],
                           low_orbits=len(entries), regular_orbits=len(regular))
    return RhoShiftTable(tuple(entries))


U3_LEVEL = Level.diagonal([-3, -3, -3])


def u3_data() -> tuple[CompactGroupData, GroupMorphismData]:
    g = CompactGroupData(U3_LEVEL, WeylGroup.symmetric(3))
    f = TorusMorphism.inclusion_first_factor(1, 2)
    h = CompactGroupData.torus(Level(f.F.T @ U3_LEVEL.K @ f.F))
    return g, GroupMorphismData(h, g, f, ())


def demo_u3() -> Report:
    """The circle into U(3) at level ``diag(-3,-3,-3)``."""
    g, m = u3_data()
    report = Report("U(3) example")
    report.add("W(U(3)) has 6 elements", g.weyl.order == 6)
    orbits = char_group(g)
    report.add("exactly one regular orbit", len(orbits) == 1,
               orbits=[list(o.rep) for o in orbits])
    report.add("(0,1,2) is regular", is_regular((0, 1, 2), g))
    x = group_basis(g, (0, 1, 2))
    on_torus = char_max_torus(g, x)
    perms = {(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)}
    report.add("char(i)[0,1,2] has the six permuted orbits",
               on_torus.as_dict() == {p: 1 for p in perms}, value=on_torus.to_json())
    dec = check_decomposable(m)
    report.add("inclusion satisfies the lattice decomposable checks", dec.ok)
    composite = char_local_injection(m.torus_map, g.level, on_torus)
    report.add("char(i1) char(i)[0,1,2] = 2([0]+[1]+[2])",
               composite.as_dict() == {(0,): 2, (1,): 2, (2,): 2}, value=composite.to_json())
    general = char_general(m, x)
    report.add("char(f)[0,1,2] agrees", general.as_dict() == {(0,): 2, (1,): 2, (2,): 2},
               value=general.to_json())
    pulled = m.source.level
    report.add("pulled-back level (-3) has 3 orbits",
               pulled.K == IntMat.diag([-3]) and m.source.torus_space.size == 3)
    naive = {m.source.torus_space.canonical(m.torus_map.F.T @ t) for t in on_torus.support}
    report.add("naive orbit image is [0]+[1]+[2], which differs",
               naive == {(0,), (1,), (2,)} and composite.as_dict() != {v: 1 for v in naive})
    report.notes.append("Mapping orbits to orbits directly would give [0]+[1]+[2]; "
                        "compatibility with the maximal torus forces multiplicity 2.")
    return report
