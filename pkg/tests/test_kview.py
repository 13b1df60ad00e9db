import random

import pytest
from hypothesis import given, settings, strategies as st

from affine_char import (IntMat, Level, NotCovering, OrbitSpace, ParityMismatch, TeKClass,
                         TorusMorphism, char_basis, char_covering, decompose, f_sharp, i1_sharp,
                         md_iso, md_iso_inverse, pullback_level, pushforward_finite, q_sharp,
                         r_fibers, tek_basis, verify_naturality_k)
from affine_char.kview import ODD, check_product_splitting, product_splitting, r_fiber
from affine_char.orbits import COUNTEREXAMPLE_F, COUNTEREXAMPLE_G, COUNTEREXAMPLE_H

import generators as gen

seeds = st.integers(0, 2 ** 32)
TAU = Level.diagonal([-1, -1])
G_TAU = Level.diagonal([-2, -2])
K4 = Level.diagonal([-4])


def test_md_iso_examples():
    x = tek_basis(K4, (0,))
    assert md_iso(K4, x) == char_basis(K4, (0,))
    zero = TeKClass.zero(OrbitSpace.of_level(K4))
    assert not md_iso(K4, zero)
    y = TeKClass.from_mapping(OrbitSpace.of_level(K4), {(0,): 2, (2,): 1})
    assert dict(md_iso(K4, y).terms) == {(0,): 2, (2,): 1}
    assert md_iso_inverse(K4, md_iso(K4, y)) == y


def test_tek_and_char_are_distinct_types():
    x = tek_basis(K4, (1,))
    assert x != char_basis(K4, (1,))
    with pytest.raises(TypeError):
        x + char_basis(K4, (1,))


def test_odd_classes_vanish():
    space = OrbitSpace.of_level(K4)
    with pytest.raises(ParityMismatch):
        TeKClass.basis(space, (0,), parity=ODD)
    zero = TeKClass.zero(space, parity=ODD)
    with pytest.raises(ParityMismatch):
        md_iso(K4, zero)
    with pytest.raises(ValueError):
        tek_basis(K4, (0,)) + zero


def test_pushforward_finite():
    space = OrbitSpace.of_level(K4)
    x = TeKClass.from_mapping(space, {(0,): 1, (1,): 2, (3,): 5})
    perm = pushforward_finite(lambda v: (v[0] + 1,), x, space)
    assert dict(perm.terms) == {(1,): 1, (2,): 2, (0,): 5}
    sixteen = OrbitSpace.of_lattice(IntMat.diag([16]))
    y = TeKClass.from_mapping(sixteen, {(0,): 3, (8,): 4})
    one = OrbitSpace.of_lattice(IntMat.diag([8]))
    assert dict(pushforward_finite(lambda v: v, y, one).terms) == {(0,): 7}
    assert not pushforward_finite(lambda v: v, TeKClass.zero(space), space)


def test_q_sharp_example():
    q = TorusMorphism.from_matrix([[2]])
    x = tek_basis(K4, (0,))
    y = q_sharp(q, K4, x)
    assert dict(y.terms) == {(0,): 1, (8,): 1}
    assert md_iso(pullback_level(q, K4), y) == char_covering(q, K4, char_basis(K4, (0,)))
    with pytest.raises(NotCovering):
        q_sharp(COUNTEREXAMPLE_H, TAU, tek_basis(TAU, (0, 0)))


def test_q_sharp_degree_one_relabels():
    u = TorusMorphism.from_matrix([[1, 1], [0, 1]])
    images = [q_sharp(u, G_TAU, tek_basis(G_TAU, r))
              for r in OrbitSpace.of_level(G_TAU).representatives()]
    assert all(len(y) == 1 for y in images)
    assert len({y.support for y in images}) == 4


def test_r_fibers_match_translation_description():
    rng = random.Random(21)
    for _ in range(60):
        n = rng.randint(1, 3)
        tau = gen.positive_level(rng, n, 30)
        q = TorusMorphism.from_matrix(gen.injective_matrix(rng, n, n))
        fibers = r_fibers(q, tau)
        assert sum(len(v) for v in fibers.values()) == abs(pullback_level(q, tau).K.det)
        for c, fiber in fibers.items():
            assert r_fiber(q, tau, c) == tuple(sorted(fiber))


def test_q_sharp_agrees_with_char_covering():
    rng = random.Random(8)
    for _ in range(60):
        n = rng.randint(1, 3)
        tau = gen.positive_level(rng, n, 30)
        q = TorusMorphism.from_matrix(gen.injective_matrix(rng, n, n))
        pulled = pullback_level(q, tau)
        for rep in OrbitSpace.of_level(tau).representatives():
            lhs = md_iso(pulled, q_sharp(q, tau, tek_basis(tau, rep)))
            assert lhs == char_covering(q, tau, char_basis(tau, rep))


def test_i1_sharp_examples():
    tau3 = Level.diagonal([-3, -3, -3])
    from itertools import permutations
    six = TeKClass.from_mapping(OrbitSpace.of_level(tau3), [(p, 1) for p in permutations(range(3))])
    out = i1_sharp(Level.diagonal([-3]), Level.diagonal([-3, -3]), six)
    assert dict(out.terms) == {(0,): 2, (1,): 2, (2,): 2}
    empty = Level(IntMat.zeros(0, 0))
    x = tek_basis(TAU, (0, 0))
    assert i1_sharp(TAU, empty, x) == x
    y = tek_basis(G_TAU, (1, 1))
    assert dict(i1_sharp(Level.diagonal([-2]), Level.diagonal([-2]), y).terms) == {(1,): 1}


def test_product_splitting_is_bijective():
    rng = random.Random(17)
    for _ in range(40):
        t1 = gen.positive_level(rng, rng.randint(1, 2), 20)
        t2 = gen.positive_level(rng, rng.randint(1, 2), 20)
        table = product_splitting(t1, t2)
        assert len(table) == abs(t1.K.det) * abs(t2.K.det)
        assert len(set(table.values())) == len(table)
        check_product_splitting(t1, t2)



def test_f_sharp_counterexample():
    y = f_sharp(COUNTEREXAMPLE_F, G_TAU, tek_basis(G_TAU, (0, 0)))
    assert dict(y.terms) == {(0,): 1, (2,): 1}
    x = tek_basis(TAU, (0, 0))
    assert f_sharp(TorusMorphism.identity(2), TAU, x) == x
    for f in (COUNTEREXAMPLE_G, COUNTEREXAMPLE_H):
        assert verify_naturality_k(f, TAU).ok


def test_h_through_its_q_stage_matches_char_route():
    dec = decompose(COUNTEREXAMPLE_H, TAU)
    k1, _ = dec.split_levels
    x = tek_basis(k1, (0,))
    assert md_iso(pullback_level(dec.q, k1), q_sharp(dec.q, k1, x)) == \
        char_covering(dec.q, k1, char_basis(k1, (0,)))


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_naturality_of_mackey_iso(seed):
    f, tau = gen.local_injection(random.Random(seed), max_source=3, max_target=3)
    assert verify_naturality_k(f, tau).ok


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_f_sharp_is_perp_basis_independent(seed):
    rng = random.Random(seed)
    f, tau = gen.local_injection(rng)
    m = f.target.rank - f.source.rank
    change = gen.unimodular(rng, m)
    for rep in OrbitSpace.of_level(tau).representatives()[:6]:
        x = tek_basis(tau, rep)
        assert f_sharp(f, tau, x) == f_sharp(f, tau, x, perp_change=change)
