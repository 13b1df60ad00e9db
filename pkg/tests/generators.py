"""Random instances shared by the property and acceptance tests."""

import itertools
import random

from affine_char import (ClosureCapExceeded, CompactGroupData, GroupMorphismData, IntMat, Level,
                         TorusMorphism, WeylGroup)


def positive_level(rng: random.Random, rank: int, max_det: int, max_entry: int = 6) -> Level:
    """Rejection-sample a symmetric K with -K positive definite and |det K| <= max_det."""
    while True:
        rows = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            rows[i][i] = -rng.randint(1, max_entry)
            for j in range(i):
                rows[i][j] = rows[j][i] = rng.randint(-2, 2)
        tau = Level.from_rows(rows)
        if tau.positive and abs(tau.K.det) <= max_det:
            return tau


def injective_matrix(rng: random.Random, n: int, k: int, bound: int = 2) -> IntMat:
    while True:
        F = IntMat.from_rows([[rng.randint(-bound, bound) for _ in range(k)] for _ in range(n)])
        if F.rank == k:
            return F


def local_injection(rng: random.Random, max_source: int = 3, max_target: int = 4,
                    max_det: int = 60, bound: int = 2):
    """A local injection f with a positive level tau on its target."""
    n = rng.randint(1, max_target)
    k = rng.randint(1, min(n, max_source))
    tau = positive_level(rng, n, max_det)
    return TorusMorphism.from_matrix(injective_matrix(rng, n, k, bound)), tau


def unimodular(rng: random.Random, m: int, steps: int = 8) -> IntMat:
    rows = [[int(i == j) for j in range(m)] for i in range(m)]
    if m == 0:
        return IntMat.identity(0)
    for _ in range(steps):
        i, j = rng.randrange(m), rng.randrange(m)
        if i != j:
            c = rng.randint(-2, 2)
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
        elif rng.random() < 0.3:
            rows[i] = [-a for a in rows[i]]
    return IntMat.from_rows(rows)


def _signed_perm(n: int, perm, signs) -> IntMat:
    return IntMat.from_rows([[signs[r] * int(perm[r] == c) for c in range(n)] for r in range(n)])


def weyl_preserving(rng: random.Random, diag: list[int]) -> list[IntMat]:
    """Random signed-permutation generators preserving diag(K)."""
    n = len(diag)
    gens = []
    for _ in range(rng.randint(0, 3)):
        if rng.random() < 0.5:
            i = rng.randrange(n)
            gens.append(_signed_perm(n, list(range(n)), [-1 if r == i else 1 for r in range(n)]))
        else:
            pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if diag[i] == diag[j]]
            if pairs:
                i, j = rng.choice(pairs)
                p = list(range(n))
                p[i], p[j] = j, i
                gens.append(_signed_perm(n, p, [1] * n))
    return gens


def _block(a: IntMat, n2: int) -> IntMat:
    """diag(a, I_{n2})."""
    n1 = a.rows
    return IntMat.from_rows([[a[i, j] if i < n1 and j < n1 else int(i == j)
                              for j in range(n1 + n2)] for i in range(n1 + n2)])


def _block_low(b: IntMat, n1: int) -> IntMat:
    """diag(I_{n1}, b)."""
    n2 = b.rows
    n = n1 + n2
    return IntMat.from_rows([[b[i - n1, j - n1] if i >= n1 and j >= n1 else int(i == j)
                              for j in range(n)] for i in range(n)])


def group_morphism(rng: random.Random, max_order: int = 24) -> GroupMorphismData:
    """A passing decomposable homomorphism between groups with diagonal levels.

    Either ``f = c * id`` between groups of equal rank with the same Weyl group, or
    ``f = [c * I; 0]`` into a product whose Weyl group is ``W1 x W2``.
    """
    while True:
        c = rng.randint(1, 3)
        n1 = rng.randint(1, 3)
        d1 = [-rng.choice([1, 2, 3, 4, 5]) for _ in range(n1)]
        if rng.random() < 0.3:
            d1 = [d1[0]] * n1
        w1 = weyl_preserving(rng, d1)
        if rng.random() < 0.5:
            tau = Level.diagonal(d1)
            G = CompactGroupData(tau, WeylGroup(n1, tuple(w1)))
            F = IntMat.identity(n1).scale(c)
            f_star = tuple(w1)
        else:
            n2 = rng.randint(1, 2)
            d2 = [-rng.choice([1, 2, 3]) for _ in range(n2)]
            w2 = weyl_preserving(rng, d2)
            tau = Level.diagonal(d1 + d2)
            gens = tuple(_block(w, n2) for w in w1) + tuple(_block_low(w, n1) for w in w2)
            G = CompactGroupData(tau, WeylGroup(n1 + n2, gens))
            F = IntMat.identity(n1).scale(c).vstack(IntMat.zeros(n2, n1))
            f_star = tuple(_block(w, n2) for w in w1)
        H = CompactGroupData(Level(F.T @ tau.K @ F), WeylGroup(n1, tuple(w1)))
        try:
            if G.weyl.closure(max_order) and H.weyl.order <= max_order:
                return GroupMorphismData(H, G, TorusMorphism.from_matrix(F), f_star)
        except ClosureCapExceeded:
            continue
