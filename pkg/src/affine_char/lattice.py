"""Exact integer linear algebra.

Everything here works over Python ints, so no entry can overflow. Matrices
are small (rank <= 8 in practice) and the algorithms are the textbook ones:
Bareiss determinants, Smith normal form with both transforms, row Hermite
normal form, and finite quotients ``Z^n / L`` with canonical coset
representatives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import NotInjective, NotSublattice, RankMismatch, SingularSublattice

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMat:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")
        for e in self.entries:
            if not isinstance(e, int) or isinstance(e, bool):
                raise TypeError(f"entries must be int, got {type(e).__name__}")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMat:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged row list")
        return cls(len(rows), cols, tuple(int(e) for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMat:
        return cls.from_rows(list(zip(*columns)) if columns else [[]] * rows,
                             cols=len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMat:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMat:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence[int]) -> IntMat:
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0
                               for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, values: Sequence[int]) -> IntMat:
        return cls(len(values), 1, tuple(values))

    # -- access ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def row_list(self) -> list[Vector]:
        return list(self._rows)

    @cached_property
    def _rows(self) -> tuple[Vector, ...]:
        return tuple(self.row(i) for i in range(self.rows))

    def col_list(self) -> list[Vector]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __repr__(self):
        return f"IntMat({self.tolist()!r})" if self.rows else f"IntMat(0x{self.cols})"

    # -- algebra -----------------------------------------------------------

    @cached_property
    def T(self) -> IntMat:
        return IntMat(self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other):
        if isinstance(other, IntMat):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.col_list()
            return IntMat(self.rows, other.cols, tuple(
                sum(a * b for a, b in zip(r, c)) for r in self._rows for c in ocols))
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def __add__(self, other: IntMat) -> IntMat:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMat(self.rows, self.cols,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntMat) -> IntMat:
        return self + (-other)

    def __neg__(self) -> IntMat:
        return IntMat(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c: int) -> IntMat:
        return IntMat(self.rows, self.cols, tuple(c * a for a in self.entries))

    def hstack(self, other: IntMat) -> IntMat:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMat.from_rows([self.row(i) + other.row(i) for i in range(self.rows)],
                                cols=self.cols + other.cols)

    def vstack(self, other: IntMat) -> IntMat:
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return IntMat(self.rows + other.rows, self.cols, self.entries + other.entries)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> IntMat:
        rows, cols = list(rows), list(cols)
        return IntMat.from_rows([[self[i, j] for j in cols] for i in rows], cols=len(cols))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.T

    @cached_property
    def det(self) -> int:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.tolist())

    @cached_property
    def rank(self) -> int:
        return sum(1 for d in snf(self).diagonal if d)

    def is_unimodular(self) -> bool:
        return self.is_square and abs(self.det) == 1


def block_diag(a: IntMat, b: IntMat) -> IntMat:
    top = a.hstack(IntMat.zeros(a.rows, b.cols))
    bottom = IntMat.zeros(b.rows, a.cols).hstack(b)
    return top.vstack(bottom)


def bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free determinant; ``m`` is consumed."""
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def solve_rational(a: IntMat, b: Sequence[int]) -> tuple[Fraction, ...]:
    """Solve ``a x = b`` for square invertible ``a`` over the rationals."""
    n = a.rows
    m = [[Fraction(v) for v in a.row(i)] + [Fraction(b[i])] for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            raise SingularSublattice("singular matrix", matrix=a)
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vc for vi, vc in zip(m[i], m[c])]
    return tuple(m[i][n] for i in range(n))


def inverse_unimodular(u: IntMat) -> IntMat:
    cols = [solve_rational(u, e) for e in IntMat.identity(u.rows).col_list()]
    if any(v.denominator != 1 for c in cols for v in c):
        raise ValueError("matrix is not unimodular")
    return IntMat.from_columns([[int(v) for v in c] for c in cols], u.rows)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    D: IntMat
    U: IntMat
    V: IntMat

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for r in m:
        r[i], r[j] = r[j], r[i]


def _add_row(m, dst, src, c):
    # row_dst += c * row_src
    m[dst] = [a + c * b for a, b in zip(m[dst], m[src])]


def _add_col(m, dst, src, c):
    for r in m:
        r[dst] += c * r[src]


@lru_cache(maxsize=4096)
def snf(a: IntMat) -> SnfResult:
    """Smith normal form ``U a V = D`` with nonnegative diagonal ``d1 | d2 | ...``."""
    nr, nc = a.shape
    m = a.tolist()
    u = IntMat.identity(nr).tolist()
    v = IntMat.identity(nc).tolist()
    for t in range(min(nr, nc)):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        _swap_rows(m, t, best[0])
        _swap_rows(u, t, best[0])
        _swap_cols(m, t, best[1])
        _swap_cols(v, t, best[1])
        while True:
            p = m[t][t]
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // p
                    _add_row(m, i, t, -q)
                    _add_row(u, i, t, -q)
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // p
                    _add_col(m, j, t, -q)
                    _add_col(v, j, t, -q)
            # leftover remainders are smaller than the pivot: move the least one in
            rest = [(abs(m[i][t]), i, t) for i in range(t + 1, nr) if m[i][t]]
            rest += [(abs(m[t][j]), t, j) for j in range(t + 1, nc) if m[t][j]]
            if rest:
                _, i, j = min(rest)
                if i != t:
                    _swap_rows(m, t, i)
                    _swap_rows(u, t, i)
                else:
                    _swap_cols(m, t, j)
                    _swap_cols(v, t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if m[i][j] % p), None)
            if bad is None:
                break
            _add_row(m, t, bad[0], 1)
            _add_row(u, t, bad[0], 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
    return SnfResult(IntMat.from_rows(m, nc), IntMat.from_rows(u, nr), IntMat.from_rows(v, nc))


# ---------------------------------------------------------------------------
# Hermite normal form


def hnf_rows(a: IntMat) -> tuple[IntMat, IntMat]:
    """Row Hermite normal form: returns ``(H, R)`` with ``R a = H``, R unimodular.

    H is in echelon form with positive pivots, entries above each pivot
    reduced into ``[0, pivot)``, and zero rows at the bottom.
    """
    nr, nc = a.shape
    m = a.tolist()
    r_ = IntMat.identity(nr).tolist()
    r = 0
    for c in range(nc):
        if r == nr:
            break
        for i in range(r + 1, nr):
            if m[i][c]:
                x0, y0 = m[r][c], m[i][c]
                g, x, y = xgcd(x0, y0)
                a1, b1 = -y0 // g, x0 // g
                for mat in (m, r_):
                    row_r, row_i = mat[r], mat[i]
                    mat[r] = [x * p + y * q for p, q in zip(row_r, row_i)]
                    mat[i] = [a1 * p + b1 * q for p, q in zip(row_r, row_i)]
        if m[r][c] == 0:
            continue
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
            r_[r] = [-x for x in r_[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                _add_row(m, i, r, -q)
                _add_row(r_, i, r, -q)
        r += 1
    return IntMat.from_rows(m, nc), IntMat.from_rows(r_, nr)


@lru_cache(maxsize=4096)
def lattice_basis(gens: IntMat) -> IntMat:
    """Canonical basis (as columns) of the lattice spanned by the columns of ``gens``."""
    h, _ = hnf_rows(gens.T)
    nonzero = [h.row(i) for i in range(h.rows) if any(h.row(i))]
    return IntMat.from_columns(nonzero, gens.rows)


def kernel_saturated(a: IntMat) -> IntMat:
    """Basis (columns) of the integer kernel ``{x : a x = 0}``.

    The basis comes from the unimodular column transform of the Smith form,
    so the kernel lattice is saturated; it is returned in Hermite form.
    """
    res = snf(a)
    r = sum(1 for d in res.diagonal if d)
    cols = [res.V.col(j) for j in range(r, a.cols)]
    if not cols:
        return IntMat.zeros(a.cols, 0)
    return lattice_basis(IntMat.from_columns(cols, a.cols))


# ---------------------------------------------------------------------------
# Finite quotients Z^n / L


@dataclass(frozen=True)
class Quotient:
    """The finite group ``Z^n / L`` for a full-rank lattice ``L``.

    ``basis`` is the Hermite basis of L (columns, lower triangular with
    positive diagonal). A vector is reduced by clearing coordinates in order,
    which lands every coset on its unique representative in the box
    ``0 <= v[i] < basis[i, i]``. The Smith data (``invariants``,
    ``to_normal``, ``from_normal``) expose the group as a product of cyclic
    groups.
    """

    basis: IntMat
    invariants: tuple[int, ...]
    to_normal: IntMat
    from_normal: IntMat

    @property
    def ambient_rank(self) -> int:
        return self.basis.rows

    @property
    def sublattice_basis(self) -> IntMat:
        return self.basis

    @property
    def cyclic_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d != 1)

    @property
    def size(self) -> int:
        n = 1
        for d in self.invariants:
            n *= d
        return n

    @property
    def box(self) -> tuple[int, ...]:
        return tuple(self.basis[i, i] for i in range(self.ambient_rank))

    def reduce(self, v: Sequence[int]) -> Vector:
        v = list(v)
        if len(v) != self.ambient_rank:
            raise RankMismatch(f"vector of length {len(v)} in rank {self.ambient_rank} quotient")
        for k, d, col in self._steps:
            q = v[k] // d
            if q:
                for i, c in col:
                    v[i] -= q * c
        return tuple(v)

    @cached_property
    def _steps(self):
        b, n = self.basis, self.ambient_rank
        return tuple((k, b[k, k], tuple((i, b[i, k]) for i in range(k, n) if b[i, k]))
                     for k in range(n))

    def translates(self, base: Sequence[int], shifts: Sequence[Sequence[int]]) -> list[Vector]:
        """Reduced ``base + s`` for every shift, in the order given."""
        steps = self._steps
        out = []
        for s in shifts:
            v = [a + b for a, b in zip(base, s)]
            for k, d, col in steps:
                q = v[k] // d
                if q:
                    for i, c in col:
                        v[i] -= q * c
            out.append(tuple(v))
        return out

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def normal_coords(self, v: Sequence[int]) -> Vector:
        w = self.to_normal @ tuple(v)
        return tuple(x % d for x, d in zip(w, self.invariants))

    def from_normal_coords(self, c: Sequence[int]) -> Vector:
        return self.reduce(self.from_normal @ tuple(c))

    def representatives(self) -> list[Vector]:
        return [tuple(v) for v in itertools.product(*(range(d) for d in self.box))]


@lru_cache(maxsize=4096)
def quotient(sublattice: IntMat, ambient_rank: int | None = None) -> Quotient:
    """Quotient of ``Z^n`` by the lattice spanned by the columns of ``sublattice``."""
    n = sublattice.rows if ambient_rank is None else ambient_rank
    if sublattice.rows != n:
        raise ValueError(f"generators live in rank {sublattice.rows}, not {n}")
    basis = lattice_basis(sublattice)
    if basis.cols != n:
        raise SingularSublattice(f"sublattice has rank {basis.cols} < {n}",
                                 sublattice=sublattice)
    res = snf(basis)
    return Quotient(basis, res.diagonal, res.U, inverse_unimodular(res.U))


def coset_reps_of_inclusion(inner: IntMat, outer: IntMat) -> list[Vector]:
    """Representatives of ``outer / inner`` for full-rank lattices ``inner <= outer``."""
    n = outer.rows
    if inner.rows != n:
        raise ValueError("lattices live in different ranks")
    qo = quotient(outer)
    for c in inner.col_list():
        if not qo.contains(c):
            raise NotSublattice("inner generator not in outer lattice", generator=c)
    ob = qo.basis
    coords = [_lower_solve(ob, c) for c in inner.col_list()]
    qi = quotient(IntMat.from_columns(coords, n))
    return [ob @ r for r in qi.representatives()]


def _lower_solve(low: IntMat, b: Sequence[int]) -> Vector:
    x = []
    for i in range(low.rows):
        s = b[i] - sum(low[i, j] * x[j] for j in range(i))
        q, r = divmod(s, low[i, i])
        if r:
            raise NotSublattice("vector not in lattice", vector=tuple(b))
        x.append(q)
    return tuple(x)


def lattice_coordinates(basis: IntMat, v: Sequence[int]) -> Vector:
    """Integer coordinates of ``v`` in a lower-triangular Hermite ``basis``."""
    return _lower_solve(basis, v)


def preimage_lattice(f: IntMat) -> tuple[IntMat, int]:
    """Return ``(N, denom)`` with ``(1/denom) N Z^k = {x in Q^k : f x in Z^n}``.

    ``N`` is a Hermite basis; ``denom`` is the largest invariant factor of f.
    """
    res = snf(f)
    k = f.cols
    d = res.diagonal[:k]
    if len(d) < k or not all(d):
        raise NotInjective(f"matrix of shape {f.shape} has rank < {k}", matrix=f)
    denom = lcm(*d) if d else 1
    scaled = IntMat.from_rows([[res.V[i, j] * (denom // d[j]) for j in range(k)]
                               for i in range(k)], k)
    n = lattice_basis(scaled) if k else scaled
    g = gcd(denom, *n.entries)
    if g > 1:
        n, denom = IntMat(n.rows, n.cols, tuple(e // g for e in n.entries)), denom // g
    return n, denom
