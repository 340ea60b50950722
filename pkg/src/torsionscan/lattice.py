"""Exact integer linear algebra.

Smith and Hermite normal forms over Z, quotients of Z^d by sublattices and
the exterior-square quotients Lambda^2 Z^d / (Z^d ^ L).  Everything works on
Python integers, so intermediate growth never wraps around.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ArithmeticOverflowError


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable dense integer matrix.

    The shape is stored explicitly so that 0 x n and n x 0 matrices keep
    their dimensions.
    """

    nrows: int
    ncols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.nrows or any(len(r) != self.ncols for r in self.entries):
            raise ValueError(
                f"entry count does not match shape {self.nrows}x{self.ncols}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "IntegerMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], nrows: int) -> "IntegerMatrix":
        columns = [tuple(int(x) for x in c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise ValueError(f"column of length {len(c)}, expected {nrows}")
        rows = tuple(tuple(c[i] for c in columns) for i in range(nrows))
        return cls(nrows, len(columns), rows)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntegerMatrix":
        return cls(nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self.entries) for j in range(self.ncols)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.ncols, self.nrows, tuple(zip(*self.entries)) if self.nrows else tuple(() for _ in range(self.ncols)))

    @property
    def T(self) -> "IntegerMatrix":
        return self.transpose()

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        rows = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries
        )
        return IntegerMatrix(self.nrows, other.ncols, rows)

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(min(self.nrows, self.ncols)))

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j] == 0
            for i in range(self.nrows)
            for j in range(self.ncols)
            if i != j
        )

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return determinant(self.entries)


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer (or rational) matrix given by rows."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    r = 0
    ncols = len(a[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == D with U, V unimodular and D in Smith normal form."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return self.D.diagonal()

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(A: IntegerMatrix, word_bits: int | None = None) -> SmithDecomposition:
    """Smith normal form with transformation matrices.

    Pivots are chosen as the entry of smallest absolute value in the active
    block, first occurrence in row-major order, so the output is
    deterministic.  With ``word_bits`` set, every entry of the working
    matrices must fit in a signed integer of that width; leaving the range
    raises :class:`ArithmeticOverflowError`.
    """
    m, n = A.nrows, A.ncols
    a = [list(r) for r in A.entries]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    limit = None if word_bits is None else 1 << (word_bits - 1)

    def check(step):
        if limit is None:
            return
        for mat in (a, u, v):
            for row in mat:
                for x in row:
                    if not -limit <= x < limit:
                        raise ArithmeticOverflowError(
                            f"entry {x} exceeds {word_bits}-bit range at pivot step {step}"
                        )

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                check(t)
                return _finish(m, n, a, u, v)
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            check(t)
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            if p < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
            break
    check(min(m, n))
    return _finish(m, n, a, u, v)


def _finish(m, n, a, u, v) -> SmithDecomposition:
    return SmithDecomposition(
        IntegerMatrix.from_rows(u, m),
        IntegerMatrix.from_rows(a, n),
        IntegerMatrix.from_rows(v, n),
    )


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finitely generated abelian group Z/c_1 + ... + Z/c_k + Z^r.

    ``invariant_factors`` is the normalized chain c_1 | c_2 | ... with every
    c_i >= 2; equality is plain equality of (factors, free_rank).  A finite
    group and its Pontryagin dual share the same invariant factors, so
    :meth:`dual` returns an equal group.
    """

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        cs = tuple(int(c) for c in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", cs)
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        if any(c < 2 for c in cs):
            raise ValueError(f"invariant factors must be >= 2, got {cs}")
        if any(b % a for a, b in zip(cs, cs[1:])):
            raise ValueError(f"invariant factors {cs} do not form a divisibility chain")

    @classmethod
    def trivial(cls) -> "FiniteAbelianGroup":
        return cls()

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "FiniteAbelianGroup":
        """Normalize a direct sum of cyclic groups Z/n_i; n_i = 0 means Z."""
        orders = [abs(int(x)) for x in orders]
        free = sum(1 for x in orders if x == 0)
        finite = [x for x in orders if x > 1]
        if not finite:
            return cls((), free)
        # Invariant factors via prime-power decomposition.
        by_prime: dict[int, list[int]] = {}
        for x in finite:
            for p, e in _factorize(x).items():
                by_prime.setdefault(p, []).append(p**e)
        length = max(len(v) for v in by_prime.values())
        factors = [1] * length
        for p, powers in by_prime.items():
            powers.sort()
            for k, q in enumerate(powers):
                factors[length - len(powers) + k] *= q
        return cls(tuple(factors), free)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    @property
    def is_cyclic(self) -> bool:
        return (len(self.invariant_factors) + self.free_rank) <= 1

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError(f"{self} is infinite")
        return math.prod(self.invariant_factors)

    @property
    def torsion(self) -> "FiniteAbelianGroup":
        return FiniteAbelianGroup(self.invariant_factors)

    def dual(self) -> "FiniteAbelianGroup":
        """Hom(G, Q/Z) for the torsion part (isomorphic, hence equal here)."""
        return self.torsion

    def __str__(self):
        parts = [f"Z/{c}" for c in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class SublatticeSpan:
    """The Z-module generated by integer vectors in Z^d."""

    ambient_rank: int
    generators: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if self.ambient_rank < 0:
            raise ValueError("ambient_rank must be nonnegative")
        for g in gens:
            if len(g) != self.ambient_rank:
                raise ValueError(
                    f"generator {g} has {len(g)} coordinates, expected {self.ambient_rank}"
                )

    def matrix(self) -> IntegerMatrix:
        """Generators as the columns of a d x n matrix."""
        return IntegerMatrix.from_columns(self.generators, self.ambient_rank)


def invariant_factor_chain(span: SublatticeSpan) -> tuple[int, ...]:
    """The full length-d chain c_1 | ... | c_d of Z^d / span.

    Unlike :class:`FiniteAbelianGroup`, ones are kept and free directions
    appear as trailing zeros.
    """
    d = span.ambient_rank
    diag = smith_normal_form(span.matrix()).diagonal if span.generators else ()
    nonzero = [x for x in diag if x]
    return tuple(nonzero) + (0,) * (d - len(nonzero))


def quotient_group(span: SublatticeSpan) -> FiniteAbelianGroup:
    """Structure of Z^d / <generators>."""
    if span.ambient_rank < 1:
        raise ValueError("ambient_rank must be at least 1")
    chain = invariant_factor_chain(span)
    return FiniteAbelianGroup(
        tuple(c for c in chain if c > 1), sum(1 for c in chain if c == 0)
    )


def hermite_basis(vectors: Iterable[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns the nonzero HNF rows: an echelon basis with positive pivots and
    entries above each pivot reduced into [0, pivot).
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not active:
            col += 1
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        p = active[0]
        if p[col] < 0:
            p = [-x for x in p]
        basis.append(p)
        rows = rest
        col += 1
    # Reduce entries above pivots.
    for i in range(len(basis)):
        pc = next(j for j, x in enumerate(basis[i]) if x)
        for k in range(i):
            q = basis[k][pc] // basis[i][pc]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], basis[i])]
    return [tuple(r) for r in basis]


def lattice_basis(span: SublatticeSpan) -> IntegerMatrix:
    """Basis of the sublattice generated by ``span``, as matrix columns.

    The columns are the rows of the Hermite normal form of the generators.
    """
    if not span.generators:
        raise ValueError("cannot take a basis of an empty span")
    rows = hermite_basis(span.generators, span.ambient_rank)
    return IntegerMatrix.from_columns(rows, span.ambient_rank)


def solve_rational(basis_columns: Sequence[Sequence[int]], target: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_i b_i = target, or None if not in the Q-span.

    ``basis_columns`` must be linearly independent.
    """
    k = len(basis_columns)
    d = len(target)
    aug = [[Fraction(basis_columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(d)]
    row = 0
    pivots = []
    for c in range(k):
        piv = next((i for i in range(row, d) if aug[i][c] != 0), None)
        if piv is None:
            raise ValueError("basis columns are linearly dependent")
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][c]
        aug[row] = [x / pv for x in aug[row]]
        for i in range(d):
            if i != row and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(c)
        row += 1
    if any(aug[i][k] != 0 for i in range(row, d)):
        return None
    return [aug[i][k] for i in range(k)]


def contains(span: SublatticeSpan, vector: Sequence[int]) -> bool:
    """Membership of an integer vector in the lattice generated by ``span``."""
    if not any(vector):
        return True
    if not span.generators:
        return False
    basis = hermite_basis(span.generators, span.ambient_rank)
    coeffs = solve_rational(basis, vector)
    return coeffs is not None and all(c.denominator == 1 for c in coeffs)


def kernel_basis(v: Sequence[int]) -> list[tuple[int, ...]]:
    """Basis of {x in Z^d : <x, v> = 0} (rank d - 1 for nonzero v)."""
    d = len(v)
    snf = smith_normal_form(IntegerMatrix.from_rows([v], d))
    cols = snf.V.columns()
    r = snf.rank
    return cols[r:]


def maximal_minors(columns: Sequence[Sequence[int]], dim: int) -> tuple[int, ...]:
    """Coordinates of c_1 ^ ... ^ c_k in Lambda^k Z^dim (lexicographic basis)."""
    k = len(columns)
    out = []
    for rows in itertools.combinations(range(dim), k):
        out.append(determinant([[columns[j][i] for j in range(k)] for i in rows]))
    return tuple(out)


def wedge_pairs(d: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(d), 2))


def wedge_square_quotient(d: int, gens: SublatticeSpan) -> FiniteAbelianGroup:
    """Structure of Lambda^2 Z^d / (Z^d ^ L) with L generated by ``gens``.

    Builds every wedge e_a ^ g as a vector in the rank C(d, 2) lattice and
    takes the quotient by their span.
    """
    if d < 2:
        raise ValueError("exterior square needs d >= 2")
    if gens.ambient_rank != d:
        raise ValueError(f"generators live in Z^{gens.ambient_rank}, expected Z^{d}")
    pairs = wedge_pairs(d)
    index = {p: k for k, p in enumerate(pairs)}
    columns = []
    for g in gens.generators:
        for a in range(d):
            vec = [0] * len(pairs)
            for b, gb in enumerate(g):
                if gb == 0 or a == b:
                    continue
                if a < b:
                    vec[index[(a, b)]] += gb
                else:
                    vec[index[(b, a)]] -= gb
            if any(vec):
                columns.append(tuple(vec))
    return quotient_group(SublatticeSpan(len(pairs), tuple(columns)))


def exterior_square_from_chain(chain: Sequence[int]) -> FiniteAbelianGroup:
    """Closed form sum_{i<j} Z/gcd(c_i, c_j) for a chain c_1 | ... | c_d.

    Zeros stand for free summands; gcd(c, 0) = c.
    """
    orders = [math.gcd(a, b) for a, b in itertools.combinations(chain, 2)]
    return FiniteAbelianGroup.from_cyclic_orders(orders)
