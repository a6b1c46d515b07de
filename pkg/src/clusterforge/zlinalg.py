"""Exact integer linear algebra.

Smith normal form with tracked unimodular transforms, saturated kernels,
integer system solving, and the structure of finitely generated abelian
groups.  All arithmetic is done with Python's unbounded integers; the
intermediate entries of a Smith reduction overflow any fixed width even
for small inputs, so nothing here may ever be routed through floats or
fixed-size integer arrays.

Matrices are immutable and row-major.  Pivoting is deterministic
(smallest nonzero absolute value, first occurrence in row-major scan),
so the transforms U and V are reproducible between runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NoSolution


@dataclass(frozen=True)
class IntMatrix:
    """An immutable integer matrix; zero rows or columns are allowed."""

    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix dimension")
        if len(self.entries) != self.rows:
            raise DimensionMismatch("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise DimensionMismatch("ragged matrix rows")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return IntMatrix(len(rows), cols, rows)

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def column(vector: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows([[int(x)] for x in vector], cols=1)

    def __getitem__(self, pos):
        i, j = pos
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_t = other.transpose().entries
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in other_t)
                               for row in self.entries))

    def mul_vec(self, vector: Sequence[int]) -> tuple:
        if len(vector) != self.cols:
            raise DimensionMismatch("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.entries)

    def add(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in add")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(r1, r2))
                               for r1, r2 in zip(self.entries, other.entries)))

    def neg(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(-a for a in row) for row in self.entries))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch("row mismatch in hstack")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(r1 + r2 for r1, r2 in zip(self.entries, other.entries)))

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise DimensionMismatch("column mismatch in vstack")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def submatrix(self, row_indices: Iterable[int], col_indices: Iterable[int]) -> "IntMatrix":
        ri = tuple(row_indices)
        ci = tuple(col_indices)
        return IntMatrix(len(ri), len(ci),
                         tuple(tuple(self.entries[i][j] for j in ci) for i in ri))


def hstack_all(matrices: Sequence[IntMatrix], rows: int) -> IntMatrix:
    out = IntMatrix.zero(rows, 0)
    for m in matrices:
        out = out.hstack(m)
    return out


def block_diag(matrices: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(m.rows for m in matrices)
    cols = sum(m.cols for m in matrices)
    data = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in matrices:
        for i in range(m.rows):
            for j in range(m.cols):
                data[r0 + i][c0 + j] = m.entries[i][j]
        r0 += m.rows
        c0 += m.cols
    return IntMatrix.from_rows(data, cols=cols)


@dataclass(frozen=True)
class SnfDecomposition:
    """M = U * S * V with U, V unimodular and S diagonal, d_i | d_{i+1}.

    u_inv and v_inv are the exact inverses, tracked during the reduction
    so that kernels and integer solving need no second factorization.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    @property
    def diagonal(self) -> tuple:
        k = min(self.S.rows, self.S.cols)
        return tuple(self.S.entries[i][i] for i in range(k))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> tuple:
        return tuple(d for d in self.diagonal if d != 0)


def _pivot(s, t, rows, cols):
    """Position of the smallest nonzero |entry| in the trailing block."""
    best = None
    best_val = None
    for i in range(t, rows):
        row = s[i]
        for j in range(t, cols):
            v = abs(row[j])
            if v != 0 and (best_val is None or v < best_val):
                best = (i, j)
                best_val = v
                if v == 1:
                    return best
    return best


def snf(m: IntMatrix) -> SnfDecomposition:
    """Smith normal form with all four transforms.

    The working matrix is reduced by elementary row and column
    operations; every row operation E on S is compensated by a column
    operation on U (and its inverse on u_inv), keeping M = U*S*V exact
    at every step.
    """
    rows, cols = m.rows, m.cols
    s = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    ui = [row[:] for row in u]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    vi = [row[:] for row in v]

    def row_swap(a, b):
        s[a], s[b] = s[b], s[a]
        for r in u:
            r[a], r[b] = r[b], r[a]
        ui[a], ui[b] = ui[b], ui[a]

    def col_swap(a, b):
        for r in s:
            r[a], r[b] = r[b], r[a]
        v[a], v[b] = v[b], v[a]
        for r in vi:
            r[a], r[b] = r[b], r[a]

    def row_add(dst, src, k):
        # S: row dst += k * row src ; U: col src -= k * col dst ; Uinv: row dst += k * row src
        srow = s[src]
        drow = s[dst]
        for j in range(cols):
            drow[j] += k * srow[j]
        for r in u:
            r[src] -= k * r[dst]
        si = ui[src]
        di = ui[dst]
        for j in range(rows):
            di[j] += k * si[j]

    def col_add(dst, src, k):
        # S: col dst += k * col src ; V: row src -= k * row dst ; Vinv: col dst += k * col src
        for r in s:
            r[dst] += k * r[src]
        vs = v[src]
        vd = v[dst]
        for j in range(cols):
            vs[j] -= k * vd[j]
        for r in vi:
            r[dst] += k * r[src]

    def row_negate(a):
        s[a] = [-x for x in s[a]]
        for r in u:
            r[a] = -r[a]
        ui[a] = [-x for x in ui[a]]

    t = 0
    while t < min(rows, cols):
        pos = _pivot(s, t, rows, cols)
        if pos is None:
            break
        i, j = pos
        if i != t:
            row_swap(t, i)
        if j != t:
            col_swap(t, j)
        if s[t][t] < 0:
            row_negate(t)
        while True:
            pivot = s[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t]:
                    q = s[i][t] // pivot
                    if q:
                        row_add(i, t, -q)
                    if s[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if s[t][j]:
                    q = s[t][j] // pivot
                    if q:
                        col_add(j, t, -q)
                    if s[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder appeared; re-pivot on it
                pos = _pivot(s, t, rows, cols)
                i, j = pos
                if i != t:
                    row_swap(t, i)
                if j != t:
                    col_swap(t, j)
                if s[t][t] < 0:
                    row_negate(t)
                continue
            # row and column are clear; enforce divisibility of the block
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if s[i][j] % pivot:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        t += 1

    return SnfDecomposition(
        U=IntMatrix.from_rows(u, cols=rows),
        S=IntMatrix.from_rows(s, cols=cols),
        V=IntMatrix.from_rows(v, cols=cols),
        u_inv=IntMatrix.from_rows(ui, cols=rows),
        v_inv=IntMatrix.from_rows(vi, cols=cols),
    )


def rank(m: IntMatrix) -> int:
    return snf(m).rank


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a basis of the full kernel lattice of m.

    The kernel of an integer matrix is automatically saturated: the
    returned columns extend to a basis of Z^cols.  Each basis vector is
    sign-normalized so its first nonzero entry is positive.
    """
    dec = snf(m)
    r = dec.rank
    cols = []
    for j in range(r, m.cols):
        vec = dec.v_inv.col(j)
        lead = next((x for x in vec if x != 0), 0)
        if lead < 0:
            vec = tuple(-x for x in vec)
        cols.append(vec)
    return IntMatrix(m.cols, len(cols), tuple(tuple(c[i] for c in cols) for i in range(m.cols)))


def solve(m: IntMatrix, b: Sequence[int]) -> tuple:
    """Some integer solution x of m x = b, or NoSolution."""
    if len(b) != m.rows:
        raise DimensionMismatch("right-hand side has wrong length")
    return solve_matrix(m, IntMatrix.column(b)).col(0)


def solve_matrix(m: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Integer solution X of m X = b (columnwise), or NoSolution."""
    if b.rows != m.rows:
        raise DimensionMismatch("right-hand side has wrong row count")
    dec = snf(m)
    r = dec.rank
    diag = dec.diagonal
    c = dec.u_inv.mul(b)
    ys = []
    for k in range(b.cols):
        y = [0] * m.cols
        for i in range(m.rows):
            ci = c.entries[i][k]
            if i < r:
                q, rem = divmod(ci, diag[i])
                if rem:
                    raise NoSolution(f"column {k} is not solvable over Z")
                y[i] = q
            elif ci:
                raise NoSolution(f"column {k} is inconsistent")
        ys.append(y)
    x = IntMatrix(m.cols, b.cols, tuple(tuple(ys[k][i] for k in range(b.cols)) for i in range(m.cols)))
    return dec.v_inv.mul(x)


def is_solvable(m: IntMatrix, b: IntMatrix) -> bool:
    try:
        solve_matrix(m, b)
        return True
    except NoSolution:
        return False


def column_span_basis(m: IntMatrix) -> IntMatrix:
    """A basis (as columns) of the subgroup of Z^rows spanned by the columns."""
    dec = snf(m)
    r = dec.rank
    cols = []
    for t in range(r):
        d = dec.S.entries[t][t]
        cols.append(tuple(d * dec.U.entries[i][t] for i in range(m.rows)))
    return IntMatrix(m.rows, r, tuple(tuple(c[i] for c in cols) for i in range(m.rows)))


@dataclass(frozen=True)
class FinAbGroup:
    """A finitely generated abelian group, Z^free_rank + Z/d_1 + ... + Z/d_k.

    The torsion list is the chain of invariant factors d_1 | d_2 | ...,
    every d_i >= 2, which makes the representation unique per
    isomorphism class.

    >>> str(FinAbGroup(1, (2,)))
    'Z^1 + Z/2'
    """

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        prev = 1
        for d in self.torsion:
            if d < 2:
                raise ValueError("torsion factors must be >= 2")
            if d % prev:
                raise ValueError("invariant factors must form a divisibility chain")
            prev = d

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return group_from_factors(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def group_from_factors(free_rank: int, factors: Iterable[int]) -> FinAbGroup:
    """Normalize arbitrary cyclic orders into an invariant factor chain."""
    from math import gcd

    pending = [abs(d) for d in factors if abs(d) != 1]
    free_rank += sum(1 for d in pending if d == 0)
    pending = [d for d in pending if d != 0]
    chain: list = []
    for d in pending:
        # fold d into the chain, keeping divisibility
        for i in range(len(chain)):
            g = gcd(chain[i], d)
            lcm = chain[i] // g * d
            chain[i], d = g, lcm
            if d == 1:
                break
        if d > 1:
            chain.append(d)
    chain = [d for d in chain if d > 1]
    chain.sort()
    return FinAbGroup(free_rank, tuple(chain))


def cokernel_structure(m: IntMatrix) -> FinAbGroup:
    """Structure of Z^rows / (column span of m)."""
    dec = snf(m)
    free = m.rows - dec.rank
    torsion = tuple(d for d in dec.invariant_factors if d > 1)
    return FinAbGroup(free, torsion)


def subquotient_structure(span: IntMatrix, relations: IntMatrix) -> FinAbGroup:
    """Structure of (column span of `span`) / (column span of `relations`).

    Requires the relation columns to lie in the span; raises NoSolution
    otherwise, which always indicates a logic error in the caller.
    """
    if relations.cols == 0:
        coeffs = IntMatrix.zero(span.cols, 0)
    else:
        coeffs = solve_matrix(span, relations)
    rels = coeffs.hstack(kernel_basis(span))
    return cokernel_structure(rels)


def rank_mod(m: IntMatrix, p: int) -> int:
    """Rank of m over F_p for prime p, or over Q when p == 0."""
    if p == 0:
        return rank(m)
    a = [[x % p for x in row] for row in m.entries]
    r = 0
    for j in range(m.cols):
        pivot_row = next((i for i in range(r, m.rows) if a[i][j] % p), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = pow(a[r][j], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][j]:
                f = a[i][j]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == m.rows:
            break
    return r
