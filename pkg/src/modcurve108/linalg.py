"""Exact dense linear algebra over Q, the number-field tower, and F_p.

Rational matrices go through fraction-free (Bareiss) elimination on integer
rows; matrices with number-field entries use plain Gaussian elimination with
exact division.  Kernels here are LEFT kernels: kernel_basis(A) returns
vectors v with v A = 0.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence

from .errors import NotABasis
from .nftower import NFElem


class ExactMatrix:
    """Thin row-major wrapper; entries are int/Fraction/NFElem, one domain per matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        assert all(len(row) == self.cols for row in self.entries)

    def row(self, i):
        return self.entries[i]


def _as_rows(m) -> List[list]:
    if isinstance(m, ExactMatrix):
        return m.entries
    return [list(row) for row in m]


def _is_rational_rows(rows) -> bool:
    return all(isinstance(x, (int, Fraction)) for row in rows for x in row)


def _integer_rows(rows) -> List[List[int]]:
    """Scale each row by the lcm of denominators and strip content."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def _bareiss_echelon(rows: List[List[int]]):
    """In-place fraction-free row echelon; returns (pivot_cols, rank)."""
    m, n = len(rows), len(rows[0]) if rows else 0
    prev = 1
    r = 0
    pivot_cols = []
    for c in range(n):
        if r == m:
            break
        piv = None
        best = None
        for i in range(r, m):
            v = rows[i][c]
            if v != 0 and (best is None or abs(v) < best):
                piv, best = i, abs(v)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pval = prow[c]
        for i in range(r + 1, m):
            irow = rows[i]
            ival = irow[c]
            if ival == 0:
                if prev != 1:
                    for j in range(c + 1, n):
                        if irow[j]:
                            irow[j] = irow[j] * pval // prev
                else:
                    for j in range(c + 1, n):
                        irow[j] = irow[j] * pval
            else:
                for j in range(c + 1, n):
                    irow[j] = (irow[j] * pval - prow[j] * ival) // prev
            irow[c] = 0
        pivot_cols.append(c)
        prev = pval
        r += 1
    return pivot_cols, r


def _gauss_echelon(rows: List[list]):
    """Gaussian echelon with exact field division (Fraction or NFElem entries)."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    r = 0
    pivot_cols = []
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pval = prow[c]
        for i in range(r + 1, m):
            ival = rows[i][c]
            if ival == 0:
                continue
            f = ival / pval
            irow = rows[i]
            for j in range(c, n):
                if prow[j] != 0:
                    irow[j] = irow[j] - f * prow[j]
            irow[c] = 0 * irow[c]
        pivot_cols.append(c)
        r += 1
    return pivot_cols, r


def rank(m) -> int:
    """Exact rank; Bareiss over Q, Gaussian over number-field entries."""
    rows = _as_rows(m)
    if not rows or not rows[0]:
        return 0
    if _is_rational_rows(rows):
        _, r = _bareiss_echelon(_integer_rows(rows))
        return r
    _, r = _gauss_echelon(rows)
    return r


def _nullspace_int(rows: List[List[int]]) -> List[List[int]]:
    """Right nullspace basis of an integer matrix, primitive integer vectors."""
    n = len(rows[0])
    work = [row[:] for row in rows]
    pivot_cols, r = _bareiss_echelon(work)
    work = work[:r]
    free_cols = [c for c in range(n) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        sol = [Fraction(0)] * n
        sol[fc] = Fraction(1)
        for i in range(r - 1, -1, -1):
            pc = pivot_cols[i]
            s = Fraction(0)
            for j in range(pc + 1, n):
                if work[i][j] and sol[j]:
                    s += work[i][j] * sol[j]
            sol[pc] = -s / work[i][pc]
        den = 1
        for x in sol:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in sol]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        lead = next(v for v in ints if v != 0)
        if lead < 0:
            ints = [-v for v in ints]
        basis.append(ints)
    return basis


def _nullspace_field(rows: List[list]) -> List[list]:
    n = len(rows[0])
    work = [row[:] for row in rows]
    pivot_cols, r = _gauss_echelon(work)
    work = work[:r]
    free_cols = [c for c in range(n) if c not in pivot_cols]
    one = rows[0][0] - rows[0][0] + 1 if isinstance(rows[0][0], Fraction) else NFElem.rational(1)
    zero = one - one
    basis = []
    for fc in free_cols:
        sol = [zero] * n
        sol[fc] = one
        for i in range(r - 1, -1, -1):
            pc = pivot_cols[i]
            s = zero
            for j in range(pc + 1, n):
                if work[i][j] != 0 and sol[j] != 0:
                    s = s + work[i][j] * sol[j]
            sol[pc] = -s / work[i][pc]
        basis.append(sol)
    return basis


def kernel_basis(m) -> List[list]:
    """Basis of the left kernel {v : v A = 0}; integer vectors over Q."""
    rows = _as_rows(m)
    if not rows:
        return []
    transpose = [[rows[i][j] for i in range(len(rows))] for j in range(len(rows[0]))]
    if _is_rational_rows(rows):
        return _nullspace_int(_integer_rows(transpose))
    return _nullspace_field(transpose)


def span_equal(a, b) -> bool:
    """True iff the row spans of the two vector collections coincide."""
    ra = _as_rows(a)
    rb = _as_rows(b)
    if not ra or not rb:
        return not ra and not rb
    assert len(ra[0]) == len(rb[0]), "span comparison needs a common ambient space"
    return rank(ra) == rank(rb) == rank(ra + rb)


def invert_matrix(rows: List[list]) -> List[list]:
    """Exact inverse of a square matrix over a field (Fraction or NFElem)."""
    n = len(rows)
    rational = _is_rational_rows(rows)
    one = Fraction(1) if rational else NFElem.rational(1)
    zero = one - one
    a = [[Fraction(x) if rational else x for x in row] for row in rows]
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        pinv = one / a[c][c]
        a[c] = [x * pinv for x in a[c]]
        inv[c] = [x * pinv for x in inv[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
    return inv


def mat_mul(a: List[list], b: List[list]) -> List[list]:
    """Plain matrix product skipping zero entries (rows are lists)."""
    n, k = len(a), len(b)
    m = len(b[0])
    out = []
    for i in range(n):
        arow = a[i]
        orow = [None] * m
        for j in range(m):
            s = None
            for t in range(k):
                x = arow[t]
                if x == 0:
                    continue
                y = b[t][j]
                if y == 0:
                    continue
                s = x * y if s is None else s + x * y
            orow[j] = s if s is not None else 0 * arow[0]
        out.append(orow)
    return out


# -- lattice reduction ---------------------------------------------------


def lll_reduce(vectors: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)):
    """LLL reduction of independent integer vectors (classic delta = 3/4).

    Incremental mu/norm updates, exact rational Gram-Schmidt data throughout.
    """
    basis = [[int(x) for x in v] for v in vectors]
    n = len(basis)
    if n == 0:
        return []

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    # initial GSO: mu[i][j] for j < i, B[i] = |b*_i|^2
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    ortho = []
    for i in range(n):
        vec = [Fraction(x) for x in basis[i]]
        for j in range(i):
            mu[i][j] = Fraction(dot(basis[i], ortho[j])) / B[j]
            vec = [x - mu[i][j] * y for x, y in zip(vec, ortho[j])]
        B[i] = dot(vec, vec)
        if B[i] == 0:
            raise NotABasis("dependent input vectors")
        ortho.append(vec)
    del ortho

    def size_reduce(k, j):
        if abs(mu[k][j]) > Fraction(1, 2):
            r = round(mu[k][j])
            basis[k] = [x - r * y for x, y in zip(basis[k], basis[j])]
            for t in range(j):
                mu[k][t] -= r * mu[j][t]
            mu[k][j] -= r

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            for j in range(k - 2, -1, -1):
                size_reduce(k, j)
            k += 1
        else:
            nu = mu[k][k - 1]
            big = B[k] + nu * nu * B[k - 1]
            mu[k][k - 1] = nu * B[k - 1] / big
            B[k] = B[k - 1] * B[k] / big
            B[k - 1] = big
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            for j in range(k - 1):
                mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
            for i in range(k + 1, n):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - nu * t
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
            k = max(k - 1, 1)
    return basis


def is_lll_reduced(vectors: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> bool:
    """Check the size-reduction and Lovasz conditions exactly."""
    basis = [list(map(int, v)) for v in vectors]
    n = len(basis)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    ortho = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = []
    for i in range(n):
        vec = [Fraction(x) for x in basis[i]]
        for j in range(i):
            mu[i][j] = Fraction(dot(basis[i], ortho[j])) / B[j]
            vec = [x - mu[i][j] * y for x, y in zip(vec, ortho[j])]
        ortho.append(vec)
        B.append(dot(vec, vec))
        if B[i] == 0:
            return False
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            return False
    return True


def hermite_normal_form(vectors: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row-style HNF of the lattice spanned by the rows (zero rows dropped)."""
    rows = [list(map(int, v)) for v in vectors]
    if not rows:
        return []
    n = len(rows[0])
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            while rows[i][c] != 0:
                q = rows[r][c] // rows[i][c]
                rows[r] = [x - q * y for x, y in zip(rows[r], rows[i])]
                rows[r], rows[i] = rows[i], rows[r]
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        for i in range(r):
            q = rows[i][c] // rows[r][c]
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return [row for row in rows[:r]]


# -- mod-p helpers (plain int rows, explicit modulus) ----------------------


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    work = [[x % p for x in row] for row in rows]
    m, n = len(work), len(work[0])
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], -1, p)
        work[r] = [x * inv % p for x in work[r]]
        for i in range(r + 1, m):
            f = work[i][c]
            if f:
                work[i] = [(x - f * y) % p for x, y in zip(work[i], work[r])]
        r += 1
    return r


def kernel_basis_mod_p(rows: Sequence[Sequence[int]], p: int) -> List[List[int]]:
    """Left kernel mod p: vectors v with v A = 0 (mod p)."""
    m = len(rows)
    n = len(rows[0])
    work = [[rows[i][j] % p for i in range(m)] for j in range(n)]  # transpose
    pivot_cols = []
    r = 0
    for c in range(m):
        if r == n:
            break
        piv = next((i for i in range(r, n) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], -1, p)
        work[r] = [x * inv % p for x in work[r]]
        for i in range(r + 1, n):
            f = work[i][c]
            if f:
                work[i] = [(x - f * y) % p for x, y in zip(work[i], work[r])]
        pivot_cols.append(c)
        r += 1
    basis = []
    free_cols = [c for c in range(m) if c not in pivot_cols]
    for fc in free_cols:
        sol = [0] * m
        sol[fc] = 1
        for i in range(r - 1, -1, -1):
            pc = pivot_cols[i]
            s = sum(work[i][j] * sol[j] for j in range(pc + 1, m)) % p
            sol[pc] = (-s) % p
        basis.append(sol)
    return basis
