"""The order-108 group of modular automorphisms as projective 10x10 matrices.

Generators w4, w27, S2, S3 act on the basis e1..e10 by fixed block matrices
over K = Q(zeta); a matrix M represents the map e_i |-> sum_j M[j][i] e_j, so
composition is plain matrix multiplication.  Matrices are normalized so the
first nonzero entry in row-major order is 1, which makes equality of
projective classes structural.

Structure checks go through the left-regular permutation picture: the BFS
closure records, for every generator g, the permutation i |-> index(g * m_i),
and all order/center/derived-subgroup statistics are computed on those
permutations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Sequence, Tuple

from .errors import GroupTooLarge
from .linalg import invert_matrix
from .nftower import NFElem

HALF = Fraction(1, 2)


def _nf(x) -> NFElem:
    return x if isinstance(x, NFElem) else NFElem.rational(x)


class ProjMatrix:
    """Invertible matrix over K or L up to scalar, in normalized form."""

    __slots__ = ("entries",)

    def __init__(self, rows: Sequence[Sequence], normalize: bool = True):
        ent = [[_nf(x) for x in row] for row in rows]
        n = len(ent)
        assert all(len(row) == n for row in ent)
        if normalize:
            lead = None
            for row in ent:
                for x in row:
                    if not x.is_zero():
                        lead = x
                        break
                if lead is not None:
                    break
            assert lead is not None, "zero matrix is not projective"
            if lead != 1:
                inv = lead.inverse()
                ent = [[x * inv for x in row] for row in ent]
        self.entries = tuple(tuple(row) for row in ent)

    @property
    def size(self) -> int:
        return len(self.entries)

    def __mul__(self, other: "ProjMatrix") -> "ProjMatrix":
        a, b = self.entries, other.entries
        n = self.size
        zero = NFElem.rational(0)
        out = []
        for i in range(n):
            arow = a[i]
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    x = arow[k]
                    if x.is_zero():
                        continue
                    y = b[k][j]
                    if y.is_zero():
                        continue
                    t = x * y
                    acc = t if acc is None else acc + t
                row.append(zero if acc is None else acc)
            out.append(row)
        return ProjMatrix(out)

    def inverse(self) -> "ProjMatrix":
        return ProjMatrix(invert_matrix([list(r) for r in self.entries]))

    def sigma(self) -> "ProjMatrix":
        return ProjMatrix([[x.sigma() for x in row] for row in self.entries])

    def power(self, e: int) -> "ProjMatrix":
        assert e >= 0
        result = identity_matrix(self.size)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def projective_order(self, bound: int = 1000) -> int:
        ident = identity_matrix(self.size)
        m = self
        for k in range(1, bound + 1):
            if m == ident:
                return k
            m = m * self
        raise GroupTooLarge(f"no order found within {bound}")

    def apply_to_point(self, coords: Sequence[NFElem]) -> Tuple[NFElem, ...]:
        """Image coordinates x_i' = sum_j M[j][i] x_j of a point."""
        n = self.size
        out = []
        for i in range(n):
            acc = None
            for j in range(n):
                m = self.entries[j][i]
                if m.is_zero() or coords[j].is_zero():
                    continue
                t = m * coords[j]
                acc = t if acc is None else acc + t
            out.append(acc if acc is not None else NFElem.rational(0))
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, ProjMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"ProjMatrix({self.size}x{self.size})"

    def to_strings(self) -> List[str]:
        return [" ".join(str(x) for x in row) for row in self.entries]


def identity_matrix(n: int = 10) -> ProjMatrix:
    one = NFElem.rational(1)
    zero = NFElem.rational(0)
    return ProjMatrix(
        [[one if i == j else zero for j in range(n)] for i in range(n)],
        normalize=False,
    )


def _block_diag(v_block, w_block) -> ProjMatrix:
    rows = []
    for i in range(4):
        rows.append(list(v_block[i]) + [0] * 6)
    for i in range(6):
        rows.append([0] * 4 + list(w_block[i]))
    return ProjMatrix(rows)


def b0_generators() -> Tuple[ProjMatrix, ProjMatrix, ProjMatrix, ProjMatrix]:
    """The generator matrices (w4, w27, S2, S3) on the basis e1..e10."""
    zeta = NFElem((0, 1))
    zeta_inv = NFElem((-1, -1))
    z = NFElem((1, 2))
    w4 = _block_diag(
        [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
        [
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, -1, 0, 0, 0],
            [0, 0, 0, -1, 0, 0],
            [0, 0, 0, 0, -1, 0],
            [0, 0, 0, 0, 0, -1],
        ],
    )
    w27 = _block_diag(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
        [
            [-1, 0, 0, 0, 0, 0],
            [0, -1, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, -1, 0],
            [0, 0, 0, 0, 0, -1],
        ],
    )
    s2 = _block_diag(
        [
            [-HALF, -3 * HALF, 0, 0],
            [-HALF, HALF, 0, 0],
            [0, 0, -HALF, -3 * HALF],
            [0, 0, -HALF, HALF],
        ],
        [
            [-HALF, 0, 0, 0, -3 * HALF, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, -1, 0, 0, 0],
            [0, 0, 0, -1, 0, 0],
            [-HALF, 0, 0, 0, HALF, 0],
            [0, 0, 0, 0, 0, -1],
        ],
    )
    hz = z * HALF
    s3 = _block_diag(
        [
            [-HALF, 0, hz, 0],
            [0, -HALF, 0, hz],
            [hz, 0, -HALF, 0],
            [0, hz, 0, -HALF],
        ],
        [
            [zeta, 0, 0, 0, 0, 0],
            [0, zeta_inv, 0, 0, 0, 0],
            [0, 0, zeta_inv * -HALF, 0, 0, (zeta - 1) * HALF],
            [0, 0, 0, zeta, 0, 0],
            [0, 0, 0, 0, zeta, 0],
            [0, 0, (zeta - 1) * HALF, 0, 0, zeta_inv * -HALF],
        ],
    )
    return w4, w27, s2, s3


def tau3() -> ProjMatrix:
    """Central order-3 element S3 w27 S3 w27."""
    _, w27, _, s3 = b0_generators()
    return s3 * w27 * s3 * w27


@dataclass
class MatrixGroup:
    elements: List[ProjMatrix]
    generators: List[ProjMatrix]
    index: Dict[ProjMatrix, int]
    left_perms: List[Tuple[int, ...]]  # one permutation per generator

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m: ProjMatrix) -> bool:
        return m in self.index


def closure(generators: Sequence[ProjMatrix], bound: int = 10000) -> MatrixGroup:
    """Breadth-first closure under left multiplication by the generators."""
    gens = list(generators)
    ident = identity_matrix(gens[0].size)
    elements = [ident]
    index = {ident: 0}
    perms: List[List[int]] = [[] for _ in gens]
    queue = [0]
    head = 0
    while head < len(queue):
        i = queue[head]
        head += 1
        m = elements[i]
        for gi, g in enumerate(gens):
            p = g * m
            j = index.get(p)
            if j is None:
                j = len(elements)
                if j >= bound:
                    raise GroupTooLarge(f"closure exceeded {bound} elements")
                elements.append(p)
                index[p] = j
                queue.append(j)
            while len(perms[gi]) <= i:
                perms[gi].append(-1)
            perms[gi][i] = j
    left = [tuple(p) for p in perms]
    assert all(len(p) == len(elements) and -1 not in p for p in left)
    return MatrixGroup(elements, gens, index, left)


def center(group: MatrixGroup) -> MatrixGroup:
    """Elements commuting (projectively) with every generator."""
    central = [
        m
        for m in group.elements
        if all(m * g == g * m for g in group.generators)
    ]
    sub = closure(central, bound=len(group.elements) + 1)
    return sub


# -- permutation-level structure ---------------------------------------------


def _compose(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(p[x] for x in q)


def _inverse_perm(p: Tuple[int, ...]) -> Tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def perm_closure(gens: Sequence[Tuple[int, ...]], bound: int = 100000):
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    queue = [ident]
    head = 0
    while head < len(queue):
        p = queue[head]
        head += 1
        for g in gens:
            q = _compose(g, p)
            if q not in seen:
                if len(seen) >= bound:
                    raise GroupTooLarge(f"permutation closure exceeded {bound}")
                seen.add(q)
                queue.append(q)
    return queue


def _perm_order(p: Tuple[int, ...]) -> int:
    n = len(p)
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        order = lcm(order, length)
    return order


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    order_histogram: Tuple[Tuple[int, int], ...]
    center_order: int
    derived_subgroup_order: int
    abelianization_invariants: Tuple[int, ...]


def _abelian_invariants(elements, compose) -> Tuple[int, ...]:
    """Invariant factor decomposition of a finite abelian group.

    Counts elements killed by successive prime powers to recover each primary
    partition, then merges partitions into a divisor chain.
    """
    n = len(elements)
    if n == 1:
        return ()
    ident = elements[0]

    def power(x, e):
        out = ident
        b = x
        while e:
            if e & 1:
                out = compose(out, b)
            b = compose(b, b)
            e >>= 1
        return out

    factors = {}
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        factors[m] = factors.get(m, 0) + 1

    primary: Dict[int, List[int]] = {}
    for p in factors:
        # conj[j-1] = #(parts >= j) of the p-primary partition, read off from
        # the count of elements killed by p^j
        conj = []
        prev = 1
        j = 1
        while True:
            killed = sum(1 for x in elements if power(x, p ** j) == ident)
            if killed == prev:
                break
            step = killed // prev
            e = 0
            while step % p == 0:
                step //= p
                e += 1
            conj.append(e)
            prev = killed
            j += 1
        parts = []
        k = 0
        while True:
            size = sum(1 for cc in range(len(conj)) if conj[cc] > k)
            if size == 0:
                break
            parts.append(size)
            k += 1
        primary[p] = sorted(parts, reverse=True)

    width = max(len(v) for v in primary.values())
    invariants = []
    for t in range(width):
        d = 1
        for p, parts in primary.items():
            if t < len(parts):
                d *= p ** parts[t]
        invariants.append(d)
    invariants.reverse()  # ascending divisor chain d1 | d2 | ...
    return tuple(invariants)


def fingerprint_perm_group(perms: List[Tuple[int, ...]]) -> GroupFingerprint:
    n = len(perms)
    hist: Dict[int, int] = {}
    for p in perms:
        o = _perm_order(p)
        hist[o] = hist.get(o, 0) + 1
    perm_set = set(perms)
    sample = perms  # generators unknown here; commute against everything
    central = [p for p in perms if all(_compose(p, q) == _compose(q, p) for q in sample)]
    commutators = set()
    invs = {p: _inverse_perm(p) for p in perms}
    for a in perms:
        ia = invs[a]
        for b in perms:
            comm = _compose(_compose(ia, invs[b]), _compose(a, b))
            commutators.add(comm)
    derived = perm_closure(sorted(commutators), bound=n + 1)
    derived_set = set(derived)
    # abelianization: quotient by the derived subgroup
    coset_of: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
    reps = []
    for p in perms:
        if p in coset_of:
            continue
        members = sorted(_compose(d, p) for d in derived_set)
        rep = members[0]
        for q in members:
            coset_of[q] = rep
        reps.append(rep)
    reps.sort()
    reps.remove(coset_of[tuple(range(len(perms[0])))])
    reps.insert(0, coset_of[tuple(range(len(perms[0])))])

    def quot_compose(a, b):
        return coset_of[_compose(a, b)]

    invariants = _abelian_invariants(reps, quot_compose)
    return GroupFingerprint(
        order=n,
        order_histogram=tuple(sorted(hist.items())),
        center_order=len(central),
        derived_subgroup_order=len(derived),
        abelianization_invariants=invariants,
    )


def fingerprint(group: MatrixGroup) -> GroupFingerprint:
    perms = perm_closure(group.left_perms, bound=len(group.elements) + 1)
    assert len(perms) == len(group.elements)
    return fingerprint_perm_group(perms)


def reference_fingerprint() -> GroupFingerprint:
    """Fingerprint of the abstract model D6 x (C3 wr C2) on 9 points."""
    rot = (1, 2, 0) + (3, 4, 5, 6, 7, 8)
    flip = (1, 0, 2) + (3, 4, 5, 6, 7, 8)
    cyc = (0, 1, 2) + (4, 5, 3) + (6, 7, 8)
    swap = (0, 1, 2) + (6, 7, 8, 3, 4, 5)
    perms = perm_closure([rot, flip, cyc, swap], bound=200)
    assert len(perms) == 108
    return fingerprint_perm_group(perms)
