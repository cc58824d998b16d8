"""Exact arithmetic in the tower Q < K = Q(zeta) < L = K(c).

zeta is a primitive cube root of unity (zeta^2 + zeta + 1 = 0), c is the real
cube root of 2 (c^3 = 2), and z := 2*zeta + 1 satisfies z^2 = -3.  Elements
are stored by exact rational coordinates on the power bases

    Q: (1,)    K: (1, zeta)    L: (1, zeta, c, zeta*c, c^2, zeta*c^2)

Every element is kept in canonical form: coordinates share one positive
denominator with content 1, and elements that happen to lie in a smaller
field of the tower are demoted to it, so equality and hashing are plain
structural comparisons.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import InvalidPrime, NonIntegral, NotSplit

Scalar = Union[int, Fraction, "NFElem"]

_LEVEL_NAMES = {1: "Q", 2: "K", 6: "L"}


def _basis_mul_table():
    # basis index k <-> zeta^(k % 2) * c^(k // 2); reduce with zeta^2 = -1 - zeta, c^3 = 2
    table = [[None] * 6 for _ in range(6)]
    for k1 in range(6):
        cp1, zp1 = divmod(k1, 2)
        for k2 in range(6):
            cp2, zp2 = divmod(k2, 2)
            cp, zp = cp1 + cp2, zp1 + zp2
            cparts = [(cp, 1)] if cp <= 2 else [(cp - 3, 2)]
            zparts = [(zp, 1)] if zp <= 1 else [(0, -1), (1, -1)]
            table[k1][k2] = tuple(
                (2 * c + z, cc * zc) for c, cc in cparts for z, zc in zparts
            )
    return table


_MUL = _basis_mul_table()


class NFElem:
    """Immutable element of Q, K = Q(zeta) or L = K(c), exact coordinates."""

    __slots__ = ("nums", "den")

    def __init__(self, nums: Sequence[int], den: int = 1, _canonical: bool = False):
        if _canonical:
            self.nums = tuple(nums)
            self.den = den
            return
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        nums = list(nums)
        assert len(nums) in (1, 2, 6), "coords must have length 1, 2 or 6"
        if den < 0:
            den = -den
            nums = [-n for n in nums]
        g = den
        for n in nums:
            g = gcd(g, n)
        if g > 1:
            den //= g
            nums = [n // g for n in nums]
        if len(nums) == 6 and not any(nums[2:]):
            nums = nums[:2]
        if len(nums) == 2 and nums[1] == 0:
            nums = nums[:1]
        self.nums = tuple(nums)
        self.den = den

    # -- constructors ----------------------------------------------------

    @staticmethod
    def rational(x) -> "NFElem":
        q = Fraction(x)
        return NFElem((q.numerator,), q.denominator)

    @staticmethod
    def from_coords(coords: Iterable) -> "NFElem":
        fracs = [Fraction(x) for x in coords]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        return NFElem([int(f * den) for f in fracs], den)

    # -- structure -------------------------------------------------------

    @property
    def level(self) -> str:
        return _LEVEL_NAMES[len(self.nums)]

    @property
    def coords(self):
        return tuple(Fraction(n, self.den) for n in self.nums)

    def coords_at(self, level: str):
        """Coordinates on the power basis of the requested (>=) level."""
        size = {"Q": 1, "K": 2, "L": 6}[level]
        assert size >= len(self.nums), "cannot view an element at a smaller field"
        ext = self.nums + (0,) * (size - len(self.nums))
        return tuple(Fraction(n, self.den) for n in ext)

    def is_zero(self) -> bool:
        return self.nums == (0,)

    def __bool__(self) -> bool:
        return self.nums != (0,)

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "NFElem":
        if isinstance(x, NFElem):
            return x
        if isinstance(x, (int, Fraction)):
            return NFElem.rational(x)
        return NotImplemented

    def __add__(self, other):
        o = NFElem._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.nums, o.nums
        if len(a) < len(b):
            a = a + (0,) * (len(b) - len(a))
        elif len(b) < len(a):
            b = b + (0,) * (len(a) - len(b))
        da, db = self.den, o.den
        if da == db:
            return NFElem([x + y for x, y in zip(a, b)], da)
        return NFElem([x * db + y * da for x, y in zip(a, b)], da * db)

    __radd__ = __add__

    def __neg__(self):
        return NFElem(tuple(-n for n in self.nums), self.den, _canonical=True)

    def __sub__(self, other):
        o = NFElem._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = NFElem._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.nums, o.nums
        if len(a) == 1:
            if a[0] == 0:
                return ZERO
            return NFElem([a[0] * y for y in b], self.den * o.den)
        if len(b) == 1:
            if b[0] == 0:
                return ZERO
            return NFElem([b[0] * x for x in a], self.den * o.den)
        size = max(len(a), len(b))
        res = [0] * size
        for k1, x in enumerate(a):
            if x == 0:
                continue
            row = _MUL[k1]
            for k2, y in enumerate(b):
                if y == 0:
                    continue
                xy = x * y
                for k, s in row[k2]:
                    res[k] += s * xy
        return NFElem(res, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = len(self.nums)
        if n == 1:
            return NFElem((self.den,), self.nums[0])
        # solve (mult-by-self) v = 1 over Q on the power basis
        cols = []
        for j in range(n):
            unit = NFElem(tuple(1 if i == j else 0 for i in range(n)), 1, _canonical=True)
            cols.append((self * unit).coords_at(self.level))
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [Fraction(1)] + [Fraction(0)] * (n - 1)
        sol = _solve_fraction_system(mat, rhs)
        return NFElem.from_coords(sol)

    def __truediv__(self, other):
        o = NFElem._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = NFElem._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        o = NFElem._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.nums == o.nums and self.den == o.den

    def __hash__(self):
        return hash((self.nums, self.den))

    # -- Galois / reduction ----------------------------------------------

    def sigma(self) -> "NFElem":
        """The K-automorphism of L with c |-> zeta*c (order 3, fixes K)."""
        if len(self.nums) < 6:
            return self
        res = [0] * 6
        for k, n in enumerate(self.nums):
            if n == 0:
                continue
            cp, zp = divmod(k, 2)
            e = (zp + cp) % 3
            if e == 2:  # zeta^2 = -1 - zeta
                res[2 * cp] -= n
                res[2 * cp + 1] -= n
            else:
                res[2 * cp + e] += n
        return NFElem(res, self.den)

    # -- serialization ---------------------------------------------------

    def __str__(self):
        if len(self.nums) == 1:
            return f"{self.nums[0]}/{self.den}"
        parts = []
        for n in self.nums:
            q = Fraction(n, self.den)
            parts.append(f"{q.numerator}/{q.denominator}")
        return "[" + ", ".join(parts) + "]"

    def __repr__(self):
        return f"NFElem({self})"


def _solve_fraction_system(mat, rhs):
    """Gaussian elimination over Fraction for a small square system."""
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular multiplication matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / Fraction(a[col][col])
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


ZERO = NFElem((0,), 1, _canonical=True)
ONE = NFElem((1,), 1, _canonical=True)
ZETA = NFElem((0, 1), 1, _canonical=True)
C = NFElem((0, 0, 1, 0, 0, 0), 1, _canonical=True)
Z = NFElem((1, 2), 1, _canonical=True)  # z = 2*zeta + 1, z^2 = -3


def nf_arith(kind: str, x: Scalar, y: Scalar) -> NFElem:
    x = NFElem._coerce(x)
    y = NFElem._coerce(y)
    if kind == "add":
        return x + y
    if kind == "sub":
        return x - y
    if kind == "mul":
        return x * y
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def nf_inverse(x: Scalar) -> NFElem:
    return NFElem._coerce(x).inverse()


def galois_sigma(x: Scalar) -> NFElem:
    return NFElem._coerce(x).sigma()


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def parse_nfelem(s: str) -> NFElem:
    """Inverse of str(NFElem): "n/d" or "[n1/d, n2/d, ...]"."""
    s = s.strip()
    if s.startswith("["):
        assert s.endswith("]"), f"malformed coordinate vector {s!r}"
        parts = [Fraction(t) for t in s[1:-1].split(",")]
        assert len(parts) in (2, 6), "coordinate vector must have length 2 or 6"
        return NFElem.from_coords(parts)
    return NFElem.rational(Fraction(s))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def is_split(p: int) -> bool:
    """True iff p splits completely in L, i.e. p = 1 mod 3 and 2 is a cube mod p."""
    if p in (2, 3) or not is_prime(p):
        raise InvalidPrime(f"{p} is not a prime > 3")
    return p % 3 == 1 and pow(2, (p - 1) // 3, p) == 1


class ResidueMap:
    """Reduction L -> F_p at a completely split prime, fixed by root images."""

    __slots__ = ("p", "zeta_image", "c_image", "_basis_images")

    def __init__(self, p: int, zeta_image: int, c_image: int):
        assert (zeta_image * zeta_image + zeta_image + 1) % p == 0
        assert pow(c_image, 3, p) == 2 % p
        self.p = p
        self.zeta_image = zeta_image
        self.c_image = c_image
        self._basis_images = tuple(
            pow(zeta_image, k % 2, p) * pow(c_image, k // 2, p) % p for k in range(6)
        )

    def apply(self, x: Scalar) -> int:
        x = NFElem._coerce(x)
        if x.den % self.p == 0:
            raise NonIntegral(f"denominator {x.den} divisible by {self.p}")
        dinv = pow(x.den, -1, self.p)
        total = 0
        for k, n in enumerate(x.nums):
            total += n * self._basis_images[k]
        return total * dinv % self.p

    def __repr__(self):
        return f"ResidueMap(p={self.p}, zeta->{self.zeta_image}, c->{self.c_image})"


def residue_map(p: int) -> ResidueMap:
    """Smallest valid root pair (deterministic); NotSplit if p is inert anywhere."""
    if not is_split(p):
        raise NotSplit(f"{p} does not split completely in Q(zeta, cbrt 2)")
    zeta_image = next(r for r in range(2, p) if (r * r + r + 1) % p == 0)
    c_image = next(s for s in range(2, p) if pow(s, 3, p) == 2 % p)
    return ResidueMap(p, zeta_image, c_image)


def all_residue_maps(p: int):
    """All root-pair choices at p (6 = 2 zeta roots x 3 c roots when split)."""
    if not is_split(p):
        raise NotSplit(f"{p} does not split completely in Q(zeta, cbrt 2)")
    zs = [r for r in range(2, p) if (r * r + r + 1) % p == 0]
    cs = [s for s in range(2, p) if pow(s, 3, p) == 2 % p]
    return [ResidueMap(p, r, s) for r in zs for s in cs]
