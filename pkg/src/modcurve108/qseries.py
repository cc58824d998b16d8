"""Weight-2 cusp form q-expansions for level 108, built from first principles.

Two independent constructions feed the space: Dedekind eta products for the
conductor 27 and 36 newforms, and naive point counting plus the Hecke
recursion for the conductor 108 and 54 newforms.  The ten basis elements
e1..e10 are fixed integer combinations of these forms and their images under
the level-raising operators f(z) |-> n f(nz).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import InsufficientPrecision, NonIntegralWeight
from . import linalg

PRECISION_FLOOR = 38  # truncation order at which the degree-2 relations are already exact
DEFAULT_PRECISION = 150


class QSeries:
    """Truncated q-expansion with exact rational coefficients.

    coeffs[n] is the coefficient of q^n for 0 <= n <= prec; nothing is known
    beyond prec.  Ring operations truncate to the smaller precision.
    """

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Sequence, prec: int = None):
        coeffs = [Fraction(c) for c in coeffs]
        if prec is None:
            prec = len(coeffs) - 1
        assert prec >= 0
        if len(coeffs) < prec + 1:
            coeffs += [Fraction(0)] * (prec + 1 - len(coeffs))
        self.coeffs = tuple(coeffs[: prec + 1])
        self.prec = prec

    def coeff(self, n: int) -> Fraction:
        assert 0 <= n <= self.prec, f"coefficient q^{n} beyond precision {self.prec}"
        return self.coeffs[n]

    def truncate(self, prec: int) -> "QSeries":
        assert prec <= self.prec
        return QSeries(self.coeffs[: prec + 1], prec)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> List[int]:
        assert self.is_integral()
        return [int(c) for c in self.coeffs]

    def __add__(self, other):
        p = min(self.prec, other.prec)
        return QSeries([a + b for a, b in zip(self.coeffs, other.coeffs)][: p + 1], p)

    def __sub__(self, other):
        p = min(self.prec, other.prec)
        return QSeries([a - b for a, b in zip(self.coeffs, other.coeffs)][: p + 1], p)

    def __neg__(self):
        return QSeries([-a for a in self.coeffs], self.prec)

    def scale(self, s) -> "QSeries":
        s = Fraction(s)
        return QSeries([s * a for a in self.coeffs], self.prec)

    def __mul__(self, other):
        p = min(self.prec, other.prec)
        if self.is_integral() and other.is_integral():
            a = [int(c) for c in self.coeffs[: p + 1]]
            b = [int(c) for c in other.coeffs[: p + 1]]
            out = [0] * (p + 1)
            for i, ai in enumerate(a):
                if ai == 0:
                    continue
                for j in range(0, p + 1 - i):
                    bj = b[j]
                    if bj:
                        out[i + j] += ai * bj
            return QSeries(out, p)
        out = [Fraction(0)] * (p + 1)
        for i, ai in enumerate(self.coeffs[: p + 1]):
            if ai == 0:
                continue
            for j in range(0, p + 1 - i):
                bj = other.coeffs[j]
                if bj:
                    out[i + j] += ai * bj
        return QSeries(out, p)

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k (k >= 0); precision is unchanged."""
        assert k >= 0
        return QSeries([Fraction(0)] * k + list(self.coeffs), self.prec)

    def inverse(self) -> "QSeries":
        assert self.coeffs[0] != 0, "series inverse needs a unit constant term"
        inv0 = 1 / self.coeffs[0]
        out = [inv0] + [Fraction(0)] * self.prec
        for n in range(1, self.prec + 1):
            s = Fraction(0)
            for i in range(1, n + 1):
                if self.coeffs[i]:
                    s += self.coeffs[i] * out[n - i]
            out[n] = -inv0 * s
        return QSeries(out, self.prec)

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return self.inverse() ** (-e)
        result = QSeries([1], 0) if False else QSeries([Fraction(1)] + [Fraction(0)] * self.prec, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.prec == other.prec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.prec))

    def agrees_with(self, other: "QSeries") -> bool:
        p = min(self.prec, other.prec)
        return self.coeffs[: p + 1] == other.coeffs[: p + 1]

    def to_string(self) -> str:
        """Exact text form "1*q - 2*q^4 - ..." (constant terms printed bare)."""
        terms = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = c if c > 0 else -c
            coeff = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if n == 0:
                body = coeff
            elif n == 1:
                body = f"{coeff}*q"
            else:
                body = f"{coeff}*q^{n}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(("+ " if c > 0 else "- ") + body)
        if not terms:
            return "0"
        return " ".join(terms)

    def __repr__(self):
        return f"QSeries({self.to_string()} + O(q^{self.prec + 1}))"


def delta(f: QSeries, n: int) -> QSeries:
    """Level-raising operator f(z) |-> n f(nz); precision grows to n*prec."""
    assert n >= 1
    if n == 1:
        return f
    prec = n * f.prec
    out = [Fraction(0)] * (prec + 1)
    for k, c in enumerate(f.coeffs):
        if c:
            out[n * k] = n * c
    return QSeries(out, prec)


# -- eta products ----------------------------------------------------------


def _euler_product(m: int, prec: int) -> QSeries:
    """prod_{k>=1} (1 - q^(m k)) via the pentagonal number expansion."""
    out = [0] * (prec + 1)
    out[0] = 1
    j = 1
    while True:
        e1 = m * j * (3 * j - 1) // 2
        e2 = m * j * (3 * j + 1) // 2
        if e1 > prec and e2 > prec:
            break
        sign = -1 if j % 2 else 1
        if e1 <= prec:
            out[e1] += sign
        if e2 <= prec:
            out[e2] += sign
        j += 1
    return QSeries(out, prec)


def eta_product(factors: Sequence[Tuple[int, int]], prec: int) -> QSeries:
    """Expansion of prod eta(m z)^r through q^prec.

    The q^(m/24) prefactors are aggregated; their total exponent must be a
    nonnegative integer or NonIntegralWeight is raised.
    """
    total = sum(m * r for m, r in factors)
    if total % 24 != 0:
        raise NonIntegralWeight(f"leading exponent {total}/24 is not an integer")
    lead = total // 24
    if lead < 0:
        raise NonIntegralWeight("eta quotient with a pole at infinity")
    series = QSeries([Fraction(1)] + [Fraction(0)] * prec, prec)
    for m, r in factors:
        series = series * (_euler_product(m, prec) ** r)
    return series.shift(lead).truncate(prec)


# -- elliptic curves and newforms ------------------------------------------


@dataclass(frozen=True)
class EllipticCurve:
    """Long Weierstrass model y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    conductor: int

    def __post_init__(self):
        assert self.discriminant() != 0

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


E27 = EllipticCurve(0, 0, 1, 0, 0, 27)  # y^2 + y = x^3
E36 = EllipticCurve(0, 0, 0, 0, 1, 36)  # y^2 = x^3 + 1
E108 = EllipticCurve(0, 0, 0, 0, 4, 108)  # y^2 = x^3 + 4
E54_1 = EllipticCurve(1, -1, 0, 12, 8, 54)  # y^2 + xy = x^3 - x^2 + 12x + 8
E54_2 = EllipticCurve(1, -1, 1, 1, -1, 54)  # y^2 + xy + y = x^3 - x^2 + x - 1


def _affine_counts(E: EllipticCurve, p: int) -> Tuple[int, int]:
    """(#affine points, #smooth affine points) of the reduction mod p."""
    a1, a2, a3, a4, a6 = E.a1 % p, E.a2 % p, E.a3 % p, E.a4 % p, E.a6 % p
    total = 0
    smooth = 0
    if p == 2:
        pts = []
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    pts.append((x, y))
        for x, y in pts:
            total += 1
            fy = (2 * y + a1 * x + a3) % 2
            fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % 2
            if fy or fx:
                smooth += 1
        return total, smooth
    # odd p: complete the square, (2y + a1 x + a3)^2 = 4 rhs + (a1 x + a3)^2
    sq = bytearray(p)
    for t in range((p + 1) // 2):
        sq[t * t % p] = 1
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        lin = (a1 * x + a3) % p
        disc = (4 * rhs + lin * lin) % p
        if disc == 0:
            nsol = 1
        elif sq[disc]:
            nsol = 2
        else:
            nsol = 0
        total += nsol
        if nsol:
            # singular only if both partials vanish; f_y = 2y + a1 x + a3 = 0
            # forces disc = 0, so points with disc != 0 are smooth
            if disc != 0:
                smooth += nsol
            else:
                y = ((p + 1) // 2 * (-lin)) % p  # the double root
                fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % p
                if fx:
                    smooth += 1
    return total, smooth


def ec_ap(E: EllipticCurve, p: int) -> int:
    """Trace of Frobenius by naive counting; bad primes give 0 or +-1."""
    if E.conductor % p != 0:
        total, _ = _affine_counts(E, p)
        ap = p + 1 - (total + 1)
        assert ap * ap <= 4 * p, f"Hasse bound violated at p={p}"
        return ap
    _, smooth = _affine_counts(E, p)
    ap = p - (smooth + 1)
    assert ap in (-1, 0, 1), f"bad-reduction trace {ap} at p={p}"
    return ap


def _primes_up_to(n: int) -> List[int]:
    sieve = bytearray([1]) * (n + 1) if n >= 0 else bytearray()
    out = []
    if n >= 2:
        sieve = bytearray([1]) * (n + 1)
        sieve[0:2] = b"\x00\x00"
        for i in range(2, n + 1):
            if sieve[i]:
                out.append(i)
                for j in range(i * i, n + 1, i):
                    sieve[j] = 0
    return out


def newform(E: EllipticCurve, prec: int) -> QSeries:
    """q-expansion of the weight-2 newform attached to E, through q^prec.

    a_p comes from point counting; prime powers follow the Hecke recursion
    a_{p^(k+1)} = a_p a_{p^k} - p a_{p^(k-1)} away from the conductor and
    a_{p^k} = a_p^k at bad primes; general n by multiplicativity.
    """
    assert prec >= 1
    a: Dict[int, int] = {1: 1}
    for p in _primes_up_to(prec):
        ap = ec_ap(E, p)
        bad = E.conductor % p == 0
        pk = p
        prev2, prev1 = 1, ap
        k = 1
        while pk <= prec:
            a[pk] = prev1
            pk *= p
            if bad:
                prev1 = prev1 * ap
            else:
                prev2, prev1 = prev1, ap * prev1 - p * prev2
            k += 1
    coeffs = [0] * (prec + 1)
    coeffs[1] = 1
    for n in range(2, prec + 1):
        m = n
        p = 2
        while p * p <= m:
            if m % p == 0:
                pk = 1
                while m % p == 0:
                    m //= p
                    pk *= p
                coeffs[n] = a[pk] * _coeff_of(a, coeffs, m)
                break
            p += 1
        else:
            coeffs[n] = a[m]
    return QSeries(coeffs, prec)


def _coeff_of(a: Dict[int, int], coeffs: List[int], m: int) -> int:
    return a[m] if m in a else coeffs[m]


# -- the ten-element basis --------------------------------------------------


@dataclass(frozen=True)
class CuspFormBasis:
    """Basis e1..e10 of the weight-2 cusp forms of level 108.

    e1..e4 span the non-CM block V, e5..e10 the CM block W.  Every element
    except e6 has q-coefficient 1; e6 starts at 2q^2.
    """

    e: Tuple[QSeries, ...]
    prec: int

    V_INDICES = (1, 2, 3, 4)
    W_INDICES = (5, 6, 7, 8, 9, 10)

    def form(self, i: int) -> QSeries:
        assert 1 <= i <= 10
        return self.e[i - 1]


def standard_basis(prec: int = DEFAULT_PRECISION) -> CuspFormBasis:
    """The ten fixed combinations of the five newforms, truncated to prec."""
    if prec < PRECISION_FLOOR:
        raise InsufficientPrecision(
            f"precision {prec} below the exactness floor {PRECISION_FLOOR}"
        )
    f27 = eta_product([(3, 2), (9, 2)], prec)
    f36 = eta_product([(6, 4)], prec)
    f108 = newform(E108, prec)
    f54_1 = newform(E54_1, prec)
    f54_2 = newform(E54_2, prec)

    def t(s: QSeries) -> QSeries:
        return s.truncate(prec) if s.prec > prec else s

    # e3 is the plus combination and e4 the minus one: the S2 generator must
    # act on (e3, e4) by the same matrix block as on (e1, e2), which pins the
    # pairing given that the two level-54 forms have opposite T2 eigenvalues.
    e = (
        t(f54_2 - delta(f54_2, 2)),
        t(f54_2 + delta(f54_2, 2)),
        t(f54_1 + delta(f54_1, 2)),
        t(f54_1 - delta(f54_1, 2)),
        t(f27 + delta(f27, 4)),
        t(delta(f27, 2)),
        t(f36 + delta(f36, 3)),
        f108,
        t(f27 - delta(f27, 4)),
        t(f36 - delta(f36, 3)),
    )
    matrix = [[int(s.coeffs[n]) for n in range(1, prec + 1)] for s in e]
    assert linalg.rank(matrix) == 10, "basis coefficient matrix must have rank 10"
    return CuspFormBasis(e, prec)


def dump_basis(basis: CuspFormBasis) -> str:
    """Text block with one serialized series per basis element."""
    lines = [f"e{i} = {basis.form(i).to_string()}" for i in range(1, 11)]
    return "\n".join(lines) + "\n"
