"""Solving for the new involution: the parameter ideal I_{a,b} in K[a,b].

The candidate map is a monomial matrix M(a, b) over K with two undetermined
scalars.  Substituting it into the 28 model quadrics and forcing each image
back into the quadric span yields polynomial conditions on a and b; their
reduced lex Groebner basis pins the parameters down to three points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .canon import CanonicalModel
from .errors import UnexpectedVariety
from .matgroup import ProjMatrix
from .nftower import NFElem, Z, ZETA, C

Deg = Tuple[int, int]  # (deg_a, deg_b), possibly negative before clearing

LEX_BA = "b>a"
LEX_AB = "a>b"


def _order_key(order: str):
    if order == LEX_BA:
        return lambda d: (d[1], d[0])
    if order == LEX_AB:
        return lambda d: (d[0], d[1])
    raise ValueError(f"unknown monomial order {order!r}")


def _divides(d1: Deg, d2: Deg) -> bool:
    return d1[0] <= d2[0] and d1[1] <= d2[1]


class PolyAB:
    """Polynomial in a, b with K coefficients, canonical sparse form.

    Negative exponents are tolerated transiently (Laurent form) while the
    substitution step clears denominators; cleared polynomials are ordinary.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Deg, NFElem]):
        self.terms = {d: c for d, c in terms.items() if not c.is_zero()}

    @staticmethod
    def zero() -> "PolyAB":
        return PolyAB({})

    @staticmethod
    def constant(c) -> "PolyAB":
        c = c if isinstance(c, NFElem) else NFElem.rational(c)
        return PolyAB({(0, 0): c})

    @staticmethod
    def monomial(c, da: int, db: int) -> "PolyAB":
        c = c if isinstance(c, NFElem) else NFElem.rational(c)
        return PolyAB({(da, db): c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_laurent(self) -> bool:
        return any(da < 0 or db < 0 for da, db in self.terms)

    def __add__(self, other: "PolyAB") -> "PolyAB":
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out[d] + c if d in out else c
        return PolyAB(out)

    def __neg__(self) -> "PolyAB":
        return PolyAB({d: -c for d, c in self.terms.items()})

    def __sub__(self, other: "PolyAB") -> "PolyAB":
        return self + (-other)

    def __mul__(self, other: "PolyAB") -> "PolyAB":
        out: Dict[Deg, NFElem] = {}
        for (da1, db1), c1 in self.terms.items():
            for (da2, db2), c2 in other.terms.items():
                d = (da1 + da2, db1 + db2)
                c = c1 * c2
                out[d] = out[d] + c if d in out else c
        return PolyAB(out)

    def scale(self, c) -> "PolyAB":
        c = c if isinstance(c, NFElem) else NFElem.rational(c)
        if c.is_zero():
            return PolyAB.zero()
        return PolyAB({d: c * v for d, v in self.terms.items()})

    def shift(self, da: int, db: int) -> "PolyAB":
        return PolyAB({(d[0] + da, d[1] + db): c for d, c in self.terms.items()})

    def leading(self, order: str) -> Tuple[Deg, NFElem]:
        assert self.terms, "leading term of zero"
        key = _order_key(order)
        d = max(self.terms, key=key)
        return d, self.terms[d]

    def monic(self, order: str) -> "PolyAB":
        _, lc = self.leading(order)
        return self.scale(lc.inverse())

    def evaluate(self, a_val: NFElem, b_val: NFElem) -> NFElem:
        total = NFElem.rational(0)
        for (da, db), c in self.terms.items():
            total = total + c * a_val ** da * b_val ** db
        return total

    def key(self):
        return tuple(sorted((d, c.nums, c.den) for d, c in self.terms.items()))

    def __eq__(self, other):
        return isinstance(other, PolyAB) and self.terms == other.terms

    def __hash__(self):
        return hash(self.key())

    def to_string(self, order: str = LEX_BA) -> str:
        """Readable form with K coefficients written in terms of z = sqrt(-3)."""
        if not self.terms:
            return "0"
        parts = []
        for d in sorted(self.terms, key=_order_key(order), reverse=True):
            c = self.terms[d]
            mono = _monomial_string(d)
            coeff = k_to_z_string(c)
            if mono:
                body = mono if coeff == "1" else (f"-{mono}" if coeff == "-1" else f"{_wrap(coeff)}*{mono}")
            else:
                body = coeff
            if not parts:
                parts.append(body)
            elif body.startswith("-"):
                parts.append("- " + body[1:])
            else:
                parts.append("+ " + body)
        return " ".join(parts)

    def __repr__(self):
        return f"PolyAB({self.to_string()})"


def _monomial_string(d: Deg) -> str:
    da, db = d
    bits = []
    if da:
        bits.append("a" if da == 1 else f"a^{da}")
    if db:
        bits.append("b" if db == 1 else f"b^{db}")
    return "*".join(bits)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def k_to_z_string(x: NFElem) -> str:
    """K element written on the basis 1, z (z = 2*zeta + 1)."""
    coords = x.coords_at("K")
    a, b = coords[0], coords[1]
    rat = a - b / 2
    zc = b / 2
    if zc == 0:
        return _frac_str(rat)
    zpart = "z" if zc == 1 else ("-z" if zc == -1 else f"{_frac_str(zc)}*z")
    if rat == 0:
        return zpart
    sign = " + " if zc > 0 else " - "
    zmag = zpart.lstrip("-")
    return f"{_frac_str(rat)}{sign}{zmag}"


def _wrap(s: str) -> str:
    return f"({s})" if (" " in s or "/" in s and "*" in s) else s


# -- the symbolic candidate matrix -------------------------------------------


@dataclass(frozen=True)
class LaurentMono:
    """coeff * a^deg_a * b^deg_b with coeff in K, exponents any integers."""

    coeff: NFElem
    deg_a: int
    deg_b: int

    def __post_init__(self):
        assert not self.coeff.is_zero()

    def evaluate(self, a_val: NFElem, b_val: NFElem) -> NFElem:
        return self.coeff * a_val ** self.deg_a * b_val ** self.deg_b

    def times(self, other: "LaurentMono") -> "LaurentMono":
        return LaurentMono(
            self.coeff * other.coeff,
            self.deg_a + other.deg_a,
            self.deg_b + other.deg_b,
        )


def symbolic_M() -> List[List[Optional[LaurentMono]]]:
    """The two-parameter candidate matrix; column i holds the image of e_i.

    The V block fixes e1, e4 and swaps e2, e3 with weights z^-1, z; the W
    block swaps the pairs (e5, e7), (e6, e8), (e9, e10) with weights built
    from a and b.  Any specialization squares to the identity on the nose.
    """
    one = NFElem.rational(1)
    third = NFElem.rational(Fraction(1, 3))
    m: List[List[Optional[LaurentMono]]] = [[None] * 10 for _ in range(10)]
    m[0][0] = LaurentMono(one, 0, 0)
    m[1][2] = LaurentMono(-Z * third, 0, 0)  # z^-1
    m[2][1] = LaurentMono(Z, 0, 0)
    m[3][3] = LaurentMono(one, 0, 0)
    m[4][6] = LaurentMono(-Z, 1, 0)  # -z a
    m[5][7] = LaurentMono(one, 0, 1)  # b
    m[6][4] = LaurentMono(Z * third, -1, 0)  # (-z a)^-1
    m[7][5] = LaurentMono(one, 0, -1)  # b^-1
    m[8][9] = LaurentMono(one, 1, 0)  # a
    m[9][8] = LaurentMono(one, -1, 0)  # a^-1
    return m


def specialize_matrix(m: Sequence[Sequence[Optional[LaurentMono]]], a_val: NFElem, b_val: NFElem) -> ProjMatrix:
    zero = NFElem.rational(0)
    rows = [
        [zero if e is None else e.evaluate(a_val, b_val) for e in row] for row in m
    ]
    return ProjMatrix(rows)


def _columns(m) -> List[List[Tuple[int, LaurentMono]]]:
    """Column sparse view: cols[i] = [(row, entry monomial), ...]."""
    if isinstance(m, ProjMatrix):
        cols = []
        for i in range(10):
            col = []
            for j in range(10):
                e = m.entries[j][i]
                if not e.is_zero():
                    col.append((j, LaurentMono(e, 0, 0)))
            cols.append(col)
        return cols
    cols = [[] for _ in range(10)]
    for j, row in enumerate(m):
        for i, e in enumerate(row):
            if e is not None:
                cols[i].append((j, e))
    return cols


def transform_quadric(m, quadric) -> List[PolyAB]:
    """Coefficients of Q(M x) as a 55-vector of Laurent polynomials."""
    from .refdata import monomial_index

    cols = _columns(m)
    out: List[Dict[Deg, NFElem]] = [dict() for _ in range(55)]
    for i, j, c in quadric.terms():
        c = NFElem.rational(c)
        for r1, m1 in cols[i - 1]:
            for r2, m2 in cols[j - 1]:
                prod = m1.times(m2)
                coeff = c * prod.coeff
                idx = monomial_index(min(r1, r2) + 1, max(r1, r2) + 1)
                d = (prod.deg_a, prod.deg_b)
                acc = out[idx]
                acc[d] = acc[d] + coeff if d in acc else coeff
    return [PolyAB(t) for t in out]


def condition_ideal(m, model: CanonicalModel) -> List[PolyAB]:
    """Generators of I_{a,b}: functional values of the transformed quadrics.

    Each transformed quadric is cleared of negative exponents by one global
    monomial a^s b^t, then hit with the 27 covectors that cut out the model
    span; the nonzero results (made monic, deduplicated) generate the ideal.
    """
    functionals = model.functionals()
    gens: List[PolyAB] = []
    seen = set()
    for quadric in model.quadrics:
        transformed = transform_quadric(m, quadric)
        min_a = min((d[0] for p in transformed for d in p.terms), default=0)
        min_b = min((d[1] for p in transformed for d in p.terms), default=0)
        sa, sb = max(0, -min_a), max(0, -min_b)
        cleared = [p.shift(sa, sb) for p in transformed]
        for phi in functionals:
            g = PolyAB.zero()
            for f, p in zip(phi, cleared):
                if f == 0 or p.is_zero():
                    continue
                g = g + p.scale(f)
            if g.is_zero():
                continue
            g = g.monic(LEX_BA)
            key = g.key()
            if key not in seen:
                seen.add(key)
                gens.append(g)
    return gens


# -- Buchberger ---------------------------------------------------------------


def divide(f: PolyAB, divisors: Sequence[PolyAB], order: str) -> Tuple[List[PolyAB], PolyAB]:
    """Multivariate division: f = sum q_i g_i + r with no r-term divisible."""
    key = _order_key(order)
    quotients = [PolyAB.zero() for _ in divisors]
    remainder: Dict[Deg, NFElem] = {}
    work = dict(f.terms)
    lts = [g.leading(order) for g in divisors]
    while work:
        d = max(work, key=key)
        c = work.pop(d)
        if c.is_zero():
            continue
        for i, (ltd, ltc) in enumerate(lts):
            if _divides(ltd, d):
                fac = PolyAB.monomial(c * ltc.inverse(), d[0] - ltd[0], d[1] - ltd[1])
                quotients[i] = quotients[i] + fac
                sub = fac * divisors[i]
                for dd, cc in sub.terms.items():
                    if dd == d:
                        continue
                    work[dd] = work[dd] - cc if dd in work else -cc
                    if dd in work and work[dd].is_zero():
                        del work[dd]
                break
        else:
            remainder[d] = remainder[d] + c if d in remainder else c
    return quotients, PolyAB(remainder)


def s_polynomial(f: PolyAB, g: PolyAB, order: str) -> PolyAB:
    (df, cf) = f.leading(order)
    (dg, cg) = g.leading(order)
    lcm_d = (max(df[0], dg[0]), max(df[1], dg[1]))
    mf = PolyAB.monomial(cf.inverse(), lcm_d[0] - df[0], lcm_d[1] - df[1])
    mg = PolyAB.monomial(cg.inverse(), lcm_d[0] - dg[0], lcm_d[1] - dg[1])
    return mf * f - mg * g


@dataclass(frozen=True)
class GroebnerBasis:
    polys: Tuple[PolyAB, ...]
    order: str

    def to_strings(self) -> List[str]:
        return [g.to_string(self.order) for g in self.polys]

    def reduce(self, f: PolyAB) -> PolyAB:
        _, r = divide(f, self.polys, self.order)
        return r

    def contains(self, f: PolyAB) -> bool:
        return self.reduce(f).is_zero()

    def staircase_dimension(self) -> int:
        """Number of standard monomials (the K-dimension of the quotient)."""
        lts = [g.leading(self.order)[0] for g in self.polys]
        bound_a = min((d[0] for d in lts if d[1] == 0), default=None)
        bound_b = min((d[1] for d in lts if d[0] == 0), default=None)
        assert bound_a is not None and bound_b is not None, "ideal is not zero-dimensional"
        count = 0
        for da in range(bound_a):
            for db in range(bound_b):
                if not any(_divides(d, (da, db)) for d in lts):
                    count += 1
        return count


def buchberger(gens: Sequence[PolyAB], order: str = LEX_BA) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm (product and chain
    criteria; the two-variable ideals here stay tiny)."""
    basis = [g.monic(order) for g in gens if not g.is_zero()]
    if not basis:
        return GroebnerBasis((), order)
    pairs = {(i, j) for i in range(len(basis)) for j in range(i)}
    done = set()
    while pairs:
        i, j = min(pairs)
        pairs.remove((i, j))
        done.add((i, j))
        di = basis[i].leading(order)[0]
        dj = basis[j].leading(order)[0]
        lcm_d = (max(di[0], dj[0]), max(di[1], dj[1]))
        if lcm_d == (di[0] + dj[0], di[1] + dj[1]):
            continue  # coprime leading terms
        chain = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            dk = basis[k].leading(order)[0]
            if _divides(dk, lcm_d):
                pik = (max(i, k), min(i, k))
                pjk = (max(j, k), min(j, k))
                if pik in done and pjk in done:
                    chain = True
                    break
        if chain:
            continue
        _, r = divide(s_polynomial(basis[i], basis[j], order), basis, order)
        if not r.is_zero():
            basis.append(r.monic(order))
            n = len(basis) - 1
            pairs.update((n, t) for t in range(n))
    # minimalize: drop polys whose leading term another one divides
    keep = []
    lts = [g.leading(order)[0] for g in basis]
    for i, g in enumerate(basis):
        if any(
            j != i and _divides(lts[j], lts[i]) and (lts[j] != lts[i] or j < i)
            for j in range(len(basis))
        ):
            continue
        keep.append(g)
    # fully reduce each element against the others
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        _, r = divide(g, others, order) if others else ([], g)
        assert not r.is_zero()
        reduced.append(r.monic(order))
    reduced.sort(key=lambda g: _order_key(order)(g.leading(order)[0]), reverse=True)
    gb = GroebnerBasis(tuple(reduced), order)
    for g in gens:
        assert gb.contains(g), "input generator escaped the computed basis"
    return gb


# -- reading off the solutions -------------------------------------------------


def expected_basis() -> Tuple[PolyAB, PolyAB]:
    """The target reduced basis {b - z a^2, a^3 + 1/2} (order b > a)."""
    p1 = PolyAB({(0, 1): NFElem.rational(1), (2, 0): -Z})
    p2 = PolyAB({(3, 0): NFElem.rational(1), (0, 0): NFElem.rational(Fraction(1, 2))})
    return p1, p2


def solve_u_parameters(gb: GroebnerBasis) -> List[Tuple[NFElem, NFElem]]:
    """The three (a, b) with a a cube root of -1/2 and b = z a^2.

    Demands the expected reduced-basis shape; every returned pair is checked
    against all basis elements and the degenerate a = 0 / b = 0 clearing
    artifacts are rejected.
    """
    p1, p2 = expected_basis()
    if gb.order == LEX_BA:
        if len(gb.polys) != 2 or set(gb.polys) != {p1, p2}:
            raise UnexpectedVariety(
                f"basis {[g.to_string() for g in gb.polys]} does not match the expected shape"
            )
    a0 = C * C * NFElem.rational(Fraction(-1, 2))  # -c^2/2, a cube root of -1/2
    assert a0 ** 3 == NFElem.rational(Fraction(-1, 2))
    solutions = []
    for unit in (NFElem.rational(1), ZETA, ZETA * ZETA):
        a_val = a0 * unit
        b_val = Z * a_val * a_val
        if a_val.is_zero() or b_val.is_zero():
            continue
        for g in gb.polys:
            val = g.evaluate(a_val, b_val)
            assert val.is_zero(), f"candidate ({a_val}, {b_val}) misses {g.to_string()}"
        solutions.append((a_val, b_val))
    return solutions
