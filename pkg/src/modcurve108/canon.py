"""Canonical model of the genus-10 curve in P^9 from the basis q-expansions.

The 55 products e_i e_j are weight-4 forms; a weight-4 form vanishing to
order >= 2 at every cusp is zero once its coefficients vanish through q^38,
so the degree-2 relations are the left kernel of the product coefficient
matrix.  The kernel has dimension 28 (36 would mean hyperelliptic) and an
LLL pass turns it into a short integer basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from . import linalg
from .errors import ModelMismatch
from .nftower import NFElem
from .qseries import PRECISION_FLOOR, CuspFormBasis, QSeries
from .refdata import monomial_index, monomial_pairs, quadric_to_string


@dataclass(frozen=True)
class Quadric:
    """Degree-2 form as 55 coefficients on x_i x_j, lexicographic (i, j)."""

    coeffs: Tuple

    def __post_init__(self):
        assert len(self.coeffs) == 55 and any(c != 0 for c in self.coeffs)

    def terms(self):
        for (i, j), c in zip(monomial_pairs(), self.coeffs):
            if c != 0:
                yield i, j, c

    def evaluate(self, coords: Sequence):
        """Value at a 10-tuple of field elements (exact, in their domain)."""
        total = None
        for i, j, c in self.terms():
            t = coords[i - 1] * coords[j - 1] * c
            total = t if total is None else total + t
        return total

    def to_string(self) -> str:
        return quadric_to_string(self.coeffs)


class ProjPoint:
    """Point of P^9, normalized so the first nonzero coordinate is 1."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        coords = [c if isinstance(c, NFElem) else NFElem.rational(c) for c in coords]
        assert len(coords) == 10
        lead = next((c for c in coords if not c.is_zero()), None)
        if lead is None:
            raise ValueError("projective point needs a nonzero coordinate")
        inv = lead.inverse()
        self.coords = tuple(c * inv for c in coords)

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


@dataclass
class CanonicalModel:
    quadrics: List[Quadric]
    basis: CuspFormBasis
    prec: int
    _functionals: List[List[int]] = field(default=None, repr=False)

    def coefficient_rows(self) -> List[List[int]]:
        return [[int(c) for c in q.coeffs] for q in self.quadrics]

    def functionals(self) -> List[List[int]]:
        """27 integer covectors on the 55-dim quadric space whose joint
        kernel is exactly the span of the model quadrics."""
        if self._functionals is None:
            cols = self.coefficient_rows()
            mat = [[cols[k][m] for k in range(len(cols))] for m in range(55)]
            funcs = linalg.kernel_basis(mat)
            assert len(funcs) == 55 - len(self.quadrics)
            self._functionals = funcs
        return self._functionals

    def in_span(self, vector: Sequence) -> bool:
        """Exact membership of a 55-vector (any coefficient domain) in the span."""
        for phi in self.functionals():
            total = None
            for f, v in zip(phi, vector):
                if f == 0 or v == 0:
                    continue
                t = v * f
                total = t if total is None else total + t
            if total is not None and total != 0:
                return False
        return True


def weight4_products(basis: CuspFormBasis) -> List[QSeries]:
    """The 55 products e_i e_j in monomial order."""
    return [basis.form(i) * basis.form(j) for i, j in monomial_pairs()]


def canonical_relations(basis: CuspFormBasis) -> CanonicalModel:
    """Degree-2 relations of the canonical embedding, LLL-reduced."""
    prec = basis.prec
    assert prec >= PRECISION_FLOOR
    products = weight4_products(basis)
    # rows = products, columns = coefficients of q^2 .. q^prec
    matrix = [[int(s.coeffs[n]) for n in range(2, prec + 1)] for s in products]
    kernel = linalg.kernel_basis(matrix)
    if len(kernel) != 28:
        raise ModelMismatch(f"expected 28 degree-2 relations, got {len(kernel)}")
    reduced = linalg.lll_reduce(kernel)
    quadrics = []
    for vec in reduced:
        lead = next(v for v in vec if v != 0)
        if lead < 0:
            vec = [-v for v in vec]
        quadrics.append(Quadric(tuple(vec)))
    return CanonicalModel(quadrics, basis, prec)


def hyperelliptic_guard(model: CanonicalModel) -> bool:
    """28 quadric relations rule the hyperelliptic case (36 relations) out."""
    return len(model.quadrics) == 28


_DEG3_MONOMIALS = [
    (i, j, k) for i in range(1, 11) for j in range(i, 11) for k in range(j, 11)
]
_DEG3_INDEX = {m: n for n, m in enumerate(_DEG3_MONOMIALS)}


def degree3_matrix(model: CanonicalModel) -> List[List[int]]:
    """280 x 220 coefficient matrix of {x_k * Q} over the cubic monomials."""
    rows = []
    for k in range(1, 11):
        for q in model.quadrics:
            row = [0] * len(_DEG3_MONOMIALS)
            for i, j, c in q.terms():
                mono = tuple(sorted((k, i, j)))
                row[_DEG3_INDEX[mono]] += int(c)
            rows.append(row)
    return rows


def not_trigonal_check(model: CanonicalModel) -> bool:
    """True iff the quadrics generate the expected 175-dim space of cubics.

    220 cubic monomials minus h^0(3K) = (2*3 - 1)(g - 1) = 45 for g = 10; a
    trigonal curve would force extra independent degree-3 relations and a
    smaller rank.
    """
    return linalg.rank(degree3_matrix(model)) == 175


def on_curve(point: ProjPoint, model: CanonicalModel) -> bool:
    """All 28 quadrics vanish at the point (exact)."""
    return all(q.evaluate(point.coords) == 0 for q in model.quadrics)


def cusp_infinity(basis: CuspFormBasis) -> ProjPoint:
    """The cusp at infinity: coordinates are the q^1-coefficients of the basis."""
    return ProjPoint([Fraction(s.coeffs[1]) for s in basis.e])
