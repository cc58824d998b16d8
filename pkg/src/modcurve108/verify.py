"""End-to-end verification: the involution, its relations, the 216-element
group, cusps, the differential action, and the reduction mod split primes.

Everything in characteristic 0 is exact NFElem arithmetic; the mod-p suite
reduces the same objects through a ResidueMap and the fixed-point census
enumerates projectivized eigenspaces over F_p with integer numpy arrays.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .canon import CanonicalModel, ProjPoint, cusp_infinity, on_curve
from .errors import ModelMismatch, NotAnAutomorphism, NotSplit
from .ideals import specialize_matrix, symbolic_M
from .matgroup import (
    MatrixGroup,
    ProjMatrix,
    b0_generators,
    closure,
    identity_matrix,
    tau3,
)
from .nftower import NFElem, ResidueMap, is_split, residue_map
from .refdata import monomial_index


# -- report ------------------------------------------------------------------


@dataclass
class VerificationReport:
    entries: Dict[str, dict] = field(default_factory=dict)

    def add(self, check_id: str, status, witness=None, claim: str = ""):
        assert check_id not in self.entries, f"duplicate check id {check_id}"
        if isinstance(status, bool):
            status = "pass" if status else "fail"
        self.entries[check_id] = {
            "check_id": check_id,
            "status": status,
            "witness": witness,
            "claim": claim,
        }

    @property
    def all_passed(self) -> bool:
        return all(
            e["status"] in ("pass", "value") for e in self.entries.values()
        )

    def failed_ids(self) -> List[str]:
        return [k for k, e in self.entries.items() if e["status"] == "fail"]

    def to_json(self) -> str:
        return json.dumps({"checks": list(self.entries.values())}, indent=2)

    def to_text(self) -> str:
        lines = []
        for e in self.entries.values():
            status = e["status"].upper()
            w = e["witness"]
            tail = f"  [{w}]" if w is not None and not isinstance(w, (dict, list)) else ""
            lines.append(f"{status:5s}  {e['check_id']}{tail}")
        return "\n".join(lines) + "\n"


# -- the involution -----------------------------------------------------------


def transform_quadric_vector(mat: ProjMatrix, quadric) -> List[NFElem]:
    """55-vector of Q(M x) coefficients for a constant projective matrix."""
    zero = NFElem.rational(0)
    cols: List[List[Tuple[int, NFElem]]] = []
    for i in range(10):
        cols.append(
            [(j, mat.entries[j][i]) for j in range(10) if not mat.entries[j][i].is_zero()]
        )
    out = [zero] * 55
    for i, j, c in quadric.terms():
        c = Fraction(c)
        for r1, x1 in cols[i - 1]:
            for r2, x2 in cols[j - 1]:
                idx = monomial_index(min(r1, r2) + 1, max(r1, r2) + 1)
                out[idx] = out[idx] + x1 * x2 * c
    return out


def preserves_model(mat: ProjMatrix, model: CanonicalModel) -> bool:
    """Exact check that substitution by mat maps the quadric span into itself."""
    return all(
        model.in_span(transform_quadric_vector(mat, q)) for q in model.quadrics
    )


def specialize_u(a_val: NFElem, model: CanonicalModel) -> ProjMatrix:
    """The involution matrix M(a, z a^2) over L, verified on the model."""
    from .nftower import Z

    b_val = Z * a_val * a_val
    u = specialize_matrix(symbolic_M(), a_val, b_val)
    if not preserves_model(u, model):
        raise NotAnAutomorphism(f"specialization at a={a_val} moves the quadric span")
    return u


def theorem_map_matrix() -> ProjMatrix:
    """The published coordinate map assembled directly from its table."""
    from .nftower import parse_nfelem, C, Z

    one = NFElem.rational(1)
    zinv = Z.inverse()
    cinv = C.inverse()
    coeffs = {
        1: (1, one),
        2: (3, Z),
        3: (2, zinv),
        4: (4, one),
        5: (7, C * zinv),
        6: (8, C * C * zinv),
        7: (5, Z * cinv),
        8: (6, Z * cinv * cinv),
        9: (10, -C),
        10: (9, -cinv),
    }
    zero = NFElem.rational(0)
    rows = [[zero] * 10 for _ in range(10)]
    # x_i' = coeff * x_source means the matrix entry M[source][i] = coeff
    for i, (src, cf) in coeffs.items():
        rows[src - 1][i - 1] = cf
    return ProjMatrix(rows)


def check_involution(u: ProjMatrix, model: CanonicalModel, report: VerificationReport):
    ident = identity_matrix()
    report.add(
        "u_square_identity",
        u * u == ident,
        claim="the new map has projective order 2",
    )
    report.add(
        "u_preserves_model",
        preserves_model(u, model),
        claim="substituting the map into each quadric stays inside the relation span",
    )
    report.add(
        "u_matches_known_map",
        u == theorem_map_matrix(),
        claim="the solved branch reproduces the published coordinate map",
    )


def check_conjugation_relations(u: ProjMatrix, report: VerificationReport, tag: str = ""):
    """The four conjugacy identities, u^2 = 1 and the sigma twist.

    On branches differing from u by a central tau3 power, the S2/S3 identities
    pick up tau3 factors; the returned twists record which power occurred.
    """
    w4, w27, s2, s3 = b0_generators()
    t3 = tau3()
    t = tag + "_" if tag else ""
    powers = {0: identity_matrix(), 1: t3, 2: t3 * t3}

    def twist_of(lhs: ProjMatrix, rhs: ProjMatrix) -> Optional[int]:
        for k, tk in powers.items():
            if lhs == rhs * tk:
                return k
        return None

    report.add(
        f"{t}conj_w4",
        u * w4 * u == w27,
        claim="conjugation by the involution swaps the two Atkin-Lehner involutions (w4 -> w27)",
    )
    report.add(
        f"{t}conj_w27",
        u * w27 * u == w4,
        claim="conjugation by the involution swaps the two Atkin-Lehner involutions (w27 -> w4)",
    )
    rhs_s2 = s3 * w27 * s3.inverse()
    alt_s2 = s3.inverse() * t3.inverse() * w27
    report.add(
        "s2_target_forms_agree" if not tag else f"{t}s2_target_forms_agree",
        rhs_s2 == alt_s2,
        claim="the two closed forms of the conjugate of S2 coincide",
    )
    tw2 = twist_of(u * s2 * u, rhs_s2)
    report.add(
        f"{t}conj_s2",
        tw2 is not None,
        witness={"tau3_power": tw2},
        claim="u S2 u equals S3 w27 S3^-1 up to a central cube factor",
    )
    # The conjugate of S3 is the product of w4 and S2 (which do not commute)
    # times the central tau3; only the w4-first ordering is consistent with
    # conjugation by u squaring to the identity, and the computation below
    # confirms it.  The matched ordering is recorded in the witness.
    lhs_s3 = u * s3 * u
    tw3 = twist_of(lhs_s3, w4 * s2 * t3)
    tw3_alt = twist_of(lhs_s3, s2 * w4 * t3)
    report.add(
        f"{t}conj_s3",
        tw3 is not None,
        witness={"tau3_power": tw3, "ordering": "w4*s2", "s2_first_ordering_power": tw3_alt},
        claim="u S3 u equals the w4, S2 product times tau3 up to a central cube factor",
    )
    usigma = u.sigma()
    uinv = u.inverse()
    report.add(
        f"{t}sigma_twist",
        usigma * uinv == t3,
        claim="the Galois twist u^sigma u^-1 is the central order-3 element",
    )
    report.add(
        f"{t}sigma_twist_squared",
        usigma.sigma() * uinv == t3 * t3,
        claim="the other Galois generator twists by the inverse central element",
    )
    return tw2, tw3


# -- the full group -----------------------------------------------------------


def full_group(u: ProjMatrix, bound: int = 10000) -> MatrixGroup:
    w4, w27, s2, s3 = b0_generators()
    return closure([w4, w27, s2, s3, u], bound=bound)


def check_full_group(
    u: ProjMatrix,
    model: CanonicalModel,
    b0: MatrixGroup,
    report: VerificationReport,
) -> MatrixGroup:
    aut = full_group(u)
    report.add(
        "aut_order_216",
        aut.order == 216,
        witness=aut.order,
        claim="adjoining the involution doubles the modular group to 216 elements",
    )
    inside = all(m in aut for m in b0.elements)
    report.add(
        "b0_is_index_2",
        inside and aut.order == 2 * b0.order,
        claim="the modular subgroup sits inside with index 2",
    )
    bad = [i for i, m in enumerate(aut.elements) if not preserves_model(m, model)]
    report.add(
        "all_preserve_model",
        not bad,
        witness={"failures": bad},
        claim="all 216 projective matrices map the quadric span to itself",
    )
    t3 = tau3()
    coset = [m for m in aut.elements if m not in b0.index]
    twisted = all(m.sigma() * m.inverse() == t3 for m in coset)
    report.add(
        "coset_sigma_twist",
        len(coset) == 108 and twisted,
        claim="every element outside the modular subgroup twists by tau3 under sigma",
    )
    zero_diag = all(
        all(m.entries[i][i].is_zero() for i in range(4, 10)) for m in coset
    )
    report.add(
        "coset_w_block_offdiagonal",
        zero_diag,
        claim="coset elements swap the two cube-root eigenblocks, so their W diagonal vanishes",
    )
    return aut


# -- cusps ---------------------------------------------------------------------


@dataclass
class CuspSet:
    points: Tuple[ProjPoint, ...]

    def __contains__(self, p: ProjPoint) -> bool:
        return p in set(self.points)

    def __len__(self):
        return len(self.points)


def cusp_count_formula(n: int = 108) -> int:
    """Number of cusps: sum over d | n of phi(gcd(d, n/d))."""

    def phi(m):
        out = 1
        d = 2
        mm = m
        while d * d <= mm:
            if mm % d == 0:
                out *= d - 1
                mm //= d
                while mm % d == 0:
                    out *= d
                    mm //= d
            d += 1
        if mm > 1:
            out *= mm - 1
        return out

    return sum(phi(gcd(d, n // d)) for d in range(1, n + 1) if n % d == 0)


def cusp_orbit(model: CanonicalModel) -> CuspSet:
    """Orbit of the cusp at infinity under the four generators."""
    gens = b0_generators()
    start = cusp_infinity(model.basis)
    seen = {start}
    queue = [start]
    head = 0
    while head < len(queue):
        p = queue[head]
        head += 1
        for g in gens:
            q = ProjPoint(g.apply_to_point(p.coords))
            if q not in seen:
                seen.add(q)
                queue.append(q)
    for p in queue:
        if not on_curve(p, model):
            raise ModelMismatch(f"orbit point {p} is off the curve")
    return CuspSet(tuple(queue))


def check_cusps(u: ProjMatrix, model: CanonicalModel, report: VerificationReport):
    cusps = cusp_orbit(model)
    report.add(
        "cusp_orbit_size",
        len(cusps) == cusp_count_formula(108),
        witness=len(cusps),
        claim="the orbit of the infinity cusp has the full cusp count 18",
    )
    images = [ProjPoint(u.apply_to_point(p.coords)) for p in cusps.points]
    on_model = all(on_curve(q, model) for q in images)
    disjoint = not (set(images) & set(cusps.points))
    report.add(
        "cusps_on_curve",
        True,
        claim="every orbit point satisfies all 28 quadrics (checked during orbit construction)",
    )
    report.add(
        "u_images_on_curve",
        on_model,
        claim="the involution maps cusps to points of the curve",
    )
    report.add(
        "u_moves_all_cusps",
        disjoint,
        claim="the involution image of the cusp set is disjoint from it",
    )
    return cusps


# -- differential action --------------------------------------------------------


def char_poly(entries: Sequence[Sequence[NFElem]]) -> List[NFElem]:
    """Coefficients [1, c_{n-1}, ..., c_0] of det(xI - M), Faddeev-LeVerrier."""
    n = len(entries)
    a = [list(row) for row in entries]
    zero = NFElem.rational(0)
    one = NFElem.rational(1)
    mk = [[one if i == j else zero for j in range(n)] for i in range(n)]
    coeffs = [one]
    for k in range(1, n + 1):
        mk = linalg.mat_mul(a, mk)
        tr = zero
        for i in range(n):
            tr = tr + mk[i][i]
        ck = tr * NFElem.rational(Fraction(-1, k))
        coeffs.append(ck)
        for i in range(n):
            mk[i][i] = mk[i][i] + ck
    return coeffs


def _pm_one_poly(m_plus: int, m_minus: int) -> List[Fraction]:
    """Coefficients of (x - 1)^m_plus (x + 1)^m_minus, descending powers."""
    poly = [Fraction(1)]
    for root in [1] * m_plus + [-1] * m_minus:
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] += c
            nxt[i + 1] += -root * c
        poly = nxt
    return poly


def differential_action(u: ProjMatrix, report: VerificationReport):
    """Eigenvalue multiplicities of the involution matrix and the genus count.

    The pullback on differentials is the matrix up to sign; for each sign the
    +1 eigenspace dimension is a candidate quotient genus g_Y and the degree-2
    Hurwitz formula gives r = 18 - 2(2 g_Y - 2) ramification points.  Only one
    sign admits r >= 0.
    """
    n = u.size
    rows = [list(r) for r in u.entries]
    ident = identity_matrix(n).entries
    minus = [[rows[i][j] - ident[i][j] for j in range(n)] for i in range(n)]
    plus = [[rows[i][j] + ident[i][j] for j in range(n)] for i in range(n)]
    m_plus = n - linalg.rank(minus)
    m_minus = n - linalg.rank(plus)
    report.add(
        "eigenvalue_multiplicities",
        (m_plus, m_minus) == (6, 4),
        witness={"plus_one": m_plus, "minus_one": m_minus},
        claim="the involution matrix has eigenvalue +1 with multiplicity 6 and -1 with multiplicity 4",
    )
    cp = char_poly(rows)
    expected = _pm_one_poly(m_plus, m_minus)
    report.add(
        "charpoly_consistent",
        all(c == e for c, e in zip(cp, expected)),
        claim="the characteristic polynomial is exactly (x-1)^6 (x+1)^4",
    )
    hurwitz = {}
    for sign, g_y in (("+M", m_plus), ("-M", m_minus)):
        r = (2 * 10 - 2) - 2 * (2 * g_y - 2)
        hurwitz[sign] = {"g_Y": g_y, "r": r, "admissible": r >= 0}
    report.add(
        "hurwitz_sign_selection",
        hurwitz["+M"]["r"] == -2 and hurwitz["-M"] == {"g_Y": 4, "r": 6, "admissible": True},
        witness=hurwitz,
        claim="acting by +M forces r = -2 (impossible); the -M action gives genus 4 and r = 6",
    )
    return hurwitz


# -- mod-p suite -----------------------------------------------------------------


def _reduce_matrix(mat: ProjMatrix, rm: ResidueMap) -> Tuple[Tuple[int, ...], ...]:
    p = rm.p
    flat = [[rm.apply(x) for x in row] for row in mat.entries]
    lead = next(x for row in flat for x in row if x)
    inv = pow(lead, -1, p)
    return tuple(tuple(x * inv % p for x in row) for row in flat)


def _right_nullspace_mod_p(rows: List[List[int]], p: int) -> List[List[int]]:
    transpose = [[rows[i][j] for i in range(len(rows))] for j in range(len(rows[0]))]
    return linalg.kernel_basis_mod_p(transpose, p)


def _transform_quadrics_mod_p(mat, quad_terms, p: int) -> np.ndarray:
    """Rows Q(M x) mod p for every quadric, via sparse substitution."""
    cols = [[(j, mat[j][i]) for j in range(10) if mat[j][i]] for i in range(10)]
    out = np.zeros((len(quad_terms), 55), dtype=np.int64)
    for qi, terms in enumerate(quad_terms):
        row = out[qi]
        for i, j, c in terms:
            for r1, x1 in cols[i - 1]:
                for r2, x2 in cols[j - 1]:
                    idx = monomial_index(min(r1, r2) + 1, max(r1, r2) + 1)
                    row[idx] = (row[idx] + c * x1 * x2) % p
    return out


def _census_block(basis: np.ndarray, quad_terms, p: int, lead: int, start: int, stop: int):
    """Scan parameter indices [start, stop) of the block with t[lead] = 1."""
    d = basis.shape[0]
    free = d - 1 - lead
    found = []
    chunk = 1 << 20
    for lo in range(start, stop, chunk):
        hi = min(lo + chunk, stop)
        ids = np.arange(lo, hi, dtype=np.int64)
        t = np.zeros((hi - lo, d), dtype=np.int64)
        t[:, lead] = 1
        rest = ids
        for k in range(free):
            t[:, lead + 1 + k] = rest % p
            rest = rest // p
        x = t @ basis % p
        alive = np.ones(hi - lo, dtype=bool)
        for terms in quad_terms:
            vals = np.zeros(int(alive.sum()), dtype=np.int64)
            xa = x[alive]
            for i, j, c in terms:
                vals += c * xa[:, i - 1] * xa[:, j - 1]
            sub = vals % p == 0
            idx = np.flatnonzero(alive)
            alive[idx[~sub]] = False
            if not alive.any():
                break
        for row in x[alive]:
            found.append(tuple(int(v) for v in row))
    return found


def _census_eigenspace(basis_rows: List[List[int]], quad_terms, p: int, threads: int = 1):
    """All points of the projectivized eigenspace lying on all quadrics."""
    basis = np.array(basis_rows, dtype=np.int64) % p
    d = basis.shape[0]
    points = []
    for lead in range(d):
        total = p ** (d - 1 - lead)
        if threads > 1 and total >= 1 << 21:
            import multiprocessing as mp

            step = (total + threads - 1) // threads
            args = [
                (basis, quad_terms, p, lead, s, min(s + step, total))
                for s in range(0, total, step)
            ]
            with mp.Pool(threads) as pool:
                for chunk in pool.starmap(_census_block, args):
                    points.extend(chunk)
        else:
            points.extend(_census_block(basis, quad_terms, p, lead, 0, total))
    normalized = []
    for pt in points:
        leadv = next(v for v in pt if v)
        inv = pow(leadv, -1, p)
        normalized.append(tuple(v * inv % p for v in pt))
    assert len(set(normalized)) == len(normalized)
    return normalized


def default_thread_count() -> int:
    try:
        return max(1, int(os.environ.get("MODCURVE_THREADS", "1")))
    except ValueError:
        return 1


def mod_p_suite(
    p: int,
    model: CanonicalModel,
    aut: MatrixGroup,
    u: ProjMatrix,
    report: VerificationReport,
    census: Optional[bool] = None,
    threads: Optional[int] = None,
):
    """Reduction of the model and all 216 automorphisms at a split prime.

    census defaults to running only at p = 31; the projectivized eigenspace
    P^5(F_p) grows like p^5 and larger split primes blow the time budget.
    """
    if not is_split(p):
        raise NotSplit(f"{p} does not split completely")
    if census is None:
        census = p == 31
    if threads is None:
        threads = default_thread_count()
    rm = residue_map(p)
    quads = [[int(c) % p for c in q.coeffs] for q in model.quadrics]
    quad_terms = [
        [(i, j, int(c) % p) for i, j, c in q.terms()] for q in model.quadrics
    ]
    reduced = [_reduce_matrix(m, rm) for m in aut.elements]
    report.add(
        f"modp_{p}_distinct",
        len(set(reduced)) == len(aut.elements) == 216,
        witness=len(set(reduced)),
        claim="all 216 automorphisms stay pairwise distinct after reduction",
    )
    quad_cols = [[quads[q][m] for q in range(len(quads))] for m in range(55)]
    functionals = linalg.kernel_basis_mod_p(quad_cols, p)
    report.add(
        f"modp_{p}_functional_count",
        len(functionals) == 27,
        witness=len(functionals),
        claim="the reduced quadrics still span a 28-dimensional space",
    )
    fmat = np.array(functionals, dtype=np.int64)
    bad = []
    for k, mat in enumerate(reduced):
        timg = _transform_quadrics_mod_p(mat, quad_terms, p)
        if ((fmat @ timg.T) % p).any():
            bad.append(k)
    report.add(
        f"modp_{p}_span_preserved",
        not bad,
        witness={"failures": bad},
        claim="every reduced automorphism preserves the reduced quadric span",
    )
    if census:
        urt = [list(row) for row in zip(*_reduce_matrix(u, rm))]  # transpose: point action
        eig = {}
        for name, shift in (("plus", -1), ("minus", 1)):
            mat = [
                [(urt[i][j] + (shift if i == j else 0)) % p for j in range(10)]
                for i in range(10)
            ]
            eig[name] = _right_nullspace_mod_p(mat, p)
        report.add(
            f"modp_{p}_eigenspace_dims",
            (len(eig["plus"]), len(eig["minus"])) == (6, 4),
            witness={k: len(v) for k, v in eig.items()},
            claim="the reduced involution keeps eigenspace dimensions 6 and 4",
        )
        fixed = []
        for name in ("minus", "plus"):
            fixed.extend(_census_eigenspace(eig[name], quad_terms, p, threads=threads))
        assert len(set(fixed)) == len(fixed)
        report.add(
            f"modp_{p}_fixed_point_census",
            "value",
            witness={"count": len(fixed), "points": [list(pt) for pt in sorted(fixed)]},
            claim="fixed points of the involution on the reduced curve, by exhaustive eigenspace scan",
        )
        return len(fixed)
    return None
