"""Ground-truth data for the canonical model and the new involution.

The 28 quadrics below define the curve in P^9 in the coordinates x1..x10
attached to the basis e1..e10; the span (not the listing) is what the
pipeline reproduces.  The involution data is the target coordinate map used
to cross-check the solved parameter branch.
"""

from __future__ import annotations

import re
from typing import List, Tuple

KNOWN_QUADRICS_TEXT = """\
x3*x4 + x6*x9 - x5*x10
x1*x2 - x6*x9 - x5*x10
x2*x6 - x3*x7 + x1*x10
x4*x5 - x1*x8 + x6*x10
x1*x8 - x3*x9 + x6*x10
x4*x6 + x1*x7 - x3*x10
x4*x7 - 2*x8*x9 + x2*x10
x3*x7 - 2*x5*x8 + x1*x10
x2*x5 - 2*x3*x8 + x1*x9
x2*x5 - 2*x6*x7 - x1*x9
x2*x4 + x7*x9 - 2*x8*x10
x1*x7 - 2*x5*x9 + x3*x10
x2*x3 - x5*x7 - 2*x6*x8
x2*x3 + x1*x4 - 2*x5*x7
x7^2 - x2*x8 - x4*x9 + x10^2
x1^2 - x3^2 + 2*x5*x6
3*x1*x5 - 2*x4*x8 - x2*x9
3*x6^2 - x7^2 + x10^2
3*x1*x3 - x7*x9 - 2*x8*x10
3*x1*x6 + x4*x7 - x2*x10
3*x3*x6 - x2*x7 + x4*x10
3*x3*x5 - x7^2 - x2*x8 - x10^2
3*x1^2 - x4^2 - 2*x9*x10
x2^2 - 3*x3^2 + 2*x9*x10
x2^2 + x4^2 - 4*x7*x8 + 2*x9*x10
x2*x7 - 4*x8^2 + 2*x9^2 + x4*x10
x4*x8 + x2*x9 - 2*x7*x10
3*x5^2 - x2*x7 - x9^2 - x4*x10
"""

# Coordinate map of the order-2 involution on the model, entries over L:
# x_i |-> coefficient * x_{source}.  z = 2*zeta + 1, c = cbrt(2).
KNOWN_INVOLUTION_MAP = (
    (1, "1"),
    (3, "z"),
    (2, "1/z"),
    (4, "1"),
    (7, "c/z"),
    (8, "c^2/z"),
    (5, "z/c"),
    (6, "z/c^2"),
    (10, "-c"),
    (9, "-1/c"),
)


def monomial_index(i: int, j: int) -> int:
    """Index of x_i x_j (1 <= i <= j <= 10) in lexicographic (i, j) order."""
    assert 1 <= i <= j <= 10
    return (i - 1) * 11 - (i - 1) * i // 2 + (j - i)


def monomial_pairs() -> List[Tuple[int, int]]:
    return [(i, j) for i in range(1, 11) for j in range(i, 11)]


_TERM_RE = re.compile(
    r"(?P<sign>[+-]?)\s*(?P<coeff>\d+)?\s*\*?\s*x(?P<i>\d+)(?:\s*(?:\*\s*x(?P<j>\d+)|\^(?P<sq>2)))?"
)


def parse_quadric(line: str) -> List[int]:
    """55-vector of integer coefficients from a polynomial string."""
    coeffs = [0] * 55
    pos = 0
    line = line.strip()
    while pos < len(line):
        m = _TERM_RE.match(line, pos)
        assert m, f"cannot parse quadric term at {line[pos:]!r}"
        sign = -1 if m.group("sign") == "-" else 1
        coeff = int(m.group("coeff") or 1)
        i = int(m.group("i"))
        if m.group("j"):
            j = int(m.group("j"))
        elif m.group("sq"):
            j = i
        else:
            raise AssertionError(f"non-quadratic term in {line!r}")
        a, b = min(i, j), max(i, j)
        coeffs[monomial_index(a, b)] += sign * coeff
        pos = m.end()
        while pos < len(line) and line[pos] == " ":
            pos += 1
    assert any(coeffs), f"zero quadric {line!r}"
    return coeffs


def quadric_to_string(coeffs) -> str:
    """Deterministic polynomial string in x1..x10, terms in (i, j) order."""
    parts = []
    for (i, j), c in zip(monomial_pairs(), coeffs):
        if c == 0:
            continue
        mono = f"x{i}^2" if i == j else f"x{i}*x{j}"
        mag = abs(c)
        body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def known_quadrics() -> List[List[int]]:
    """The 28 reference coefficient vectors, in listing order."""
    rows = [parse_quadric(line) for line in KNOWN_QUADRICS_TEXT.splitlines() if line.strip()]
    assert len(rows) == 28
    return rows
