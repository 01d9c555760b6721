# app/cg.py
"""
Wigner 3-j symbols and Clebsch-Gordan coefficients

Exact evaluation of the explicit (Racah) sum:

    (j1 j2 j3; m1 m2 m3) = (-1)^(j1-j2-m3) sqrt(Delta * prod (ji+mi)! (ji-mi)!)
                           * sum_z (-1)^z / [z! (j1+j2-j3-z)! (j1-m1-z)! (j2+m2-z)!
                                             (j3-j2+m1+z)! (j3-j1-m2+z)!]

with Delta = (j1+j2-j3)! (j1-j2+j3)! (-j1+j2+j3)! / (j1+j2+j3+1)!, and

    <j1 m1 j2 m2 | j m> = (-1)^(j1-j2+m) sqrt(2j+1) (j1 j2 j; m1 m2 -m).

Labels that break a selection rule are valid inputs with coefficient zero.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterator, List, Tuple, Union

from app.cache import cached
from app.exact import (
    HalfInt,
    SignedSqrtRational,
    SurdSum,
    binomial,
    check_pair,
    check_spin,
    factorial,
    projections,
)
from app.schemas import OrthogonalityReport, OrthogonalityViolation

logger = logging.getLogger(__name__)

Spin = Union[HalfInt, int, float, str, Fraction]

RowKey = Tuple[HalfInt, HalfInt]      # (m1, m2)
ColumnKey = Tuple[HalfInt, HalfInt]   # (j, m)


# =============================================================================
# Labels and selection rules
# =============================================================================

@dataclass(frozen=True)
class CouplingLabel:
    """<j1 m1 j2 m2 | j m>"""
    j1: HalfInt
    m1: HalfInt
    j2: HalfInt
    m2: HalfInt
    j: HalfInt
    m: HalfInt

    def __post_init__(self):
        check_pair(self.j1, self.m1, "j1")
        check_pair(self.j2, self.m2, "j2")
        check_pair(self.j, self.m, "j")

    @classmethod
    def of(cls, j1: Spin, m1: Spin, j2: Spin, m2: Spin, j: Spin, m: Spin) -> "CouplingLabel":
        return cls(*(HalfInt.of(v) for v in (j1, m1, j2, m2, j, m)))

    @property
    def is_addressable(self) -> bool:
        return triangle_ok(self.j1, self.j2, self.j)

    @property
    def conserves_projection(self) -> bool:
        return self.m.twice_value == self.m1.twice_value + self.m2.twice_value

    def __str__(self) -> str:
        return f"<{self.j1} {self.m1} {self.j2} {self.m2}|{self.j} {self.m}>"


def triangle_ok(j1: HalfInt, j2: HalfInt, j3: HalfInt) -> bool:
    """|j1-j2| <= j3 <= j1+j2 and j1+j2+j3 integer"""
    a, b, c = j1.twice_value, j2.twice_value, j3.twice_value
    if (a + b + c) % 2 != 0:
        return False
    return abs(a - b) <= c <= a + b


def row_keys(j1: HalfInt, j2: HalfInt) -> List[RowKey]:
    """(m1, m2) in lexicographic descending order"""
    return [(m1, m2) for m1 in projections(j1) for m2 in projections(j2)]


def column_keys(j1: HalfInt, j2: HalfInt) -> List[ColumnKey]:
    """(j, m) with j descending from j1+j2 to |j1-j2|, m descending within j"""
    top = j1.twice_value + j2.twice_value
    bottom = abs(j1.twice_value - j2.twice_value)
    return [(HalfInt(t), m) for t in range(top, bottom - 1, -2) for m in projections(HalfInt(t))]


def labels_for_block(j1: HalfInt, j2: HalfInt) -> Iterator[CouplingLabel]:
    """Every (row, column) label of the (j1, j2) block in canonical order"""
    check_spin(j1, "j1")
    check_spin(j2, "j2")
    columns = column_keys(j1, j2)
    for m1, m2 in row_keys(j1, j2):
        for j, m in columns:
            yield CouplingLabel(j1, m1, j2, m2, j, m)


def flip_label(label: CouplingLabel) -> CouplingLabel:
    """Same label with every projection negated"""
    return CouplingLabel(label.j1, -label.m1, label.j2, -label.m2, label.j, -label.m)


def flip_phase(label: CouplingLabel) -> int:
    """(-1)^(j1+j2-j), the phase relating a label to flip_label(label)"""
    exponent = label.j1.twice_value + label.j2.twice_value - label.j.twice_value
    if exponent % 2 != 0:
        # j1+j2+j not an integer: the coefficient is zero either way
        return 1
    return -1 if (exponent // 2) % 2 else 1


def stretched_probability(label: CouplingLabel) -> Fraction:
    """|<j1 m1 j2 m2 | J m>|^2 for J = j1 + j2 from the binomial law

    C(2j1, j1-m1) C(2j2, j2-m2) / C(2J, J-m); independent of the Racah sum.
    """
    if label.j.twice_value != label.j1.twice_value + label.j2.twice_value:
        raise ValueError(f"{label} is not a stretched coupling")
    if not label.conserves_projection:
        return Fraction(0)
    k1 = (label.j1.twice_value - label.m1.twice_value) // 2
    k2 = (label.j2.twice_value - label.m2.twice_value) // 2
    k = (label.j.twice_value - label.m.twice_value) // 2
    return Fraction(
        binomial(label.j1.twice_value, k1) * binomial(label.j2.twice_value, k2),
        binomial(label.j.twice_value, k),
    )


def _parity(n: int) -> int:
    return -1 if n % 2 else 1


# =============================================================================
# 3-j symbols and Clebsch-Gordan coefficients
# =============================================================================

@cached(key_prefix="three_j")
def _three_j(j1: HalfInt, j2: HalfInt, j3: HalfInt,
             m1: HalfInt, m2: HalfInt, m3: HalfInt) -> SignedSqrtRational:
    if m1.twice_value + m2.twice_value + m3.twice_value != 0:
        return SignedSqrtRational.zero()
    if not triangle_ok(j1, j2, j3):
        return SignedSqrtRational.zero()

    # all combinations below are integers once the selection rules hold
    def h(twice: int) -> int:
        return twice // 2

    a, b, c = j1.twice_value, j2.twice_value, j3.twice_value
    x, y, w = m1.twice_value, m2.twice_value, m3.twice_value

    prefactor = Fraction(
        factorial(h(a + b - c)) * factorial(h(a - b + c)) * factorial(h(-a + b + c)),
        factorial(h(a + b + c) + 1),
    )
    prefactor *= (
        factorial(h(a + x)) * factorial(h(a - x))
        * factorial(h(b + y)) * factorial(h(b - y))
        * factorial(h(c + w)) * factorial(h(c - w))
    )

    z_min = max(0, h(b - c - x), h(a - c + y))
    z_max = min(h(a + b - c), h(a - x), h(b + y))

    total = Fraction(0)
    for z in range(z_min, z_max + 1):
        denominator = (
            factorial(z)
            * factorial(h(a + b - c) - z)
            * factorial(h(a - x) - z)
            * factorial(h(b + y) - z)
            * factorial(h(c - b + x) + z)
            * factorial(h(c - a - y) + z)
        )
        total += Fraction(_parity(z), denominator)

    if total == 0:
        return SignedSqrtRational.zero()

    phase = _parity(h(a - b - w))
    sign = phase if total > 0 else -phase
    return SignedSqrtRational(sign, prefactor * total * total)


def three_j(j1: Spin, j2: Spin, j3: Spin, m1: Spin, m2: Spin, m3: Spin) -> SignedSqrtRational:
    """Exact Wigner 3-j symbol (j1 j2 j3; m1 m2 m3)"""
    j1, j2, j3, m1, m2, m3 = (HalfInt.of(v) for v in (j1, j2, j3, m1, m2, m3))
    check_pair(j1, m1, "j1")
    check_pair(j2, m2, "j2")
    check_pair(j3, m3, "j3")
    return _three_j(j1, j2, j3, m1, m2, m3)


def clebsch_gordan(label: CouplingLabel) -> SignedSqrtRational:
    """Exact <j1 m1 j2 m2 | j m>"""
    if not label.conserves_projection or not label.is_addressable:
        return SignedSqrtRational.zero()
    symbol = _three_j(label.j1, label.j2, label.j, label.m1, label.m2, -label.m)
    if symbol.is_zero:
        return symbol
    phase = _parity((label.j1.twice_value - label.j2.twice_value + label.m.twice_value) // 2)
    return SignedSqrtRational(phase * symbol.sign, symbol.radicand * (label.j.twice_value + 1))


# =============================================================================
# Orthogonality
# =============================================================================

def block_coefficients(j1: HalfInt, j2: HalfInt) -> Dict[Tuple[RowKey, ColumnKey], SignedSqrtRational]:
    """Nonzero coefficients of the block keyed by (row, column)"""
    entries = {}
    for label in labels_for_block(j1, j2):
        value = clebsch_gordan(label)
        if not value.is_zero:
            entries[((label.m1, label.m2), (label.j, label.m))] = value
    return entries


def _key_str(key: Tuple[HalfInt, HalfInt]) -> str:
    return f"{key[0]}:{key[1]}"


def _check_relation(relation: str, keys, vectors, violations, counter) -> Fraction:
    worst = Fraction(0)
    for left, right in combinations_with_replacement(keys, 2):
        u, v = vectors[left], vectors[right]
        total = SurdSum(u[k] * v[k] for k in u.keys() & v.keys())
        residual = total - (1 if left == right else 0)
        residual_sq = residual.norm_sq()
        counter[0] += 1
        if residual_sq > worst:
            worst = residual_sq
        if not residual.is_zero:
            violations.append(OrthogonalityViolation(
                relation=relation,
                left=_key_str(left),
                right=_key_str(right),
                residual_sq=residual_sq,
            ))
    return worst


def verify_orthogonality(j1: Spin, j2: Spin) -> OrthogonalityReport:
    """Check both orthogonality relations of the (j1, j2) block exactly

    columns: sum_{m1 m2} <m1 m2|j m><m1 m2|j' m'> = delta_jj' delta_mm'
    rows:    sum_{j m}   <m1 m2|j m><m1' m2'|j m> = delta_m1m1' delta_m2m2'
    """
    j1, j2 = HalfInt.of(j1), HalfInt.of(j2)
    check_spin(j1, "j1")
    check_spin(j2, "j2")
    entries = block_coefficients(j1, j2)

    rows = row_keys(j1, j2)
    columns = column_keys(j1, j2)
    by_column: Dict[ColumnKey, Dict[RowKey, SignedSqrtRational]] = {c: {} for c in columns}
    by_row: Dict[RowKey, Dict[ColumnKey, SignedSqrtRational]] = {r: {} for r in rows}
    for (row, column), value in entries.items():
        by_column[column][row] = value
        by_row[row][column] = value

    violations: List[OrthogonalityViolation] = []
    counter = [0]
    worst = max(
        _check_relation("columns", columns, by_column, violations, counter),
        _check_relation("rows", rows, by_row, violations, counter),
    )

    if violations:
        logger.warning(f"Orthogonality failed for ({j1}, {j2}): {len(violations)} violations")
    else:
        logger.info(f"Orthogonality holds for ({j1}, {j2}): {counter[0]} sums checked")

    return OrthogonalityReport(
        j1=j1,
        j2=j2,
        passed=not violations,
        checked=counter[0],
        worst_residual=worst,
        violations=violations,
    )
