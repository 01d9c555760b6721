# app/prob.py
"""
Probability distributions built from squared Clebsch-Gordan coefficients

The elementwise square of the orthogonal CG matrix of a (j1, j2) block is
bistochastic: rows are indexed by (m1, m2), columns by (j, m), and every row
and column sums to one. A column (j, m) is a joint distribution over
(m1, m2); its two marginals are the distributions of the subsystems.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Optional, Sequence, Tuple

from app.cg import (
    ColumnKey,
    CouplingLabel,
    RowKey,
    clebsch_gordan,
    column_keys,
    row_keys,
    triangle_ok,
)
from app.errors import DomainError
from app.exact import HalfInt, check_pair, check_spin, projections

logger = logging.getLogger(__name__)


def _check_probabilities(values, what: str) -> None:
    total = Fraction(0)
    for p in values:
        if p < 0:
            raise DomainError(f"{what}: negative probability {p}")
        total += p
    if total != 1:
        raise DomainError(f"{what}: probabilities sum to {total}, not 1")


# =============================================================================
# Distributions
# =============================================================================

@dataclass(frozen=True)
class ProbabilityDistribution:
    """Exact distribution over arbitrary labels"""
    support: Tuple[Tuple[Hashable, Fraction], ...]

    def __post_init__(self):
        support = tuple((label, Fraction(p)) for label, p in self.support)
        object.__setattr__(self, "support", support)
        _check_probabilities((p for _, p in support), "distribution")

    @property
    def probabilities(self) -> Tuple[Fraction, ...]:
        return tuple(p for _, p in self.support)

    def as_dict(self) -> Dict[Hashable, Fraction]:
        return dict(self.support)


@dataclass(frozen=True)
class JointDistribution:
    """Distribution over pairs (a, b)

    For a CG column the pairs are (m1, m2) and j, m are set; synthetic joints
    (used for independence checks) leave them as None.
    """
    support: Tuple[Tuple[Tuple[Hashable, Hashable], Fraction], ...]
    j1: Optional[HalfInt] = None
    j2: Optional[HalfInt] = None
    j: Optional[HalfInt] = None
    m: Optional[HalfInt] = None

    def __post_init__(self):
        support = tuple(((a, b), Fraction(p)) for (a, b), p in self.support)
        object.__setattr__(self, "support", support)
        _check_probabilities((p for _, p in support), "joint distribution")
        if self.m is not None:
            for (m1, m2), _ in support:
                if m1 + m2 != self.m:
                    raise DomainError(f"support point ({m1}, {m2}) off the line m1 + m2 = {self.m}")

    @classmethod
    def synthetic(cls, table: Dict[Tuple[Hashable, Hashable], Fraction]) -> "JointDistribution":
        return cls(support=tuple(table.items()))

    @property
    def probabilities(self) -> Tuple[Fraction, ...]:
        return tuple(p for _, p in self.support)


def _marginal(joint: JointDistribution, index: int) -> ProbabilityDistribution:
    totals: Dict[Hashable, Fraction] = {}
    for pair, p in joint.support:
        totals[pair[index]] = totals.get(pair[index], Fraction(0)) + p
    return ProbabilityDistribution(support=tuple(totals.items()))


def marginal_first(joint: JointDistribution) -> ProbabilityDistribution:
    """Distribution of m1 (first component)"""
    return _marginal(joint, 0)


def marginal_second(joint: JointDistribution) -> ProbabilityDistribution:
    """Distribution of m2 (second component)"""
    return _marginal(joint, 1)


# =============================================================================
# Bistochastic matrix
# =============================================================================

@dataclass(frozen=True)
class BistochasticMatrix:
    j1: HalfInt
    j2: HalfInt
    N: int
    entries: Tuple[Tuple[Fraction, ...], ...]
    row_index: Tuple[RowKey, ...]
    col_index: Tuple[ColumnKey, ...]
    _row_position: Dict[RowKey, int] = field(init=False, repr=False, compare=False)
    _col_position: Dict[ColumnKey, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_row_position", {key: r for r, key in enumerate(self.row_index)})
        object.__setattr__(self, "_col_position", {key: s for s, key in enumerate(self.col_index)})
        if len(self.row_index) != self.N or len(self.col_index) != self.N or len(self.entries) != self.N:
            raise DomainError(f"matrix of ({self.j1}, {self.j2}) is not {self.N}x{self.N}")
        for r, row in enumerate(self.entries):
            _check_probabilities(row, f"row {r}")
        for s in range(self.N):
            _check_probabilities((row[s] for row in self.entries), f"column {s}")

    def entry(self, r: int, s: int) -> Fraction:
        return self.entries[r][s]

    def entry_at(self, row: RowKey, column: ColumnKey) -> Fraction:
        return self.entries[self._row_position[row]][self._col_position[column]]

    def row_of(self, m1: HalfInt, m2: HalfInt) -> int:
        return self._row_position[(m1, m2)]

    def column_of(self, j: HalfInt, m: HalfInt) -> int:
        return self._col_position[(j, m)]

    def label(self, r: int, s: int) -> CouplingLabel:
        (m1, m2), (j, m) = self.row_index[r], self.col_index[s]
        return CouplingLabel(self.j1, m1, self.j2, m2, j, m)

    def to_rows(self) -> Tuple[Tuple[RowKey, Tuple[Fraction, ...]], ...]:
        """(row key, entries) pairs in canonical row order"""
        return tuple(zip(self.row_index, self.entries))


def build_bistochastic(j1, j2) -> BistochasticMatrix:
    """B[r][s] = <j1 m1 j2 m2 | j m>^2 in canonical row/column order"""
    j1, j2 = HalfInt.of(j1), HalfInt.of(j2)
    check_spin(j1, "j1")
    check_spin(j2, "j2")
    rows = row_keys(j1, j2)
    columns = column_keys(j1, j2)

    entries = tuple(
        tuple(clebsch_gordan(CouplingLabel(j1, m1, j2, m2, j, m)).square() for j, m in columns)
        for m1, m2 in rows
    )
    matrix = BistochasticMatrix(
        j1=j1,
        j2=j2,
        N=len(rows),
        entries=entries,
        row_index=tuple(rows),
        col_index=tuple(columns),
    )
    logger.info(f"Built {matrix.N}x{matrix.N} bistochastic matrix for ({j1}, {j2})")
    return matrix


def column_joint(j1, j2, j, m) -> JointDistribution:
    """Column (j, m) as a distribution over (m1, m2); zero points omitted"""
    j1, j2, j, m = (HalfInt.of(v) for v in (j1, j2, j, m))
    check_spin(j1, "j1")
    check_spin(j2, "j2")
    if not triangle_ok(j1, j2, j):
        raise DomainError(f"j={j} is not reachable from j1={j1}, j2={j2}")
    check_pair(j, m, "j")

    support = []
    for m1 in projections(j1):
        m2 = m - m1
        if abs(m2.twice_value) > j2.twice_value:
            continue
        p = clebsch_gordan(CouplingLabel(j1, m1, j2, m2, j, m)).square()
        if p != 0:
            support.append(((m1, m2), p))
    return JointDistribution(support=tuple(support), j1=j1, j2=j2, j=j, m=m)


def column_joint_from_matrix(matrix: BistochasticMatrix, s: int) -> JointDistribution:
    """Column s of an already built matrix"""
    j, m = matrix.col_index[s]
    support = tuple(
        (row, matrix.entries[r][s])
        for r, row in enumerate(matrix.row_index)
        if matrix.entries[r][s] != 0
    )
    return JointDistribution(support=support, j1=matrix.j1, j2=matrix.j2, j=j, m=m)


def row_distribution(matrix: BistochasticMatrix, m1: HalfInt, m2: HalfInt) -> ProbabilityDistribution:
    """Row (m1, m2) as a distribution over (j, m); zero points omitted"""
    r = matrix.row_of(m1, m2)
    return ProbabilityDistribution(support=tuple(
        (column, p) for column, p in zip(matrix.col_index, matrix.entries[r]) if p != 0
    ))


def probability_multiset(values: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Sorted probabilities, for comparing distributions up to relabeling"""
    return tuple(sorted(values))
