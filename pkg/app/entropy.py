# app/entropy.py
"""
Shannon and Tsallis entropies of exact distributions, and the entropic
inequalities for CG column joints:

- subadditivity   H(A) + H(B) - H(AB) >= 0   (mutual information)
- Araki-Lieb      H(AB) - |H(A) - H(B)| >= 0
- Tsallis         T_q(A) + T_q(B) - T_q(AB) >= 0

Probabilities are exact Fractions; each one is converted to float once and
the logarithms are taken in floating point. Margins are compared against
-tolerance (a roundoff guard, 1e-12 by default).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import entropy as scipy_entropy

from app.config import get_settings
from app.errors import ConfigError, DomainError
from app.exact import HalfInt, check_spin
from app.prob import (
    JointDistribution,
    ProbabilityDistribution,
    build_bistochastic,
    column_joint_from_matrix,
    marginal_first,
    marginal_second,
)
from app.schemas import ColumnRecord, InequalityReport, ProbabilityEntry, TsallisMargin

logger = logging.getLogger(__name__)

Distribution = Union[ProbabilityDistribution, JointDistribution]


class LogBase(str, Enum):
    natural = "e"
    base2 = "2"

    @classmethod
    def of(cls, value: Union["LogBase", str, None]) -> "LogBase":
        if value is None:
            return cls(get_settings().log_base)
        if isinstance(value, LogBase):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise ConfigError(f"log base must be 'e' or '2', got {value!r}")

    @property
    def scipy_base(self) -> Optional[float]:
        return None if self is LogBase.natural else 2.0


@dataclass(frozen=True)
class EntropyValue:
    value: float
    log_base: LogBase

    def __float__(self) -> float:
        return self.value


def _as_floats(p: Distribution) -> np.ndarray:
    """Nonzero probabilities as floats (zero outcomes contribute nothing)"""
    return np.array([float(x) for x in p.probabilities if x != 0], dtype=float)


def _check_q(q: float) -> None:
    if not q > 0:
        raise DomainError(f"entropic index q must be > 0, got {q}")


# =============================================================================
# Entropies
# =============================================================================

def shannon(p: Distribution, log_base: Union[LogBase, str] = LogBase.natural) -> EntropyValue:
    """H = -sum p log p with 0 log 0 = 0"""
    log_base = LogBase.of(log_base)
    probs = _as_floats(p)
    if probs.size <= 1:
        return EntropyValue(0.0, log_base)
    return EntropyValue(float(scipy_entropy(probs, base=log_base.scipy_base)), log_base)


def tsallis(p: Distribution, q: float) -> EntropyValue:
    """T_q = (sum p^q - 1) / (1 - q); natural-log Shannon at q = 1

    Evaluated as sum p * expm1((q-1) log p) / (1-q), which uses sum p = 1 and
    stays accurate for q close to 1.
    """
    _check_q(q)
    if q == 1:
        return shannon(p, LogBase.natural)
    probs = _as_floats(p)
    if probs.size <= 1:
        return EntropyValue(0.0, LogBase.natural)
    total = float(np.sum(probs * np.expm1((q - 1.0) * np.log(probs))))
    return EntropyValue(total / (1.0 - q), LogBase.natural)


# =============================================================================
# Bipartite quantities
# =============================================================================

def _three_entropies(joint: JointDistribution, log_base) -> Tuple[float, float, float]:
    log_base = LogBase.of(log_base)
    h_a = shannon(marginal_first(joint), log_base).value
    h_b = shannon(marginal_second(joint), log_base).value
    h_ab = shannon(joint, log_base).value
    return h_a, h_b, h_ab


def mutual_information(joint: JointDistribution, log_base: Union[LogBase, str] = LogBase.natural) -> float:
    """I = H(A) + H(B) - H(AB)"""
    h_a, h_b, h_ab = _three_entropies(joint, log_base)
    return h_a + h_b - h_ab


def subadditivity_margin(joint: JointDistribution, log_base: Union[LogBase, str] = LogBase.natural) -> float:
    """H(A) + H(B) - H(AB); the subadditivity statement of mutual_information"""
    return mutual_information(joint, log_base)


def araki_lieb_margin(joint: JointDistribution, log_base: Union[LogBase, str] = LogBase.natural) -> float:
    """H(AB) - |H(A) - H(B)|"""
    h_a, h_b, h_ab = _three_entropies(joint, log_base)
    return h_ab - abs(h_a - h_b)


def tsallis_information(joint: JointDistribution, q: float) -> float:
    """I_q = T_q(A) + T_q(B) - T_q(AB)"""
    _check_q(q)
    return (
        tsallis(marginal_first(joint), q).value
        + tsallis(marginal_second(joint), q).value
        - tsallis(joint, q).value
    )


def max_mutual_information(j1, j2, log_base: Union[LogBase, str] = LogBase.base2) -> float:
    """min{log(2j1+1), log(2j2+1)}: the bound reached by uniform marginals"""
    j1, j2 = HalfInt.of(j1), HalfInt.of(j2)
    check_spin(j1, "j1")
    check_spin(j2, "j2")
    smallest = min(j1.twice_value, j2.twice_value) + 1
    if LogBase.of(log_base) is LogBase.base2:
        return math.log2(smallest)
    return math.log(smallest)


# =============================================================================
# q grids and the Tsallis sweep
# =============================================================================

def q_grid(q_min: float, q_max: float, q_step: float) -> List[float]:
    """Closed grid q_min, q_min + step, ... <= q_max, stepped in exact decimals"""
    if not q_min > 0 or not q_step > 0 or q_min > q_max:
        raise ConfigError(f"invalid q range {q_min}:{q_max}:{q_step}")
    start, stop, step = (Fraction(str(v)) for v in (q_min, q_max, q_step))
    count = int((stop - start) / step)
    return [float(start + k * step) for k in range(count + 1)]


def tsallis_sweep(joint: JointDistribution, q_values: Sequence[float]) -> List[Tuple[float, float]]:
    """(q, I_q) for every q; q = 1 uses the Shannon limit"""
    return [(q, tsallis_information(joint, q)) for q in q_values]


# =============================================================================
# Inequality report
# =============================================================================

def _column_record(joint: JointDistribution, q_values: Sequence[float], log_base: LogBase) -> ColumnRecord:
    h_a, h_b, h_ab = _three_entropies(joint, log_base)
    logger.debug(f"Column ({joint.j}, {joint.m}): H(A)={h_a} H(B)={h_b} H(AB)={h_ab}")
    return ColumnRecord(
        j=joint.j,
        m=joint.m,
        probabilities=[ProbabilityEntry(m1=m1, m2=m2, p=p) for (m1, m2), p in joint.support],
        entropy_joint=h_ab,
        entropy_first=h_a,
        entropy_second=h_b,
        mutual_information=h_a + h_b - h_ab,
        subadditivity_margin=h_a + h_b - h_ab,
        araki_lieb_margin=h_ab - abs(h_a - h_b),
        tsallis_margins=[TsallisMargin(q=q, margin=tsallis_information(joint, q)) for q in q_values],
    )


def _record_passes(record: ColumnRecord, tolerance: float) -> bool:
    margins = [record.subadditivity_margin, record.araki_lieb_margin]
    margins.extend(t.margin for t in record.tsallis_margins)
    return all(margin >= -tolerance for margin in margins)


def verify_inequalities(j1, j2, q_values: Sequence[float] = (1.0,),
                        log_base: Union[LogBase, str, None] = None) -> InequalityReport:
    """All three margins for every column of the (j1, j2) block"""
    j1, j2 = HalfInt.of(j1), HalfInt.of(j2)
    for q in q_values:
        _check_q(q)
    log_base = LogBase.of(log_base)
    settings = get_settings()

    matrix = build_bistochastic(j1, j2)
    joints = [column_joint_from_matrix(matrix, s) for s in range(matrix.N)]

    def evaluate(joint: JointDistribution) -> ColumnRecord:
        return _column_record(joint, q_values, log_base)

    if settings.max_workers > 1 and len(joints) > 1:
        with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
            records = list(pool.map(evaluate, joints))
    else:
        records = [evaluate(joint) for joint in joints]

    failing = [r for r in records if not _record_passes(r, settings.tolerance)]
    for record in failing:
        logger.warning(f"Inequality violated in column ({record.j}, {record.m}) of ({j1}, {j2})")
    logger.info(f"Verified {len(records)} columns of ({j1}, {j2}); {len(failing)} failing")

    return InequalityReport(
        j1=j1,
        j2=j2,
        log_base=log_base.value,
        tolerance=settings.tolerance,
        q_grid=list(q_values),
        columns=records,
        passed=not failing,
    )
