# app/hahn.py
"""
Hahn polynomials and the Hahn-polynomial form of Clebsch-Gordan coefficients

    h_n^(a,b)(x, N) = (-1)^n (N-n)_n (b+1)_n / n! * 3F2(-n, -x, a+b+n+1; b+1, 1-N; 1)

    rho(x)  = G(N+a-x) G(b+1+x) / (G(x+1) G(N-x))
    d_n^2   = G(a+n+1) G(b+n+1) G(a+b+n+N+1) / ((a+b+2n+1) n! (N-n-1)! G(a+b+n+1))

    (-1)^(j1-m1) <j1 m1 j2 m2 | j m> = sqrt(rho(x)) / d_n * h_n^(a,b)(x, N)

with n = j-m, x = j2-m2, N = j1+j2-m+1, a = m-j1+j2, b = m+j1-j2 (a, b > -1).
Every Gamma argument reachable from a coupling label is a positive integer,
so Gamma is evaluated as a factorial and nothing continuous is implemented.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from app.cg import (
    CouplingLabel,
    clebsch_gordan,
    flip_label,
    flip_phase,
    labels_for_block,
)
from app.errors import DomainError, OutOfDomainError, SingularParameterError, UnsupportedLabelError
from app.exact import (
    HalfInt,
    SignedSqrtRational,
    check_spin,
    factorial,
    pochhammer,
    projections,
)
from app.schemas import EquivalenceMismatch, EquivalenceReport

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction]


@dataclass(frozen=True)
class HahnParams:
    n: int
    alpha: Fraction
    beta: Fraction
    x: int
    N: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.N < 1:
            raise DomainError(f"N must be positive, got {self.N}")
        if not 0 <= self.n <= self.N - 1:
            raise DomainError(f"degree n={self.n} outside 0..{self.N - 1}")
        if not 0 <= self.x <= self.N - 1:
            raise DomainError(f"x={self.x} outside 0..{self.N - 1}")

    @property
    def in_domain(self) -> bool:
        return self.alpha > -1 and self.beta > -1


# =============================================================================
# Series and polynomials
# =============================================================================

def hyp3f2_terminating(a1: int, a2: RationalLike, a3: RationalLike,
                       b1: RationalLike, b2: RationalLike) -> Fraction:
    """3F2(a1, a2, a3; b1, b2; 1) for a nonpositive integer a1

    Summed by term ratios; stops as soon as an upper parameter kills the
    series, so a vanishing lower parameter only matters before that point.
    """
    if isinstance(a1, Fraction):
        if a1.denominator != 1:
            raise DomainError(f"a1 must be a nonpositive integer, got {a1}")
        a1 = a1.numerator
    if a1 > 0:
        raise DomainError(f"a1 must be a nonpositive integer, got {a1}")
    a2, a3, b1, b2 = (Fraction(v) for v in (a2, a3, b1, b2))

    term = Fraction(1)
    total = Fraction(1)
    for k in range(-a1):
        numerator = (a1 + k) * (a2 + k) * (a3 + k)
        if numerator == 0:
            break
        denominator = (b1 + k) * (b2 + k) * (k + 1)
        if denominator == 0:
            raise SingularParameterError(
                f"lower parameter vanishes at k={k} in 3F2({a1}, {a2}, {a3}; {b1}, {b2}; 1)"
            )
        term = term * numerator / denominator
        total += term
    return total


def hahn_polynomial(p: HahnParams) -> Fraction:
    """Exact h_n^(alpha, beta)(x, N)"""
    prefactor = pochhammer(p.N - p.n, p.n) * pochhammer(p.beta + 1, p.n) / factorial(p.n)
    if p.n % 2:
        prefactor = -prefactor
    if prefactor == 0:
        return Fraction(0)
    series = hyp3f2_terminating(-p.n, -p.x, p.alpha + p.beta + p.n + 1, p.beta + 1, 1 - p.N)
    return prefactor * series


def _gamma(argument: Fraction) -> int:
    """Gamma at a positive integer"""
    argument = Fraction(argument)
    if argument.denominator != 1:
        raise DomainError(f"Gamma argument {argument} is not an integer")
    if argument <= 0:
        raise DomainError(f"Gamma at nonpositive integer {argument}")
    return factorial(argument.numerator - 1)


def _check_alpha_beta(alpha: Fraction, beta: Fraction) -> None:
    if not (alpha > -1 and beta > -1):
        raise OutOfDomainError(f"need alpha > -1 and beta > -1, got alpha={alpha}, beta={beta}")


def weight_rho(x: int, alpha: RationalLike, beta: RationalLike, N: int) -> Fraction:
    """rho(x) = G(N+alpha-x) G(beta+1+x) / (G(x+1) G(N-x))"""
    alpha, beta = Fraction(alpha), Fraction(beta)
    _check_alpha_beta(alpha, beta)
    return Fraction(
        _gamma(N + alpha - x) * _gamma(beta + 1 + x),
        _gamma(Fraction(x + 1)) * _gamma(Fraction(N - x)),
    )


def norm_sq(n: int, alpha: RationalLike, beta: RationalLike, N: int) -> Fraction:
    """Squared norm d_n^2"""
    alpha, beta = Fraction(alpha), Fraction(beta)
    _check_alpha_beta(alpha, beta)
    if not 0 <= n <= N - 1:
        raise DomainError(f"degree n={n} outside 0..{N - 1}")
    numerator = _gamma(alpha + n + 1) * _gamma(beta + n + 1) * _gamma(alpha + beta + n + N + 1)
    denominator = (alpha + beta + 2 * n + 1) * factorial(n) * factorial(N - n - 1) * _gamma(alpha + beta + n + 1)
    return numerator / denominator


# =============================================================================
# Clebsch-Gordan coefficients through Hahn polynomials
# =============================================================================

def hahn_params_for(label: CouplingLabel) -> HahnParams:
    """n = j-m, x = j2-m2, N = j1+j2-m+1, alpha = m-j1+j2, beta = m+j1-j2"""
    j1, m1, j2, m2, j, m = (v.twice_value for v in (label.j1, label.m1, label.j2, label.m2, label.j, label.m))
    return HahnParams(
        n=(j - m) // 2,
        alpha=Fraction(m - j1 + j2, 2),
        beta=Fraction(m + j1 - j2, 2),
        x=(j2 - m2) // 2,
        N=(j1 + j2 - m) // 2 + 1,
    )


def _evaluate_in_domain(label: CouplingLabel, p: HahnParams) -> SignedSqrtRational:
    rho = weight_rho(p.x, p.alpha, p.beta, p.N)
    d2 = norm_sq(p.n, p.alpha, p.beta, p.N)
    h = hahn_polynomial(p)
    if h == 0:
        return SignedSqrtRational.zero()
    phase = -1 if ((label.j1.twice_value - label.m1.twice_value) // 2) % 2 else 1
    sign = phase if h > 0 else -phase
    return SignedSqrtRational(sign, rho * h * h / d2)


def cg_via_hahn(label: CouplingLabel, return_flipped: bool = False):
    """<j1 m1 j2 m2 | j m> from the Hahn representation

    Labels whose (alpha, beta) fall outside alpha, beta > -1 are first mapped
    with <j1 m1 j2 m2|j m> = (-1)^(j1+j2-j) <j1 -m1 j2 -m2|j -m>.
    """
    if not label.conserves_projection or not label.is_addressable:
        value, flipped = SignedSqrtRational.zero(), False
    else:
        params = hahn_params_for(label)
        flipped = not params.in_domain
        if not flipped:
            value = _evaluate_in_domain(label, params)
        else:
            mirrored = flip_label(label)
            mirrored_params = hahn_params_for(mirrored)
            if not mirrored_params.in_domain:
                raise UnsupportedLabelError(
                    f"{label}: alpha={params.alpha}, beta={params.beta} out of domain on both signs of m"
                )
            value = flip_phase(label) * _evaluate_in_domain(mirrored, mirrored_params)
    if return_flipped:
        return value, flipped
    return value


def verify_hahn_orthogonality(alpha: RationalLike, beta: RationalLike, N: int) -> List[Tuple[int, int]]:
    """Pairs (n, n') where sum_x rho h_n h_n' != delta_nn' d_n^2; empty means orthogonal"""
    alpha, beta = Fraction(alpha), Fraction(beta)
    weights = [weight_rho(x, alpha, beta, N) for x in range(N)]
    values = [
        [hahn_polynomial(HahnParams(n=n, alpha=alpha, beta=beta, x=x, N=N)) for x in range(N)]
        for n in range(N)
    ]
    failures = []
    for n in range(N):
        for n2 in range(n, N):
            total = sum((w * a * b for w, a, b in zip(weights, values[n], values[n2])), Fraction(0))
            expected = norm_sq(n, alpha, beta, N) if n == n2 else 0
            if total != expected:
                failures.append((n, n2))
    return failures


def check_equivalence(j1, j2) -> EquivalenceReport:
    """Compare cg_via_hahn with clebsch_gordan on every label of the (j1, j2) block"""
    j1, j2 = HalfInt.of(j1), HalfInt.of(j2)
    check_spin(j1, "j1")
    check_spin(j2, "j2")

    checked = matched = flipped = 0
    mismatches: List[EquivalenceMismatch] = []
    skipped: List[str] = []
    for label in labels_for_block(j1, j2):
        try:
            via_hahn, was_flipped = cg_via_hahn(label, return_flipped=True)
        except UnsupportedLabelError as e:
            logger.warning(f"Skipping {label}: {e}")
            skipped.append(str(label))
            continue
        direct = clebsch_gordan(label)
        checked += 1
        flipped += was_flipped
        if via_hahn == direct:
            matched += 1
        else:
            mismatches.append(EquivalenceMismatch(
                label=str(label), direct=direct.to_string(), via_hahn=via_hahn.to_string(),
            ))

    # Hahn orthogonality for every in-domain column family (fixed m >= 0)
    orthogonal = True
    a, b = j1.twice_value, j2.twice_value
    for m in projections(HalfInt(a + b)):
        t = m.twice_value
        alpha, beta = Fraction(t - a + b, 2), Fraction(t + a - b, 2)
        if t < 0 or not (alpha > -1 and beta > -1):
            continue
        failures = verify_hahn_orthogonality(alpha, beta, (a + b - t) // 2 + 1)
        if failures:
            orthogonal = False
            logger.warning(f"Hahn orthogonality fails for m={m}: {failures}")

    if mismatches:
        logger.warning(f"Hahn backend disagrees on {len(mismatches)} labels of ({j1}, {j2})")
    logger.info(f"Hahn check ({j1}, {j2}): {matched}/{checked} matched, {len(skipped)} skipped")

    return EquivalenceReport(
        j1=j1,
        j2=j2,
        checked=checked,
        matched=matched,
        flipped=flipped,
        mismatches=mismatches,
        skipped=skipped,
        hahn_orthogonality=orthogonal,
        passed=not mismatches and orthogonal,
    )
