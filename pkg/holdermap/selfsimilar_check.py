"""The Selfsimilar Check module.

A homogeneous set A of q pieces with ratio r maps Lipschitz onto a self-similar set B
with ratios beta_j exactly when both have the same dimension and every beta_j is a
positive integer power of r^(1/k), k being the largest integer with q a perfect k-th
power.

This module provides the following functions:
- compatibility_exact
- homogeneous_dimension
- lipschitz_onto_compatibility
- max_integer_root
- moran_dimension
- power_sum_check
"""

__all__ = [
    "compatibility_exact",
    "homogeneous_dimension",
    "lipschitz_onto_compatibility",
    "max_integer_root",
    "moran_dimension",
    "power_sum_check",
]

import logging
import math
from collections.abc import Sequence
from fractions import Fraction
from typing import Union

from mpmath import mp
from scipy.optimize import bisect

from holdermap.exceptions import InvalidInputError, InvalidRatioError
from holdermap.schemas.selfsimilar import CompatibilityReport, HomogeneousSpec, PowerSumCheck, Verdict

LOGGER = logging.getLogger(__name__)
DEFAULT_TOL = 1e-9
MORAN_XTOL = 1e-13
POWER_SUM_DPS = 40
POWER_SUM_TOL = 1e-20


def max_integer_root(q: int) -> int:
    """Largest k such that q = n^k for an integer n.

    Args:
        q: Integer of at least 2.

    Returns:
        k, which is 1 when q is not a perfect power.

    Raises:
        InvalidInputError: If q is below 2.
    """
    if q < 2:
        raise InvalidInputError(f"Need q >= 2, got {q}")
    for k in range(q.bit_length() - 1, 1, -1):
        guess = round(q ** (1 / k))
        if any(n > 1 and n**k == q for n in (guess - 1, guess, guess + 1)):
            return k
    return 1


def _check_ratios(ratios: Sequence[float]) -> list[float]:
    ratios = [float(x) for x in ratios]
    if not ratios:
        raise InvalidInputError("Need at least one similarity ratio")
    for ratio in ratios:
        if not 0 < ratio < 1:
            raise InvalidRatioError(f"Similarity ratio {ratio!r} is not in (0, 1)")
    return ratios


def moran_dimension(ratios: Sequence[float], xtol: float = MORAN_XTOL) -> float:
    """The root s of beta_1^s + ... + beta_m^s = 1, by bisection.

    Args:
        ratios: Similarity ratios in (0, 1).
        xtol: Absolute tolerance on s.

    Returns:
        The similarity dimension; 0 for a single map.

    Raises:
        InvalidRatioError: If a ratio is outside (0, 1).
    """
    ratios = _check_ratios(ratios)
    if len(ratios) == 1:
        return 0.0

    def excess(s: float) -> float:
        return math.fsum(x**s for x in ratios) - 1

    upper = 1.0
    while excess(upper) > 0:
        upper *= 2
    return float(bisect(excess, 0.0, upper, xtol=xtol))


def homogeneous_dimension(spec: HomogeneousSpec) -> float:
    """s = log q / log(1/r), the dimension of a homogeneous set.

    Args:
        spec: The set.

    Returns:
        Its dimension.
    """
    return math.log(spec.q) / math.log(1 / spec.r)


def power_sum_check(q: int, exponents: Sequence[Union[Fraction, int, str]]) -> PowerSumCheck:
    """Evaluate sum_i q^(r_i) to 40 significant digits.

    For q not a perfect power, a sum equal to 1 forces every r_i to be an integer.

    Args:
        q: Base, at least 2.
        exponents: Rational exponents r_i.

    Returns:
        The sum, whether it is 1 within 1e-20, and whether every exponent is an integer.
    """
    if q < 2:
        raise InvalidInputError(f"Need q >= 2, got {q}")
    exponents = [Fraction(x) for x in exponents]
    with mp.workdps(POWER_SUM_DPS):
        total = mp.fsum(
            mp.power(q, mp.mpf(x.numerator) / x.denominator) for x in exponents
        )
        sums_to_one = bool(abs(total - 1) <= mp.mpf(POWER_SUM_TOL))
        value = float(total)
    return PowerSumCheck(
        total=value,
        sums_to_one=sums_to_one,
        all_integer=all(x.denominator == 1 for x in exponents),
    )


def _near_positive_integer(value: float, tol: float) -> bool:
    nearest = round(value)
    return nearest >= 1 and abs(value - nearest) <= tol


def lipschitz_onto_compatibility(
    a: HomogeneousSpec, b_ratios: Sequence[float], tol: float = DEFAULT_TOL
) -> CompatibilityReport:
    """Decide whether A maps Lipschitz onto the self-similar set with ratios b_ratios.

    Dimensions are compared within `tol`, and each alpha_j = k log(beta_j) / log(r)
    must lie within `tol` of a positive integer.

    Args:
        a: The homogeneous set A.
        b_ratios: Similarity ratios of B, in (0, 1).
        tol: Slack for both comparisons.

    Returns:
        The verdict and its evidence.

    Raises:
        InvalidRatioError: If a ratio of B is outside (0, 1).
    """
    b_ratios = _check_ratios(b_ratios)
    s_a = homogeneous_dimension(a)
    s_b = moran_dimension(b_ratios)
    k = max_integer_root(a.q)
    alphas = [k * math.log(x) / math.log(a.r) for x in b_ratios]
    if abs(s_a - s_b) > tol:
        verdict = Verdict.DIMENSION_MISMATCH
    elif all(_near_positive_integer(x, tol) for x in alphas):
        verdict = Verdict.COMPATIBLE
    else:
        verdict = Verdict.INCOMPATIBLE
    LOGGER.info("Compatibility of (q=%d, r=%r) with %s: %s", a.q, a.r, b_ratios, verdict.value)
    return CompatibilityReport(
        s_a=s_a, s_b=s_b, k=k, alphas=alphas, verdict=verdict, tolerance=tol
    )


def compatibility_exact(
    a: HomogeneousSpec, exponents: Sequence[Union[Fraction, int, str]]
) -> CompatibilityReport:
    """The compatibility verdict for ratios given exactly as beta_j = r^(p_j / q_j).

    At s = dim A every beta_j^s equals q^(-p_j / q_j), so the dimensions agree when those
    powers of q sum to 1; integrality of k p_j / q_j is then decided on the fractions.

    Args:
        a: The homogeneous set A.
        exponents: Positive rationals p_j / q_j.

    Returns:
        The verdict, flagged exact.

    Raises:
        InvalidRatioError: If an exponent is not positive.
    """
    exponents = [Fraction(x) for x in exponents]
    if not exponents or any(x <= 0 for x in exponents):
        raise InvalidRatioError("Exact ratios need positive exponents of r")
    s_a = homogeneous_dimension(a)
    k = max_integer_root(a.q)
    alphas = [k * x for x in exponents]
    if not power_sum_check(a.q, [-x for x in exponents]).sums_to_one:
        verdict = Verdict.DIMENSION_MISMATCH
        s_b = moran_dimension([a.r ** float(x) for x in exponents])
    else:
        s_b = s_a
        integral = all(x.denominator == 1 and x >= 1 for x in alphas)
        verdict = Verdict.COMPATIBLE if integral else Verdict.INCOMPATIBLE
    return CompatibilityReport(
        s_a=s_a,
        s_b=s_b,
        k=k,
        alphas=[float(x) for x in alphas],
        verdict=verdict,
        tolerance=POWER_SUM_TOL,
        exact=True,
    )
