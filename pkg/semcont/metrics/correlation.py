"""
Monotonicity statistics: Pearson, Spearman and Kendall tau-b.

All p-values are two-sided. Constant inputs have no defined correlation and
raise UndefinedCorrelationError; reports show them as "-".
"""

import logging
from typing import Sequence

import numpy as np
from scipy import stats

from semcont.errors import DataError, UndefinedCorrelationError
from semcont.schemas.statistics import CorrelationMethod, CorrelationResult

logger = logging.getLogger(__name__)

KENDALL_EXACT_MAX_N = 8


def _check(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """
    Raises:
        DataError: length mismatch, fewer than 3 samples or non-finite values
        UndefinedCorrelationError: either input is constant
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise DataError(f"correlation inputs differ in length: {x.size} vs {y.size}")
    if x.size < 3:
        raise DataError(f"correlation needs at least 3 samples, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DataError("correlation inputs contain non-finite values")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError("correlation is undefined for a constant input")
    return x, y


def _result(method: CorrelationMethod, coefficient: float, p_value: float, n: int) -> CorrelationResult:
    # an undefined p-value never counts as significant
    p_value = 1.0 if np.isnan(p_value) else p_value
    return CorrelationResult(
        method=method,
        coefficient=float(np.clip(coefficient, -1.0, 1.0)),
        p_value=float(np.clip(p_value, 0.0, 1.0)),
        n=n,
    )


def midranks(values: Sequence[float]) -> np.ndarray:
    """
    1-based ranks with ties sharing their average rank.

    Example:
        >>> midranks([1, 2, 2, 3])
        array([1. , 2.5, 2.5, 4. ])
    """
    return stats.rankdata(np.asarray(values, dtype=np.float64), method="average")


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Sample Pearson r; p-value from Student-t with n - 2 degrees of freedom."""
    x, y = _check(x, y)
    res = stats.pearsonr(x, y)
    return _result(CorrelationMethod.PEARSON, res.statistic, res.pvalue, x.size)


def spearman(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Pearson on mid-ranks; same t-based p-value."""
    x, y = _check(x, y)
    res = stats.spearmanr(x, y)
    return _result(CorrelationMethod.SPEARMAN, res.statistic, res.pvalue, x.size)


def _tie_sums(values: np.ndarray) -> tuple[float, float, float]:
    """Sums of t(t-1)(2t+5), t(t-1) and t(t-1)(t-2) over tie groups of size t."""
    _, counts = np.unique(values, return_counts=True)
    t = counts[counts > 1].astype(np.float64)
    return float(np.sum(t * (t - 1) * (2 * t + 5))), float(np.sum(t * (t - 1))), float(np.sum(t * (t - 1) * (t - 2)))


def kendall_normal_pvalue(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Two-sided p-value of Kendall's S = C - D from the normal approximation.

    Variance n(n-1)(2n+5)/18 with the usual tie corrections; |S| is reduced
    by 1 (continuity correction) before standardizing.
    """
    x, y = _check(x, y)
    n = float(x.size)
    upper = np.triu_indices(x.size, k=1)
    s = float(np.sum(np.sign(x[:, None] - x[None, :])[upper] * np.sign(y[:, None] - y[None, :])[upper]))

    vx, tx1, tx2 = _tie_sums(x)
    vy, ty1, ty2 = _tie_sums(y)
    var = (n * (n - 1) * (2 * n + 5) - vx - vy) / 18.0
    var += tx1 * ty1 / (2.0 * n * (n - 1))
    if n > 2:
        var += tx2 * ty2 / (9.0 * n * (n - 1) * (n - 2))
    if var <= 0.0:
        return 1.0
    z = max(abs(s) - 1.0, 0.0) / np.sqrt(var)
    return float(min(1.0, 2.0 * stats.norm.sf(z)))


def kendall(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """
    Kendall tau-b.

    p-value: exact null distribution for n <= 8 without ties, otherwise
    kendall_normal_pvalue.
    """
    x, y = _check(x, y)
    has_ties = np.unique(x).size < x.size or np.unique(y).size < y.size
    if x.size <= KENDALL_EXACT_MAX_N and not has_ties:
        res = stats.kendalltau(x, y, variant="b", method="exact")
        return _result(CorrelationMethod.KENDALL, res.statistic, res.pvalue, x.size)
    res = stats.kendalltau(x, y, variant="b")
    return _result(CorrelationMethod.KENDALL, res.statistic, kendall_normal_pvalue(x, y), x.size)


CORRELATIONS = {
    CorrelationMethod.PEARSON: pearson,
    CorrelationMethod.SPEARMAN: spearman,
    CorrelationMethod.KENDALL: kendall,
}


def correlate(method: CorrelationMethod | str, x: Sequence[float], y: Sequence[float]) -> CorrelationResult | None:
    """Like the named function, but returns None where the correlation is undefined."""
    try:
        return CORRELATIONS[CorrelationMethod(method)](x, y)
    except UndefinedCorrelationError:
        logger.debug("%s correlation undefined (constant input)", method)
        return None
