"""Rate fits of error-versus-queries ladders and success frequencies."""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from src.core.data_types import ExperimentRecord
from src.core.exceptions import InputError, RateFitError

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 4
DEFAULT_TOLERANCE = 0.25


@dataclass(frozen=True)
class RateFit:
    """Least-squares line through (log2 n_queries, log2 error).

    Args:
        slope: Fitted slope, about -exponent when the predicted rate holds
        intercept: Fitted intercept in log2 units
        stderr: Standard error of the slope from the residuals
        exponent: Predicted exponent of the error in n
        tolerance: Accepted deviation |slope + exponent|
    """

    slope: float
    intercept: float
    stderr: float
    exponent: float
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def verdict(self) -> bool:
        return abs(self.slope + self.exponent) <= self.tolerance

    def predict(self, n_queries) -> np.ndarray:
        """Error of the fitted line at the given query counts."""
        return 2.0 ** (self.intercept + self.slope * np.log2(np.asarray(n_queries, dtype=float)))

    def __str__(self) -> str:
        status = "ok" if self.verdict else "off"
        return (
            f"slope {self.slope:.3f} +/- {self.stderr:.3f} "
            f"(predicted {-self.exponent:.3f}, tolerance {self.tolerance:g}): {status}"
        )


def fit_points(n_queries, errors, exponent: float, tolerance: float = DEFAULT_TOLERANCE) -> RateFit:
    """Fit a rate to raw (n_queries, error) pairs.

    Pairs with a nonpositive error or query count are dropped with a warning.

    Raises:
        RateFitError: If fewer than four usable pairs remain, or all of them share one query count
    """
    n_queries = np.asarray(n_queries, dtype=float)
    errors = np.asarray(errors, dtype=float)
    usable = (errors > 0) & (n_queries > 0) & np.isfinite(errors)
    if not usable.all():
        logger.warning("Excluding %s records with a degenerate error or query count", int((~usable).sum()))
    if usable.sum() < MIN_FIT_POINTS:
        raise RateFitError(
            f"A rate fit needs at least {MIN_FIT_POINTS} records with positive errors",
            details={"usable": int(usable.sum()), "total": int(errors.size)},
        )
    x = np.log2(n_queries[usable])
    if np.ptp(x) == 0:
        raise RateFitError("All records share one query count", details={"n_queries": float(x[0])})
    result = stats.linregress(x, np.log2(errors[usable]))
    fit = RateFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        stderr=float(result.stderr),
        exponent=float(exponent),
        tolerance=float(tolerance),
    )
    logger.debug("Rate fit: %s", fit)
    return fit


def fit_rate(
    records: Sequence[ExperimentRecord], exponent: float, tolerance: float = DEFAULT_TOLERANCE
) -> RateFit:
    """Fit log2 err_q75 against log2 n_queries over a ladder of records.

    Examples:
        >>> records = [ExperimentRecord("mean", "q", 2**k, 2.0**-k, 50, 0) for k in range(4, 9)]
        >>> fit = fit_rate(records, exponent=1.0)
        >>> round(fit.slope, 6), fit.verdict
        (-1.0, True)
    """
    return fit_points(
        [record.n_queries for record in records],
        [record.err_q75 for record in records],
        exponent,
        tolerance,
    )


def success_frequency(errors, bound: float, confidence: float = 0.95) -> Tuple[float, float]:
    """Fraction of trials with error at most bound, and its Wilson lower confidence limit.

    Raises:
        InputError: If no errors are given
    """
    errors = np.asarray(errors, dtype=float)
    if errors.size == 0:
        raise InputError("No trial errors given")
    successes = int((errors <= bound).sum())
    interval = stats.binomtest(successes, errors.size).proportion_ci(
        confidence_level=confidence, method="wilson"
    )
    return successes / errors.size, float(interval.low)
