"""Monthly evaluation metrics for disaggregated EV load.

Three measures are reported per month and averaged: the relative error
of monthly energy (percent), the absolute error of monthly energy (kWh),
and the normalised mean square error of the load signal (sum of squared
sample differences over the summed squared ground truth, so an all-zero
estimate scores exactly 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import PowerSeries


def _values_of(x) -> np.ndarray:
    if isinstance(x, PowerSeries):
        return x.values
    return np.asarray(x, dtype=np.float64)


def energy_kwh(x) -> float:
    """Energy of a minute-sampled kW trace: sum of samples / 60."""
    return float(_values_of(x).sum()) / 60.0


@dataclass(frozen=True)
class MonthlyEval:
    """Per-month energy totals and metric terms.

    ``err1_term`` is undefined (None) when the month has no true EV
    energy; ``mse_term`` is undefined when the true signal is all zero.
    """

    month: str
    e_true: float
    e_est: float
    err1_term: float | None
    err2_term: float
    mse_term: float | None


def evaluate_month(month: str, truth, estimate) -> MonthlyEval:
    """Compare one month of estimated EV load against its ground truth."""
    x_true = _values_of(truth)
    x_est = _values_of(estimate)
    if x_true.shape != x_est.shape:
        raise ValueError(f"month {month}: truth and estimate lengths differ "
                         f"({x_true.size} vs {x_est.size})")
    e_true = energy_kwh(x_true)
    e_est = energy_kwh(x_est)
    err2 = abs(e_true - e_est)
    err1 = err2 / e_true if e_true > 0.0 else None
    denom = float(np.square(x_true).sum())
    mse = float(np.square(x_true - x_est).sum()) / denom if denom > 0.0 else None
    return MonthlyEval(month, e_true, e_est, err1, err2, mse)


def _require(months: list[MonthlyEval], term: str) -> list[float]:
    if not months:
        raise ValueError("no months to aggregate")
    bad = [m.month for m in months if getattr(m, term) is None]
    if bad:
        raise ValueError(f"{term} undefined for months with zero ground truth: "
                         + ", ".join(bad))
    return [getattr(m, term) for m in months]


def err1(months: list[MonthlyEval]) -> float:
    """Mean relative monthly energy error, in percent."""
    return 100.0 * float(np.mean(_require(months, "err1_term")))


def err2(months: list[MonthlyEval]) -> float:
    """Mean absolute monthly energy error, in kWh."""
    if not months:
        raise ValueError("no months to aggregate")
    return float(np.mean([m.err2_term for m in months]))


def mse(months: list[MonthlyEval]) -> float:
    """Mean normalised squared signal error across months."""
    return float(np.mean(_require(months, "mse_term")))


@dataclass(frozen=True)
class EvalSummary:
    """Mean and population standard deviation of each metric over months."""

    n_months: int
    err1_mean: float
    err1_std: float
    err2_mean: float
    err2_std: float
    mse_mean: float
    mse_std: float

    def table_row(self) -> str:
        """The familiar mean-plus-minus-std presentation of the three metrics."""
        return (f"Err1 {self.err1_mean:.1f}% ± {self.err1_std:.1f}% | "
                f"Err2 {self.err2_mean:.1f} ± {self.err2_std:.1f} (kWh) | "
                f"MSE {self.mse_mean:.2f} ± {self.mse_std:.2f}")


def summarize(months: list[MonthlyEval]) -> EvalSummary:
    """Aggregate per-month terms into mean and standard deviation.

    The spread column is the population standard deviation of the
    per-month terms, labelled "std" throughout.
    """
    terms1 = np.asarray(_require(months, "err1_term")) * 100.0
    terms2 = np.asarray([m.err2_term for m in months])
    terms3 = np.asarray(_require(months, "mse_term"))
    return EvalSummary(
        n_months=len(months),
        err1_mean=float(terms1.mean()), err1_std=float(terms1.std()),
        err2_mean=float(terms2.mean()), err2_std=float(terms2.std()),
        mse_mean=float(terms3.mean()), mse_std=float(terms3.std()),
    )
