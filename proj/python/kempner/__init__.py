"""Kempner sums over digit-restricted integers, with certified error bounds."""

from ._core import (
    ConvergenceTooSlow,
    InconclusiveOrder,
    InvalidProblem,
    KempnerError,
    Problem,
    bounds,
    closed_form_low_moments,
    expansion,
    fit_decay_order,
    kempner,
    moments,
    oracle,
    problems_with_cardinality,
    run_cli,
    stieltjes_U,
)

__all__ = [
    "ConvergenceTooSlow",
    "InconclusiveOrder",
    "InvalidProblem",
    "KempnerError",
    "Problem",
    "bounds",
    "closed_form_low_moments",
    "expansion",
    "fit_decay_order",
    "kempner",
    "moments",
    "oracle",
    "problems_with_cardinality",
    "run_cli",
    "stieltjes_U",
]
