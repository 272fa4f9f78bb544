"""Python access to the gkz_asym C++ library."""

from ._core import (
    GkzError,
    connection,
    eval_F,
    eval_I,
    gamma,
    hankel,
    load_problem,
    log_gamma,
    reduce,
)

__all__ = [
    "GkzError",
    "connection",
    "eval_F",
    "eval_I",
    "gamma",
    "hankel",
    "load_problem",
    "log_gamma",
    "reduce",
]
