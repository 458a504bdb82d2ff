"""q-deformed logarithm, exponential, product and the pseudo-additive combiner.

Every function accepts scalars or numpy arrays and a ``QIndex`` or a plain
float for q. Scalar inputs give a float back. Deformed formulas are evaluated
through ``expm1``/``log1p`` so that nothing cancels when q is close to 1; inside
the classical threshold the exact classical formula is used instead.
"""
from __future__ import annotations

from typing import Union

import numpy as np

from errors import QDomainError
from models import Composition, QLike, as_qindex

ArrayLike = Union[float, np.ndarray]


def _result(value: np.ndarray, *inputs: object) -> ArrayLike:
    if all(np.ndim(item) == 0 for item in inputs):
        return float(value)
    return value


def _require_positive_argument(name: str, values: np.ndarray) -> None:
    if not np.all(values > 0):
        bad = values[~(values > 0)] if values.ndim else values
        raise QDomainError(f"{name} requires positive arguments, got {bad!r}")


def ln_q(x: ArrayLike, q: QLike) -> ArrayLike:
    """q-logarithm (x^(1-q) - 1) / (1 - q) for x > 0."""
    index = as_qindex(q).require_positive()
    values = np.asarray(x, dtype=float)
    _require_positive_argument("ln_q", values)
    if index.is_classical:
        return _result(np.log(values), x)
    k = index.one_minus_q
    return _result(np.expm1(k * np.log(values)) / k, x)


def exp_q(x: ArrayLike, q: QLike) -> ArrayLike:
    """q-exponential with the Tsallis cut-off.

    Returns [1 + (1-q) x]^(1/(1-q)) where the base is positive and exactly 0
    elsewhere.
    """
    index = as_qindex(q).require_positive()
    values = np.asarray(x, dtype=float)
    if np.any(np.isnan(values)):
        raise QDomainError("exp_q got NaN")
    if index.is_classical:
        return _result(np.exp(values), x)
    k = index.one_minus_q
    shifted = k * values
    live = shifted > -1.0
    safe = np.where(live, shifted, 0.0)
    with np.errstate(over="ignore"):
        powered = np.exp(np.log1p(safe) / k)
    return _result(np.where(live, powered, 0.0), x)


def q_product(x: ArrayLike, y: ArrayLike, q: QLike) -> ArrayLike:
    """q-product (x^(1-q) + y^(1-q) - 1)^(1/(1-q)), zero outside its support."""
    index = as_qindex(q).require_positive()
    xs, ys = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if index.is_classical:
        return _result(xs * ys, x, y)
    positive = (xs > 0) & (ys > 0)
    safe_x = np.where(positive, xs, 1.0)
    safe_y = np.where(positive, ys, 1.0)
    combined = exp_q(np.asarray(ln_q(safe_x, index)) + np.asarray(ln_q(safe_y, index)), index)
    return _result(np.where(positive, combined, 0.0), x, y)


def q_log_ratio(x: ArrayLike, y: ArrayLike, q: QLike) -> ArrayLike:
    """ln_q(x / y) without forming the ratio.

    Equal to y^(q-1) (ln_q x - ln_q y); the log-difference form is used because
    it neither overflows on the ratio nor cancels when x is close to y.
    """
    index = as_qindex(q).require_positive()
    xs, ys = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    _require_positive_argument("q_log_ratio", xs)
    _require_positive_argument("q_log_ratio", ys)
    log_ratio = np.log(xs) - np.log(ys)
    if index.is_classical:
        return _result(log_ratio, x, y)
    k = index.one_minus_q
    return _result(np.expm1(k * log_ratio) / k, x, y)


def pseudo_add(
    a: ArrayLike,
    b: ArrayLike,
    q: QLike,
    mode: Composition | str = Composition.ENTROPY,
) -> ArrayLike:
    """Pseudo-additive composition a + b + c*a*b.

    c is (1 - q) for entropies and (q - 1) for relative entropies.
    """
    index = as_qindex(q)
    coefficient = 1.0 - index.effective
    if Composition(mode) is Composition.DIVERGENCE:
        coefficient = -coefficient
    a_values = np.asarray(a, dtype=float)
    b_values = np.asarray(b, dtype=float)
    return _result(a_values + b_values + coefficient * a_values * b_values, a, b)


__all__ = ["exp_q", "ln_q", "pseudo_add", "q_log_ratio", "q_product"]
