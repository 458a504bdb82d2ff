"""Shannon/Tsallis entropies and the KL/Tsallis relative entropies.

The defining formulas are the computational path; the ``*_qlog`` variants use
the q-logarithm representations and serve as independent cross-checks.
Points where p vanishes contribute nothing.
"""
from __future__ import annotations

import numpy as np

from distributions import absolutely_continuous, escort_weights, require_same_grid
from errors import AbsoluteContinuityError
from models import Distribution, QLike, as_qindex
from q_algebra import ln_q, q_log_ratio


def _support_values(p: Distribution) -> tuple[np.ndarray, np.ndarray]:
    support = p.support
    return p.density[support], p.grid.weights[support]


def _deformed_log_ratio(log_ratio: np.ndarray, exponent: float) -> np.ndarray:
    # (e^(exponent*log_ratio) - 1) / exponent without cancellation near exponent = 0
    return np.expm1(exponent * log_ratio) / exponent


def _check_pair(p: Distribution, r: Distribution) -> None:
    require_same_grid(p, r)
    if not absolutely_continuous(p, r):
        raise AbsoluteContinuityError("p puts mass on points where r vanishes")


def shannon_entropy(p: Distribution) -> float:
    density, weights = _support_values(p)
    return float(-np.sum(weights * density * np.log(density)))


def tsallis_entropy(p: Distribution, q: QLike) -> float:
    index = as_qindex(q)
    if index.is_classical:
        return shannon_entropy(p)
    density, weights = _support_values(p)
    terms = density * _deformed_log_ratio(np.log(density), index.q - 1.0)
    return float(-np.sum(weights * terms))


def tsallis_entropy_qlog(p: Distribution, q: QLike) -> float:
    """-integral of p^q ln_q p."""
    index = as_qindex(q)
    density, weights = _support_values(p)
    escort = escort_weights(p, index)[p.support]
    return float(-np.sum(weights * escort * np.asarray(ln_q(density, index))))


def kl_divergence(p: Distribution, r: Distribution) -> float:
    _check_pair(p, r)
    support = p.support
    density = p.density[support]
    reference = r.density[support]
    weights = p.grid.weights[support]
    return float(np.sum(weights * density * (np.log(density) - np.log(reference))))


def tsallis_relative_entropy(p: Distribution, r: Distribution, q: QLike) -> float:
    index = as_qindex(q)
    if index.is_classical:
        return kl_divergence(p, r)
    _check_pair(p, r)
    support = p.support
    density = p.density[support]
    log_ratio = np.log(density) - np.log(r.density[support])
    terms = density * _deformed_log_ratio(log_ratio, index.q - 1.0)
    return float(np.sum(p.grid.weights[support] * terms))


def tsallis_relative_entropy_qlog(p: Distribution, r: Distribution, q: QLike) -> float:
    """-integral of p ln_q(r / p)."""
    index = as_qindex(q)
    _check_pair(p, r)
    support = p.support
    density = p.density[support]
    ratio_logs = np.asarray(q_log_ratio(r.density[support], density, index))
    return float(-np.sum(p.grid.weights[support] * density * ratio_logs))


def entropy_divergence_link(p: Distribution, r: Distribution, q: QLike) -> float:
    """Residual of I_q(p||r) = -integral p^q ln_q r - S_q(p)."""
    index = as_qindex(q)
    _check_pair(p, r)
    support = p.support
    escort = escort_weights(p, index)[support]
    cross = -np.sum(p.grid.weights[support] * escort * np.asarray(ln_q(r.density[support], index)))
    return tsallis_relative_entropy(p, r, index) - (float(cross) - tsallis_entropy(p, index))


__all__ = [
    "entropy_divergence_link",
    "kl_divergence",
    "shannon_entropy",
    "tsallis_entropy",
    "tsallis_entropy_qlog",
    "tsallis_relative_entropy",
    "tsallis_relative_entropy_qlog",
]
