"""Large-dimension limits for the product statistics and standardization.

For ``p/n -> c`` the centred, sqrt(n)-scaled products are asymptotically
standard normal once divided by the shift-conditional standard deviations

* covariance product:  ``sigma2 = [mu_nu'Sigma mu_nu + c*tr(Sigma^2)/p]
  * l'Sigma l + (l'Sigma mu_nu)^2 + l'Sigma^3 l``   (any c >= 0),
* precision product:   ``sigma2_tilde = (1-c)^{-3} * ((l'Sigma^{-1}
  mu_nu)^2 + l'Sigma^{-1} l * (1 + mu_nu'Sigma^{-1} mu_nu))``
  (0 <= c < 1),

with centres ``l'Sigma mu_nu`` and ``(1-c)^{-1} l'Sigma^{-1} mu_nu``.
The precision variance has an equivalent second spelling,
``(1-c)^{-3} (2 a^2 + b (1 + delta^2))`` with ``delta^2 = m - a^2/b``;
both are evaluated and must agree.

Replacing the random shift by its mean gives the unconditional limits
used when the shift dimension grows with n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidInputError, RegimeError, ZeroVectorError
from .model import ModelSpec
from .products import ProductDraw, ProductKind, QuadraticCache, precompute_quadratics

_CHUNK = 8192


@dataclass(frozen=True)
class AsymptoticParams:
    """Centre and variance of one product limit, conditional on the shift."""

    kind: ProductKind
    c: float
    center: float
    variance: float
    nu_value: NDArray


@dataclass(frozen=True)
class CorollaryParams:
    """Unconditional limits obtained by substituting the shift mean.

    ``omega_mean``/``omega_cov`` are the mean and covariance of the shift,
    ``gamma`` the limit of q/n (plumbing only; no sampler depends on it).
    """

    omega_mean: NDArray
    omega_cov: NDArray | None
    gamma: float | None
    sigma2: float
    sigma2_tilde: float | None


@dataclass(frozen=True)
class SampleSet:
    """Standardized Monte Carlo draws of one product statistic."""

    standardized: NDArray
    kind: ProductKind
    c: float
    n: int
    config: Any = None


def _variance_cov(
    cache: QuadraticCache, c: float, m_eig: NDArray, frobenius_variant: bool
) -> tuple[float, float]:
    """(centre, variance) of the covariance product for one rotated mean."""
    center, quad = cache.cov_forms(m_eig)
    trace_term = c * cache.tr_sigma2 if frobenius_variant else c * cache.tr_sigma2 / cache.p
    variance = (quad + trace_term) * cache.l_sigma_l + center**2 + cache.l_sigma3_l
    return center, variance


def _variance_precision(
    cache: QuadraticCache, c: float, m_eig: NDArray
) -> tuple[float, float]:
    """(centre, variance) of the precision product for one rotated mean.

    Evaluates the delta^2 spelling and, in debug builds, checks it against
    the direct spelling (they agree to rounding by construction).
    """
    a, m, delta_sq = cache.precision_forms(m_eig)
    b = cache.l_sigmainv_l
    factor = 1.0 / (1.0 - c) ** 3
    variance = factor * (2.0 * a * a + b * (1.0 + delta_sq))
    if __debug__:
        direct = factor * (a * a + b * (1.0 + m))
        assert abs(variance - direct) <= 1e-9 * max(abs(direct), 1.0), (
            "precision variance spellings disagree"
        )
    return a / (1.0 - c), variance


def sigma2_nu(
    model: ModelSpec,
    l: NDArray,
    c: float,
    nu_value: NDArray,
    *,
    frobenius_variant: bool = False,
    cache: QuadraticCache | None = None,
) -> float:
    """Conditional limit variance of sqrt(n)-scaled ``l'S xbar``.

    Parameters
    ----------
    frobenius_variant : bool
        Use ``c * tr(Sigma^2)`` instead of ``c * tr(Sigma^2) / p`` in the
        trace term.  Off by default; only useful for comparing against
        outputs that were produced with the unnormalized spelling.
    """
    if c < 0:
        raise RegimeError("c must be >= 0")
    cache = cache if cache is not None else precompute_quadratics(model, l)
    m_eig = cache.mu_nu_eig(np.asarray(nu_value, dtype=float).reshape(-1))
    return _variance_cov(cache, c, m_eig, frobenius_variant)[1]


def sigma2_tilde_nu(
    model: ModelSpec,
    l: NDArray,
    c: float,
    nu_value: NDArray,
    *,
    cache: QuadraticCache | None = None,
) -> float:
    """Conditional limit variance of sqrt(n)-scaled ``l'S^{-1} xbar``."""
    if not 0.0 <= c < 1.0:
        raise RegimeError("c must lie in [0, 1) for the precision product")
    cache = cache if cache is not None else precompute_quadratics(model, l)
    if cache.l_is_zero:
        raise ZeroVectorError("l must be nonzero for the precision product")
    m_eig = cache.mu_nu_eig(np.asarray(nu_value, dtype=float).reshape(-1))
    return _variance_precision(cache, c, m_eig)[1]


def asymptotic_params(
    model: ModelSpec,
    l: NDArray,
    c: float,
    nu_value: NDArray,
    kind: ProductKind,
    *,
    cache: QuadraticCache | None = None,
) -> AsymptoticParams:
    """Bundle centre and variance of the chosen product for one shift."""
    cache = cache if cache is not None else precompute_quadratics(model, l)
    nu_value = np.asarray(nu_value, dtype=float).reshape(-1)
    m_eig = cache.mu_nu_eig(nu_value)
    if kind is ProductKind.COV_TIMES_MEAN:
        if c < 0:
            raise RegimeError("c must be >= 0")
        center, variance = _variance_cov(cache, c, m_eig, False)
    else:
        if not 0.0 <= c < 1.0:
            raise RegimeError("c must lie in [0, 1) for the precision product")
        if cache.l_is_zero:
            raise ZeroVectorError("l must be nonzero for the precision product")
        center, variance = _variance_precision(cache, c, m_eig)
    return AsymptoticParams(kind=kind, c=c, center=center, variance=variance, nu_value=nu_value)


def corollary_params(
    model: ModelSpec,
    l: NDArray,
    c: float,
    omega_mean: NDArray,
    *,
    omega_cov: NDArray | None = None,
    gamma: float | None = None,
    cache: QuadraticCache | None = None,
) -> CorollaryParams:
    """Unconditional limits: the conditional formulas evaluated at the shift mean.

    ``sigma2_tilde`` is filled only when ``c < 1`` and ``l`` is nonzero
    (the precision product does not exist otherwise).
    """
    cache = cache if cache is not None else precompute_quadratics(model, l)
    omega_mean = np.asarray(omega_mean, dtype=float).reshape(-1)
    sigma2 = sigma2_nu(model, l, c, omega_mean, cache=cache)
    sigma2_tilde = None
    if 0.0 <= c < 1.0 and not cache.l_is_zero:
        sigma2_tilde = sigma2_tilde_nu(model, l, c, omega_mean, cache=cache)
    return CorollaryParams(
        omega_mean=omega_mean,
        omega_cov=None if omega_cov is None else np.asarray(omega_cov, dtype=float),
        gamma=gamma,
        sigma2=sigma2,
        sigma2_tilde=sigma2_tilde,
    )


def standardize(
    draws: Sequence[ProductDraw] | Iterable[ProductDraw],
    model: ModelSpec,
    l: NDArray,
    c: float,
    n: int,
    kind: ProductKind,
    *,
    cache: QuadraticCache | None = None,
    frobenius_variant: bool = False,
) -> SampleSet:
    """Centre and scale raw product draws with each draw's own shift.

    Each draw is mapped to ``sqrt(n) * (value - centre(nu)) / sd(nu)``,
    which is asymptotically standard normal.  Evaluation is vectorized in
    chunks over the draws.
    """
    draws = list(draws)
    if not draws:
        raise InvalidInputError("draws must be nonempty")
    cache = cache if cache is not None else precompute_quadratics(model, l)
    if cache.l_is_zero:
        raise ZeroVectorError("standardization is undefined for l = 0 (zero variance)")
    values = np.array([d.value for d in draws], dtype=float)
    nus = np.array([d.nu_used for d in draws], dtype=float).reshape(len(draws), -1)
    out = np.empty_like(values)
    sqrt_n = np.sqrt(n)
    for start in range(0, len(values), _CHUNK):
        stop = min(start + _CHUNK, len(values))
        m_eig = cache.mu_nu_eig_batch(nus[start:stop])
        if kind is ProductKind.COV_TIMES_MEAN:
            if c < 0:
                raise RegimeError("c must be >= 0")
            center, quad = cache.cov_forms_batch(m_eig)
            trace_term = (
                c * cache.tr_sigma2 if frobenius_variant else c * cache.tr_sigma2 / cache.p
            )
            variance = (quad + trace_term) * cache.l_sigma_l + center**2 + cache.l_sigma3_l
        else:
            if not 0.0 <= c < 1.0:
                raise RegimeError("c must lie in [0, 1) for the precision product")
            a, _, delta_sq = cache.precision_forms_batch(m_eig)
            b = cache.l_sigmainv_l
            center = a / (1.0 - c)
            variance = (2.0 * a * a + b * (1.0 + delta_sq)) / (1.0 - c) ** 3
        out[start:stop] = sqrt_n * (values[start:stop] - center) / np.sqrt(variance)
    return SampleSet(standardized=out, kind=kind, c=c, n=n)
