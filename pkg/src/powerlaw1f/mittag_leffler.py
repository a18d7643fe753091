"""Two-parameter Mittag-Leffler function on the non-positive real axis.

Only ``E_{mu,nu}(-x)`` with ``x >= 0`` and ``0 < mu <= 2`` is needed by the
Fourier-mode solutions in :mod:`powerlaw1f.fracpde`, so this is not a general
complex-plane implementation.

Evaluation strategy for ``z = -x``:

* ``x <= 1``: the Taylor series in double precision (terms decrease from
  the start, no cancellation).
* ``x**(1/mu) <= ASYMPTOTIC_THRESHOLD``: the Taylor series summed in
  mpmath with enough guard digits to absorb the ``exp(x**(1/mu))``
  cancellation of the alternating series.
* otherwise: the large-argument expansion, i.e. the algebraic series
  ``-sum_m z**-m / Gamma(nu - mu m)`` plus, for ``mu > 1``, the two
  oscillating exponential terms ``(1/mu) zeta**(1-nu) exp(zeta)`` at
  ``zeta = x**(1/mu) exp(+-i pi/mu)``.  Its truncation error is of order
  ``exp(-x**(1/mu))``.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import special

__all__ = ["mittag_leffler", "ml_series_mp"]

ASYMPTOTIC_THRESHOLD = 38.0
_MAX_TERMS = 20000


def _check_params(mu, nu):
    if not 0 < mu <= 2:
        raise ValueError(f"order mu must lie in (0, 2], got {mu}")
    if not nu > 0:
        raise ValueError(f"second parameter nu must be positive, got {nu}")


def ml_series_mp(mu, nu, z, dps=None, terms=None):
    """Taylor series ``sum_k z**k / Gamma(mu k + nu)`` in mpmath precision.

    With ``terms`` given, exactly that many terms are summed; otherwise the
    sum runs until the terms drop below the working precision.
    """
    z = mpmath.mpf(z)
    if dps is None:
        growth = float(abs(z)) ** (1.0 / mu) if z != 0 else 0.0
        dps = 22 + int(growth / math.log(10) * 1.05)
    with mpmath.workdps(dps):
        mu_m, nu_m = mpmath.mpf(mu), mpmath.mpf(nu)
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        eps = mpmath.mpf(10) ** (-dps)
        limit = terms if terms is not None else _MAX_TERMS
        for k in range(limit):
            term = power * mpmath.rgamma(mu_m * k + nu_m)
            total += term
            if terms is None and k > 2 and abs(term) < eps * max(abs(total), eps):
                break
            power *= z
        else:
            if terms is None:
                raise ArithmeticError("Mittag-Leffler series did not converge")
        return +total


def _series_double(mu, nu, x):
    z = -x
    total = 0.0
    power = 1.0
    for k in range(200):
        term = power * special.rgamma(mu * k + nu)
        total += term
        if k > 2 and abs(term) < 1e-17 * max(abs(total), 1e-300):
            break
        power *= z
    return total


def _asymptotic(mu, nu, x):
    z = -x
    log_x = math.log(x)
    # |1/Gamma(nu - mu m)| <= Gamma(1 - nu + mu m) / pi; sum up to the
    # smallest bound, where the divergent series is optimally truncated
    total = 0.0
    best = math.inf
    for m in range(1, 100000):
        arg = 1.0 - nu + mu * m
        log_bound = (math.lgamma(arg) if arg > 0 else 0.0) - m * log_x
        if m > 1 and log_bound > best and arg > 1.0:
            break
        best = min(best, log_bound)
        total -= special.rgamma(nu - mu * m) * z ** (-m)
        if log_bound < -41.0 + math.log(max(abs(total), 1e-300)):
            break
    if mu > 1:
        zeta = x ** (1.0 / mu) * complex(math.cos(math.pi / mu), math.sin(math.pi / mu))
        exp_part = zeta ** (1.0 - nu) * np.exp(zeta)
        total += 2.0 / mu * exp_part.real
    return total


def _closed_form(mu, nu, x):
    if mu == 1 and nu == 1:
        return math.exp(-x)
    if mu == 1 and nu == 2:
        return -math.expm1(-x) / x if x > 0 else 1.0
    if mu == 2 and nu == 1:
        return math.cos(math.sqrt(x))
    if mu == 2 and nu == 2:
        r = math.sqrt(x)
        return math.sin(r) / r if r > 0 else 1.0
    return None


def _ml_scalar(mu, nu, z):
    if z > 0:
        raise ValueError("only non-positive real arguments are supported")
    x = -float(z)
    closed = _closed_form(mu, nu, x)
    if closed is not None:
        return closed
    if x == 0:
        return float(special.rgamma(nu))
    if x <= 1.0:
        return _series_double(mu, nu, x)
    if x ** (1.0 / mu) <= ASYMPTOTIC_THRESHOLD:
        return float(ml_series_mp(mu, nu, -x))
    return _asymptotic(mu, nu, x)


def mittag_leffler(mu: float, nu: float, z):
    """``E_{mu,nu}(z)`` for real ``z <= 0``; scalars or arrays.

    ``E_{mu,1}`` is the one-parameter function ``E_mu``.  Accuracy is about
    1e-12 absolute over the supported domain.
    """
    _check_params(mu, nu)
    z_arr = np.asarray(z, dtype=float)
    if np.any(np.isnan(z_arr)):
        raise ValueError("argument must not be NaN")
    if z_arr.ndim == 0:
        return _ml_scalar(mu, nu, float(z_arr))
    flat = z_arr.ravel()
    out = np.empty_like(flat)
    # repeated arguments are common (|k| symmetric grids); evaluate each once
    uniq, inverse = np.unique(flat, return_inverse=True)
    vals = np.array([_ml_scalar(mu, nu, float(v)) for v in uniq])
    out[:] = vals[inverse]
    return out.reshape(z_arr.shape)
