"""Frequency power-law attenuation and the spectra it implies.

A signal component at frequency ``f`` decays as ``I0 * exp(-alpha(f) * t)``
with ``alpha(f) = alpha1 + alpha0 * f**y``.  Integrating that decay over
``t >= 0`` gives the power density ``I0 / alpha(f)``: a ``1/f**y`` spectrum
when ``alpha1 == 0`` and a spectrum that stays finite at DC otherwise.

Frequencies are ordinary frequencies (Hz) throughout; the angular frequency
only appears as the transform variable of :func:`appendix_spectrum_check`.
Attenuation here is per unit *time*; a spatial rate follows by dividing by
the propagation speed (see :mod:`powerlaw1f.fracpde`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

__all__ = [
    "AttenuationModel",
    "BandPowerResult",
    "SpectrumCheck",
    "attenuation_coeff",
    "power_spectrum",
    "band_power",
    "probe_shows_growth",
    "dissipative_dimension",
    "appendix_spectrum_check",
]

QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-12
# divergence evidence: f_lo = f_hi * 2**-octaves for octaves in 1, 2, 4, ..., 64
PROBE_OCTAVES = tuple(2**j for j in range(7))
GROWTH_FACTOR = 1.5


@dataclass(frozen=True)
class AttenuationModel:
    """Parameters of ``alpha(f) = alpha1 + alpha0 * f**y``."""

    I0: float = 1.0
    alpha0: float = 1.0
    alpha1: float = 0.0
    y: float = 1.0

    def __post_init__(self):
        if not self.I0 > 0:
            raise ValueError(f"I0 must be positive, got {self.I0}")
        if not self.alpha0 > 0:
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")
        if not self.alpha1 >= 0:
            raise ValueError(f"alpha1 must be non-negative, got {self.alpha1}")
        if not 0.0 <= self.y <= 2.0:
            raise ValueError(f"attenuation exponent y must lie in [0, 2], got {self.y}")

    @property
    def knee(self) -> float:
        """Frequency where the offset and the power-law term are equal."""
        if self.alpha1 == 0 or self.y == 0:
            return 0.0
        return (self.alpha1 / self.alpha0) ** (1.0 / self.y)


@dataclass(frozen=True)
class BandPowerResult:
    value: float | None
    divergent: bool
    divergence_evidence: tuple = field(default_factory=tuple)
    abserr: float = 0.0

    def __post_init__(self):
        if self.divergent != (self.value is None):
            raise ValueError("a divergent result carries no finite value")


@dataclass(frozen=True)
class SpectrumCheck:
    analytic: complex
    numeric: complex
    rel_err: float


def _alpha(model, f):
    return model.alpha1 + model.alpha0 * np.power(f, model.y)


def attenuation_coeff(model: AttenuationModel, f):
    """Attenuation rate ``alpha1 + alpha0 * f**y`` (nepers per unit time)."""
    f_arr = np.asarray(f, dtype=float)
    if np.any(f_arr < 0) or np.any(np.isnan(f_arr)):
        raise ValueError("frequency must be non-negative")
    out = _alpha(model, f_arr)
    return float(out) if out.ndim == 0 else out


def power_spectrum(model: AttenuationModel, f):
    """Time-integrated power ``I0 / alpha(f)`` at frequency ``f``.

    Raises ``ZeroDivisionError`` at ``f == 0`` when there is no offset term
    and ``y > 0``; the pure power law is singular there.
    """
    f_arr = np.asarray(f, dtype=float)
    if np.any(f_arr < 0) or np.any(np.isnan(f_arr)):
        raise ValueError("frequency must be non-negative")
    if model.alpha1 == 0 and model.y > 0 and np.any(f_arr == 0):
        raise ZeroDivisionError("power spectrum I0/(alpha0 f^y) is singular at f = 0")
    out = model.I0 / _alpha(model, f_arr)
    return float(out) if out.ndim == 0 else out


def _quad(model, a, b):
    value, abserr = integrate.quad(
        lambda f: model.I0 / _alpha(model, f),
        a,
        b,
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        limit=400,
    )
    return value, abserr


def _divergence_probe(model, f_hi):
    """Partial integrals over [f_hi * 2**-m, f_hi] for m = 1, 2, 4, ... octaves.

    Each refinement doubles the number of octaves covered below ``f_hi``.
    The integral is accumulated octave by octave so every quadrature stays
    on a well-scaled interval.
    """
    evidence = []
    total = 0.0
    done = 0
    for octaves in PROBE_OCTAVES:
        for j in range(done, octaves):
            hi = f_hi * 2.0**-j
            total += _quad(model, hi / 2.0, hi)[0]
        done = octaves
        evidence.append((f_hi * 2.0**-octaves, total))
    return tuple(evidence)


def probe_shows_growth(evidence, factor: float = GROWTH_FACTOR, runs: int = 3) -> bool:
    """True when the partial integrals grow by more than ``factor`` on
    ``runs`` successive refinements."""
    values = [v for _, v in evidence]
    streak = 0
    for prev, cur in zip(values, values[1:]):
        streak = streak + 1 if prev > 0 and cur > factor * prev else 0
        if streak >= runs:
            return True
    return False


def band_power(model: AttenuationModel, f_lo: float, f_hi: float) -> BandPowerResult:
    """Integrate :func:`power_spectrum` over ``[f_lo, f_hi]``.

    With ``f_lo == 0`` and no offset term the integrand is singular at DC.
    For ``y >= 1`` the integral diverges (the infrared catastrophe); the
    result is flagged divergent and carries the partial integrals of a
    geometric refinement toward DC as evidence.
    """
    if not 0 <= f_lo < f_hi:
        raise ValueError("band must satisfy 0 <= f_lo < f_hi")
    if not np.isfinite(f_hi):
        raise ValueError("upper band edge must be finite")

    singular = f_lo == 0 and model.alpha1 == 0 and model.y > 0
    evidence = _divergence_probe(model, f_hi) if singular else ()
    if singular and model.y >= 1:
        return BandPowerResult(None, True, evidence)

    value, abserr = _quad(model, f_lo, f_hi)
    return BandPowerResult(value, False, evidence, abserr)


def dissipative_dimension(alpha: float, alpha0: float, f: float) -> float:
    """Exponent read off a single attenuation value: ``ln(alpha/alpha0) / ln f``."""
    if not alpha > 0:
        raise ValueError("attenuation must be positive")
    if not alpha0 > 0:
        raise ValueError("alpha0 must be positive")
    if not f > 0:
        raise ValueError("frequency must be positive")
    if f == 1:
        raise ZeroDivisionError("ln f = 0 at f = 1: the exponent is indeterminate")
    return float(np.log(alpha / alpha0) / np.log(f))


def carrier_closed_form(model: AttenuationModel, f: float, b: float, omega: float) -> complex:
    """Closed form ``I0 (a + b f + j w) / ((a + j w)**2 + b**2 f**2)`` with
    ``a = alpha0 f**y``, as printed for the carrier-modulated decay."""
    a = model.alpha0 * f**model.y
    return complex(model.I0 * (a + b * f + 1j * omega) / ((a + 1j * omega) ** 2 + (b * f) ** 2))


def appendix_spectrum_check(
    model: AttenuationModel,
    f: float,
    b: float = 0.0,
    omega: float = 0.0,
    grid=None,
) -> SpectrumCheck:
    """Compare the closed form above with a direct numerical transform.

    The numerical side integrates ``I0 exp(-a t + j b f t) exp(-j omega t)``
    over ``grid`` with Simpson's rule and is the reference; ``rel_err`` is
    the closed form's relative deviation from it.  The default grid spans
    40 decay times with 2**16 intervals.
    """
    if model.alpha1 != 0:
        raise ValueError("the check applies to the pure power law (alpha1 = 0)")
    if not f > 0:
        raise ValueError("frequency must be positive")
    a = model.alpha0 * f**model.y
    if grid is None:
        grid = np.linspace(0.0, 40.0 / a, 2**16 + 1)
    t = np.asarray(grid, dtype=float)
    if t.ndim != 1 or t.size < 3 or t[0] != 0 or np.any(np.diff(t) <= 0):
        raise ValueError("grid must be increasing and start at t = 0")
    if np.exp(-a * t[-1]) >= 1e-12:
        raise ValueError("grid too short: exp(-alpha t) has not decayed below 1e-12")

    g = model.I0 * np.exp((-a + 1j * (b * f - omega)) * t)
    numeric = complex(integrate.simpson(g, x=t))
    analytic = carrier_closed_form(model, f, b, omega)
    return SpectrumCheck(analytic, numeric, abs(analytic - numeric) / abs(numeric))
