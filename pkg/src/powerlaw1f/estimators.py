"""Spectral slope, Hurst exponent and fractal dimension estimators.

Conventions follow the standard time-series literature: i.i.d. noise has
Hurst exponent 0.5, fractional Gaussian noise (fGn) with parameter H gives
H, and a spectrum ``P(f) ~ f**-beta`` gives ``beta``.  The audit compares
these against the relation ``beta = 2 H + 1`` and the three canonical
(D, H, beta) triples; it reports signed residuals and does not force
agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import signal as sps
from scipy import special, stats

from .series import TimeSeries

__all__ = [
    "SpectralEstimate",
    "HurstEstimate",
    "AuditReport",
    "CANONICAL_TRIPLES",
    "welch_psd",
    "fit_spectral_slope",
    "central_decade",
    "expected_rs",
    "hurst_rs",
    "hurst_dfa",
    "fractal_dimension",
    "hurst_from_dimension",
    "line_spectrum",
    "relation_audit",
]

# (D, H, beta) for d = 1
CANONICAL_TRIPLES = {
    "gaussian": (1.5, 0.5, 2.0),
    "white": (2.0, 0.0, 0.0),
    "deterministic": (1.0, 1.0, 1.0),
}
SATURATION = 0.95
LINE_EXCESS_DECADES = 3.0
MIN_SCALE = 16


@dataclass(frozen=True)
class SpectralEstimate:
    freqs: np.ndarray
    psd: np.ndarray
    beta_hat: float | None = None
    fit_band: tuple[float, float] | None = None
    stderr: float | None = None
    n_bins: int = 0

    @property
    def fs(self) -> float:
        return 2.0 * self.freqs[-1]


@dataclass(frozen=True)
class HurstEstimate:
    """Scaling exponent of a fluctuation function.

    ``h`` is the Hurst exponent under ``interpretation`` (``"fgn"`` for a
    stationary input, ``"fbm"`` when the input looks like a cumulative
    path and the DFA exponent is ``h + 1``), clipped to [0, 1].  At or
    above ``SATURATION`` the estimate is pinned to 1 and ``saturated`` is
    set, as for deterministic trends.  ``exponent`` is the raw fitted value.
    """

    h: float
    ci: float
    exponent: float
    interpretation: str = "fgn"
    saturated: bool = False
    scales: np.ndarray = field(default=None, repr=False)
    fluctuation: np.ndarray = field(default=None, repr=False)


@dataclass(frozen=True)
class AuditReport:
    beta_hat: float
    h_rs: float
    h_dfa: float
    d_hat: float
    beta_pred_eq4: float
    residual_eq4: float
    triple_label: str
    triple_distance: float
    interpretation: str
    saturated: bool
    line_spectrum: bool
    warnings: tuple = ()

    def as_dict(self) -> dict:
        return {
            "beta_hat": self.beta_hat,
            "h_rs": self.h_rs,
            "h_dfa": self.h_dfa,
            "d_hat": self.d_hat,
            "beta_pred_eq4": self.beta_pred_eq4,
            "residual_eq4": self.residual_eq4,
            "triple_label": self.triple_label,
            "triple_distance": self.triple_distance,
            "interpretation": self.interpretation,
            "saturated": self.saturated,
            "line_spectrum": self.line_spectrum,
            "warnings": list(self.warnings),
        }


def _is_pow2(n):
    return n > 0 and n & (n - 1) == 0


def welch_psd(signal: TimeSeries, segment_len: int | None = None, overlap: float = 0.5) -> SpectralEstimate:
    """One-sided Welch estimate with a Hann window.

    ``segment_len`` defaults to the largest power of two not exceeding
    ``n / 8`` (at least 16).  The density scaling makes the integral of the
    estimate equal to the signal variance.
    """
    x = signal.values
    n = x.size
    if segment_len is None:
        segment_len = max(16, 1 << int(math.floor(math.log2(max(n // 8, 1)))))
    if not _is_pow2(segment_len):
        raise ValueError("segment length must be a power of two")
    if segment_len > n:
        raise ValueError(f"segment length {segment_len} exceeds signal length {n}")
    if not 0 <= overlap < 1:
        raise ValueError("overlap must lie in [0, 1)")
    freqs, psd = sps.welch(
        x,
        fs=signal.fs,
        window="hann",
        nperseg=segment_len,
        noverlap=int(round(overlap * segment_len)),
        detrend="constant",
        scaling="density",
    )
    return SpectralEstimate(freqs, psd)


def central_decade(est: SpectralEstimate) -> tuple[float, float]:
    """The fit band ``[f_nyq / 100, f_nyq / 10]``."""
    f_nyq = est.freqs[-1]
    return f_nyq / 100.0, f_nyq / 10.0


def fit_spectral_slope(est: SpectralEstimate, f_min: float | None = None, f_max: float | None = None) -> SpectralEstimate:
    """Least-squares fit of ``log psd`` against ``log f``; ``beta_hat = -slope``.

    Uses the bins strictly inside ``(f_min, f_max)``; the default band is
    :func:`central_decade`.
    """
    if f_min is None or f_max is None:
        lo, hi = central_decade(est)
        f_min = lo if f_min is None else f_min
        f_max = hi if f_max is None else f_max
    if not f_min > 0:
        raise ValueError("f_min must be positive (the DC bin is excluded)")
    if not f_max > f_min:
        raise ValueError("empty fit band")
    sel = (est.freqs > f_min) & (est.freqs < f_max) & (est.psd > 0)
    if sel.sum() < 8:
        raise ValueError(f"fit band ({f_min:g}, {f_max:g}) holds {sel.sum()} usable bins; need 8")
    res = stats.linregress(np.log10(est.freqs[sel]), np.log10(est.psd[sel]))
    return replace(est, beta_hat=float(-res.slope), fit_band=(f_min, f_max), stderr=float(res.stderr), n_bins=int(sel.sum()))


def _dyadic_scales(n, lo=MIN_SCALE, max_frac=4):
    top = int(math.floor(math.log2(n // max_frac)))
    bottom = int(math.log2(lo))
    if top - bottom < 2:
        raise ValueError("signal too short for a multi-scale fit")
    return 2 ** np.arange(bottom, top + 1)


def _loglog_fit(scales, values):
    res = stats.linregress(np.log(scales), np.log(values))
    tq = stats.t.ppf(0.975, max(scales.size - 2, 1))
    return float(res.slope), float(tq * res.stderr)


def _clip_h(raw):
    if raw >= SATURATION:
        return 1.0
    return float(min(max(raw, 0.0), 1.0))


def _check_signal(signal, min_len=512):
    x = signal.values
    if x.size < min_len:
        raise ValueError(f"need at least {min_len} samples, got {x.size}")
    if np.ptp(x) == 0:
        raise ValueError("constant signal: scaling exponent is undefined")
    return x


def expected_rs(s: int) -> float:
    """Anis-Lloyd-Peters expectation of R/S for ``s`` i.i.d. Gaussian samples."""
    i = np.arange(1, s)
    if s <= 340:
        front = math.exp(special.gammaln((s - 1) / 2) - special.gammaln(s / 2)) / math.sqrt(math.pi)
    else:
        front = 1.0 / math.sqrt(s * math.pi / 2)
    return float((s - 0.5) / s * front * np.sum(np.sqrt((s - i) / i)))


def hurst_rs(signal: TimeSeries) -> HurstEstimate:
    """Rescaled-range (R/S) exponent over non-overlapping dyadic windows.

    Windows run from 16 samples to a quarter of the record.  The log-log
    slope is corrected by the slope of the i.i.d. expectation
    (:func:`expected_rs`), which removes the small-window upward bias:
    ``H = 0.5 + slope(R/S) - slope(E[R/S])``.  An uncorrected slope of
    0.95 or more (the range of a trend grows linearly with the window) is
    reported as saturated, ``h = 1``.
    """
    x = _check_signal(signal)
    scales = _dyadic_scales(x.size)
    rs = np.empty(scales.size)
    for i, s in enumerate(scales):
        m = x.size // s
        seg = x[: m * s].reshape(m, s)
        dev = np.cumsum(seg - seg.mean(axis=1, keepdims=True), axis=1)
        r = dev.max(axis=1) - dev.min(axis=1)
        sd = seg.std(axis=1)
        ok = sd > 0
        if not np.any(ok):
            raise ValueError("degenerate windows: zero variance at every position")
        rs[i] = np.mean(r[ok] / sd[ok])
    slope, ci = _loglog_fit(scales, rs)
    ref_slope, _ = _loglog_fit(scales, np.array([expected_rs(int(s)) for s in scales]))
    raw = 0.5 + slope - ref_slope
    # the uncorrected R/S slope cannot exceed 1; reaching it means a trend
    saturated = slope >= SATURATION
    return HurstEstimate(
        h=1.0 if saturated else _clip_h(raw),
        ci=ci,
        exponent=raw,
        saturated=saturated,
        scales=scales,
        fluctuation=rs,
    )


def _detrended_rms(profile, s, order):
    m = profile.size // s
    seg = profile[: m * s].reshape(m, s)
    t = np.linspace(-1.0, 1.0, s)
    V = np.vander(t, order + 1)
    # residual of the least-squares polynomial fit, all windows at once
    coef, *_ = np.linalg.lstsq(V, seg.T, rcond=None)
    resid = seg.T - V @ coef
    return math.sqrt(np.mean(resid**2))


def hurst_dfa(signal: TimeSeries, order: int = 1) -> HurstEstimate:
    """Detrended fluctuation analysis with polynomial detrending of ``order``.

    The fluctuation ``F(s)`` of the integrated, mean-removed signal scales
    as ``s**a``.  An exponent ``a < 1`` means the input is stationary
    (fGn-like) and ``H = a``; ``a > 1`` means the cumulative sums grow
    faster than a random walk, i.e. the input is itself a path (fBm-like),
    and ``H = a - 1``.
    """
    if order not in (1, 2):
        raise ValueError("detrending order must be 1 or 2")
    x = _check_signal(signal)
    profile = np.cumsum(x - x.mean())
    scales = _dyadic_scales(x.size)
    fluct = np.array([_detrended_rms(profile, int(s), order) for s in scales])
    if np.any(fluct <= 0):
        raise ValueError("zero fluctuation at some scale")
    slope, ci = _loglog_fit(scales, fluct)
    if slope > 1.0:
        interp, raw = "fbm", slope - 1.0
    else:
        interp, raw = "fgn", slope
    return HurstEstimate(
        h=_clip_h(raw),
        ci=ci,
        exponent=slope,
        interpretation=interp,
        saturated=raw >= SATURATION,
        scales=scales,
        fluctuation=fluct,
    )


def fractal_dimension(H: float, d: int = 1) -> float:
    """Graph dimension ``D = d + 1 - H`` of a self-affine record."""
    if not 0 <= H <= 1:
        raise ValueError(f"H must lie in [0, 1], got {H}")
    if int(d) != d or d < 1:
        raise ValueError("topological dimension must be a positive integer")
    return d + 1 - H


def hurst_from_dimension(D: float, d: int = 1) -> float:
    if int(d) != d or d < 1:
        raise ValueError("topological dimension must be a positive integer")
    H = d + 1 - D
    if not 0 <= H <= 1:
        raise ValueError(f"D = {D} is outside [d, d + 1]")
    return H


def line_spectrum(signal: TimeSeries) -> bool:
    """True when a bin of the full-record periodogram stands more than
    three decades above the global log-log trend (a spectral line).

    The full record and a Kaiser window with very low sidelobes (beta = 30)
    are used so that even a slow, non-integer-period oscillation leaves a
    compact peak instead of a smooth leakage tail.
    """
    freqs, psd = sps.periodogram(signal.values, fs=signal.fs, window=("kaiser", 30.0), detrend="constant")
    sel = (freqs > 0) & (psd > 0)
    if sel.sum() < 8:
        return False
    lf, lp = np.log10(freqs[sel]), np.log10(psd[sel])
    slope, intercept = np.polyfit(lf, lp, 1)
    excess = lp - (slope * lf + intercept)
    return bool(excess.max() > LINE_EXCESS_DECADES)


def _nearest_triple(D, H, beta):
    best, best_d = None, math.inf
    for label, (d0, h0, b0) in CANONICAL_TRIPLES.items():
        dist = math.sqrt((D - d0) ** 2 + (H - h0) ** 2 + (beta - b0) ** 2)
        if dist < best_d:
            best, best_d = label, dist
    return best, best_d


def relation_audit(signal: TimeSeries) -> AuditReport:
    """Estimate (beta, H, D) and test ``beta = 2 H + 1`` on one record.

    ``beta_hat`` comes from a Welch spectrum fitted over the central decade,
    ``H`` from DFA (under its stationarity interpretation), ``D = 2 - H``.
    A record with a spectral line is labelled deterministic (the slope is
    meaningless there); otherwise the label is the nearest canonical triple
    in (D, H, beta).
    """
    if signal.values.size < 2**12:
        raise ValueError("relation audit needs at least 4096 samples")
    est = fit_spectral_slope(welch_psd(signal))
    rs = hurst_rs(signal)
    dfa = hurst_dfa(signal)
    lines = line_spectrum(signal)
    d_hat = fractal_dimension(dfa.h, 1)
    beta_pred = 2.0 * dfa.h + 1.0
    if lines:
        # a spectral line is a periodic, hence deterministic, component; its
        # slope and DFA exponent depend on the period, not on the process
        D0, H0, _ = CANONICAL_TRIPLES["deterministic"]
        label, dist = "deterministic", math.hypot(d_hat - D0, dfa.h - H0)
    else:
        label, dist = _nearest_triple(d_hat, dfa.h, est.beta_hat)
    notes = []
    if lines:
        notes.append("line spectrum: spectral slope is not a power-law exponent")
    if dfa.saturated:
        notes.append("Hurst exponent saturated at the upper bound")
    return AuditReport(
        beta_hat=est.beta_hat,
        h_rs=rs.h,
        h_dfa=dfa.h,
        d_hat=d_hat,
        beta_pred_eq4=beta_pred,
        residual_eq4=est.beta_hat - beta_pred,
        triple_label=label,
        triple_distance=dist,
        interpretation=dfa.interpretation,
        saturated=dfa.saturated,
        line_spectrum=lines,
        warnings=tuple(notes),
    )
