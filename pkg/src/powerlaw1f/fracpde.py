"""Fourier-spectral solvers for fractional diffusion-wave and lossy wave equations.

Two problem families on a periodic 1-D domain of length ``L``:

``frac``
    ``D_t**mu p = -gamma (-Laplacian)**(s/2) p`` (time-fractional Caputo
    derivative of order ``mu``, fractional Laplacian of order ``s``).  Each
    Fourier mode evolves exactly as
    ``E_mu(-gamma |k|**s t**mu) p0_k + t E_{mu,2}(-gamma |k|**s t**mu) v0_k``,
    the velocity term only for ``mu > 1``.  ``s = 2`` is the time-fractional
    signal equation and ``mu = 1`` the space-fractional diffusion equation.

``lossy``
    ``Laplacian p = p_tt / c0**2 + 2 alpha0 / c0**(1-y) d/dt (-Laplacian)**(y/2) p``.
    Multiplying through by ``c0**2`` gives, per mode, the damped oscillator
    ``p_tt + 2 b_k p_t + c0**2 k**2 p = 0`` with
    ``b_k = alpha0 c0**(1+y) |k|**y``, solved in closed form.  In the weakly
    damped regime a wave of angular frequency ``w = c0 |k|`` loses amplitude
    at the spatial rate ``b_k / c0 = alpha0 w**y``.

The fractional Laplacian is the Fourier multiplier ``|k|**s`` with
``k = 2 pi m / L``.  There is no time stepping, so snapshots carry only
round-off error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .mittag_leffler import mittag_leffler
from .series import TimeSeries

__all__ = [
    "FracPDEProblem",
    "FieldSnapshot",
    "ExponentRegime",
    "StationFit",
    "exponent_map",
    "solve_frac_diffusion_wave",
    "solve_lossy_wave",
    "probe_signal",
    "driven_probe",
    "rightward_velocity",
    "mode_damping",
    "station_attenuation",
    "msd_from_autocorr",
    "OutOfRangeExponentWarning",
]


class OutOfRangeExponentWarning(UserWarning):
    """The derived attenuation exponent falls outside [0, 2]."""


@dataclass(frozen=True)
class ExponentRegime:
    y: float
    regime: str
    out_of_range: bool


def exponent_map(mu: float, s: float) -> ExponentRegime:
    """Attenuation exponent ``y = s - mu + 1`` and the diffusion regime.

    The ordinary wave equation ``mu = s = 2`` is the exception, with
    ``y = 0``.

    ``regime`` is one of ``normal-wave``, ``normal-diffusion``,
    ``sub-diffusion``, ``super-diffusion``, ``equilibrium`` (``mu = 0``) or
    ``anomalous`` (fractional in both orders); ``out_of_range`` marks
    ``y`` outside [0, 2].
    """
    if not -1 <= mu <= 2:
        raise ValueError(f"mu must lie in [-1, 2], got {mu}")
    if not 0 <= s <= 2:
        raise ValueError(f"s must lie in [0, 2], got {s}")
    y = s - mu + 1
    if s == 2 and mu == 2:
        # the lossless wave equation: frequency-independent (zero) loss
        y = 0.0
        regime = "normal-wave"
    elif s == 2 and mu == 1:
        regime = "normal-diffusion"
    elif s == 2 and 0 < mu < 1:
        regime = "sub-diffusion"
    elif (s == 2 and mu > 1) or (mu == 1 and 0 < s < 2):
        regime = "super-diffusion"
    elif mu == 0:
        regime = "equilibrium"
    else:
        regime = "anomalous"
    return ExponentRegime(y, regime, not 0 <= y <= 2)


@dataclass(frozen=True)
class FracPDEProblem:
    """A periodic 1-D initial value problem for one of the two families.

    Build with :meth:`frac` or :meth:`lossy`.  ``p0`` and ``v0`` are the
    initial field and velocity on the grid ``x = -L/2 + j L/n``.
    """

    equation: str
    p0: np.ndarray
    domain_length: float
    v0: np.ndarray | None = None
    mu: float = 1.0
    s: float = 2.0
    gamma: float = 1.0
    c0: float = 1.0
    alpha0: float = 0.0
    y: float = 2.0
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.equation not in ("frac", "lossy"):
            raise ValueError("equation must be 'frac' or 'lossy'")
        p0 = np.asarray(self.p0, dtype=float)
        n = p0.size
        if p0.ndim != 1 or n < 4 or n & (n - 1):
            raise ValueError("initial field must be 1-D with a power-of-two length")
        object.__setattr__(self, "p0", p0)
        if self.v0 is not None:
            v0 = np.asarray(self.v0, dtype=float)
            if v0.shape != p0.shape:
                raise ValueError("initial velocity must match the field length")
            object.__setattr__(self, "v0", v0)
        if not self.domain_length > 0:
            raise ValueError("domain length must be positive")
        if self.equation == "frac":
            if not 0 < self.mu <= 2:
                raise ValueError(f"mu must lie in (0, 2], got {self.mu}")
            if not 0 < self.s <= 2:
                raise ValueError(f"s must lie in (0, 2], got {self.s}")
            if not self.gamma > 0:
                raise ValueError("gamma must be positive")
            if self.mu > 1 and self.v0 is None:
                raise ValueError("mu > 1 needs an initial velocity")
            regime = exponent_map(self.mu, self.s)
            object.__setattr__(self, "y", regime.y)
            if regime.out_of_range:
                msg = f"derived exponent y = s - mu + 1 = {regime.y:g} lies outside [0, 2]"
                object.__setattr__(self, "warnings", (msg,))
        else:
            if not self.c0 > 0:
                raise ValueError("c0 must be positive")
            if not self.alpha0 >= 0:
                raise ValueError("alpha0 must be non-negative")
            if not 0 <= self.y <= 2:
                raise ValueError(f"y must lie in [0, 2], got {self.y}")
            if self.v0 is None:
                raise ValueError("the lossy wave equation needs an initial velocity")

    @classmethod
    def frac(cls, p0, domain_length, mu=1.0, s=2.0, gamma=1.0, v0=None):
        return cls("frac", p0, domain_length, v0=v0, mu=mu, s=s, gamma=gamma)

    @classmethod
    def lossy(cls, p0, v0, domain_length, c0=1.0, alpha0=0.0, y=2.0):
        return cls("lossy", p0, domain_length, v0=v0, c0=c0, alpha0=alpha0, y=y)

    @property
    def n_grid(self) -> int:
        return self.p0.size

    @property
    def dx(self) -> float:
        return self.domain_length / self.n_grid

    @property
    def x(self) -> np.ndarray:
        return -self.domain_length / 2 + np.arange(self.n_grid) * self.dx

    @property
    def k(self) -> np.ndarray:
        """Non-negative wavenumbers of the real FFT."""
        return 2 * np.pi * np.fft.rfftfreq(self.n_grid, d=self.dx)

    @property
    def regime(self) -> ExponentRegime:
        return exponent_map(self.mu, self.s)

    def with_initial(self, p0, v0=None) -> "FracPDEProblem":
        return replace(self, p0=p0, v0=v0 if v0 is not None else self.v0)


@dataclass(frozen=True)
class FieldSnapshot:
    t: float
    values: np.ndarray
    problem: FracPDEProblem = field(repr=False)
    velocity: np.ndarray | None = field(default=None, repr=False)
    warnings: tuple = ()

    @property
    def mass(self) -> float:
        return float(self.values.sum() * self.problem.dx)


def _check_times(times):
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(t < 0) or np.any(~np.isfinite(t)):
        raise ValueError("times must be finite and non-negative")
    return t


def _frac_modes(problem, t):
    k = problem.k
    ph0 = np.fft.rfft(problem.p0)
    z = -problem.gamma * k**problem.s * t**problem.mu
    out = mittag_leffler(problem.mu, 1.0, z) * ph0
    if problem.mu > 1:
        vh0 = np.fft.rfft(problem.v0)
        out = out + t * mittag_leffler(problem.mu, 2.0, z) * vh0
    return out


def solve_frac_diffusion_wave(problem: FracPDEProblem, times) -> list[FieldSnapshot]:
    """Evolve a ``frac`` problem to each of ``times``."""
    if problem.equation != "frac":
        raise ValueError("expected a 'frac' problem")
    t_arr = _check_times(times)
    if problem.warnings:
        for msg in problem.warnings:
            warnings.warn(msg, OutOfRangeExponentWarning, stacklevel=2)
    n = problem.n_grid
    return [
        FieldSnapshot(float(t), np.fft.irfft(_frac_modes(problem, t), n=n), problem, warnings=problem.warnings)
        for t in t_arr
    ]


def mode_damping(problem: FracPDEProblem, k=None) -> np.ndarray:
    """Per-mode damping rate ``alpha0 c0**(1+y) |k|**y`` of the lossy equation."""
    k = problem.k if k is None else np.abs(np.asarray(k, dtype=float))
    return problem.alpha0 * problem.c0 ** (1 + problem.y) * k**problem.y


def _oscillator(b, w2, t):
    """Damped-oscillator basis at time ``t``.

    Returns ``(D, C, S)`` with ``D = exp(-b t)`` folded into ``C`` and
    ``S``: the solution with ``p(0) = A``, ``p'(0) = V`` is
    ``A C + (V + b A) S`` and its derivative ``V C - (A q + b (V + b A)) S``
    where ``q = w2 - b**2``.
    """
    q = w2 - b * b
    C = np.empty_like(b)
    S = np.empty_like(b)
    scale = np.maximum(w2, b * b)
    under = q > 1e-14 * scale
    over = q < -1e-14 * scale
    crit = ~(under | over)

    om = np.sqrt(q[under])
    decay = np.exp(-b[under] * t)
    C[under] = decay * np.cos(om * t)
    S[under] = decay * t * np.sinc(om * t / np.pi)

    r = np.sqrt(-q[over])
    bo = b[over]
    # slow rate b - r computed without cancellation
    slow = w2[over] / (bo + r)
    fast = bo + r
    e_slow = np.exp(-slow * t)
    e_fast = np.exp(-fast * t)
    C[over] = 0.5 * (e_slow + e_fast)
    rt = r * t
    small = rt < 1e-3
    s_over = np.empty_like(r)
    s_over[~small] = 0.5 * (e_slow[~small] - e_fast[~small]) / r[~small]
    s_over[small] = np.exp(-bo[small] * t) * t * (1 + rt[small] ** 2 / 6)
    S[over] = s_over

    decay = np.exp(-b[crit] * t)
    C[crit] = decay
    S[crit] = decay * t
    return C, S, q


def _lossy_modes(problem, t, k=None, ph0=None, vh0=None):
    k = problem.k if k is None else k
    ph0 = np.fft.rfft(problem.p0) if ph0 is None else ph0
    vh0 = np.fft.rfft(problem.v0) if vh0 is None else vh0
    b = mode_damping(problem, k)
    w2 = (problem.c0 * k) ** 2
    C, S, q = _oscillator(b, w2, t)
    B = vh0 + b * ph0
    p = ph0 * C + B * S
    v = vh0 * C - (ph0 * q + b * B) * S
    return p, v


def solve_lossy_wave(problem: FracPDEProblem, times) -> list[FieldSnapshot]:
    """Evolve a ``lossy`` problem; snapshots include the velocity field.

    Under-, critically and over-damped modes all use their exact solution.
    """
    if problem.equation != "lossy":
        raise ValueError("expected a 'lossy' problem")
    t_arr = _check_times(times)
    n = problem.n_grid
    ph0 = np.fft.rfft(problem.p0)
    vh0 = np.fft.rfft(problem.v0)
    out = []
    for t in t_arr:
        p, v = _lossy_modes(problem, t, ph0=ph0, vh0=vh0)
        out.append(FieldSnapshot(float(t), np.fft.irfft(p, n=n), problem, np.fft.irfft(v, n=n)))
    return out


def _probe_weights(problem, x_probe):
    """Row vector mapping rfft coefficients to the field value at ``x_probe``."""
    n = problem.n_grid
    k = problem.k
    # irfft weights: 1 for DC (and Nyquist), 2 for the others
    weight = np.full(k.size, 2.0)
    weight[0] = 1.0
    if n % 2 == 0:
        weight[-1] = 1.0
    return weight * np.exp(1j * k * (x_probe + problem.domain_length / 2)) / n


def probe_signal(problem: FracPDEProblem, x_probe: float, times, chunk: int = 256) -> TimeSeries:
    """Field value at a fixed position over uniformly spaced ``times``.

    Sums the Fourier modes directly at ``x_probe`` rather than
    reconstructing whole snapshots.
    """
    t_arr = _check_times(times)
    if t_arr.size < 2:
        raise ValueError("need at least two sample times")
    dt = np.diff(t_arr)
    if np.ptp(dt) > 1e-9 * dt[0] or dt[0] <= 0:
        raise ValueError("probe times must be uniform and increasing")
    k = problem.k
    ph0 = np.fft.rfft(problem.p0)
    vh0 = np.fft.rfft(problem.v0) if problem.v0 is not None else np.zeros_like(ph0)
    phase = _probe_weights(problem, x_probe)
    values = np.empty(t_arr.size)
    for start in range(0, t_arr.size, chunk):
        ts = t_arr[start : start + chunk]
        if problem.equation == "lossy":
            modes = np.stack([_lossy_modes(problem, t, k, ph0, vh0)[0] for t in ts])
        else:
            modes = np.stack([_frac_modes(problem, t) for t in ts])
        values[start : start + chunk] = (modes @ phase).real
    return TimeSeries(values, fs=1.0 / dt[0], t0=float(t_arr[0]))


def driven_probe(
    problem: FracPDEProblem,
    x_probe: float,
    n_times: int,
    seed,
    dt: float | None = None,
    burn_in: int = 0,
) -> TimeSeries:
    """Stationary probe record of a lossy medium kicked by white fields.

    Before every sample a fresh zero-mean white field is added to the
    pressure (a broadband initial field at rest), and the state is carried
    to the next sample by the exact one-step propagator of each mode.  The
    record is the superposition of many independent free decays, so it is
    stationary once ``burn_in`` steps have passed; a single decay is not,
    and windowed spectral estimates of it underweight the short-lived
    high-frequency modes.  ``problem.p0`` and ``v0`` seed the state.

    The default ``dt`` is ``dx / c0``.
    """
    if problem.equation != "lossy":
        raise ValueError("expected a 'lossy' problem")
    if seed is None:
        raise ValueError("an explicit seed is required")
    if n_times < 2 or burn_in < 0:
        raise ValueError("need n_times >= 2 and burn_in >= 0")
    dt = problem.dx / problem.c0 if dt is None else float(dt)
    if not dt > 0:
        raise ValueError("dt must be positive")
    k = problem.k
    n = problem.n_grid
    b = mode_damping(problem)
    w2 = (problem.c0 * k) ** 2
    C, S, _ = _oscillator(b, w2, dt)
    # one-step map of (p, v), from the closed-form oscillator solution
    m11, m12, m21, m22 = C + b * S, S, -w2 * S, C - b * S
    phase = _probe_weights(problem, x_probe)
    rng = np.random.default_rng(seed)
    p = np.fft.rfft(problem.p0)
    v = np.fft.rfft(problem.v0)
    # rfft of white noise: complex Gaussian with variance n (real at DC/Nyquist)
    sd = np.full(k.size, math.sqrt(n / 2))
    real_only = np.zeros(k.size, dtype=bool)
    real_only[0] = True
    if n % 2 == 0:
        real_only[-1] = True
    out = np.empty(n_times)
    for i in range(burn_in + n_times):
        kick = sd * (rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size))
        kick[real_only] = math.sqrt(n) * kick[real_only].real / sd[real_only]
        # zero-mean kicks: the k = 0 mode has no restoring force and would random-walk
        kick[0] = 0.0
        p = p + kick
        if i >= burn_in:
            out[i - burn_in] = (p @ phase).real
        p, v = m11 * p + m12 * v, m21 * p + m22 * v
    return TimeSeries(out, fs=1.0 / dt)


@dataclass(frozen=True)
class StationFit:
    """Spatial attenuation between two stations and its power-law fit."""

    omega: np.ndarray
    attenuation: np.ndarray
    exponent: float
    prefactor: float


def station_attenuation(
    problem: FracPDEProblem,
    x_a: float,
    x_b: float,
    n_times: int = 4096,
    dt: float | None = None,
    band: tuple[float, float] | None = None,
) -> StationFit:
    """Per-frequency spatial attenuation from two probe traces.

    Records the field at ``x_a`` and ``x_b > x_a``, Fourier transforms each
    trace in time and converts the amplitude ratio into a rate,
    ``ln(|P_a(w)| / |P_b(w)|) / (x_b - x_a)``, then fits ``alpha0 w**y`` in
    log-log form over ``band`` (angular frequencies).  The initial data
    should be a pulse travelling toward ``+x`` that clears both stations
    before wrapping around the periodic domain.
    """
    if problem.equation != "lossy":
        raise ValueError("expected a 'lossy' problem")
    if not x_b > x_a:
        raise ValueError("stations must satisfy x_a < x_b")
    if dt is None:
        dt = problem.dx / problem.c0 / 2
    times = np.arange(n_times) * dt
    trace_a = probe_signal(problem, x_a, times).values
    trace_b = probe_signal(problem, x_b, times).values
    # transient records: no taper, so both pulses are weighted equally
    spec_a = np.fft.rfft(trace_a)
    spec_b = np.fft.rfft(trace_b)
    omega = 2 * np.pi * np.fft.rfftfreq(n_times, d=dt)
    if band is None:
        k_max = np.pi / problem.dx
        band = (problem.c0 * k_max / 40, problem.c0 * k_max / 4)
    sel = (omega >= band[0]) & (omega <= band[1])
    sel &= (np.abs(spec_a) > 0) & (np.abs(spec_b) > 0)
    att = np.log(np.abs(spec_a[sel]) / np.abs(spec_b[sel])) / (x_b - x_a)
    good = att > 0
    if good.sum() < 8:
        raise ArithmeticError("too few frequencies with measurable attenuation")
    w, a = omega[sel][good], att[good]
    slope, intercept = np.polyfit(np.log(w), np.log(a), 1)
    return StationFit(w, a, float(slope), float(math.exp(intercept)))


def msd_from_autocorr(corr: TimeSeries, t_grid) -> np.ndarray:
    """Mean squared displacement ``2 int_0^t (t - tau) corr(tau) dtau``.

    ``corr`` holds the velocity autocorrelation at lags ``0, dt, 2 dt, ...``.
    The trapezoidal rule is applied at the sampled lags; values at other
    ``t`` are linearly interpolated between them.
    """
    c = corr.values
    if c.size < 2:
        raise ValueError("need at least two autocorrelation lags")
    t = np.asarray(t_grid, dtype=float)
    lags = corr.t - corr.t0
    if np.any(t < 0) or np.any(t > lags[-1] * (1 + 1e-12)):
        raise ValueError("t_grid extends beyond the sampled lags")
    h = corr.dt
    # trapezoid of (t_j - tau) c(tau) = t_j * T[c] - T[tau c]
    c0 = np.concatenate([[0.0], np.cumsum(0.5 * h * (c[1:] + c[:-1]))])
    tc = lags * c
    c1 = np.concatenate([[0.0], np.cumsum(0.5 * h * (tc[1:] + tc[:-1]))])
    msd = 2.0 * (lags * c0 - c1)
    return np.interp(t, lags, msd)


def rightward_velocity(p0, domain_length, c0=1.0, alpha0=0.0, y=2.0) -> np.ndarray:
    """Initial velocity making ``p0`` a purely right-going wave of the lossy equation.

    Each underdamped mode is started on its ``exp(-b t - i W t)`` branch;
    overdamped modes are started on their slow branch.
    """
    p0 = np.asarray(p0, dtype=float)
    n = p0.size
    k = 2 * np.pi * np.fft.rfftfreq(n, d=domain_length / n)
    b = alpha0 * c0 ** (1 + y) * k**y
    q = (c0 * k) ** 2 - b * b
    rate = np.where(q > 0, b + 1j * np.sqrt(np.abs(q)), b - np.sqrt(np.abs(q)))
    rate[0] = 0.0
    return np.fft.irfft(-rate * np.fft.rfft(p0), n=n)
