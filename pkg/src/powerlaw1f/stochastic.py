"""Symmetric stable laws, fractional Brownian motion and power-law noise.

The symmetric stable law with index ``y`` and scale ``c`` has characteristic
function ``exp(-c**y |k|**y)``: Gaussian with variance ``2 c**2`` at
``y = 2`` and Cauchy with half-width ``c`` at ``y = 1``.  Its density is
the fundamental solution of ``p_t = -gamma (-Laplacian)**(y/2) p`` at
``gamma t = c**y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .series import TimeSeries

__all__ = [
    "StableLaw",
    "PathEnsemble",
    "MSDFit",
    "sample_stable",
    "stable_pdf",
    "gen_fgn",
    "gen_fbm",
    "powerlaw_noise",
    "stable_flights",
    "fbm_ensemble",
    "msd_exponent",
]

CF_CUTOFF = 1e-16
_MAX_PDF_POINTS = 2**22


@dataclass(frozen=True)
class StableLaw:
    index: float
    scale: float = 1.0

    def __post_init__(self):
        if not 0 < self.index <= 2:
            raise ValueError(f"stable index must lie in (0, 2], got {self.index}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @property
    def is_gaussian(self) -> bool:
        return self.index == 2


@dataclass(frozen=True)
class PathEnsemble:
    """``positions[i, j]`` is the displacement of path ``i`` at ``j * dt``.

    ``law`` is a :class:`StableLaw` for Levy flights or the string
    ``"fbm(H=...)"`` for Gaussian fractional paths (``hurst`` is then set).
    """

    positions: np.ndarray
    dt: float
    law: object
    hurst: float | None = None

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] < 2:
            raise ValueError("positions must be an (n_paths, n_steps + 1) array")
        if np.any(pos[:, 0] != 0):
            raise ValueError("every path must start at the origin")
        object.__setattr__(self, "positions", pos)

    @property
    def n_paths(self) -> int:
        return self.positions.shape[0]

    @property
    def n_steps(self) -> int:
        return self.positions.shape[1] - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    @property
    def tail_index(self) -> float:
        if isinstance(self.law, StableLaw):
            return self.law.index
        return 2.0


@dataclass(frozen=True)
class MSDFit:
    exponent: float
    ci: float
    q: float
    times: np.ndarray
    moments: np.ndarray


def _rng(seed):
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.default_rng(seed)


def _cms(index, v, w):
    """Chambers-Mallows-Stuck map for the symmetric case."""
    if index == 1:
        return np.tan(v)
    return (
        np.sin(index * v)
        / np.cos(v) ** (1.0 / index)
        * (np.cos((1.0 - index) * v) / w) ** ((1.0 - index) / index)
    )


def sample_stable(law: StableLaw, n: int, seed) -> np.ndarray:
    """``n`` i.i.d. draws from the symmetric stable law.

    Exact transformation of a uniform angle and a unit exponential; no
    series truncation.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _rng(seed)
    v = rng.uniform(-np.pi / 2, np.pi / 2, size=n)
    w = rng.standard_exponential(size=n)
    return law.scale * _cms(law.index, v, w)


def _uniform_spacing(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("x_grid must be a one-dimensional grid with at least two points")
    dx = np.diff(x)
    if np.any(dx <= 0) or np.ptp(dx) > 1e-9 * abs(dx[0]):
        raise ValueError("x_grid must be uniform and increasing")
    return x, float(dx.mean())


def _wrapped_density(index, scale_pow, n, dx, shift):
    """Density of the law wrapped onto a period ``n * dx``, sampled at
    ``shift + j dx``, by inverse FFT of the characteristic function."""
    k = 2 * np.pi * np.fft.rfftfreq(n, d=dx)
    cf = np.exp(-scale_pow * k**index)
    cf[cf < CF_CUTOFF] = 0.0
    cf = cf * np.exp(1j * k * shift)
    return np.fft.irfft(cf, n=n) / dx


def _padded_size(index, scale_pow, n, dx, tol=1e-10):
    if index == 2:
        width = 12.0 * math.sqrt(2.0 * scale_pow) + n * dx
        period = 2 * n * dx + width
    else:
        # tail density ~ C |x|**(-1-y); aliasing from all periodic images
        tail = special.gamma(1 + index) * math.sin(math.pi * index / 2) / math.pi * scale_pow
        period = (2 * tail * special.zeta(1 + index) / tol) ** (1.0 / (1 + index))
        period = max(period, 2 * n * dx)
    size = 1 << int(math.ceil(math.log2(period / dx)))
    return min(max(size, n), _MAX_PDF_POINTS)


def stable_pdf(law: StableLaw, x_grid, t: float = 1.0, gamma: float | None = None, wrap: bool = False):
    """Fundamental solution of ``p_t = -gamma (-Laplacian)**(y/2) p`` at time ``t``.

    This is the inverse Fourier transform of ``exp(-gamma t |k|**y)``; with
    ``gamma=None`` the law's own scale is used (``gamma = c**y``), so
    ``t = 1`` returns the density of ``law``.  The characteristic function
    is zeroed where it falls below 1e-16.

    With ``wrap=True`` the density is the periodic one on a domain whose
    period is the grid span ``n * dx`` (what a periodic solver produces).
    Otherwise the grid is internally extended until images from neighbouring
    periods are negligible.
    """
    x, dx = _uniform_spacing(x_grid)
    if not t > 0:
        raise ValueError("t must be positive")
    if gamma is None:
        gamma = law.scale**law.index
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    scale_pow = gamma * t
    n = x.size
    size = n if wrap else _padded_size(law.index, scale_pow, n, dx)
    # sample points x0 + j dx; shifting by x0 places them on the FFT lattice
    dens = _wrapped_density(law.index, scale_pow, size, dx, x[0])
    return dens[:n]


def gen_fgn(H: float, n: int, dt: float = 1.0, seed=None) -> np.ndarray:
    """Fractional Gaussian noise by exact circulant embedding (Davies-Harte).

    Returns ``n`` increments of fBm on a step ``dt``, each with variance
    ``dt**(2H)``.
    """
    if not 0 < H < 1:
        raise ValueError(f"Hurst exponent must lie in (0, 1), got {H}")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _rng(seed)
    k = np.arange(n + 1, dtype=float)
    cov = 0.5 * (np.abs(k + 1) ** (2 * H) - 2 * k ** (2 * H) + np.abs(k - 1) ** (2 * H))
    row = np.concatenate([cov, cov[-2:0:-1]])
    m = row.size
    eig = np.fft.fft(row).real
    if np.any(eig < -1e-10 * eig.max()):
        raise ArithmeticError("circulant embedding is not non-negative definite")
    eig = np.clip(eig, 0.0, None)
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    w = np.fft.fft(np.sqrt(eig / m) * z)
    return w.real[:n] * dt**H


def gen_fbm(H: float, n: int, dt: float = 1.0, seed=None) -> TimeSeries:
    """Fractional Brownian motion path of ``n`` samples starting at 0."""
    if n < 2:
        raise ValueError("n must be at least 2")
    incr = gen_fgn(H, n - 1, dt, seed)
    return TimeSeries(np.concatenate([[0.0], np.cumsum(incr)]), fs=1.0 / dt)


def powerlaw_noise(beta: float, n: int, fs: float = 1.0, seed=None) -> TimeSeries:
    """Gaussian noise with power spectral density proportional to ``f**-beta``.

    Spectral synthesis: independent complex Gaussian Fourier coefficients
    with amplitude ``f**(-beta/2)``, zero mean, normalized to unit variance.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if n < 4:
        raise ValueError("n must be at least 4")
    rng = _rng(seed)
    f = np.fft.rfftfreq(n, d=1.0 / fs)
    amp = np.zeros_like(f)
    amp[1:] = f[1:] ** (-beta / 2.0)
    coef = amp * (rng.standard_normal(f.size) + 1j * rng.standard_normal(f.size))
    if n % 2 == 0:
        coef[-1] = coef[-1].real * math.sqrt(2.0)
    x = np.fft.irfft(coef, n=n)
    x /= x.std()
    return TimeSeries(x, fs=fs)


def _path_seeds(seed, n_paths):
    return np.random.SeedSequence(seed).spawn(n_paths)


def stable_flights(law: StableLaw, n_paths: int, n_steps: int, dt: float = 1.0, seed=None) -> PathEnsemble:
    """Levy flights: cumulative sums of i.i.d. stable steps.

    Steps have scale ``c * dt**(1/y)`` so that ``x(t)`` has the law's
    density at ``gamma t = c**y t``.  Path ``i`` draws from its own child
    seed of ``seed``.
    """
    if seed is None:
        raise ValueError("an explicit seed is required")
    step_law = StableLaw(law.index, law.scale * dt ** (1.0 / law.index))
    pos = np.zeros((n_paths, n_steps + 1))
    for i, child in enumerate(_path_seeds(seed, n_paths)):
        pos[i, 1:] = np.cumsum(sample_stable(step_law, n_steps, child))
    return PathEnsemble(pos, dt, law)


def fbm_ensemble(H: float, n_paths: int, n_steps: int, dt: float = 1.0, seed=None) -> PathEnsemble:
    if seed is None:
        raise ValueError("an explicit seed is required")
    pos = np.zeros((n_paths, n_steps + 1))
    for i, child in enumerate(_path_seeds(seed, n_paths)):
        pos[i, 1:] = np.cumsum(gen_fgn(H, n_steps, dt, child))
    return PathEnsemble(pos, dt, f"fbm(H={H})", hurst=H)


def msd_exponent(ensemble: PathEnsemble, q: float = 2.0, n_points: int = 24) -> MSDFit:
    """MSD-equivalent scaling exponent from the ``q``-th absolute moment.

    Fits ``log <|x(t)|**q>`` against ``log t`` on log-spaced steps and
    rescales the slope by ``2/q``: Levy flights give ``2/y`` and fBm
    ``2H``.  For heavy-tailed laws only fractional moments ``q < y`` exist.
    """
    if not q > 0:
        raise ValueError("moment order must be positive")
    tail = ensemble.tail_index
    if tail < 2 and q >= tail:
        raise ValueError(f"moment of order {q} diverges for stable index {tail}")
    steps = np.unique(np.round(np.geomspace(1, ensemble.n_steps, n_points)).astype(int))
    if steps.size < 10 or steps[-1] / steps[0] < 10**1.5:
        raise ValueError("need at least 10 time points spanning 1.5 decades")
    times = steps * ensemble.dt
    moments = np.mean(np.abs(ensemble.positions[:, steps]) ** q, axis=0)
    lt, lm = np.log(times), np.log(moments)
    A = np.vstack([lt, np.ones_like(lt)]).T
    coef, res, *_ = np.linalg.lstsq(A, lm, rcond=None)
    dof = max(lt.size - 2, 1)
    resid = lm - A @ coef
    stderr = math.sqrt(resid @ resid / dof / np.sum((lt - lt.mean()) ** 2))
    scale = 2.0 / q
    return MSDFit(coef[0] * scale, 1.96 * stderr * scale, q, times, moments)
