"""Uniformly sampled real signal shared by every module."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeSeries:
    """Real-valued signal sampled at a constant rate.

    ``values[i]`` is the sample at time ``t0 + i / fs``.
    """

    values: np.ndarray
    fs: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("TimeSeries values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ValueError("TimeSeries values must be finite")
        if not self.fs > 0:
            raise ValueError("sample rate must be positive")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    @property
    def dt(self) -> float:
        return 1.0 / self.fs

    @property
    def t(self) -> np.ndarray:
        return self.t0 + np.arange(self.values.size) / self.fs

    def increments(self) -> "TimeSeries":
        return TimeSeries(np.diff(self.values), self.fs, self.t0 + self.dt)

    def scaled(self, factor: float) -> "TimeSeries":
        return TimeSeries(self.values * factor, self.fs, self.t0)
