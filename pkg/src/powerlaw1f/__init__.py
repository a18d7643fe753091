"""Power-law attenuation, 1/f noise, fractional wave models and stable laws.

Submodules:

- ``atten_model``: attenuation law, power spectra, band power, dissipative
  dimension;
- ``stochastic``: symmetric stable laws, fBm/fGn, power-law noise, Monte
  Carlo scaling exponents;
- ``mittag_leffler``: ``E_{mu,nu}`` on the negative real axis;
- ``fracpde``: spectral solvers for fractional diffusion-wave and lossy wave
  equations;
- ``estimators``: spectral slope, Hurst exponents, fractal dimension and the
  exponent-relation audit;
- ``pipeline``: exponent identification, denoising and model construction;
- ``cli``: command-line front end.
"""

from .series import TimeSeries
from .atten_model import AttenuationModel
from .stochastic import StableLaw
from .fracpde import FracPDEProblem
from .estimators import AuditReport
from .pipeline import InverseResult

__version__ = "0.1.0"

__all__ = [
    "TimeSeries",
    "AttenuationModel",
    "StableLaw",
    "FracPDEProblem",
    "AuditReport",
    "InverseResult",
    "__version__",
]
