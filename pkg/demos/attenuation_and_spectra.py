"""Power-law attenuation, its 1/f spectrum, and the low-frequency divergence.

A medium with attenuation alpha(f) = alpha1 + alpha0 f**y stores energy
I0 / alpha(f) per frequency, so the spectrum falls as f**-y.  For y >= 1
the total power in (0, f_hi] diverges unless a floor alpha1 > 0 exists.

    python demos/attenuation_and_spectra.py
"""
import numpy as np

from powerlaw1f.atten_model import (
    AttenuationModel,
    attenuation_coeff,
    band_power,
    dissipative_dimension,
    power_spectrum,
)

f = np.array([0.1, 1.0, 10.0, 100.0])

print("spectral shape for alpha0 = 1, alpha1 = 0")
print("   y   " + "  ".join(f"P({v:g})".rjust(10) for v in f))
for y in (0.0, 0.5, 1.0, 1.5, 2.0):
    m = AttenuationModel(y=y)
    print(f" {y:4.1f}  " + "  ".join(f"{p:10.4g}" for p in power_spectrum(m, f)))

# band power over (0, 1]: finite below y = 1, divergent at and above it
print("\nband power over (0, 1]")
for y in (0.5, 0.9, 1.0, 1.5):
    r = band_power(AttenuationModel(y=y), 0.0, 1.0)
    if r.divergent:
        lo, val = r.divergence_evidence[-1]
        print(f"  y = {y}: divergent (partial integral from {lo:.0e} already {val:.3g})")
    else:
        print(f"  y = {y}: {r.value:.6f}")

# a small floor alpha1 regularizes the integral
r = band_power(AttenuationModel(alpha1=1e-3, y=1.0), 0.0, 1.0)
print(f"  y = 1 with alpha1 = 1e-3: {r.value:.4f}  (ln(1001) = {np.log(1001):.4f})")

# reading y back from a single measurement
m = AttenuationModel(alpha0=0.3, y=1.3)
a = attenuation_coeff(m, 25.0)
print(f"\ndissipative dimension from alpha(25) = {a:.4f}: y = {dissipative_dimension(a, 0.3, 25.0):.6f}")
