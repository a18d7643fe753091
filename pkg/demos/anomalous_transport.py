"""Fractional diffusion-wave regimes, memory, and Levy-flight scaling.

The equation D_t^mu p = -gamma (-Laplacian)^(s/2) p is solved per Fourier
mode with the Mittag-Leffler function.  Its exponents map onto an
attenuation power y = s - mu + 1, and onto the transport regime.

    python demos/anomalous_transport.py
"""
import numpy as np

from powerlaw1f.fracpde import FracPDEProblem, exponent_map, solve_frac_diffusion_wave
from powerlaw1f.mittag_leffler import mittag_leffler
from powerlaw1f.stochastic import StableLaw, fbm_ensemble, msd_exponent, stable_flights

print("exponent map")
for mu, s in [(1, 2), (0.5, 2), (1.5, 2), (1, 1), (2, 2), (0.7, 1.6)]:
    r = exponent_map(mu, s)
    flag = "  (outside [0, 2])" if r.out_of_range else ""
    print(f"  mu = {mu:3}, s = {s:3}: y = {r.y:.2f}, {r.regime}{flag}")

# relaxation of a single mode: exponential for mu = 1, a slow power-law tail below
t = np.array([0.1, 1.0, 10.0, 100.0])
print("\nsingle-mode relaxation E_mu(-t**mu)")
for mu in (1.0, 0.8, 0.5):
    print(f"  mu = {mu}: " + "  ".join(f"{v:.3e}" for v in mittag_leffler(mu, 1.0, -(t**mu))))

# spreading of a Gaussian: the width grows faster for smaller s
n, L = 1024, 40.0
x = -L / 2 + np.arange(n) * (L / n)
p0 = np.exp(-0.5 * (x / 0.3) ** 2)
p0 /= p0.sum() * (L / n)
print("\nfraction of mass beyond |x| > 3 at t = 1")
for s in (2.0, 1.5, 1.0):
    snap = solve_frac_diffusion_wave(FracPDEProblem.frac(p0, L, mu=1, s=s), [1.0])[0]
    tail = snap.values[np.abs(x) > 3].sum() / snap.values.sum()
    print(f"  s = {s}: {tail:.4f}")

# random walkers: Levy flights spread as t**(2/y), fBm as t**(2H)
print("\nMSD-equivalent exponents")
for y in (1.0, 1.5, 2.0):
    fit = msd_exponent(stable_flights(StableLaw(y), 2000, 1000, seed=1), q=y / 4)
    print(f"  Levy flight y = {y}: {fit.exponent:.3f}  (2/y = {2 / y:.3f})")
for H in (0.3, 0.7):
    fit = msd_exponent(fbm_ensemble(H, 200, 1000, seed=2))
    print(f"  fBm H = {H}: {fit.exponent:.3f}  (2H = {2 * H:.1f})")
