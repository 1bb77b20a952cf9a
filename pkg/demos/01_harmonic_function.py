"""The harmonic function H of a symmetric Levy process killed at 0.

H is what every bound in the package is built from.  This walk-through
computes it by quadrature for four symbols and checks the two cases
with a closed form.
"""

import time

import numpy as np

from levygap import CharacteristicExponent, HarmonicEvaluator, QuadConfig, omega

quad_only = QuadConfig(closed_form=False)
xs = np.array([0.01, 0.1, 1.0, 10.0, 100.0])

# Stable(alpha): H(x) = omega_alpha |x|^(alpha-1) / 2.  Brownian (psi = xi^2): H = |x| / 2.
print("closed forms against quadrature")
for psi, exact in [
    (CharacteristicExponent.stable(1.5), lambda x: omega(1.5) * x ** 0.5 / 2),
    (CharacteristicExponent.stable(1.2), lambda x: omega(1.2) * x ** 0.2 / 2),
    (CharacteristicExponent.brownian(1.0), lambda x: x / 2),
]:
    ev = HarmonicEvaluator(psi, quad_only)
    t0 = time.perf_counter()
    rel = max(abs(ev.H(x) - exact(x)) / exact(x) for x in xs)
    print(f"  {psi.family.value:<10} alpha={getattr(psi, 'alpha', None)}  "
          f"max rel err {rel:.1e}  ({time.perf_counter() - t0:.3f}s)")

# Mixed symbols have no closed form.  Near 0 the largest power of xi wins
# (Brownian-like, H ~ |x|/2); far out the smaller one does.
print("\nmixed symbols: local growth exponent d log H / d log x")
for name, psi in [("xi^2 + |xi|^1.5", CharacteristicExponent.stable_mixture(1.0, 1.0, 1.5)),
                  ("xi^2 + |xi|", CharacteristicExponent.cauchy_plus_brownian())]:
    ev = HarmonicEvaluator(psi)
    slopes = [np.log(ev.H(1.1 * x) / ev.H(x)) / np.log(1.1) for x in xs]
    print(f"  {name:<16}", "  ".join(f"x={x:g}: {s:.3f}" for x, s in zip(xs, slopes)))

# For xi^2 + |xi| the slope tends to 0 like 1/log x: H grows only logarithmically.
ev = HarmonicEvaluator(CharacteristicExponent.cauchy_plus_brownian())
big = [1e2, 1e4, 1e6]
print("\n  H(x) / log(1 + x) for xi^2 + |xi|:",
      ", ".join(f"{ev.H(x) / np.log1p(x):.4f}" for x in big))
