"""The Green kernel behind the delta bound, and a sharper certificate.

G_X(x, y) = H(x) + H(y) - H(y - x) is the occupation kernel of the base
process killed at 0.  With f = sqrt(H) one gets G_Y f <= 8 delta f
pointwise, which is where 1 / (8 delta) comes from.  Any other positive
test function gives its own lower bound min f / G_Y f on the first
Dirichlet eigenvalue.

For Brownian motion with a = e^|x| the exact gap is j_{0,1}^2 / 4,
with j_{0,1} the first zero of the Bessel function J_0.
"""

import math

import numpy as np
from scipy.special import jn_zeros

from levygap import (
    CharacteristicExponent,
    HarmonicEvaluator,
    SpeedFunction,
    compute_delta,
    green_X0,
    green_Y0_apply,
    variational_lower_certificate,
)

ev = HarmonicEvaluator(CharacteristicExponent.brownian(1.0))
sp = SpeedFunction.exp_growth(1.0)
delta = compute_delta(ev, sp).delta

print("kernel checks at a few points (Brownian: G(x, y) = min(|x|, |y|) on one side, 0 across)")
for x, y in [(1.0, 2.0), (2.0, 1.0), (1.0, -1.0), (3.0, 3.0)]:
    print(f"  G({x:+}, {y:+}) = {green_X0(ev, x, y):.4f}   2 min(H) = {2 * min(ev.H(x), ev.H(y)):.4f}")

f = lambda y: math.sqrt(ev.H(y))
print(f"\npointwise inequality G_Y f <= 8 delta f with f = sqrt(H), 8 delta = {8 * delta:.4f}")
for x in (0.01, 0.3, 1.0, 3.0, 10.0):
    g, _ = green_Y0_apply(ev, sp, f, x)
    print(f"  x = {x:>5}: G_Y f / f = {g / f(x):.4f}")

grid = np.geomspace(0.05, 20.0, 12)
exact = jn_zeros(0, 1)[0] ** 2 / 4
print(f"\nlower bounds on the gap (exact {exact:.4f}):")
print(f"  1 / (8 delta)                    {1 / (8 * delta):.4f}")
for name, g in [("sqrt(H)", f), ("H", ev.H), ("1 - e^-|x|", lambda y: -math.expm1(-abs(y)))]:
    print(f"  certificate with f = {name:<11} {variational_lower_certificate(ev, sp, g, grid):.4f}")
