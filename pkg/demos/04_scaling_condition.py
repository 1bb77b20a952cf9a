"""Bounds from a scaling condition instead of H itself.

If psi(l t) >= beta l^d psi(t) for all l >= 1 (with d > 1), H is bounded
by an explicit envelope and the rate bounds need only psi and a.  They
are cruder than the direct ones but need no oscillatory quadrature.
"""

from levygap import (
    CharacteristicExponent,
    HarmonicEvaluator,
    SpeedFunction,
    compute_delta,
    fit_wlsc,
    verify_wlsc,
    wlsc_bounds,
)
from levygap.bounds import stable_mixture_example_bounds

sp = SpeedFunction.exp_growth(1.0)
for name, psi in [
    ("stable 1.3", CharacteristicExponent.stable(1.3)),
    ("stable 1.7", CharacteristicExponent.stable(1.7)),
    ("xi^2 + |xi|^1.5", CharacteristicExponent.stable_mixture(1.0, 1.0, 1.5)),
    ("xi^2 + |xi|", CharacteristicExponent.cauchy_plus_brownian()),
]:
    w = fit_wlsc(psi)
    if w is None or w.delta_s <= 1:
        print(f"{name:<16} no scaling exponent above 1: the envelope bounds do not apply")
        continue
    wb = wlsc_bounds(psi, w, sp)
    direct = 1 / (8 * compute_delta(HarmonicEvaluator(psi), sp).delta)
    print(f"{name:<16} d = {w.delta_s:.2f}, beta = {w.beta:.3f} (verified: {verify_wlsc(psi, w)})  "
          f"lambda1 >= {wb.lambda1_lower:.4f} vs direct {direct:.4f}; kappa >= {wb.kappa_lower:.4f}")

# For the mixture the envelope bound has a closed form in c1, c2, alpha.
ex = stable_mixture_example_bounds(1.0, 1.0, 1.5, sp)
print(f"\nclosed-form mixture bounds: lambda1 >= {ex['lambda1_lower']:.4f}, "
      f"kappa >= {ex['kappa_lower']:.4f}")
