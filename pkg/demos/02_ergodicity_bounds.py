"""Lower bounds on the spectral gap and the strong-ergodicity rate.

Time-changing a recurrent Levy process by a speed a(x) that grows fast
enough makes mu(dx) = dx / a(x) a probability-like stationary measure.
The functionals delta and I then give explicit rate bounds.
"""

import math

from levygap import CharacteristicExponent, InfiniteMassError, SpeedFunction, analyze

symbols = {
    "brownian": CharacteristicExponent.brownian(1.0),
    "stable 1.5": CharacteristicExponent.stable(1.5),
    "xi^2+|xi|^1.5": CharacteristicExponent.stable_mixture(1.0, 1.0, 1.5),
    "xi^2+|xi|": CharacteristicExponent.cauchy_plus_brownian(),
}
speeds = {
    "e^|x|": SpeedFunction.exp_growth(1.0),
    "(1+|x|)^3": SpeedFunction.poly_growth(3.0),
}

head = f"{'symbol':<15}{'speed':<11}{'delta':>10}{'lambda1 >=':>12}{'I':>10}{'kappa >=':>10}{'lambda0 in':>22}"
print(head)
print("-" * len(head))
for sname, psi in symbols.items():
    for aname, sp in speeds.items():
        r = analyze(psi, sp, with_wlsc=False)
        fmt = lambda v: "none" if v is None else f"{v:.4f}"
        bracket = f"[{fmt(r.lambda0_lower)}, {fmt(r.lambda0_upper)}]"
        print(f"{sname:<15}{aname:<11}{r.delta:>10.4f}{fmt(r.lambda1_lower):>12}"
              f"{r.I_value:>10.4f}{fmt(r.kappa_lower):>10}{bracket:>22}")

# The Brownian / e^|x| pair is fully explicit: delta = 1/e, I = 1.
r = analyze(symbols["brownian"], speeds["e^|x|"])
print(f"\nbrownian, e^|x|: lambda1 >= {r.lambda1_lower:.6f} (e/8 = {math.e / 8:.6f}), "
      f"mean return time from anywhere <= {r.M0_upper:.3f}")

# A speed that is too slow leaves mu(R) infinite and no bound applies.
try:
    analyze(symbols["brownian"], SpeedFunction.constant())
except InfiniteMassError as exc:
    print("constant speed:", exc)

# Slow polynomial growth keeps mu finite but the I functional diverges:
# a spectral gap bound survives while the uniform rate bound is lost.
r = analyze(symbols["brownian"], SpeedFunction.poly_growth(2.5), with_wlsc=False)
print(f"brownian, (1+|x|)^2.5: lambda1 >= {r.lambda1_lower:.4f}, I = {r.I_value}, "
      f"kappa bound: {r.kappa_lower}")
