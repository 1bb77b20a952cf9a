"""Regenerate values.json with mpmath, independently of the levygap code paths.

H(x) = (1/pi) int_0^inf (1 - cos xs) / psi(s) ds is split into a periodic
head on [0, A], a smooth tail int_A^inf 1/psi and an oscillatory tail
handled by mpmath.quadosc.  I = int H dmu for a(x) = exp(b|x|) uses the
Fourier form I = 2/(pi b) int_0^inf s^2 / ((b^2 + s^2) psi(s)) ds.
The spectral gap of the Brownian / exp(|x|) pair is j_{0,1}^2 / 4: odd
eigenfunctions solve f'' = -lambda e^{-x} f on x > 0 with f(0) = 0 and
bounded f, i.e. f = J_0(2 sqrt(lambda) e^{-x/2}).

Run: python3 tests/oracles/make_oracles.py > tests/oracles/values.json
"""

import json

import mpmath as mp

mp.mp.dps = 30


def H(psi, x, periods=40):
    x = mp.mpf(x)
    A = periods * 2 * mp.pi / x
    head = mp.quad(lambda s: 2 * mp.sin(x * s / 2) ** 2 / psi(s), mp.linspace(0, A, periods + 1))
    flat = mp.quad(lambda s: 1 / psi(s), [A, 10 * A, 100 * A, mp.inf])
    osc = mp.quadosc(lambda s: mp.cos(x * s) / psi(s), [A, mp.inf], omega=x)
    return (head + flat - osc) / mp.pi


def I_exp(psi, b=1):
    b = mp.mpf(b)
    return 2 / (mp.pi * b) * mp.quad(lambda s: s ** 2 / ((b ** 2 + s ** 2) * psi(s)), [0, 1, mp.inf])


SYMBOLS = {
    "stable_mixture_1_1_1.5": lambda s: s ** 2 + s ** mp.mpf("1.5"),
    "cauchy_plus_brownian": lambda s: s ** 2 + s,
}
XS = ["0.5", "1", "3"]

out = {"H": {}, "I_exp1": {}}
for name, psi in SYMBOLS.items():
    out["H"][name] = {x: float(H(psi, x)) for x in XS}
    out["I_exp1"][name] = float(I_exp(psi))
out["I_exp1"]["brownian"] = float(I_exp(lambda s: s ** 2))
out["I_exp1"]["stable_1.5"] = float(I_exp(lambda s: s ** mp.mpf("1.5")))
out["spectral_gap_brownian_exp1"] = float(mp.besseljzero(0, 1) ** 2 / 4)
print(json.dumps(out, indent=2, sort_keys=True))
