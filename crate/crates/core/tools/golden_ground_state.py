#!/usr/bin/env python3
"""Golden norms of the ground state Q(x) = ((k+2)/2)^(1/k) sech^(2/k)(k x / 2).

Adaptive quadrature over the whole real line (mpmath, 40 digits working
precision, requested tolerance 1e-12 or better), cross-checked against the
Beta-function closed form  int sech^a(b x) dx = sqrt(pi) Gamma(a/2) / (b Gamma((a+1)/2)).

Writes data/ground_state_golden.csv next to this script's parent directory.
"""
import os
import mpmath as mp

mp.mp.dps = 40
K_MAX = 16


def sech_integral(a, b):
    return mp.sqrt(mp.pi) * mp.gamma(a / 2) / (b * mp.gamma((a + 1) / 2))


def row(k):
    k = mp.mpf(k)
    amp = ((k + 2) / 2) ** (1 / k)
    b = k / 2
    q = lambda x: amp * mp.sech(b * x) ** (2 / k)
    dq = lambda x: -amp * mp.sech(b * x) ** (2 / k) * mp.tanh(b * x)
    quad = lambda f: 2 * mp.quad(f, [0, 1, 4, 16, mp.inf], error=False)

    mass = quad(lambda x: q(x) ** 2)
    grad_sq = quad(lambda x: dq(x) ** 2)
    lkp2 = quad(lambda x: q(x) ** (k + 2))

    # closed forms
    mass_cf = amp**2 * sech_integral(4 / k, b)
    lkp2_cf = amp ** (k + 2) * sech_integral(2 * (k + 2) / k, b)
    # tanh^2 = 1 - sech^2
    grad_cf = amp**2 * (sech_integral(4 / k, b) - sech_integral(4 / k + 2, b))
    for got, want in ((mass, mass_cf), (grad_sq, grad_cf), (lkp2, lkp2_cf)):
        assert abs(got - want) <= mp.mpf("1e-25") * abs(want), (k, got, want)

    # Pohozhaev identities
    assert abs((k + 4) / (2 * (k + 2)) * lkp2 - mass) < mp.mpf("1e-25") * mass
    assert abs(mass - (k + 4) / k * grad_sq) < mp.mpf("1e-25") * mass

    energy = grad_sq / 2 - lkp2 / (k + 2)
    return amp, mass, grad_sq, lkp2, energy


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    out = os.path.join(here, "..", "data", "ground_state_golden.csv")
    with open(out, "w") as fh:
        fh.write("# ground state Q of Q'' - Q + Q^(k+1) = 0 on the real line\n")
        fh.write("# generated by tools/golden_ground_state.py (mpmath adaptive quadrature)\n")
        fh.write("k,q0,mass,grad_sq,lkp2,energy\n")
        for k in range(1, K_MAX + 1):
            vals = row(k)
            fh.write(str(k) + "," + ",".join(mp.nstr(v, 25, min_fixed=-5, max_fixed=5) for v in vals) + "\n")
    print("wrote", os.path.normpath(out))


if __name__ == "__main__":
    main()
