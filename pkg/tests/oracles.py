"""Independent reference implementations used only by the tests."""
import math
from fractions import Fraction

import numpy as np
from decimal import Decimal, getcontext

_POP = np.array([bin(i).count("1") for i in range(1 << 10)], dtype=np.int64)


def naive_z22(m: int, n: int, chunk: int = 1 << 21) -> int:
    """max edges of an m x n 0/1 matrix with no 2x2 all-ones submatrix, by full enumeration."""
    bits = m * n
    mask = (1 << n) - 1
    best = 0
    for start in range(0, 1 << bits, chunk):
        idx = np.arange(start, min(start + chunk, 1 << bits), dtype=np.int64)
        rows = [(idx >> (i * n)) & mask for i in range(m)]
        ok = np.ones(len(idx), dtype=bool)
        for i in range(m):
            for j in range(i + 1, m):
                ok &= _POP[rows[i] & rows[j]] <= 1
        if ok.any():
            edges = sum(_POP[r] for r in rows)
            best = max(best, int(edges[ok].max()))
    return best


def furedi_float(m, n, s, t):
    getcontext().prec = 50
    D = Decimal
    return ((D(t - s + 1) ** (D(1) / D(s))) * m * D(n) ** (1 - D(1) / D(s))
            + s * m + s * D(n) ** (2 - D(2) / D(s)))


# second implementation of the derived constants, in Decimal arithmetic


def _dec(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def constants_general(alpha, beta, rho, delta):
    getcontext().prec = 60
    a, b, r, d = (Fraction(str(v)) for v in (alpha, beta, rho, delta))
    if b == 1:
        l0 = math.floor(1 / (a - 1)) + 1
    else:
        x = _dec((2 - b) * (a - 1) / (a - b))
        lg = x.ln() / _dec(b).ln()
        l0 = int(lg.to_integral_value(rounding="ROUND_FLOOR")) + 2
    inv = 1 / (a - 1)

    def power(base: Fraction, e: Fraction):
        # integer exponents stay exact rationals, as a hand evaluation would
        if e.denominator == 1:
            return base ** e.numerator
        return (_dec(base).ln() * _dec(e)).exp()

    def mu_at(dd):
        gamma = power(dd / (12 * r), inv)
        g_dec = gamma if isinstance(gamma, Decimal) else _dec(gamma)
        cands = [power(dd / (2 * r), inv) / 2,
                 _dec(dd / (4 * r)) * (g_dec.ln() * _dec(2 - a)).exp(),
                 gamma / l0]
        return gamma, min(cands, key=lambda c: c if isinstance(c, Decimal) else _dec(c))

    gamma, mu = mu_at(d)
    _, mu_half = mu_at(d / 2)
    three = 3 / mu_half
    big_l = (math.floor(three) if isinstance(three, Fraction)
             else int(three.to_integral_value(rounding="ROUND_FLOOR"))) * l0
    return {"ell0": l0, "gamma": float(gamma), "mu": float(mu), "bigL": big_l, "k0": 2 * l0 + big_l + 2,
            "mu_half": float(mu_half)}


def constants_c2l(ell, delta):
    getcontext().prec = 60
    d = _dec(Fraction(str(delta)))
    big_l_real = 3 * ell * (8 * ell / d) ** ell
    big_l = int(big_l_real.to_integral_value(rounding="ROUND_CEILING"))
    gamma = d ** (ell + 1) / (Decimal(2) ** (6 * ell + 4) * Decimal(ell) ** (2 * ell))
    mu = (d / (8 * ell)) ** ell
    return {"ell0": ell, "gamma": float(gamma), "mu": float(mu), "bigL": big_l, "k0": 2 * ell + big_l + 2}
