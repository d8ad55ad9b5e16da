"""Closed-form constants that drive the expansion and cycle-building steps.

Inputs given as floats are read through their decimal repr (1.1 means 11/10),
so integer-valued thresholds such as floor(1/(alpha-1)) do not flip on binary
rounding.  Powers with integer exponents stay exact rationals; the rest are
evaluated in 60-digit mpmath before any floor is taken.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Rational, Real

import mpmath

from .errors import InputError

_mp = mpmath.MPContext()  # private context; leaves the global precision alone
_mp.dps = 60


def as_fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise InputError("boolean is not a number")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, (Real, str)):
        try:
            return Fraction(repr(x) if isinstance(x, float) else str(x))
        except ValueError:
            raise InputError(f"not a finite number: {x!r}") from None
    raise InputError(f"not a number: {x!r}")


def _mpf(x):
    if isinstance(x, Fraction):
        return _mp.mpf(x.numerator) / x.denominator
    return x


def _pow(base: Fraction, exp: Fraction):
    """base**exp, exact when exp is an integer."""
    if exp.denominator == 1:
        return base ** exp.numerator
    return _mp.power(_mpf(base), _mpf(exp))


def _lt(a, b) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a < b
    return _mpf(a) < _mpf(b)


def _floor(x) -> int:
    if isinstance(x, Fraction):
        return math.floor(x)
    return int(_mp.floor(x))


@dataclass(frozen=True)
class DerivedConstants:
    ell0: int
    gamma: float
    mu: float
    bigL: int
    k0: int
    provenance: str  # "general" | "c2l"
    mu_half: float | None = None

    def to_json(self) -> dict:
        return asdict(self)


def ell0_of(alpha, beta) -> int:
    a, b = as_fraction(alpha), as_fraction(beta)
    if not 2 > a > b >= 1:
        raise InputError("need 2 > alpha > beta >= 1")
    if b == 1:
        return math.floor(1 / (a - 1)) + 1
    x = (2 - b) * (a - 1) / (a - b)  # > 1 whenever 2 > a > b > 1
    k = int(math.floor(math.log(x) / math.log(b)))
    # settle floor(log_b x) exactly: b**k <= x < b**(k+1)
    while b ** k > x:
        k -= 1
    while b ** (k + 1) <= x:
        k += 1
    return k + 2


def _mul(x, y):
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x * y
    return _mpf(x) * _mpf(y)


def _gamma_mu(a: Fraction, rho: Fraction, delta: Fraction, ell0: int):
    inv = 1 / (a - 1)
    gamma = _pow(delta / (12 * rho), inv)
    gamma_pow = _mp.power(_mpf(gamma), _mpf(2 - a))  # 0 < 2 - a < 1, never an integer
    terms = [
        _mul(Fraction(1, 2), _pow(delta / (2 * rho), inv)),
        _mul(delta / (4 * rho), gamma_pow),
        _mul(Fraction(1, ell0), gamma),
    ]
    mu = terms[0]
    for t in terms[1:]:
        if _lt(t, mu):
            mu = t
    return gamma, mu


def derive_constants(alpha, beta, rho, delta) -> DerivedConstants:
    a, b = as_fraction(alpha), as_fraction(beta)
    r, d = as_fraction(rho), as_fraction(delta)
    if r <= 0 or d <= 0:
        raise InputError("rho and delta must be positive")
    ell0 = ell0_of(a, b)
    gamma, mu = _gamma_mu(a, r, d, ell0)
    _, mu_half = _gamma_mu(a, r, d / 2, ell0)
    three_over = Fraction(3) / mu_half if isinstance(mu_half, Fraction) else 3 / _mpf(mu_half)
    big_l = _floor(three_over) * ell0
    return DerivedConstants(
        ell0=ell0,
        gamma=float(gamma),
        mu=float(mu),
        bigL=big_l,
        k0=2 * ell0 + big_l + 2,
        provenance="general",
        mu_half=float(mu_half),
    )


def mu_of(alpha, beta, rho, delta) -> float:
    a = as_fraction(alpha)
    return float(_gamma_mu(a, as_fraction(rho), as_fraction(delta), ell0_of(alpha, beta))[1])


def derive_constants_c2l(ell: int, delta) -> DerivedConstants:
    if not isinstance(ell, int) or ell < 2:
        raise InputError("ell must be an integer >= 2")
    d = as_fraction(delta)
    if d <= 0:
        raise InputError("delta must be positive")
    big_l = math.ceil(3 * ell * (8 * ell / d) ** ell)
    gamma = d ** (ell + 1) / (2 ** (6 * ell + 4) * ell ** (2 * ell))
    mu = (d / (8 * ell)) ** ell
    return DerivedConstants(
        ell0=ell,
        gamma=float(gamma),
        mu=float(mu),
        bigL=big_l,
        k0=2 * ell + big_l + 2,
        provenance="c2l",
    )


def b_sequence(alpha, beta, count: int) -> list[Fraction]:
    """Exponents b_1 = alpha-1, b_{i+1} = b_i/beta + (alpha-1)/beta."""
    a, b = as_fraction(alpha), as_fraction(beta)
    out = [a - 1]
    while len(out) < count:
        out.append(out[-1] / b + (a - 1) / b)
    return out
