"""GF(q) tables for q <= 16 and the points of PG(2, q)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import InputError

MAX_Q = 16

# monic irreducible polynomials, coefficients low degree first (Conway choices)
MODULI = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (2, 2, 1),  # x^2 + 2x + 2
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
}


@dataclass(frozen=True)
class PrimePower:
    q: int
    p: int
    e: int

    def __post_init__(self):
        if self.p ** self.e != self.q or self.e < 1 or not _is_prime(self.p):
            raise InputError(f"{self.q} != {self.p}^{self.e} with {self.p} prime")

    @classmethod
    def of(cls, q: int) -> "PrimePower":
        if not isinstance(q, int) or q < 2:
            raise InputError(f"q={q!r} is not a prime power")
        p = next(d for d in range(2, q + 1) if q % d == 0)
        e, rest = 0, q
        while rest % p == 0:
            rest //= p
            e += 1
        if rest != 1:
            raise InputError(f"q={q} is not a prime power")
        return cls(q, p, e)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


class Field:
    """Elements are 0..q-1, read as base-p digit vectors (polynomial coefficients)."""

    def __init__(self, pp: PrimePower):
        if pp.q > MAX_Q:
            raise InputError(f"q={pp.q} above the table cap {MAX_Q}")
        self.pp = pp
        q, p, e = pp.q, pp.p, pp.e
        digits = np.array([[(x // p ** i) % p for i in range(e)] for x in range(q)])
        weights = p ** np.arange(e)
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        mul = np.zeros((q, q), dtype=np.int64)
        for a, b in product(range(q), repeat=2):
            mul[a, b] = _poly_mulmod(digits[a], digits[b], MODULI.get(q, (0, 1)), p) @ weights
        self.mul = mul
        self.neg = np.array([int(np.flatnonzero(self.add[a] == 0)[0]) for a in range(q)])
        self.inv = np.array([0] + [int(np.flatnonzero(mul[a] == 1)[0]) for a in range(1, q)])

    @property
    def q(self) -> int:
        return self.pp.q

    def check_axioms(self) -> list[str]:
        """Exhaustive field-axiom check; returns the failures."""
        q, add, mul = self.q, self.add, self.mul
        out = []
        r = np.arange(q)
        if not (add == add.T).all() or not (mul == mul.T).all():
            out.append("not commutative")
        if not (add[0] == r).all() or not (mul[1] == r).all():
            out.append("bad identities")
        if not (add[add[:, :, None], r[None, None, :]] == add[r[:, None, None], add[None, :, :]]).all():
            out.append("addition not associative")
        if not (mul[mul[:, :, None], r[None, None, :]] == mul[r[:, None, None], mul[None, :, :]]).all():
            out.append("multiplication not associative")
        left = mul[r[:, None, None], add[None, :, :]]
        right = add[mul[:, :, None], mul[:, None, :]]
        if not (left == right).all():
            out.append("not distributive")
        if any(sorted(add[a]) != list(r) for a in range(q)):
            out.append("additive inverse missing")
        if any(sorted(mul[a, 1:]) != list(r[1:]) for a in range(1, q)):
            out.append("multiplicative inverse missing")
        return out


def _poly_mulmod(a, b, modulus, p):
    prod = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    for i, x in enumerate(a):
        prod[i:i + len(b)] += x * np.asarray(b)
    prod %= p
    deg = len(modulus) - 1
    for i in range(len(prod) - 1, deg - 1, -1):
        c = prod[i]
        if c:
            prod[i - deg:i + 1] = (prod[i - deg:i + 1] - c * np.asarray(modulus)) % p
    out = np.zeros(len(a), dtype=np.int64)
    out[:min(len(a), len(prod))] = prod[:len(a)]
    return out


@lru_cache(maxsize=None)
def field(q: int) -> Field:
    return Field(PrimePower.of(q))


def projective_points(f: Field) -> np.ndarray:
    """Normalised points of PG(2,q): first nonzero coordinate is 1, in lexicographic order."""
    q = f.q
    pts = [(x, y, z) for x, y, z in product(range(q), repeat=3)
           if (x, y, z) != (0, 0, 0) and next(c for c in (x, y, z) if c) == 1]
    return np.array(pts, dtype=np.int64)


def dot_table(f: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix of GF(q) dot products a_i . b_j."""
    terms = [f.mul[a[:, i][:, None], b[:, i][None, :]] for i in range(3)]
    return f.add[f.add[terms[0], terms[1]], terms[2]]
