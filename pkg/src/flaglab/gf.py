"""Finite fields GF(q) for prime powers q <= 16.

Elements are integers 0..q-1.  The integer ``sum(c_i * p**i)`` encodes the
polynomial ``sum(c_i * x**i)`` modulo a fixed irreducible polynomial, so the
prime fields are just the integers mod p.  All arithmetic goes through
precomputed q x q tables, which also makes it trivially vectorizable with
numpy fancy indexing (``f.mul[a, b]`` works for arrays ``a`` and ``b``).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, NotAPrimePower

MAX_ORDER = 16

# Irreducible moduli for the non-prime orders, as coefficient lists from the
# constant term upward (monic, leading coefficient last).
MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1 over GF(2)
    8: (1, 1, 0, 1),  # x^3 + x + 1 over GF(2)
    9: (1, 0, 1),  # x^2 + 1 over GF(3)
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1 over GF(2)
}


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e`` or raise NotAPrimePower."""
    if not isinstance(q, (int, np.integer)) or q < 2 or q > MAX_ORDER:
        raise NotAPrimePower(f"q={q} is not a supported prime power (2 <= q <= {MAX_ORDER})")
    q = int(q)
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NotAPrimePower(f"q={q} has more than one prime factor")
    return p, e


# -- polynomials over GF(p), coefficient lists low degree first --------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _monic_polys(deg: int, p: int):
    for code in range(p**deg):
        coeffs = [(code // p**i) % p for i in range(deg)]
        yield coeffs + [1]


def is_irreducible(modulus: tuple[int, ...] | list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    m = list(modulus)
    deg = len(m) - 1
    if deg < 1 or m[-1] % p == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(d, p):
            if not _poly_mod(m, f, p):
                return False
    return True


def _digits(x: int, p: int, e: int) -> list[int]:
    return [(x // p**i) % p for i in range(e)]


def _undigits(c: list[int], p: int) -> int:
    return sum(ci * p**i for i, ci in enumerate(c))


def poly_mul_mod(a: int, b: int, p: int, modulus: tuple[int, ...]) -> int:
    """Multiply two encoded elements by schoolbook polynomial multiplication."""
    e = len(modulus) - 1
    da, db = _digits(a, p, e), _digits(b, p, e)
    prod = [0] * (2 * e)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] += x * y
    r = _poly_mod(prod, list(modulus), p) if e > 1 else [prod[0] % p]
    return _undigits(r, p)


class GF:
    """The field GF(q) with table arithmetic.

    Instances are immutable and cached per order; use :func:`field_new`.
    """

    def __init__(self, q: int):
        p, e = prime_power(q)
        self.q, self.p, self.e = q, p, e
        self.modulus: tuple[int, ...] = MODULI.get(q, (0, 1))
        if e > 1 and not is_irreducible(self.modulus, p):
            raise ValueError(f"modulus {self.modulus} is reducible over GF({p})")

        el = np.arange(q)
        dig = np.array([_digits(x, p, e) for x in range(q)], dtype=np.int64)
        add = np.zeros((q, q), dtype=np.int64)
        for i in range(e):
            add += ((dig[:, None, i] + dig[None, :, i]) % p) * p**i
        mul = np.array(
            [[poly_mul_mod(a, b, p, self.modulus) for b in range(q)] for a in range(q)],
            dtype=np.int64,
        )
        neg = np.array([_undigits([(-c) % p for c in _digits(x, p, e)], p) for x in el])

        gen = next(g for g in range(1, q) if self._order(mul, g) == q - 1)
        antilog = np.zeros(q, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            antilog[k] = x
            log[x] = k
            x = mul[x, gen]
        antilog[q - 1] = 1
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = antilog[(q - 1 - log[1:]) % (q - 1)]

        self.add, self.mul, self.neg, self.inv = add, mul, neg, inv
        self.sub = add[:, neg]
        self.generator = int(gen)
        self.log, self.antilog = log, antilog
        for arr in (self.add, self.mul, self.neg, self.inv, self.sub, self.log, self.antilog):
            arr.setflags(write=False)

    @staticmethod
    def _order(mul: np.ndarray, g: int) -> int:
        if g == 0:
            return 0
        x, k = g, 1
        while x != 1:
            x = mul[x, g]
            k += 1
        return k

    def inverse(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        return int(self.inv[a])

    def ops(self, a: int, b: int) -> dict[str, int | None]:
        """Sum, product and inverse-of-a (None when a == 0) of two elements."""
        for x in (a, b):
            if not 0 <= x < self.q:
                raise ValueError(f"{x} is not an element of GF({self.q})")
        return {
            "sum": int(self.add[a, b]),
            "product": int(self.mul[a, b]),
            "inverse": int(self.inv[a]) if a else None,
        }

    def modulus_str(self) -> str:
        return "".join(str(c) for c in self.modulus)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (field_new, (self.q,))


@lru_cache(maxsize=None)
def field_new(q: int) -> GF:
    return GF(q)
