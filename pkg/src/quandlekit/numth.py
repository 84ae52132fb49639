"""Small number-theory helpers: primality, factorization, element orders."""

from __future__ import annotations

from math import gcd

from .errors import ParamOutOfRange


def is_prime(n: int) -> bool:
    """Primality by trial division; fine for the table sizes handled here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {prime: exponent} of n >= 1 by trial division."""
    if n < 1:
        raise ParamOutOfRange(f"cannot factorize {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, a) with n = p**a if n is a prime power, else None."""
    if n < 2:
        return None
    facs = factorize(n)
    if len(facs) != 1:
        return None
    [(p, a)] = facs.items()
    return p, a


def euler_phi(n: int) -> int:
    phi = 1
    for p, a in factorize(n).items():
        phi *= (p - 1) * p ** (a - 1)
    return phi


def multiplicative_order(x: int, m: int) -> int:
    """Order of x in the unit group of Z_m; requires gcd(x, m) = 1."""
    x %= m
    if m < 2 or gcd(x, m) != 1:
        raise ParamOutOfRange(f"{x} is not a unit modulo {m}")
    order = euler_phi(m)
    for p in factorize(order):
        while order % p == 0 and pow(x, order // p, m) == 1:
            order //= p
    return order
