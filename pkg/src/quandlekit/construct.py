"""Constructions: affine tables over Z_m and GF(p^a), and the SHQ families.

The workhorse is the affine rule a * b = h*a - (h-1)*b.  Over Z_(p^(c-1))
with h a primitive root modulo every power of the odd prime p, this yields
an SHQ with profile (1, (p-1)p^0, ..., (p-1)p^(c-2)); over GF(p^a) with h a
multiplicative generator it yields the two-cycle (cyclic type) SHQs with
profile (1, p^a - 1).  Members of the Z-family embed in the next one via
z -> p*z.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import QuandleTable
from .errors import (
    DegenerateMultiplier,
    MultiplierNotInvertible,
    NotOddPrime,
    ParamOutOfRange,
    SizeLimitExceeded,
)
from .limits import DEFAULT_TABLE_CAP, resolve_cap
from .numth import factorize, is_prime, multiplicative_order
from .shq import CheckOutcome
from .structure import subtable


@dataclass(frozen=True)
class PrimitiveRootResult:
    """Smallest primitive root g mod p, and h in {g, g+p} that generates the
    units modulo p^2 and therefore modulo every power of p."""

    p: int
    g: int
    h: int
    lifted: bool  # True when h = g + p


def primitive_root(p: int) -> PrimitiveRootResult:
    """Find g and its lift h for an odd prime p."""
    if p < 3 or not is_prime(p):
        raise NotOddPrime(f"{p} is not an odd prime")
    g = None
    for cand in range(2, p):
        if multiplicative_order(cand, p) == p - 1:
            g = cand
            break
    if g is None:  # every odd prime has one; guards the order routine
        raise ParamOutOfRange(f"no primitive root found modulo {p}")
    if multiplicative_order(g, p * p) == p * (p - 1):
        return PrimitiveRootResult(p, g, g, False)
    h = g + p
    if multiplicative_order(h, p * p) != p * (p - 1):
        raise ParamOutOfRange(f"lift {h} is not primitive modulo {p * p}")
    return PrimitiveRootResult(p, g, h, True)


def affine_quandle(m: int, h: int, max_order: int | None = None) -> QuandleTable:
    """The table a * b = h*a - (h-1)*b on Z_m, labels shifted to 1..m.

    h must be a unit mod m; h = 1 gives the trivial quandle.
    """
    if m < 1:
        raise ParamOutOfRange(f"modulus must be positive, got {m}")
    cap = resolve_cap(max_order, DEFAULT_TABLE_CAP, env=False)
    if m > cap:
        raise SizeLimitExceeded(f"order {m} exceeds construction cap {cap}")
    h %= m
    if gcd(h, m) != 1:
        raise MultiplierNotInvertible(f"{h} is not a unit modulo {m}")
    k = (1 - h) % m
    rows = []
    for a in range(m):
        ha = h * a
        rows.append([(ha + k * b) % m + 1 for b in range(m)])
    return QuandleTable.from_rows(rows)


def shq_family(p: int, c: int, max_order: int | None = None) -> QuandleTable:
    """Member (p, c) of the affine family: order p^(c-1), profile
    (1, (p-1)p^0, ..., (p-1)p^(c-2))."""
    if p < 3 or not is_prime(p):
        raise NotOddPrime(f"{p} is not an odd prime")
    if c < 2:
        raise ParamOutOfRange(f"need c >= 2, got {c}")
    return affine_quandle(p ** (c - 1), primitive_root(p).h, max_order)


class GaloisField:
    """GF(p^a) with elements as low-to-high coefficient tuples modulo the
    first irreducible monic polynomial in integer-encoding order."""

    def __init__(self, p: int, a: int):
        if not is_prime(p):
            raise ParamOutOfRange(f"{p} is not prime")
        if a < 1:
            raise ParamOutOfRange(f"need a >= 1, got {a}")
        self.p = p
        self.a = a
        self.order = p**a
        self.modulus = self._find_modulus()

    # -- encoding -------------------------------------------------------
    def element(self, k: int) -> tuple[int, ...]:
        """Element with integer encoding k = sum(c_i * p^i)."""
        if not 0 <= k < self.order:
            raise ParamOutOfRange(f"encoding {k} outside 0..{self.order - 1}")
        coeffs = []
        for _ in range(self.a):
            coeffs.append(k % self.p)
            k //= self.p
        return tuple(coeffs)

    def encode(self, x) -> int:
        out = 0
        for c in reversed(tuple(x)):
            out = out * self.p + c
        return out

    def elements(self) -> list[tuple[int, ...]]:
        return [self.element(k) for k in range(self.order)]

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.a

    @property
    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.a - 1)

    # -- arithmetic -----------------------------------------------------
    def add(self, x, y) -> tuple[int, ...]:
        return tuple((u + v) % self.p for u, v in zip(x, y))

    def sub(self, x, y) -> tuple[int, ...]:
        return tuple((u - v) % self.p for u, v in zip(x, y))

    def mul(self, x, y) -> tuple[int, ...]:
        prod = [0] * (2 * self.a - 1)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    prod[i + j] = (prod[i + j] + u * v) % self.p
        return tuple(self._reduce(prod))

    def _reduce(self, poly: list[int]) -> list[int]:
        mod = self.modulus
        for d in range(len(poly) - 1, self.a - 1, -1):
            lead = poly[d]
            if lead:
                for i in range(self.a + 1):
                    poly[d - self.a + i] = (poly[d - self.a + i] - lead * mod[i]) % self.p
        poly = poly[: self.a]
        return poly + [0] * (self.a - len(poly))

    def pow(self, x, e: int) -> tuple[int, ...]:
        if e < 0:
            raise ParamOutOfRange("negative exponents: use inv")
        out = self.one
        base = tuple(x)
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, x) -> tuple[int, ...]:
        if tuple(x) == self.zero:
            raise ParamOutOfRange("zero has no inverse")
        return self.pow(x, self.order - 2)

    def element_order(self, x) -> int:
        """Multiplicative order of a nonzero element."""
        if tuple(x) == self.zero:
            raise ParamOutOfRange("zero has no multiplicative order")
        order = self.order - 1
        for f in factorize(order) if order > 1 else ():
            while order % f == 0 and self.pow(x, order // f) == self.one:
                order //= f
        return order

    def multiplicative_generator(self) -> tuple[int, ...]:
        """Generator of the unit group with the smallest integer encoding."""
        target = self.order - 1
        for k in range(1, self.order):
            x = self.element(k)
            if self.element_order(x) == target:
                return x
        raise ParamOutOfRange("no generator found")  # unreachable

    # -- modulus search -------------------------------------------------
    def _find_modulus(self) -> tuple[int, ...]:
        if self.a == 1:
            return (0, 1)  # reduction modulo x: the prime field itself
        for k in range(self.order):
            coeffs = []
            kk = k
            for _ in range(self.a):
                coeffs.append(kk % self.p)
                kk //= self.p
            cand = tuple(coeffs) + (1,)
            if self._is_irreducible(cand):
                return cand
        raise ParamOutOfRange("no irreducible polynomial found")  # unreachable

    def _is_irreducible(self, f: tuple[int, ...]) -> bool:
        deg_f = len(f) - 1
        for d in range(1, deg_f // 2 + 1):
            for k in range(self.p**d):
                coeffs = []
                kk = k
                for _ in range(d):
                    coeffs.append(kk % self.p)
                    kk //= self.p
                g = coeffs + [1]
                if self._poly_divides(g, list(f)):
                    return False
        return True

    def _poly_divides(self, g: list[int], f: list[int]) -> bool:
        """Whether monic g divides f over Z_p."""
        rem = f[:]
        dg = len(g) - 1
        for d in range(len(rem) - 1, dg - 1, -1):
            lead = rem[d]
            if lead:
                for i in range(dg + 1):
                    rem[d - dg + i] = (rem[d - dg + i] - lead * g[i]) % self.p
        return not any(rem[:dg])


def galois_affine_quandle(
    p: int, a: int, multiplier, max_order: int | None = None
) -> QuandleTable:
    """The table x * y = h*x + (1-h)*y over GF(p^a).

    multiplier is a field element, given as an integer encoding or a
    coefficient tuple; labels follow the encoding order (encoding + 1).
    With a multiplicative generator the result has profile (1, p^a - 1).
    """
    field = GaloisField(p, a)
    cap = resolve_cap(max_order, DEFAULT_TABLE_CAP, env=False)
    if field.order > cap:
        raise SizeLimitExceeded(f"order {field.order} exceeds construction cap {cap}")
    h = field.element(multiplier) if isinstance(multiplier, int) else tuple(multiplier)
    if h == field.zero or h == field.one:
        raise DegenerateMultiplier(f"multiplier {field.encode(h)} gives no quandle structure")
    k = field.sub(field.one, h)
    elems = field.elements()
    hx = [field.mul(h, x) for x in elems]
    ky = [field.mul(k, y) for y in elems]
    rows = []
    for x in range(field.order):
        row = [field.encode(field.add(hx[x], ky[y])) + 1 for y in range(field.order)]
        rows.append(row)
    return QuandleTable.from_rows(rows)


@dataclass(frozen=True)
class EmbeddingReport:
    """Outcome of embedding family member (p, c) into (p, c+1) by z -> p*z."""

    p: int
    c: int
    checks: tuple[CheckOutcome, ...]

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)


def family_embedding(p: int, c: int, max_order: int | None = None) -> EmbeddingReport:
    """Check that the order-p^(c-1) member sits inside the order-p^c member
    as the image of z -> p*z."""
    small = shq_family(p, c, max_order)
    big = shq_family(p, c + 1, max_order)
    image = [p * (x - 1) + 1 for x in range(1, small.n + 1)]
    checks = []

    distinct = len(set(image)) == small.n and all(1 <= v <= big.n for v in image)
    checks.append(CheckOutcome("injective", distinct, f"{small.n} distinct images"))

    hom_bad = None
    for x in range(1, small.n + 1):
        for y in range(1, small.n + 1):
            if big.op(image[x - 1], image[y - 1]) != image[small.op(x, y) - 1]:
                hom_bad = (x, y)
                break
        if hom_bad:
            break
    checks.append(
        CheckOutcome(
            "homomorphism",
            hom_bad is None,
            "f(x*y) = f(x)*f(y) on all pairs" if hom_bad is None else f"fails at {hom_bad}",
        )
    )

    img_set = set(image)
    closed = all(
        big.op(u, v) in img_set for u in image for v in image
    )
    checks.append(CheckOutcome("image_closed", closed, f"image of size {len(img_set)}"))

    induced = subtable(big, image) if closed else None
    same = induced == small if induced is not None else False
    checks.append(
        CheckOutcome(
            "induced_table",
            same,
            "induced table equals the smaller member" if same else "induced table differs",
        )
    )
    return EmbeddingReport(p, c, tuple(checks))
