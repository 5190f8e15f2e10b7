"""Finite fields GF(p^f) small enough to enumerate.

Elements are residue polynomials modulo a fixed monic irreducible polynomial.
Internally an element is packed into a single integer ``sum(c_i * p**i)``
(``c_0`` least significant); :class:`FieldElement` is the public, explicit
coefficient form.  Both the modulus and the primitive element are chosen by
exhaustive search in that integer order, so a given ``(p, f)`` always yields
the same field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .errors import BadDivisor, NotPrime, SizeCap

FIELD_CAP = 2**20


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for ``n < 3.3e24``."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    m = 2
    while m * m <= n:
        if n % m == 0:
            out.append(m)
            while n % m == 0:
                n //= m
        m += 1
    if n > 1:
        out.append(n)
    return out


def prime_power_decomposition(q: int) -> tuple[int, int] | None:
    """Return ``(p, f)`` with ``q == p**f`` or None if ``q`` is no prime power."""
    if q < 2:
        return None
    factors = prime_factors(q)
    if len(factors) != 1:
        return None
    p = factors[0]
    f, m = 0, q
    while m > 1:
        m //= p
        f += 1
    return p, f


@dataclass(frozen=True)
class PrimePower:
    p: int
    f: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.f < 1:
            raise ValueError(f"exponent must be positive, got {self.f}")

    @property
    def q(self) -> int:
        return self.p**self.f


@dataclass(frozen=True)
class FieldElement:
    """Coefficients ``(c_0, ..., c_{f-1})`` of a residue polynomial."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))


# -- polynomial helpers over GF(p); lists are little-endian coefficient lists


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _poly_trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _poly_trim(a)
    return a


def _monic_from_index(n: int, degree: int, p: int) -> list[int]:
    coeffs = []
    for _ in range(degree):
        coeffs.append(n % p)
        n //= p
    return coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree at most half."""
    poly = [c % p for c in poly]
    deg = len(poly) - 1
    if deg < 1 or poly[-1] != 1:
        raise ValueError("expected a monic polynomial of positive degree")
    for k in range(1, deg // 2 + 1):
        for n in range(p**k):
            if not _poly_mod(list(poly), _monic_from_index(n, k, p), p):
                return False
    return True


def lowest_irreducible(p: int, f: int) -> list[int]:
    """First monic irreducible of degree ``f`` in packed-integer order."""
    if f == 1:
        return [0, 1]
    for n in range(p**f):
        cand = _monic_from_index(n, f, p)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("irreducible polynomials exist in every degree")


@dataclass(frozen=True)
class FieldCtx:
    """An explicit model of GF(p^f).

    Build instances with :func:`make_field`; the constructor does not search
    for or validate the modulus and primitive element.
    """

    prime_power: PrimePower
    modulus_poly: tuple[int, ...]
    primitive_element: FieldElement = field(compare=False)

    @property
    def p(self) -> int:
        return self.prime_power.p

    @property
    def f(self) -> int:
        return self.prime_power.f

    @property
    def q(self) -> int:
        return self.prime_power.q

    # -- packed-integer arithmetic, used by the scheme constructors

    def pack(self, x: FieldElement | int | Sequence[int]) -> int:
        if isinstance(x, int):
            if not 0 <= x < self.q:
                raise ValueError(f"element index {x} outside [0, {self.q})")
            return x
        coeffs = x.coeffs if isinstance(x, FieldElement) else tuple(x)
        if len(coeffs) != self.f:
            raise ValueError(f"expected {self.f} coefficients, got {len(coeffs)}")
        n = 0
        for c in reversed(coeffs):
            if not 0 <= c < self.p:
                raise ValueError(f"coefficient {c} not reduced mod {self.p}")
            n = n * self.p + c
        return n

    def unpack(self, n: int) -> FieldElement:
        coeffs = []
        for _ in range(self.f):
            coeffs.append(n % self.p)
            n //= self.p
        return FieldElement(tuple(coeffs))

    def _digits(self, n: int) -> list[int]:
        out = []
        for _ in range(self.f):
            out.append(n % self.p)
            n //= self.p
        return out

    def _from_digits(self, digits: Sequence[int]) -> int:
        n = 0
        for c in reversed(list(digits) + [0] * (self.f - len(digits))):
            n = n * self.p + c
        return n

    def add_int(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def neg_int(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        return self._from_digits([(-x) % self.p for x in self._digits(a)])

    def sub_int(self, a: int, b: int) -> int:
        return self.add_int(a, self.neg_int(b))

    def mul_int(self, a: int, b: int) -> int:
        p = self.p
        if self.f == 1:
            return a * b % p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._from_digits(_poly_mod(prod, list(self.modulus_poly), p))

    def pow_int(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponents are not supported")
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul_int(result, base)
            base = self.mul_int(base, base)
            e >>= 1
        return result

    def order_int(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        order = self.q - 1
        for r in prime_factors(self.q - 1):
            while order % r == 0 and self.pow_int(a, order // r) == 1:
                order //= r
        return order

    # -- FieldElement front end

    def element(self, x: int | Sequence[int]) -> FieldElement:
        return self.unpack(self.pack(x))

    def elements(self) -> Iterator[FieldElement]:
        for n in range(self.q):
            yield self.unpack(n)

    def add(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.unpack(self.add_int(self.pack(x), self.pack(y)))

    def sub(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.unpack(self.sub_int(self.pack(x), self.pack(y)))

    def neg(self, x: FieldElement) -> FieldElement:
        return self.unpack(self.neg_int(self.pack(x)))

    def mul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.unpack(self.mul_int(self.pack(x), self.pack(y)))

    def pow(self, x: FieldElement, e: int) -> FieldElement:
        return self.unpack(self.pow_int(self.pack(x), e))

    def order(self, x: FieldElement) -> int:
        return self.order_int(self.pack(x))

    @cached_property
    def gamma(self) -> int:
        """Packed form of the primitive element."""
        return self.pack(self.primitive_element)


def make_field(p: int, f: int = 1) -> FieldCtx:
    """Construct GF(p^f) with a deterministic modulus and primitive element.

    Parameters
    ----------
    p : int
        Characteristic; must be prime.
    f : int
        Extension degree, ``p**f <= 2**20``.

    Returns
    -------
    FieldCtx
        The modulus is the first monic irreducible of degree ``f`` and the
        primitive element the first element of order ``q - 1``, both in
        packed-integer order.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if f < 1:
        raise ValueError(f"exponent must be positive, got {f}")
    if p**f > FIELD_CAP:
        raise SizeCap(f"{p}^{f} exceeds the field cap {FIELD_CAP}")
    pp = PrimePower(p, f)
    modulus = tuple(lowest_irreducible(p, f))
    probe = FieldCtx(pp, modulus, FieldElement((1,) + (0,) * (f - 1)))
    for n in range(1, pp.q):
        if probe.order_int(n) == pp.q - 1:
            return FieldCtx(pp, modulus, probe.unpack(n))
    raise AssertionError("the multiplicative group of a finite field is cyclic")


def _check_divisor(ctx: FieldCtx, d: int) -> None:
    if d <= 1 or (ctx.q - 1) % d:
        raise BadDivisor(f"need d > 1 dividing q - 1 = {ctx.q - 1}, got d = {d}")


def cyclotomic_class(ctx: FieldCtx, d: int, x: FieldElement | int) -> int | None:
    """Index ``i`` with ``x`` in ``gamma**i * <gamma**d>``, or None for zero.

    ``x`` lies in class ``i`` exactly when ``x**((q-1)/d)`` equals
    ``gamma**(i*(q-1)/d)``, a primitive ``d``-th root of unity raised to ``i``.
    """
    _check_divisor(ctx, d)
    n = ctx.pack(x)
    if n == 0:
        return None
    e = (ctx.q - 1) // d
    target = ctx.pow_int(n, e)
    root = ctx.pow_int(ctx.gamma, e)
    acc = 1
    for i in range(d):
        if acc == target:
            return i
        acc = ctx.mul_int(acc, root)
    raise AssertionError("x**((q-1)/d) is always a d-th root of unity")


def class_table(ctx: FieldCtx, d: int) -> list[int]:
    """Class index of every nonzero packed element, ``-1`` for zero.

    Walks the powers of the primitive element once instead of exponentiating
    every element.
    """
    _check_divisor(ctx, d)
    table = [-1] * ctx.q
    acc = 1
    for k in range(ctx.q - 1):
        table[acc] = k % d
        acc = ctx.mul_int(acc, ctx.gamma)
    return table
