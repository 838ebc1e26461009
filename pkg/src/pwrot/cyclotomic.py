"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored over the power basis 1, z, ..., z^(phi(N)-1) with a
single positive integer denominator, always reduced modulo the N-th
cyclotomic polynomial, so equality is a plain tuple comparison.

Signs of real quantities are decided exactly: an exact zero test on the
canonical form, then interval evaluation at increasing precision.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from mpmath import iv

__all__ = [
    "Cyclo",
    "cyclo_new",
    "cyclo_arith",
    "sign_re_im",
    "approx",
    "lift",
    "zeta",
    "parse_cyclo",
    "field_for_angle",
]


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic; coefficient lists are low-degree first
    num = list(num)
    dq = len(den) - 1
    if len(num) - 1 < dq:
        return [0], num
    quot = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        if c:
            quot[i - dq] = c
            for j in range(dq + 1):
                num[i - dq + j] -= c * den[j]
    rem = num[:dq] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    return tuple(poly)


class _Field:
    """Precomputed tables for one value of N."""

    def __init__(self, n: int):
        self.n = n
        phi = cyclotomic_poly(n)
        self.deg = d = len(phi) - 1
        # reductions of x^k for 0 <= k < max(2d-1, n)
        self.power = []
        for k in range(max(2 * d - 1, n)):
            mono = [0] * k + [1]
            _, rem = _poly_divmod(mono, list(phi))
            rem = rem + [0] * (d - len(rem))
            self.power.append(tuple(rem))
        self.units = [k for k in range(1, n + 1) if math.gcd(k, n) == 1] if n > 1 else [1]
        # Galois automorphisms zeta -> zeta^k as integer matrices (column j = image of x^j)
        self.auto = {k: [self.power[(j * k) % n] for j in range(d)] for k in self.units}
        self.cos = [math.cos(2 * math.pi * j / n) for j in range(d)]
        self.sin = [math.sin(2 * math.pi * j / n) for j in range(d)]

    def reduce(self, coeffs: Sequence[int]) -> list[int]:
        d = self.deg
        out = list(coeffs[:d]) + [0] * max(0, d - len(coeffs))
        for k in range(d, len(coeffs)):
            c = coeffs[k]
            if c:
                row = self.power[k] if k < len(self.power) else self.power[k % self.n]
                for j in range(d):
                    if row[j]:
                        out[j] += c * row[j]
        return out


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    return _Field(n)


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = math.gcd(den, *num)
    if g > 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


class Cyclo:
    """An element of Q(zeta_N), immutable and hashable."""

    __slots__ = ("n", "num", "den", "_hash")

    def __init__(self, n: int, num: tuple[int, ...], den: int = 1, *, _canonical: bool = False):
        if not _canonical:
            f = _field(n)
            num, den = _normalize(f.reduce(list(num)), den)
        self.n = n
        self.num = num
        self.den = den
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def from_rational(cls, n: int, value) -> "Cyclo":
        v = Fraction(value)
        d = _field(n).deg
        num = [v.numerator] + [0] * (d - 1)
        return cls(n, tuple(num), v.denominator)

    @classmethod
    def _raw(cls, n: int, num: list[int], den: int) -> "Cyclo":
        num, den = _normalize(num, den)
        return cls(n, num, den, _canonical=True)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    # comparisons ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Cyclo):
            return self.n == other.n and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            return self == Cyclo.from_rational(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.num, self.den))
        return self._hash

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def key(self) -> tuple:
        """Total order used only for canonical sorting (not geometric)."""
        return tuple(Fraction(c, self.den) for c in self.num)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Cyclo":
        if isinstance(other, Cyclo):
            if other.n != self.n:
                raise ValueError(f"mismatched fields: N={self.n} and N={other.n}; lift explicitly")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclo.from_rational(self.n, other)
        raise TypeError(f"cannot combine Cyclo with {type(other).__name__}")

    def __add__(self, other) -> "Cyclo":
        o = self._coerce(other)
        if self.den == o.den:
            return Cyclo._raw(self.n, [a + b for a, b in zip(self.num, o.num)], self.den)
        return Cyclo._raw(
            self.n, [a * o.den + b * self.den for a, b in zip(self.num, o.num)], self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self) -> "Cyclo":
        return Cyclo(self.n, tuple(-c for c in self.num), self.den, _canonical=True)

    def __sub__(self, other) -> "Cyclo":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Cyclo":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Cyclo":
        if isinstance(other, int):
            return Cyclo._raw(self.n, [c * other for c in self.num], self.den)
        if isinstance(other, Fraction):
            return Cyclo._raw(self.n, [c * other.numerator for c in self.num], self.den * other.denominator)
        o = self._coerce(other)
        f = _field(self.n)
        a, b = self.num, o.num
        prod = [0] * (2 * f.deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return Cyclo._raw(self.n, f.reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def galois(self, k: int) -> "Cyclo":
        """Image under the automorphism zeta -> zeta^k (gcd(k, N) = 1)."""
        f = _field(self.n)
        cols = f.auto[k % self.n or self.n] if self.n > 1 else f.auto[1]
        out = [0] * f.deg
        for c, col in zip(self.num, cols):
            if c:
                for j in range(f.deg):
                    if col[j]:
                        out[j] += c * col[j]
        return Cyclo._raw(self.n, out, self.den)

    def conj(self) -> "Cyclo":
        return self.galois(-1 % self.n) if self.n > 2 else self

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        prod = Cyclo.from_rational(self.n, 1)
        for k in _field(self.n).units:
            prod = prod * self.galois(k)
        assert not any(prod.num[1:])
        return Fraction(prod.num[0], prod.den)

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        f = _field(self.n)
        if f.deg == 1:
            return Cyclo.from_rational(self.n, Fraction(self.den, self.num[0]))
        others = Cyclo.from_rational(self.n, 1)
        for k in f.units:
            if k != 1:
                others = others * self.galois(k)
        total = self * others
        nrm = Fraction(total.num[0], total.den)
        return others * (1 / nrm)

    def __truediv__(self, other) -> "Cyclo":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return self * (1 / Fraction(other))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "Cyclo":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "Cyclo":
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclo.from_rational(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # real/imaginary parts --------------------------------------------
    def real_part(self) -> "Cyclo":
        return (self + self.conj()) * Fraction(1, 2)

    def imag_part(self) -> "Cyclo":
        """Im(z) as a field element; needs i in the field (4 | N)."""
        if self.n % 4:
            raise ValueError(f"Im() is not an element of Q(zeta_{self.n}); use a field with 4 | N")
        i = zeta(self.n) ** (self.n // 4)
        return (self - self.conj()) * i * Fraction(-1, 2)

    def is_real(self) -> bool:
        return self == self.conj()

    def sign(self) -> int:
        """Exact sign of a real element."""
        if not self.is_real():
            raise ValueError("sign() of a non-real element")
        return _sign_component(self, imag=False)

    def __complex__(self) -> complex:
        f = _field(self.n)
        re_ = sum(c * x for c, x in zip(self.num, f.cos)) / self.den
        im_ = sum(c * x for c, x in zip(self.num, f.sin)) / self.den
        return complex(re_, im_)

    def __float__(self) -> float:
        return complex(self).real

    def __repr__(self) -> str:
        return format_cyclo(self)

    # convenience for geometry: ordering of real elements
    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0


def _float_component(z: Cyclo, imag: bool) -> tuple[float, float]:
    f = _field(z.n)
    table = f.sin if imag else f.cos
    total = 0.0
    mag = 0.0
    for c, t in zip(z.num, table):
        if c:
            x = c / z.den
            total += x * t
            mag += abs(x)
    # conversion, table and summation errors together
    return total, (f.deg + 4) * 4.5e-16 * mag + 1e-300


def _iv_component(z: Cyclo, imag: bool, prec: int):
    saved = iv.prec
    iv.prec = prec
    try:
        acc = iv.mpf(0)
        for j, c in enumerate(z.num):
            if c:
                ang = 2 * iv.pi * j / z.n
                acc += iv.mpf(c) * (iv.sin(ang) if imag else iv.cos(ang))
        return acc / z.den
    finally:
        iv.prec = saved


def _sign_component(z: Cyclo, imag: bool) -> int:
    # exact zero test first; guarantees termination of refinement below
    if imag:
        if z == z.conj():
            return 0
    else:
        if (z + z.conj()).is_zero():
            return 0
    val, err = _float_component(z, imag)
    if abs(val) > err:
        return 1 if val > 0 else -1
    prec = 128
    while True:
        box = _iv_component(z, imag, prec)
        if box.a > 0:
            return 1
        if box.b < 0:
            return -1
        prec *= 2


def cyclo_new(n: int, coeffs: Iterable) -> Cyclo:
    """Build the canonical element sum coeffs[k] * zeta_n^k."""
    if n < 1:
        raise ValueError("N must be a positive integer")
    fr = [Fraction(c) for c in coeffs]
    if len(fr) > max(n, 1):
        raise ValueError("coefficient vector longer than N")
    den = math.lcm(*(c.denominator for c in fr)) if fr else 1
    num = [int(c * den) for c in fr] or [0]
    return Cyclo(n, tuple(num), den)


def zeta(n: int, k: int = 1) -> Cyclo:
    """zeta_n ** k."""
    f = _field(n)
    return Cyclo(n, f.power[k % n], 1, _canonical=True)


def cyclo_arith(a: Cyclo, b: Cyclo | None, op: str) -> Cyclo:
    if op == "conj":
        return a.conj()
    if b is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if a.n != b.n:
        raise ValueError(f"mismatched fields: N={a.n} and N={b.n}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def sign_re_im(z: Cyclo) -> tuple[int, int]:
    return _sign_component(z, imag=False), _sign_component(z, imag=True)


def approx(z: Cyclo, precision_bits: int = 53):
    """Certified box (re_interval, im_interval) as mpmath ``iv.mpf`` pairs."""
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")
    prec = precision_bits + 8
    return _iv_component(z, False, prec), _iv_component(z, True, prec)


def lift(z: Cyclo, m: int) -> Cyclo:
    """Embed z from Q(zeta_N) into Q(zeta_M) for N | M."""
    if m % z.n:
        raise ValueError(f"cannot lift from N={z.n} to M={m}: N must divide M")
    step = m // z.n
    out = [0] * (step * (len(z.num) - 1) + 1)
    for j, c in enumerate(z.num):
        out[j * step] = c
    return Cyclo(m, tuple(out), z.den)


def field_for_angle(theta: Fraction) -> int:
    """Smallest N with e^{2 i pi theta}, the periodic-cell vertices and i all in Q(zeta_N)."""
    q = Fraction(theta).denominator
    base = q if q % 2 == 0 else 2 * q
    return math.lcm(base, 4)


_CYCLO_RE = re.compile(r"^\s*cyclo\((\d+)\)\s*\[(.*)\]\s*$")


def parse_cyclo(text: str, n: int | None = None) -> Cyclo:
    """Parse ``cyclo(N)[c0,c1,...]`` or a plain rational (then ``n`` is required)."""
    m = _CYCLO_RE.match(text)
    if m:
        field_n = int(m.group(1))
        body = m.group(2).strip()
        coeffs = [Fraction(s.strip()) for s in body.split(",")] if body else []
        z = cyclo_new(field_n, coeffs)
        if n is not None and n != field_n:
            z = lift(z, n)
        return z
    if n is None:
        raise ValueError(f"rational literal {text!r} needs a target field")
    return Cyclo.from_rational(n, Fraction(text.strip()))


def format_cyclo(z: Cyclo) -> str:
    parts = []
    for c in z.num:
        fr = Fraction(c, z.den)
        parts.append(str(fr))
    return f"cyclo({z.n})[{','.join(parts)}]"
