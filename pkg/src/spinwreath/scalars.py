"""Exact cyclotomic arithmetic: Q(zeta_N) in the power basis mod Phi_N.

Every number in the library is a :class:`Cyc` -- a vector of rationals over
the power basis 1, z, ..., z^(phi(N)-1) of Q(zeta_N), reduced modulo the
N-th cyclotomic polynomial.  Rationals are the N = 1 case.  There is no
floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence, Tuple, Union

RationalLike = Union[int, Fraction]
ScalarLike = Union["Cyc", int, Fraction]


class CycError(ValueError):
    """Raised on illegal cyclotomic operations (order mismatch, bad division)."""


def euler_phi(n: int) -> int:
    if n <= 0:
        raise ValueError("euler_phi needs n >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def moebius(n: int) -> int:
    if n <= 0:
        raise ValueError("moebius needs n >= 1")
    result = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _poly_divmod_int(num: Sequence[int], den: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    # Exact division of integer polynomials; den must be monic.
    num = list(num)
    dden = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * max(len(num) - dden, 0)
    for i in range(len(num) - 1, dden - 1, -1):
        c = num[i]
        if c == 0:
            continue
        quot[i - dden] = c
        for j, d in enumerate(den):
            num[i - dden + j] -= c * d
    while num and num[-1] == 0:
        num.pop()
    return tuple(quot), tuple(num)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n, ascending degree, computed by recursive division."""
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod_int(num, cyclotomic_poly(d))
            if rem:
                raise AssertionError("cyclotomic division left a remainder")
    return tuple(num)


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise CycError(f"not a rational value: {x!r}")


_ZERO = Fraction(0)


class Cyc:
    """An element of Q(zeta_N), stored as phi(N) rational power-basis coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[Fraction]):
        deg = euler_phi(order)
        if len(coeffs) != deg:
            raise CycError(f"need {deg} coefficients for order {order}, got {len(coeffs)}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Cyc is immutable")

    @staticmethod
    def _raw(order: int, coeffs: Tuple[Fraction, ...]) -> "Cyc":
        # internal constructor: coeffs already the right length
        self = object.__new__(Cyc)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)
        return self

    # -- constructors ------------------------------------------------------

    @staticmethod
    def rational(x: RationalLike) -> "Cyc":
        return Cyc(1, (_as_fraction(x),))

    @staticmethod
    def zeta(n: int, k: int = 1) -> "Cyc":
        """zeta_n^k as an element of Q(zeta_n)."""
        k %= n
        deg = euler_phi(n)
        if n == 1:
            return Cyc(1, (Fraction(1),))
        coeffs = [_ZERO] * max(deg, k + 1)
        coeffs[k] = Fraction(1)
        return Cyc._reduce(n, coeffs)

    @staticmethod
    def lift(x: ScalarLike) -> "Cyc":
        if isinstance(x, Cyc):
            return x
        return Cyc.rational(x)

    @staticmethod
    def _reduce(order: int, coeffs: Sequence[Fraction]) -> "Cyc":
        deg = euler_phi(order)
        out = list(coeffs) + [_ZERO] * max(0, deg - len(coeffs))
        if len(out) > deg:
            phi = cyclotomic_poly(order)
            for k in range(len(out) - 1, deg - 1, -1):
                c = out[k]
                if c:
                    out[k] = _ZERO
                    for j in range(deg):  # x^k == -x^(k-deg) * (low part of Phi)
                        if phi[j]:
                            out[k - deg + j] -= c * phi[j]
        return Cyc(order, out[:deg])

    # -- promotion ---------------------------------------------------------

    def promote(self, m: int) -> "Cyc":
        """Embed into Q(zeta_M) via zeta_N -> zeta_M^(M/N); requires N | M."""
        n = self.order
        if m == n:
            return self
        if m % n != 0:
            raise CycError(f"cannot promote order {n} into order {m}")
        step = m // n
        degm = euler_phi(m)
        out = [_ZERO] * max(degm, (len(self.coeffs) - 1) * step + 1, 1)
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * step] += c
        return Cyc._reduce(m, out)

    def _match(self, other: "Cyc") -> Tuple["Cyc", "Cyc"]:
        if self.order == other.order:
            return self, other
        if self.order == 1:
            return self.promote(other.order), other
        if other.order == 1:
            return self, other.promote(self.order)
        raise CycError(
            f"incompatible cyclotomic orders {self.order} and {other.order}; "
            "promote explicitly"
        )

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: ScalarLike) -> "Cyc":
        if isinstance(other, Cyc) and other.order == self.order:
            return Cyc._raw(self.order,
                            tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))
        a, b = self._match(Cyc.lift(other))
        return Cyc._raw(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "Cyc":
        return Cyc._raw(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other: ScalarLike) -> "Cyc":
        return self.__add__(-Cyc.lift(other))

    def __rsub__(self, other: ScalarLike) -> "Cyc":
        return (-self).__add__(other)

    def __mul__(self, other: ScalarLike) -> "Cyc":
        if not isinstance(other, Cyc):
            other = Cyc.lift(other)
        # scalar-times-vector needs no reduction regardless of orders
        if len(self.coeffs) == 1:
            q = self.coeffs[0]
            return Cyc._raw(other.order, tuple(q * y for y in other.coeffs))
        if len(other.coeffs) == 1:
            q = other.coeffs[0]
            return Cyc._raw(self.order, tuple(x * q for x in self.coeffs))
        a, b = self._match(other)
        ca, cb = a.coeffs, b.coeffs
        prod = [_ZERO] * (len(ca) + len(cb) - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    if y:
                        prod[i + j] += x * y
        return Cyc._reduce(a.order, prod)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "Cyc":
        # Only division by rational values is supported (kernel stays small).
        if isinstance(other, Cyc):
            q = other.as_rational()
            if q is None:
                raise CycError("division by a non-rational cyclotomic is not supported")
            other = q
        q = _as_fraction(other)
        if q == 0:
            raise ZeroDivisionError("division by zero")
        return Cyc(self.order, tuple(x / q for x in self.coeffs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Cyc, int, Fraction)):
            return NotImplemented
        b = Cyc.lift(other)
        if self.order != b.order:
            n = self.order * b.order // gcd(self.order, b.order)
            return self.promote(n).coeffs == b.promote(n).coeffs
        return self.coeffs == b.coeffs

    __hash__ = None  # values of equal worth may live at different orders

    def __bool__(self) -> bool:
        return any(self.coeffs)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_rational(self) -> Optional[Fraction]:
        """The rational value if all non-constant coefficients vanish, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def as_int(self) -> int:
        q = self.as_rational()
        if q is None or q.denominator != 1:
            raise CycError(f"not an integer: {self!r}")
        return q.numerator

    def conjugate(self) -> "Cyc":
        """Complex conjugation zeta -> zeta^(-1)."""
        n = self.order
        if n <= 2:
            return self
        deg = euler_phi(n)
        out = [_ZERO] * n
        for i, c in enumerate(self.coeffs):
            out[(-i) % n] += c
        return Cyc._reduce(n, out)

    # -- serialization -----------------------------------------------------

    def to_doc(self) -> dict:
        q = self.as_rational()
        if q is not None:
            return {"N": 1, "coeffs": [[q.numerator, q.denominator]]}
        return {"N": self.order, "coeffs": [[c.numerator, c.denominator] for c in self.coeffs]}

    @staticmethod
    def from_doc(doc: dict) -> "Cyc":
        n = int(doc["N"])
        coeffs = [Fraction(int(p), int(q)) for p, q in doc["coeffs"]]
        return Cyc(n, coeffs)

    def __repr__(self) -> str:
        q = self.as_rational()
        if q is not None:
            return f"Cyc({q})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*z{self.order}^{i}" if i else str(c))
        return "Cyc(" + " + ".join(terms) + ")"

    def pretty(self) -> str:
        """CSV-facing rendering: p/q for rationals, serialized doc otherwise."""
        q = self.as_rational()
        if q is not None:
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        import json

        return json.dumps(self.to_doc(), separators=(",", ":"))


ZERO = Cyc.rational(0)
ONE = Cyc.rational(1)


def cyc_sum(values: Iterable[ScalarLike]) -> Cyc:
    total: Cyc = ZERO
    for v in values:
        total = total + v
    return total
