"""The Fock space: symmetric algebra on odd-degree creation generators.

Monomials are sorted tuples of (n, char_index) with n odd positive; a vector
is a finitely supported map monomial -> scalar.  Annihilation acts as a
derivation with the commutator normalization

    [a_m(gamma), a_n(gamma')] = (m/2) delta_{m,-n} <gamma, gamma'>_xi,

which pins the m/2 factor so the inner product of single generators is
(n/2) times the weighted Gram matrix.  The bilinear form is computed by
normal ordering annihilators, never by a closed matching formula.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .gammadata import GammaData, VirtualChar, gram_matrix
from .partitions import MultiPartition
from .scalars import Cyc

Monomial = Tuple[Tuple[int, int], ...]  # sorted ((n, char_index), ...)
CoeffLike = Union[int, Fraction, Cyc]


class FockContext:
    """Shared state: the group, the weight xi, and the rational Gram matrix."""

    def __init__(self, gamma: GammaData, xi: VirtualChar):
        self.gamma = gamma
        self.xi = xi
        self.gram = gram_matrix(gamma, xi)
        self._q_cache: Dict[Tuple[Tuple[Fraction, ...], int], "FockVector"] = {}
        self._inner_cache: Dict[Tuple[Monomial, Monomial], Cyc] = {}
        self._row_cache: Dict[Tuple, List[Cyc]] = {}

    def pair_row(self, coeffs: Sequence[CoeffLike]) -> List[Cyc]:
        """<coeffs, gamma_j>_xi for each j, as scalars."""
        key = _coeff_key(coeffs)
        cached = self._row_cache.get(key)
        if cached is not None:
            return cached
        k = self.gamma.num_classes
        out = []
        for j in range(k):
            total = Cyc.rational(0)
            for i, c in enumerate(coeffs):
                c = Cyc.lift(c)
                if not c.is_zero() and self.gram[i][j]:
                    total = total + c * self.gram[i][j]
            out.append(total)
        self._row_cache[key] = out
        return out


def _sorted_insert(mono: Monomial, factor: Tuple[int, int]) -> Monomial:
    out = list(mono)
    lo = 0
    while lo < len(out) and out[lo] < factor:
        lo += 1
    out.insert(lo, factor)
    return tuple(out)


def _merge(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def mono_degree(mono: Monomial) -> int:
    return sum(n for n, _ in mono)


class FockVector:
    """Finitely supported scalar combination of Fock monomials."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FockContext, terms: Optional[Dict[Monomial, Cyc]] = None):
        self.ctx = ctx
        self.terms: Dict[Monomial, Cyc] = {}
        if terms:
            for m, c in terms.items():
                c = Cyc.lift(c)
                if not c.is_zero():
                    self.terms[m] = c

    @staticmethod
    def vacuum(ctx: FockContext) -> "FockVector":
        return FockVector(ctx, {(): Cyc.rational(1)})

    @staticmethod
    def zero(ctx: FockContext) -> "FockVector":
        return FockVector(ctx)

    def copy(self) -> "FockVector":
        out = FockVector(self.ctx)
        out.terms = dict(self.terms)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def _check_ctx(self, other: "FockVector") -> None:
        if self.ctx is not other.ctx:
            raise ValueError("FockVector context mismatch")

    def __add__(self, other: "FockVector") -> "FockVector":
        self._check_ctx(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            cur = out.get(m)
            val = c if cur is None else cur + c
            if val.is_zero():
                out.pop(m, None)
            else:
                out[m] = val
        v = FockVector(self.ctx)
        v.terms = out
        return v

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(-1)

    def scale(self, c: CoeffLike) -> "FockVector":
        c = Cyc.lift(c)
        if c.is_zero():
            return FockVector.zero(self.ctx)
        v = FockVector(self.ctx)
        v.terms = {m: x * c for m, x in self.terms.items()}
        return v

    def __mul__(self, other: "FockVector") -> "FockVector":
        """Product in the symmetric algebra."""
        self._check_ctx(other)
        out: Dict[Monomial, Cyc] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _merge(ma, mb)
                c = ca * cb
                cur = out.get(m)
                val = c if cur is None else cur + c
                if val.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = val
        v = FockVector(self.ctx)
        v.terms = out
        return v

    def degree_component(self, d: int) -> "FockVector":
        v = FockVector(self.ctx)
        v.terms = {m: c for m, c in self.terms.items() if mono_degree(m) == d}
        return v

    def degrees(self) -> List[int]:
        return sorted({mono_degree(m) for m in self.terms})

    def max_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def vacuum_coeff(self) -> Cyc:
        return self.terms.get((), Cyc.rational(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        zero = Cyc.rational(0)
        return all(self.terms.get(k, zero) == other.terms.get(k, zero) for k in keys)

    def __repr__(self) -> str:
        if not self.terms:
            return "FockVector(0)"
        bits = [f"{c!r}*{m}" for m, c in sorted(self.terms.items())]
        return "FockVector(" + " + ".join(bits) + ")"

    def to_doc(self, char_names: Sequence[str]) -> list:
        out = []
        for m in sorted(self.terms):
            out.append({"mono": [[n, char_names[i]] for n, i in m],
                        "coeff": self.terms[m].to_doc()})
        return out


def _require_odd_positive(n: int) -> None:
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"generator degree must be odd positive, got {n}")


def create(v: FockVector, n: int, coeffs: Sequence[CoeffLike]) -> FockVector:
    """Multiplication by a_{-n}(gamma) for gamma = sum coeffs[i] gamma_i."""
    _require_odd_positive(n)
    out: Dict[Monomial, Cyc] = {}
    for i, ci in enumerate(coeffs):
        ci = Cyc.lift(ci)
        if ci.is_zero():
            continue
        for m, c in v.terms.items():
            mm = _sorted_insert(m, (n, i))
            val = c * ci
            cur = out.get(mm)
            val = val if cur is None else cur + val
            if val.is_zero():
                out.pop(mm, None)
            else:
                out[mm] = val
    res = FockVector(v.ctx)
    res.terms = out
    return res


def annihilate(v: FockVector, n: int, coeffs: Sequence[CoeffLike]) -> FockVector:
    """The derivation a_n(gamma), n odd positive, with the (n/2) factor."""
    _require_odd_positive(n)
    row = v.ctx.pair_row(coeffs)
    half_n = Fraction(n, 2)
    out: Dict[Monomial, Cyc] = {}
    for m, c in v.terms.items():
        seen = set()
        for pos, (deg, idx) in enumerate(m):
            if deg != n or (deg, idx) in seen:
                continue
            seen.add((deg, idx))
            mult = sum(1 for f in m if f == (deg, idx))
            coeff = row[idx]
            if coeff.is_zero():
                continue
            val = c * coeff * (half_n * mult)
            mm = m[:pos] + m[pos + 1:]
            cur = out.get(mm)
            val = val if cur is None else cur + val
            if val.is_zero():
                out.pop(mm, None)
            else:
                out[mm] = val
    res = FockVector(v.ctx)
    res.terms = out
    return res


def class_vector(ctx: FockContext, ci: int) -> List[Cyc]:
    """Coefficients of the class-basis generator a_m(c) = sum gamma(c^{-1}) a_m(gamma)."""
    inv = ctx.gamma.dual_class(ci)
    return [ctx.gamma.chars[i][inv] for i in range(ctx.gamma.num_classes)]


def class_create(v: FockVector, n: int, ci: int) -> FockVector:
    return create(v, n, class_vector(v.ctx, ci))


def class_annihilate(v: FockVector, n: int, ci: int) -> FockVector:
    return annihilate(v, n, class_vector(v.ctx, ci))


def a_prime_vector(ctx: FockContext, rho: MultiPartition) -> FockVector:
    """a'_{-rho} = prod_c a_{-rho(c)}(c), expanded in the monomial basis."""
    v = FockVector.vacuum(ctx)
    for ci, part in enumerate(rho.parts):
        for r in part:
            if r % 2 == 0:
                raise ValueError(f"a'_-rho needs odd parts, got {r}")
            v = class_create(v, r, ci)
    return v


def _mono_profile(m: Monomial) -> Tuple[int, ...]:
    return tuple(n for n, _ in m)


def _inner_monomials(ctx: FockContext, mu: Monomial, mv: Monomial) -> Cyc:
    cached = ctx._inner_cache.get((mu, mv))
    if cached is not None:
        return cached
    zero = Cyc.rational(0)
    if _mono_profile(mu) != _mono_profile(mv):
        ctx._inner_cache[(mu, mv)] = zero
        return zero
    v = FockVector(ctx, {mv: Cyc.rational(1)})
    k = ctx.gamma.num_classes
    for n, i in reversed(mu):
        basis = [1 if t == i else 0 for t in range(k)]
        v = annihilate(v, n, basis)
        if v.is_zero():
            break
    result = v.vacuum_coeff()
    ctx._inner_cache[(mu, mv)] = result
    return result


def inner(u: FockVector, v: FockVector) -> Cyc:
    """<u, v>' with <1,1> = 1 and a_n(gamma)* = a_{-n}(gamma)."""
    u._check_ctx(v)
    total = Cyc.rational(0)
    for mu, cu in u.terms.items():
        for mv, cv in v.terms.items():
            val = _inner_monomials(u.ctx, mu, mv)
            if not val.is_zero():
                total = total + cu * cv * val
    return total


def _coeff_key(coeffs: Sequence[CoeffLike]) -> Tuple:
    out = []
    for c in coeffs:
        c = Cyc.lift(c)
        out.append((c.order, c.coeffs))
    return tuple(out)


def q_gen(ctx: FockContext, n: int, coeffs: Sequence[CoeffLike]) -> FockVector:
    """Degree-n coefficient of exp(sum_{k odd} (2/k) a_{-k}(gamma) z^k).

    Computed by the recursion n q_n = sum_{k odd <= n} 2 a_{-k}(gamma) q_{n-k}.
    """
    if n < 0:
        return FockVector.zero(ctx)
    key = (_coeff_key(coeffs), n)
    cached = ctx._q_cache.get(key)
    if cached is not None:
        return cached
    if n == 0:
        out = FockVector.vacuum(ctx)
    else:
        acc = FockVector.zero(ctx)
        for k in range(1, n + 1, 2):
            acc = acc + create(q_gen(ctx, n - k, coeffs), k, coeffs).scale(2)
        out = acc.scale(Fraction(1, n))
    ctx._q_cache[key] = out
    return out


TensorTerms = Dict[Tuple[Monomial, Monomial], Cyc]


def coproduct(v: FockVector) -> TensorTerms:
    """Algebra-morphism extension of Delta(a) = a(x)1 + 1(x)a on monomials."""
    from itertools import product as iproduct
    from math import comb

    out: TensorTerms = {}
    for m, c in v.terms.items():
        factors: List[Tuple[Tuple[int, int], int]] = []
        for f in sorted(set(m)):
            factors.append((f, sum(1 for x in m if x == f)))
        choices = [range(mult + 1) for _, mult in factors]
        for pick in iproduct(*choices):
            left: List[Tuple[int, int]] = []
            right: List[Tuple[int, int]] = []
            weight = 1
            for (f, mult), take in zip(factors, pick):
                weight *= comb(mult, take)
                left.extend([f] * take)
                right.extend([f] * (mult - take))
            key = (tuple(left), tuple(right))
            val = c * weight
            cur = out.get(key)
            val = val if cur is None else cur + val
            if val.is_zero():
                out.pop(key, None)
            else:
                out[key] = val
    return out


def tensor_inner(ctx: FockContext, t: TensorTerms, u: FockVector, v: FockVector) -> Cyc:
    """<t, u (x) v> for a coproduct result t."""
    total = Cyc.rational(0)
    for (ml, mr), c in t.items():
        lval = Cyc.rational(0)
        for mu, cu in u.terms.items():
            lval = lval + cu * _inner_monomials(ctx, ml, mu)
        if lval.is_zero():
            continue
        rval = Cyc.rational(0)
        for mv, cv in v.terms.items():
            rval = rval + cv * _inner_monomials(ctx, mr, mv)
        total = total + c * lval * rval
    return total
