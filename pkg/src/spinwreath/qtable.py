"""Schur-Q machinery and the spin super character table.

Two independent routes produce the same symmetric function for a strict
multipartition: the raising-operator expansion prod (1-R_ij)/(1+R_ij)
applied to a product of q-generators, and iterated vertex-operator
components applied to a shifted lattice vacuum.  Their agreement is a
standing acceptance property.  Character values come from the matrix
coefficient 2^(l(mu) - floor(l(lambda)/2)) <X_lambda e^(-[lambda]), a'_-mu>
at the standard weight; every ceiling in the source formulas is read as a
floor (the n = 1 norm and the basic-module dimension force that reading).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .classfun import SpinClassFun, weighted_inner
from .fock import FockContext, FockVector, a_prime_vector, inner, q_gen
from .gammadata import GammaData, VirtualChar
from .partitions import (MultiPartition, big_z, dominates_weakly, multipartitions)
from .scalars import Cyc
from .vertex import TwistContext, TwistedVector, x_component

Tuple_ = Tuple[int, ...]


def q_power_product(ctx: FockContext, phi: Sequence[int], char_index: int) -> FockVector:
    """prod_i q_{phi_i}(gamma) with q_0 = 1 and q_m = 0 for m < 0."""
    coeffs = [1 if t == char_index else 0 for t in range(ctx.gamma.num_classes)]
    out = FockVector.vacuum(ctx)
    for p in phi:
        if p < 0:
            return FockVector.zero(ctx)
        if p == 0:
            continue
        out = out * q_gen(ctx, p, coeffs)
    return out


def _raising_tuples(parts: Tuple_, total: int) -> Dict[Tuple_, int]:
    """Expand prod_{i<j} (1-R_ij)/(1+R_ij) on the exponent tuple.

    Pairs are processed in lexicographic order; position i is final once its
    block of pairs (i, *) is done, which bounds every series (a final entry
    can never exceed the total weight) and guarantees termination.
    """
    m = len(parts)
    state: Dict[Tuple_, int] = {tuple(parts): 1}
    for i in range(m):
        for j in range(i + 1, m):
            nxt: Dict[Tuple_, int] = {}
            for tup, coef in state.items():
                lst = list(tup)
                k = 0
                while True:
                    cur = tuple(lst)
                    c = coef if k == 0 else coef * 2 * (-1) ** k
                    nxt[cur] = nxt.get(cur, 0) + c
                    k += 1
                    if lst[i] + 1 > total:
                        break
                    lst[i] += 1
                    lst[j] -= 1
            state = {t: c for t, c in nxt.items() if c}
        # all pairs with first index i are done; entry i is final
        state = {t: c for t, c in state.items() if 0 <= t[i] <= total}
    return state


def raising_coefficients(lam_parts: Tuple_) -> Dict[Tuple_, int]:
    """Integer transition coefficients of Q_lambda onto sorted q-monomials."""
    total = sum(lam_parts)
    out: Dict[Tuple_, int] = {}
    for tup, coef in _raising_tuples(lam_parts, total).items():
        if any(t < 0 for t in tup):
            continue
        key = tuple(sorted((t for t in tup if t > 0), reverse=True))
        out[key] = out.get(key, 0) + coef
    return {k: v for k, v in out.items() if v}


def raising_expand(ctx: FockContext, lam: MultiPartition) -> FockVector:
    """Q_lambda = prod_gamma Q_lambda(gamma) via the raising-operator expansion."""
    out = FockVector.vacuum(ctx)
    for i, parts in enumerate(lam.parts):
        if not parts:
            continue
        if len(set(parts)) != len(parts):
            raise ValueError(f"lambda must be strict per index, got {parts}")
        piece = FockVector.zero(ctx)
        for tup, coef in raising_coefficients(parts).items():
            piece = piece + q_power_product(ctx, tup, i).scale(coef)
        out = out * piece
    return out


def lambda_shift(lam: MultiPartition) -> Tuple_:
    """[lambda] = sum_i l(lambda(gamma_i)) [gamma_i] as an integer vector."""
    return tuple(len(p) for p in lam.parts)


def x_lambda_vector(tctx: TwistContext, lam: MultiPartition) -> TwistedVector:
    """Iterated vertex components X_{-lambda(gamma_i)}(gamma_i) on e^(-[lambda]).

    Components are applied per character index in table order, smallest part
    first within an index; the result lives in the zero lattice class.
    """
    shift = lambda_shift(lam)
    start_mask = 0
    for i, l in enumerate(shift):
        if l % 2:
            start_mask |= 1 << i
    v = TwistedVector.vacuum(tctx, start_mask)
    for i, parts in enumerate(lam.parts):
        if parts and len(set(parts)) != len(parts):
            raise ValueError(f"lambda must be strict per index, got {parts}")
        gi = tctx.basis_vector(i)
        for p in sorted(parts):
            v = x_component(tctx, -p, gi, v)
    return v


def char_value(tctx: TwistContext, lam: MultiPartition, mu: MultiPartition,
               x_vec: Optional[TwistedVector] = None) -> Cyc:
    """chi_lambda(D_mu^+) = 2^(l(mu) - floor(l(lambda)/2)) <X_lambda e^(-[lambda]), a'_-mu>."""
    if lam.weight != mu.weight:
        raise ValueError("weight mismatch between lambda and mu")
    if x_vec is None:
        x_vec = x_lambda_vector(tctx, lam)
    fock = x_vec.fock_part(0)
    val = inner(fock, a_prime_vector(tctx.fock, mu))
    exp = mu.length - lam.length // 2
    if exp >= 0:
        return val * (2**exp)
    return val / Fraction(2 ** (-exp))


def char_degree(lam: MultiPartition, gamma: GammaData) -> int:
    """Degree formula 2^(n - floor(l/2)) n! prod_gamma deg(gamma)^|lambda| / ... ."""
    n = lam.weight
    val = Fraction(factorial(n)) * 2 ** (n - lam.length // 2)
    for i, parts in enumerate(lam.parts):
        if not parts:
            continue
        deg = gamma.degree(i)
        val *= Fraction(deg ** sum(parts))
        for p in parts:
            val /= factorial(p)
        # picket factor prod_{i<j} (l_i - l_j)/(l_i + l_j)
        for a in range(len(parts)):
            for b in range(a + 1, len(parts)):
                val *= Fraction(parts[a] - parts[b], parts[a] + parts[b])
    if val.denominator != 1:
        raise ArithmeticError(f"degree of {lam!r} is not an integer: {val}")
    return val.numerator


@dataclass
class CharRow:
    lam: MultiPartition
    module_type: str  # "M" (even length) or "Q" (odd length)
    degree: int
    values: Dict[MultiPartition, Cyc]

    def as_classfun(self, gamma: GammaData, n: int) -> SpinClassFun:
        return SpinClassFun(gamma, n, dict(self.values))


@dataclass
class CharTable:
    gamma: GammaData
    n: int
    columns: List[MultiPartition]
    rows: List[CharRow]

    def matrix(self) -> List[List[Cyc]]:
        zero = Cyc.rational(0)
        return [[row.values.get(mu, zero) for mu in self.columns] for row in self.rows]

    def to_doc(self) -> dict:
        cnames = self.gamma.class_names
        gnames = self.gamma.char_names
        return {
            "gamma": self.gamma.name,
            "n": self.n,
            "xi": "standard",
            "columns": [mu.to_doc(cnames) for mu in self.columns],
            "rows": [{
                "lambda": row.lam.to_doc(gnames),
                "type": row.module_type,
                "degree": row.degree,
                "values": [row.values.get(mu, Cyc.rational(0)).to_doc()
                           for mu in self.columns],
            } for row in self.rows],
        }


class TableCheckError(AssertionError):
    """A verification pass over a character table failed."""


def build_table(gamma: GammaData, n: int, check: bool = False,
                tctx: Optional[TwistContext] = None) -> CharTable:
    """Rows for all strict multipartitions over the characters, with the row
    sign normalized so the degree entry is positive."""
    if tctx is None:
        tctx = TwistContext(gamma, VirtualChar.trivial(gamma))
    k = gamma.num_classes
    columns = list(multipartitions(n, k, "OP", per_index_ascending=True))
    lambdas = list(multipartitions(n, k, "SP"))
    identity_col = MultiPartition.single(k, 0, (1,) * n) if n else MultiPartition.empty(k)
    rows: List[CharRow] = []
    for lam in lambdas:
        x_vec = x_lambda_vector(tctx, lam)
        values = {mu: char_value(tctx, lam, mu, x_vec) for mu in columns}
        values = {mu: v for mu, v in values.items() if not v.is_zero()}
        deg_val = values.get(identity_col, Cyc.rational(0))
        q = deg_val.as_rational()
        if q is None or q.denominator != 1 or q == 0:
            raise TableCheckError(f"identity value of {lam!r} is not a nonzero integer: {deg_val!r}")
        if q < 0:  # resolve the global sign so the degree is positive
            values = {mu: -v for mu, v in values.items()}
        row_type = "M" if lam.length % 2 == 0 else "Q"
        rows.append(CharRow(lam, row_type, abs(q.numerator), values))
    table = CharTable(gamma, n, columns, rows)
    if check:
        verify_table(table, tctx)
    return table


def verify_table(table: CharTable, tctx: Optional[TwistContext] = None) -> None:
    """Row orthogonality with the type norms, degree formula, squareness,
    and the unitriangular integral transition of the raising expansion."""
    gamma = table.gamma
    n = table.n
    if len(table.rows) != len(table.columns):
        raise TableCheckError(
            f"table is not square: {len(table.rows)} rows, {len(table.columns)} columns")
    xi0 = VirtualChar.trivial(gamma)
    funs = [row.as_classfun(gamma, n) for row in table.rows]
    for a, ra in enumerate(table.rows):
        for b, rb in enumerate(table.rows):
            val = weighted_inner(funs[a], funs[b], xi0)
            expect = 0
            if a == b:
                expect = 1 if ra.module_type == "M" else 2
            if not val == expect:
                raise TableCheckError(
                    f"orthogonality fails at rows {ra.lam!r}, {rb.lam!r}: {val!r}")
    for row in table.rows:
        if char_degree(row.lam, gamma) != row.degree:
            raise TableCheckError(
                f"degree formula mismatch for {row.lam!r}: "
                f"{char_degree(row.lam, gamma)} vs {row.degree}")
    # unitriangular integer transition per index
    for row in table.rows:
        for i, parts in enumerate(row.lam.parts):
            if not parts:
                continue
            coeffs = raising_coefficients(parts)
            if coeffs.get(parts, 0) != 1:
                raise TableCheckError(f"leading raising coefficient of {parts} is not 1")
            for tup, c in coeffs.items():
                if not isinstance(c, int):
                    raise TableCheckError(f"non-integer raising coefficient {c}")
                if tup != parts:
                    if not _dominates_tuple(tup, parts):
                        raise TableCheckError(
                            f"raising support {tup} does not dominate {parts}")


def _dominates_tuple(a: Tuple_, b: Tuple_) -> bool:
    ta = tb = 0
    for i in range(max(len(a), len(b))):
        ta += a[i] if i < len(a) else 0
        tb += b[i] if i < len(b) else 0
        if ta < tb:
            return False
    return ta == tb
