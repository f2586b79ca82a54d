"""Partitions and partition-valued functions on a finite index set.

A partition is a weakly decreasing tuple of positive ints.  A
:class:`MultiPartition` assigns one partition to each index 0..k-1 (indices
are conjugacy classes or irreducible characters of the base group, in table
order).  Enumeration order is fixed globally: weight goes to the earliest
index first, partitions per index in reverse-lexicographic order; every
matrix in the system inherits this ordering.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterator, List, Sequence, Tuple

Partition = Tuple[int, ...]

KIND_ALL = "P"
KIND_ODD = "OP"
KIND_STRICT = "SP"
KIND_STRICT_EVEN = "SPplus"
KIND_STRICT_ODD = "SPminus"


def check_partition(parts: Sequence[int]) -> Partition:
    parts = tuple(int(p) for p in parts)
    if any(p <= 0 for p in parts):
        raise ValueError(f"partition parts must be positive: {parts}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"parts must be weakly decreasing: {parts}")
    return parts


def partitions_of(n: int, kind: str = KIND_ALL, _max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of n in reverse-lex order ((n) first, (1,...,1) last)."""
    if n == 0:
        yield ()
        return
    hi = n if _max_part is None else min(n, _max_part)
    for first in range(hi, 0, -1):
        if kind == KIND_ODD and first % 2 == 0:
            continue
        rest_max = first - 1 if kind == KIND_STRICT else first
        for rest in partitions_of(n - first, kind, rest_max):
            yield (first,) + rest


class MultiPartition:
    """A partition-valued function on indices 0..k-1, hashable and ordered."""

    __slots__ = ("parts",)

    def __init__(self, parts: Sequence[Sequence[int]]):
        object.__setattr__(self, "parts", tuple(check_partition(p) for p in parts))

    def __setattr__(self, *a):
        raise AttributeError("MultiPartition is immutable")

    @staticmethod
    def empty(k: int) -> "MultiPartition":
        return MultiPartition(((),) * k)

    @staticmethod
    def single(k: int, index: int, partition: Sequence[int]) -> "MultiPartition":
        parts: List[Tuple[int, ...]] = [()] * k
        parts[index] = tuple(partition)
        return MultiPartition(parts)

    def __getitem__(self, i: int) -> Partition:
        return self.parts[i]

    def __len__(self) -> int:
        return len(self.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPartition) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"MultiPartition{self.parts!r}"

    @property
    def weight(self) -> int:
        return sum(sum(p) for p in self.parts)

    @property
    def length(self) -> int:
        return sum(len(p) for p in self.parts)

    def multiplicities(self, index: int) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for p in self.parts[index]:
            out[p] = out.get(p, 0) + 1
        return out

    def relabel(self, perm: Sequence[int]) -> "MultiPartition":
        """New multipartition with entry i taken from index perm[i]."""
        return MultiPartition(tuple(self.parts[perm[i]] for i in range(len(self.parts))))

    def to_doc(self, names: Sequence[str]) -> dict:
        return {names[i]: list(p) for i, p in enumerate(self.parts) if p}

    @staticmethod
    def from_doc(doc: dict, names: Sequence[str]) -> "MultiPartition":
        lookup = {name: i for i, name in enumerate(names)}
        parts: List[Sequence[int]] = [()] * len(names)
        for name, plist in doc.items():
            parts[lookup[name]] = tuple(plist)
        return MultiPartition(parts)


def multipartitions(n: int, k: int, kind: str = KIND_ALL,
                    per_index_ascending: bool = False) -> Iterator[MultiPartition]:
    """All multipartitions of total weight n on k indices, canonical order:
    weight to the earliest index first, reverse-lex per index ((n) first).
    With per_index_ascending the per-index order flips ((1,..,1) first),
    which puts the identity class type first; character table columns use it."""
    base_kind = KIND_STRICT if kind in (KIND_STRICT_EVEN, KIND_STRICT_ODD) else kind

    def plist(w: int) -> List[Partition]:
        out = list(partitions_of(w, base_kind))
        return out[::-1] if per_index_ascending else out

    def gen(idx: int, remaining: int) -> Iterator[Tuple[Partition, ...]]:
        if idx == k - 1:
            for p in plist(remaining):
                yield (p,)
            return
        for w in range(remaining, -1, -1):
            for p in plist(w):
                for rest in gen(idx + 1, remaining - w):
                    yield (p,) + rest

    if k == 0:
        if n == 0:
            yield MultiPartition(())
        return
    for parts in gen(0, n):
        mp = MultiPartition(parts)
        if kind == KIND_STRICT_EVEN and mp.length % 2 != 0:
            continue
        if kind == KIND_STRICT_ODD and mp.length % 2 != 1:
            continue
        yield mp


def count_multipartitions(n: int, k: int, kind: str = KIND_ALL) -> int:
    return sum(1 for _ in multipartitions(n, k, kind))


def z_factor(partition: Partition) -> int:
    """prod_i m_i! * i^m_i for a single partition."""
    out = 1
    mult: Dict[int, int] = {}
    for p in partition:
        mult[p] = mult.get(p, 0) + 1
    for i, m in mult.items():
        out *= factorial(m) * i**m
    return out


def big_z(rho: MultiPartition, centralizer_orders: Sequence[int]) -> int:
    """Z_rho = prod_c m_i(c)! i^m_i(c) zeta_c^l(rho(c)); rho indexed by classes."""
    out = 1
    for ci, p in enumerate(rho.parts):
        out *= z_factor(p) * centralizer_orders[ci] ** len(p)
    return out


def d_parity(rho: MultiPartition) -> int:
    return (rho.weight - rho.length) % 2


def _dominates(a: Partition, b: Partition) -> bool:
    if sum(a) != sum(b):
        return False
    ta = 0
    tb = 0
    for i in range(max(len(a), len(b))):
        ta += a[i] if i < len(a) else 0
        tb += b[i] if i < len(b) else 0
        if ta < tb:
            return False
    return True


def dominance(rho: MultiPartition, pi: MultiPartition) -> str:
    """Classify rho against pi: '>=', '>>' (>= with rho != pi at each index),
    or 'incomparable'.  Requires matching weights per index."""
    if len(rho) != len(pi):
        raise ValueError("index sets differ")
    for a, b in zip(rho.parts, pi.parts):
        if sum(a) != sum(b):
            raise ValueError("per-index weights differ; dominance undefined")
    if all(_dominates(a, b) for a, b in zip(rho.parts, pi.parts)):
        if all(a != b for a, b in zip(rho.parts, pi.parts)):
            return ">>"
        return ">="
    return "incomparable"


def dominates_weakly(rho: MultiPartition, pi: MultiPartition) -> bool:
    """Per-index dominance rho(x) >= pi(x); indices with equal parts allowed."""
    return all(_dominates(a, b) for a, b in zip(rho.parts, pi.parts))


@lru_cache(maxsize=None)
def _count_kind(n: int, k: int, kind: str) -> int:
    return count_multipartitions(n, k, kind)


def euler_counts_agree(n: int, k: int) -> bool:
    """|OP_n(X)| == |SP_n(X)| (the Euler-type identity used as an invariant)."""
    return _count_kind(n, k, KIND_ODD) == _count_kind(n, k, KIND_STRICT)
