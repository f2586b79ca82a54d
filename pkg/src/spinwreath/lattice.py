"""The character lattice mod 2: alternating form, isotropic subgroup, cocycle.

Vectors over GF(2) are int bitmasks (bit i = coordinate of gamma_i).  The
alternating form c1 comes from the weighted Gram matrix; Phi is a maximal
subgroup on which c1 vanishes, built as radical + one leg of each hyperbolic
pair of a symplectic basis.  The two-cocycle epsilon is bi-additive with
epsilon(gamma_i, gamma_j) = +1 for i <= j and (-1)^{c1(i,j)} otherwise.

The twisted state space used by the vertex operators is the group algebra
of the full lattice mod 2 (dimension 2^(r+1)) with e_a e_b =
epsilon(a,b) e_{a+b}; on it every cocycle relation holds exactly with signs
in {+1,-1}.  The 2^(r0/2)-dimensional coset space of Phi is still computed
and validated here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .gammadata import GammaData, VirtualChar, cartan_matrix


def gf2_rank(rows: Sequence[int]) -> int:
    work = list(rows)
    rank = 0
    pivot_col = 0
    ncols = max((r.bit_length() for r in work), default=0)
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(work)):
            if work[r] >> col & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] >> col & 1):
                work[r] ^= work[rank]
        rank += 1
    return rank


def gf2_nullspace(rows: Sequence[int], ncols: int) -> List[int]:
    """Basis of {v : rows . v = 0} over GF(2)."""
    work = list(rows)
    pivots: List[Tuple[int, int]] = []  # (row index in reduced form, column)
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(work)):
            if work[r] >> col & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] >> col & 1):
                work[r] ^= work[rank]
        pivots.append((rank, col))
        rank += 1
    pivot_cols = {col for _, col in pivots}
    basis = []
    for col in range(ncols):
        if col in pivot_cols:
            continue
        v = 1 << col
        for r, pc in pivots:
            if work[r] >> col & 1:
                v ^= 1 << pc
        basis.append(v)
    return basis


def _span(basis: Sequence[int]) -> List[int]:
    out = [0]
    for b in basis:
        out.extend([x ^ b for x in out])
    return sorted(set(out))


def vec_to_mask(alpha: Sequence[int]) -> int:
    mask = 0
    for i, a in enumerate(alpha):
        if a % 2:
            mask |= 1 << i
    return mask


class LatticeTwist:
    """c1, Phi, coset data, and the cocycle for one (Gamma, xi) pair."""

    def __init__(self, gamma: GammaData, xi: VirtualChar):
        self.gamma = gamma
        self.xi = xi
        self.dim = gamma.num_classes  # r + 1
        self.gram = cartan_matrix(gamma, xi)
        k = self.dim
        self.c1_rows = []
        for i in range(k):
            row = 0
            for j in range(k):
                v = (self.gram[i][j] + self.gram[i][i] * self.gram[j][j]) % 2
                if i == j:
                    v = 0  # c1(a, a) = 0: <a,a>(1 + <a,a>) is even
                if v:
                    row |= 1 << j
            self.c1_rows.append(row)
        self.r0 = gf2_rank(self.c1_rows)
        # strict lower triangle of c1 drives the cocycle
        self._lower = [self.c1_rows[i] & ((1 << i) - 1) for i in range(k)]
        self._build_phi()

    # -- the form and the cocycle ------------------------------------------

    def c1(self, a: int, b: int) -> int:
        return bin(a & self._c1_apply(b)).count("1") & 1

    def _c1_apply(self, b: int) -> int:
        out = 0
        for i in range(self.dim):
            if bin(self.c1_rows[i] & b).count("1") & 1:
                out |= 1 << i
        return out

    def c1_pair(self, alpha: Sequence[int], beta: Sequence[int]) -> int:
        """c1 on honest lattice vectors: <a,b> + <a,a><b,b> mod 2."""
        ab = sum(alpha[i] * self.gram[i][j] * beta[j]
                 for i in range(self.dim) for j in range(self.dim))
        aa = sum(alpha[i] * self.gram[i][j] * alpha[j]
                 for i in range(self.dim) for j in range(self.dim))
        bb = sum(beta[i] * self.gram[i][j] * beta[j]
                 for i in range(self.dim) for j in range(self.dim))
        return (ab + aa * bb) % 2

    def epsilon_masks(self, a: int, b: int) -> int:
        """epsilon as +-1 on GF(2) reductions, bi-additive."""
        acc = 0
        rem = a
        while rem:
            i = (rem & -rem).bit_length() - 1
            rem &= rem - 1
            acc ^= bin(self._lower[i] & b).count("1") & 1
        return -1 if acc else 1

    def epsilon(self, alpha: Sequence[int], beta: Sequence[int]) -> int:
        return self.epsilon_masks(vec_to_mask(alpha), vec_to_mask(beta))

    # -- Phi and the coset space -------------------------------------------

    def _build_phi(self) -> None:
        k = self.dim
        radical = gf2_nullspace(self.c1_rows, k)
        pairs: List[Tuple[int, int]] = []

        def reduce_against_pairs(x: int) -> int:
            # projects onto the symplectic complement of the chosen pairs
            for u, v in pairs:
                if self.c1(x, v):
                    x ^= u
                if self.c1(x, u):
                    x ^= v
            return x

        def in_span(x: int, vecs: Sequence[int]) -> bool:
            work = list(vecs)
            for col in range(k):
                pivot = next((w for w in work if w >> col & 1), None)
                if pivot is None:
                    continue
                work = [w ^ pivot if (w >> col & 1) and w != pivot else w for w in work]
                if x >> col & 1:
                    x ^= pivot
            return x == 0

        while 2 * len(pairs) < self.r0:
            spanned = radical + [w for p in pairs for w in p]
            found = False
            for cand in range(1, 1 << k):
                x = reduce_against_pairs(cand)
                if in_span(x, spanned):
                    continue
                for cand2 in range(1, 1 << k):
                    y = reduce_against_pairs(cand2)
                    if self.c1(x, y) == 1:
                        pairs.append((x, y))
                        found = True
                        break
                if found:
                    break
            if not found:
                raise AssertionError("symplectic basis construction failed")
        self.phi_basis = sorted(set(radical) | {u for u, _ in pairs})
        self.coset_gens = [v for _, v in pairs]
        phi_span = _span(self.phi_basis)
        self.phi_span = set(phi_span)
        self.coset_reps = _span(self.coset_gens)
        # canonical index of each mod-2 vector's Phi-coset
        self._coset_of: Dict[int, int] = {}
        for idx, rep in enumerate(self.coset_reps):
            for p in phi_span:
                self._coset_of[rep ^ p] = idx

    @property
    def num_cosets(self) -> int:
        return len(self.coset_reps)

    def coset_index(self, mask: int) -> int:
        return self._coset_of[mask]

    def coset_act(self, alpha: Sequence[int], coset: int) -> Tuple[int, int]:
        """Naive translation action on R/Phi cosets with the stored representative."""
        mask = vec_to_mask(alpha)
        rep = self.coset_reps[coset]
        sign = self.epsilon_masks(mask, rep)
        return sign, self.coset_index(mask ^ rep)

    # -- the full mod-2 state space used by the vertex operators ------------

    @property
    def module_size(self) -> int:
        return 1 << self.dim

    def act(self, mask: int, b: int) -> Tuple[int, int]:
        """e_alpha . e^b = epsilon(alpha, b) e^(alpha + b) on the mod-2 group algebra."""
        return self.epsilon_masks(mask, b), mask ^ b
