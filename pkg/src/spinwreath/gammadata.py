"""Character-table level description of the base finite group.

The pipeline consumes a finite group Gamma only through its character table
(:class:`GammaData`); concrete multiplication is needed only by the brute
force oracle, so built-ins also carry a :class:`ConcreteGroup` with an
explicit table and irreducible representation matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .scalars import Cyc, CycError

Matrix = Tuple[Tuple[Cyc, ...], ...]


class GammaValidationError(ValueError):
    """A character table document failed validation."""


@dataclass(frozen=True)
class ClassInfo:
    name: str
    size: int
    element_order: int
    inverse: int  # index of the inverse class


class GammaData:
    """Validated class data and irreducible character values of Gamma.

    Characters are rows chars[i][c] with chars[0] the trivial character;
    class 0 is the identity class.  All values live in Q(zeta_N) for N the
    lcm of the class element orders.
    """

    def __init__(self, name: str, order: int, classes: Sequence[ClassInfo],
                 chars: Sequence[Sequence[Cyc]]):
        self.name = name
        self.order = order
        self.classes = list(classes)
        self.exponent = lcm(*[c.element_order for c in classes]) if classes else 1
        self.chars = [[self._normalize(v) for v in row] for row in chars]
        self.validate()

    def _normalize(self, v) -> Cyc:
        v = Cyc.lift(v)
        if v.order != self.exponent and self.exponent % v.order == 0:
            return v.promote(self.exponent)
        return v

    # -- derived data --------------------------------------------------------

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def r(self) -> int:
        return len(self.classes) - 1

    def centralizer_order(self, ci: int) -> int:
        return self.order // self.classes[ci].size

    @property
    def centralizer_orders(self) -> List[int]:
        return [self.centralizer_order(i) for i in range(self.num_classes)]

    @property
    def class_names(self) -> List[str]:
        return [c.name for c in self.classes]

    @property
    def char_names(self) -> List[str]:
        return [f"g{i}" for i in range(self.num_classes)]

    def char_value(self, coeffs: Sequence[Union[int, Fraction, Cyc]], ci: int) -> Cyc:
        """Value at class ci of the virtual character sum_i coeffs[i]*gamma_i."""
        total = Cyc.rational(0)
        for i, s in enumerate(coeffs):
            s = Cyc.lift(s)
            if s.is_zero():
                continue
            total = total + s * self.chars[i][ci]
        return total

    def degree(self, i: int) -> int:
        return self.chars[i][0].as_int()

    def dual_class(self, ci: int) -> int:
        return self.classes[ci].inverse

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        k = len(self.classes)
        if k == 0 or len(self.chars) != k or any(len(row) != k for row in self.chars):
            raise GammaValidationError("character table must be square over the classes")
        if sum(c.size for c in self.classes) != self.order:
            raise GammaValidationError("class sizes do not sum to the group order")
        if self.classes[0].size != 1 or self.classes[0].element_order != 1:
            raise GammaValidationError("class 0 must be the identity class")
        for ci, c in enumerate(self.classes):
            if self.order % c.size != 0:
                raise GammaValidationError(f"class size {c.size} does not divide |Gamma|")
            if not (0 <= c.inverse < k) or self.classes[c.inverse].inverse != ci:
                raise GammaValidationError("inverse map is not an involution")
        if self.classes[0].inverse != 0:
            raise GammaValidationError("identity class must be self-inverse")
        if not all(self.chars[0][ci] == 1 for ci in range(k)):
            raise GammaValidationError("first character must be trivial")
        for i in range(k):
            for j in range(k):
                val = Cyc.rational(0)
                for ci, c in enumerate(self.classes):
                    term = self.chars[i][ci] * self.chars[j][c.inverse]
                    val = val + term * Fraction(c.size, self.order)
                expect = 1 if i == j else 0
                if not val == expect:
                    raise GammaValidationError(
                        f"row orthogonality fails for characters ({i}, {j})")

    # -- serialization --------------------------------------------------------

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "classes": [{"name": c.name, "size": c.size,
                         "element_order": c.element_order, "inverse": c.inverse}
                        for c in self.classes],
            "chars": [[v.to_doc() for v in row] for row in self.chars],
        }

    @staticmethod
    def from_doc(doc: dict) -> "GammaData":
        try:
            classes = [ClassInfo(str(c["name"]), int(c["size"]),
                                 int(c["element_order"]), int(c["inverse"]))
                       for c in doc["classes"]]
            chars = [[Cyc.from_doc(v) for v in row] for row in doc["chars"]]
            return GammaData(str(doc["name"]), int(doc["order"]), classes, chars)
        except (KeyError, TypeError, ValueError, CycError) as exc:
            if isinstance(exc, GammaValidationError):
                raise
            raise GammaValidationError(f"malformed Gamma document: {exc}") from exc


def load_gamma(document: Union[bytes, str, dict]) -> GammaData:
    if isinstance(document, (bytes, str)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GammaValidationError(f"not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise GammaValidationError("Gamma document must be a JSON object")
    return GammaData.from_doc(document)


class ConcreteGroup:
    """A finite group on elements 0..order-1 with an explicit Cayley table."""

    def __init__(self, name: str, table: Sequence[Sequence[int]],
                 class_of: Sequence[int], rep_matrices: Dict[int, List[Matrix]]):
        self.name = name
        self.order = len(table)
        self.table = [list(row) for row in table]
        self.class_of = list(class_of)
        self.rep_matrices = rep_matrices  # char index -> matrix per element
        self.inverse = [0] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.table[a][b] == 0:
                    self.inverse[a] = b
                    break

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def element_order(self, a: int) -> int:
        n = 1
        x = a
        while x != 0:
            x = self.mul(x, a)
            n += 1
        return n

    def conjugacy_classes(self) -> List[List[int]]:
        seen = [False] * self.order
        out = []
        for a in range(self.order):
            if seen[a]:
                continue
            orbit = sorted({self.mul(self.mul(g, a), self.inv(g)) for g in range(self.order)})
            for x in orbit:
                seen[x] = True
            out.append(orbit)
        return out


# -- built-in groups -----------------------------------------------------------


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Cyc.rational(0)) for j in range(n))
        for i in range(n))


def _builtin_trivial() -> Tuple[GammaData, ConcreteGroup]:
    g = GammaData("trivial", 1, [ClassInfo("e", 1, 1, 0)], [[Cyc.rational(1)]])
    cg = ConcreteGroup("trivial", [[0]], [0], {0: [((Cyc.rational(1),),)]})
    return g, cg


def _builtin_cyclic(k: int) -> Tuple[GammaData, ConcreteGroup]:
    if k < 1:
        raise ValueError("cyclic(k) needs k >= 1")
    if k == 1:
        return _builtin_trivial()
    classes = [ClassInfo("e" if m == 0 else f"c{m}", 1,
                         k // gcd(m, k) if m else 1, (-m) % k)
               for m in range(k)]
    chars = [[Cyc.zeta(k, (i * m) % k) for m in range(k)] for i in range(k)]
    g = GammaData(f"cyclic{k}", k, classes, chars)
    table = [[(a + b) % k for b in range(k)] for a in range(k)]
    reps = {i: [((Cyc.zeta(k, (i * m) % k),),) for m in range(k)] for i in range(k)}
    cg = ConcreteGroup(f"cyclic{k}", table, list(range(k)), reps)
    return g, cg


def _builtin_klein4() -> Tuple[GammaData, ConcreteGroup]:
    classes = [ClassInfo(n, 1, 1 if i == 0 else 2, i) for i, n in enumerate(["e", "a", "b", "ab"])]
    signs = [(1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1)]
    chars = [[Cyc.rational(s) for s in row] for row in signs]
    g = GammaData("klein4", 4, classes, chars)
    table = [[a ^ b for b in range(4)] for a in range(4)]
    reps = {i: [((Cyc.rational(signs[i][x]),),) for x in range(4)] for i in range(4)}
    cg = ConcreteGroup("klein4", table, list(range(4)), reps)
    return g, cg


def _builtin_quaternion8() -> Tuple[GammaData, ConcreteGroup]:
    # Elements 0..7 = 1, -1, i, -i, j, -j, k, -k as unit quaternions.
    units = [(1, 0, 0, 0), (-1, 0, 0, 0), (0, 1, 0, 0), (0, -1, 0, 0),
             (0, 0, 1, 0), (0, 0, -1, 0), (0, 0, 0, 1), (0, 0, 0, -1)]
    index = {u: i for i, u in enumerate(units)}

    def qmul(x, y):
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)

    table = [[index[qmul(x, y)] for y in units] for x in units]
    class_of = [0, 1, 2, 2, 3, 3, 4, 4]
    classes = [ClassInfo("1", 1, 1, 0), ClassInfo("-1", 1, 2, 1),
               ClassInfo("i", 2, 4, 2), ClassInfo("j", 2, 4, 3), ClassInfo("k", 2, 4, 4)]
    one = Cyc.rational(1)
    chars_int = [
        [1, 1, 1, 1, 1],
        [1, 1, 1, -1, -1],   # kernel contains <i>
        [1, 1, -1, 1, -1],   # kernel contains <j>
        [1, 1, -1, -1, 1],   # kernel contains <k>
        [2, -2, 0, 0, 0],    # the 2-dimensional symplectic character
    ]
    chars = [[Cyc.rational(v) for v in row] for row in chars_int]
    g = GammaData("quaternion8", 8, classes, chars)

    zi = Cyc.zeta(4)
    zero = Cyc.rational(0)
    mat_i: Matrix = ((zi, zero), (zero, -zi))
    mat_j: Matrix = ((zero, one), (-one, zero))
    two_dim: Dict[int, Matrix] = {}
    eye: Matrix = ((one, zero), (zero, one))
    for idx, u in enumerate(units):
        a, b, c, d = u
        m = eye
        acc = ((Cyc.rational(a), zero), (zero, Cyc.rational(a)))
        if b:
            acc = tuple(tuple(acc[r][s] + Cyc.rational(b) * mat_i[r][s] for s in range(2)) for r in range(2))
        if c:
            acc = tuple(tuple(acc[r][s] + Cyc.rational(c) * mat_j[r][s] for s in range(2)) for r in range(2))
        if d:
            mk = _mat_mul(mat_i, mat_j)
            acc = tuple(tuple(acc[r][s] + Cyc.rational(d) * mk[r][s] for s in range(2)) for r in range(2))
        two_dim[idx] = acc
    reps: Dict[int, List[Matrix]] = {}
    for i in range(4):
        reps[i] = [((Cyc.rational(chars_int[i][class_of[x]]),),) for x in range(8)]
    reps[4] = [two_dim[x] for x in range(8)]
    cg = ConcreteGroup("quaternion8", table, class_of, reps)
    return g, cg


def builtin(name: str) -> Tuple[GammaData, ConcreteGroup]:
    """Built-in groups: trivial, cyclic:k, klein4, quaternion8."""
    if name == "trivial":
        return _builtin_trivial()
    if name.startswith("cyclic:"):
        return _builtin_cyclic(int(name.split(":", 1)[1]))
    if name == "klein4":
        return _builtin_klein4()
    if name == "quaternion8":
        return _builtin_quaternion8()
    raise ValueError(f"unknown built-in group: {name!r}")


# -- virtual characters and bilinear forms -------------------------------------


class VirtualChar:
    """An integer vector over the irreducible characters (element of R_Z(Gamma))."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    def __setattr__(self, *a):
        raise AttributeError("VirtualChar is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, VirtualChar) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"VirtualChar{self.coeffs!r}"

    def value_at(self, gamma: GammaData, ci: int) -> Cyc:
        return gamma.char_value(self.coeffs, ci)

    def is_self_dual(self, gamma: GammaData) -> bool:
        return all(self.value_at(gamma, ci) == self.value_at(gamma, gamma.dual_class(ci))
                   for ci in range(gamma.num_classes))

    @staticmethod
    def trivial(gamma: GammaData) -> "VirtualChar":
        return VirtualChar([1] + [0] * gamma.r)


def weighted_form(gamma: GammaData, xi: VirtualChar,
                  f: Sequence[Union[int, Fraction, Cyc]],
                  g: Sequence[Union[int, Fraction, Cyc]]) -> Cyc:
    """<f, g>_xi = sum_c zeta_c^{-1} xi(c) f(c) g(c^{-1}), f and g char vectors."""
    total = Cyc.rational(0)
    for ci, cls in enumerate(gamma.classes):
        zc = gamma.centralizer_order(ci)
        term = xi.value_at(gamma, ci) * gamma.char_value(f, ci) \
            * gamma.char_value(g, cls.inverse)
        total = total + term / Fraction(zc)
    return total


def gram_matrix(gamma: GammaData, xi: VirtualChar) -> List[List[Fraction]]:
    """Rational Gram matrix <gamma_i, gamma_j>_xi; raises if an entry is irrational."""
    k = gamma.num_classes
    out: List[List[Fraction]] = []
    for i in range(k):
        row = []
        for j in range(k):
            e_i = [1 if t == i else 0 for t in range(k)]
            e_j = [1 if t == j else 0 for t in range(k)]
            val = weighted_form(gamma, xi, e_i, e_j)
            q = val.as_rational()
            if q is None:
                raise CycError(f"Gram entry ({i},{j}) is not rational: {val!r}")
            row.append(q)
        out.append(row)
    return out


def cartan_matrix(gamma: GammaData, xi: VirtualChar) -> List[List[int]]:
    """Integer matrix a_ij = <gamma_i, gamma_j>_xi; loud failure on non-integers."""
    gm = gram_matrix(gamma, xi)
    out = []
    for i, row in enumerate(gm):
        irow = []
        for j, q in enumerate(row):
            if q.denominator != 1:
                raise CycError(f"Cartan entry ({i},{j}) = {q} is not an integer")
            irow.append(q.numerator)
        out.append(irow)
    return out


def mckay_xi(gamma: GammaData, pi_index: Optional[int] = None) -> VirtualChar:
    """The McKay weight 2*gamma_0 - pi, pi the 2-dimensional defining character."""
    coeffs = [0] * gamma.num_classes
    coeffs[0] = 2
    if pi_index is not None:
        if gamma.degree(pi_index) != 2:
            raise ValueError(f"designated pi (index {pi_index}) is not 2-dimensional")
        coeffs[pi_index] -= 1
        return VirtualChar(coeffs)
    name = gamma.name
    if name.startswith("cyclic") and gamma.order >= 2:
        # pi = gamma_1 + gamma_{k-1} from the diag(zeta, zeta^{-1}) embedding.
        k = gamma.order
        coeffs[1 % k] -= 1
        coeffs[(k - 1) % k] -= 1
        return VirtualChar(coeffs)
    if name == "quaternion8":
        coeffs[4] -= 1
        return VirtualChar(coeffs)
    raise ValueError(
        f"no 2-dimensional defining character known for {name!r}; designate pi explicitly")
