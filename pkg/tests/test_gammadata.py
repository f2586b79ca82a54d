import json

import pytest

from spinwreath.gammadata import (GammaValidationError, VirtualChar, builtin,
                                  cartan_matrix, gram_matrix, load_gamma,
                                  mckay_xi, weighted_form)
from spinwreath.scalars import Cyc, CycError

BUILTINS = ["trivial", "cyclic:2", "cyclic:3", "cyclic:6", "klein4", "quaternion8"]


def test_trivial():
    g, cg = builtin("trivial")
    assert g.num_classes == 1
    assert g.chars[0][0] == 1
    assert cg.order == 1


def test_cyclic2_chars():
    g, _ = builtin("cyclic:2")
    vals = [[v.as_rational() for v in row] for row in g.chars]
    assert vals == [[1, 1], [1, -1]]


def test_quaternion8():
    g, cg = builtin("quaternion8")
    assert sorted(c.size for c in g.classes) == [1, 1, 2, 2, 2]
    two_dim = [v.as_rational() for v in g.chars[4]]
    assert two_dim == [2, -2, 0, 0, 0]
    # concrete classes agree with the class data
    classes = cg.conjugacy_classes()
    assert sorted(len(c) for c in classes) == [1, 1, 2, 2, 2]
    for cls in classes:
        labels = {cg.class_of[x] for x in cls}
        assert len(labels) == 1
    # the 2-dimensional representation is a homomorphism
    mats = cg.rep_matrices[4]
    for a in range(8):
        for b in range(8):
            prod = cg.mul(a, b)
            lhs = [[sum((mats[a][i][k] * mats[b][k][j] for k in range(2)),
                        Cyc.rational(0)) for j in range(2)] for i in range(2)]
            assert all(lhs[i][j] == mats[prod][i][j] for i in range(2) for j in range(2))


def test_builtin_validation_and_column_orthogonality():
    for name in BUILTINS:
        g, cg = builtin(name)
        k = g.num_classes
        # column orthogonality: sum_i chi_i(c) chi_i(c'^{-1}) = delta zeta_c
        for c in range(k):
            for cp in range(k):
                total = Cyc.rational(0)
                for i in range(k):
                    total = total + g.chars[i][c] * g.chars[i][g.dual_class(cp)]
                expect = g.centralizer_order(c) if c == cp else 0
                assert total == expect, (name, c, cp)
        if cg is not None:
            sizes = sorted(len(c) for c in cg.conjugacy_classes())
            assert sizes == sorted(c.size for c in g.classes)


def test_load_round_trip():
    g, _ = builtin("cyclic:3")
    doc = json.dumps(g.to_doc())
    g2 = load_gamma(doc)
    assert g2.order == 3 and g2.num_classes == 3
    assert all(g2.chars[i][j] == g.chars[i][j] for i in range(3) for j in range(3))


def test_load_rejects_duplicate_row():
    g, _ = builtin("cyclic:2")
    doc = g.to_doc()
    doc["chars"][1] = doc["chars"][0]
    with pytest.raises(GammaValidationError, match="orthogonality"):
        load_gamma(json.dumps(doc))


def test_load_rejects_bad_sizes():
    g, _ = builtin("cyclic:2")
    doc = g.to_doc()
    doc["classes"][1]["size"] = 2
    with pytest.raises(GammaValidationError):
        load_gamma(json.dumps(doc))


def test_load_rejects_garbage():
    with pytest.raises(GammaValidationError):
        load_gamma(b"not json at all {")
    with pytest.raises(GammaValidationError):
        load_gamma(json.dumps({"name": "x"}))


def test_weighted_form_standard_is_delta():
    g, _ = builtin("cyclic:3")
    xi = VirtualChar.trivial(g)
    for i in range(3):
        for j in range(3):
            e_i = [1 if t == i else 0 for t in range(3)]
            e_j = [1 if t == j else 0 for t in range(3)]
            assert weighted_form(g, xi, e_i, e_j) == (1 if i == j else 0)


def test_weighted_form_cyclic2_mckay():
    g, _ = builtin("cyclic:2")
    xi = mckay_xi(g)
    assert xi.coeffs == (2, -2)
    assert weighted_form(g, xi, [1, 0], [1, 0]) == 2
    assert weighted_form(g, xi, [1, 0], [0, 1]) == -2


def test_weighted_form_zero_xi():
    g, _ = builtin("cyclic:2")
    xi = VirtualChar([0, 0])
    assert weighted_form(g, xi, [1, 1], [2, -1]) == 0


def test_cartan_matrices():
    g2, _ = builtin("cyclic:2")
    assert cartan_matrix(g2, mckay_xi(g2)) == [[2, -2], [-2, 2]]
    for k in range(3, 7):
        g, _ = builtin(f"cyclic:{k}")
        a = cartan_matrix(g, mckay_xi(g))
        for i in range(k):
            assert a[i][i] == 2
            for j in range(k):
                if j != i:
                    expect = -1 if (i - j) % k in (1, k - 1) else 0
                    assert a[i][j] == expect
    q8, _ = builtin("quaternion8")
    a = cartan_matrix(q8, mckay_xi(q8))
    assert a == [[2, 0, 0, 0, -1], [0, 2, 0, 0, -1], [0, 0, 2, 0, -1],
                 [0, 0, 0, 2, -1], [-1, -1, -1, -1, 2]]


def test_cartan_null_vector_is_degrees():
    for name in ("cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "quaternion8"):
        g, _ = builtin(name)
        a = cartan_matrix(g, mckay_xi(g))
        degs = [g.degree(i) for i in range(g.num_classes)]
        for row in a:
            assert sum(x * d for x, d in zip(row, degs)) == 0


def test_gram_is_rational_and_integral():
    # any integer virtual weight yields an integer Gram matrix
    for name in BUILTINS:
        g, _ = builtin(name)
        xi = VirtualChar([2] + [-1] * g.r)
        gm = gram_matrix(g, xi)
        assert all(q.denominator == 1 for row in gm for q in row)
        assert cartan_matrix(g, xi) == [[q.numerator for q in row] for row in gm]


def test_mckay_xi():
    g2, _ = builtin("cyclic:2")
    assert mckay_xi(g2).coeffs == (2, -2)
    q8, _ = builtin("quaternion8")
    assert mckay_xi(q8).coeffs == (2, 0, 0, 0, -1)
    assert mckay_xi(q8).is_self_dual(q8)
    g1, _ = builtin("trivial")
    with pytest.raises(ValueError):
        mckay_xi(g1)
    with pytest.raises(ValueError):
        mckay_xi(q8, pi_index=1)  # 1-dimensional character designated


def test_self_duality():
    g3, _ = builtin("cyclic:3")
    assert VirtualChar([3, -1, -1]).is_self_dual(g3)
    assert not VirtualChar([0, 1, 0]).is_self_dual(g3)
