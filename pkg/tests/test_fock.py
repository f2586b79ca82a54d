import random
from fractions import Fraction

import pytest

from spinwreath.fock import (FockContext, FockVector, a_prime_vector, annihilate,
                             class_create, class_annihilate, coproduct, create,
                             inner, q_gen, tensor_inner)
from spinwreath.gammadata import VirtualChar, builtin, mckay_xi
from spinwreath.partitions import MultiPartition, big_z, multipartitions
from spinwreath.scalars import Cyc


def ctx_for(name, xi=None):
    g, _ = builtin(name)
    return FockContext(g, xi if xi is not None else VirtualChar.trivial(g))


def test_create_basics():
    ctx = ctx_for("trivial")
    vac = FockVector.vacuum(ctx)
    a1 = create(vac, 1, [1])
    assert list(a1.terms) == [((1, 0),)]
    # creations commute
    assert create(create(vac, 1, [1]), 3, [1]) == create(create(vac, 3, [1]), 1, [1])
    with pytest.raises(ValueError):
        create(vac, 2, [1])
    with pytest.raises(ValueError):
        annihilate(vac, -1, [1])


def test_create_linear():
    ctx = ctx_for("cyclic:2")
    vac = FockVector.vacuum(ctx)
    v = create(vac, 1, [1, 1])
    assert v == create(vac, 1, [1, 0]) + create(vac, 1, [0, 1])


def test_annihilate_examples():
    ctx = ctx_for("trivial")
    vac = FockVector.vacuum(ctx)
    a1 = create(vac, 1, [1])
    assert annihilate(a1, 1, [1]).vacuum_coeff() == Fraction(1, 2)
    a11 = create(a1, 1, [1])
    assert annihilate(a11, 1, [1]) == a1
    assert annihilate(a1, 3, [1]).is_zero()


def test_heisenberg_relation_small():
    for name, xi in (("trivial", None), ("cyclic:3", None),
                     ("cyclic:3", VirtualChar([3, -1, -1]))):
        ctx = ctx_for(name, xi)
        k = ctx.gamma.num_classes
        basis = [[1 if t == i else 0 for t in range(k)] for i in range(k)]
        monos = []
        for d in range(5):
            for mp in multipartitions(d, k, "OP"):
                factors = []
                for i, part in enumerate(mp.parts):
                    factors.extend((n, i) for n in part)
                monos.append(tuple(sorted(factors)))
        for i in range(k):
            for j in range(k):
                for m in (1, 3):
                    for n in (1, 3):
                        for mono in monos:
                            v = FockVector(ctx, {mono: Cyc.rational(1)})
                            lhs = annihilate(create(v, n, basis[j]), m, basis[i]) \
                                - create(annihilate(v, m, basis[i]), n, basis[j])
                            expect = v.scale(Fraction(m, 2) * ctx.gram[i][j]) \
                                if m == n else FockVector.zero(ctx)
                            assert lhs == expect


def test_class_generator_examples():
    ctx = ctx_for("trivial")
    vac = FockVector.vacuum(ctx)
    assert class_create(vac, 1, 0) == create(vac, 1, [1])
    ctx2 = ctx_for("cyclic:2")
    vac2 = FockVector.vacuum(ctx2)
    assert class_create(vac2, 1, 1) == create(vac2, 1, [1, 0]) - create(vac2, 1, [0, 1])
    # prop_orth: [a_1(c0), a_{-1}(c0)] = 1/2 zeta_c0 xi(c0) = 1 on the vacuum
    assert class_annihilate(class_create(vac2, 1, 0), 1, 0).vacuum_coeff() == 1


def test_prop_orth_all_classes_cyclic3():
    g, _ = builtin("cyclic:3")
    xi = VirtualChar([1, 1, 0])
    assert not xi.is_self_dual(g)
    xi = VirtualChar([2, 1, 1])
    ctx = FockContext(g, xi)
    vac = FockVector.vacuum(ctx)
    for cp in range(3):
        for c in range(3):
            for m in (1, 3, 5):
                for n in (1, 3, 5):
                    v = class_annihilate(class_create(vac, n, c), m, g.dual_class(cp))
                    if m == n and cp == c:
                        expect = Fraction(m, 2) * g.centralizer_order(c)
                        assert v.vacuum_coeff() == Cyc.lift(expect) * xi.value_at(g, c)
                    else:
                        assert v.is_zero()


def test_inner_examples():
    ctx = ctx_for("trivial")
    vac = FockVector.vacuum(ctx)
    a1 = create(vac, 1, [1])
    a111 = create(create(a1, 1, [1]), 1, [1])
    assert inner(a111, a111) == Fraction(3, 4)
    assert inner(vac, a1).is_zero()
    rho = MultiPartition([(1,)])
    assert inner(a_prime_vector(ctx, rho), a_prime_vector(ctx, rho)) == Fraction(1, 2)


def test_eq_inner_closed_form():
    for name, xi in (("trivial", None), ("cyclic:2", None),
                     ("cyclic:2", VirtualChar([2, -2])), ("cyclic:3", None)):
        g, _ = builtin(name)
        xi = xi if xi is not None else VirtualChar.trivial(g)
        ctx = FockContext(g, xi)
        k = g.num_classes
        perm = [g.dual_class(i) for i in range(k)]
        for n in range(5):
            for rho in multipartitions(n, k, "OP"):
                for pi in multipartitions(n, k, "OP"):
                    val = inner(a_prime_vector(ctx, pi), a_prime_vector(ctx, rho.relabel(perm)))
                    if pi == rho:
                        expect = Cyc.rational(Fraction(big_z(rho, g.centralizer_orders),
                                                       2 ** rho.length))
                        for ci, part in enumerate(rho.parts):
                            for _ in part:
                                expect = expect * xi.value_at(g, ci)
                        assert val == expect, (name, rho)
                    else:
                        assert val.is_zero(), (name, rho, pi)


def test_adjointness_random():
    rng = random.Random(4)
    ctx = ctx_for("cyclic:2")
    vac = FockVector.vacuum(ctx)

    def rand_vec(deg):
        v = vac
        d = 0
        while d < deg:
            n = rng.choice([1, 3])
            v = create(v, n, [rng.randint(-2, 2), rng.randint(-2, 2)])
            d += n
        return v

    for _ in range(12):
        u = rand_vec(rng.randint(0, 6))
        v = rand_vec(rng.randint(0, 6))
        n = rng.choice([1, 3])
        gam = [rng.randint(-2, 2), rng.randint(-2, 2)]
        assert inner(create(u, n, gam), v) == inner(u, annihilate(v, n, gam))


def test_q_gen():
    ctx = ctx_for("trivial")
    vac = FockVector.vacuum(ctx)
    a1 = create(vac, 1, [1])
    assert q_gen(ctx, 1, [1]) == a1.scale(2)
    q3 = q_gen(ctx, 3, [1])
    expect = create(create(a1, 1, [1]), 1, [1]).scale(Fraction(4, 3)) \
        + create(vac, 3, [1]).scale(Fraction(2, 3))
    assert q3 == expect
    assert q_gen(ctx, -1, [1]).is_zero()
    assert q_gen(ctx, 0, [1]) == vac


def test_q_multiplicative():
    # q(beta - gamma) = q(beta) series times q(-gamma) series, degree <= 6
    ctx = ctx_for("cyclic:2")
    beta, gamma = [1, 0], [0, 1]
    diff = [1, -1]
    for n in range(7):
        total = FockVector.zero(ctx)
        for m in range(n + 1):
            total = total + q_gen(ctx, m, beta) * q_gen(ctx, n - m, [-1 * c for c in gamma])
        assert total == q_gen(ctx, n, diff), n


def test_coproduct():
    ctx = ctx_for("trivial")
    vac = FockVector.vacuum(ctx)
    a1 = create(vac, 1, [1])
    t = coproduct(a1)
    key_l = (((1, 0),), ())
    key_r = ((), ((1, 0),))
    assert t[key_l] == 1 and t[key_r] == 1 and len(t) == 2
    a11 = create(a1, 1, [1])
    t2 = coproduct(a11)
    assert t2[(((1, 0), (1, 0)), ())] == 1
    assert t2[(((1, 0),), ((1, 0),))] == 2
    # counit: the (full, empty) component recovers the vector
    for mono, c in a11.terms.items():
        assert t2[(mono, ())] == c


def test_pairing_characterization():
    # <f g, h> = <f (x) g, Delta h> on random triples
    rng = random.Random(9)
    ctx = ctx_for("cyclic:3")
    for _ in range(8):
        f = q_gen(ctx, rng.randint(0, 3), [rng.randint(-1, 2) for _ in range(3)])
        g = q_gen(ctx, rng.randint(0, 3), [rng.randint(-1, 2) for _ in range(3)])
        h = q_gen(ctx, rng.randint(0, 6), [rng.randint(-1, 2) for _ in range(3)])
        assert inner(f * g, h) == tensor_inner(ctx, coproduct(h), f, g)


def test_degenerate_radical_stable():
    # with the McKay weight on cyclic(2) the radical is spanned by g0+g1;
    # the ideal it generates is stable under annihilation
    g, _ = builtin("cyclic:2")
    ctx = FockContext(g, mckay_xi(g))
    vac = FockVector.vacuum(ctx)

    def in_radical_ideal(v):
        # substitute a(g1) = a(u) - a(g0) with u = g0 + g1; membership means
        # every monomial keeps at least one u factor
        subs = {}
        for mono, c in v.terms.items():
            expansions = [((), Cyc.rational(1))]
            for (n, i) in mono:
                new = []
                for tail, coef in expansions:
                    if i == 0:
                        new.append((tail + ((n, "g0"),), coef))
                    else:
                        new.append((tail + ((n, "u"),), coef))
                        new.append((tail + ((n, "g0"),), coef * -1))
                expansions = new
            for tail, coef in expansions:
                key = tuple(sorted(tail, key=repr))
                subs[key] = subs.get(key, Cyc.rational(0)) + c * coef
        return all(v2.is_zero() or any(t[1] == "u" for t in key)
                   for key, v2 in subs.items())

    rad = create(vac, 1, [1, 1])
    elem = create(rad, 3, [1, 0])  # radical generator times something
    assert in_radical_ideal(elem)
    for n in (1, 3):
        for gam in ([1, 0], [0, 1], [2, -1]):
            assert in_radical_ideal(annihilate(elem, n, gam))


def test_context_mismatch():
    c1 = ctx_for("trivial")
    c2 = ctx_for("trivial")
    with pytest.raises(ValueError):
        inner(FockVector.vacuum(c1), FockVector.vacuum(c2))
