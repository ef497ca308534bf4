import itertools
import random

import pytest

from multidet.groups import Z, Zmod, FGAbelianGroup
from multidet.picard import (
    PicardPresentation,
    PicardFunctorData,
    check_multiexact_picard_functor,
    commutassoc,
    k_invariant,
    product_picard,
    reorder_value,
    split_product_element,
    validate_picard,
)


def P_discrete_z2():
    return PicardPresentation(Zmod(2), FGAbelianGroup(()), name="Z2disc")


def P_lines():
    # pi0 = Z, pi1 = Z/2, c(x, y) = xy mod 2
    return PicardPresentation(Z, Zmod(2), [[[1]]], name="lines")


def P_mod4():
    # pi0 = Z, pi1 = Z/4, c(x, y) = 2xy mod 4: antisymmetric, order-4 values
    # nearby make sign errors visible.
    return PicardPresentation(Z, Zmod(4), [[[2]]], name="mod4")


def test_validate_picard_examples():
    assert validate_picard(P_discrete_z2()).valid
    assert validate_picard(P_lines()).valid
    bad = PicardPresentation(Zmod(2), Zmod(3), [[[1]]])
    rep = validate_picard(bad)
    assert not rep.valid
    assert any("antisymmetry" == it.check for it in rep.failures)


def test_validate_picard_order_violation():
    # antisymmetric off-diagonal cell that ignores the generator order
    A = Zmod(2, 2)
    B = Zmod(3)
    c = [[[0], [1]], [[2], [0]]]
    rep = validate_picard(PicardPresentation(A, B, c))
    assert not rep.valid
    assert all(it.check == "order" for it in rep.failures)


def test_commutassoc_values():
    P = P_discrete_z2()
    a = P.A.element([1])
    z = P.A.zero()
    assert commutassoc(P, a, a, a, z).is_zero()

    L = P_lines()
    e = L.A.element([1])
    z = L.A.zero()
    assert commutassoc(L, z, e, e, z) == L.B.element([1])
    # unit slots kill the value
    assert commutassoc(L, e, z, e, e).is_zero()
    assert commutassoc(L, e, e, z, e).is_zero()


def test_k_invariant():
    L = P_lines()
    assert k_invariant(L, L.A.zero()).is_zero()
    assert k_invariant(L, L.A.element([1])) == L.B.element([1])
    assert k_invariant(L, L.A.element([2])).is_zero()
    # 2-torsion property on a sweep
    for n in range(-4, 5):
        v = k_invariant(L, L.A.element([n]))
        assert (2 * v).is_zero()


def test_interchange_coherence_small():
    # the two composite evaluations of the 8-input interchange square agree
    for P in (P_lines(), P_mod4()):
        vals = [P.A.element([v]) for v in (-1, 0, 1, 2)]
        for a1, a2, b1, b2 in itertools.product(vals, repeat=4):
            for c1, c2, d1, d2 in ((vals[0], vals[3], vals[2], vals[1]),
                                   (vals[2], vals[2], vals[3], vals[0])):
                right = (P.c(b1 + b2, c1 + c2)
                         + P.c(a2, c1) + P.c(b2, d1)
                         + P.c(a2 + c2, b1 + d1))
                down = (P.c(a2, b1) + P.c(c2, d1)
                        + P.c(a2 + b2, c1 + d1)
                        + P.c(b1, c1) + P.c(b2, c2))
                assert right == down


def test_reorder_value_coherence():
    P = P_mod4()
    rng = random.Random(5)
    vals = [P.A.element([rng.randint(-3, 3)]) for _ in range(4)]
    # composing a reorder with its inverse gives zero
    perm = [2, 0, 3, 1]
    fwd = reorder_value(P, vals, perm)
    back = reorder_value(P, [vals[i] for i in perm],
                         [perm.index(i) for i in range(4)])
    assert (fwd + back).is_zero()
    # single adjacent swap is a bare c-value
    assert reorder_value(P, vals, [1, 0, 2, 3]) == P.c(vals[0], vals[1])


def test_identity_functor_multiexact():
    L = P_lines()
    F = PicardFunctorData([L], L, f0={(0,): L.A.element([1])},
                          f1=[[L.B.element([1])]], name="id")
    rep = check_multiexact_picard_functor(F, rng=random.Random(0),
                                          sample_budget=40)
    assert rep.valid


def test_addition_functor_with_lambda_cells():
    # + : P x P -> P as a one-variable functor on the product presentation,
    # with monoidal cells given by the interchange of P.
    P = PicardPresentation(Zmod(2), Zmod(2), [[[1]]], name="Z2Z2")
    PP = product_picard(P, P)

    def m_cells(slot, others, y, yp):
        a, a2 = split_product_element(P, P, y)
        b, b2 = split_product_element(P, P, yp)
        # (a+b)+(a2+b2) -> (a+a2)+(b+b2) contributes c(b, a2)
        return P.c(b, a2)

    F = PicardFunctorData(
        [PP], P,
        f0={(0,): P.A.element([1]), (1,): P.A.element([1])},
        f1=[[P.B.element([1]), P.B.element([1])]],
        m_cells=m_cells, name="add")
    rep = check_multiexact_picard_functor(F)
    assert rep.valid, rep.summary()


def test_perturbed_cell_detected():
    P = PicardPresentation(Zmod(2), Zmod(2), [[[1]]], name="Z2Z2")
    PP = product_picard(P, P)
    bad_y = PP.A.element([1, 0])
    bad_yp = PP.A.element([0, 1])

    def m_cells(slot, others, y, yp):
        a, a2 = split_product_element(P, P, y)
        b, b2 = split_product_element(P, P, yp)
        v = P.c(b, a2)
        if (y, yp) == (bad_y, bad_yp):
            v = v + P.B.element([1])
        return v

    F = PicardFunctorData(
        [PP], P,
        f0={(0,): P.A.element([1]), (1,): P.A.element([1])},
        f1=[[P.B.element([1]), P.B.element([1])]],
        m_cells=m_cells, name="add-perturbed")
    rep = check_multiexact_picard_functor(F)
    assert not rep.valid
    # brute force locates the broken equations; every failure mentions a cell
    assert all(it.check.startswith("monoidal") or
               it.check == "compatibility-square" for it in rep.failures)


def test_two_variable_multiplication_functor():
    # pi0 = Z with c = xy mod 2; multiplication with distributor cells
    # m2(c,d @ a) = binom(a,2)*c*d mod 2 satisfies the compatibility square.
    L = P_lines()

    def m_cells(slot, others, y, yp):
        if slot == 0:
            return L.B.zero()
        a = others[0].coords[0]
        cc = y.coords[0]
        d = yp.coords[0]
        return L.B.element([(a * (a - 1) // 2) * cc * d])

    F = PicardFunctorData(
        [L, L], L,
        f0={(0, 0): L.A.element([1])},
        f1=[[L.B.element([1])], [L.B.element([1])]],
        m_cells=m_cells, name="mult")
    rep = check_multiexact_picard_functor(F, rng=random.Random(3),
                                          sample_budget=60)
    assert rep.valid, rep.summary()


def test_product_split_roundtrip():
    P = P_lines()
    Q = P_discrete_z2()
    PQ = product_picard(P, Q)
    x = PQ.A.element([3, 1])
    xp, xq = split_product_element(P, Q, x)
    assert xp == P.A.element([3])
    assert xq == Q.A.element([1])
