import random

import pytest

from multidet.errors import DimensionMismatch, NotAComplex
from multidet.groups import (
    FGAbelianGroup,
    IntMatrix,
    ChainComplexZ,
    Z,
    Zmod,
    cokernel,
    determinant,
    group_hom_check,
    homology_at,
    kernel_basis,
    smith_normal_form,
    solve_integer,
)


def snf_checks(M):
    D, U, V = smith_normal_form(M)
    assert U * M * V == D
    assert D.is_diagonal()
    diag = [D[(i, i)] for i in range(min(M.rows, M.cols))]
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        if b != 0:
            assert a != 0 and b % a == 0
        # trailing zeros after a zero are fine
        if a == 0:
            assert b == 0
    assert determinant(U) in (1, -1)
    assert determinant(V) in (1, -1)
    return diag


def test_snf_worked_example():
    M = IntMatrix.from_rows([[2, 4], [6, 8]])
    diag = snf_checks(M)
    assert diag == [2, 4]


def test_snf_zero_matrix():
    M = IntMatrix.zero(3, 2)
    D, U, V = smith_normal_form(M)
    assert D.is_zero()
    assert U == IntMatrix.identity(3)
    assert V == IntMatrix.identity(2)


def test_snf_identity():
    M = IntMatrix.identity(3)
    D, _, _ = smith_normal_form(M)
    assert D == IntMatrix.identity(3)


def test_snf_random_property():
    rng = random.Random(20240901)
    for _ in range(150):
        m = rng.randint(1, 8)
        n = rng.randint(1, 8)
        M = IntMatrix.from_rows(
            [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)])
        snf_checks(M)


def test_kernel_and_solve():
    M = IntMatrix.from_rows([[2, 0, 0], [0, 3, 0]])
    ker = kernel_basis(M)
    assert len(ker) == 1
    v = ker[0]
    assert v[0] == 0 and v[1] == 0 and abs(v[2]) == 1

    N = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert solve_integer(N, [4, 9]) == [2, 3]
    assert solve_integer(N, [1, 0]) is None


def test_cokernel_forms():
    # Z^2 / <(2,0),(0,3)>  =  Z/6 after invariant-factor normalization
    M = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert cokernel(M) == Zmod(6)
    # Z^2 / <(2,4)> = Z + Z/2
    M = IntMatrix.from_rows([[2, 4]])
    assert cokernel(M) == FGAbelianGroup((2, 0))


def test_element_arithmetic():
    G = Zmod(4, 0)
    x = G.element([3, -2])
    assert x.coords == (3, -2)
    y = G.element([2, 5])
    assert (x + y).coords == (1, 3)
    assert (-x).coords == (1, 2)
    assert (3 * y).coords == (2, 15)
    with pytest.raises(DimensionMismatch):
        G.element([1])
    H = Zmod(4)
    with pytest.raises(DimensionMismatch):
        _ = x + H.element([1])


def test_group_enumeration_order():
    G = Zmod(2, 3)
    elems = G.elements()
    assert len(elems) == 6
    assert elems[0].is_zero()
    coords = [e.coords for e in elems]
    assert coords == sorted(coords)


def test_homology_trivial_cases():
    # 0 -> Z -> 0 at the middle level
    C = ChainComplexZ([0, 1, 0],
                      [IntMatrix.zero(0, 1), IntMatrix.zero(1, 0)])
    assert homology_at(C, 1) == Z

    # Z --x2--> Z at the target level
    C = ChainComplexZ([1, 1], [IntMatrix.from_rows([[2]])])
    assert homology_at(C, 0) == Zmod(2)


def test_homology_rejects_noncomplex():
    bad1 = IntMatrix.from_rows([[1]])
    bad2 = IntMatrix.from_rows([[1]])
    with pytest.raises(NotAComplex):
        ChainComplexZ([1, 1, 1], [bad1, bad2])


def test_homology_generator_reorder_invariance():
    # a small complex: Z^2 --d--> Z^2, homology at level 0
    rng = random.Random(7)
    for _ in range(20):
        rows = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        d = IntMatrix.from_rows(rows)
        C = ChainComplexZ([2, 2], [d])
        h = homology_at(C, 0)
        # permute the level-0 generators: swap rows of d
        d2 = IntMatrix.from_rows([rows[1], rows[0]])
        C2 = ChainComplexZ([2, 2], [d2])
        assert homology_at(C2, 0) == h


def test_group_hom_check_examples():
    # identity on Z/2: valid
    rep = group_hom_check(IntMatrix.identity(1), Zmod(2), Zmod(2))
    assert rep.valid
    # Z/2 -> Z, e -> 1: invalid (2*1 != 0 in Z)
    rep = group_hom_check(IntMatrix.from_rows([[1]]), Zmod(2), Z)
    assert not rep.valid
    # Z/4 -> Z/2, e -> 1: valid (4*1 = 0 in Z/2)
    rep = group_hom_check(IntMatrix.from_rows([[1]]), Zmod(4), Zmod(2))
    assert rep.valid
    with pytest.raises(DimensionMismatch):
        group_hom_check(IntMatrix.identity(2), Zmod(2), Zmod(2))
