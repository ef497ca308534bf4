import random

import pytest

from multidet.errors import BudgetExceeded
from multidet.groups import FGAbelianGroup, IntMatrix, Zmod
from multidet.picard import PicardPresentation
from multidet.qcomplex import (
    QComplex,
    enumerate_cubes,
    h0_presentation_oracle,
    induced_chain_map,
    q_homology,
    sampled_boundary_square_check,
    streamed_level_checks,
)

GROUPS = [Zmod(2), Zmod(3), Zmod(4), Zmod(2, 2)]


def test_enumeration_counts():
    assert len(enumerate_cubes(Zmod(2), 1)) == 4
    assert len(enumerate_cubes(Zmod(2), 3)) == 256
    assert len(enumerate_cubes(FGAbelianGroup(()), 2)) == 1
    with pytest.raises(BudgetExceeded):
        enumerate_cubes(Zmod(3), 4)


def test_boundary_sign_convention():
    # d[x|y|z] = -x + y - z; for the Z/2 cube with corners (x,z) = (1,1)
    # the middle is 0, so the column reads +1 on [0] and -2 on [1].
    Q = QComplex(Zmod(2), max_level=1, check=False)
    col = Q.full_boundary(1).column(3)
    assert col == {0: 1, 1: -2}


def test_squares_and_span_within_budget():
    for A in GROUPS:
        top = 4 if A.order() == 2 else 3
        Q = QComplex(A, max_level=top, check=False)
        assert Q.check_boundary_squares().status == "valid"
        assert Q.check_degenerate_span().status == "valid"


def test_streamed_level4_checks():
    rng = random.Random(7)
    for A in (Zmod(3), Zmod(4), Zmod(2, 2)):
        rep = streamed_level_checks(A, 4, 200, rng)
        assert rep.valid


def test_h0_is_the_group():
    for A in GROUPS:
        assert q_homology(A, 0) == A
        assert h0_presentation_oracle(A) == A


def test_h0_trivial_group():
    A = FGAbelianGroup(())
    assert q_homology(A, 0) == FGAbelianGroup(())


def test_homology_budget_guard():
    Q = QComplex(Zmod(2), max_level=2, check=False)
    with pytest.raises(BudgetExceeded):
        Q.homology(2)


def test_functoriality_chain_map():
    phi = IntMatrix.from_rows([[1]])  # Z/4 -> Z/2 reduction
    M1, _, _ = induced_chain_map(phi, Zmod(4), Zmod(2), 1)
    M0, _, _ = induced_chain_map(phi, Zmod(4), Zmod(2), 0)
    M2, _, _ = induced_chain_map(phi, Zmod(4), Zmod(2), 2)
    QS = QComplex(Zmod(4), max_level=2, check=False)
    QD = QComplex(Zmod(2), max_level=2, check=False)
    assert M0 * QS.full_boundary(1) == QD.full_boundary(1) * M1
    assert M1 * QS.full_boundary(2) == QD.full_boundary(2) * M2


def test_sampled_square_general_base():
    P = PicardPresentation(Zmod(2), Zmod(2), [[[1]]])
    rep = sampled_boundary_square_check(P, 2, sample_budget=40,
                                        rng=random.Random(1))
    assert rep.valid
    rep = sampled_boundary_square_check(P, 3, sample_budget=10,
                                        rng=random.Random(2))
    assert rep.valid
    assert sampled_boundary_square_check(P, 1).status == "vacuous"
