import itertools
import random

import pytest

from multidet.errors import DimensionOutOfRange, MismatchedShape
from multidet.groups import Z, Zmod, FGAbelianGroup
from multidet.picard import PicardPresentation
from multidet.cubes import (
    Cube,
    add_cubes,
    all_discrete_cubes,
    check_cubical_relations,
    check_higher_coherence,
    corner_indices,
    cube1,
    cube_from_corners,
    cube_indices,
    degeneracy,
    face,
    face_additivity_check,
    random_valid_cube,
    validate_cube,
    zero_cube,
)

DISC = PicardPresentation(Zmod(2), FGAbelianGroup(()), name="disc")
LINES = PicardPresentation(Z, Zmod(2), [[[1]]], name="lines")
MOD4 = PicardPresentation(Z, Zmod(4), [[[2]]], name="mod4")


def test_validate_1cubes():
    one = DISC.A.element([1])
    zero = DISC.A.zero()
    assert validate_cube(cube1(DISC, one, one, y=zero)).valid
    bad = Cube(DISC, 1, {(-1,): one, (0,): one, (1,): one},
               {(1, ()): DISC.B.zero()})
    rep = validate_cube(bad)
    assert not rep.valid
    assert rep.failures[0].check == "sum"


def test_all_units_2cube_pentagon_census():
    # With unit corners over (Z, Z/2, xy) the pentagon demands the six
    # f-values sum against c(1,1) = 1, so the zero table fails and exactly
    # half of the 64 assignments pass.
    e = LINES.A.element([1])
    corners = {c: e for c in corner_indices(2)}
    fkeys = [(1, (-1,)), (1, (0,)), (1, (1,)),
             (2, (-1,)), (2, (0,)), (2, (1,))]
    n_valid = 0
    zero_table_valid = None
    for bits in itertools.product([0, 1], repeat=6):
        struct = {k: LINES.B.element([b]) for k, b in zip(fkeys, bits)}
        S = cube_from_corners(LINES, 2, corners, struct)
        ok = validate_cube(S).valid
        n_valid += ok
        if not any(bits):
            zero_table_valid = ok
    assert n_valid == 32
    assert zero_table_valid is False


def test_face_formula_on_grid():
    # 2-cube drawn as  b p a / s z r / d q c ; the (j=2, alpha=1) face is
    # the top line b -- p -- a.
    vals = {}
    names = {}
    for k, (idx, nm) in enumerate(zip(
            [(-1, 1), (0, 1), (1, 1), (-1, 0), (0, 0), (1, 0),
             (-1, -1), (0, -1), (1, -1)],
            ["b", "p", "a", "s", "z", "r", "d", "q", "c"])):
        vals[idx] = Z.element([k + 1])
        names[idx] = nm
    B0 = FGAbelianGroup(())
    P = PicardPresentation(Z, B0)
    struct = {(i, (r,)): B0.zero() for i in (1, 2) for r in (-1, 0, 1)}
    S = Cube(P, 2, vals, struct)
    top = face(S, 2, 1)
    assert top.v((-1,)) == vals[(-1, 1)]   # b
    assert top.v((0,)) == vals[(0, 1)]     # p
    assert top.v((1,)) == vals[(1, 1)]     # a
    mid = face(S, 1, 0)
    assert [mid.v((a,)) for a in (-1, 0, 1)] == [vals[(0, -1)], vals[(0, 0)],
                                                 vals[(0, 1)]]


def test_degeneracy_formula():
    x = DISC.A.element([1])
    pt = Cube(DISC, 0, {(): x}, {})
    up = degeneracy(pt, 1, 1)
    assert [up.v((a,)) for a in (-1, 0, 1)] == [x, x, DISC.A.zero()]
    down = degeneracy(pt, 1, -1)
    assert [down.v((a,)) for a in (-1, 0, 1)] == [DISC.A.zero(), x, x]


def test_face_degeneracy_identities_on_random_cubes():
    rng = random.Random(11)
    for _ in range(25):
        S = random_valid_cube(LINES, 2, rng)
        for j in (1, 2, 3):
            for b in (-1, 1):
                for a in (-1, 0, 1):
                    if a == b:
                        assert face(degeneracy(S, j, b), j, a) == \
                            zero_cube(LINES, 2)
                    else:
                        assert face(degeneracy(S, j, b), j, a) == S


def test_dimension_guards():
    S = random_valid_cube(LINES, 2, random.Random(0))
    with pytest.raises(DimensionOutOfRange):
        face(S, 3, 1)
    with pytest.raises(DimensionOutOfRange):
        degeneracy(S, 4, 1)
    T = random_valid_cube(LINES, 1, random.Random(0))
    with pytest.raises(MismatchedShape):
        add_cubes(S, T)


def test_relations_exhaustive_discrete():
    for group in (Zmod(2), Zmod(3)):
        P = PicardPresentation(group, FGAbelianGroup(()))
        rep = check_cubical_relations(P, max_n=2)
        assert rep.valid


def test_relations_sampled_general():
    rep = check_cubical_relations(LINES, rng=random.Random(3),
                                  sample_budget=24, max_n=3)
    assert rep.valid


def test_add_cubes_unit_and_closure():
    rng = random.Random(21)
    S = random_valid_cube(LINES, 2, rng)
    assert add_cubes(S, zero_cube(LINES, 2)) == S
    for _ in range(100):
        A = random_valid_cube(LINES, 2, rng)
        B = random_valid_cube(LINES, 2, rng)
        assert validate_cube(add_cubes(A, B)).valid


def test_add_cubes_discrete_is_plain_sum():
    rng = random.Random(2)
    S = random_valid_cube(DISC, 2, rng)
    T = random_valid_cube(DISC, 2, rng)
    U = add_cubes(S, T)
    for idx in cube_indices(2):
        assert U.v(idx) == S.v(idx) + T.v(idx)


def test_face_additivity():
    rng = random.Random(5)
    # 1-cube: reduces to the defining sum constraint
    S = random_valid_cube(MOD4, 1, rng)
    assert face_additivity_check(S, 1).valid
    # discrete cubes: exact equality
    S = random_valid_cube(DISC, 3, rng)
    for j in (1, 2, 3):
        assert face_additivity_check(S, j).valid
    # general 2-cubes with order-4 morphism values
    for _ in range(30):
        S = random_valid_cube(MOD4, 2, rng)
        for j in (1, 2):
            assert face_additivity_check(S, j).valid


def test_higher_coherence_valid_and_broken():
    rng = random.Random(9)
    for P in (LINES, MOD4):
        for n in (3, 4):
            S = random_valid_cube(P, n, rng)
            assert check_higher_coherence(S).valid
    S = random_valid_cube(LINES, 3, rng)
    key = (2, (0, 0))
    broken = Cube(LINES, 3, S.vertices,
                  {**S.structure, key: S.f(*key) + LINES.B.element([1])})
    assert not validate_cube(broken).valid
    assert not check_higher_coherence(broken).valid


def test_discrete_enumeration_count():
    P = PicardPresentation(Zmod(2), FGAbelianGroup(()))
    assert len(all_discrete_cubes(P, 1)) == 4
    assert len(all_discrete_cubes(P, 2)) == 16
    P0 = PicardPresentation(FGAbelianGroup(()), FGAbelianGroup(()))
    assert len(all_discrete_cubes(P0, 3)) == 1
