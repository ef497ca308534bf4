"""Cubes over a Picard presentation.

An n-cube assigns an object to every index in {-1,0,1}^n together with one
structure value f_i(r) in B for each direction i and residual index r,
witnessing S(..1..) + S(..-1..) -> S(..0..).  Validity means every such
triple satisfies the sum constraint in A and every pair of directions
satisfies the pentagon (with the interchange c-term on the path through
the reordered corners).

Index convention: directions are 1-based; a residual index for direction i
is the tuple of the other n-1 coordinates in direction order.
"""

from __future__ import annotations

import itertools

from .errors import (
    DimensionOutOfRange,
    InfiniteDomainWithoutSampleBudget,
    MismatchedShape,
)
from .picard import PicardPresentation, reorder_value
from .report import Report

COORDS = (-1, 0, 1)


def cube_indices(n):
    """All of {-1,0,1}^n in lexicographic order."""
    return list(itertools.product(COORDS, repeat=n))


def corner_indices(n):
    return list(itertools.product((-1, 1), repeat=n))


def insert_at(tup, pos, val):
    """Insert val so it becomes coordinate `pos` (1-based direction)."""
    return tup[:pos - 1] + (val,) + tup[pos - 1:]


def remove_at(tup, pos):
    return tup[:pos - 1] + tup[pos:]


class Cube:
    __slots__ = ("P", "n", "vertices", "structure")

    def __init__(self, P: PicardPresentation, n, vertices, structure):
        self.P = P
        self.n = n
        self.vertices = dict(vertices)
        self.structure = dict(structure)
        want = set(cube_indices(n))
        if set(self.vertices) != want:
            raise MismatchedShape("vertex table does not cover the index cube")
        want_f = {(i, r) for i in range(1, n + 1)
                  for r in itertools.product(COORDS, repeat=n - 1)}
        if set(self.structure) != want_f:
            raise MismatchedShape("structure table has wrong key set")

    def v(self, idx):
        return self.vertices[tuple(idx)]

    def f(self, i, residual):
        return self.structure[(i, tuple(residual))]

    def __eq__(self, other):
        return (isinstance(other, Cube) and self.n == other.n
                and self.P is other.P
                and self.vertices == other.vertices
                and self.structure == other.structure)

    def __repr__(self):
        return f"Cube(n={self.n}, P={self.P.name})"


def zero_cube(P, n):
    za, zb = P.A.zero(), P.B.zero()
    verts = {idx: za for idx in cube_indices(n)}
    struct = {(i, r): zb for i in range(1, n + 1)
              for r in itertools.product(COORDS, repeat=n - 1)}
    return Cube(P, n, verts, struct)


def cube_from_corners(P, n, corner_values, structure=None):
    """Build a cube whose mixed vertices are forced by the sum constraints.

    corner_values maps {-1,1}^n tuples to A-elements.  The value at a mixed
    index is the sum of the corner values over all sign-resolutions of its
    zero coordinates.  For a discrete presentation the zero structure table
    is the unique choice; otherwise pass one or default to zeros.
    """
    verts = {}
    for idx in cube_indices(n):
        zero_slots = [k for k, a in enumerate(idx) if a == 0]
        total = P.A.zero()
        for signs in itertools.product((-1, 1), repeat=len(zero_slots)):
            corner = list(idx)
            for k, s in zip(zero_slots, signs):
                corner[k] = s
            total = total + corner_values[tuple(corner)]
        verts[idx] = total
    if structure is None:
        zb = P.B.zero()
        structure = {(i, r): zb for i in range(1, n + 1)
                     for r in itertools.product(COORDS, repeat=n - 1)}
    return Cube(P, n, verts, structure)


def cube1(P, x, z, y=None, f=None):
    """1-cube x -- y -- z; y defaults to x + z, f to zero."""
    if y is None:
        y = x + z
    if f is None:
        f = P.B.zero()
    return Cube(P, 1, {(-1,): x, (0,): y, (1,): z}, {(1, ()): f})


def _pentagon_sides(S, i, j, s):
    def res_i(aj):
        return insert_at(s, j - 1, aj)

    def res_j(ai):
        return insert_at(s, i, ai)

    def vert(ai, aj):
        return S.v(insert_at(insert_at(s, i, ai), j, aj))

    lhs = S.f(i, res_i(1)) + S.f(i, res_i(-1)) + S.f(j, res_j(0))
    lam = S.P.c(vert(-1, 1), vert(1, -1))
    rhs = lam + S.f(j, res_j(1)) + S.f(j, res_j(-1)) + S.f(i, res_i(0))
    return lhs, rhs


def validate_cube(S: Cube) -> Report:
    """Sum constraints along every direction plus all pentagons."""
    rep = Report("check-cube")
    n = S.n
    for i in range(1, n + 1):
        for r in itertools.product(COORDS, repeat=n - 1):
            plus = S.v(insert_at(r, i, 1))
            minus = S.v(insert_at(r, i, -1))
            mid = S.v(insert_at(r, i, 0))
            loc = f"dir {i} residual {r}"
            if plus + minus == mid:
                rep.ok("sum", loc)
            else:
                rep.fail("sum", loc, f"{plus}+{minus} != {mid}")
    for i, j in itertools.combinations(range(1, n + 1), 2):
        for s in itertools.product(COORDS, repeat=n - 2):
            lhs, rhs = _pentagon_sides(S, i, j, s)
            loc = f"pair ({i},{j}) residual {s}"
            if lhs == rhs:
                rep.ok("pentagon", loc)
            else:
                rep.fail("pentagon", loc, f"{lhs} != {rhs}")
    if n == 0:
        rep.ok("sum", "0-cube", "nothing to check")
    return rep


def face(S: Cube, j, alpha) -> Cube:
    """The (n-1)-cube obtained by fixing coordinate j to alpha."""
    n = S.n
    if not (1 <= j <= n):
        raise DimensionOutOfRange(f"face direction {j} not in 1..{n}")
    if alpha not in COORDS:
        raise DimensionOutOfRange(f"face position {alpha}")
    verts = {}
    for idx in cube_indices(n - 1):
        verts[idx] = S.v(insert_at(idx, j, alpha))
    struct = {}
    for i_new in range(1, n):
        i_old = i_new if i_new < j else i_new + 1
        for r_new in itertools.product(COORDS, repeat=n - 2):
            # residual of i_old in the old cube: other old coords in order.
            # The new residual holds coords of old directions != i_old, j;
            # reinsert alpha at j's position among directions != i_old.
            j_pos = j if j < i_old else j - 1
            r_old = insert_at(r_new, j_pos, alpha)
            struct[(i_new, r_new)] = S.f(i_old, r_old)
    return Cube(S.P, n - 1, verts, struct)


def degeneracy(S: Cube, j, alpha) -> Cube:
    """The (n+1)-cube inserting a degenerate direction j at value alpha.

    Vertices with coordinate j equal to alpha are zero; others copy S.
    Structure values touching a zero slice are zero (the canonical x+0 -> x
    is the identity of the skeletal model); the rest copy S.
    """
    n = S.n
    if not (1 <= j <= n + 1):
        raise DimensionOutOfRange(f"degeneracy direction {j} not in 1..{n + 1}")
    if alpha not in (-1, 1):
        raise DimensionOutOfRange("degeneracy position must be -1 or 1")
    za, zb = S.P.A.zero(), S.P.B.zero()
    verts = {}
    for idx in cube_indices(n + 1):
        if idx[j - 1] == alpha:
            verts[idx] = za
        else:
            verts[idx] = S.v(remove_at(idx, j))
    struct = {}
    for i in range(1, n + 2):
        for r in itertools.product(COORDS, repeat=n):
            if i == j:
                struct[(i, r)] = zb
                continue
            i_old = i if i < j else i - 1
            j_pos = j if j < i else j - 1
            aj = r[j_pos - 1]
            if aj == alpha:
                struct[(i, r)] = zb
            else:
                struct[(i, r)] = S.f(i_old, remove_at(r, j_pos))
    return Cube(S.P, n + 1, verts, struct)


def add_cubes(S: Cube, T: Cube) -> Cube:
    """Vertexwise sum with the interchange correction on structure values.

    f_(S+T)(i, r) = f_S + f_T + c(T(..1..), S(..-1..)): the correction is
    the value of the reordering (S1+T1)+(S-1+T-1) -> (S1+S-1)+(T1+T-1).
    """
    if S.n != T.n or S.P is not T.P:
        raise MismatchedShape("cubes of different shape or presentation")
    n = S.n
    verts = {idx: S.v(idx) + T.v(idx) for idx in cube_indices(n)}
    struct = {}
    for i in range(1, n + 1):
        for r in itertools.product(COORDS, repeat=n - 1):
            corr = S.P.c(T.v(insert_at(r, i, 1)), S.v(insert_at(r, i, -1)))
            struct[(i, r)] = S.f(i, r) + T.f(i, r) + corr
    return Cube(S.P, n, verts, struct)


def face_additivity_check(S: Cube, j) -> Report:
    """Compare the two outer faces' sum against the middle face.

    Vertex tables must agree on the nose; the structure discrepancy must be
    absorbed by the canonical morphism built from the f_j slices, i.e. the
    f_j family is a morphism of cubes d1 + d-1 -> d0.
    """
    rep = Report("face-additivity")
    if not (1 <= j <= S.n):
        raise DimensionOutOfRange(f"direction {j}")
    U = add_cubes(face(S, j, 1), face(S, j, -1))
    V = face(S, j, 0)
    for idx in cube_indices(S.n - 1):
        loc = f"vertex {idx}"
        if U.v(idx) == V.v(idx):
            rep.ok("vertices", loc)
        else:
            rep.fail("vertices", loc, f"{U.v(idx)} != {V.v(idx)}")

    def phi(idx):
        # morphism component at idx: the f_j value at that residual
        return S.f(j, idx)

    n1 = S.n - 1
    if n1 == 0:
        rep.ok("structure", "0-cube", "no structure to compare")
        return rep
    for i in range(1, n1 + 1):
        for r in itertools.product(COORDS, repeat=n1 - 1):
            lhs = V.f(i, r) + phi(insert_at(r, i, 1)) + phi(insert_at(r, i, -1))
            rhs = phi(insert_at(r, i, 0)) + U.f(i, r)
            loc = f"dir {i} residual {r}"
            if lhs == rhs:
                rep.ok("structure", loc)
            else:
                rep.fail("structure", loc, f"morphism defect {lhs - rhs}")
    return rep


def _decomposition_value(S: Cube, order):
    """Total structure value of the full binary decomposition of the
    central vertex along the given direction order."""
    n = S.n
    total = S.P.B.zero()
    for k, direction in enumerate(order):
        decided = order[:k]
        for signs in itertools.product((1, -1), repeat=k):
            # residual of `direction`: decided dirs carry signs, rest zero
            coords = [0] * n
            for d, s in zip(decided, signs):
                coords[d - 1] = s
            residual = tuple(coords[m] for m in range(n) if m != direction - 1)
            total = total + S.f(direction, residual)
    return total


def _leaf_sequence(order, n):
    """Corner indices in the order the decomposition along `order` lists
    them (at each step the +1 block precedes the -1 block)."""
    seqs = [()]
    for _ in order:
        seqs = [s + (sign,) for s in seqs for sign in (1, -1)]
    leaves = []
    for s in seqs:
        coords = [0] * n
        for d, sign in zip(order, s):
            coords[d - 1] = sign
        leaves.append(tuple(coords))
    return leaves


def check_higher_coherence(S: Cube) -> Report:
    """All decompositions of the central vertex agree.

    For every direction order, the accumulated structure value minus the
    reordering value of its corner arrangement must be independent of the
    order.  For a valid cube this is automatic; the check exists so that a
    deliberately broken pentagon is observable as a path mismatch.
    """
    rep = Report("check-higher-coherence")
    n = S.n
    if n not in (2, 3, 4):
        raise DimensionOutOfRange("coherence check supports dimensions 2..4")
    orders = list(itertools.permutations(range(1, n + 1)))
    ref_order = orders[0]
    ref_leaves = _leaf_sequence(ref_order, n)
    leaf_pos = {leaf: k for k, leaf in enumerate(ref_leaves)}
    values = [S.v(leaf) for leaf in ref_leaves]
    ref_total = _decomposition_value(S, ref_order)

    for order in orders[1:]:
        total = _decomposition_value(S, order)
        target = [leaf_pos[leaf] for leaf in _leaf_sequence(order, n)]
        lam = reorder_value(S.P, values, target)
        loc = f"order {order}"
        if total - lam == ref_total:
            rep.ok("path", loc)
        else:
            rep.fail("path", loc,
                     f"path value {total - lam} != reference {ref_total}")
    return rep


def random_valid_cube(P, n, rng, coord_range=3):
    """A pseudorandom valid cube: recursively a 1-cube of (n-1)-cubes with
    a random morphism gauge on top (gauge shifts preserve validity)."""

    def random_obj():
        coords = []
        for d in P.A.invariant_factors:
            coords.append(rng.randrange(d) if d else
                          rng.randint(-coord_range, coord_range))
        return P.A.element(coords)

    def random_mor():
        coords = []
        for d in P.B.invariant_factors:
            coords.append(rng.randrange(d) if d else
                          rng.randint(-coord_range, coord_range))
        return P.B.element(coords)

    if n == 0:
        return Cube(P, 0, {(): random_obj()}, {})
    if n == 1:
        return cube1(P, random_obj(), random_obj(), f=random_mor())
    upper = random_valid_cube(P, n - 1, rng, coord_range)
    lower = random_valid_cube(P, n - 1, rng, coord_range)
    middle = add_cubes(upper, lower)
    verts = {}
    struct = {}
    for idx in cube_indices(n - 1):
        verts[(1,) + idx] = upper.v(idx)
        verts[(-1,) + idx] = lower.v(idx)
        verts[(0,) + idx] = middle.v(idx)
    zb = P.B.zero()
    for r in itertools.product(COORDS, repeat=n - 1):
        struct[(1, r)] = zb
    for i in range(1, n):
        for r in itertools.product(COORDS, repeat=n - 2):
            struct[(i + 1, (1,) + r)] = upper.f(i, r)
            struct[(i + 1, (-1,) + r)] = lower.f(i, r)
            struct[(i + 1, (0,) + r)] = middle.f(i, r)
    S = Cube(P, n, verts, struct)
    # random gauge: shift by the coboundary of a vertex-indexed B-function
    gauge = {idx: random_mor() for idx in cube_indices(n)}
    struct2 = {}
    for i in range(1, n + 1):
        for r in itertools.product(COORDS, repeat=n - 1):
            shift = (gauge[insert_at(r, i, 1)] + gauge[insert_at(r, i, -1)]
                     - gauge[insert_at(r, i, 0)])
            struct2[(i, r)] = S.f(i, r) + shift
    return Cube(P, n, verts, struct2)


def all_discrete_cubes(P, n):
    """Every n-cube over a finite discrete presentation (B trivial)."""
    if not P.is_discrete() or not P.A.is_finite():
        raise MismatchedShape("exhaustive cube enumeration needs a finite "
                              "discrete presentation")
    corners = corner_indices(n)
    out = []
    for assignment in itertools.product(P.A.elements(), repeat=len(corners)):
        table = dict(zip(corners, assignment))
        out.append(cube_from_corners(P, n, table))
    return out


def check_cubical_relations(P, rng=None, sample_budget=200, max_n=3) -> Report:
    """Verify the face/face, degeneracy/degeneracy and face/degeneracy
    relation families on a battery of cubes of dimension <= max_n.

    Discrete small presentations are checked exhaustively; otherwise the
    battery is sampled from the valid-cube generator.
    """
    rep = Report("check-cubical-relations")
    battery = []
    exhaustive = (P.is_discrete() and P.A.is_finite()
                  and P.A.order() ** (2 ** max_n) <= 8192)
    if exhaustive:
        for n in range(0, max_n + 1):
            if P.A.order() ** (2 ** n) > 8192:
                break
            battery.extend(all_discrete_cubes(P, n))
    else:
        if rng is None:
            raise InfiniteDomainWithoutSampleBudget(
                "sampling the relation battery needs an rng")
        per_dim = max(1, sample_budget // max(max_n, 1))
        for n in range(0, max_n + 1):
            for _ in range(per_dim):
                battery.append(random_valid_cube(P, n, rng))

    counts = {"dd": 0, "ss": 0, "ds": 0}
    for S in battery:
        n = S.n
        # face-face
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                for a in COORDS:
                    for b in COORDS:
                        left = face(face(S, j, b), i, a)
                        right = face(face(S, i, a), j - 1, b)
                        counts["dd"] += 1
                        if left != right:
                            rep.fail("face-face",
                                     f"n={n} d{i}^{a} d{j}^{b}",
                                     "results differ")
        # degeneracy-degeneracy
        for i in range(1, n + 2):
            for j in range(i + 1, n + 3):
                for a in (-1, 1):
                    for b in (-1, 1):
                        left = degeneracy(degeneracy(S, i, a), j, b)
                        right = degeneracy(degeneracy(S, j - 1, b), i, a)
                        counts["ss"] += 1
                        if left != right:
                            rep.fail("deg-deg",
                                     f"n={n} s{j}_{b} s{i}_{a}",
                                     "results differ")
        # face-degeneracy
        for j in range(1, n + 2):
            for b in (-1, 1):
                T = degeneracy(S, j, b)
                for i in range(1, n + 2):
                    for a in COORDS:
                        got = face(T, i, a)
                        if i < j:
                            want = degeneracy(face(S, i, a), j - 1, b)
                        elif i == j and a != b:
                            want = S
                        elif i == j:
                            want = zero_cube(P, n)
                        else:
                            want = degeneracy(face(S, i - 1, a), j, b)
                        counts["ds"] += 1
                        if got != want:
                            rep.fail("face-deg",
                                     f"n={n} d{i}^{a} s{j}_{b}",
                                     "results differ")
    mode = "exhaustive" if exhaustive else f"sampled({len(battery)})"
    if not rep.failures:
        rep.ok("relations",
               f"{mode}: dd={counts['dd']} ss={counts['ss']} ds={counts['ds']}")
    return rep
