"""The cube complex of a finite abelian group.

Level n of the free complex has one generator per n-cube over the discrete
presentation of A: the 2^n corner values determine every mixed vertex, so
there are |A|^(2^n) generators, enumerated lexicographically.  The boundary
is the alternating sum of the three face maps per direction with sign
(-1)^(i+alpha+1); degenerate generators (those in the image of a degeneracy
map, plus the basepoint cube at level 0) span a subcomplex, and homology is
taken on the quotient by eliminating degenerate generators.

Enumeration, faces and degeneracy detection are vectorized with numpy; all
homology arithmetic is exact (integer matrices and Smith form).
"""

from __future__ import annotations

import os

import numpy as np

from .errors import BudgetExceeded, MismatchedShape
from .groups import (
    FGAbelianGroup,
    IntMatrix,
    IntegerLattice,
    kernel_basis,
    quotient_by_lattice,
)
from .picard import PicardPresentation
from .report import Report
from .cubes import face, random_valid_cube

DEFAULT_LEVEL_BUDGET = 70000


def level_budget():
    env = os.environ.get("MULTIDET_BUDGET")
    return int(env) if env else DEFAULT_LEVEL_BUDGET


class DiscreteCubeLevels:
    """Vectorized enumeration of n-cubes over a finite abelian group.

    Cubes at level n are rows of an (N, 2^n) array of element indices
    (elements of A numbered lexicographically by coordinates, 0 = zero).
    Corner k of the row encodes the corner whose coordinate m is +1 exactly
    when bit (n - m) of k is set.
    """

    def __init__(self, A: FGAbelianGroup, max_level=4, budget=None):
        if not A.is_finite():
            raise MismatchedShape("cube enumeration needs a finite group")
        self.A = A
        self.q = A.order()
        self.budget = budget or level_budget()
        self.max_level = max_level
        self.elements = A.elements()  # lexicographic; index 0 is zero
        idx = {e.coords: i for i, e in enumerate(self.elements)}
        q = self.q
        add = np.zeros((q, q), dtype=np.int64)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                add[i, j] = idx[(x + y).coords]
        self.add = add
        self._tables = {}

    def count(self, n):
        return self.q ** (2 ** n)

    def within_budget(self, n):
        return self.count(n) <= self.budget

    def corner_table(self, n):
        """(N, 2^n) array of element indices for every level-n cube."""
        if n in self._tables:
            return self._tables[n]
        N = self.count(n)
        if N > self.budget:
            raise BudgetExceeded(
                f"level {n} needs {N} generators, budget {self.budget}")
        w = 2 ** n
        ranks = np.arange(N, dtype=np.int64)
        cols = []
        for k in range(w):
            power = self.q ** (w - 1 - k)
            cols.append((ranks // power) % self.q)
        table = np.stack(cols, axis=1) if cols else ranks.reshape(N, 0)
        self._tables[n] = table
        return table

    def rank_rows(self, table):
        """Inverse of corner_table: row -> generator index."""
        w = table.shape[1]
        out = np.zeros(table.shape[0], dtype=np.int64)
        for k in range(w):
            out = out * self.q + table[:, k]
        return out

    @staticmethod
    def _face_cols(n, j, bit):
        """Corner columns of the (j, bit) slice, in face-corner order."""
        cols = []
        for kprime in range(2 ** (n - 1)):
            high = kprime >> (n - j)
            low = kprime & ((1 << (n - j)) - 1)
            cols.append((high << (n - j + 1)) | (bit << (n - j)) | low)
        return np.array(cols, dtype=np.int64)

    def face_table(self, n, j, alpha, table=None):
        """Corner tables of the alpha-face in direction j of every row."""
        if table is None:
            table = self.corner_table(n)
        plus = self._face_cols(n, j, 1)
        minus = self._face_cols(n, j, 0)
        if alpha == 1:
            return table[:, plus]
        if alpha == -1:
            return table[:, minus]
        return self.add[table[:, plus], table[:, minus]]

    def degenerate_mask(self, n, table=None):
        """True where the row is a degenerate cube.

        Level 0: only the basepoint cube (the zero object) is collapsed.
        Level n >= 1: some signed slice in some direction is identically
        zero, i.e. the cube is the image of a degeneracy map.
        """
        if table is None:
            table = self.corner_table(n)
        if n == 0:
            return table[:, 0] == 0
        mask = np.zeros(table.shape[0], dtype=bool)
        for j in range(1, n + 1):
            for bit in (0, 1):
                cols = self._face_cols(n, j, bit)
                mask |= (table[:, cols] == 0).all(axis=1)
        return mask

    def cube_elements(self, n):
        """Corner values as tuples of group elements, generator order."""
        table = self.corner_table(n)
        return [tuple(self.elements[v] for v in row) for row in table]


def enumerate_cubes(A: FGAbelianGroup, n, budget=None):
    """All n-cubes over the discrete presentation of A, as corner tuples.

    Corner order matches cubes.corner_indices(n).  Count is |A|^(2^n).
    """
    levels = DiscreteCubeLevels(A, max_level=n, budget=budget)
    return levels.cube_elements(n)


def _signed_faces(n):
    # (-1)^(i+alpha+1): alpha in {-1,0,1} contributes signs -,+,- for odd i
    out = []
    for j in range(1, n + 1):
        for alpha in (-1, 0, 1):
            sign = (-1) ** (j + alpha + 1)
            out.append((j, alpha, sign))
    return out


class QComplex:
    """Levels and boundary matrices of the cube complex of a finite group.

    full_boundary(n) is the boundary on all generators; boundary(n) is the
    quotient-complex boundary on nondegenerate generators (degenerate
    targets projected away).  Both are exact integer matrices.
    """

    def __init__(self, base, max_level=4, budget=None, check=True):
        if isinstance(base, PicardPresentation):
            if not base.is_discrete():
                raise MismatchedShape(
                    "full enumeration requires a discrete presentation; "
                    "use sampled_boundary_square_check for general bases")
            A = base.A
        else:
            A = base
        self.A = A
        self.levels = DiscreteCubeLevels(A, max_level=max_level, budget=budget)
        self.max_level = max_level
        self._full = {}
        self._reduced = {}
        self._nondeg_index = {}
        if check:
            rep = self.check_degenerate_span()
            if not rep.valid and rep.status == "invalid":
                raise MismatchedShape("degenerate span not preserved")

    def available_levels(self):
        return [n for n in range(self.max_level + 1)
                if self.levels.within_budget(n)]

    def nondegenerate_indices(self, n):
        if n not in self._nondeg_index:
            mask = self.levels.degenerate_mask(n)
            keep = np.nonzero(~mask)[0]
            pos = -np.ones(self.levels.count(n), dtype=np.int64)
            pos[keep] = np.arange(len(keep))
            self._nondeg_index[n] = (keep, pos)
        return self._nondeg_index[n]

    def _boundary_triplets(self, n):
        """(rows, cols, signs) of the full boundary at level n."""
        table = self.levels.corner_table(n)
        N = table.shape[0]
        rows, cols, vals = [], [], []
        base_cols = np.arange(N, dtype=np.int64)
        for j, alpha, sign in _signed_faces(n):
            target = self.levels.rank_rows(self.levels.face_table(n, j, alpha,
                                                                  table))
            rows.append(target)
            cols.append(base_cols)
            vals.append(np.full(N, sign, dtype=np.int64))
        return (np.concatenate(rows), np.concatenate(cols),
                np.concatenate(vals))

    def full_boundary(self, n) -> IntMatrix:
        if n in self._full:
            return self._full[n]
        if n < 1:
            raise MismatchedShape("boundary starts at level 1")
        rows, cols, vals = self._boundary_triplets(n)
        entries = {}
        for r, c, v in zip(rows.tolist(), cols.tolist(), vals.tolist()):
            key = (r, c)
            entries[key] = entries.get(key, 0) + v
        entries = {k: v for k, v in entries.items() if v}
        M = IntMatrix(self.levels.count(n - 1), self.levels.count(n), entries)
        self._full[n] = M
        return M

    def boundary(self, n) -> IntMatrix:
        """Boundary of the degeneracy-reduced complex."""
        if n in self._reduced:
            return self._reduced[n]
        rows, cols, vals = self._boundary_triplets(n)
        keep_lo, pos_lo = self.nondegenerate_indices(n - 1)
        keep_hi, pos_hi = self.nondegenerate_indices(n)
        rr = pos_lo[rows]
        cc = pos_hi[cols]
        ok = (rr >= 0) & (cc >= 0)
        entries = {}
        for r, c, v in zip(rr[ok].tolist(), cc[ok].tolist(),
                           vals[ok].tolist()):
            key = (r, c)
            entries[key] = entries.get(key, 0) + v
        entries = {k: v for k, v in entries.items() if v}
        M = IntMatrix(len(keep_lo), len(keep_hi), entries)
        self._reduced[n] = M
        return M

    def check_boundary_squares(self, through_level=None) -> Report:
        """d(n-1) o d(n) == 0 on the full complex, exactly, per level."""
        rep = Report("qcomplex-boundary-squares")
        import scipy.sparse as sp
        top = through_level or self.max_level
        for n in range(2, top + 1):
            if not self.levels.within_budget(n):
                rep.skip("square", f"level {n}",
                         f"{self.levels.count(n)} generators over budget")
                continue
            a = self._to_scipy(self.full_boundary(n - 1))
            b = self._to_scipy(self.full_boundary(n))
            prod = a @ b
            prod.eliminate_zeros()
            loc = f"d{n - 1} o d{n}"
            if prod.nnz == 0:
                rep.ok("square", loc,
                       f"{self.levels.count(n)} columns")
            else:
                rep.fail("square", loc, f"{prod.nnz} nonzero entries")
            # quotient complex inherits the identity
            ra = self._to_scipy(self.boundary(n - 1)) if n >= 2 else None
            rb = self._to_scipy(self.boundary(n))
            if n >= 2 and ra is not None and ra.shape[1] == rb.shape[0]:
                rprod = ra @ rb
                rprod.eliminate_zeros()
                if rprod.nnz == 0:
                    rep.ok("square-reduced", loc)
                else:
                    rep.fail("square-reduced", loc,
                             f"{rprod.nnz} nonzero entries")
        return rep

    @staticmethod
    def _to_scipy(M: IntMatrix):
        import scipy.sparse as sp
        if not M.entries:
            return sp.csr_matrix((M.rows, M.cols), dtype=np.int64)
        items = list(M.entries.items())
        rows = np.array([k[0] for k, _ in items], dtype=np.int64)
        cols = np.array([k[1] for k, _ in items], dtype=np.int64)
        vals = np.array([v for _, v in items], dtype=np.int64)
        return sp.csr_matrix((vals, (rows, cols)), shape=(M.rows, M.cols))

    def check_degenerate_span(self, through_level=None) -> Report:
        """The boundary of a degenerate generator stays in the degenerate
        span: its nondegenerate coefficients all cancel."""
        rep = Report("qcomplex-degenerate-span")
        top = through_level or self.max_level
        for n in range(1, top + 1):
            if not self.levels.within_budget(n):
                rep.skip("span", f"level {n}", "over budget")
                continue
            table = self.levels.corner_table(n)
            deg_mask = self.levels.degenerate_mask(n, table)
            deg_rows = np.nonzero(deg_mask)[0]
            if len(deg_rows) == 0:
                rep.ok("span", f"level {n}", "no degenerate generators")
                continue
            sub = table[deg_rows]
            # accumulate signed coefficients of nondegenerate targets
            coeffs = {}
            for j, alpha, sign in _signed_faces(n):
                ft = self.levels.face_table(n, j, alpha, sub)
                tmask = self.levels.degenerate_mask(n - 1, ft)
                tr = self.levels.rank_rows(ft)
                live = np.nonzero(~tmask)[0]
                for i in live.tolist():
                    key = (i, int(tr[i]))
                    coeffs[key] = coeffs.get(key, 0) + sign
            leak = [k for k, v in coeffs.items() if v]
            if leak:
                rep.fail("span", f"level {n}",
                         f"{len(leak)} nondegenerate targets survive")
            else:
                rep.ok("span", f"level {n}",
                       f"{len(deg_rows)} degenerate generators checked")
        return rep

    def homology(self, k) -> FGAbelianGroup:
        """H_k of the quotient complex."""
        if k + 1 > self.max_level:
            raise BudgetExceeded(
                f"H_{k} needs level {k + 1} <= max_level {self.max_level}")
        d_out = self.boundary(k) if k >= 1 else None
        d_in = self.boundary(k + 1)
        g = d_in.rows
        if d_out is None:
            ker = [[1 if i == j else 0 for i in range(g)] for j in range(g)]
        else:
            ker = kernel_basis(d_out)
        lat = IntegerLattice(g)
        cols = {}
        for (r, c), v in d_in.entries.items():
            cols.setdefault(c, []).append((r, v))
        seen = set()
        for c in sorted(cols):
            col = tuple(sorted(cols[c]))
            if col in seen:
                continue
            seen.add(col)
            vec = [0] * g
            for r, v in col:
                vec[r] = v
            lat.add_vector(vec)
        return quotient_by_lattice(ker, lat)


def boundary_matrix(Q: QComplex, n) -> IntMatrix:
    """Quotient-complex boundary at level n (nondegenerate generators)."""
    return Q.boundary(n)


def q_homology(A: FGAbelianGroup, k, max_level=None, budget=None):
    """H_k of the cube complex of the finite abelian group A."""
    top = max_level if max_level is not None else max(k + 1, 2)
    Q = QComplex(A, max_level=top, budget=budget, check=False)
    return Q.homology(k)


def h0_presentation_oracle(A: FGAbelianGroup) -> FGAbelianGroup:
    """Independent H0 oracle: the group presented by one generator [x] per
    element with relations [x] + [z] - [x+z] and [0], solved by Smith form.

    This never touches the cube enumeration; it is the direct presentation
    reading of level <= 1.
    """
    elems = A.elements()
    index = {e.coords: i for i, e in enumerate(elems)}
    rows = []
    g = len(elems)
    for x in elems:
        for z in elems:
            row = [0] * g
            row[index[x.coords]] += 1
            row[index[z.coords]] += 1
            row[index[(x + z).coords]] -= 1
            rows.append(row)
    zero_row = [0] * g
    zero_row[index[A.zero().coords]] = 1
    rows.append(zero_row)
    from .groups import cokernel
    return cokernel(IntMatrix.from_rows(rows, g))


def induced_chain_map(phi_matrix: IntMatrix, src: FGAbelianGroup,
                      dst: FGAbelianGroup, n, budget=None):
    """Matrix of the map on level-n generators induced by a homomorphism.

    phi_matrix columns index src generators; the induced map sends a cube
    to the cube of imagewise corners.  Returns (full_src_to_dst matrix,
    src_levels, dst_levels) for chain-map tests.
    """
    src_lv = DiscreteCubeLevels(src, max_level=n, budget=budget)
    dst_lv = DiscreteCubeLevels(dst, max_level=n, budget=budget)

    def apply_phi(elt):
        coords = [0] * dst.rank
        for j, c in enumerate(elt.coords):
            for i in range(dst.rank):
                coords[i] += c * phi_matrix[(i, j)]
        return dst.element(coords)

    dst_index = {e.coords: i for i, e in enumerate(dst_lv.elements)}
    elt_map = np.array([dst_index[apply_phi(e).coords]
                        for e in src_lv.elements], dtype=np.int64)

    table = src_lv.corner_table(n)
    mapped = elt_map[table]
    targets = dst_lv.rank_rows(mapped)
    entries = {}
    for c, r in enumerate(targets.tolist()):
        entries[(r, c)] = entries.get((r, c), 0) + 1
    return (IntMatrix(dst_lv.count(n), src_lv.count(n), entries),
            src_lv, dst_lv)


def streamed_level_checks(A: FGAbelianGroup, n, sample_count, rng,
                          budget=None) -> Report:
    """Columnwise boundary-square and degenerate-span checks at a level too
    large to materialize.

    Samples generators (uniformly by rank) and degenerate generators (as
    degeneracy images of sampled lower cubes) and verifies, exactly, that
    the 9n(n-1) signed double faces cancel and that degenerate boundaries
    stay degenerate.  This trades exhaustiveness for feasibility above the
    level budget; within-budget levels should use QComplex directly.
    """
    rep = Report("qcomplex-streamed-level")
    lv = DiscreteCubeLevels(A, max_level=max(n - 1, 1), budget=budget)
    q = lv.q
    w = 2 ** n
    total = q ** w

    def corner_row(rank, width=w):
        row = np.zeros((1, width), dtype=np.int64)
        for k in range(width - 1, -1, -1):
            row[0, k] = rank % q
            rank //= q
        return row

    signed = _signed_faces(n)
    signed_lower = _signed_faces(n - 1)
    bad_square = 0
    for _ in range(sample_count):
        row = corner_row(rng.randrange(total))
        acc = {}
        for j, alpha, s1 in signed:
            f1 = lv.face_table(n, j, alpha, row)
            for i, beta, s2 in signed_lower:
                f2 = lv.face_table(n - 1, i, beta, f1)
                key = int(lv.rank_rows(f2)[0])
                acc[key] = acc.get(key, 0) + s1 * s2
        if any(acc.values()):
            bad_square += 1
    if bad_square:
        rep.fail("square-sampled", f"level {n}",
                 f"{bad_square}/{sample_count} samples fail to cancel")
    else:
        rep.ok("square-sampled", f"level {n}",
               f"{sample_count} sampled generators cancel exactly")

    lower_total = q ** (2 ** (n - 1))
    bad_span = 0
    span_samples = max(sample_count // 4, 1)
    for _ in range(span_samples):
        base = corner_row(rng.randrange(lower_total), width=2 ** (n - 1))
        j = rng.randrange(1, n + 1)
        bit = rng.choice((0, 1))
        # degeneracy image: insert a zero slice at (j, bit)
        plus_cols = DiscreteCubeLevels._face_cols(n, j, 1)
        minus_cols = DiscreteCubeLevels._face_cols(n, j, 0)
        row = np.zeros((1, w), dtype=np.int64)
        row[0, plus_cols if bit == 1 else minus_cols] = 0
        row[0, minus_cols if bit == 1 else plus_cols] = base[0]
        acc = {}
        for jj, alpha, s1 in signed:
            f1 = lv.face_table(n, jj, alpha, row)
            if bool(lv.degenerate_mask(n - 1, f1)[0]):
                continue
            key = int(lv.rank_rows(f1)[0])
            acc[key] = acc.get(key, 0) + s1
        if any(acc.values()):
            bad_span += 1
    if bad_span:
        rep.fail("span-sampled", f"level {n}",
                 f"{bad_span}/{span_samples} degenerate samples leak")
    else:
        rep.ok("span-sampled", f"level {n}",
               f"{span_samples} sampled degenerate generators stay "
               "in the degenerate span")
    return rep


def _cube_key(S):
    verts = tuple(sorted((idx, v.coords) for idx, v in S.vertices.items()))
    struct = tuple(sorted(((i, r), v.coords)
                          for (i, r), v in S.structure.items()))
    return (verts, struct)


def sampled_boundary_square_check(P: PicardPresentation, n, sample_budget=200,
                                  rng=None) -> Report:
    """Signed double faces of sampled cubes cancel exactly.

    For each sampled valid n-cube the 9n(n-1) iterated faces are collected
    with the boundary signs; the face relations make the multiset cancel
    cube-by-cube (strict cube equality), which is what is verified here.
    Levels below 2 are a vacuous pass.
    """
    rep = Report("sampled-boundary-square")
    if n < 2:
        rep.skip("square", f"level {n}", "no double boundary below level 2")
        return rep
    import random as _random
    rng = rng or _random.Random(0)
    for trial in range(sample_budget):
        S = random_valid_cube(P, n, rng)
        acc = {}
        for j, alpha, s1 in _signed_faces(n):
            F1 = face(S, j, alpha)
            for i, beta, s2 in _signed_faces(n - 1):
                F2 = face(F1, i, beta)
                key = _cube_key(F2)
                acc[key] = acc.get(key, 0) + s1 * s2
        residue = {k: v for k, v in acc.items() if v}
        if residue:
            rep.fail("square", f"sample {trial}",
                     f"{len(residue)} classes fail to cancel")
    if not rep.failures:
        rep.ok("square", f"n={n}", f"{sample_budget} samples cancel")
    return rep
