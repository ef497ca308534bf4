"""Exact integer linear algebra.

Finitely generated abelian groups in invariant-factor form, arbitrary
precision integer matrices, Smith normal form with transformation matrices,
chain complexes over Z and their homology.  Everything here is pure and
immutable after construction; no floating point anywhere.
"""

from __future__ import annotations

from .errors import DimensionMismatch, DimensionOutOfRange, NotAComplex
from .report import Report


def xgcd(a, b):
    # Extended Euclid with g >= 0: returns (x, y, g) with x*a + y*b == g.
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


class FGAbelianGroup:
    """A finitely generated abelian group as a list of invariant factors.

    Factor 0 encodes an infinite cyclic summand Z; factor d >= 2 encodes
    Z/d.  Factors equal to 1 are forbidden (they would be trivial summands
    and break canonicity).  Elements are coordinate lists, reduced mod the
    factor where it is nonzero.
    """

    __slots__ = ("invariant_factors",)

    def __init__(self, invariant_factors=()):
        factors = tuple(int(d) for d in invariant_factors)
        for d in factors:
            if d == 1 or d < 0:
                raise ValueError(f"invalid invariant factor {d}")
        self.invariant_factors = factors

    @property
    def rank(self):
        return len(self.invariant_factors)

    def is_finite(self):
        return all(d != 0 for d in self.invariant_factors)

    def order(self):
        if not self.is_finite():
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def reduce_coords(self, coords):
        if len(coords) != self.rank:
            raise DimensionMismatch(
                f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(
            c % d if d else int(c)
            for c, d in zip(coords, self.invariant_factors)
        )

    def element(self, coords):
        return GroupElement(self.reduce_coords(coords), self)

    def zero(self):
        return self.element([0] * self.rank)

    def generator(self, i):
        coords = [0] * self.rank
        coords[i] = 1
        return self.element(coords)

    def generators(self):
        return [self.generator(i) for i in range(self.rank)]

    def elements(self):
        """All elements, lexicographic in coordinates.  Finite groups only."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")

        def rec(i):
            if i == self.rank:
                yield ()
                return
            for rest in rec(i + 1):
                for c in range(self.invariant_factors[i]):
                    yield (c,) + rest

        # build lexicographically: vary the last coordinate fastest
        coords_list = [()]
        for d in self.invariant_factors:
            coords_list = [base + (c,) for base in coords_list for c in range(d)]
        return [GroupElement(c, self) for c in coords_list]

    def __eq__(self, other):
        return (isinstance(other, FGAbelianGroup)
                and self.invariant_factors == other.invariant_factors)

    def __hash__(self):
        return hash(self.invariant_factors)

    def __repr__(self):
        if not self.invariant_factors:
            return "FGAbelianGroup(0)"
        parts = ["Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts)


ZERO_GROUP = FGAbelianGroup(())
Z = FGAbelianGroup((0,))


def Zmod(*factors):
    return FGAbelianGroup(factors)


class GroupElement:
    """An element of an FGAbelianGroup, stored as reduced coordinates."""

    __slots__ = ("coords", "parent")

    def __init__(self, coords, parent):
        self.coords = tuple(coords)
        self.parent = parent

    def _check(self, other):
        if self.parent != other.parent:
            raise DimensionMismatch("elements of different groups")

    def __add__(self, other):
        self._check(other)
        return self.parent.element(
            [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return self.parent.element([-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n):
        return self.parent.element([n * a for a in self.coords])

    def __rmul__(self, n):
        return self.scale(n)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __eq__(self, other):
        return (isinstance(other, GroupElement)
                and self.parent == other.parent
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.coords, self.parent.invariant_factors))

    def __repr__(self):
        return f"({','.join(map(str, self.coords))})"


class IntMatrix:
    """Arbitrary precision integer matrix with sparse storage.

    Entries live in a dict keyed by (row, col); absent keys are zero.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise DimensionMismatch(f"entry ({i},{j}) out of range")
                if v:
                    self.entries[(i, j)] = int(v)

    @classmethod
    def from_rows(cls, data, cols=None):
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise DimensionMismatch("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = int(v)
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    def to_rows(self):
        data = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            data[i][j] = v
        return data

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __mul__(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        by_row = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(i, []).append((k, v))
        by_col = {}
        for (k, j), v in other.entries.items():
            by_col.setdefault(k, []).append((j, v))
        entries = {}
        for i, row in by_row.items():
            acc = {}
            for k, v in row:
                for j, w in by_col.get(k, ()):
                    acc[j] = acc.get(j, 0) + v * w
            for j, val in acc.items():
                if val:
                    entries[(i, j)] = val
        return IntMatrix(self.rows, other.cols, entries)

    def transpose(self):
        return IntMatrix(self.cols, self.rows,
                         {(j, i): v for (i, j), v in self.entries.items()})

    def is_zero(self):
        return not self.entries

    def is_diagonal(self):
        return all(i == j for (i, j) in self.entries)

    def column(self, j):
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def nonzero_count(self):
        return len(self.entries)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {len(self.entries)} nonzero)"


def determinant(M: IntMatrix):
    """Exact determinant via Bareiss fraction-free elimination."""
    if M.rows != M.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = [row[:] for row in M.to_rows()]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(M: IntMatrix):
    """Smith normal form D = U*M*V with U, V unimodular.

    Returns (D, U, V).  D is diagonal with d_i | d_{i+1} and d_i >= 0.
    Total function; the cost is cubic-ish with exact integers, which is
    fine at the matrix sizes this package produces for SNF (boundary
    matrices that get SNF'd are already degeneracy-reduced).
    """
    m, n = M.rows, M.cols
    a = [row[:] for row in M.to_rows()]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i1, i2, q):
        # row i2 -= q * row i1
        ai1, ai2 = a[i1], a[i2]
        for j in range(n):
            ai2[j] -= q * ai1[j]
        ui1, ui2 = u[i1], u[i2]
        for j in range(m):
            ui2[j] -= q * ui1[j]

    def col_op(j1, j2, q):
        # col j2 -= q * col j1
        for i in range(m):
            a[i][j2] -= q * a[i][j1]
        for i in range(n):
            v[i][j2] -= q * v[i][j1]

    def row_combine(i1, i2, x, y, xx, yy):
        # (row i1, row i2) <- (x*row i1 + y*row i2, xx*row i1 + yy*row i2)
        for mat, width in ((a, n), (u, m)):
            r1, r2 = mat[i1], mat[i2]
            for j in range(width):
                p, q = r1[j], r2[j]
                r1[j] = x * p + y * q
                r2[j] = xx * p + yy * q

    def col_combine(j1, j2, x, y, xx, yy):
        for mat, height in ((a, m), (v, n)):
            for i in range(height):
                p, q = mat[i][j1], mat[i][j2]
                mat[i][j1] = x * p + y * q
                mat[i][j2] = xx * p + yy * q

    def swap_rows(i1, i2):
        a[i1], a[i2] = a[i2], a[i1]
        u[i1], u[i2] = u[i2], u[i1]

    def swap_cols(j1, j2):
        for i in range(m):
            a[i][j1], a[i][j2] = a[i][j2], a[i][j1]
        for i in range(n):
            v[i][j1], v[i][j2] = v[i][j2], v[i][j1]

    t = 0
    while t < min(m, n):
        # find a pivot
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            # clear column t
            for i in range(t + 1, m):
                b = a[i][t]
                if not b:
                    continue
                p = a[t][t]
                if b % p == 0:
                    row_op(t, i, b // p)
                else:
                    x, y, g = xgcd(p, b)
                    row_combine(t, i, x, y, -(b // g), p // g)
            # clear row t
            dirty = False
            for j in range(t + 1, n):
                b = a[t][j]
                if not b:
                    continue
                p = a[t][t]
                if b % p == 0:
                    col_op(t, j, b // p)
                else:
                    x, y, g = xgcd(p, b)
                    col_combine(t, j, x, y, -(b // g), p // g)
                    dirty = True
            if not dirty and all(a[i][t] == 0 for i in range(t + 1, m)):
                break
        t += 1

    r = t
    # sign normalization
    for i in range(r):
        if a[i][i] < 0:
            for j in range(n):
                a[i][j] = -a[i][j]
            # negate row of a <-> negate row of u
            for j in range(m):
                u[i][j] = -u[i][j]

    # divisibility chain: fold non-dividing pairs together
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            p, q = a[i][i], a[i + 1][i + 1]
            if q % p != 0:
                changed = True
                # add col i+1 into col i, then re-clear the 2x2 block
                col_op(i + 1, i, -1)  # col i += col i+1
                x, y, g = xgcd(a[i][i], a[i + 1][i])
                row_combine(i, i + 1, x, y, -(a[i + 1][i] // g), a[i][i] // g)
                b = a[i][i + 1]
                if b:
                    col_op(i, i + 1, b // a[i][i])
                if a[i][i] < 0:
                    for j in range(n):
                        a[i][j] = -a[i][j]
                    for j in range(m):
                        u[i][j] = -u[i][j]
                if a[i + 1][i + 1] < 0:
                    for j in range(n):
                        a[i + 1][j] = -a[i + 1][j]
                    for j in range(m):
                        u[i + 1][j] = -u[i + 1][j]

    D = IntMatrix.from_rows(a, n)
    U = IntMatrix.from_rows(u, m)
    V = IntMatrix.from_rows(v, n)
    return D, U, V


def snf_diagonal(M: IntMatrix):
    D, _, _ = smith_normal_form(M)
    k = min(M.rows, M.cols)
    return [D[(i, i)] for i in range(k)]


def invariant_factors_of_quotient(M: IntMatrix):
    """Invariant factors of Z^cols / rowspace(M), canonical form.

    Torsion factors first (each > 1), then one 0 per free summand.
    """
    diag = snf_diagonal(M)
    rank_nonzero = sum(1 for d in diag if d != 0)
    torsion = [d for d in diag if d > 1]
    free = M.cols - rank_nonzero
    return tuple(torsion + [0] * free)


def cokernel(M: IntMatrix) -> FGAbelianGroup:
    """Z^cols modulo the subgroup spanned by the rows of M."""
    return FGAbelianGroup(invariant_factors_of_quotient(M))


def kernel_basis(M: IntMatrix):
    """Basis (list of integer vectors) of ker(M) acting on column vectors."""
    D, U, V = smith_normal_form(M)
    vrows = V.to_rows()
    rank = sum(1 for i in range(min(M.rows, M.cols)) if D[(i, i)] != 0)
    basis = []
    for j in range(rank, M.cols):
        basis.append([vrows[i][j] for i in range(M.cols)])
    return basis


class _SolveContext:
    """Reusable exact solver for N*y = b with N fixed."""

    def __init__(self, N: IntMatrix):
        self.N = N
        self.D, self.U, self.V = smith_normal_form(N)
        self.urows = self.U.to_rows()
        self.vrows = self.V.to_rows()
        self.rank = min(N.rows, N.cols)

    def solve(self, b):
        # y = V * z where z_i = (U b)_i / d_i
        m, n = self.N.rows, self.N.cols
        ub = [sum(self.urows[i][k] * b[k] for k in range(m)) for i in range(m)]
        z = [0] * n
        for i in range(min(m, n)):
            d = self.D[(i, i)]
            if d:
                if ub[i] % d != 0:
                    return None
                z[i] = ub[i] // d
            elif ub[i] != 0:
                return None
        for i in range(min(m, n), m):
            if ub[i] != 0:
                return None
        return [sum(self.vrows[i][k] * z[k] for k in range(n)) for i in range(n)]


def solve_integer(N: IntMatrix, b):
    """One integer solution y of N*y = b, or None."""
    return _SolveContext(N).solve(b)


class ChainComplexZ:
    """A chain complex of free Z-modules given by generator counts and
    boundary matrices; boundaries[k] maps level k+1 into level k.

    The d*d = 0 condition is checked at construction, not assumed.
    """

    __slots__ = ("levels", "boundaries")

    def __init__(self, levels, boundaries, check=True):
        self.levels = list(levels)
        self.boundaries = list(boundaries)
        if len(self.boundaries) != max(len(self.levels) - 1, 0):
            raise DimensionMismatch("need one boundary per adjacent level pair")
        for k, d in enumerate(self.boundaries):
            if d.rows != self.levels[k] or d.cols != self.levels[k + 1]:
                raise DimensionMismatch(f"boundary {k + 1} has shape "
                                        f"{d.rows}x{d.cols}")
        if check:
            for k in range(len(self.boundaries) - 1):
                if not (self.boundaries[k] * self.boundaries[k + 1]).is_zero():
                    raise NotAComplex(f"d_{k + 1} o d_{k + 2} != 0")

    def boundary(self, n):
        """The boundary map out of level n (into level n-1)."""
        return self.boundaries[n - 1]


def homology_at(C: ChainComplexZ, k) -> FGAbelianGroup:
    """H_k(C) = ker(d_k) / im(d_{k+1}) in invariant-factor form."""
    if k < 0 or k >= len(C.levels):
        raise DimensionOutOfRange(f"no level {k}")
    gk = C.levels[k]
    # kernel of the outgoing boundary
    if k == 0 or k - 1 >= len(C.boundaries):
        ker = [[1 if i == j else 0 for i in range(gk)] for j in range(gk)]
    else:
        ker = kernel_basis(C.boundaries[k - 1])
    if k < len(C.boundaries):
        dk1 = C.boundaries[k]
        if k >= 1:
            if not (C.boundaries[k - 1] * dk1).is_zero():
                raise NotAComplex(f"d_{k} o d_{k + 1} != 0")
    else:
        dk1 = None

    r = len(ker)
    if r == 0:
        return FGAbelianGroup(())
    if dk1 is None or dk1.is_zero():
        return FGAbelianGroup((0,) * r)

    # express each image column in kernel coordinates
    N = IntMatrix.from_rows([[ker[j][i] for j in range(r)] for i in range(gk)], r)
    ctx = _SolveContext(N)
    rows = []
    cols_by_j = {}
    for (i, j), v in dk1.entries.items():
        cols_by_j.setdefault(j, {})[i] = v
    seen = set()
    for j in sorted(cols_by_j):
        col = cols_by_j[j]
        key = tuple(sorted(col.items()))
        if key in seen:
            continue
        seen.add(key)
        b = [0] * gk
        for i, v in col.items():
            b[i] = v
        y = ctx.solve(b)
        if y is None:
            raise NotAComplex("image is not contained in the kernel")
        rows.append(y)
    if not rows:
        return FGAbelianGroup((0,) * r)
    rel = IntMatrix.from_rows(rows, r)
    return cokernel(rel)


class IntegerLattice:
    """Row lattice in Z^n maintained in row-echelon form with gcd pivots.

    add_vector reduces an incoming vector against the current basis and
    inserts the remainder if nonzero.  Vectors are plain int lists.
    """

    __slots__ = ("n", "rows", "pivots")

    def __init__(self, n):
        self.n = n
        self.rows = []    # echelon rows, pivot columns strictly increasing
        self.pivots = []  # pivot column of each row

    def add_vector(self, vec):
        v = list(vec)
        if len(v) != self.n:
            raise DimensionMismatch("vector length mismatch")
        i = 0
        j = 0
        while True:
            while j < self.n and v[j] == 0:
                j += 1
            if j == self.n:
                return False  # reduced to zero, lattice unchanged
            # find insertion point among pivots
            while i < len(self.rows) and self.pivots[i] < j:
                i += 1
            if i == len(self.rows) or self.pivots[i] > j:
                self.rows.insert(i, v)
                self.pivots.insert(i, j)
                self._rereduce_above(i)
                return True
            row = self.rows[i]
            a, b = row[j], v[j]
            if b % a == 0:
                q = b // a
                for k in range(j, self.n):
                    v[k] -= q * row[k]
            else:
                x, y, g = xgcd(a, b)
                mbg, ag = -(b // g), a // g
                for k in range(j, self.n):
                    rk, vk = row[k], v[k]
                    row[k] = x * rk + y * vk
                    v[k] = mbg * rk + ag * vk
                self._rereduce_above(i)

    def _rereduce_above(self, i):
        # keep entries above pivot i reduced mod the pivot (keeps growth down)
        j = self.pivots[i]
        p = self.rows[i][j]
        for r in range(i):
            q = self.rows[r][j] // p
            if q:
                row, prow = self.rows[r], self.rows[i]
                for k in range(j, self.n):
                    row[k] -= q * prow[k]

    def basis(self):
        return [row[:] for row in self.rows]

    def rank(self):
        return len(self.rows)

    def contains(self, vec):
        v = list(vec)
        i = 0
        j = 0
        while True:
            while j < self.n and v[j] == 0:
                j += 1
            if j == self.n:
                return True
            while i < len(self.rows) and self.pivots[i] < j:
                i += 1
            if i == len(self.rows) or self.pivots[i] > j:
                return False
            row = self.rows[i]
            if v[j] % row[j] != 0:
                return False
            q = v[j] // row[j]
            for k in range(j, self.n):
                v[k] -= q * row[k]


def quotient_by_lattice(kernel_rows, image_lattice: IntegerLattice):
    """Invariant factors of (span of kernel_rows) / image_lattice.

    The image must be contained in the span; each image basis row is solved
    in kernel coordinates and the cokernel of the coefficient matrix is
    returned.
    """
    r = len(kernel_rows)
    if r == 0:
        return FGAbelianGroup(())
    g = len(kernel_rows[0])
    N = IntMatrix.from_rows([[kernel_rows[j][i] for j in range(r)]
                             for i in range(g)], r)
    ctx = _SolveContext(N)
    rows = []
    for b in image_lattice.basis():
        y = ctx.solve(b)
        if y is None:
            raise NotAComplex("image is not contained in the kernel")
        rows.append(y)
    if not rows:
        return FGAbelianGroup((0,) * r)
    return cokernel(IntMatrix.from_rows(rows, r))


def group_hom_check(f: IntMatrix, src: FGAbelianGroup, dst: FGAbelianGroup) -> Report:
    """Does the coordinate matrix f define a homomorphism src -> dst?

    The matrix maps generator j of src to the column-j coordinates in dst;
    it is a homomorphism exactly when generator orders are respected:
    f(d_j * e_j) = 0 in dst.
    """
    rep = Report("group-hom-check")
    if f.rows != dst.rank or f.cols != src.rank:
        raise DimensionMismatch(
            f"matrix is {f.rows}x{f.cols}, expected {dst.rank}x{src.rank}")
    for j, d in enumerate(src.invariant_factors):
        if d == 0:
            rep.ok("order", f"generator {j}", "infinite order, no constraint")
            continue
        image = dst.element([d * f[(i, j)] for i in range(dst.rank)])
        if image.is_zero():
            rep.ok("order", f"generator {j}")
        else:
            rep.fail("order", f"generator {j}",
                     f"{d} * f(e_{j}) = {image} != 0 in {dst}")
    return rep
