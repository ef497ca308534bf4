"""Finite presentations of triangulated categories.

A presentation is a closed world: a finite object set with a designated
zero and a shift bijection, a partial groupoid of isomorphisms, a list of
triangles (x, y, z) with optional morphism labels, a sum table giving the
two canonical split triangles per pair, octahedra (four triangle references
in the standard layout), and 3x3 diagrams with Verdier certificates.
Checks verify the supplied data only; nothing is completed or searched
for.

Octahedron layout: an octahedron on objects (a, b, c, a', b', c') consists
of the four triangles
    d1: a -> b -> c'      d2: a -> c -> b'
    d3: b -> c -> a'      d4: c' -> b' -> a'
A Verdier certificate for a 3x3 diagram with rows R1 R2 R3 and columns
C1 C2 C3 is an apex object A with three octahedra o1, o2, o3 such that
    o1 = (C1, (x', y, A), R2, (x'', A, z))
    o2 = (R1,  same second triangle as o1, C2, (z', A, y''))
    o3 = (same fourth triangle as o1, R3, (A, y'', Sz'), rot C3)
in grid coordinates x' y' z' / x y z / x'' y'' z''; rot C3 means the
object-level rotation (z, z'', shift z').
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    MissingCertificate,
    MissingVerdierCertificate,
    UnresolvedReference,
)
from .report import Report


@dataclass(frozen=True)
class Triangle:
    id: str
    x: str
    y: str
    z: str
    f: str | None = None  # morphism labels, optional
    g: str | None = None
    h: str | None = None

    @property
    def objects(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Iso:
    id: str
    src: str
    dst: str
    inv: str


@dataclass(frozen=True)
class TriangleIso:
    id: str
    src_tri: str
    dst_tri: str
    ix: str
    iy: str
    iz: str


@dataclass(frozen=True)
class Octahedron:
    id: str
    d1: str
    d2: str
    d3: str
    d4: str

    def triangle_ids(self):
        return (self.d1, self.d2, self.d3, self.d4)


@dataclass(frozen=True)
class NineDiagram:
    id: str
    grid: tuple  # 3x3 tuple of object ids
    rows: tuple  # 3 triangle ids
    cols: tuple  # 3 triangle ids
    anticommute: bool = True


@dataclass(frozen=True)
class VerdierCertificate:
    diagram: str
    apex: str
    o1: str
    o2: str
    o3: str


@dataclass(frozen=True)
class SumEntry:
    left: str
    right: str
    sum: str
    tri1: str  # left -> sum -> right
    tri2: str  # right -> sum -> left


@dataclass
class TriCube:
    """An n-cube in a triangulated presentation, n <= 2."""
    n: int
    payload: str  # object id, triangle id, or nine-diagram id


class TriangPresentation:
    def __init__(self, name="T"):
        self.name = name
        self.objects = []
        self.zero = None
        self.shift = {}
        self.isos = {}
        self.composition = {}   # (later_id, first_id) -> result_id
        self.triangles = {}
        self.triangle_isos = {}
        self.sums = {}          # (left, right) -> SumEntry
        self.octahedra = {}
        self.nine_diagrams = {}
        self.verdier_certificates = {}
        self.meta = {}

    # -- construction -----------------------------------------------------
    def add_object(self, obj_id, is_zero=False):
        if obj_id in self.objects:
            raise ValueError(f"duplicate object {obj_id}")
        self.objects.append(obj_id)
        ident = Iso(f"id|{obj_id}", obj_id, obj_id, f"id|{obj_id}")
        self.isos[ident.id] = ident
        if is_zero:
            self.zero = obj_id
        return obj_id

    def identity(self, obj_id):
        return f"id|{obj_id}"

    def add_iso(self, iso_id, src, dst, inv=None):
        self.isos[iso_id] = Iso(iso_id, src, dst, inv or iso_id)
        return iso_id

    def add_triangle(self, tri_id, x, y, z, f=None, g=None, h=None):
        self.triangles[tri_id] = Triangle(tri_id, x, y, z, f, g, h)
        return tri_id

    def add_triangle_iso(self, ti_id, src_tri, dst_tri, ix, iy, iz):
        self.triangle_isos[ti_id] = TriangleIso(ti_id, src_tri, dst_tri,
                                                ix, iy, iz)
        return ti_id

    def add_sum(self, left, right, sum_obj, tri1, tri2):
        self.sums[(left, right)] = SumEntry(left, right, sum_obj, tri1, tri2)

    def add_octahedron(self, oct_id, d1, d2, d3, d4):
        self.octahedra[oct_id] = Octahedron(oct_id, d1, d2, d3, d4)
        return oct_id

    def add_nine_diagram(self, nd_id, grid, rows, cols, anticommute=True):
        grid = tuple(tuple(r) for r in grid)
        self.nine_diagrams[nd_id] = NineDiagram(nd_id, grid, tuple(rows),
                                                tuple(cols), anticommute)
        return nd_id

    def add_certificate(self, diagram, apex, o1, o2, o3):
        self.verdier_certificates[diagram] = VerdierCertificate(
            diagram, apex, o1, o2, o3)

    # -- lookup helpers ----------------------------------------------------
    def triangle(self, tri_id) -> Triangle:
        try:
            return self.triangles[tri_id]
        except KeyError:
            raise UnresolvedReference(f"triangle {tri_id} in {self.name}")

    def find_triangles(self, x, y, z):
        return [t for t in self.triangles.values()
                if t.objects == (x, y, z)]

    def find_or_add_triangle(self, x, y, z, prefix="T"):
        found = self.find_triangles(x, y, z)
        if found:
            return found[0].id
        tri_id = f"{prefix}|{x}|{y}|{z}"
        k = 0
        while tri_id in self.triangles:
            k += 1
            tri_id = f"{prefix}|{x}|{y}|{z}#{k}"
        return self.add_triangle(tri_id, x, y, z)

    def find_or_add_octahedron(self, d1, d2, d3, d4, prefix="O"):
        for o in self.octahedra.values():
            if o.triangle_ids() == (d1, d2, d3, d4):
                return o.id
        oct_id = f"{prefix}[{d1};{d2};{d3};{d4}]"
        return self.add_octahedron(oct_id, d1, d2, d3, d4)

    def oct_shape(self, oct_id):
        """The six objects (a, b, c, a', b', c') of an octahedron, or None
        if the four triangles do not share objects per the layout."""
        o = self.octahedra[oct_id]
        t1, t2, t3, t4 = (self.triangle(i) for i in o.triangle_ids())
        a, b, cp = t1.objects
        if t2.x != a or t3.x != b:
            return None
        c, bp = t2.y, t2.z
        if t3.y != c:
            return None
        ap = t3.z
        if t4.objects != (cp, bp, ap) or t1.z != cp:
            return None
        return (a, b, c, ap, bp, cp)

    def __repr__(self):
        return (f"TriangPresentation({self.name}: {len(self.objects)} objects, "
                f"{len(self.triangles)} triangles, "
                f"{len(self.octahedra)} octahedra, "
                f"{len(self.nine_diagrams)} diagrams)")


def validate_presentation(T: TriangPresentation) -> Report:
    rep = Report("validate-presentation")
    objs = set(T.objects)
    if T.zero is None or T.zero not in objs:
        rep.fail("zero", "presentation", "no designated zero object")
    if set(T.shift) != objs or set(T.shift.values()) != objs:
        rep.fail("shift", "presentation", "shift is not a bijection on objects")
    else:
        rep.ok("shift", "bijection")

    # iso groupoid
    for iso in T.isos.values():
        loc = f"iso {iso.id}"
        if iso.src not in objs or iso.dst not in objs:
            rep.fail("iso-endpoints", loc, "unknown endpoint")
            continue
        inv = T.isos.get(iso.inv)
        if inv is None:
            rep.fail("iso-inverse", loc, f"inverse {iso.inv} not listed")
        elif (inv.src, inv.dst) != (iso.dst, iso.src) or inv.inv != iso.id:
            rep.fail("iso-inverse", loc, "inverse endpoints inconsistent")
        else:
            rep.ok("iso-inverse", loc)
    for (g_id, f_id), r_id in T.composition.items():
        loc = f"comp ({g_id} o {f_id})"
        g, f = T.isos.get(g_id), T.isos.get(f_id)
        r = T.isos.get(r_id)
        if not g or not f or not r:
            rep.fail("comp-ref", loc, "unknown morphism")
            continue
        if f.dst != g.src or (r.src, r.dst) != (f.src, g.dst):
            rep.fail("comp-endpoints", loc, "endpoints do not match")
        else:
            rep.ok("comp-endpoints", loc)
    # associativity on listed composable triples with listed composites
    comp = T.composition
    for (g_id, f_id), gf in comp.items():
        for (h_id, g2_id), hg in comp.items():
            if g2_id != g_id:
                continue
            left = comp.get((h_id, gf))
            right = comp.get((hg, f_id))
            if left is not None and right is not None and left != right:
                rep.fail("comp-assoc", f"({h_id},{g_id},{f_id})",
                         f"{left} != {right}")

    for tri in T.triangles.values():
        loc = f"triangle {tri.id}"
        if any(o not in objs for o in tri.objects):
            rep.fail("triangle-objects", loc, "unknown object")
        else:
            rep.ok("triangle-objects", loc)

    for ti in T.triangle_isos.values():
        loc = f"triangle-iso {ti.id}"
        try:
            src, dst = T.triangle(ti.src_tri), T.triangle(ti.dst_tri)
        except UnresolvedReference as exc:
            rep.fail("triangle-iso-ref", loc, str(exc))
            continue
        ok = True
        for comp_id, (s, d) in ((ti.ix, (src.x, dst.x)),
                                (ti.iy, (src.y, dst.y)),
                                (ti.iz, (src.z, dst.z))):
            iso = T.isos.get(comp_id)
            if iso is None or (iso.src, iso.dst) != (s, d):
                rep.fail("triangle-iso-component", f"{loc} / {comp_id}",
                         "component endpoints mismatch")
                ok = False
        if ok:
            rep.ok("triangle-iso-component", loc)

    for (left, right), entry in T.sums.items():
        loc = f"sum ({left},{right})"
        try:
            t1, t2 = T.triangle(entry.tri1), T.triangle(entry.tri2)
        except UnresolvedReference as exc:
            rep.fail("sum-ref", loc, str(exc))
            continue
        if t1.objects != (left, entry.sum, right):
            rep.fail("sum-tri1", loc, f"{t1.objects} != "
                     f"{(left, entry.sum, right)}")
        elif t2.objects != (right, entry.sum, left):
            rep.fail("sum-tri2", loc, f"{t2.objects} != "
                     f"{(right, entry.sum, left)}")
        else:
            rep.ok("sum-entry", loc)

    for oct_id in T.octahedra:
        loc = f"octahedron {oct_id}"
        try:
            shape = T.oct_shape(oct_id)
        except UnresolvedReference as exc:
            rep.fail("octahedron-ref", loc, str(exc))
            continue
        if shape is None:
            rep.fail("octahedron-shape", loc,
                     "triangles do not share objects per the layout")
        else:
            rep.ok("octahedron-shape", loc)

    for nd in T.nine_diagrams.values():
        loc = f"diagram {nd.id}"
        bad = False
        for r in range(3):
            tri = T.triangles.get(nd.rows[r])
            if tri is None or tri.objects != nd.grid[r]:
                rep.fail("diagram-row", f"{loc} row {r}", "row mismatch")
                bad = True
        for c in range(3):
            tri = T.triangles.get(nd.cols[c])
            col = tuple(nd.grid[r][c] for r in range(3))
            if tri is None or tri.objects != col:
                rep.fail("diagram-col", f"{loc} col {c}", "column mismatch")
                bad = True
        if not bad:
            rep.ok("diagram-grid", loc)

    for diagram in T.verdier_certificates:
        sub = check_verdier(T, diagram)
        rep.extend(sub, prefix=f"certificate {diagram}: ")
    return rep


def _label_match(rep, loc, got, want, what):
    """Morphism-label comparison that degrades to a note when absent."""
    if got is None or want is None:
        rep.warn(what, loc, "labels absent, object-level match only")
    elif got != want:
        rep.fail(what, loc, f"label {got} != {want}")
    else:
        rep.ok(what, loc)


def check_verdier(T: TriangPresentation, diagram_id) -> Report:
    """Verify the certificate of a nine-diagram against the layout."""
    rep = Report("check-verdier")
    nd = T.nine_diagrams.get(diagram_id)
    if nd is None:
        raise UnresolvedReference(f"nine-diagram {diagram_id}")
    cert = T.verdier_certificates.get(diagram_id)
    if cert is None:
        raise MissingCertificate(f"nine-diagram {diagram_id} has no "
                                 "Verdier certificate")
    (x1, y1, z1), (x2, y2, z2), (x3, y3, z3) = nd.grid
    A = cert.apex
    octs = []
    for name in ("o1", "o2", "o3"):
        oct_id = getattr(cert, name)
        if oct_id not in T.octahedra:
            rep.fail("cert-oct", f"{name}={oct_id}", "octahedron not listed")
            return rep
        if T.oct_shape(oct_id) is None:
            rep.fail("cert-oct", f"{name}={oct_id}", "octahedron malformed")
            return rep
        octs.append(T.octahedra[oct_id])
    o1, o2, o3 = octs

    def tri_objects(tid):
        return T.triangle(tid).objects

    def expect_id(got, want, what):
        if got == want:
            rep.ok(what, f"{got}")
        else:
            rep.fail(what, f"{got}", f"expected triangle {want}")

    def expect_objects(tid, want, what):
        got = tri_objects(tid)
        if got == want:
            rep.ok(what, f"{tid}")
        else:
            rep.fail(what, f"{tid}", f"objects {got} != {want}")

    expect_id(o1.d1, nd.cols[0], "o1-first-column")
    expect_id(o1.d3, nd.rows[1], "o1-middle-row")
    expect_objects(o1.d2, (x1, y2, A), "o1-apex-triangle")
    expect_objects(o1.d4, (x3, A, z2), "o1-lower-triangle")

    expect_id(o2.d1, nd.rows[0], "o2-first-row")
    expect_id(o2.d3, nd.cols[1], "o2-middle-column")
    if o2.d2 == o1.d2:
        rep.ok("shared-apex-triangle", o2.d2)
    else:
        rep.fail("shared-apex-triangle", o2.d2,
                 f"o1 and o2 must share the apex triangle ({o1.d2})")
    expect_objects(o2.d4, (z1, A, y3), "o2-lower-triangle")

    if o3.d1 == o1.d4:
        rep.ok("shared-lower-triangle", o3.d1)
    else:
        rep.fail("shared-lower-triangle", o3.d1,
                 f"o1.d4 and o3.d1 must coincide ({o1.d4})")
    expect_id(o3.d2, nd.rows[2], "o3-last-row")
    expect_objects(o3.d3, (A, y3, T.shift[z1]), "o3-shift-triangle")
    expect_objects(o3.d4, (z2, z3, T.shift[z1]), "o3-rotated-column")

    # the fourth triangle of o3 is the rotation of the last column
    c3 = T.triangle(nd.cols[2])
    rot = T.triangle(o3.d4)
    if (rot.x, rot.y, rot.z) == (c3.y, c3.z, T.shift[c3.x]):
        rep.ok("rotation", f"{o3.d4} ~ rot {nd.cols[2]}")
    else:
        rep.fail("rotation", o3.d4,
                 f"not the rotation of column {nd.cols[2]}")
    _label_match(rep, f"{o3.d4}.f vs {nd.cols[2]}.g", rot.f, c3.g,
                 "rotation-label")
    _label_match(rep, f"{o3.d4}.g vs {nd.cols[2]}.h", rot.g, c3.h,
                 "rotation-label")
    return rep


def octahedron_to_2cube(T: TriangPresentation, oct_id):
    """Write an octahedron as a certified 3x3 diagram.

    Registers (or reuses) the auxiliary triangles, the two trivial
    octahedra, the diagram and its certificate in T and returns the
    diagram id.  The middle row of the grid is (x, z, y').
    """
    shape = T.oct_shape(oct_id)
    if shape is None:
        raise UnresolvedReference(f"octahedron {oct_id} malformed or missing")
    x, y, z, xp, yp, zp = shape
    o = T.octahedra[oct_id]
    zero = T.zero
    c1 = T.find_or_add_triangle(x, x, zero)
    r3 = T.find_or_add_triangle(zero, xp, xp)
    low = T.find_or_add_triangle(zero, yp, yp)
    rot4 = T.find_or_add_triangle(yp, xp, T.shift[zp])
    o1 = T.find_or_add_octahedron(c1, o.d2, o.d2, low, prefix="Otriv")
    o3 = T.find_or_add_octahedron(low, r3, rot4, rot4, prefix="Otriv")
    grid = ((x, y, zp), (x, z, yp), (zero, xp, xp))
    rows = (o.d1, o.d2, r3)
    cols = (c1, o.d3, o.d4)
    nd_id = f"ND[{oct_id}]"
    k = 0
    while nd_id in T.nine_diagrams:
        existing = T.nine_diagrams[nd_id]
        if existing.grid == grid and existing.rows == rows \
                and existing.cols == cols:
            return nd_id
        k += 1
        nd_id = f"ND[{oct_id}]#{k}"
    T.add_nine_diagram(nd_id, grid, rows, cols)
    T.add_certificate(nd_id, yp, o1, oct_id, o3)
    return nd_id


# -- builtin presentations --------------------------------------------------

def point_presentation() -> TriangPresentation:
    """Only the zero object and its trivial structure."""
    T = TriangPresentation("point")
    T.add_object("0", is_zero=True)
    T.shift = {"0": "0"}
    t0 = T.add_triangle("T|0|0", "0", "0", "0")
    T.add_sum("0", "0", "0", t0, t0)
    o0 = T.add_octahedron("O|0|0|0", t0, t0, t0, t0)
    nd = T.add_nine_diagram("N|0|0", (("0",) * 3,) * 3, (t0,) * 3, (t0,) * 3)
    T.add_certificate(nd, "0", o0, o0, o0)
    T.meta["kind"] = "point"
    T.meta["dims"] = {"0": ()}
    return T


def _dims_id(dims):
    return "".join(str(d) for d in dims)


def graded_lines(degrees=(-2, -1, 0, 1), max_dim=1,
                 name="graded-lines", full_battery=True) -> TriangPresentation:
    """Tables of dimensions over a cyclic window of degrees.

    Objects are degree -> dimension tables with entries <= max_dim; the
    shift rotates degrees by one (the window is cyclic, and an even window
    keeps Euler classes compatible with rotation triangles).  Triangles
    are the split triples within the window plus the rotations of every
    split triple; octahedra and certified diagrams cover the commutativity
    and octahedron axioms over the whole battery.
    """
    w = len(degrees)
    T = TriangPresentation(name)
    dims_of = {}
    for dims in itertools.product(range(max_dim + 1), repeat=w):
        oid = _dims_id(dims)
        T.add_object(oid, is_zero=not any(dims))
        dims_of[oid] = dims
    zero = T.zero

    def plus(a, b):
        da, db = dims_of[a], dims_of[b]
        out = tuple(x + y for x, y in zip(da, db))
        if any(d > max_dim for d in out):
            return None
        return _dims_id(out)

    def shift_obj(a):
        da = dims_of[a]
        return _dims_id(tuple(da[(i - 1) % w] for i in range(w)))

    T.shift = {o: shift_obj(o) for o in T.objects}

    # sigma automorphisms (an abstract order-2 automorphism per object)
    sigma = {zero: T.identity(zero)}
    for o in T.objects:
        if o == zero:
            continue
        sid = T.add_iso(f"s|{o}", o, o)
        sigma[o] = sid
        T.composition[(sid, sid)] = T.identity(o)
    T.meta["sigma"] = sigma

    pairs = [(p, q) for p in T.objects for q in T.objects
             if plus(p, q) is not None]

    def t1(p, q):
        return f"T|{p}|{q}"

    def t2(p, q):
        # second split triangle of the ordered pair (p, q)
        if p != q:
            return t1(q, p)
        return t1(p, q) if p == zero else f"T2|{p}"

    def rot(p, q):
        return f"R|{p}|{q}"

    def zero_mor(src, dst):
        # a morphism into or out of the zero object is the zero morphism
        return f"0|{src}|{dst}"

    for p, q in pairs:
        s = plus(p, q)
        f = zero_mor(p, s) if p == zero else (
            f"id|{p}" if q == zero else f"inl|{p}|{q}")
        g = zero_mor(s, q) if q == zero else (
            f"id|{q}" if p == zero else f"prr|{p}|{q}")
        h = zero_mor(q, shift_obj(p))
        T.add_triangle(t1(p, q), p, s, q, f=f, g=g, h=h)
        # rotation: maps are (g, h, -shift f); the sign on the third map is
        # not expressible label-free, so it stays None
        T.add_triangle(rot(p, q), s, q, shift_obj(p), f=g, g=h, h=None)
    for p, q in pairs:
        if p == q and p != zero:
            s = plus(p, p)
            T.add_triangle(t2(p, p), p, s, p,
                           f=f"inr|{p}", g=f"prl|{p}",
                           h=zero_mor(p, shift_obj(p)))
    for p, q in pairs:
        T.add_sum(p, q, plus(p, q), t1(p, q), t2(p, q))
        T.add_triangle_iso(f"I|{p}|{q}", t1(p, q), t1(p, q),
                           sigma[p], sigma[plus(p, q)], sigma[q])

    if not full_battery:
        T.meta["kind"] = "graded-lines"
        T.meta["degrees"] = tuple(degrees)
        T.meta["dims"] = dims_of
        T.meta["pairs"] = pairs
        T.meta["triples"] = []
        return T

    triples = []
    for x in T.objects:
        for u in T.objects:
            if plus(x, u) is None:
                continue
            for v in T.objects:
                uv = plus(u, v)
                if uv is not None and plus(x, uv) is not None:
                    triples.append((x, u, v))

    def split_oct(x, u, v):
        return f"O|{x}|{u}|{v}"

    for x, u, v in triples:
        xu = plus(x, u)
        uv = plus(u, v)
        T.add_octahedron(split_oct(x, u, v),
                         t1(x, u), t1(x, uv), t1(xu, v), t1(u, v))

    # diagonal-variant octahedra for commutativity certificates
    for p, q in pairs:
        if p == q and p != zero:
            T.add_octahedron(f"DO|{p}", t1(zero, p), t1(zero, plus(p, p)),
                             t2(p, p), t2(p, p))

    # third-octahedron family for commutativity grids
    for x, y in pairs:
        T.add_octahedron(f"O3|{x}|{y}", t2(x, y), t1(y, zero),
                         rot(x, y), rot(x, zero))
    # third-octahedron family for octahedron grids
    for u, v in pairs:
        T.add_octahedron(f"OG3|{u}|{v}", t1(zero, plus(u, v)), t1(zero, v),
                         rot(u, v), rot(u, v))

    def comm_cert_o1(x, y):
        # the octahedron with triangles (T|0|y, T|0|x+y, t2(x,y), t2(x,y))
        if x == y and x != zero:
            return f"DO|{x}"
        return split_oct(zero, y, x)

    # commutativity grids: rows (0,x,x)/(y,x+y,x)/(y,y,0)
    for x, y in pairs:
        s = plus(x, y)
        grid = ((zero, x, x), (y, s, x), (y, y, zero))
        rows = (t1(zero, x), t2(x, y), t1(y, zero))
        cols = (t1(zero, y), t1(x, y), t1(x, zero))
        nd = T.add_nine_diagram(f"N|{x}|{y}", grid, rows, cols)
        T.add_certificate(nd, s, comm_cert_o1(x, y), split_oct(zero, x, y),
                          f"O3|{x}|{y}")

    # octahedron grids via the standard remark construction
    for x, u, v in triples:
        oct_id = split_oct(x, u, v)
        uv = plus(u, v)
        grid = ((x, plus(x, u), u), (x, plus(x, uv), uv), (zero, v, v))
        rows = (t1(x, u), t1(x, uv), t1(zero, v))
        cols = (t1(x, zero), t1(plus(x, u), v), t1(u, v))
        nd = T.add_nine_diagram(f"G|{x}|{u}|{v}", grid, rows, cols)
        T.add_certificate(nd, uv, split_oct(x, zero, uv), oct_id,
                          f"OG3|{u}|{v}")

    # grids for the O3 family: rows t2(x,y)/(y,y,0)/(0,Sx,Sx)
    for x, y in pairs:
        s = plus(x, y)
        sx = shift_obj(x)
        grid = ((y, s, x), (y, y, zero), (zero, sx, sx))
        rows = (t2(x, y), t1(y, zero), t1(zero, sx))
        cols = (t1(y, zero), rot(x, y), rot(x, zero))
        nd = T.add_nine_diagram(f"G3|{x}|{y}", grid, rows, cols)
        T.add_certificate(nd, zero, split_oct(y, zero, zero),
                          f"O3|{x}|{y}", split_oct(zero, zero, sx))

    T.meta["kind"] = "graded-lines"
    T.meta["degrees"] = tuple(degrees)
    T.meta["dims"] = dims_of
    T.meta["pairs"] = pairs
    T.meta["triples"] = triples
    return T


def euler_class(T: TriangPresentation, obj_id):
    degs = T.meta["degrees"]
    dims = T.meta["dims"][obj_id]
    return sum((-1) ** (d % 2) * k for d, k in zip(degs, dims))


def tensor_lines(modulus=4, name="tensor-lines"):
    """Single lines over a cyclic degree window, with the convolution
    tensor.  Returns (presentation, TriFunctorData) where the functor is
    the tensor with full triangle and Verdier image tables.
    """
    degrees = tuple(range(-(modulus // 2), modulus - modulus // 2))
    L = graded_lines(degrees=degrees, max_dim=1, name=name)
    # restrict to the zero object and single lines
    lines = [o for o in L.objects if sum(L.meta["dims"][o]) <= 1]
    keep = set(lines)
    sub = TriangPresentation(name)
    for o in L.objects:
        if o in keep:
            sub.add_object(o, is_zero=(o == L.zero))
    sub.shift = {o: L.shift[o] for o in lines}
    sigma = {}
    for o in lines:
        if o == L.zero:
            sigma[o] = sub.identity(o)
            continue
        sid = sub.add_iso(f"s|{o}", o, o)
        sigma[o] = sid
        sub.composition[(sid, sid)] = sub.identity(o)
    sub.meta = dict(L.meta)
    sub.meta["kind"] = "tensor-lines"
    sub.meta["sigma"] = sigma
    sub.meta["dims"] = {o: L.meta["dims"][o] for o in lines}

    def in_sub(tri):
        return all(o in keep for o in tri.objects)

    for tri in L.triangles.values():
        if in_sub(tri):
            sub.triangles[tri.id] = tri
    for key, entry in L.sums.items():
        if entry.sum in keep and all(o in keep for o in key):
            sub.sums[key] = entry
    for ti in L.triangle_isos.values():
        if ti.src_tri in sub.triangles and ti.dst_tri in sub.triangles:
            sub.triangle_isos[ti.id] = ti
    for o in L.octahedra.values():
        if all(t in sub.triangles for t in o.triangle_ids()):
            sub.octahedra[o.id] = o
    for nd in L.nine_diagrams.values():
        if all(t in sub.triangles for t in nd.rows + nd.cols):
            cert = L.verdier_certificates.get(nd.id)
            if cert and all(x in sub.octahedra
                            for x in (cert.o1, cert.o2, cert.o3)) \
                    and cert.apex in keep:
                sub.nine_diagrams[nd.id] = nd
                sub.verdier_certificates[nd.id] = cert
    sub.meta["pairs"] = [(p, q) for (p, q) in L.meta["pairs"]
                         if p in keep and q in keep
                         and L.sums[(p, q)].sum in keep]

    w = modulus
    deg_index = {o: next((i for i, d in enumerate(sub.meta["dims"][o]) if d),
                         None) for o in lines}

    def tensor_obj(a, b):
        if a == sub.zero or b == sub.zero:
            return sub.zero
        k = (deg_index[a] + deg_index[b]) % w
        dims = tuple(1 if i == k else 0 for i in range(w))
        return _dims_id(dims)

    obj_map = {(a, b): tensor_obj(a, b) for a in lines for b in lines}

    F = TriFunctorData([sub, sub], sub, obj_map, name="tensor")

    # certify image grids for every pair of battery triangles; registering
    # a grid may add rotation records, so iterate to a fixpoint
    done = set()
    while True:
        battery = list(sub.triangles.values())
        fresh = [(ti, tj) for ti in battery for tj in battery
                 if (ti.id, tj.id) not in done]
        if not fresh:
            break
        for ti, tj in fresh:
            grid = tuple(tuple(tensor_obj(ti.objects[c], tj.objects[r])
                               for c in range(3)) for r in range(3))
            nd_id = register_certified_grid(sub, grid, prefix="GF")
            F.verdier_images[(0, ti.id, 1, tj.id, ())] = nd_id
            done.add((ti.id, tj.id))

    missing = []
    for slot in (0, 1):
        for tri in sub.triangles.values():
            for other in lines:
                if slot == 0:
                    img = tuple(tensor_obj(o, other) for o in tri.objects)
                else:
                    img = tuple(tensor_obj(other, o) for o in tri.objects)
                found = sub.find_triangles(*img)
                if found:
                    F.tri_images[(slot, tri.id, (other,))] = found[0].id
                else:
                    missing.append((slot, tri.id, other, img))
    sub.meta["tensor_missing"] = missing
    return sub, F


def _apex_for(T: TriangPresentation, g00, g11):
    zero = T.zero
    if g00 == g11:
        return zero
    if g00 == zero:
        return g11
    if g11 == zero:
        return T.shift[g00]
    return None


def register_certified_grid(T: TriangPresentation, grid, prefix="GG"):
    """Register a 3x3 object grid whose rows and columns are (or become)
    listed triangles, together with a Verdier certificate built from the
    canonical apex.  Intended for grids of degenerate-split shape (image
    grids of split and rotation triangles); raises when no apex fits."""
    rows = tuple(T.find_or_add_triangle(*grid[r]) for r in range(3))
    cols = tuple(T.find_or_add_triangle(*(grid[r][c] for r in range(3)))
                 for c in range(3))
    for nd in T.nine_diagrams.values():
        if nd.grid == grid and nd.rows == rows and nd.cols == cols:
            if nd.id in T.verdier_certificates:
                return nd.id
    (x1, y1, z1), (x2, y2, z2), (x3, y3, z3) = grid
    A = _apex_for(T, x1, y2)
    if A is None:
        raise MissingVerdierCertificate(
            f"no canonical apex for grid starting ({x1},{y2})")
    ta = T.find_or_add_triangle(x1, y2, A)
    tb = T.find_or_add_triangle(x3, A, z2)
    tc = T.find_or_add_triangle(z1, A, y3)
    td = T.find_or_add_triangle(A, y3, T.shift[z1])
    # the rotated last column: first two maps are the column's g and h
    # (absent labels match anything; the checker reports them as notes)
    c3tri = T.triangle(cols[2])
    te = None
    for cand in T.find_triangles(z2, z3, T.shift[z1]):
        if ((c3tri.g is None or cand.f is None or cand.f == c3tri.g)
                and (c3tri.h is None or cand.g is None or cand.g == c3tri.h)):
            te = cand.id
            break
    if te is None:
        te = f"rot|{cols[2]}"
        if te in T.triangles:
            te = f"rot|{cols[2]}#{len(T.triangles)}"
        T.add_triangle(te, z2, z3, T.shift[z1], f=c3tri.g, g=c3tri.h)
    o1 = T.find_or_add_octahedron(cols[0], ta, rows[1], tb, prefix="OC")
    o2 = T.find_or_add_octahedron(rows[0], ta, cols[1], tc, prefix="OC")
    o3 = T.find_or_add_octahedron(tb, rows[2], td, te, prefix="OC")
    nd_id = f"{prefix}[{'|'.join(''.join(r) for r in grid)}]"
    k = 0
    while nd_id in T.nine_diagrams:
        k += 1
        nd_id = f"{prefix}[{'|'.join(''.join(r) for r in grid)}]#{k}"
    T.add_nine_diagram(nd_id, grid, rows, cols)
    T.add_certificate(nd_id, A, o1, o2, o3)
    return nd_id


# -- functors ----------------------------------------------------------------

class TriFunctorData:
    """A multiexact functor candidate between presentations.

    Tables are closed-world: the object map on tuples, triangle images per
    (slot, triangle, other objects), optional iso images, and nine-diagram
    images per pair of triangles.  Absent entries make the corresponding
    battery item untestable, which checks report as warnings rather than
    failures.
    """

    def __init__(self, sources, target, obj_map, iso_map=None,
                 tri_images=None, verdier_images=None, name="F"):
        self.sources = list(sources)
        self.target = target
        self.obj_map = dict(obj_map)
        self.iso_map = dict(iso_map or {})
        self.tri_images = dict(tri_images or {})
        self.verdier_images = dict(verdier_images or {})
        self.name = name

    @property
    def arity(self):
        return len(self.sources)

    def obj(self, tup):
        return self.obj_map.get(tuple(tup))

    def others_tuples(self, slot):
        pools = [self.sources[k].objects for k in range(self.arity)
                 if k != slot]
        return list(itertools.product(*pools)) if pools else [()]

    def tuple_at(self, slot, value, others):
        vals = list(others)
        vals.insert(slot, value)
        return tuple(vals)


def check_multiexact_tri_functor(F: TriFunctorData) -> Report:
    """Per-slot exactness over the battery: every listed triangle maps to a
    listed triangle with the image objects, and the object map commutes
    with shift on the nose or via a listed witness."""
    rep = Report("check-multiexact-tri")
    tgt = F.target
    for slot, src in enumerate(F.sources):
        for others in F.others_tuples(slot):
            octx = ",".join(others) or "-"
            for tri in src.triangles.values():
                img_objs = []
                gap = False
                for o in tri.objects:
                    io = F.obj(F.tuple_at(slot, o, others))
                    if io is None:
                        gap = True
                        break
                    img_objs.append(io)
                loc = f"slot {slot} {tri.id} @ {octx}"
                if gap:
                    rep.warn("triangle-image", loc,
                             "untestable: object image missing")
                    continue
                img_id = F.tri_images.get((slot, tri.id, others))
                if img_id is None:
                    rep.fail("triangle-image", loc, "no declared image")
                    continue
                img = tgt.triangles.get(img_id)
                if img is None:
                    rep.fail("triangle-image", loc,
                             f"image {img_id} not a listed triangle")
                elif img.objects != tuple(img_objs):
                    rep.fail("triangle-image", loc,
                             f"{img.objects} != {tuple(img_objs)}")
                else:
                    rep.ok("triangle-image", loc)
            for o in src.objects:
                fo = F.obj(F.tuple_at(slot, o, others))
                fso = F.obj(F.tuple_at(slot, src.shift[o], others))
                loc = f"slot {slot} shift {o} @ {octx}"
                if fo is None or fso is None:
                    rep.warn("shift", loc, "untestable")
                elif fso == tgt.shift[fo]:
                    rep.ok("shift", loc)
                else:
                    rep.fail("shift", loc, f"{fso} != shift {fo}")
    return rep


def check_functor_verdier_admission(F: TriFunctorData) -> Report:
    """Every pair of battery triangles in two slots has a certified image
    nine-diagram matching the induced grid."""
    rep = Report("check-verdier-admission")
    pre = check_multiexact_tri_functor(F)
    if not pre.valid and pre.status == "invalid":
        rep.fail("precondition", "multiexactness", "functor is not multiexact")
        return rep
    tgt = F.target
    n = F.arity
    for si, sj in itertools.combinations(range(n), 2):
        pools = [F.sources[k].objects for k in range(n) if k not in (si, sj)]
        rests = list(itertools.product(*pools)) if pools else [()]
        for ti in F.sources[si].triangles.values():
            for tj in F.sources[sj].triangles.values():
                for rest in rests:
                    loc = f"slots ({si},{sj}) {ti.id} x {tj.id}" + (
                        f" @ {','.join(rest)}" if rest else "")

                    def full(oi, oj):
                        vals = list(rest)
                        vals.insert(min(si, sj), oi)
                        vals.insert(max(si, sj), oj)
                        return tuple(vals)

                    cells = {}
                    gap = False
                    for r in range(3):
                        for c in range(3):
                            io = F.obj(full(ti.objects[c], tj.objects[r]))
                            if io is None:
                                gap = True
                            cells[(r, c)] = io
                    if gap:
                        rep.warn("induced-grid", loc,
                                 "untestable: object image missing")
                        continue
                    nd_id = F.verdier_images.get((si, ti.id, sj, tj.id, rest))
                    if nd_id is None:
                        rep.fail("induced-grid", loc, "no certified image "
                                 "nine-diagram declared")
                        continue
                    nd = tgt.nine_diagrams.get(nd_id)
                    if nd is None:
                        rep.fail("induced-grid", loc,
                                 f"{nd_id} not a listed diagram")
                        continue
                    want = tuple(tuple(cells[(r, c)] for c in range(3))
                                 for r in range(3))
                    if nd.grid != want:
                        rep.fail("induced-grid", loc,
                                 f"grid {nd.grid} != induced {want}")
                        continue
                    sub = check_verdier(tgt, nd_id)
                    if sub.status == "invalid":
                        rep.fail("induced-grid", loc,
                                 "certificate fails verification")
                    else:
                        rep.ok("induced-grid", loc)
    return rep
