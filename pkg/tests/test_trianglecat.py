import pytest

from multidet.errors import MissingCertificate, UnresolvedReference
from multidet.trianglecat import (
    TriangPresentation,
    TriFunctorData,
    check_functor_verdier_admission,
    check_multiexact_tri_functor,
    check_verdier,
    euler_class,
    graded_lines,
    octahedron_to_2cube,
    point_presentation,
    register_certified_grid,
    tensor_lines,
    validate_presentation,
)


@pytest.fixture(scope="module")
def lines():
    return graded_lines()


@pytest.fixture(scope="module")
def tensor():
    return tensor_lines()


def test_point_presentation_valid():
    assert validate_presentation(point_presentation()).valid


def test_graded_lines_valid(lines):
    assert validate_presentation(lines).status == "valid"


def test_graded_lines_spec_window_valid():
    # dimension tables on five degrees with entries <= 2; the validator is
    # the oracle for the generated data (light battery: sums only)
    T = graded_lines(degrees=(-2, -1, 0, 1, 2), max_dim=2,
                     full_battery=False, name="wide")
    assert len(T.objects) == 3 ** 5
    assert validate_presentation(T).valid


def test_seeded_octahedron_defect(lines):
    T = graded_lines(name="defect")
    oct_id = next(o for o in T.octahedra if o.startswith("O|"))
    o = T.octahedra[oct_id]
    # replace the fourth triangle with one whose objects cannot fit
    other = next(t for t in T.triangles.values()
                 if t.objects != T.triangle(o.d4).objects)
    T.octahedra[oct_id] = type(o)(o.id, o.d1, o.d2, o.d3, other.id)
    rep = validate_presentation(T)
    assert not rep.valid
    assert any(it.check == "octahedron-shape" for it in rep.failures)


def test_broken_iso_groupoid_detected():
    T = TriangPresentation("iso-defect")
    T.add_object("0", is_zero=True)
    T.add_object("a")
    T.shift = {"0": "0", "a": "a"}
    T.add_iso("f", "a", "a", inv="g")  # inverse not listed
    rep = validate_presentation(T)
    assert any(it.check == "iso-inverse" for it in rep.failures)


def test_check_verdier_on_commutativity_grid(lines):
    # every bundled commutativity grid passes, with labels where present
    nd = next(i for i in lines.nine_diagrams if i.startswith("N|"))
    rep = check_verdier(lines, nd)
    assert rep.valid


def test_check_verdier_wrong_apex(lines):
    T = graded_lines(name="apex-defect")
    nd = next(i for i in T.nine_diagrams if i.startswith("N|"))
    cert = T.verdier_certificates[nd]
    wrong = next(o for o in T.objects if o != cert.apex)
    T.verdier_certificates[nd] = type(cert)(cert.diagram, wrong, cert.o1,
                                            cert.o2, cert.o3)
    rep = check_verdier(T, nd)
    assert not rep.valid


def test_check_verdier_missing_certificate(lines):
    T = graded_lines(name="nocert")
    nd = next(i for i in T.nine_diagrams if i.startswith("N|"))
    del T.verdier_certificates[nd]
    with pytest.raises(MissingCertificate):
        check_verdier(T, nd)
    with pytest.raises(UnresolvedReference):
        check_verdier(T, "no-such-diagram")


def test_monotonicity_of_check_verdier(lines):
    T = graded_lines(name="monotone")
    nd = next(i for i in T.nine_diagrams if i.startswith("N|"))
    before = check_verdier(T, nd)
    assert before.valid
    # add unrelated data
    T.add_object("extra")
    T.shift["extra"] = "extra"
    T.add_triangle("t-extra", "extra", "extra", T.zero)
    after = check_verdier(T, nd)
    assert after.valid


def test_octahedron_to_2cube(lines):
    T = graded_lines(name="oct2cube")
    octs = sorted(o for o in T.octahedra if o.startswith("O|"))
    for oct_id in octs[:40]:
        nd = octahedron_to_2cube(T, oct_id)
        assert check_verdier(T, nd).valid
        x, y, z, xp, yp, zp = T.oct_shape(oct_id)
        assert T.nine_diagrams[nd].grid[1] == (x, z, yp)


def test_octahedron_to_2cube_trivial():
    pt = point_presentation()
    nd = octahedron_to_2cube(pt, "O|0|0|0")
    assert check_verdier(pt, nd).valid


def test_tensor_functor(tensor):
    TL, F = tensor
    assert validate_presentation(TL).valid
    assert TL.meta["tensor_missing"] == []
    assert check_multiexact_tri_functor(F).valid
    assert check_functor_verdier_admission(F).valid


def test_identity_functor_multiexact(lines):
    T = lines
    obj_map = {(o,): o for o in T.objects}
    tri_images = {(0, t, ()): t for t in T.triangles}
    F = TriFunctorData([T], T, obj_map, tri_images=tri_images, name="id")
    assert check_multiexact_tri_functor(F).valid


def test_constant_zero_functor(lines):
    T = lines
    z = T.zero
    zero_tri = next(t.id for t in T.triangles.values()
                    if t.objects == (z, z, z))
    obj_map = {(o,): z for o in T.objects}
    tri_images = {(0, t, ()): zero_tri for t in T.triangles}
    F = TriFunctorData([T], T, obj_map, tri_images=tri_images, name="zero")
    assert check_multiexact_tri_functor(F).valid


def test_admission_missing_pair_detected(tensor):
    TL, F = tensor
    victim = next(iter(F.verdier_images))
    images = dict(F.verdier_images)
    del images[victim]
    F2 = TriFunctorData(F.sources, F.target, F.obj_map,
                        tri_images=F.tri_images, verdier_images=images,
                        name="gappy")
    rep = check_functor_verdier_admission(F2)
    assert not rep.valid
    loc_bits = f"{victim[1]} x {victim[3]}"
    assert any(loc_bits in it.location for it in rep.failures)


def test_untestable_images_are_warnings(lines):
    # identity functor with one object removed from the map: items touching
    # that object are untestable warnings, everything else still passes
    T = lines
    gone = "1010"
    obj_map = {(o,): o for o in T.objects if o != gone}
    tri_images = {(0, t.id, ()): t.id for t in T.triangles.values()
                  if gone not in t.objects}
    F = TriFunctorData([T], T, obj_map, tri_images=tri_images, name="partial")
    rep = check_multiexact_tri_functor(F)
    assert rep.status == "valid"
    warns = [it for it in rep.items if it.verdict == "warn"]
    assert warns and all("untestable" in it.detail for it in warns)


def test_euler_class(lines):
    assert euler_class(lines, "1000") == 1
    assert euler_class(lines, "0100") == -1
    assert euler_class(lines, "1010") == 2
    assert euler_class(lines, lines.zero) == 0


def test_register_certified_grid_roundtrip(lines):
    T = graded_lines(name="reg")
    z = T.zero
    grid = (("1000", "1000", z), ("1000", "1000", z), (z, z, z))
    nd = register_certified_grid(T, grid)
    assert check_verdier(T, nd).valid
