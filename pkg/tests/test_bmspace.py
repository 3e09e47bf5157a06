import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conres import bmspace
from conres.bmspace import (
    Axiom,
    CompactSmooth,
    DeclaredFact,
    DegreeShift,
    DisjointUnion,
    Let,
    OpenCone,
    Point,
    ProjectiveSpace,
    Product,
    PuncturedLineBundle,
    Ref,
    Script,
    SpaceError,
    VectorBundleTotal,
    eval_space,
    run_script,
    space_from_json,
    space_to_json,
)
from conres.twisted import EMPTY, TwistedDims


def T(*entries):
    return TwistedDims({(i, m): n for i, m, n in entries})


def test_point_and_projective():
    assert eval_space(Point()) == T((0, 0, 1))
    assert eval_space(ProjectiveSpace(2)) == T((0, 0, 1), (2, 1, 1), (4, 2, 1))


def test_open_cone_over_projective_line():
    assert eval_space(OpenCone(ProjectiveSpace(1))) == T((3, 1, 1))


def test_open_cone_over_point_is_empty():
    assert eval_space(OpenCone(Point())) == EMPTY


def test_bundle_shift():
    assert eval_space(VectorBundleTotal(2, Point())) == T((4, 2, 1))


def test_flag_column_of_quartic():
    got = eval_space(VectorBundleTotal(10, CompactSmooth.of_ring("flag-n2")))
    assert got == T((20, 10, 1), (22, 11, 2), (24, 12, 2), (26, 13, 1))


def test_cone_columns_of_quartic():
    cone = Product(ProjectiveSpace(2), OpenCone(ProjectiveSpace(1)))
    assert eval_space(VectorBundleTotal(9, cone)) == T((21, 10, 1), (23, 11, 1), (25, 12, 1))
    pairs = DegreeShift(1, 0, Product(Axiom("B(CP2,2)±Q"), VectorBundleTotal(2, Point())))
    assert eval_space(VectorBundleTotal(5, pairs)) == T((17, 8, 1), (19, 9, 1), (21, 10, 1))


def test_vanishing_axioms():
    assert eval_space(Product(ProjectiveSpace(2), Axiom("B(CP1,3)±Q"))) == EMPTY
    assert eval_space(Axiom("CP1 autojoin 2, reduced")) == EMPTY


def test_disjoint_union():
    assert eval_space(DisjointUnion((Point(), ProjectiveSpace(1)))) == T((0, 0, 2), (2, 1, 1))


def test_punctured_line_bundle_anti_part():
    plb = PuncturedLineBundle("pair-n2", "-2*a1 - 2*a2", "anti", 4)
    assert eval_space(plb) == T((3, 1, 1), (8, 4, 1))
    assert eval_space(DegreeShift(6, 2, plb)) == T((9, 3, 1), (14, 6, 1))


def test_errors():
    with pytest.raises(SpaceError):
        eval_space(Axiom("nonexistent"))
    with pytest.raises(SpaceError):
        eval_space(Ref("X"))
    with pytest.raises(SpaceError):
        eval_space(ProjectiveSpace(-1))
    with pytest.raises(SpaceError):
        eval_space(VectorBundleTotal(-1, Point()))
    with pytest.raises(SpaceError):
        space_from_json({"bogus": 1})
    with pytest.raises(SpaceError):
        space_from_json({"product": ["point"]})


def test_script_with_declaration_and_audit():
    s = Script((DeclaredFact("Y", T((0, 0, 1), (10, 4, 1)), "given"), Let("C", OpenCone(Ref("Y")))), "C")
    res = run_script(s)
    assert res.dims == T((11, 4, 1))
    assert any("declared Y" in line and "[given]" in line for line in res.audit)
    assert res.bindings["Y"] == T((0, 0, 1), (10, 4, 1))


def test_declaration_needs_citation():
    with pytest.raises(SpaceError):
        Script((DeclaredFact("Y", EMPTY, "  "),))
    with pytest.raises(SpaceError):
        bmspace.script_from_json({"steps": [{"declare": "Y", "dims": [], "citation": ""}]})


def test_script_result_must_be_bound():
    with pytest.raises(SpaceError):
        run_script(Script((Let("A", Point()),), "B"))


def test_script_json_round_trip():
    s = Script((DeclaredFact("Y", T((0, 0, 1)), "c"), Let("C", OpenCone(Ref("Y")))), "C")
    assert bmspace.script_from_json(bmspace.script_to_json(s)) == s


def test_dims_json_forms():
    assert bmspace.dims_from_json([[2, 1, 1]]) == T((2, 1, 1))
    assert bmspace.dims_from_json([{"degree": 2, "twist": 1, "dim": 1}]) == T((2, 1, 1))


leaves = st.one_of(
    st.just(Point()),
    st.integers(0, 3).map(ProjectiveSpace),
    st.sampled_from(["B(CP2,2)±Q", "B(CP1,3)±Q"]).map(Axiom),
    st.just(CompactSmooth.of_ring("cp1")),
)


def _extend(children):
    return st.one_of(
        children.map(OpenCone),
        st.tuples(st.integers(0, 3), children).map(lambda a: VectorBundleTotal(*a)),
        st.tuples(children, children).map(lambda a: Product(*a)),
        st.lists(children, min_size=1, max_size=3).map(lambda xs: DisjointUnion(tuple(xs))),
        st.tuples(st.integers(0, 3), st.integers(0, 2), children).map(lambda a: DegreeShift(*a)),
    )


spaces = st.recursive(leaves, _extend, max_leaves=6)


@settings(max_examples=80, deadline=None)
@given(spaces)
def test_space_json_round_trip_preserves_value(e):
    back = space_from_json(space_to_json(e))
    assert eval_space(back) == eval_space(e)


@settings(max_examples=60, deadline=None)
@given(spaces, spaces)
def test_product_is_tensor(a, b):
    assert eval_space(Product(a, b)) == eval_space(a).tensor(eval_space(b))
