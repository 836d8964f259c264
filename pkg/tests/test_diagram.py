import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmpkit.canon import are_isomorphic
from mmpkit.diagram import MmpDiagram, ParseError, parse_mmp, read_diagrams, serialize_mmp, validate

from oracles import brute_isomorphic, diagram_from_sets


def test_parse_seven_vertex_line():
    d = parse_mmp("abc,cde,efa,egb,dgf.")
    assert d.vertex_count == 7
    assert d.blocks == ((0, 1, 2), (2, 3, 4), (4, 5, 0), (4, 6, 1), (3, 6, 5))


def test_parse_single_block():
    d = parse_mmp("abc.")
    assert (d.vertex_count, d.blocks) == (3, ((0, 1, 2),))


def test_parse_cabello_shape():
    d = parse_mmp("abcd,defg,ghij,jklm,mnop,pqra,bikr,celn,fhoq.")
    assert d.vertex_count == 18
    assert len(d.blocks) == 9
    assert all(len(b) == 4 for b in d.blocks)


def test_vertices_numbered_by_first_appearance():
    d = parse_mmp("zyx,xwv.")
    assert d.labels == ("z", "y", "x", "w", "v")
    assert d.blocks == ((0, 1, 2), (2, 3, 4))


def test_full_alphabet_order():
    d = parse_mmp("aZ9,90b.")
    assert d.labels == ("a", "Z", "9", "0", "b")


@pytest.mark.parametrize(
    "text, offset",
    [
        ("abc", 3),  # missing period
        ("abc,,cde.", 4),  # empty block
        (",abc.", 0),
        ("abc,.", 4),
        ("aba.", 2),  # repeated vertex
        ("ab!c.", 2),  # unknown character
        ("abc. x", 5),  # text after the period
    ],
)
def test_parse_errors_carry_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse_mmp(text)
    assert info.value.offset == offset


def test_trailing_whitespace_after_period_is_allowed():
    assert parse_mmp("abc.  \n") == parse_mmp("abc.")


def test_semantic_violation_is_not_a_parse_error():
    d = parse_mmp("ab,bc.")
    assert not validate(d).passed


def test_numeric_format():
    d = parse_mmp("1 2 3,3 4 5.")
    assert d.vertex_count == 5
    assert d.blocks == ((0, 1, 2), (2, 3, 4))
    assert serialize_mmp(d, "numeric") == "1 2 3,3 4 5."
    with pytest.raises(ParseError):
        parse_mmp("1 2 x,3 4 5.")
    with pytest.raises(ParseError):
        parse_mmp("1 2 0.")


def test_serialize_examples():
    assert serialize_mmp(parse_mmp("abc,cde,efa,egb,dgf.")) == "abc,cde,efa,egb,dgf."
    assert serialize_mmp(MmpDiagram(3, ((0, 1, 2),))) == "abc."


def test_serialize_switches_to_numeric_past_62_vertices():
    blocks = [tuple(range(i, i + 3)) for i in range(0, 63, 3)]
    d = MmpDiagram(63, tuple(blocks))
    text = serialize_mmp(d)
    assert text.startswith("1 2 3,4 5 6,")
    assert parse_mmp(text).blocks == d.blocks


def test_read_diagrams_skips_comments():
    lines = ["# header\n", "\n", "abc.\n", "  # indented comment\n", "abc,cde.\n"]
    assert [serialize_mmp(d) for d in read_diagrams(lines)] == ["abc.", "abc,cde."]


def test_constructor_rejects_structural_errors():
    with pytest.raises(ValueError):
        MmpDiagram(2, ((0, 2),))
    with pytest.raises(ValueError):
        MmpDiagram(3, ((0, 0, 1),))


# ----------------------------------------------------------------- validate

def test_validate_share_one_vertex_passes():
    assert validate(parse_mmp("abc,cde.")).passed


def test_validate_intersecting_pairs_violate_condition_3():
    rep = validate(parse_mmp("ab,bc."))
    assert not rep.passed
    assert sorted(v.blocks[0] for v in rep.violations if v.condition == "3") == [0, 1]


def test_validate_seven_vertex_diagram_passes():
    assert validate(parse_mmp("abc,cde,efa,egb,dgf.")).passed


def test_condition_1_uncovered_vertex():
    rep = validate(MmpDiagram(4, ((0, 1, 2),)))
    assert [v.condition for v in rep.violations] == ["1"]
    assert rep.violations[0].vertices == (3,)


def test_condition_2_only_with_two_or_more_vertices():
    assert validate(MmpDiagram(1, ((0,),))).passed
    rep = validate(MmpDiagram(3, ((0,), (1, 2))))
    assert [v.condition for v in rep.violations] == ["2"]


def test_duplicate_blocks_rejected():
    rep = validate(MmpDiagram(3, ((0, 1, 2), (2, 1, 0))))
    assert [v.condition for v in rep.violations] == ["duplicate"]


def test_greechie_warnings_are_separate():
    rep = validate(parse_mmp("abc,cde,efa,egb,dgf."), greechie=True)
    assert rep.passed
    assert any(w.condition == "greechie-loop-3" for w in rep.warnings)
    rep = validate(parse_mmp("abcd,abef."), greechie=True)
    assert rep.passed and [w.condition for w in rep.warnings] == ["greechie-loop-2"]
    rep = validate(parse_mmp("abc,cde,efg,gha."), greechie=True)
    assert [w.condition for w in rep.warnings] == ["greechie-loop-4"]
    assert validate(parse_mmp("abc,cde,efg,ghi,ija."), greechie=True).warnings == ()


# ------------------------------------------------------------------ properties

vertex_sets = st.lists(st.sets(st.integers(0, 61), min_size=3, max_size=5), min_size=1, max_size=8)


@settings(max_examples=80, deadline=None)
@given(vertex_sets)
def test_round_trip_is_isomorphic(sets):
    d = diagram_from_sets(sets)
    if d is None:
        return
    back = parse_mmp(serialize_mmp(d))
    assert are_isomorphic(back, d)
    assert back.blocks == d.blocks or brute_isomorphic(back, d)


@settings(max_examples=100, deadline=None)
@given(vertex_sets)
def test_round_trip_is_exact_after_first_appearance_renumbering(sets):
    d = diagram_from_sets(sets)
    if d is None:
        return
    once = parse_mmp(serialize_mmp(d))
    assert parse_mmp(serialize_mmp(once)) == once
