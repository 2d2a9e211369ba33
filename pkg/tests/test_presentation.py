import pytest
from hypothesis import given, settings, strategies as st

from gpdef import corpus
from gpdef.errors import (
    DSLSyntaxError,
    DuplicateName,
    ImmediateInverse,
    NonAdmissibleRelation,
    NonComposablePath,
    NonComposableWalk,
    ShapeMismatch,
    UndeclaredName,
    UnknownArrow,
)
from gpdef.presentation import parse_document, parse_presentation, parse_string_word, serialize

LOCAL = "algebra L { field Q; vertices v; arrows x: v -> v; relations x*x; }"


@pytest.mark.parametrize("key", sorted(corpus.PRESENTATIONS))
def test_corpus_presentations_round_trip(key):
    p = parse_presentation(corpus.PRESENTATIONS[key])
    again = parse_presentation(serialize(p))
    assert again == p
    assert serialize(again) == serialize(p)


def test_six_vertex_shape():
    p = parse_presentation(corpus.SIX_VERTEX_TEXT)
    assert len(p.vertices) == 6
    assert len(p.arrows) == 9
    assert len(p.relations) == 12
    assert p.is_special_biserial_syntax()


@pytest.mark.parametrize(
    "text, exc",
    [
        ("algebra A { field Q; vertices v; arrows x: v -> w; }", UndeclaredName),
        ("algebra A { field Q; vertices v, v; }", DuplicateName),
        ("algebra A { field Q; vertices v, w; arrows x: v -> w, y: v -> w; relations x*y; }", NonComposablePath),
        ("algebra A { field Q; vertices v; arrows x: v -> v; relations x; }", NonAdmissibleRelation),
        ("algebra A { field Q; vertices v; arrows x: v -> v; relations x*z; }", UndeclaredName),
        ("algebra A { field Q vertices v; }", DSLSyntaxError),
        ("algebra A { field F<4>; vertices v; }", DSLSyntaxError),
    ],
)
def test_presentation_errors(text, exc):
    with pytest.raises(exc):
        parse_document(text)


def test_syntax_error_has_position():
    with pytest.raises(DSLSyntaxError) as info:
        parse_document("algebra A {\n  field Q\n  vertices v; }")
    assert info.value.line == 3
    assert info.value.expected == "';'"


def test_module_shape_mismatch():
    text = LOCAL + " module M over L { dims {v: 2}; arrow x = [[0, 1, 0]]; }"
    with pytest.raises(ShapeMismatch):
        parse_document(text)


def test_module_definition_round_trip():
    text = LOCAL + " module M over L { dims {v: 2}; arrow x = [[0, 0], [1/2, 0]]; }"
    doc = parse_document(text)
    spec = doc.modules["M"]
    assert spec.dims_map() == {"v": 2}
    again = parse_document(LOCAL + "\n" + serialize(spec)).modules["M"]
    assert again == spec


def test_bimodule_definition_keys():
    text = LOCAL + " module X over env(L, L) { dims {(v, v): 2}; arrow (x, v) = [[0, 0], [1, 0]]; arrow (v, x) = [[0, 0], [1, 0]]; }"
    spec = parse_document(text).modules["X"]
    assert spec.env == ("L", "L")


@pytest.mark.parametrize(
    "word, exc",
    [
        ("α₀ * α₀^-1", ImmediateInverse),
        ("γ₀ * γ₀", NonComposableWalk),
        ("δ", UnknownArrow),
    ],
)
def test_string_word_errors(word, exc):
    p = parse_presentation(corpus.SIX_VERTEX_TEXT)
    with pytest.raises(exc):
        parse_string_word(word, p)


def test_string_word_serializes():
    p = parse_presentation(corpus.SIX_VERTEX_TEXT)
    w = parse_string_word(corpus.gp_word(0, 0), p, name="V00")
    assert len(w) == 6
    assert parse_string_word(serialize(w), p) == w


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=4), st.integers(1, 5))
def test_generated_presentation_round_trip(arrows, k):
    """Random quivers on three vertices, with a length bound, survive a serialize/parse cycle."""
    verts = ["p", "q", "r"]
    decl = ", ".join(f"a{i}: {verts[s]} -> {verts[t]}" for i, (s, t) in enumerate(arrows))
    text = f"algebra G {{ field F<5>; vertices p, q, r; arrows {decl}; lenbound {k + 3}; }}"
    p = parse_presentation(text)
    assert parse_presentation(serialize(p)) == p
    assert p.field.p == 5
