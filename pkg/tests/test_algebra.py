import pytest
from hypothesis import given, settings, strategies as st

from gpdef import corpus
from gpdef.algebra import (
    algebra_from_text,
    build_path_algebra,
    check_associativity,
    check_unit_and_idempotents,
    enveloping,
    is_nakayama,
    morita_ring,
    opposite,
    path_normal_form,
    tensor_algebras,
    truncated_polynomial,
)
from gpdef.errors import FieldMismatch, NotFiniteDimensional, SidedStructureMismatch
from gpdef.linalg import Field
from gpdef.modules import regular_bimodule, regular_module, loewy_length
from gpdef.presentation import parse_presentation


@pytest.mark.parametrize(
    "key, dim",
    [("six-vertex", 30), ("nakayama", 54), ("cm-free", 4), ("local-square-zero", 2), ("dual-numbers", 2)],
)
def test_corpus_algebra_dimensions(key, dim):
    A = corpus.algebra(key)
    assert A.dim == dim
    assert check_unit_and_idempotents(A)
    assert check_associativity(A, samples=500)


def test_commutativity_relation_identifies_paths(six_vertex):
    # alpha_0 * beta_0 equals the length-six gamma cycle at v0
    lhs = path_normal_form(six_vertex, ["α₀", "β₀"])
    rhs = path_normal_form(six_vertex, ["γ₁", "γ₂", "γ₀", "γ₁", "γ₂", "γ₀"])
    assert lhs == rhs and lhs
    assert path_normal_form(six_vertex, ["β₀", "α₀"]) == {}


def test_projective_dimensions_six_vertex(six_vertex):
    assert sorted(len(six_vertex.by_source[v]) for v in range(6)) == [2, 2, 2, 8, 8, 8]


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_truncated_polynomial(n):
    T = truncated_polynomial(n)
    assert T.dim == n
    assert truncated_polynomial(n) is T
    assert loewy_length(regular_module(T)) == n


def test_opposite_is_an_involution(six_vertex):
    op = opposite(six_vertex)
    assert opposite(op) is six_vertex
    assert op.dim == six_vertex.dim
    assert check_associativity(op, samples=300)
    a, b = six_vertex.arrow_basis["γ₁"], six_vertex.arrow_basis["γ₂"]
    assert op.mul(b, a) == six_vertex.mul(a, b)


@pytest.mark.parametrize("key", ["dual-numbers", "cm-free", "local-square-zero"])
def test_enveloping_algebra(key):
    A = corpus.algebra(key)
    E = enveloping(A)
    assert enveloping(A) is E
    assert E.dim == A.dim ** 2
    assert E.nvertices == A.nvertices ** 2
    assert check_associativity(E, samples=300)
    assert check_unit_and_idempotents(E)


def test_tensor_with_truncation(dual_numbers):
    T = tensor_algebras(dual_numbers, truncated_polynomial(3))
    assert T.dim == 6
    assert check_associativity(T, samples=300)


def test_morita_ring_from_regular_bimodules(dual_numbers):
    R = regular_bimodule(dual_numbers)
    M = morita_ring(dual_numbers, dual_numbers, R, R)
    assert M.dim == 8
    assert check_associativity(M, samples=500)
    assert check_unit_and_idempotents(M)


def test_morita_ring_rejects_mismatched_sides(dual_numbers):
    R = regular_bimodule(corpus.algebra("local-square-zero"))
    with pytest.raises(SidedStructureMismatch):
        morita_ring(dual_numbers, dual_numbers, R, R)
    other = algebra_from_text("algebra D3 { field F<3>; vertices v; arrows x: v -> v; relations x*x; }")
    with pytest.raises(FieldMismatch):
        morita_ring(dual_numbers, other, regular_bimodule(dual_numbers), regular_bimodule(other))


def test_infinite_dimensional_input_is_rejected():
    with pytest.raises(NotFiniteDimensional):
        algebra_from_text("algebra K { field Q; vertices v; arrows x: v -> v; }", length_bound=6)


def test_length_bound_overrides(nakayama):
    p = parse_presentation(corpus.NAKAYAMA_TEXT)
    with pytest.raises(NotFiniteDimensional):
        build_path_algebra(p, length_bound=10)
    assert build_path_algebra(p, length_bound=25).dim == nakayama.dim


@pytest.mark.parametrize("key, expected", [("nakayama", True), ("six-vertex", False), ("local-square-zero", True), ("cm-free", False)])
def test_nakayama_shape(key, expected):
    assert is_nakayama(corpus.algebra(key)) is expected


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(2, 5), st.sampled_from([None, 2, 5]))
def test_cyclic_truncations_have_expected_dimension(n, length, p):
    """A directed n-cycle with all paths of a fixed length killed has dimension n * length."""
    verts = ", ".join(f"x{i}" for i in range(n))
    arrows = ", ".join(f"c{i}: x{i} -> x{(i + 1) % n}" for i in range(n))
    rels = []
    for s in range(n):
        path = [f"c{(s + k) % n}" for k in range(length)]
        rels.append("*".join(reversed(path)))
    field = "Q" if p is None else f"F<{p}>"
    A = algebra_from_text(f"algebra C {{ field {field}; vertices {verts}; arrows {arrows}; relations {'; '.join(rels)}; }}")
    assert A.dim == n * length
    assert A.field is Field(p)
    assert check_associativity(A, samples=200)
