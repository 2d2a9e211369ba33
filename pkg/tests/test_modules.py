import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gpdef import corpus
from gpdef.algebra import algebra_from_text, build_path_algebra
from gpdef.errors import FieldTooSmall, InvalidString, RelationViolated
from gpdef.modules import (
    ModuleMap,
    direct_sum,
    endomorphism_basis,
    enumerate_string_modules,
    find_isomorphism,
    hom_dim,
    hom_space,
    hom_space_dense,
    indec_projective,
    is_indecomposable,
    is_isomorphic,
    is_projective,
    loewy_length,
    projective_cover,
    realize,
    regular_module,
    simple_module,
    string_module,
    strip_projective_summands,
    syzygy,
    syzygy_with_inclusion,
    top_dims,
)
from gpdef.presentation import parse_document, parse_string_word
from gpdef.textio import Workspace, module_text

GP_KEYS = [(i, j) for i in range(3) for j in range(5)]


@pytest.mark.parametrize("j, dim", [(0, 7), (1, 6), (2, 5), (3, 4), (4, 3)])
def test_string_module_dimensions(gp_modules, j, dim):
    for i in range(3):
        V = gp_modules[(i, j)]
        assert V.dim == dim
        assert V.check_relations()
        assert sum(top_dims(V)) >= 1


def test_string_module_rejects_relation_subword(six_vertex):
    w = parse_string_word("β₀ * α₀", six_vertex.presentation)
    with pytest.raises(InvalidString):
        string_module(w, six_vertex)


def test_projectives(six_vertex):
    for v in range(six_vertex.nvertices):
        P = indec_projective(six_vertex, v)
        assert P.dim == len(six_vertex.by_source[v])
        assert is_projective(P)
        assert is_indecomposable(P)
        assert syzygy(P).dim == 0
    R = regular_module(six_vertex)
    assert R.dim == 30
    assert strip_projective_summands(R).core.dim == 0


@pytest.mark.parametrize("ij", GP_KEYS[::2])
def test_hom_matches_dense_oracle(gp_modules, ij):
    V = gp_modules[ij]
    for W in (gp_modules[(ij[0], 0)], gp_modules[((ij[0] + 1) % 3, 4)], V):
        H = hom_space(V, W)
        assert H.dim == len(hom_space_dense(V, W))
        for k in range(H.dim):
            f = H.to_map(H.vectors[k])
            assert f.is_homomorphism()


def test_endomorphisms_of_string_modules_are_local(gp_modules):
    for V in gp_modules.values():
        basis = endomorphism_basis(V)
        assert basis and basis[0].source is V
        assert is_indecomposable(V)


def test_projective_cover_is_surjective(gp_modules):
    V = gp_modules[(1, 0)]
    P, pi = projective_cover(V)
    assert pi.is_homomorphism()
    assert pi.rank() == V.dim
    K, inc = syzygy_with_inclusion(V)
    assert K.dim == P.dim - V.dim
    assert (pi @ inc).is_zero()


corpus_pairs = st.sampled_from(GP_KEYS)


@settings(max_examples=20, deadline=None)
@given(corpus_pairs, corpus_pairs)
def test_syzygy_commutes_with_direct_sums(a, b):
    M, N = corpus.gp_module(*a), corpus.gp_module(*b)
    S = direct_sum(M, N)
    lhs = syzygy(S)
    rhs = direct_sum(syzygy(M), syzygy(N))
    assert lhs.dims == rhs.dims
    assert is_isomorphic(lhs, rhs)


@settings(max_examples=20, deadline=None)
@given(corpus_pairs, corpus_pairs)
def test_hom_is_additive(a, b):
    M, N = corpus.gp_module(*a), corpus.gp_module(*b)
    assert hom_dim(direct_sum(M, N), M) == hom_dim(M, M) + hom_dim(N, M)


def test_isomorphism_detects_non_isomorphic(gp_modules):
    assert not is_isomorphic(gp_modules[(0, 0)], gp_modules[(1, 0)])
    f = find_isomorphism(gp_modules[(2, 3)], gp_modules[(2, 3)])
    assert f is not None and f.is_isomorphism()


def test_strip_recovers_added_projectives(gp_modules, six_vertex):
    V = gp_modules[(0, 1)]
    P = indec_projective(six_vertex, 3)
    S = strip_projective_summands(direct_sum(V, P, P, indec_projective(six_vertex, 0)))
    assert S.core.dim == V.dim
    assert is_isomorphic(S.core, V)
    assert S.multiplicities() == {"v0": 1, "v0'": 2}


def test_realize_checks_relations():
    text = "algebra L { field Q; vertices v; arrows x: v -> v; relations x*x; } module M over L { dims {v: 2}; arrow x = [[1, 0], [0, 0]]; }"
    doc = parse_document(text)
    A = build_path_algebra(doc.algebras["L"])
    with pytest.raises(RelationViolated) as info:
        realize(doc.modules["M"], A)
    assert info.value.entry == (0, 0)


def test_field_too_small_is_reported():
    A = algebra_from_text("algebra D { field F<2>; vertices v; arrows x: v -> v; relations x*x; }")
    with pytest.raises(FieldTooSmall):
        is_indecomposable(regular_module(A))


def test_enumerated_cm_free_witnesses():
    A = corpus.algebra("cm-free")
    mods = enumerate_string_modules(A, 6)
    assert [M.dim for M in mods] == [1, 1, 2, 2, 3]
    for M, N in itertools.combinations(mods, 2):
        assert not is_isomorphic(M, N)
    assert sum(is_projective(M) for M in mods) == 2


def test_loewy_lengths(gp_modules, nakayama):
    assert loewy_length(regular_module(nakayama)) == 18
    assert loewy_length(simple_module(nakayama, 0)) == 1
    assert loewy_length(corpus.nakayama_module("U10")) == 10


@pytest.mark.parametrize("ij", [(0, 0), (1, 3), (2, 4)])
def test_module_text_round_trip(gp_modules, ij):
    V = gp_modules[ij]
    W = Workspace().add_text(module_text(V, "W")).modules["W"]
    f = ModuleMap(V, W, ModuleMap.identity(V).blocks)
    assert f.is_homomorphism()
