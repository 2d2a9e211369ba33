import pytest

from gpdef import corpus
from gpdef.algebra import algebra_from_text
from gpdef.bimodule import (
    DIMENSION_GUARD,
    bimodule_syzygy,
    check_sing_equiv_level,
    is_one_sided_projective,
    simple_bimodule,
    stable_isomorphism,
    transport,
    verify_decomposition,
    verify_lifted_syzygy_tensor,
    verify_syzygy_tensor,
)
from gpdef.deformation import ext1_classes, lift_from_cocycle, trivial_lift
from gpdef.errors import AlgebraMismatch, DimensionGuardExceeded, NoLiftSupplied, PreconditionFailed
from gpdef.modules import (
    indec_projective,
    is_isomorphic,
    regular_bimodule,
    regular_module,
    strip_projective_summands,
    syzygy,
    tensor_bimodules,
)


@pytest.mark.parametrize(
    "key, level, dim",
    [("dual-numbers", 1, 2), ("dual-numbers", 2, 2), ("six-vertex", 1, 174), ("six-vertex", 2, 114), ("nakayama", 1, 918), ("nakayama", 2, 54)],
)
def test_bimodule_syzygy_dimensions(key, level, dim):
    """Frozen from the minimal-resolution oracle over the enveloping algebra."""
    X = bimodule_syzygy(corpus.algebra(key), level)
    assert X.dim == dim
    assert is_one_sided_projective(X) == (True, True)


def test_regular_bimodule_restrictions(six_vertex):
    R = regular_bimodule(six_vertex)
    assert R.dim == 30
    assert is_isomorphic(R.restrict_left(), regular_module(six_vertex))


def test_tensor_with_regular_is_identity(six_vertex, gp_modules):
    R = regular_bimodule(six_vertex)
    for V in list(gp_modules.values())[::4]:
        assert is_isomorphic(transport(R, V), V)


def test_tensor_of_bimodules_dimension(dual_numbers):
    R = regular_bimodule(dual_numbers)
    X = bimodule_syzygy(dual_numbers, 1)
    assert tensor_bimodules(R, X).dim == X.dim
    assert stable_isomorphism(tensor_bimodules(X, R).module, X.module).verdict


def test_dimension_guard():
    verts = ", ".join(f"u{i}" for i in range(2))
    text = f"algebra Big {{ field Q; vertices {verts}; arrows a: u0 -> u1, b: u1 -> u0; relations {'*'.join(['a', 'b'] * 20)}*a; {'*'.join(['b', 'a'] * 20)}*b; }}"
    A = algebra_from_text(text, length_bound=60)
    assert A.dim > DIMENSION_GUARD
    with pytest.raises(DimensionGuardExceeded):
        bimodule_syzygy(A, 1)


def test_mismatched_pair_is_rejected(dual_numbers):
    other = corpus.algebra("local-square-zero")
    with pytest.raises(AlgebraMismatch):
        check_sing_equiv_level(regular_bimodule(dual_numbers), regular_bimodule(other), 0)


@pytest.mark.parametrize("level", [0, 1, 2])
def test_self_equivalence_dual_numbers(dual_numbers, level):
    X = bimodule_syzygy(dual_numbers, level) if level else regular_bimodule(dual_numbers)
    rep = check_sing_equiv_level(X, regular_bimodule(dual_numbers), level)
    assert rep.overall
    assert rep.to_json()["level"] == level


def test_wrong_level_fails(dual_numbers):
    # for the dual numbers Omega^2 is the regular bimodule while Omega^1 is its twist by x -> -x,
    # so the level-2 syzygy does not pass the level-1 suite
    rep = check_sing_equiv_level(bimodule_syzygy(dual_numbers, 2), regular_bimodule(dual_numbers), 1)
    assert not rep.overall
    assert "cond_iii" in rep.failing()


def test_corrupted_pair_witness(dual_numbers):
    rep = check_sing_equiv_level(simple_bimodule(dual_numbers), regular_bimodule(dual_numbers), 0)
    assert rep.failing() == ["cond_i", "cond_iii", "cond_iv"]
    assert rep.cond_i.witness["left_core_dim"] == 1
    assert rep.cond_ii.verdict


@pytest.mark.parametrize("ij", [(0, 0), (1, 2), (2, 4)])
def test_syzygy_tensor_six_vertex(six_vertex, gp_modules, ij):
    for i in (1, 2):
        rep = verify_syzygy_tensor(six_vertex, gp_modules[ij], i)
        assert rep.holds
        assert rep.core_dim == strip_projective_summands(syzygy(gp_modules[ij], i)).core.dim


def test_decomposition_both_sides(six_vertex, gp_modules):
    X = bimodule_syzygy(six_vertex, 1)
    R = regular_bimodule(six_vertex)
    rep = verify_decomposition(X, R, gp_modules[(0, 0)], 1, W=gp_modules[(1, 1)])
    assert rep.holds
    assert rep.extra["other_side"]["holds"]


def test_decomposition_requires_gp(six_vertex):
    X = bimodule_syzygy(six_vertex, 1)
    with pytest.raises(PreconditionFailed):
        verify_decomposition(X, regular_bimodule(six_vertex), indec_projective(six_vertex, 0), 1)


@pytest.mark.parametrize("i, order", [(0, 1), (1, 1), (1, 2), (2, 2)])
def test_lifted_syzygy_tensor_dual_numbers(dual_numbers, i, order):
    S = corpus.dual_numbers_simple()
    rep = verify_lifted_syzygy_tensor(dual_numbers, S, i, order)
    assert rep.holds
    assert rep.extra["lift_free"]["free"]


def test_lifted_syzygy_tensor_six_vertex(six_vertex, gp_modules):
    V = gp_modules[(0, 2)]
    rep = verify_lifted_syzygy_tensor(six_vertex, V, 1, 2)
    assert rep.holds


def test_lifted_syzygy_tensor_with_supplied_lift(dual_numbers):
    S = corpus.dual_numbers_simple()
    L = lift_from_cocycle(S, ext1_classes(S)[0])
    assert verify_lifted_syzygy_tensor(dual_numbers, S, 1, 2, lift=L).holds
    with pytest.raises(NoLiftSupplied):
        verify_lifted_syzygy_tensor(dual_numbers, S, 1, 3, lift=trivial_lift(S, 2))
    with pytest.raises(NoLiftSupplied):
        verify_lifted_syzygy_tensor(dual_numbers, S, 1, 3)
