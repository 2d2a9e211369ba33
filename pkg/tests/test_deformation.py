import random

import pytest

from gpdef import corpus
from gpdef.algebra import algebra_from_text
from gpdef.deformation import (
    apply_gauge,
    coboundaries,
    cocycles,
    ext1_classes,
    extend_lift,
    first_order_lifts,
    gauge_stability,
    lift_equivalent,
    lift_from_cocycle,
    middle_term,
    random_gauge,
    tangent_dimension,
    trivial_lift,
    udr_truncation_report,
    verify_syzygy_invariance,
)
from gpdef.errors import PreconditionFailed
from gpdef.homology import ext_dim
from gpdef.modules import is_projective, simple_module, strip_projective_summands

GP_KEYS = [(i, j) for i in range(3) for j in range(5)]


def truncated_simple(m):
    A = algebra_from_text(f"algebra K{m} {{ field Q; vertices o; arrows x: o -> o; relations {'*'.join(['x'] * m)}; }}")
    return simple_module(A, 0)


@pytest.mark.parametrize("ij", GP_KEYS)
def test_tangent_equals_ext1(gp_modules, ij):
    V = gp_modules[ij]
    assert tangent_dimension(V) == ext_dim(V, V, 1)
    assert len(cocycles(V)) - coboundaries(V).dim == tangent_dimension(V)


@pytest.mark.parametrize("ij", [(0, 2), (1, 2), (2, 2)])
def test_first_order_lifts_are_valid(gp_modules, ij):
    V = gp_modules[ij]
    lifts = first_order_lifts(V)
    assert lifts[0].is_trivial()
    assert len(lifts) == 2
    for L in lifts:
        assert L.is_valid()
        assert L.as_module().dim == 2 * V.dim


@pytest.mark.parametrize("m", [2, 3, 4])
def test_truncated_polynomial_simple_ring(m):
    """The simple module over k[x]/(x^m) lifts exactly up to order m."""
    S = truncated_simple(m)
    rep = udr_truncation_report(S, max_order=m + 2)
    assert rep.tangent == 1
    assert rep.ring == f"consistent with k[t]/(t^{m})"
    assert rep.obstructed_order == m + 1
    assert rep.exact is (m == 2)


def test_short_truncation_stays_open():
    rep = udr_truncation_report(truncated_simple(5), max_order=3)
    assert rep.ring == "consistent with k[[t]] up to order 3"
    assert rep.obstructed_order is None


def test_rigid_module_has_trivial_ring(gp_modules):
    rep = udr_truncation_report(gp_modules[(0, 0)])
    assert rep.ring == "R = k" and rep.exact


def test_local_simple_obstructed_at_three():
    S = corpus.local_simple()
    L = lift_from_cocycle(S, ext1_classes(S)[0])
    res = extend_lift(L)
    assert not res.ok
    assert res.order == 3
    assert res.to_json()["relations"]


def test_trivial_lift_always_extends(gp_modules):
    L = trivial_lift(gp_modules[(1, 1)], 3)
    res = extend_lift(L)
    assert res.ok and res.lift.order == 4


def test_gauge_transform_preserves_lift_class(gp_modules):
    V = gp_modules[(0, 2)]
    L = first_order_lifts(V)[1]
    G = apply_gauge(L, random_gauge(V, 2, random.Random(3)))
    assert G.is_valid()
    assert lift_equivalent(L, G)
    assert not lift_equivalent(L, first_order_lifts(V)[0])


@pytest.mark.parametrize("ij", [(0, 2), (2, 3), (1, 0)])
def test_gauge_stability(gp_modules, ij):
    for L in first_order_lifts(gp_modules[ij]):
        rep = gauge_stability(L, trials=20, seed=11)
        assert rep["stable"] and len(rep["verdicts"]) == 20


def test_middle_term_of_self_extension(gp_modules, six_vertex):
    V = gp_modules[(0, 2)]
    E = middle_term(first_order_lifts(V)[1])
    assert E.dim == 2 * V.dim
    # frozen from the projective-stripping oracle: the middle term is projective
    S = strip_projective_summands(E)
    assert S.core.dim == 0 and is_projective(E)
    assert sum(S.multiplicities().values()) == 2


def test_syzygy_invariance_report(gp_modules):
    rep = verify_syzygy_invariance(gp_modules[(1, 2)])
    assert rep.holds
    assert rep.source["udr"] == rep.image["udr"]


def test_udr_needs_stable_end_one():
    with pytest.raises(PreconditionFailed) as info:
        udr_truncation_report(corpus.nakayama_module("U4"))
    assert info.value.certificate == "stable_end_dim"
