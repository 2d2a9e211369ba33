from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gpdef.linalg import Field, Q, SMat, Subspace, block_diag, hstack, kron

small = st.integers(-3, 3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    )


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_and_kernel_match_sympy(rows):
    m = SMat.from_rows(rows, Q)
    ref = sympy.Matrix(rows)
    assert m.rank() == ref.rank()
    ker = m.kernel()
    assert len(ker) == len(ref.nullspace())
    for v in ker:
        assert m.apply(v) == {}


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4))
def test_is_invertible_agrees_with_det(rows):
    if len(rows) != len(rows[0]):
        rows = [r[: len(rows)] + [0] * (len(rows) - len(r)) for r in rows]
    m = SMat.from_rows(rows, Q, ncols=len(rows))
    assert m.is_invertible() == (sympy.Matrix(rows).det() != 0)


def test_inverse_round_trip():
    m = SMat.from_rows([[2, 1], [1, 1]], Q)
    assert (m @ m.inverse()) == SMat.identity(2, Q)


@pytest.mark.parametrize("p", [2, 3, 7])
def test_prime_field_arithmetic(p):
    F = Field(p)
    assert Field(p) is F
    m = SMat.from_rows([[1, 1], [1, F(p + 1)]], F)
    assert m.rank() == 1
    assert F.format(F.frac(1, 3 if p == 2 else 2) * (3 if p == 2 else 2)) == "1"


def test_field_parse_and_format():
    assert Q.format(Q("3/6")) == "1/2"
    assert Q.to_fraction(Q(Fraction(-4, 6))) == Fraction(-2, 3)
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(ZeroDivisionError):
        Field(3).frac(1, 3)


def test_block_helpers():
    a = SMat.from_rows([[1, 2]], Q)
    b = SMat.from_rows([[3], [4]], Q)
    d = block_diag(a, b)
    assert d.shape == (3, 3)
    assert d.tolist()[1][2] == Q(3)
    assert hstack(a, a).shape == (1, 4)
    assert kron(a, b).shape == (2, 2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5))
def test_subspace_span_and_membership(vecs):
    dicts = [{i: Q(x) for i, x in enumerate(v) if x} for v in vecs]
    S = Subspace.span(dicts, 4, Q)
    assert S.dim == sympy.Matrix(vecs).rank()
    for v in dicts:
        assert v in S
        assert S.reduce(v) == {}
    assert S.dim + len(S.complement()) == 4
