import pytest
from hypothesis import given, settings, strategies as st

from clusterforge.errors import NoSolution
from clusterforge.zlinalg import (
    FinAbGroup,
    IntMatrix,
    cokernel_structure,
    column_span_basis,
    group_from_factors,
    kernel_basis,
    rank_mod,
    snf,
    solve,
    solve_matrix,
    subquotient_structure,
)


def test_snf_identity():
    m = IntMatrix.identity(2)
    dec = snf(m)
    assert dec.S.entries == ((1, 0), (0, 1))


def test_snf_diag_2_3():
    dec = snf(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert dec.diagonal == (1, 6)


def test_snf_hand_example():
    m = IntMatrix.from_rows([[2, 4], [6, 8]])
    dec = snf(m)
    assert dec.diagonal == (2, 4)
    assert dec.U.mul(dec.S).mul(dec.V).entries == m.entries


def test_snf_empty_shapes():
    for rows, cols in [(0, 0), (0, 3), (3, 0)]:
        dec = snf(IntMatrix.zero(rows, cols))
        assert dec.U.mul(dec.S).mul(dec.V).entries == IntMatrix.zero(rows, cols).entries


def test_cokernel_examples():
    assert cokernel_structure(IntMatrix.from_rows([[0]])) == FinAbGroup(1)
    assert cokernel_structure(IntMatrix.from_rows([[2]])) == FinAbGroup(0, (2,))
    assert cokernel_structure(IntMatrix.from_rows([[2, 0], [0, 3]])) == FinAbGroup(0, (6,))


def test_kernel_examples():
    assert kernel_basis(IntMatrix.identity(3)).cols == 0
    assert kernel_basis(IntMatrix.from_rows([[1, 1]])).entries == ((1,), (-1,))
    assert kernel_basis(IntMatrix.from_rows([[2, 4]])).entries == ((2,), (-1,))


def test_solve_examples():
    assert solve(IntMatrix.from_rows([[2]]), (4,)) == (2,)
    with pytest.raises(NoSolution):
        solve(IntMatrix.from_rows([[2]]), (3,))
    m = IntMatrix.from_rows([[1, 2], [0, 0]])
    x = solve(m, (5, 0))
    assert m.mul_vec(x) == (5, 0)


def test_group_string():
    assert str(FinAbGroup(0)) == "0"
    assert str(FinAbGroup(2, (2, 6))) == "Z^2 + Z/2 + Z/6"


def test_group_from_factors_normalizes():
    assert group_from_factors(0, [2, 3]) == FinAbGroup(0, (6,))
    assert group_from_factors(0, [4, 6]) == FinAbGroup(0, (2, 12))
    assert group_from_factors(1, [0, 1, 5]) == FinAbGroup(2, (5,))


def test_subquotient():
    span = IntMatrix.from_rows([[2, 0], [0, 3]])
    rels = IntMatrix.from_rows([[4], [3]])
    # span Z(2,0)+Z(0,3), quotient by (4,3): coefficients (2,1) -> Z
    assert subquotient_structure(span, rels) == FinAbGroup(1)


matrices = st.integers(min_value=1, max_value=5).flatmap(
    lambda r: st.integers(min_value=1, max_value=5).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(min_value=-30, max_value=30), min_size=c, max_size=c),
            min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_reconstruction_property(rows):
    m = IntMatrix.from_rows(rows)
    dec = snf(m)
    assert dec.U.mul(dec.S).mul(dec.V).entries == m.entries
    assert dec.U.mul(dec.u_inv).entries == IntMatrix.identity(m.rows).entries
    assert dec.V.mul(dec.v_inv).entries == IntMatrix.identity(m.cols).entries
    diag = dec.diagonal
    for a, b in zip(diag, diag[1:]):
        assert a >= 0 and b >= 0
        if a != 0:
            assert b % a == 0
        else:
            assert b == 0


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_kernel_saturated_property(rows):
    m = IntMatrix.from_rows(rows)
    k = kernel_basis(m)
    assert m.mul(k).is_zero()
    if k.cols:
        assert all(d == 1 for d in snf(k).invariant_factors)
        assert snf(k).rank == k.cols


@settings(max_examples=40, deadline=None)
@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_cokernel_mod_p_dimension(rows, p):
    m = IntMatrix.from_rows(rows)
    g = cokernel_structure(m)
    expected = g.free_rank + sum(1 for d in g.torsion if d % p == 0)
    assert m.rows - rank_mod(m, p) == expected


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_square_determinant_matches_invariants(rows):
    m = IntMatrix.from_rows(rows)
    dec = snf(m)
    det = (m.entries[0][0] * (m.entries[1][1] * m.entries[2][2] - m.entries[1][2] * m.entries[2][1])
           - m.entries[0][1] * (m.entries[1][0] * m.entries[2][2] - m.entries[1][2] * m.entries[2][0])
           + m.entries[0][2] * (m.entries[1][0] * m.entries[2][1] - m.entries[1][1] * m.entries[2][0]))
    prod = 1
    for d in dec.diagonal:
        prod *= d
    assert abs(det) == prod


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_column_span_basis_spans(rows):
    m = IntMatrix.from_rows(rows)
    basis = column_span_basis(m)
    # every original column solves over the basis, and conversely
    if basis.cols:
        solve_matrix(basis, m)
    else:
        assert m.is_zero()
    if m.cols and not m.is_zero():
        solve_matrix(m, basis)
