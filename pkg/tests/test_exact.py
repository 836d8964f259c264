import random
from fractions import Fraction

import numpy as np
import pytest

from mmpkit.exact import check_farkas, dot, nullspace, primitive, rank, rref, solve_lp

from oracles import float_lp_min


def test_nullspace_of_two_orthogonality_rows():
    basis = nullspace([(1, 1, 0), (0, 1, 1)], 3)
    assert len(basis) == 1
    assert primitive(basis[0]) == (1, -1, 1)


def test_nullspace_without_rows_is_the_standard_basis():
    assert nullspace([], 2) == [(1, 0), (0, 1)]


def test_nullspace_against_numpy_rank():
    rng = random.Random(1)
    for _ in range(100):
        ncols = rng.randint(1, 6)
        rows = [[rng.randint(-3, 3) for _ in range(ncols)] for _ in range(rng.randint(0, 5))]
        basis = nullspace(rows, ncols)
        expected = ncols - (np.linalg.matrix_rank(np.array(rows)) if rows else 0)
        assert len(basis) == expected == ncols - rank(rows, ncols)
        for v in basis:
            assert all(dot(r, v) == 0 for r in rows)


def test_rref_pivots():
    red, piv = rref([(2, 4, 6), (1, 2, 4)], 3)
    assert piv == [0, 2]
    assert red == [[1, 2, 0], [0, 0, 1]]


def test_primitive_keeps_sign_and_clears_denominators():
    assert primitive((Fraction(1, 2), Fraction(-1, 3))) == (3, -2)
    assert primitive((0, -4, 6)) == (0, -2, 3)
    assert primitive((0, 0)) == (0, 0)


def test_simple_lp():
    # min x1 + 2 x2 s.t. x1 + x2 = 1
    res = solve_lp([[1, 1]], [1], [1, 2])
    assert res.status == "optimal"
    assert res.x == (1, 0) and res.value == 1


def test_infeasible_lp_gives_farkas_certificate():
    A, b = [[1, 1], [1, 1]], [1, 2]
    res = solve_lp(A, b)
    assert res.status == "infeasible"
    assert check_farkas(A, b, res.farkas)


def test_unbounded_lp():
    assert solve_lp([[1, -1]], [0], [-1, 0]).status == "unbounded"


def test_redundant_rows_are_harmless():
    res = solve_lp([[1, 1, 0], [1, 1, 0], [0, 1, 1]], [1, 1, 1], [0, 0, 1])
    assert res.status == "optimal" and res.value == 0


@pytest.mark.parametrize("seed", range(40))
def test_lp_agrees_with_float_solver(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 5), rng.randint(2, 7)
    A = [[rng.randint(0, 2) for _ in range(n)] for _ in range(m)]
    b = [rng.randint(0, 3) for _ in range(m)]
    c = [rng.randint(0, 4) for _ in range(n)]
    res = solve_lp(A, b, c)
    ref = float_lp_min(A, b, c)
    if ref is None:
        assert res.status == "infeasible"
        assert check_farkas(A, b, res.farkas)
    else:
        assert res.status == "optimal"
        assert abs(float(res.value) - ref) < 1e-9
        assert all(x >= 0 for x in res.x)
        assert all(dot(row, res.x) == bi for row, bi in zip(A, b))
