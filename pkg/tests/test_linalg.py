from sympy import GF, QQ
from koszulkit.linalg import (
    exact_rank,
    independent_columns,
    matmul,
    nullspace,
    rank_mod_p,
    rank_with_prepass,
    reduce_mod_p,
)

def _matrix(rows):
    return {(r, c): QQ(value) for r, row in enumerate(rows) for c, value in enumerate(row) if value}

def test_exact_rank():
    assert exact_rank({}) == 0
    assert exact_rank(_matrix([[1, 1], [0, 2]])) == 2
    assert exact_rank(_matrix([[1, 2], [2, 4]])) == 1

def test_exact_rank_splits_blocks():
    entries = _matrix([[1, 0, 0], [0, 1, 1], [0, 1, 1]])
    assert exact_rank(entries) == 2

def test_rank_mod_p_is_lower_bound():
    entries = _matrix([[1, 1], [1, 3]])
    assert exact_rank(entries) == 2
    assert rank_mod_p(entries, 2) == 1
    assert rank_mod_p(entries, 5) == 2

def test_reduce_mod_p_rejects_denominators():
    assert reduce_mod_p({(0, 0): QQ(1, 2)}, 2) is None
    assert rank_mod_p({(0, 0): QQ(1, 2)}, 2) is None

def test_rank_with_prepass():
    assert rank_with_prepass(_matrix([[1, 0], [0, 1]]), QQ, 7) == (2, True)
    assert rank_with_prepass(_matrix([[1, 1], [1, 1]]), QQ, 7) == (1, False)
    assert rank_with_prepass(_matrix([[1, 1], [1, 3]]), QQ, 2) == (2, False)

def test_independent_columns():
    entries = _matrix([[1, 2, 0], [0, 0, 1]])
    assert independent_columns(entries) == [0, 2]

def test_nullspace_includes_empty_columns():
    basis = nullspace(_matrix([[1, 1]]), 3)
    assert len(basis) == 2
    assert {2: QQ(1)} in basis
    kernel = next(v for v in basis if 0 in v)
    assert kernel[0] + kernel[1] == 0

def test_matmul():
    left = _matrix([[1, 2], [0, 1]])
    right = _matrix([[1, -2], [0, 1]])
    assert matmul(left, right) == _matrix([[1, 0], [0, 1]])

def test_prime_field_rank():
    field = GF(3, symmetric=False)
    entries = {(0, 0): field(1), (0, 1): field(1), (1, 0): field(2), (1, 1): field(2)}
    assert exact_rank(entries, field) == 1
