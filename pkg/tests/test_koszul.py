import pytest
from unittest.mock import patch
from koszulkit.algebra import RingDescriptor, parse_poly
from koszulkit.const import CERTIFIED_NONZERO, DEFAULT_PRIME, HYPOTHESES_FAIL
from koszulkit.exceptions import DegreeError, SubmoduleError
from koszulkit.gradedmod import GradedFreeModule, GradedModule, betti_table, free_module, quotient_module
from koszulkit.koszul import (
    koszul_cohomology_dim,
    koszul_differential,
    koszul_table,
    nonvanishing_certificate,
)

@pytest.fixture
def xy():
    return RingDescriptor(('x', 'y'))

@pytest.fixture
def three_quadrics():
    ring = RingDescriptor(('x', 'y', 'z'))
    return quotient_module(ring, [parse_poly(text, ring) for text in ('x^2', 'y^2', 'z^2')])

def test_koszul_of_point_matches_betti(xy):
    x, y = xy.poly_ring.gens
    M = quotient_module(xy, [x, y])
    table = koszul_table(M, None, range(3), range(0, 2))
    assert table.entries == {(0, 0): 1, (1, 0): 2, (2, 0): 1}
    assert table == betti_table(M)

def test_koszul_of_complete_intersection_matches_betti(three_quadrics):
    koszul = koszul_table(three_quadrics, None, range(4), range(0, 5))
    assert koszul.entries == betti_table(three_quadrics).entries
    assert koszul[(3, 3)] == 1
    assert koszul[(1, 1)] == 3

def test_koszul_table_is_thread_independent(three_quadrics):
    single = koszul_table(three_quadrics, None, range(4), range(0, 4), threads=1)
    parallel = koszul_table(three_quadrics, None, range(4), range(0, 4), threads=4)
    assert single == parallel

def test_modular_prepass_agrees(three_quadrics):
    for p in range(4):
        for q in range(4):
            exact = koszul_cohomology_dim(three_quadrics, None, p, q)
            assert koszul_cohomology_dim(three_quadrics, None, p, q, DEFAULT_PRIME) == exact

def test_koszul_of_free_module(xy):
    S = free_module(xy)
    assert koszul_cohomology_dim(S, None, 0, 0) == 1
    assert koszul_cohomology_dim(S, None, 1, 0) == 0
    assert koszul_cohomology_dim(S, None, 0, 1) == 0
    assert koszul_cohomology_dim(S, None, 3, 0) == 0

def test_differential_sign_convention(xy):
    x, y = xy.poly_ring.gens
    S = free_module(xy)
    d = koszul_differential(S, [x, y], 2, 0)
    assert d.shape == (4, 1)
    values = sorted(int(value) for value in d.entries.values())
    assert values == [-1, 1]

def test_differential_squares_to_zero(three_quadrics):
    V = list(three_quadrics.ring.poly_ring.gens)
    upper = koszul_differential(three_quadrics, V, 2, 1)
    lower = koszul_differential(three_quadrics, V, 1, 2)
    composite = {}
    for (k, c), a in upper.entries.items():
        for (r, k2), b in lower.entries.items():
            if k == k2:
                composite[(r, c)] = composite.get((r, c), 0) + b * a
    assert not any(composite.values())

def test_nonlinear_v_rejected(xy):
    x, y = xy.poly_ring.gens
    with pytest.raises(DegreeError):
        koszul_cohomology_dim(free_module(xy), [x**2, y], 1, 0)

def test_custom_v(xy):
    x, y = xy.poly_ring.gens
    M = quotient_module(xy, [x, y])
    assert koszul_cohomology_dim(M, [x + y], 1, 0) == 1
    assert koszul_cohomology_dim(M, [x + y], 0, 0) == 1

def test_certificate_for_maximal_ideal(xy):
    x, y = xy.poly_ring.gens
    certificate = nonvanishing_certificate(free_module(xy), [(x,), (y,)])
    assert certificate.verdict == CERTIFIED_NONZERO
    assert certificate.r == 1
    assert certificate.dimension == 1
    assert all(certificate.as_dict()['hypotheses'].values())

def test_certificate_with_nonzero_degree_zero_part():
    ring = RingDescriptor(('x', 'y', 'z'))
    x, y, z = ring.poly_ring.gens
    zero, one = ring.zero, ring.one
    N = GradedModule(GradedFreeModule(ring, (0, 0)))
    certificate = nonvanishing_certificate(N, [(one, zero), (zero, x), (zero, y), (zero, z)])
    assert certificate.verdict == CERTIFIED_NONZERO
    assert certificate.hypotheses['proper_in_degree_0']
    assert certificate.r == 2
    assert certificate.dimension == 1

def test_certificate_hypotheses_fail(xy):
    certificate = nonvanishing_certificate(free_module(xy), [(xy.one,)])
    assert certificate.verdict == HYPOTHESES_FAIL
    assert not certificate.hypotheses['proper_in_degree_0']
    assert certificate.dimension is None

def test_certificate_rejects_foreign_vectors(xy):
    x, y = xy.poly_ring.gens
    with pytest.raises(SubmoduleError):
        nonvanishing_certificate(free_module(xy), [(x, y)])

def test_certificate_logs_failed_hypotheses(xy):
    with patch('koszulkit.koszul._LOGGER') as mock_logger:
        nonvanishing_certificate(free_module(xy), [(xy.one,)])
        mock_logger.debug.assert_called()
