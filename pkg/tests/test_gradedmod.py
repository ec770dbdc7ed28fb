import pytest
from koszulkit.algebra import RingDescriptor, parse_poly
from koszulkit.exceptions import InhomogeneousError, InputError, ResolutionLengthError
from koszulkit.gradedmod import (
    BettiTable,
    GradedFreeModule,
    GradedModule,
    betti_table,
    euler_characteristic_check,
    format_module,
    free_module,
    free_resolution,
    hilbert_values,
    minimal_free_resolution,
    minimal_presentation,
    parse_module_json,
    parse_module_text,
    polynomial_ring_dimension,
    quotient_module,
    submodule_presentation,
)

@pytest.fixture
def xy():
    return RingDescriptor(('x', 'y'))

@pytest.fixture
def twisted_cubic():
    ring = RingDescriptor(('a', 'b', 'c', 'd'))
    minors = ['a*c - b^2', 'a*d - b*c', 'b*d - c^2']
    return quotient_module(ring, [parse_poly(text, ring) for text in minors])

def test_hilbert_function_of_point(xy):
    x, y = xy.poly_ring.gens
    M = quotient_module(xy, [x, y])
    assert M.dimension(0) == 1
    assert M.dimension(1) == 0
    assert M.dimension(-1) == 0

def test_hilbert_values(xy):
    x, _ = xy.poly_ring.gens
    M = quotient_module(xy, [x**2])
    assert hilbert_values(M, range(4)) == {0: 1, 1: 2, 2: 2, 3: 2}
    assert hilbert_values(M, range(4), threads=2) == {0: 1, 1: 2, 2: 2, 3: 2}

def test_twisted_cubic_hilbert_function(twisted_cubic):
    assert [twisted_cubic.dimension(q) for q in range(5)] == [1, 4, 7, 10, 13]

def test_betti_table_of_point(xy):
    x, y = xy.poly_ring.gens
    table = betti_table(quotient_module(xy, [x, y]))
    assert table.entries == {(0, 0): 1, (1, 0): 2, (2, 0): 1}
    assert table.to_text().splitlines()[1] == 'total: 1 2 1'

def test_betti_table_of_twisted_cubic(twisted_cubic):
    table = betti_table(twisted_cubic)
    assert table.entries == {(0, 0): 1, (1, 1): 3, (2, 1): 2}
    assert table.totals() == {0: 1, 1: 3, 2: 2}

def test_resolution_checks(twisted_cubic):
    resolution = minimal_free_resolution(twisted_cubic)
    assert resolution.ranks == [1, 3, 2]
    assert resolution.is_minimal()
    assert resolution.composes_to_zero()
    for q in range(5):
        assert euler_characteristic_check(twisted_cubic, resolution, q)

def test_non_minimal_resolution(xy):
    x, y = xy.poly_ring.gens
    M = quotient_module(xy, [x, y, x + y])
    resolution = free_resolution(M)
    assert resolution.ranks[:2] == [1, 3]
    assert resolution.composes_to_zero()
    assert betti_table(M).entries == {(0, 0): 1, (1, 0): 2, (2, 0): 1}

def test_resolution_length_guard(xy):
    x, y = xy.poly_ring.gens
    with pytest.raises(ResolutionLengthError):
        minimal_free_resolution(quotient_module(xy, [x, y]), max_length=1)

def test_minimal_presentation_strikes_units(xy):
    x, y = xy.poly_ring.gens
    one, zero = xy.one, xy.zero
    M = GradedModule(GradedFreeModule(xy, (0, 0)), [(one, -one), (x, zero)])
    presented = minimal_presentation(M)
    assert presented.rank == 1
    assert [presented.dimension(q) for q in range(3)] == [M.dimension(q) for q in range(3)]

def test_free_module_betti_table():
    ring = RingDescriptor(('x', 'y', 'z'))
    assert betti_table(free_module(ring, (0, 1))).entries == {(0, 0): 1, (0, 1): 1}

def test_inhomogeneous_relation(xy):
    with pytest.raises(InhomogeneousError):
        quotient_module(xy, [parse_poly('x + y^2', xy)])

def test_submodule_presentation(xy):
    x, y = xy.poly_ring.gens
    M = submodule_presentation(free_module(xy), [(x,), (y,)])
    assert M.shifts == (1, 1)
    assert len(M.relations) == 1
    assert [M.dimension(q) for q in range(4)] == [0, 2, 3, 4]

def test_parse_module_text():
    text = 'vars: x, y\nshifts: 0\nrelation: x\nrelation: y'
    M = parse_module_text(text)
    assert M.rank == 1
    assert len(M.relations) == 2
    assert format_module(M) == text

def test_parse_module_text_errors():
    with pytest.raises(InputError):
        parse_module_text('vars: x\ncolour: red')
    with pytest.raises(InputError):
        parse_module_text('vars: x, y\nshifts: 0 0\nrelation: x')
    with pytest.raises(InputError):
        parse_module_text('vars: x\nshifts: zero')

def test_parse_module_json_defaults():
    M = parse_module_json({'vars': ['x', 'y'], 'relations': [['x^2']]})
    assert M.shifts == (0,)
    assert M.dimension(2) == 2

def test_parse_module_json_schema_error():
    with pytest.raises(InputError):
        parse_module_json({'vars': []})

def test_polynomial_ring_dimension():
    assert polynomial_ring_dimension(RingDescriptor(('x', 'y', 'z')), 2) == 6
    assert polynomial_ring_dimension(RingDescriptor(('x', 'y', 'z')), -1) == 0
    assert polynomial_ring_dimension(RingDescriptor(('x', 'y'), (1, 2)), 4) == 3

def test_betti_table_formats():
    table = BettiTable({(0, 0): 1, (1, 1): 3, (2, 1): 0})
    assert table.entries == {(0, 0): 1, (1, 1): 3}
    assert table[(2, 1)] == 0
    assert table.to_csv() == 'p,q,value\n0,0,1\n1,1,3\n'
    assert table.to_json() == {'entries': [[0, 0, 1], [1, 1, 3]]}
    assert BettiTable().to_text() == '0'
