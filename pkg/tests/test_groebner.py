import pytest
from koszulkit.algebra import RingDescriptor, format_poly, parse_poly
from koszulkit.exceptions import (
    BasisLimitError,
    InhomogeneousError,
    InputError,
    NotGroebnerError,
    RingMismatchError,
)
from koszulkit.groebner import (
    IdealBasis,
    LiftingBasis,
    ModuleBasis,
    basis_limit,
    buchberger,
    current_basis_limit,
    eliminate,
    intersect_ideals,
    normal_form,
    syzygies,
    vector_degree,
)

@pytest.fixture
def xy():
    return RingDescriptor(('x', 'y'))

def _ideal(ring, *texts):
    return IdealBasis(ring, tuple(parse_poly(text, ring) for text in texts))

def _formatted(ideal):
    return sorted(format_poly(g, ideal.ring) for g in ideal.generators)

def test_buchberger_adds_s_polynomials(xy):
    basis = buchberger(_ideal(xy, 'x^2 + y', 'x*y'))
    assert basis.is_groebner
    assert _formatted(basis) == ['x*y', 'x^2 + y', 'y^2']

def test_buchberger_makes_leading_coefficients_one(xy):
    basis = buchberger(_ideal(xy, '2*x - 4*y'))
    assert _formatted(basis) == ['x - 2*y']

def test_membership(xy):
    ideal = _ideal(xy, 'x^2 + y', 'x*y')
    assert ideal.contains(parse_poly('x^3', xy))
    assert not ideal.contains(parse_poly('x', xy))
    assert not normal_form(parse_poly('x^3', xy), buchberger(ideal))

def test_normal_form_needs_groebner_basis(xy):
    with pytest.raises(NotGroebnerError):
        normal_form(parse_poly('x', xy), _ideal(xy, 'x'))

def test_ideal_rejects_foreign_polynomials(xy):
    other = RingDescriptor(('x', 'y', 'z'))
    with pytest.raises(RingMismatchError):
        IdealBasis(xy, (parse_poly('x', other),))

def test_eliminate_twisted_parameter():
    ring = RingDescriptor(('t', 'x', 'y'))
    result = eliminate(_ideal(ring, 'x - t', 'y - t^2'), ['x', 'y'])
    assert result.ring.variables == ('x', 'y')
    assert _formatted(result) == ['x^2 - y']

def test_eliminate_rejects_unknown_variables(xy):
    with pytest.raises(InputError):
        eliminate(_ideal(xy, 'x'), ['w'])
    with pytest.raises(InputError):
        eliminate(_ideal(xy, 'x'), [])

def test_intersect_ideals(xy):
    result = intersect_ideals([_ideal(xy, 'x'), _ideal(xy, 'y')])
    assert _formatted(result) == ['x*y']

def test_intersect_three_ideals_in_parallel(xy):
    ideals = [_ideal(xy, 'x'), _ideal(xy, 'y'), _ideal(xy, 'x - y')]
    serial = intersect_ideals(ideals)
    parallel = intersect_ideals(ideals, threads=2)
    assert _formatted(serial) == _formatted(parallel)
    assert serial.contains(parse_poly('x^2*y - x*y^2', xy))
    assert not serial.contains(parse_poly('x*y', xy))

def test_intersect_needs_ideals():
    with pytest.raises(InputError):
        intersect_ideals([])

def test_basis_limit(xy):
    assert current_basis_limit() > 1
    with basis_limit(1):
        with pytest.raises(BasisLimitError):
            buchberger(_ideal(xy, 'x^2 + y', 'x*y'))

def test_syzygies_of_two_variables(xy):
    x, y = xy.poly_ring.gens
    gens = ModuleBasis(xy, 1, ((x,), (y,)))
    found = syzygies(gens)
    assert found.rank == 2
    assert found.shifts == (1, 1)
    assert len(found.elements) == 1
    a, b = found.elements[0]
    assert a * x + b * y == 0

def test_lifting(xy):
    x, y = xy.poly_ring.gens
    lifting = LiftingBasis(ModuleBasis(xy, 1, ((x,), (y,))))
    coefficients = lifting.lift((x * y,))
    assert coefficients is not None
    assert coefficients[0] * x + coefficients[1] * y == x * y
    assert lifting.lift((xy.one,)) is None

def test_vector_degree(xy):
    x, y = xy.poly_ring.gens
    assert vector_degree((x, xy.zero), (0, 1), xy) == 1
    assert vector_degree((xy.zero, xy.zero), (0, 0), xy) is None
    with pytest.raises(InhomogeneousError):
        vector_degree((x, y**2), (0, 0), xy)
