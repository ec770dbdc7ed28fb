import pytest
from koszulkit.algebra import RingDescriptor, ScalarField, parse_poly
from koszulkit.exceptions import ActionError, CharacteristicError, InputError
from koszulkit.gradedmod import free_module, quotient_module
from koszulkit.groebner import IdealBasis
from koszulkit.symgrp import (
    SIGN,
    TRIVIAL,
    Character,
    PermAction,
    adjacent_transpositions,
    all_permutations,
    check_characteristic,
    compose,
    inverse,
    is_idempotent,
    isotypic_dimension,
    permutation_representation,
    reynolds,
    sign,
    space_isotypic_dimension,
    verify_action,
)

@pytest.fixture
def pair_ring():
    return RingDescriptor(('x1', 'x2', 'y1', 'y2'))

def test_permutation_basics():
    assert len(all_permutations(3)) == 6
    assert all_permutations(3)[0] == (0, 1, 2)
    sigma = (1, 2, 0)
    assert compose(sigma, inverse(sigma)) == (0, 1, 2)
    assert sign((1, 0, 2)) == -1
    assert sign(sigma) == 1
    assert adjacent_transpositions(3) == [(1, 0, 2), (0, 2, 1)]

def test_character():
    assert TRIVIAL((1, 0)) == 1
    assert SIGN((1, 0)) == -1
    with pytest.raises(InputError):
        Character('standard')

def test_reynolds_on_natural_representation():
    rep = permutation_representation(3, ScalarField(0))
    trivial = reynolds(rep, TRIVIAL, ScalarField(0))
    assert is_idempotent(trivial)
    assert space_isotypic_dimension(rep, TRIVIAL, ScalarField(0)) == 1
    assert space_isotypic_dimension(rep, SIGN, ScalarField(0)) == 0
    assert space_isotypic_dimension(permutation_representation(2, ScalarField(0)), SIGN, ScalarField(0)) == 1

def test_characteristic_guard():
    check_characteristic(ScalarField(5), 3)
    with pytest.raises(CharacteristicError):
        check_characteristic(ScalarField(3), 3)
    with pytest.raises(CharacteristicError):
        reynolds(permutation_representation(2, ScalarField(2)), TRIVIAL, ScalarField(2))

def test_action_on_variables(pair_ring):
    action = PermAction(2, pair_ring, [['x1', 'x2'], ['y1', 'y2']])
    f = parse_poly('x1^2*y2 + y1', pair_ring)
    moved = action.apply((1, 0), f)
    assert moved == parse_poly('x2^2*y1 + y2', pair_ring)
    assert action.verify_group_law()

def test_block_length_checked(pair_ring):
    with pytest.raises(InputError):
        PermAction(3, pair_ring, [['x1', 'x2']])

def test_isotypic_dimensions_of_symmetric_quadrics():
    ring = RingDescriptor(('x1', 'x2'))
    action = PermAction(2, ring, [['x1', 'x2']])
    S = free_module(ring)
    assert isotypic_dimension(S, action, TRIVIAL, 2) == 2
    assert isotypic_dimension(S, action, SIGN, 2) == 1
    assert isotypic_dimension(S, action, SIGN, 0) == 0

def test_action_must_preserve_relations():
    ring = RingDescriptor(('x1', 'x2'))
    action = PermAction(2, ring, [['x1', 'x2']])
    M = quotient_module(ring, [ring.gen('x1')])
    with pytest.raises(ActionError) as info:
        isotypic_dimension(M, action, TRIVIAL, 1)
    assert info.value.witness == 0

def test_action_on_ideal():
    ring = RingDescriptor(('x1', 'x2'))
    action = PermAction(2, ring, [['x1', 'x2']])
    verify_action(action, IdealBasis(ring, (parse_poly('x1*x2', ring), parse_poly('x1 + x2', ring))))
    with pytest.raises(ActionError):
        verify_action(action, IdealBasis(ring, (parse_poly('x1 - 2*x2', ring),)))

def test_generator_images_swap_components():
    ring = RingDescriptor(('x1', 'x2'))
    zero, one = ring.zero, ring.one

    def swap(sigma):
        if sigma == (0, 1):
            return [(one, zero), (zero, one)]
        return [(zero, one), (one, zero)]

    action = PermAction(2, ring, [['x1', 'x2']], swap)
    x1, x2 = ring.poly_ring.gens
    assert action.apply_vector((1, 0), (x1, zero)) == (zero, x2)
    assert action.verify_group_law(rank=2)
    plain = action.with_images(None)
    assert plain.apply_vector((1, 0), (x1, zero)) == (x2, zero)
