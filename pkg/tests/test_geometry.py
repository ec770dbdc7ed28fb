import pytest
from unittest.mock import patch
from koszulkit.algebra import RingDescriptor, ScalarField, parse_poly
from koszulkit.const import (
    CERTIFIED,
    LABEL_PROVED,
    LABEL_SAMPLED,
    NOT_CERTIFIED,
    STRATEGY_SAMPLED,
)
from koszulkit.exceptions import InhomogeneousError, InputError, PreconditionError
from koszulkit.geometry import (
    CurveNumerics,
    LineBundleOnP1,
    SchemeIdeal,
    SectionModule,
    curve_case_grid,
    curve_chi_closed_form,
    curve_chi_rr,
    curve_criterion_sweep,
    curve_nonvanishing_criterion,
    effective_bound,
    effective_bound_report,
    effective_bound_table,
    evaluation_map,
    gonality_bound_report,
    high_degree_vanishing_scan,
    kernel_bundle_numerics,
    koszul_of_sections,
    line_ring,
    multiplicity_profiles,
    parse_point_configuration,
    projective_ring,
    realizable_h0,
    section_module,
    syzygy_gonality_check,
    very_ampleness_order,
)
from koszulkit.gradedmod import betti_table

def test_section_module_dimensions():
    cubic = SectionModule(0, 3)
    assert [cubic.dimension(q) for q in range(5)] == [1, 4, 7, 10, 13]
    odd = SectionModule(-1, 2)
    assert odd.first_degree == 1
    assert odd.dimension(0) == 0
    assert odd.dimension(1) == 2
    assert SectionModule(-3, 2).first_degree == 2

def test_section_module_rejects_degree_zero():
    with pytest.raises(InputError):
        SectionModule(0, 0)

def test_section_module_multiplication():
    cubic = SectionModule(0, 3)
    z0, z1, z2, z3 = cubic.linear_forms()
    entries = cubic.multiplication(z2, 1)
    assert set(entries) == {(j + 2, j) for j in range(4)}
    assert cubic.multiplication(z1 + z1, 0) == {(1, 0): 2}

def test_presentation_of_twisted_cubic():
    cubic = SectionModule(0, 3)
    presented = cubic.presentation(3)
    assert [presented.dimension(q) for q in range(5)] == [1, 4, 7, 10, 13]
    assert betti_table(presented).entries == {(0, 0): 1, (1, 1): 3, (2, 1): 2}

def test_section_module_truncation_bound():
    cubic = section_module(0, 3, q_max=3)
    assert cubic.q_max == 3
    presented = cubic.presentation()
    assert [presented.dimension(q) for q in range(5)] == [1, 4, 7, 10, 13]
    assert presented.relations == cubic.presentation(3).relations
    with pytest.raises(InputError):
        section_module(-3, 2, q_max=1)

def test_presentation_keeps_negative_twist():
    module = SectionModule(-1, 2)
    presented = module.presentation(3)
    assert presented.shifts == (1, 1)
    assert [presented.dimension(q) for q in range(4)] == [0, 2, 4, 6]

def test_koszul_of_sections_rational_normal_curve():
    assert koszul_of_sections(0, 3, 1, 1) == 3
    assert koszul_of_sections(0, 3, 2, 1) == 2
    assert koszul_of_sections(0, 4, 1, 1) == 6
    assert koszul_of_sections(0, 3, 1, 1, prime=65521) == 3

def test_koszul_of_sections_vanishes_for_ample_twist():
    assert koszul_of_sections(1, 3, 1, 1) == 0
    assert koszul_of_sections(2, 4, 2, 1) == 0
    assert koszul_of_sections(0, 4, 1, 1) != 0

def test_high_degree_vanishing_scan():
    assert high_degree_vanishing_scan(1, 1, 1, [3, 4]) == {3: 0, 4: 0}
    assert high_degree_vanishing_scan(0, 1, 1, [3, 4], threads=2) == {3: 3, 4: 6}

def test_curve_case_grid():
    rows = curve_case_grid(p_max=1)
    assert len(rows) == 55
    assert all(row['koszul_zero'] == row['very_ample'] == row['expected'] for row in rows)

def test_reduced_points_evaluation():
    ring = projective_ring(2)
    W = list(ring.poly_ring.gens)
    general = evaluation_map(W, SchemeIdeal.reduced_points([(1, 0, 0), (0, 1, 0), (0, 0, 1)]), ring)
    assert general.surjective
    collinear = evaluation_map(W, SchemeIdeal.reduced_points([(1, 0, 0), (0, 1, 0), (1, 1, 0)]), ring)
    assert collinear.rank == 2
    assert not collinear.surjective

def test_reduced_points_must_be_distinct():
    ring = projective_ring(2)
    with pytest.raises(InputError):
        evaluation_map(list(ring.poly_ring.gens), SchemeIdeal.reduced_points([(1, 0, 0), (2, 0, 0)]), ring)
    with pytest.raises(InputError):
        evaluation_map(list(ring.poly_ring.gens), SchemeIdeal.reduced_points([(1, 0)]), ring)

def test_divisor_evaluation():
    ring = line_ring()
    W = list(ring.poly_ring.gens)
    double = SchemeIdeal.divisor_on_line(parse_poly('t^2', ring))
    assert double.length == 2
    assert evaluation_map(W, double, ring).surjective
    triple = SchemeIdeal.divisor_on_line(parse_poly('t^3', ring))
    result = evaluation_map(W, triple, ring)
    assert result.length == 3
    assert result.rank == 2

def test_divisor_needs_line():
    ring = projective_ring(2)
    scheme = SchemeIdeal.divisor_on_line(parse_poly('x0', ring))
    with pytest.raises(InputError):
        evaluation_map(list(ring.poly_ring.gens), scheme, ring)

def test_jet_evaluation():
    ring = projective_ring(2)
    W = list(ring.poly_ring.gens)
    jet = SchemeIdeal.jet([(1, 0, 0), (0, 1, 0)], 2)
    assert evaluation_map(W, jet, ring).surjective
    flat = SchemeIdeal.jet([(1, 0, 0), (0, 1, 0), (0, 0, 0)], 3)
    assert evaluation_map(W, flat, ring).rank == 2
    with pytest.raises(InputError):
        evaluation_map(W, SchemeIdeal.jet([(1, 0, 0), (2, 0, 0)], 2), ring)

def test_fat_point_evaluation():
    ring = projective_ring(2)
    fat = SchemeIdeal.fat_point((1, 0, 0), 2)
    assert fat.length == 3
    assert evaluation_map(list(ring.poly_ring.gens), fat, ring).surjective
    quadrics = [parse_poly(text, ring) for text in ('x0^2', 'x0*x1', 'x0*x2', 'x1^2', 'x1*x2', 'x2^2')]
    assert evaluation_map(quadrics, SchemeIdeal.fat_point((0, 1, 1), 3), ring).rank == 6

def test_evaluation_rejects_mixed_degrees():
    ring = line_ring()
    s, t = ring.poly_ring.gens
    with pytest.raises(InhomogeneousError):
        evaluation_map([s, t**2], SchemeIdeal.reduced_points([(1, 0)]), ring)

def test_multiplicity_profiles():
    assert multiplicity_profiles(3) == [(3,), (2, 1), (1, 1, 1)]
    assert len(multiplicity_profiles(5)) == 7

def test_exhaustive_very_ampleness_on_line():
    report = very_ampleness_order(LineBundleOnP1(2), p_max=3)
    assert report.label == LABEL_PROVED
    assert report.verdicts == {0: True, 1: True, 2: True, 3: False}
    assert report.order == 2
    assert report.as_dict()['jet_order'] == 2
    assert very_ampleness_order(LineBundleOnP1(-1), p_max=1).order == -1
    assert very_ampleness_order(LineBundleOnP1(0), p_max=1).order == 0

def test_exhaustive_on_prime_field():
    report = very_ampleness_order(LineBundleOnP1(3, ScalarField(7)), p_max=3)
    assert report.order == 3

def test_sampled_very_ampleness_on_line():
    report = very_ampleness_order(LineBundleOnP1(2), p_max=3, strategy=STRATEGY_SAMPLED, seed=1, trials=5)
    assert report.label == LABEL_SAMPLED
    assert report.order == 2
    assert 'jet_order' not in report.as_dict()

def test_point_configuration():
    config = parse_point_configuration({
        'ambient': 2,
        'degree': 1,
        'points': [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]],
    })
    assert config.ambient == 2
    assert len(config.sections) == 3
    report = very_ampleness_order(config, p_max=1, strategy=STRATEGY_SAMPLED)
    assert report.verdicts == {0: True, 1: True}

def test_point_configuration_schemes():
    config = parse_point_configuration({
        'ambient': 1,
        'sections': ['s^2', 's*t', 't^2'],
        'schemes': [
            {'kind': 'divisor-on-line', 'form': 's*t^2'},
            {'kind': 'fat-point', 'point': [1, '1/2'], 'order': 2},
        ],
    })
    for scheme in config.schemes:
        assert evaluation_map(config.sections, scheme, config.ring).surjective

def test_point_configuration_errors():
    with pytest.raises(InputError):
        parse_point_configuration({'ambient': 0})
    with pytest.raises(InputError):
        parse_point_configuration({'ambient': 2, 'points': [[0, 0, 0]]})
    with pytest.raises(InputError):
        parse_point_configuration({'ambient': 2, 'schemes': [{'kind': 'jet', 'point': [1, 0, 0]}]})

def test_exhaustive_needs_line():
    config = parse_point_configuration({'ambient': 2, 'points': [[1, 0, 0]]})
    with pytest.raises(InputError):
        very_ampleness_order(config)

def test_kernel_bundle_numerics():
    assert kernel_bundle_numerics(1, 3) == {
        'h0': 3, 'rank': 2, 'degree': -3, 'wedge_rank': 2, 'wedge_degree': -3,
    }
    with pytest.raises(PreconditionError):
        kernel_bundle_numerics(2, 4)

def test_curve_chi():
    num = CurveNumerics(0, 3, 0, 1, 1)
    assert curve_chi_rr(num) == 9
    assert curve_chi_closed_form(num) == 6
    genus_one = CurveNumerics(1, 5, 1, 1, 1)
    assert curve_chi_rr(genus_one) == curve_chi_closed_form(genus_one) == 19
    assert curve_chi_closed_form(CurveNumerics(1, 4, 0, 2)) == 4

def test_closed_form_undefined_at_d_equal_g():
    with pytest.raises(PreconditionError):
        curve_chi_closed_form(CurveNumerics(2, 2, 0, 1))

def test_criterion_certifies():
    with patch('koszulkit.geometry._LOGGER') as mock_logger:
        result = curve_nonvanishing_criterion(CurveNumerics(1, 5, 1, 1, 1))
        assert result.verdict == CERTIFIED
        assert result.lhs == 10
        assert result.chi == 19
        mock_logger.warning.assert_not_called()

def test_criterion_warns_when_closed_form_disagrees():
    with patch('koszulkit.geometry._LOGGER') as mock_logger:
        result = curve_nonvanishing_criterion(CurveNumerics(0, 3, 0, 1, 1))
        assert result.verdict == CERTIFIED
        assert result.lhs == 6
        mock_logger.warning.assert_called_once()

def test_criterion_degree_conditions():
    result = curve_nonvanishing_criterion(CurveNumerics(2, 5, 0, 1, 1))
    assert result.verdict == NOT_CERTIFIED
    assert not result.degree_conditions
    assert result.as_dict()['chi_closed_form'] is None

def test_criterion_preconditions():
    with pytest.raises(PreconditionError):
        curve_nonvanishing_criterion(CurveNumerics(0, 3, 0, 1, 2))
    with pytest.raises(PreconditionError):
        curve_nonvanishing_criterion(CurveNumerics(0, 3, 0, 1))
    with pytest.raises(PreconditionError):
        CurveNumerics(-1, 3, 0, 1)

def test_realizable_h0():
    assert list(realizable_h0(2, 1)) == [0, 1]
    assert list(realizable_h0(1, 5)) == [5]
    assert list(realizable_h0(3, -1)) == [0]
    assert list(realizable_h0(0, 0)) == [1]

def test_curve_criterion_sweep():
    rows = curve_criterion_sweep(g_max=2, p_max=2, extra=1)
    assert rows
    assert all(row['verdict'] == CERTIFIED for row in rows)
    assert all(row['gap_matches'] for row in rows)

def test_effective_bounds():
    assert effective_bound(1, 0) == 3
    assert effective_bound(3, 1) == 8
    assert effective_bound(2, 3) == 10
    assert effective_bound(4, 4) == 22
    assert effective_bound_table(2, 1) == {(1, 0): 3, (1, 1): 4, (2, 0): 4, (2, 1): 6}
    assert effective_bound_report(2, 3)['bound'] == 10
    with pytest.raises(PreconditionError):
        effective_bound(0, 1)

def test_gonality_report():
    report = gonality_bound_report(2, 1, True)
    assert report['covering_gonality_at_least'] == 3
    assert report['degree_of_irrationality_at_least'] == 3
    silent = gonality_bound_report(2, 1, False)
    assert silent['covering_gonality_at_least'] is None
    assert silent['claim'] == 'no bound certified'

def test_gonality_check_on_line():
    report = syzygy_gonality_check(4, 1)
    assert report['koszul_index'] == [2, 1]
    assert report['koszul_dimension'] == 8
    assert not report['vanishing']
    with pytest.raises(PreconditionError):
        syzygy_gonality_check(3, 2)

def test_ring_helpers():
    assert line_ring().variables == ('s', 't')
    assert projective_ring(3).variables == ('x0', 'x1', 'x2', 'x3')
    assert isinstance(projective_ring(2), RingDescriptor)
