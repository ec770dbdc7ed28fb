"""Section modules on the projective line, evaluation maps and curve numerics.

Binary forms of degree m are written in the ring ``field[s, t]`` with the
monomial basis s^(m-j) t^j, j = 0..m. The section module of (B, L) =
(O(b), O(d)) lives over ``field[z0..zd]`` where z_i stands for s^(d-i) t^i.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import chain, combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import sympy
import voluptuous as vol
from sympy import Rational, Symbol
from sympy.utilities.iterables import partitions

from .algebra import (
    INHOMOGENEOUS,
    NEG_INFINITY,
    RATIONALS,
    Monomial,
    MultiPoly,
    RingDescriptor,
    ScalarField,
    graded_degree,
    monomials_of_degree,
    parse_poly,
)
from .const import (
    CERTIFIED,
    CONF_AMBIENT,
    CONF_DEGREE,
    CONF_FORM,
    CONF_GERM,
    CONF_KIND,
    CONF_LENGTH,
    CONF_ORDER_OF_VANISHING,
    CONF_POINT,
    CONF_POINTS,
    CONF_SCHEMES,
    CONF_SECTIONS,
    DEFAULT_P_MAX,
    DEFAULT_SAMPLE_TRIALS,
    DEFAULT_SEED,
    ERROR_CERTIFICATE,
    ERROR_PRECONDITION,
    ERROR_SCHEME,
    LABEL_PROVED,
    LABEL_SAMPLED,
    NOT_CERTIFIED,
    POINTS_SCHEMA,
    SCHEME_DIVISOR,
    SCHEME_FAT_POINT,
    SCHEME_JET,
    SCHEME_REDUCED_POINTS,
    STRATEGY_EXHAUSTIVE,
    STRATEGY_SAMPLED,
)
from .exceptions import CertificateError, InhomogeneousError, InputError, PreconditionError
from .gradedmod import GradedFreeModule, GradedModule, quotient_module
from .helpers import binomial, run_cells
from .koszul import koszul_cohomology_dim
from .linalg import Entries, exact_rank, independent_columns, nullspace

_LOGGER = logging.getLogger(__name__)

Point = Tuple[Any, ...]
LINE_VARIABLES = ("s", "t")


def line_ring(field_: ScalarField = RATIONALS) -> RingDescriptor:
    return RingDescriptor(LINE_VARIABLES, field=field_)


def projective_ring(ambient: int, field_: ScalarField = RATIONALS) -> RingDescriptor:
    """Homogeneous coordinates x0..xr of P^r (s, t for the line)."""
    if ambient == 1:
        return line_ring(field_)
    return RingDescriptor(tuple(f"x{i}" for i in range(ambient + 1)), field=field_)


# ---------------------------------------------------------------------------
# Line bundles and section modules


@dataclass(frozen=True)
class LineBundleOnP1:
    """O(m) on the projective line."""

    degree: int
    field: ScalarField = RATIONALS

    @property
    def h0(self) -> int:
        return max(self.degree + 1, 0)

    @cached_property
    def ring(self) -> RingDescriptor:
        return line_ring(self.field)

    def sections(self) -> List[MultiPoly]:
        """Monomial basis s^(m-j) t^j of H^0(O(m))."""
        return [self.ring.monomial(monomial) for monomial in monomials_of_degree(self.ring, self.degree)]


@dataclass(frozen=True)
class SectionModule:
    """Gamma(O(b), O(d)) = sum_q H^0(O(b + q d)) over Sym H^0(O(d)).

    M_q has the basis s^(m-j) t^j with m = b + q d, indexed by j;
    z_i multiplies index j into index j + i.
    """

    b: int
    d: int
    field: ScalarField = RATIONALS
    q_max: Optional[int] = None

    def __post_init__(self) -> None:
        if self.d < 1:
            raise InputError(ERROR_PRECONDITION, f"section modules need d >= 1, got {self.d}")
        if self.q_max is not None and self.q_max < self.first_degree:
            raise InputError(ERROR_PRECONDITION, f"q_max={self.q_max} below the first degree {self.first_degree}")

    @cached_property
    def ring(self) -> RingDescriptor:
        return RingDescriptor(tuple(f"z{i}" for i in range(self.d + 1)), field=self.field)

    @property
    def first_degree(self) -> int:
        """Smallest q with b + q d >= 0."""
        return -(self.b // self.d)

    def form_degree(self, degree: int) -> int:
        return self.b + degree * self.d

    def dimension(self, degree: int) -> int:
        return max(self.form_degree(degree) + 1, 0)

    def multiplication(self, f: MultiPoly, degree: int) -> Entries:
        """Matrix of multiplication by homogeneous f from M_q to M_(q + deg f)."""
        m = self.form_degree(degree)
        entries: Entries = {}
        if m < 0 or not f:
            return entries
        for monomial, coeff in f.items():
            shift = sum(i * e for i, e in enumerate(monomial))
            for j in range(m + 1):
                key = (j + shift, j)
                total = entries.get(key)
                total = coeff if total is None else total + coeff
                if total:
                    entries[key] = total
                else:
                    entries.pop(key, None)
        return entries

    def linear_forms(self) -> List[MultiPoly]:
        """V = H^0(O(d)) as the variables z0..zd."""
        return list(self.ring.poly_ring.gens)

    def presentation(self, max_degree: Optional[int] = None) -> GradedModule:
        """A GradedModule with the same graded pieces.

        Generators are the sections of the first nonzero piece; relations
        are collected degree by degree through ``max_degree``, which
        defaults to ``q_max`` (at least two degrees above the generators,
        where the quadrics of the rational normal curve appear).
        """
        if max_degree is None:
            max_degree = self.q_max
        ring = self.ring
        domain = self.field.domain
        start = self.first_degree
        base = self.form_degree(start)
        free = GradedFreeModule(ring, (start,) * (base + 1))
        top = max(start + 2, max_degree if max_degree is not None else start)
        relations: List[Tuple[MultiPoly, ...]] = []
        degrees: List[int] = []
        for degree in range(start + 1, top + 1):
            basis = free.basis(degree)
            position = {term: col for col, term in enumerate(basis)}
            columns: Entries = {}
            count = 0
            for relation, e in zip(relations, degrees):
                for monomial in monomials_of_degree(ring, degree - e):
                    for j, f in enumerate(relation):
                        for mono, coeff in f.mul_monom(monomial).items():
                            columns[(position[(mono, j)], count)] = coeff
                    count += 1
            image: Entries = {}
            for col, (monomial, j) in enumerate(basis):
                image[(j + sum(i * e for i, e in enumerate(monomial)), col)] = domain.one
            kernel = nullspace(image, len(basis), domain)
            for offset, vector in enumerate(kernel):
                for row, value in vector.items():
                    columns[(row, count + offset)] = value
            for col in independent_columns(columns, domain):
                if col < count:
                    continue
                terms: List[Dict[Monomial, Any]] = [dict() for _ in range(free.rank)]
                for row, value in kernel[col - count].items():
                    monomial, j = basis[row]
                    terms[j][monomial] = value
                relations.append(tuple(ring.poly_ring.dtype(t) for t in terms))
                degrees.append(degree)
        _LOGGER.debug(
            "Presentation of Gamma(O(%d), O(%d)): %d generators, %d relations",
            self.b, self.d, free.rank, len(relations),
        )
        return GradedModule(free, relations)


def section_module(
    b: int, d: int, field_: ScalarField = RATIONALS, q_max: Optional[int] = None
) -> SectionModule:
    """Gamma(O(b), O(d)); ``q_max`` bounds the degrees its presentation covers."""
    return SectionModule(b, d, field_, q_max)


# ---------------------------------------------------------------------------
# Zero-dimensional subschemes and evaluation maps


@dataclass(frozen=True)
class SchemeIdeal:
    """A finite subscheme of P^r given by one of four recipes.

    ``germ`` holds the coefficient vectors of t^0, t^1, ... of a curve
    germ; its first entry is the point.
    """

    kind: str
    points: Tuple[Point, ...] = ()
    form: Optional[MultiPoly] = None
    germ: Tuple[Point, ...] = ()
    jet_length: int = 0
    vanishing_order: int = 0

    @classmethod
    def reduced_points(cls, points: Sequence[Point]) -> "SchemeIdeal":
        return cls(SCHEME_REDUCED_POINTS, points=tuple(tuple(p) for p in points))

    @classmethod
    def divisor_on_line(cls, form: MultiPoly) -> "SchemeIdeal":
        return cls(SCHEME_DIVISOR, form=form)

    @classmethod
    def jet(cls, germ: Sequence[Point], length: int) -> "SchemeIdeal":
        return cls(SCHEME_JET, germ=tuple(tuple(c) for c in germ), jet_length=length)

    @classmethod
    def fat_point(cls, point: Point, order: int) -> "SchemeIdeal":
        return cls(SCHEME_FAT_POINT, points=(tuple(point),), vanishing_order=order)

    @property
    def length(self) -> int:
        if self.kind == SCHEME_REDUCED_POINTS:
            return len(self.points)
        if self.kind == SCHEME_DIVISOR:
            degree = graded_degree(self.form) if self.form is not None else NEG_INFINITY
            return degree if isinstance(degree, int) else 0
        if self.kind == SCHEME_JET:
            return self.jet_length
        r = len(self.points[0]) - 1
        return binomial(self.vanishing_order - 1 + r, r)


@dataclass(frozen=True)
class EvaluationMap:
    entries: Entries
    length: int
    dimension: int
    rank: int

    @property
    def surjective(self) -> bool:
        return self.rank == self.length


def _evaluate(f: MultiPoly, point: Point):
    total = f.ring.domain.zero
    for monomial, coeff in f.items():
        term = coeff
        for value, e in zip(point, monomial):
            if e:
                term = term * value**e
        total += term
    return total


def _proportional(a: Point, b: Point) -> bool:
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))


def _check_point(point: Point, ring: RingDescriptor) -> None:
    if len(point) != ring.ngens or not any(point):
        raise InputError(ERROR_SCHEME, f"point {list(point)} is not in P^{ring.ngens - 1}")


def _truncate(f: MultiPoly, bound: int) -> MultiPoly:
    return f.ring.dtype({m: c for m, c in f.items() if sum(m) < bound})


def _substitute(f: MultiPoly, images: Sequence[MultiPoly], target: RingDescriptor, bound: int) -> MultiPoly:
    """f(images) with every term of total degree >= bound dropped."""
    out = target.zero
    for monomial, coeff in f.items():
        term = target.poly_ring.ground_new(coeff)
        for image, e in zip(images, monomial):
            for _ in range(e):
                term = _truncate(term * image, bound)
        out += term
    return out


def _coprime_linear_form(form: MultiPoly, ring: RingDescriptor) -> MultiPoly:
    """A linear form a s + b t that does not divide ``form``."""
    s, t = ring.poly_ring.gens
    domain = ring.field.domain
    candidates = [(domain.zero, domain.one)] + [(domain.one, domain(c)) for c in range(graded_degree(form) + 2)]
    for a, b in candidates:
        if _evaluate(form, (b, -a)):
            return s * a + t * b
    raise InputError(ERROR_SCHEME, "every point of the line lies on the divisor")


def _reduced_rows(W, scheme, ring) -> Entries:
    for point in scheme.points:
        _check_point(point, ring)
    for a, b in combinations(scheme.points, 2):
        if _proportional(a, b):
            raise InputError(ERROR_SCHEME, f"repeated point {list(a)}")
    entries: Entries = {}
    for row, point in enumerate(scheme.points):
        for col, w in enumerate(W):
            value = _evaluate(w, point)
            if value:
                entries[(row, col)] = value
    return entries


def _divisor_rows(W, scheme, ring) -> Entries:
    form = scheme.form
    if ring.ngens != 2 or form is None or form.ring != ring.poly_ring:
        raise InputError(ERROR_SCHEME, "divisors live on the projective line")
    length = scheme.length
    if length < 1:
        raise InputError(ERROR_SCHEME, "divisor form must be a nonzero form of positive degree")
    entries: Entries = {}
    if not W:
        return entries
    degree = graded_degree(W[0], ring)
    top = max(degree, length - 1)
    factor = _coprime_linear_form(form, ring) ** (top - degree)
    quotient = quotient_module(ring, [form])
    if quotient.dimension(top) != length:
        raise CertificateError(ERROR_CERTIFICATE, "divisor quotient has the wrong length")
    for col, w in enumerate(W):
        for row, value in quotient.coordinates((w * factor,), top).items():
            entries[(row, col)] = value
    return entries


def _jet_rows(W, scheme, ring) -> Entries:
    germ = scheme.germ
    length = scheme.jet_length
    if not germ or length < 1:
        raise InputError(ERROR_SCHEME, "a jet needs a point and a positive length")
    for coefficients in germ:
        if len(coefficients) != ring.ngens:
            raise InputError(ERROR_SCHEME, f"germ coefficient {list(coefficients)} has the wrong size")
    _check_point(germ[0], ring)
    if length > 1 and (len(germ) < 2 or _proportional(germ[0], germ[1])):
        raise InputError(ERROR_SCHEME, "germ is not immersive at its point")
    local = RingDescriptor(("t",), field=ring.field)
    (t,) = local.poly_ring.gens
    images = []
    for i in range(ring.ngens):
        image = local.zero
        for k, coefficients in enumerate(germ):
            if coefficients[i]:
                image += t**k * coefficients[i]
        images.append(image)
    entries: Entries = {}
    for col, w in enumerate(W):
        for monomial, value in _substitute(w, images, local, length).items():
            entries[(monomial[0], col)] = value
    return entries


def _fat_point_rows(W, scheme, ring) -> Entries:
    (point,) = scheme.points
    _check_point(point, ring)
    chart = next(i for i, value in enumerate(point) if value)
    local = RingDescriptor(tuple(f"u{i}" for i in range(ring.ngens) if i != chart), field=ring.field)
    order = scheme.vanishing_order
    images = []
    gens = iter(local.poly_ring.gens)
    for i, value in enumerate(point):
        constant = local.poly_ring.ground_new(value)
        images.append(constant if i == chart else constant + next(gens))
    rows = {
        monomial: row
        for row, monomial in enumerate(chain.from_iterable(monomials_of_degree(local, e) for e in range(order)))
    }
    entries: Entries = {}
    for col, w in enumerate(W):
        for monomial, value in _substitute(w, images, local, order).items():
            entries[(rows[monomial], col)] = value
    return entries


_ROWS = {
    SCHEME_REDUCED_POINTS: _reduced_rows,
    SCHEME_DIVISOR: _divisor_rows,
    SCHEME_JET: _jet_rows,
    SCHEME_FAT_POINT: _fat_point_rows,
}


def evaluation_map(W: Sequence[MultiPoly], scheme: SchemeIdeal, ring: RingDescriptor) -> EvaluationMap:
    """Matrix of W -> H^0(O_xi(m)) for sections W of degree m.

    Raises:
        InputError: If the scheme is not a subscheme of the sections' P^r
        InhomogeneousError: If W mixes degrees
    """
    W = list(W)
    degrees = {graded_degree(w, ring) for w in W if w}
    if len(degrees) > 1 or INHOMOGENEOUS in degrees or any(w.ring != ring.poly_ring for w in W):
        raise InhomogeneousError("Sections must be forms of one degree", str(sorted(map(str, degrees))))
    W = [w for w in W if w]
    entries = _ROWS[scheme.kind](W, scheme, ring)
    rank = exact_rank(entries, ring.field.domain)
    _LOGGER.debug("Evaluation onto %s of length %d: rank %d", scheme.kind, scheme.length, rank)
    return EvaluationMap(entries, scheme.length, len(W), rank)


# ---------------------------------------------------------------------------
# Point configurations


@dataclass(frozen=True)
class PointConfiguration:
    """Points of P^r with a space of sections and optional extra schemes."""

    ring: RingDescriptor
    points: Tuple[Point, ...] = ()
    sections: Tuple[MultiPoly, ...] = ()
    schemes: Tuple[SchemeIdeal, ...] = ()

    @property
    def ambient(self) -> int:
        return self.ring.ngens - 1


def _scalar(value, field_: ScalarField):
    try:
        return field_.from_sympy(Rational(str(value)))
    except (TypeError, ValueError, sympy.SympifyError) as ex:
        raise InputError("Invalid coordinate", repr(value)) from ex


def _coordinates(values, ring: RingDescriptor) -> Point:
    point = tuple(_scalar(v, ring.field) for v in values)
    _check_point(point, ring)
    return point


def _parse_scheme(data: Dict[str, Any], ring: RingDescriptor) -> SchemeIdeal:
    kind = data[CONF_KIND]
    try:
        if kind == SCHEME_REDUCED_POINTS:
            return SchemeIdeal.reduced_points([_coordinates(p, ring) for p in data[CONF_POINTS]])
        if kind == SCHEME_DIVISOR:
            return SchemeIdeal.divisor_on_line(parse_poly(data[CONF_FORM], ring))
        if kind == SCHEME_JET:
            germ = [_coordinates(data[CONF_POINT], ring)]
            germ += [tuple(_scalar(v, ring.field) for v in c) for c in data.get(CONF_GERM, [])]
            return SchemeIdeal.jet(germ, data[CONF_LENGTH])
        return SchemeIdeal.fat_point(_coordinates(data[CONF_POINT], ring), data[CONF_ORDER_OF_VANISHING])
    except KeyError as ex:
        raise InputError(ERROR_SCHEME, f"{kind} needs '{ex.args[0]}'") from ex


def parse_point_configuration(data: Dict[str, Any], field_: ScalarField = RATIONALS) -> PointConfiguration:
    """Build a configuration from its JSON description.

    Sections default to all forms of the configured degree.

    Raises:
        InputError: On schema violations or points outside P^r
    """
    try:
        data = POINTS_SCHEMA(data)
    except vol.Invalid as ex:
        raise InputError("Invalid point configuration", str(ex)) from ex
    ring = projective_ring(data[CONF_AMBIENT], field_)
    if data[CONF_SECTIONS] is None:
        sections = [ring.monomial(m) for m in monomials_of_degree(ring, data[CONF_DEGREE])]
    else:
        sections = [parse_poly(text, ring) for text in data[CONF_SECTIONS]]
    return PointConfiguration(
        ring,
        tuple(_coordinates(p, ring) for p in data[CONF_POINTS]),
        tuple(sections),
        tuple(_parse_scheme(s, ring) for s in data[CONF_SCHEMES]),
    )


# ---------------------------------------------------------------------------
# Higher-order very ampleness


@dataclass(frozen=True)
class AmplenessReport:
    """Surjectivity verdict per p; ``order`` is the largest p passing with
    every smaller p (-1 if p = 0 fails)."""

    strategy: str
    label: str
    verdicts: Dict[int, bool] = field(default_factory=dict)

    @property
    def order(self) -> int:
        order = -1
        for p in sorted(self.verdicts):
            if not self.verdicts[p]:
                break
            order = p
        return order

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "strategy": self.strategy,
            "label": self.label,
            "verdicts": [[p, ok] for p, ok in sorted(self.verdicts.items())],
            "order": self.order,
        }
        if self.strategy == STRATEGY_EXHAUSTIVE:
            # on a smooth curve every finite subscheme is a divisor, so the
            # spanned and jet notions run through the same profiles
            out["spanned_order"] = self.order
            out["jet_order"] = self.order
        return out


def multiplicity_profiles(length: int) -> List[Tuple[int, ...]]:
    """Partitions of ``length``, each as a descending tuple."""
    profiles = []
    for part in partitions(length):
        profiles.append(tuple(sorted(chain.from_iterable([k] * v for k, v in part.items()), reverse=True)))
    return sorted(profiles, reverse=True)


INFINITY = None


def _placements(profile: Tuple[int, ...]) -> List[List[Tuple[Optional[str], int]]]:
    """Generic placements plus those putting parts at 0 and at infinity.

    Entries are (slot, multiplicity) with slot "generic", "zero" or INFINITY.
    """
    out = [[("generic", a) for a in profile]]
    sizes = sorted(set(profile), reverse=True)
    for slot in (INFINITY, "zero"):
        for a in sizes:
            rest = list(profile)
            rest.remove(a)
            out.append([(slot, a)] + [("generic", c) for c in rest])
    if len(profile) > 1:
        for a in sizes:
            for c in sizes:
                rest = list(profile)
                rest.remove(a)
                if c not in rest:
                    continue
                rest.remove(c)
                out.append([("zero", a), (INFINITY, c)] + [("generic", e) for e in rest])
    return out


def _profile_entries(coefficients, degree: int, placement, generic_values, zero) -> Entries:
    """Jets of the binary forms along a divisor placed on the line.

    A finite point (1 : u) of multiplicity a contributes the Taylor
    coefficients of w(1, u + e) below e^a; infinity contributes those of
    w(e, 1).
    """
    entries: Entries = {}
    values = iter(generic_values)
    row = 0
    for slot, multiplicity in placement:
        value = None if slot is INFINITY else (zero if slot == "zero" else next(values))
        for k in range(multiplicity):
            for col, coeffs in enumerate(coefficients):
                if value is None:
                    total = coeffs[degree - k] if 0 <= degree - k else zero
                else:
                    total = zero
                    for j in range(k, degree + 1):
                        if coeffs[j]:
                            total += coeffs[j] * binomial(j, k) * value ** (j - k)
                if total:
                    entries[(row, col)] = total
            row += 1
    return entries


def _binary_coefficients(W: Sequence[MultiPoly], degree: int) -> List[List[Any]]:
    out = []
    for w in W:
        coeffs = [w.ring.domain.zero] * (degree + 1)
        for (_, j), value in w.items():
            coeffs[j] = value
        out.append(coeffs)
    return out


def _generic_rank(coefficients, degree: int, placement, field_: ScalarField) -> int:
    """Rank over the function field of the generic point parameters.

    A specialization can only lower the rank, so a full-rank specialization
    settles it; otherwise the rank is computed over the function field.
    """
    generic = sum(1 for slot, _ in placement if slot == "generic")
    length = sum(a for _, a in placement)
    domain = field_.domain
    special = [domain(i + 2) for i in range(generic)]
    entries = _profile_entries(coefficients, degree, placement, special, domain.zero)
    rank = exact_rank(entries, domain)
    if rank == min(length, len(coefficients)):
        return rank
    function_field = domain.frac_field(*[Symbol(f"u{i}") for i in range(max(generic, 1))])
    params = [function_field.from_sympy(Symbol(f"u{i}")) for i in range(generic)]
    lifted = [[function_field.convert_from(c, domain) for c in row] for row in coefficients]
    entries = _profile_entries(lifted, degree, placement, params, function_field.zero)
    return exact_rank(entries, function_field)


def _exhaustive_verdict(bundle: LineBundleOnP1, p: int) -> bool:
    length = p + 1
    W = bundle.sections()
    if len(W) < length:
        return False
    coefficients = _binary_coefficients(W, bundle.degree)
    for profile in multiplicity_profiles(length):
        for placement in _placements(profile):
            if _generic_rank(coefficients, bundle.degree, placement, bundle.field) < length:
                _LOGGER.debug("O(%d) fails on profile %s placed as %s", bundle.degree, profile, placement)
                return False
    return True


def _divisor_form(ring: RingDescriptor, roots: Sequence[Tuple[Optional[int], int]]) -> MultiPoly:
    s, t = ring.poly_ring.gens
    form = ring.one
    for root, multiplicity in roots:
        factor = s if root is INFINITY else t - s * ring.field.domain(root)
        form *= factor**multiplicity
    return form


def _sampled_line_verdict(bundle: LineBundleOnP1, p: int, rng: random.Random, trials: int) -> bool:
    length = p + 1
    W = bundle.sections()
    if len(W) < length:
        return False
    profiles = multiplicity_profiles(length)
    for _ in range(trials):
        profile = rng.choice(profiles)
        roots: List[Optional[int]] = list(rng.sample(range(-5 * length, 5 * length + 1), len(profile)))
        if rng.random() < 0.25:
            roots[0] = INFINITY
        scheme = SchemeIdeal.divisor_on_line(_divisor_form(bundle.ring, list(zip(roots, profile))))
        if not evaluation_map(W, scheme, bundle.ring).surjective:
            return False
    return True


def _random_direction(point: Point, rng: random.Random, domain) -> Point:
    while True:
        direction = tuple(domain(rng.randint(-9, 9)) for _ in point)
        if any(direction) and not _proportional(point, direction):
            return direction


def _sampled_configuration_verdict(
    config: PointConfiguration, p: int, rng: random.Random, trials: int
) -> bool:
    length = p + 1
    W = list(config.sections)
    if len(W) < length:
        return False
    subsets = list(combinations(range(len(config.points)), length))
    if len(subsets) > trials:
        subsets = rng.sample(subsets, trials)
    for subset in subsets:
        scheme = SchemeIdeal.reduced_points([config.points[i] for i in subset])
        if not evaluation_map(W, scheme, config.ring).surjective:
            return False
    domain = config.ring.field.domain
    for point in config.points[:trials]:
        germ = [point, _random_direction(point, rng, domain)]
        if length > 2:
            germ.append(tuple(domain(rng.randint(-9, 9)) for _ in point))
        if not evaluation_map(W, SchemeIdeal.jet(germ, length), config.ring).surjective:
            return False
    return True


def very_ampleness_order(
    target: Union[LineBundleOnP1, PointConfiguration],
    p_max: int = DEFAULT_P_MAX,
    strategy: str = STRATEGY_EXHAUSTIVE,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_SAMPLE_TRIALS,
) -> AmplenessReport:
    """Decide p-very ampleness for p = 0..p_max.

    The exhaustive strategy runs every multiplicity profile of length p + 1
    at generic points of the line (and with parts at 0 and infinity); its
    verdicts are proved. The sampled strategy tests random divisors on the
    line, or subsets and jets of a point configuration.

    Raises:
        InputError: For an exhaustive run on a point configuration
    """
    if strategy == STRATEGY_EXHAUSTIVE:
        if not isinstance(target, LineBundleOnP1):
            raise InputError("The exhaustive strategy only runs on the projective line")
        verdicts = {p: _exhaustive_verdict(target, p) for p in range(p_max + 1)}
        return AmplenessReport(strategy, LABEL_PROVED, verdicts)
    if strategy != STRATEGY_SAMPLED:
        raise InputError("Unknown strategy", strategy)
    rng = random.Random(seed)
    verdicts = {}
    for p in range(p_max + 1):
        if isinstance(target, LineBundleOnP1):
            verdicts[p] = _sampled_line_verdict(target, p, rng, trials)
        else:
            verdicts[p] = _sampled_configuration_verdict(target, p, rng, trials)
    return AmplenessReport(strategy, LABEL_SAMPLED, verdicts)


# ---------------------------------------------------------------------------
# Koszul cohomology of section modules


def koszul_of_sections(
    b: int,
    d: int,
    p: int,
    q: int,
    field_: ScalarField = RATIONALS,
    prime: Optional[int] = None,
) -> int:
    """dim K_{p,q}(P^1, O(b), O(d)) with V = H^0(O(d))."""
    return koszul_cohomology_dim(section_module(b, d, field_), None, p, q, prime)


def high_degree_vanishing_scan(
    b: int, p: int, q: int, degrees: Sequence[int], threads: int = 1
) -> Dict[int, int]:
    """K_{p,q}(P^1, O(b), O(d)) for each d in ``degrees``."""
    return run_cells(lambda d: koszul_of_sections(b, d, p, q), degrees, threads)


def curve_case_grid(p_max: int = 3, threads: int = 1) -> List[Dict[str, Any]]:
    """Koszul vanishing against p-very ampleness for O(b) on the line.

    Covers 0 <= p <= p_max, -2 <= b <= p + 2 and p + 2 <= d <= p + 6;
    every row should have koszul_zero == very_ample == (b >= p).
    """
    cells = [
        (p, b, d)
        for p in range(p_max + 1)
        for b in range(-2, p + 3)
        for d in range(p + 2, p + 7)
    ]
    dims = run_cells(lambda cell: koszul_of_sections(cell[1], cell[2], cell[0], 1), cells, threads)
    ample: Dict[int, AmplenessReport] = {}
    for b in range(-2, p_max + 3):
        ample[b] = very_ampleness_order(LineBundleOnP1(b), p_max)
    return [
        {
            "p": p,
            "b": b,
            "d": d,
            "koszul_zero": dims[(p, b, d)] == 0,
            "very_ample": ample[b].verdicts[p],
            "expected": b >= p,
        }
        for p, b, d in cells
    ]


# ---------------------------------------------------------------------------
# Numeric criteria on curves


@dataclass(frozen=True)
class CurveNumerics:
    """Genus g, deg L = d, deg B = b, the index p and h0(B)."""

    g: int
    d: int
    b: int
    p: int
    h0B: Optional[int] = None

    def __post_init__(self) -> None:
        if self.g < 0 or self.p < 0:
            raise PreconditionError(ERROR_PRECONDITION, f"g={self.g}, p={self.p}")
        if self.h0B is not None and self.h0B < 0:
            raise PreconditionError(ERROR_PRECONDITION, f"h0B={self.h0B}")


def kernel_bundle_numerics(g: int, d: int, p: int = 1) -> Dict[str, int]:
    """Rank and degree of M_L and of its p-th exterior power for deg L = d.

    Raises:
        PreconditionError: Unless d >= 2g + 1
    """
    if d < 2 * g + 1:
        raise PreconditionError(ERROR_PRECONDITION, f"need d >= 2g+1, got g={g}, d={d}")
    r = d - g
    return {
        "h0": d + 1 - g,
        "rank": r,
        "degree": -d,
        "wedge_rank": binomial(r, p),
        "wedge_degree": -d * binomial(r - 1, p - 1),
    }


def curve_chi_closed_form(num: CurveNumerics) -> Rational:
    """C(d-g, p) * (-p d / (d - g) + d + b).

    Raises:
        PreconditionError: If d = g
    """
    g, d, b, p = num.g, num.d, num.b, num.p
    if d == g:
        raise PreconditionError(ERROR_PRECONDITION, "d = g makes the closed form undefined")
    return binomial(d - g, p) * (Rational(-p * d, d - g) + d + b)


def curve_chi_rr(num: CurveNumerics) -> Rational:
    """chi(wedge^p M_L (x) L (x) B) by Riemann-Roch."""
    k = kernel_bundle_numerics(num.g, num.d, num.p)
    return Rational(k["wedge_degree"] + k["wedge_rank"] * (num.d + num.b + 1 - num.g))


def realizable_h0(g: int, b: int) -> range:
    """Values of h0(B) allowed for deg B = b by Riemann-Roch and Clifford."""
    if b < 0:
        return range(0, 1)
    if b > 2 * g - 2:
        return range(b + 1 - g, b + 2 - g)
    return range(max(0, b + 1 - g), b // 2 + 2)


@dataclass(frozen=True)
class CurveCriterion:
    verdict: str
    degree_conditions: bool
    lhs: int = 0
    chi: Rational = Rational(0)
    chi_closed_form: Optional[Rational] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "degree_conditions": self.degree_conditions,
            "lhs": self.lhs,
            "chi": str(self.chi),
            "chi_closed_form": None if self.chi_closed_form is None else str(self.chi_closed_form),
        }


def curve_nonvanishing_criterion(num: CurveNumerics) -> CurveCriterion:
    """Numeric certificate for K_{p,1}(C, B, L) != 0 when h0(B) <= p.

    Needs d >= 2g+p+1 and d+b >= 2g+p+1, then compares
    C(d+1-g, p+1) h0(B) against chi(wedge^p M_L (x) L (x) B).

    Raises:
        PreconditionError: If h0B is missing or exceeds p
    """
    g, d, b, p = num.g, num.d, num.b, num.p
    if num.h0B is None or num.h0B > p:
        raise PreconditionError(
            ERROR_PRECONDITION, f"h0B={num.h0B} with p={p} is not numerically certifiable"
        )
    bound = 2 * g + p + 1
    if d < bound or d + b < bound:
        return CurveCriterion(NOT_CERTIFIED, False)
    lhs = binomial(d + 1 - g, p + 1) * num.h0B
    chi = curve_chi_rr(num)
    closed = curve_chi_closed_form(num)
    verdict = CERTIFIED if lhs < chi else NOT_CERTIFIED
    if (lhs < closed) != (lhs < chi):
        _LOGGER.warning(
            "Closed form chi=%s and Riemann-Roch chi=%s disagree on %s", closed, chi, num
        )
    else:
        _LOGGER.debug("lhs=%d, chi=%s, closed form=%s", lhs, chi, closed)
    return CurveCriterion(verdict, True, lhs, chi, closed)


def curve_criterion_sweep(g_max: int = 5, p_max: int = 6, extra: int = 2) -> List[Dict[str, Any]]:
    """Every (g, p, d, b, h0B) with the degree conditions and h0B <= p.

    d runs over 2g+p+1 .. 2g+p+1+extra and b from the smallest value with
    d+b >= 2g+p+1 up to p+g+1.
    """
    rows = []
    for g in range(g_max + 1):
        for p in range(p_max + 1):
            low = 2 * g + p + 1
            for d in range(low, low + extra + 1):
                for b in range(low - d, p + g + 2):
                    for h0 in realizable_h0(g, b):
                        if h0 > p:
                            continue
                        num = CurveNumerics(g, d, b, p, h0)
                        result = curve_nonvanishing_criterion(num)
                        gap = curve_chi_rr(num) - curve_chi_closed_form(num)
                        rows.append({
                            "g": g, "p": p, "d": d, "b": b, "h0B": h0,
                            "verdict": result.verdict,
                            "gap_matches": gap == binomial(d - g, p) * (1 - g),
                        })
    return rows


# ---------------------------------------------------------------------------
# Effective bounds and gonality


def effective_bound(n: int, p: int) -> int:
    """Smallest admissible d: (n - 1)(p + 1) + p + 3."""
    if n < 1 or p < 0:
        raise PreconditionError(ERROR_PRECONDITION, f"n={n}, p={p}")
    return (n - 1) * (p + 1) + p + 3


def effective_bound_report(n: int, p: int) -> Dict[str, Any]:
    bound = effective_bound(n, p)
    return {
        "n": n,
        "p": p,
        "bound": bound,
        "hypothesis": (
            f"X smooth projective of dimension {n}; L = K_X + d*A + {n - 1}*P + N "
            f"with A very ample, P and N nef and d >= {bound}; "
            f"then K_{{{p},1}}(X, B, L) = 0 exactly when B is {p}-very ample"
        ),
    }


def effective_bound_table(n_max: int = 4, p_max: int = 4) -> Dict[Tuple[int, int], int]:
    return {(n, p): effective_bound(n, p) for n in range(1, n_max + 1) for p in range(p_max + 1)}


def gonality_bound_report(n: int, p: int, vanishing: bool) -> Dict[str, Any]:
    """Lower bounds on covering gonality and degree of irrationality.

    ``vanishing`` is the truth of K_{h0(L)-1-n-p, n}(X, O_X, L) = 0.
    """
    if n < 1 or p < 0:
        raise PreconditionError(ERROR_PRECONDITION, f"n={n}, p={p}")
    bound = p + 2 if vanishing else None
    return {
        "n": n,
        "p": p,
        "vanishing": vanishing,
        "covering_gonality_at_least": bound,
        "degree_of_irrationality_at_least": bound,
        "claim": f"both invariants are at least {bound}" if vanishing else "no bound certified",
    }


def syzygy_gonality_check(d: int, p: int) -> Dict[str, Any]:
    """Compute K_{d-1-p,1}(P^1, O, O(d)) and feed it to the gonality report.

    Raises:
        PreconditionError: Unless 0 <= p <= d - 2, so the Koszul index is positive
    """
    if p < 0 or p > d - 2:
        raise PreconditionError(ERROR_PRECONDITION, f"need 0 <= p <= d-2, got d={d}, p={p}")
    index = d - 1 - p
    dimension = koszul_of_sections(0, d, index, 1)
    report = gonality_bound_report(1, p, dimension == 0)
    report.update({"d": d, "koszul_index": [index, 1], "koszul_dimension": dimension})
    return report
