"""Polygraph rings as modules over S = k[x_1..x_n, y_1..y_n] and their Ext.

The ring R(n,k) is the quotient of k[x, y, a_1..a_k, b_1..b_k] by the
intersection of the ideals I_f = (a_i - x_f(i), b_i - y_f(i)) over all maps
f: {1..k} -> {1..n}. It embeds in S^N (N = n^k) by the substitutions
a_i -> x_f(i), b_i -> y_f(i), and S_n acts on both sides by permuting the
pairs (x_j, y_j) and sending the component f to sigma o f.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .algebra import RATIONALS, Monomial, MultiPoly, RingDescriptor, ScalarField, monomials_of_degree
from .const import (
    DEFAULT_MAX_K,
    DEFAULT_MAX_N,
    DEFAULT_STABILIZATION_CAP,
    ERROR_ACTION,
    ERROR_CERTIFICATE,
    ERROR_GUARD,
    ERROR_STABILIZATION,
    MAX_POLYGRAPH_FUNCTIONS,
    STABILIZATION_LOOKAHEAD,
    VERDICT_EXT_ZERO,
    VERDICT_INVARIANTS_NONZERO,
    VERDICT_INVARIANTS_ZERO,
)
from .exceptions import (
    ActionError,
    CertificateError,
    GuardError,
    InputError,
    StabilizationError,
)
from .gradedmod import (
    FreeResolution,
    GradedFreeModule,
    GradedModule,
    Matrix,
    combine_columns,
    minimal_free_resolution,
    polynomial_ring_dimension,
    quotient_module,
)
from .groebner import (
    IdealBasis,
    LiftingBasis,
    ModuleBasis,
    Vector,
    intersect_ideals,
    minimal_generators,
    syzygies,
)
from .helpers import run_cells
from .linalg import exact_rank
from .symgrp import (
    TRIVIAL,
    Character,
    PermAction,
    Permutation,
    adjacent_transpositions,
    all_permutations,
    check_characteristic,
    inverse,
    isotypic_dimension,
    verify_action,
)

_LOGGER = logging.getLogger(__name__)

FunctionIndex = Tuple[int, ...]


@dataclass(frozen=True)
class PolygraphSpec:
    """R(n, k) over a scalar field; guards apply at construction."""

    n: int
    k: int
    field: ScalarField = RATIONALS
    allow_large: bool = False

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 0:
            raise InputError("Polygraph needs n >= 1 and k >= 0", f"n={self.n}, k={self.k}")
        if self.n ** self.k > MAX_POLYGRAPH_FUNCTIONS:
            raise GuardError(ERROR_GUARD, f"n^k = {self.n ** self.k} > {MAX_POLYGRAPH_FUNCTIONS}")
        if not self.allow_large and (self.n > DEFAULT_MAX_N or self.k > DEFAULT_MAX_K):
            raise GuardError(
                ERROR_GUARD, f"n={self.n}, k={self.k} exceeds n<={DEFAULT_MAX_N}, k<={DEFAULT_MAX_K}"
            )
        check_characteristic(self.field, self.n)

    @cached_property
    def functions(self) -> Tuple[FunctionIndex, ...]:
        """All maps {0..k-1} -> {0..n-1}, lexicographically."""
        return tuple(product(range(self.n), repeat=self.k))

    @cached_property
    def function_index(self) -> Dict[FunctionIndex, int]:
        return {f: i for i, f in enumerate(self.functions)}

    @property
    def x_names(self) -> List[str]:
        return [f"x{j + 1}" for j in range(self.n)]

    @property
    def y_names(self) -> List[str]:
        return [f"y{j + 1}" for j in range(self.n)]

    @property
    def ab_names(self) -> List[str]:
        return [f"a{i + 1}" for i in range(self.k)] + [f"b{i + 1}" for i in range(self.k)]

    @cached_property
    def base_ring(self) -> RingDescriptor:
        """S = k[x_1..x_n, y_1..y_n]."""
        return RingDescriptor(tuple(self.x_names + self.y_names), field=self.field)

    @cached_property
    def ambient_ring(self) -> RingDescriptor:
        return RingDescriptor(tuple(self.x_names + self.y_names + self.ab_names), field=self.field)

    def component_of(self, sigma: Permutation, index: int) -> int:
        """Index of sigma o f for the function with the given index."""
        f = self.functions[index]
        return self.function_index[tuple(sigma[value] for value in f)]

    def substitute(self, monomial: Monomial, index: int) -> Monomial:
        """Exponents in S of the image of an ambient monomial in component f."""
        n, k = self.n, self.k
        exponents = list(monomial[: 2 * n])
        f = self.functions[index]
        for i in range(k):
            exponents[f[i]] += monomial[2 * n + i]
            exponents[n + f[i]] += monomial[2 * n + k + i]
        return tuple(exponents)

    def component_images(self, poly: MultiPoly) -> Vector:
        """Image of an ambient polynomial in S^N."""
        ring = self.base_ring.poly_ring
        out = []
        for index in range(len(self.functions)):
            terms: Dict[Monomial, Any] = {}
            for monomial, coeff in poly.items():
                image = self.substitute(monomial, index)
                value = terms.get(image)
                terms[image] = coeff if value is None else value + coeff
            out.append(ring.dtype({m: c for m, c in terms.items() if c}))
        return tuple(out)


def ambient_action(spec: PolygraphSpec) -> PermAction:
    return PermAction(spec.n, spec.ambient_ring, [spec.x_names, spec.y_names])


def base_action(spec: PolygraphSpec, generator_images=None) -> PermAction:
    return PermAction(spec.n, spec.base_ring, [spec.x_names, spec.y_names], generator_images)


def component_action(spec: PolygraphSpec) -> PermAction:
    """S_n on S^N: sigma(g e_f) = sigma(g) e_(sigma o f)."""
    ring = spec.base_ring
    count = len(spec.functions)

    def images(sigma: Permutation) -> List[Vector]:
        zero, one = ring.zero, ring.one
        out = []
        for index in range(count):
            target = spec.component_of(sigma, index)
            out.append(tuple(one if r == target else zero for r in range(count)))
        return out

    return base_action(spec, images)


def _function_ideal(spec: PolygraphSpec, f: FunctionIndex) -> IdealBasis:
    ring = spec.ambient_ring
    gens = []
    for i, value in enumerate(f):
        gens.append(ring.gen(f"a{i + 1}") - ring.gen(f"x{value + 1}"))
        gens.append(ring.gen(f"b{i + 1}") - ring.gen(f"y{value + 1}"))
    return IdealBasis(ring, tuple(gens))


def polygraph_ideal(spec: PolygraphSpec, threads: int = 1) -> IdealBasis:
    """Groebner basis of the intersection of the I_f, checked to be S_n-stable.

    Raises:
        CertificateError: If the intersection is not S_n-stable
    """
    if spec.k == 0:
        return IdealBasis(spec.ambient_ring, (), True)
    ideals = [_function_ideal(spec, f) for f in spec.functions]
    ideal = intersect_ideals(ideals, threads)
    try:
        verify_action(ambient_action(spec), ideal)
    except ActionError as ex:
        raise CertificateError(ERROR_CERTIFICATE, f"polygraph ideal not stable: {ex}") from ex
    _LOGGER.debug("Polygraph ideal (%d, %d): %d generators", spec.n, spec.k, len(ideal.generators))
    return ideal


def component_evaluation_rank(spec: PolygraphSpec, degree: int) -> int:
    """Rank of the ambient degree piece evaluated into all components."""
    ambient = spec.ambient_ring
    count = len(spec.functions)
    one = spec.field.domain.one
    rows: Dict[Tuple[int, Monomial], int] = {}
    entries = {}
    for col, monomial in enumerate(monomials_of_degree(ambient, degree)):
        for index in range(count):
            row = rows.setdefault((index, spec.substitute(monomial, index)), len(rows))
            entries[(row, col)] = one
    return exact_rank(entries, spec.field.domain)


# ---------------------------------------------------------------------------
# S-module presentation


@dataclass
class SModulePresentation:
    """R(n, k) as an S-module: generators inside S^N and their relations."""

    spec: PolygraphSpec
    ideal: IdealBasis
    degree_bound: int
    monomials: Tuple[Monomial, ...]
    generator_images: Tuple[Vector, ...]
    generator_degrees: Tuple[int, ...]
    relations: Matrix

    @cached_property
    def module(self) -> GradedModule:
        return GradedModule(
            GradedFreeModule(self.spec.base_ring, self.generator_degrees), self.relations
        )

    def action(self) -> PermAction:
        """Generators are images of a,b-monomials, hence fixed by S_n."""
        return base_action(self.spec)

    def check_relations(self) -> bool:
        return all(not any(combine_columns(self.generator_images, column)) for column in self.relations)


def _ab_monomials(spec: PolygraphSpec, bound: int) -> List[Monomial]:
    ambient = spec.ambient_ring
    base = 2 * spec.n
    out = []
    for degree in range(bound + 1):
        for monomial in monomials_of_degree(ambient, degree):
            if not any(monomial[:base]):
                out.append(monomial)
    return out


def _span_matches(
    spec: PolygraphSpec, generators: Sequence[Vector], quotient: GradedModule, bound: int
) -> bool:
    S = spec.base_ring
    count = len(spec.functions)
    span = GradedModule(GradedFreeModule(S, (0,) * count), generators)
    for q in range(bound + STABILIZATION_LOOKAHEAD + 1):
        spanned = count * polynomial_ring_dimension(S, q) - span.dimension(q)
        if spanned != quotient.dimension(q):
            _LOGGER.debug("Span falls short in degree %d: %d < %d", q, spanned, quotient.dimension(q))
            return False
    return True


def s_module_presentation(
    spec: PolygraphSpec,
    degree_bound: int = 0,
    cap: int = DEFAULT_STABILIZATION_CAP,
    ideal: Optional[IdealBasis] = None,
    threads: int = 1,
) -> SModulePresentation:
    """Minimal S-module generators of R(n, k) and their syzygies.

    Generators are the images of a,b-monomials of degree <= D; D grows until
    the span's Hilbert function matches the quotient ring's two degrees past D.

    Raises:
        StabilizationError: If D would exceed ``cap``
    """
    if ideal is None:
        ideal = polygraph_ideal(spec, threads)
    S = spec.base_ring
    ambient = spec.ambient_ring
    count = len(spec.functions)
    quotient = quotient_module(ambient, ideal.generators)
    bound = max(degree_bound, 0)
    while True:
        if bound > cap:
            raise StabilizationError(ERROR_STABILIZATION, f"cap={cap}")
        monomials = _ab_monomials(spec, bound)
        images = [spec.component_images(ambient.monomial(m)) for m in monomials]
        degrees = [ambient.monomial_degree(m) for m in monomials]
        keep = minimal_generators(images, S, (0,) * count, degrees)
        generators = [images[i] for i in keep]
        if _span_matches(spec, generators, quotient, bound):
            break
        bound += 1
    generator_degrees = tuple(degrees[i] for i in keep)
    gens = ModuleBasis(S, count, tuple(generators), (0,) * count)
    relations = tuple(syzygies(gens).elements)
    _LOGGER.debug(
        "R(%d,%d): stabilized at D=%d with generator degrees %s and %d relations",
        spec.n, spec.k, bound, list(generator_degrees), len(relations),
    )
    presentation = SModulePresentation(
        spec, ideal, bound, tuple(monomials[i] for i in keep), tuple(generators),
        generator_degrees, relations,
    )
    if not presentation.check_relations():
        raise CertificateError(ERROR_CERTIFICATE, "relations do not annihilate the generators")
    mover = component_action(spec)
    for sigma in adjacent_transpositions(spec.n):
        for image in generators:
            if mover.apply_vector(sigma, image) != image:
                raise CertificateError(ERROR_CERTIFICATE, f"generator image not fixed by {sigma}")
    return presentation


# ---------------------------------------------------------------------------
# Ext


@dataclass
class ExtReport:
    n: int
    k: int
    j: int
    verdict: str
    witness_degree: Optional[int] = None
    window: Optional[Tuple[int, int]] = None
    generator_degrees: List[int] = field(default_factory=list)
    relation_degrees: List[int] = field(default_factory=list)
    dimensions: List[Tuple[int, int]] = field(default_factory=list)
    invariant_dimensions: List[Tuple[int, int]] = field(default_factory=list)
    resolution_ranks: List[int] = field(default_factory=list)
    presentation: Optional[GradedModule] = field(default=None, repr=False, compare=False)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "j": self.j,
            "verdict": self.verdict,
            "witness_degree": self.witness_degree,
            "window": list(self.window) if self.window is not None else None,
            "generator_degrees": list(self.generator_degrees),
            "relation_degrees": list(self.relation_degrees),
            "dimensions": [list(item) for item in self.dimensions],
            "invariant_dimensions": [list(item) for item in self.invariant_dimensions],
            "resolution_ranks": list(self.resolution_ranks),
        }

    def summary(self) -> str:
        text = f"Ext^{self.j}(R({self.n},{self.k}), S): {self.verdict}"
        if self.witness_degree is not None:
            text += f" (degree {self.witness_degree})"
        if self.window is not None:
            text += f", checked degrees {self.window[0]}..{self.window[1]}"
        return text


@dataclass
class Cocycles:
    """Generators of ker d_(j+1)^T and of im d_j^T inside F_j^*."""

    ring: RingDescriptor
    dual_shifts: Tuple[int, ...]
    kernel: List[Vector]
    kernel_degrees: List[int]
    boundaries: List[Vector]
    boundary_degrees: List[int]

    def lifting(self, with_kernel: bool = True) -> LiftingBasis:
        columns = (self.kernel if with_kernel else []) + self.boundaries
        degrees = (self.kernel_degrees if with_kernel else []) + self.boundary_degrees
        return LiftingBasis(
            ModuleBasis(self.ring, len(self.dual_shifts), tuple(columns), self.dual_shifts,
                        degrees=tuple(degrees))
        )


def _dual_rows(columns: Matrix, rank: int) -> List[Vector]:
    """Rows of a matrix given by its columns."""
    return [tuple(column[r] for column in columns) for r in range(rank)]


def cocycles(resolution: FreeResolution, j: int) -> Cocycles:
    S = resolution.ring
    F = resolution.modules[j]
    dual = tuple(-a for a in F.shifts)
    if j + 1 > resolution.length:
        kernel = [F.unit(r) for r in range(F.rank)]
        kernel_degrees = list(dual)
    else:
        upper = resolution.modules[j + 1]
        rows = _dual_rows(resolution.maps[j], F.rank)
        found = syzygies(ModuleBasis(
            S, upper.rank, tuple(rows), tuple(-b for b in upper.shifts), degrees=dual
        ))
        kernel = list(found.elements)
        kernel_degrees = list(found.element_degrees())
    boundaries: List[Vector] = []
    boundary_degrees: List[int] = []
    if j > 0:
        lower = resolution.modules[j - 1]
        for row, shift in zip(_dual_rows(resolution.maps[j - 1], lower.rank), lower.shifts):
            if any(row):
                boundaries.append(row)
                boundary_degrees.append(-shift)
    return Cocycles(S, dual, kernel, kernel_degrees, boundaries, boundary_degrees)


def ext_presentation(resolution: FreeResolution, j: int) -> Tuple[Optional[GradedModule], Optional[Cocycles]]:
    """Presentation of Ext^j as cocycles modulo coboundaries; None when it vanishes."""
    if j < 0 or j > resolution.length:
        return None, None
    data = cocycles(resolution, j)
    if not data.kernel:
        return None, data
    if data.boundaries:
        boundary_lifting = data.lifting(with_kernel=False)
        if all(boundary_lifting.lift(k) is not None for k in data.kernel):
            return None, data
    count = len(data.kernel)
    combined = ModuleBasis(
        data.ring, len(data.dual_shifts), tuple(data.kernel + data.boundaries), data.dual_shifts,
        degrees=tuple(data.kernel_degrees + data.boundary_degrees),
    )
    relations = [s[:count] for s in syzygies(combined).elements]
    module = GradedModule(GradedFreeModule(data.ring, tuple(data.kernel_degrees)), relations)
    return module, data


def ext_dimension_from_cochains(resolution: FreeResolution, j: int, degree: int) -> int:
    """dim Ext^j in one degree, straight from the dual complex."""
    if j < 0 or j > resolution.length:
        return 0
    S = resolution.ring

    def cochain_rank(i: int) -> int:
        # d_(i+1)^T : F_i^* -> F_(i+1)^* in the given degree
        if i < 0 or i + 1 > resolution.length:
            return 0
        columns = resolution.maps[i]
        rows: Dict[Tuple[int, Monomial], int] = {}
        entries: Dict[Tuple[int, int], Any] = {}
        col = 0
        for r, shift in enumerate(resolution.modules[i].shifts):
            for monomial in monomials_of_degree(S, degree + shift):
                for c, column in enumerate(columns):
                    if not column[r]:
                        continue
                    for m, coeff in column[r].mul_monom(monomial).items():
                        entries[(rows.setdefault((c, m), len(rows)), col)] = coeff
                col += 1
        return exact_rank(entries, S.field.domain)

    size = sum(polynomial_ring_dimension(S, degree + a) for a in resolution.modules[j].shifts)
    return size - cochain_rank(j) - cochain_rank(j - 1)


def _equivariant_lifts(
    resolution: FreeResolution, action: PermAction, level: int
) -> Dict[Permutation, List[Vector]]:
    """Images of the basis of F_level under a lift of every sigma.

    F_0 generators are fixed; higher lifts solve d sigma_i = sigma_(i-1) d.
    """
    sigmas = all_permutations(action.n)
    F0 = resolution.modules[0]
    current = {sigma: [F0.unit(r) for r in range(F0.rank)] for sigma in sigmas}
    for i in range(1, level + 1):
        columns = resolution.maps[i - 1]
        lower = resolution.modules[i - 1]
        lifting = LiftingBasis(ModuleBasis(resolution.ring, lower.rank, columns, lower.shifts))
        following = {}
        for sigma in sigmas:
            mover = action.with_images(lambda _, images=current[sigma]: images)
            images = []
            for column in columns:
                lifted = lifting.lift(mover.apply_vector(sigma, column))
                if lifted is None:
                    raise CertificateError(ERROR_CERTIFICATE, f"no equivariant lift at level {i}")
                images.append(lifted)
            following[sigma] = images
        current = following
    return current


def _window(generator_degrees: Sequence[int], relation_degrees: Sequence[int], n: int) -> Tuple[int, int]:
    """[min gen, max gen + n + max(top relation, relation spread, 0)]."""
    low = min(generator_degrees)
    top = max(relation_degrees) if relation_degrees else 0
    spread = top - low if relation_degrees else 0
    return low, max(generator_degrees) + max(0, spread, top) + n


def ext_action(
    resolution: FreeResolution, j: int, data: Cocycles, spec: PolygraphSpec, base: PermAction
) -> PermAction:
    """S_n on the Ext^j presentation induced by (sigma phi)(v) = sigma(phi(sigma^-1 v))."""
    S = resolution.ring
    rank = resolution.modules[j].rank
    count = len(data.kernel)
    lifts = _equivariant_lifts(resolution, base, j)
    lifting = data.lifting()
    ext_images: Dict[Permutation, List[Vector]] = {}
    for sigma in all_permutations(spec.n):
        back = lifts[inverse(sigma)]
        images = []
        for cocycle in data.kernel:
            moved = []
            for c in range(rank):
                total = S.zero
                for index, coeff in enumerate(back[c]):
                    if coeff and cocycle[index]:
                        total = total + coeff * cocycle[index]
                moved.append(base.apply(sigma, total))
            lifted = lifting.lift(tuple(moved))
            if lifted is None:
                raise CertificateError(ERROR_CERTIFICATE, "Ext action leaves the cocycles")
            images.append(tuple(lifted[:count]))
        ext_images[sigma] = images
    return base.with_images(lambda sigma: ext_images[sigma])


def ext_modules(
    pres: SModulePresentation,
    j: int,
    threads: int = 1,
    character: Character = TRIVIAL,
    resolution: Optional[FreeResolution] = None,
) -> ExtReport:
    """Ext^j_S(R(n,k), S) with its isotypic dimensions and a verdict.

    Raises:
        ResolutionLengthError: If the resolution does not terminate
    """
    spec = pres.spec
    if resolution is None:
        resolution = minimal_free_resolution(pres.module)
    if resolution.modules[0].shifts != pres.generator_degrees:
        raise CertificateError(ERROR_CERTIFICATE, "resolution changed the generators")
    report = ExtReport(spec.n, spec.k, j, VERDICT_EXT_ZERO, resolution_ranks=resolution.ranks)
    module, data = ext_presentation(resolution, j)
    if module is None:
        _LOGGER.debug("Ext^%d vanishes for R(%d,%d)", j, spec.n, spec.k)
        return report
    report.presentation = module
    report.generator_degrees = list(module.shifts)
    report.relation_degrees = list(module.relation_degrees)
    report.window = _window(module.shifts, module.relation_degrees, spec.n)

    action = ext_action(resolution, j, data, spec, pres.action())
    try:
        verify_action(action, module)
    except ActionError as ex:
        raise CertificateError(ERROR_CERTIFICATE, f"{ERROR_ACTION}: {ex}") from ex

    low, high = report.window
    degrees = list(range(low, high + 1))
    report.dimensions = [(q, module.dimension(q)) for q in degrees]
    invariants = run_cells(
        lambda q: isotypic_dimension(module, action, character, q, verify=False), degrees, threads
    )
    report.invariant_dimensions = [(q, invariants[q]) for q in degrees]
    witness = next((q for q in degrees if invariants[q]), None)
    if witness is None:
        report.verdict = VERDICT_INVARIANTS_ZERO
    else:
        report.verdict = VERDICT_INVARIANTS_NONZERO
        report.witness_degree = witness
    _LOGGER.debug("Ext^%d in degrees %d..%d: %s", j, low, high, report.verdict)
    return report


def equivariant_vanishing_check(
    n: int,
    k: int,
    field_: ScalarField = RATIONALS,
    allow_large: bool = False,
    threads: int = 1,
    cap: int = DEFAULT_STABILIZATION_CAP,
) -> ExtReport:
    """Ext^(k+1)_S(R(n,k), S) and its S_n-invariants."""
    spec = PolygraphSpec(n, k, field_, allow_large)
    presentation = s_module_presentation(spec, cap=cap, threads=threads)
    return ext_modules(presentation, k + 1, threads)
