"""Groebner bases for ideals and submodules of free modules.

Module elements are encoded as polynomials that are linear in extra
"position" variables ``@e0 .. @e{r-1}``, so one Buchberger loop serves both
ideals and modules. Position-over-term puts the position variables first in a
product order; term-over-position puts them last.
"""
from __future__ import annotations

import heapq
import logging
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import Symbol
from sympy.polys.orderings import ProductOrder, lex
from sympy.polys.rings import PolyRing

from .algebra import (
    Monomial,
    MultiPoly,
    RingDescriptor,
    Slice,
    change_ring,
    graded_degree,
    INHOMOGENEOUS,
    monomials_of_degree,
)
from .const import (
    DEFAULT_MAX_BASIS,
    ERROR_BASIS_LIMIT,
    ERROR_EMPTY_IDEAL_LIST,
    ERROR_INHOMOGENEOUS,
    ERROR_NOT_GROEBNER,
    ERROR_RING_MISMATCH,
    ORDER_BLOCK,
    ORDER_GREVLEX,
)
from .exceptions import (
    BasisLimitError,
    InhomogeneousError,
    InputError,
    NotGroebnerError,
    RingMismatchError,
)
from .helpers import run_cells
from .linalg import columns_to_entries, independent_columns

_LOGGER = logging.getLogger(__name__)

Vector = Tuple[MultiPoly, ...]

_BASIS_LIMIT: ContextVar[int] = ContextVar("koszulkit_basis_limit", default=DEFAULT_MAX_BASIS)


@contextmanager
def basis_limit(limit: int) -> Iterator[None]:
    """Abort Groebner computations whose basis grows beyond ``limit``."""
    token = _BASIS_LIMIT.set(limit)
    try:
        yield
    finally:
        _BASIS_LIMIT.reset(token)


def current_basis_limit() -> int:
    return _BASIS_LIMIT.get()


# ---------------------------------------------------------------------------
# Buchberger core


def reduce_poly(f: MultiPoly, basis: Sequence[MultiPoly], leads: Sequence[Monomial]) -> MultiPoly:
    """Full reduction of ``f`` by a list of monic polynomials with known leads."""
    ring = f.ring
    div, mul = ring.monomial_div, ring.monomial_mul
    leading = ring.leading_expv
    f = f.copy()
    remainder = ring.zero
    while f:
        lm = leading(f)
        lc = f[lm]
        for g, glm in zip(basis, leads):
            quotient = div(lm, glm)
            if quotient is None:
                continue
            for mg, cg in g.items():
                m1 = mul(mg, quotient)
                value = f.get(m1)
                value = -lc * cg if value is None else value - lc * cg
                if value:
                    f[m1] = value
                else:
                    del f[m1]
            break
        else:
            remainder[lm] = lc
            del f[lm]
    return remainder


def _groebner(
    polys: Sequence[MultiPoly],
    ring: PolyRing,
    degree: Callable[[Monomial], int],
    component: Callable[[Monomial], int],
) -> List[MultiPoly]:
    """Reduced Groebner basis by the sugar strategy with Gebauer-Moeller pruning."""
    limit = _BASIS_LIMIT.get()
    lcm, div, mul = ring.monomial_lcm, ring.monomial_div, ring.monomial_mul
    key = ring.order
    basis: List[MultiPoly] = []
    leads: List[Monomial] = []
    sugars: List[int] = []
    pairs: Dict[Tuple[int, int], Tuple[int, Monomial]] = {}
    queue: List[Tuple] = []

    def add(f: MultiPoly, sugar: int) -> None:
        f = f.monic()
        lm = ring.leading_expv(f)
        k = len(basis)
        for (i, j), (_, pair_lcm) in list(pairs.items()):
            if (
                div(pair_lcm, lm) is not None
                and pair_lcm != lcm(leads[i], lm)
                and pair_lcm != lcm(leads[j], lm)
            ):
                del pairs[(i, j)]
        by_lcm: Dict[Monomial, List[int]] = {}
        position = component(lm)
        for i, other in enumerate(leads):
            if component(other) == position:
                by_lcm.setdefault(lcm(other, lm), []).append(i)
        minimal: List[Monomial] = []
        for pair_lcm in sorted(by_lcm, key=key):
            if any(div(pair_lcm, m) is not None for m in minimal):
                continue
            minimal.append(pair_lcm)
            members = by_lcm[pair_lcm]
            if any(mul(leads[i], lm) == pair_lcm for i in members):
                continue
            i = members[0]
            pair_sugar = max(
                sugars[i] + degree(pair_lcm) - degree(leads[i]),
                sugar + degree(pair_lcm) - degree(lm),
            )
            pairs[(i, k)] = (pair_sugar, pair_lcm)
            heapq.heappush(queue, (pair_sugar, 1, key(pair_lcm), i, k))
        basis.append(f)
        leads.append(lm)
        sugars.append(sugar)
        if len(basis) > limit:
            raise BasisLimitError(ERROR_BASIS_LIMIT, f"{len(basis)} > {limit}", size=len(basis))

    for index, f in enumerate(polys):
        if f:
            sugar = max(degree(m) for m in f.itermonoms())
            heapq.heappush(queue, (sugar, 0, (), index, index))

    reductions = 0
    while queue:
        sugar, kind, _, i, j = heapq.heappop(queue)
        if kind == 0:
            s = polys[i]
        else:
            if (i, j) not in pairs:
                continue
            _, pair_lcm = pairs.pop((i, j))
            s = basis[i].mul_monom(div(pair_lcm, leads[i])) - basis[j].mul_monom(
                div(pair_lcm, leads[j])
            )
        reductions += 1
        r = reduce_poly(s, basis, leads)
        if r:
            add(r, sugar)

    _LOGGER.debug("Buchberger: %d reductions, %d basis elements before minimalization",
                  reductions, len(basis))
    return _interreduce(basis, leads, key)


def _interreduce(basis: List[MultiPoly], leads: List[Monomial], key) -> List[MultiPoly]:
    if not basis:
        return []
    ring = basis[0].ring
    order = sorted(range(len(basis)), key=lambda i: key(leads[i]))
    kept: List[int] = []
    for i in order:
        if all(ring.monomial_div(leads[i], leads[j]) is None for j in kept):
            kept.append(i)
    minimal = [basis[i] for i in kept]
    minimal_leads = [leads[i] for i in kept]
    reduced = []
    for position, g in enumerate(minimal):
        others = minimal[:position] + minimal[position + 1:]
        other_leads = minimal_leads[:position] + minimal_leads[position + 1:]
        lead = minimal_leads[position]
        tail = g.copy()
        coeff = tail.pop(lead)
        result = reduce_poly(tail, others, other_leads)
        result[lead] = coeff
        reduced.append(result)
    return reduced


# ---------------------------------------------------------------------------
# Ideals


@dataclass(frozen=True)
class IdealBasis:
    """Generators of an ideal; ``is_groebner`` marks a reduced Groebner basis."""

    ring: RingDescriptor
    generators: Tuple[MultiPoly, ...] = ()
    is_groebner: bool = False

    def __post_init__(self) -> None:
        ring = self.ring.poly_ring
        gens = tuple(g for g in self.generators if g)
        for g in gens:
            if g.ring != ring:
                raise RingMismatchError(ERROR_RING_MISMATCH, str(self.ring))
        object.__setattr__(self, "generators", gens)

    @property
    def order(self) -> str:
        return self.ring.order

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @cached_property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return tuple(g.leading_expv() for g in self.generators)

    def contains(self, f: MultiPoly) -> bool:
        return not normal_form(f, self if self.is_groebner else buchberger(self))


def _ideal_degree(ring: RingDescriptor) -> Callable[[Monomial], int]:
    return ring.monomial_degree


def _no_component(monomial: Monomial) -> int:
    return 0


# ---------------------------------------------------------------------------
# Modules


class ModuleEncoding:
    """Polynomial ring with one extra variable per free-module position."""

    def __init__(self, ring: RingDescriptor, rank: int, position_over_term: bool = True):
        base = ring.poly_ring
        n = ring.ngens
        self.ring = ring
        self.rank = rank
        self.ngens = n
        symbols = base.symbols + tuple(Symbol(f"@e{i}") for i in range(rank))
        xs, es = Slice(0, n), Slice(n, n + rank)
        if position_over_term:
            order = ProductOrder((lex, es), (base.order, xs))
        else:
            order = ProductOrder((base.order, xs), (lex, es))
        self.poly_ring = PolyRing(symbols, base.domain, order)
        self._units = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]

    def component(self, monomial: Monomial) -> int:
        for i in range(self.rank):
            if monomial[self.ngens + i]:
                return i
        return -1

    def degree_function(self, shifts: Sequence[int]) -> Callable[[Monomial], int]:
        weights = self.ring.weights
        n = self.ngens

        def degree(monomial: Monomial) -> int:
            base = sum(w * e for w, e in zip(weights, monomial[:n]))
            position = self.component(monomial)
            return base + (shifts[position] if position >= 0 else 0)

        return degree

    def encode(self, vector: Sequence[MultiPoly]) -> MultiPoly:
        terms = {}
        for i, f in enumerate(vector):
            unit = self._units[i]
            for monom, coeff in f.items():
                terms[monom + unit] = coeff
        return self.poly_ring.dtype(terms)

    def decode(self, poly: MultiPoly) -> Vector:
        parts: List[Dict[Monomial, object]] = [dict() for _ in range(self.rank)]
        n = self.ngens
        for monom, coeff in poly.items():
            parts[self.component(monom)][monom[:n]] = coeff
        dtype = self.ring.poly_ring.dtype
        return tuple(dtype(part) for part in parts)


@lru_cache(maxsize=256)
def module_encoding(ring: RingDescriptor, rank: int, position_over_term: bool = True) -> ModuleEncoding:
    return ModuleEncoding(ring, rank, position_over_term)


def vector_degree(vector: Sequence[MultiPoly], shifts: Sequence[int], ring: RingDescriptor):
    """Degree of a homogeneous vector of the graded free module with ``shifts``.

    Returns None for the zero vector.

    Raises:
        InhomogeneousError: If the entries do not share one degree
    """
    degree = None
    for f, shift in zip(vector, shifts):
        if not f:
            continue
        d = graded_degree(f, ring)
        if d == INHOMOGENEOUS or (degree is not None and d + shift != degree):
            raise InhomogeneousError(ERROR_INHOMOGENEOUS, f"entry degree {d} with shift {shift}")
        degree = d + shift
    return degree


@dataclass(frozen=True)
class ModuleBasis:
    """Vectors in a graded free module of rank ``rank``.

    ``shifts`` are the ambient generator degrees; ``degrees`` optionally
    records the degree of each element (needed for zero vectors).
    """

    ring: RingDescriptor
    rank: int
    elements: Tuple[Vector, ...] = ()
    shifts: Tuple[int, ...] = ()
    position_over_term: bool = True
    is_groebner: bool = False
    degrees: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        elements = tuple(tuple(v) for v in self.elements)
        shifts = tuple(self.shifts) or (0,) * self.rank
        if len(shifts) != self.rank:
            raise InputError("Shift list length must equal the module rank")
        ring = self.ring.poly_ring
        for v in elements:
            if len(v) != self.rank:
                raise InputError("Vector length must equal the module rank", str(len(v)))
            for f in v:
                if f.ring != ring:
                    raise RingMismatchError(ERROR_RING_MISMATCH, str(self.ring))
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "shifts", shifts)
        if self.degrees is not None:
            object.__setattr__(self, "degrees", tuple(self.degrees))

    @property
    def encoding(self) -> ModuleEncoding:
        return module_encoding(self.ring, self.rank, self.position_over_term)

    @cached_property
    def encoded(self) -> Tuple[MultiPoly, ...]:
        return tuple(self.encoding.encode(v) for v in self.elements)

    @cached_property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return tuple(p.leading_expv() for p in self.encoded)

    def element_degrees(self) -> Tuple[int, ...]:
        """Degree of every element, using ``degrees`` when provided."""
        if self.degrees is not None:
            return self.degrees
        out = []
        for v in self.elements:
            d = vector_degree(v, self.shifts, self.ring)
            if d is None:
                raise InhomogeneousError(ERROR_INHOMOGENEOUS, "zero vector without a declared degree")
            out.append(d)
        return tuple(out)

    def leading_positions(self) -> List[Tuple[int, Monomial]]:
        """(component, base monomial) of each leading term."""
        enc = self.encoding
        return [(enc.component(m), m[: enc.ngens]) for m in self.leading_monomials]


def buchberger(gens: Union[IdealBasis, ModuleBasis]):
    """Reduced Groebner basis of an ideal or a submodule."""
    if gens.is_groebner:
        return gens
    if isinstance(gens, IdealBasis):
        ring = gens.ring
        result = _groebner(gens.generators, ring.poly_ring, _ideal_degree(ring), _no_component)
        return IdealBasis(ring, tuple(result), True)
    enc = gens.encoding
    polys = [p for p in gens.encoded if p]
    result = _groebner(polys, enc.poly_ring, enc.degree_function(gens.shifts), enc.component)
    return ModuleBasis(
        gens.ring,
        gens.rank,
        tuple(enc.decode(p) for p in result),
        gens.shifts,
        gens.position_over_term,
        True,
    )


def normal_form(f, G: Union[IdealBasis, ModuleBasis]):
    """Remainder of a polynomial (or vector) modulo a Groebner basis.

    Raises:
        NotGroebnerError: If G is not marked as a Groebner basis
    """
    if not G.is_groebner:
        raise NotGroebnerError(ERROR_NOT_GROEBNER)
    if isinstance(G, IdealBasis):
        if f.ring != G.ring.poly_ring:
            raise RingMismatchError(ERROR_RING_MISMATCH, str(G.ring))
        return reduce_poly(f, G.generators, G.leading_monomials)
    if len(f) != G.rank:
        raise InputError("Vector length must equal the module rank")
    enc = G.encoding
    remainder = reduce_poly(enc.encode(f), G.encoded, G.leading_monomials)
    return enc.decode(remainder)


def normal_form_encoded(poly: MultiPoly, G: ModuleBasis) -> MultiPoly:
    """Normal form of an already encoded vector, kept encoded."""
    return reduce_poly(poly, G.encoded, G.leading_monomials)


# ---------------------------------------------------------------------------
# Elimination and intersection


def _restrict(
    basis: Sequence[MultiPoly], source: RingDescriptor, block: int, target: RingDescriptor
) -> IdealBasis:
    kept = [g for g in basis if all(all(e == 0 for e in m[:block]) for m in g.itermonoms())]
    moved = tuple(change_ring(g, source, target) for g in kept)
    if target.order == ORDER_GREVLEX:
        return IdealBasis(target, moved, True)
    return buchberger(IdealBasis(target, moved))


def eliminate(I: IdealBasis, keep: Sequence[str]) -> IdealBasis:
    """Generators of the intersection of I with the subring on ``keep``."""
    ring = I.ring
    unknown = set(keep) - set(ring.variables)
    keep = [name for name in ring.variables if name in set(keep)]
    if unknown:
        raise InputError("Unknown variables to keep", ", ".join(sorted(unknown)))
    if not keep:
        raise InputError("Elimination must keep at least one variable")
    drop = [name for name in ring.variables if name not in keep]
    target_order = ring.order if ring.order != ORDER_BLOCK else ORDER_GREVLEX
    target = RingDescriptor(
        tuple(keep), tuple(ring.weights[ring.index(v)] for v in keep), target_order, 0, ring.field
    )
    if not drop:
        return buchberger(IdealBasis(target, tuple(change_ring(g, ring, target) for g in I.generators)))
    variables = tuple(drop) + tuple(keep)
    weights = tuple(ring.weights[ring.index(v)] for v in variables)
    block_ring = RingDescriptor(variables, weights, ORDER_BLOCK, len(drop), ring.field)
    polys = [change_ring(g, ring, block_ring) for g in I.generators]
    basis = _groebner(polys, block_ring.poly_ring, _ideal_degree(block_ring), _no_component)
    _LOGGER.debug("Eliminated %s: %d basis elements", ", ".join(drop), len(basis))
    return _restrict(basis, block_ring, len(drop), target)


_TAG = "_t"


def _intersect_pair(I: IdealBasis, J: IdealBasis) -> IdealBasis:
    ring = I.ring
    if I.is_zero or J.is_zero:
        return IdealBasis(ring, (), True)
    tagged = RingDescriptor((_TAG,) + ring.variables, (1,) + ring.weights, ORDER_BLOCK, 1, ring.field)
    t = tagged.gen(_TAG)
    one = tagged.one
    polys = [t * change_ring(f, ring, tagged) for f in I.generators]
    polys += [(one - t) * change_ring(g, ring, tagged) for g in J.generators]
    basis = _groebner(polys, tagged.poly_ring, _ideal_degree(tagged), _no_component)
    kept = [g for g in basis if all(m[0] == 0 for m in g.itermonoms())]
    moved = tuple(change_ring(g, tagged, ring) for g in kept)
    if ring.order == ORDER_GREVLEX:
        return IdealBasis(ring, moved, True)
    return buchberger(IdealBasis(ring, moved))


def intersect_ideals(ideals: Sequence[IdealBasis], threads: int = 1) -> IdealBasis:
    """Intersection of ideals by a balanced binary fold.

    Raises:
        InputError: For an empty list
        RingMismatchError: If the ideals live in different rings
    """
    level = list(ideals)
    if not level:
        raise InputError(ERROR_EMPTY_IDEAL_LIST)
    ring = level[0].ring
    for ideal in level[1:]:
        if ideal.ring != ring:
            raise RingMismatchError(ERROR_RING_MISMATCH, f"{ring} vs {ideal.ring}")
    if len(level) == 1:
        return level[0]
    while len(level) > 1:
        pairs = [(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        merged = run_cells(lambda index: _intersect_pair(*pairs[index]), range(len(pairs)), threads)
        carry = [level[-1]] if len(level) % 2 else []
        level = [merged[index] for index in range(len(pairs))] + carry
        _LOGGER.debug("Intersection fold: %d ideals left", len(level))
    return level[0]


# ---------------------------------------------------------------------------
# Syzygies and lifting


class LiftingBasis:
    """Groebner basis of the graph of (free module on gens) -> ambient module.

    Gives the syzygies of the generators and expresses ambient vectors
    as combinations of them.
    """

    def __init__(self, gens: ModuleBasis):
        self.ring = gens.ring
        self.target_rank = gens.rank
        self.count = len(gens.elements)
        self.degrees = gens.element_degrees()
        rank = self.target_rank + self.count
        self.shifts = tuple(gens.shifts) + tuple(self.degrees)
        self.encoding = module_encoding(self.ring, rank, True)
        zero = self.ring.zero
        one = self.ring.one
        polys = []
        for i, v in enumerate(gens.elements):
            unit = [zero] * self.count
            unit[i] = one
            polys.append(self.encoding.encode(tuple(v) + tuple(unit)))
        self.basis = _groebner(
            polys, self.encoding.poly_ring, self.encoding.degree_function(self.shifts),
            self.encoding.component,
        )
        self.leads = [p.leading_expv() for p in self.basis]

    def syzygy_vectors(self) -> List[Vector]:
        """Groebner basis of the syzygy module (not yet minimal)."""
        out = []
        for p, lead in zip(self.basis, self.leads):
            if self.encoding.component(lead) >= self.target_rank:
                out.append(self.encoding.decode(p)[self.target_rank:])
        return out

    def lift(self, vector: Sequence[MultiPoly]) -> Optional[Vector]:
        """Coefficients c with sum c_i gens_i = vector, or None."""
        zero = self.ring.zero
        padded = tuple(vector) + (zero,) * self.count
        remainder = reduce_poly(self.encoding.encode(padded), self.basis, self.leads)
        decoded = self.encoding.decode(remainder)
        if any(decoded[: self.target_rank]):
            return None
        return tuple(-c for c in decoded[self.target_rank:])


def _shifted_product(monomial: Monomial, vector: Vector) -> Vector:
    return tuple(f.mul_monom(monomial) if f else f for f in vector)


def minimal_generators(
    vectors: Sequence[Vector],
    ring: RingDescriptor,
    shifts: Sequence[int],
    degrees: Optional[Sequence[int]] = None,
) -> List[int]:
    """Indices of a minimal generating subset of homogeneous vectors.

    Works degree by degree: a vector is kept unless it lies in the span of
    the kept vectors of lower degree times monomials and the kept vectors of
    the same degree seen before it.
    """
    if degrees is None:
        degrees = [vector_degree(v, shifts, ring) for v in vectors]
    candidates = [i for i, v in enumerate(vectors) if any(v) and degrees[i] is not None]
    candidates.sort(key=lambda i: (degrees[i], i))
    kept: List[int] = []
    position = 0
    while position < len(candidates):
        degree = degrees[candidates[position]]
        batch = []
        while position < len(candidates) and degrees[candidates[position]] == degree:
            batch.append(candidates[position])
            position += 1
        rows: Dict[Tuple[int, Monomial], int] = {}
        columns: List[Dict[int, object]] = []

        def column(vector: Vector) -> Dict[int, object]:
            out = {}
            for comp, f in enumerate(vector):
                for monom, coeff in f.items():
                    out[rows.setdefault((comp, monom), len(rows))] = coeff
            return out

        for i in kept:
            for monom in monomials_of_degree(ring, degree - degrees[i]):
                columns.append(column(_shifted_product(monom, vectors[i])))
        offset = len(columns)
        for i in batch:
            columns.append(column(vectors[i]))
        pivots = set(independent_columns(columns_to_entries(columns), ring.field.domain))
        kept.extend(i for j, i in enumerate(batch) if offset + j in pivots)
    return sorted(kept)


def syzygies(gens: ModuleBasis, minimal: bool = True) -> ModuleBasis:
    """Generators of the kernel of (free module on gens) -> ambient module.

    The result lives in the free module whose shifts are the generator
    degrees; with ``minimal`` the generating set is minimal.

    Raises:
        InhomogeneousError: If a generator is not homogeneous
    """
    degrees = gens.element_degrees()
    lifting = LiftingBasis(gens)
    vectors = lifting.syzygy_vectors()
    if minimal and vectors:
        keep = minimal_generators(vectors, gens.ring, degrees)
        vectors = [vectors[i] for i in keep]
    _LOGGER.debug("Syzygies of %d generators: %d found", len(gens.elements), len(vectors))
    return ModuleBasis(gens.ring, len(gens.elements), tuple(vectors), degrees)
