"""Graded modules, their pieces, free resolutions and Betti tables."""
from __future__ import annotations

import csv
import io
import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import voluptuous as vol

from .algebra import (
    RATIONALS,
    Monomial,
    MultiPoly,
    RingDescriptor,
    ScalarField,
    format_poly,
    monomials_of_degree,
    parse_poly,
)
from .const import (
    CONF_RELATIONS,
    CONF_SHIFTS,
    CONF_VARS,
    CONF_WEIGHTS,
    ERROR_CERTIFICATE,
    ERROR_RESOLUTION_LENGTH,
    MODULE_SCHEMA,
    ORDER_GREVLEX,
)
from .exceptions import CertificateError, InputError, ResolutionLengthError
from .groebner import (
    LiftingBasis,
    ModuleBasis,
    Vector,
    buchberger,
    minimal_generators,
    normal_form_encoded,
    syzygies,
    vector_degree,
)
from .helpers import binomial, run_cells
from .linalg import Entries

_LOGGER = logging.getLogger(__name__)

Matrix = Tuple[Vector, ...]  # columns


@dataclass(frozen=True)
class GradedFreeModule:
    """Free module sum S(-a) over the shifts a."""

    ring: RingDescriptor
    shifts: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "shifts", tuple(self.shifts))

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def basis(self, degree: int) -> Tuple[Tuple[Monomial, int], ...]:
        """Monomial basis (monomial, generator index) of the degree piece."""
        return tuple(
            (monomial, i)
            for i, shift in enumerate(self.shifts)
            for monomial in monomials_of_degree(self.ring, degree - shift)
        )

    def dimension(self, degree: int) -> int:
        return sum(len(monomials_of_degree(self.ring, degree - shift)) for shift in self.shifts)

    def unit(self, index: int) -> Vector:
        zero, one = self.ring.zero, self.ring.one
        return tuple(one if i == index else zero for i in range(self.rank))


@dataclass(frozen=True)
class GradedPiece:
    """Normal-form monomial basis of one degree of a graded module."""

    degree: int
    basis: Tuple[Tuple[Monomial, int], ...]

    @cached_property
    def index(self) -> Dict[Tuple[Monomial, int], int]:
        return {term: i for i, term in enumerate(self.basis)}

    @property
    def dimension(self) -> int:
        return len(self.basis)


class GradedModule:
    """Cokernel of a homogeneous relation matrix F_1 -> F_0.

    Instances are immutable; the relation Groebner basis and the graded
    pieces are computed on first use.
    """

    def __init__(self, free: GradedFreeModule, relations: Iterable[Sequence[MultiPoly]] = ()):
        self.free = free
        columns = []
        degrees = []
        for column in relations:
            column = tuple(column)
            if len(column) != free.rank:
                raise InputError("Relation length must equal the number of generators")
            degree = vector_degree(column, free.shifts, free.ring)
            if degree is None:
                continue
            columns.append(column)
            degrees.append(degree)
        self.relations: Matrix = tuple(columns)
        self.relation_degrees: Tuple[int, ...] = tuple(degrees)
        self._pieces: Dict[int, GradedPiece] = {}

    @property
    def ring(self) -> RingDescriptor:
        return self.free.ring

    @property
    def shifts(self) -> Tuple[int, ...]:
        return self.free.shifts

    @property
    def rank(self) -> int:
        return self.free.rank

    @cached_property
    def relation_basis(self) -> ModuleBasis:
        """Groebner basis of the relation submodule, term over position."""
        gens = ModuleBasis(
            self.ring, self.rank, self.relations, self.shifts, position_over_term=False
        )
        basis = buchberger(gens)
        _LOGGER.debug(
            "Relation basis: %d relations -> %d Groebner elements",
            len(self.relations), len(basis.elements),
        )
        return basis

    @cached_property
    def _leads(self) -> Dict[int, List[Monomial]]:
        leads: Dict[int, List[Monomial]] = {}
        for component, monomial in self.relation_basis.leading_positions():
            leads.setdefault(component, []).append(monomial)
        return leads

    def graded_piece(self, degree: int) -> GradedPiece:
        piece = self._pieces.get(degree)
        if piece is None:
            leads = self._leads
            basis = []
            for monomial, i in self.free.basis(degree):
                if not any(
                    all(a >= b for a, b in zip(monomial, lead)) for lead in leads.get(i, ())
                ):
                    basis.append((monomial, i))
            piece = GradedPiece(degree, tuple(basis))
            self._pieces[degree] = piece
        return piece

    def coordinates(self, vector: Sequence[MultiPoly], degree: int) -> Dict[int, Any]:
        """Coordinates of a homogeneous vector of F_0 in the degree piece."""
        basis = self.relation_basis
        encoding = basis.encoding
        remainder = encoding.decode(normal_form_encoded(encoding.encode(vector), basis))
        index = self.graded_piece(degree).index
        out: Dict[int, Any] = {}
        for component, f in enumerate(remainder):
            for monomial, coeff in f.items():
                try:
                    out[index[(monomial, component)]] = coeff
                except KeyError as ex:
                    raise CertificateError(
                        ERROR_CERTIFICATE, f"term outside the degree {degree} piece"
                    ) from ex
        return out

    def multiplication(self, f: MultiPoly, degree: int) -> Entries:
        """Matrix of multiplication by homogeneous f from degree to degree + deg f."""
        target = degree + self.ring.monomial_degree(f.leading_expv()) if f else degree
        source = self.graded_piece(degree)
        zero = self.ring.zero
        entries: Entries = {}
        for col, (monomial, i) in enumerate(source.basis):
            product = f.mul_monom(monomial)
            vector = tuple(product if j == i else zero for j in range(self.rank))
            for row, value in self.coordinates(vector, target).items():
                entries[(row, col)] = value
        return entries

    def dimension(self, degree: int) -> int:
        return self.graded_piece(degree).dimension

    def __repr__(self) -> str:
        return f"GradedModule({self.ring}, shifts={list(self.shifts)}, relations={len(self.relations)})"


def free_module(ring: RingDescriptor, shifts: Sequence[int] = (0,)) -> GradedModule:
    return GradedModule(GradedFreeModule(ring, tuple(shifts)))


def quotient_module(ring: RingDescriptor, polys: Sequence[MultiPoly]) -> GradedModule:
    """The cyclic module S/I."""
    return GradedModule(GradedFreeModule(ring, (0,)), [(f,) for f in polys])


def graded_piece(M: GradedModule, degree: int) -> GradedPiece:
    return M.graded_piece(degree)


def hilbert_function(M: GradedModule, degree: int) -> int:
    return M.graded_piece(degree).dimension


def hilbert_values(M: GradedModule, degrees: Iterable[int], threads: int = 1) -> Dict[int, int]:
    """Hilbert function on a range of degrees, evaluated cell by cell."""
    _ = M.relation_basis
    return run_cells(lambda q: hilbert_function(M, q), degrees, threads)


# ---------------------------------------------------------------------------
# Presentations of submodules


def submodule_presentation(N: GradedModule, gens: Sequence[Sequence[MultiPoly]]) -> GradedModule:
    """Presentation of the submodule of N generated by ``gens``.

    The result has one generator per input vector, shifted by its degree;
    its relations are the minimal syzygies of gens modulo the relations of N.
    """
    gens = [tuple(v) for v in gens]
    degrees = []
    for v in gens:
        degree = vector_degree(v, N.shifts, N.ring)
        if degree is None:
            raise InputError("Submodule generators must be nonzero")
        degrees.append(degree)
    columns = tuple(gens) + N.relations
    all_degrees = tuple(degrees) + N.relation_degrees
    combined = ModuleBasis(N.ring, N.rank, columns, N.shifts, degrees=all_degrees)
    relations = [s[: len(gens)] for s in syzygies(combined).elements]
    return GradedModule(GradedFreeModule(N.ring, tuple(degrees)), relations)


# ---------------------------------------------------------------------------
# Resolutions


@dataclass(frozen=True)
class FreeResolution:
    """F_0 <- F_1 <- ... with maps[i] the columns of F_{i+1} -> F_i."""

    ring: RingDescriptor
    modules: Tuple[GradedFreeModule, ...]
    maps: Tuple[Matrix, ...]

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    @property
    def ranks(self) -> List[int]:
        return [F.rank for F in self.modules]

    def steps(self) -> List[Tuple[GradedFreeModule, Matrix]]:
        """(F_i, d_i) pairs, d_0 being empty."""
        return [(F, self.maps[i - 1] if i else ()) for i, F in enumerate(self.modules)]

    def is_minimal(self) -> bool:
        return not any(f.is_ground and f for d in self.maps for col in d for f in col)

    def composes_to_zero(self) -> bool:
        for upper, lower in zip(self.maps[1:], self.maps[:-1]):
            for column in upper:
                if any(combine_columns(lower, column)):
                    return False
        return True

    def betti_table(self) -> "BettiTable":
        entries: Dict[Tuple[int, int], int] = {}
        for p, F in enumerate(self.modules):
            for shift in F.shifts:
                entries[(p, shift - p)] = entries.get((p, shift - p), 0) + 1
        return BettiTable(entries)


def combine_columns(columns: Matrix, coefficients: Sequence[MultiPoly]) -> Vector:
    """Sum of coefficients[c] * columns[c]."""
    rank = len(columns[0]) if columns else 0
    out = [None] * rank
    for column, coeff in zip(columns, coefficients):
        if not coeff:
            continue
        for r, f in enumerate(column):
            if f:
                term = coeff * f
                out[r] = term if out[r] is None else out[r] + term
    zero = coefficients[0].ring.zero if coefficients else None
    return tuple(zero if f is None else f for f in out)


def _strike_units(shifts: List[int], columns: List[Vector]) -> Tuple[List[int], List[Vector]]:
    """Remove generator/relation pairs joined by a unit entry."""
    while True:
        hit = next(
            (
                (r, c)
                for c, column in enumerate(columns)
                for r, f in enumerate(column)
                if f and f.is_ground
            ),
            None,
        )
        if hit is None:
            return shifts, columns
        r, c = hit
        pivot = columns[c]
        unit = pivot[r].LC
        updated = []
        for index, column in enumerate(columns):
            if index == c:
                continue
            factor = column[r].quo_ground(unit) if column[r] else None
            if factor:
                column = tuple(f - factor * g for f, g in zip(column, pivot))
            updated.append(column[:r] + column[r + 1:])
        shifts = shifts[:r] + shifts[r + 1:]
        columns = [v for v in updated if any(v)]


def minimal_presentation(M: GradedModule) -> GradedModule:
    """Same module with minimal generators and minimal relations."""
    shifts = list(M.shifts)
    columns = list(M.relations)
    if columns:
        keep = minimal_generators(columns, M.ring, shifts, M.relation_degrees)
        columns = [columns[i] for i in keep]
    shifts, columns = _strike_units(shifts, columns)
    free = GradedFreeModule(M.ring, tuple(shifts))
    if columns:
        degrees = [vector_degree(v, shifts, M.ring) for v in columns]
        keep = minimal_generators(columns, M.ring, shifts, degrees)
        columns = [columns[i] for i in keep]
    return GradedModule(free, columns)


def _resolve(
    ring: RingDescriptor,
    shifts: Tuple[int, ...],
    first: Sequence[Vector],
    max_length: int,
    minimal_steps: bool,
) -> FreeResolution:
    modules = [GradedFreeModule(ring, shifts)]
    maps: List[Matrix] = []
    columns = list(first)
    current = shifts
    while columns:
        if len(maps) >= max_length:
            raise ResolutionLengthError(ERROR_RESOLUTION_LENGTH, f"max_length={max_length}")
        gens = ModuleBasis(ring, len(current), tuple(columns), current)
        degrees = gens.element_degrees()
        maps.append(tuple(columns))
        modules.append(GradedFreeModule(ring, degrees))
        if minimal_steps or len(maps) > 1:
            columns = list(syzygies(gens).elements)
        else:
            columns = LiftingBasis(gens).syzygy_vectors()
        current = degrees
        _LOGGER.debug("Resolution step %d: rank %d", len(maps), len(degrees))
    return FreeResolution(ring, tuple(modules), tuple(maps))


def minimal_free_resolution(M: GradedModule, max_length: Optional[int] = None) -> FreeResolution:
    """Minimal graded free resolution by iterated minimal syzygies.

    Raises:
        ResolutionLengthError: If more than ``max_length`` maps are needed
            (default: the number of variables)
    """
    if max_length is None:
        max_length = M.ring.ngens
    presented = minimal_presentation(M)
    resolution = _resolve(M.ring, presented.shifts, presented.relations, max_length, True)
    _LOGGER.debug("Minimal resolution ranks: %s", resolution.ranks)
    return resolution


def free_resolution(
    M: GradedModule, max_length: Optional[int] = None, minimize: bool = False
) -> FreeResolution:
    """Free resolution; without ``minimize`` the given presentation is kept
    and the first syzygies are the full Groebner syzygy set."""
    if minimize:
        return minimal_free_resolution(M, max_length)
    if max_length is None:
        max_length = M.ring.ngens + 2
    return _resolve(M.ring, M.shifts, M.relations, max_length, False)


def betti_table(M: GradedModule, max_length: Optional[int] = None) -> "BettiTable":
    return minimal_free_resolution(M, max_length).betti_table()


def euler_characteristic_check(M: GradedModule, resolution: FreeResolution, degree: int) -> bool:
    """HF(M, q) against the alternating sum over the resolution."""
    total = 0
    for p, F in enumerate(resolution.modules):
        total += (-1) ** p * F.dimension(degree)
    return total == hilbert_function(M, degree)


# ---------------------------------------------------------------------------
# Betti tables


@dataclass(frozen=True)
class BettiTable:
    """Nonnegative integers indexed by (p, q); absent keys are zero."""

    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "entries", {key: value for key, value in sorted(self.entries.items()) if value}
        )

    def __getitem__(self, key: Tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def items(self) -> List[Tuple[Tuple[int, int], int]]:
        return sorted(self.entries.items())

    def totals(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for (p, _), value in self.entries.items():
            out[p] = out.get(p, 0) + value
        return out

    def to_text(self) -> str:
        """Aligned table: columns p, rows q, '.' for zero."""
        if not self.entries:
            return "0"
        ps = range(min(p for p, _ in self.entries), max(p for p, _ in self.entries) + 1)
        qs = range(min(q for _, q in self.entries), max(q for _, q in self.entries) + 1)
        totals = self.totals()
        rows = [[""] + [str(p) for p in ps], ["total:"] + [str(totals.get(p, 0)) for p in ps]]
        for q in qs:
            rows.append([f"{q}:"] + [str(self[(p, q)]) if self[(p, q)] else "." for p in ps])
        label = max(len(row[0]) for row in rows)
        width = max(len(cell) for row in rows for cell in row[1:])
        lines = [
            row[0].rjust(label) + " " + " ".join(cell.rjust(width) for cell in row[1:])
            for row in rows
        ]
        return "\n".join(line.rstrip() for line in lines)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["p", "q", "value"])
        for (p, q), value in self.items():
            writer.writerow([p, q, value])
        return buffer.getvalue()

    def to_json(self) -> Dict[str, Any]:
        return {"entries": [[p, q, value] for (p, q), value in self.items()]}


# ---------------------------------------------------------------------------
# Module description formats

_LINE_RE = re.compile(r"^\s*([a-z_]+)\s*:\s*(.*?)\s*$")


def parse_module_json(
    data: Dict[str, Any], field_: ScalarField = RATIONALS, order: str = ORDER_GREVLEX
) -> GradedModule:
    """Build a module from the JSON description.

    Raises:
        InputError: On schema violations or unparsable relations
    """
    try:
        data = MODULE_SCHEMA(data)
    except vol.Invalid as ex:
        raise InputError("Invalid module description", str(ex)) from ex
    ring = RingDescriptor.parse(data[CONF_VARS], data[CONF_WEIGHTS], order, field=field_)
    shifts = tuple(data[CONF_SHIFTS])
    relations = []
    for row in data[CONF_RELATIONS]:
        if len(row) != len(shifts):
            raise InputError("Relation length must equal the number of generators", str(row))
        relations.append(tuple(parse_poly(entry, ring) for entry in row))
    return GradedModule(GradedFreeModule(ring, shifts), relations)


def parse_module_text(
    text: str, field_: ScalarField = RATIONALS, order: str = ORDER_GREVLEX
) -> GradedModule:
    """Parse the text module format.

    ``vars:``, ``weights:`` and ``shifts:`` lines hold comma or space
    separated lists; every ``relation:`` line holds one relation, its
    entries separated by commas. ``#`` starts a comment.
    """
    data: Dict[str, Any] = {CONF_RELATIONS: []}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LINE_RE.match(line)
        if match is None:
            raise InputError("Malformed module line", f"line {number}: {raw!r}")
        key, value = match.groups()
        if key == CONF_VARS:
            data[CONF_VARS] = value.replace(",", " ").split()
        elif key == CONF_WEIGHTS:
            data[CONF_WEIGHTS] = [_int(part, number) for part in value.replace(",", " ").split()]
        elif key == CONF_SHIFTS:
            data[CONF_SHIFTS] = [_int(part, number) for part in value.replace(",", " ").split()]
        elif key == "relation":
            data[CONF_RELATIONS].append([part.strip() for part in value.split(",")])
        else:
            raise InputError("Unknown module key", f"line {number}: {key}")
    return parse_module_json(data, field_, order)


def _int(text: str, number: int) -> int:
    try:
        return int(text)
    except ValueError as ex:
        raise InputError("Expected an integer", f"line {number}: {text!r}") from ex


def format_module(M: GradedModule) -> str:
    """Inverse of parse_module_text."""
    lines = [f"vars: {', '.join(M.ring.variables)}"]
    if any(w != 1 for w in M.ring.weights):
        lines.append(f"weights: {' '.join(str(w) for w in M.ring.weights)}")
    lines.append(f"shifts: {' '.join(str(a) for a in M.shifts)}")
    for column in M.relations:
        lines.append("relation: " + ", ".join(format_poly(f, M.ring) for f in column))
    return "\n".join(lines)


def polynomial_ring_dimension(ring: RingDescriptor, degree: int) -> int:
    """dim S_q; closed form for the standard grading."""
    if all(w == 1 for w in ring.weights):
        return binomial(degree + ring.ngens - 1, ring.ngens - 1) if degree >= 0 else 0
    return len(monomials_of_degree(ring, degree))
