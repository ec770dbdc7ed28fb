"""Exact scalars and sparse multivariate polynomials.

Polynomials are sympy ``PolyElement`` objects over ``QQ`` or ``GF(p)``; this
module owns how rings are described, ordered, graded, parsed and printed.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import sympy
from sympy import QQ, FF, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.orderings import MonomialOrder, ProductOrder, grevlex, lex
from sympy.polys.polyerrors import PolynomialError
from sympy.polys.rings import PolyElement, PolyRing

from .const import (
    ERROR_BAD_FIELD,
    ERROR_BAD_POLYNOMIAL,
    ERROR_RING_MISMATCH,
    ERROR_UNKNOWN_VARIABLE,
    FIELD_PRIME_PREFIX,
    FIELD_RATIONALS,
    MAX_PRIME,
    ORDER_BLOCK,
    ORDER_GREVLEX,
    ORDER_LEX,
    ORDERS,
)
from .exceptions import InputError, RingMismatchError

_LOGGER = logging.getLogger(__name__)

MultiPoly = PolyElement
Monomial = Tuple[int, ...]

NEG_INFINITY = float("-inf")
INHOMOGENEOUS = "inhomogeneous"

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_POLY_CHARS_RE = re.compile(r"^[A-Za-z0-9_+\-*/^() ]+$")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


@dataclass(frozen=True)
class ScalarField:
    """Field of scalars: the rationals (characteristic 0) or a prime field."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p != 0 and (p < 2 or p > MAX_PRIME or not sympy.isprime(p)):
            raise InputError(ERROR_BAD_FIELD, f"{p} is not a usable prime")

    @classmethod
    def parse(cls, text: str) -> "ScalarField":
        """Parse 'qq' or 'fp:P'."""
        value = str(text).strip().lower()
        if value == FIELD_RATIONALS:
            return cls(0)
        if value.startswith(FIELD_PRIME_PREFIX):
            digits = value[len(FIELD_PRIME_PREFIX):]
            if digits.isdigit():
                return cls(int(digits))
        raise InputError(ERROR_BAD_FIELD, text)

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @cached_property
    def domain(self):
        if self.is_rational:
            return QQ
        return FF(self.characteristic, symmetric=False)

    def convert(self, numerator: int, denominator: int = 1):
        """Exact scalar numerator/denominator in this field."""
        if denominator == 0:
            raise InputError(ERROR_BAD_POLYNOMIAL, "zero denominator")
        if self.is_rational:
            return QQ(numerator, denominator)
        if denominator % self.characteristic == 0:
            raise InputError(
                ERROR_BAD_FIELD,
                f"denominator {denominator} vanishes modulo {self.characteristic}",
            )
        domain = self.domain
        return domain(numerator) / domain(denominator)

    def from_sympy(self, value):
        rational = sympy.Rational(value)
        return self.convert(int(rational.p), int(rational.q))

    def format(self, value) -> str:
        """Print a scalar as an integer or 'a/b'."""
        if self.is_rational:
            num, den = int(value.numerator), int(value.denominator)
            return str(num) if den == 1 else f"{num}/{den}"
        return str(int(self.domain.to_int(value)))

    def as_fraction(self, value) -> Tuple[int, int]:
        if self.is_rational:
            return int(value.numerator), int(value.denominator)
        return int(self.domain.to_int(value)), 1

    def __str__(self) -> str:
        return FIELD_RATIONALS if self.is_rational else f"{FIELD_PRIME_PREFIX}{self.characteristic}"


RATIONALS = ScalarField(0)


class WeightedOrder(MonomialOrder):
    """Lex or reverse-lex order refined by a positive weight vector."""

    is_global = True

    def __init__(self, base: str, weights: Sequence[int]):
        self.base = base
        self.weights = tuple(weights)
        self.alias = f"w{base}"

    def __call__(self, monomial):
        if self.base == ORDER_LEX:
            return monomial
        degree = sum(w * e for w, e in zip(self.weights, monomial))
        return (degree, tuple(reversed([-e for e in monomial])))

    def __eq__(self, other):
        return (
            isinstance(other, WeightedOrder)
            and self.base == other.base
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.__class__, self.base, self.weights))

    def __repr__(self):
        return f"WeightedOrder({self.base!r}, {self.weights!r})"


class Slice:
    """Hashable exponent-vector slice used inside product orders."""

    def __init__(self, start: int, stop: int):
        self.start = start
        self.stop = stop

    def __call__(self, monomial):
        return monomial[self.start:self.stop]

    def __eq__(self, other):
        return isinstance(other, Slice) and (self.start, self.stop) == (other.start, other.stop)

    def __hash__(self):
        return hash((Slice, self.start, self.stop))


def base_order(kind: str, weights: Sequence[int]) -> MonomialOrder:
    """Monomial order object for one block of variables."""
    if all(w == 1 for w in weights):
        return lex if kind == ORDER_LEX else grevlex
    return WeightedOrder(kind, weights)


_DESCRIPTORS: Dict[PolyRing, "RingDescriptor"] = {}


@dataclass(frozen=True)
class RingDescriptor:
    """Polynomial ring: ordered variables, positive weights, order and field.

    With ``order == "block"`` the first ``block`` variables form the
    eliminated block; both blocks are weighted reverse-lex internally.
    """

    variables: Tuple[str, ...]
    weights: Tuple[int, ...] = ()
    order: str = ORDER_GREVLEX
    block: int = 0
    field: ScalarField = RATIONALS

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        weights = tuple(self.weights) or (1,) * len(variables)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "weights", weights)
        if not variables:
            raise InputError("Ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise InputError("Variable names must be distinct", ", ".join(variables))
        if len(weights) != len(variables) or any(w < 1 for w in weights):
            raise InputError("Weights must be positive, one per variable")
        if self.order not in ORDERS:
            raise InputError(f"Unknown monomial order {self.order}")
        if self.order == ORDER_BLOCK and not 0 < self.block <= len(variables):
            raise InputError("Block order needs a nonempty leading block")

    @classmethod
    def parse(
        cls,
        names: Sequence[str],
        weights: Optional[Sequence[int]] = None,
        order: str = ORDER_GREVLEX,
        block: int = 0,
        field: ScalarField = RATIONALS,
    ) -> "RingDescriptor":
        """Build a ring from user-supplied variable names."""
        for name in names:
            if not _NAME_RE.fullmatch(name):
                raise InputError("Invalid variable name", name)
        return cls(tuple(names), tuple(weights or ()), order, block, field)

    @property
    def ngens(self) -> int:
        return len(self.variables)

    @cached_property
    def monomial_order(self) -> MonomialOrder:
        if self.order == ORDER_BLOCK:
            n, k = self.ngens, self.block
            return ProductOrder(
                (base_order(ORDER_GREVLEX, self.weights[:k]), Slice(0, k)),
                (base_order(ORDER_GREVLEX, self.weights[k:]), Slice(k, n)),
            )
        return base_order(self.order, self.weights)

    @cached_property
    def poly_ring(self) -> PolyRing:
        ring = PolyRing(
            tuple(Symbol(name) for name in self.variables),
            self.field.domain,
            self.monomial_order,
        )
        _DESCRIPTORS.setdefault(ring, self)
        return ring

    @property
    def zero(self) -> MultiPoly:
        return self.poly_ring.zero

    @property
    def one(self) -> MultiPoly:
        return self.poly_ring.one

    def gen(self, name: str) -> MultiPoly:
        return self.poly_ring.gens[self.index(name)]

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError as ex:
            raise InputError(ERROR_UNKNOWN_VARIABLE, name) from ex

    def monomial_degree(self, monomial: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, monomial))

    def constant(self, value) -> MultiPoly:
        """Constant polynomial from an int, Fraction or field element."""
        return self.poly_ring.ground_new(self.scalar(value))

    def scalar(self, value):
        domain = self.field.domain
        if isinstance(value, int):
            return domain(value)
        if hasattr(value, "numerator") and hasattr(value, "denominator"):
            return self.field.convert(int(value.numerator), int(value.denominator))
        return domain.convert(value)

    def monomial(self, exponents: Monomial, coefficient=1) -> MultiPoly:
        return self.poly_ring.dtype({tuple(exponents): self.scalar(coefficient)})

    def with_order(self, order: str, block: int = 0) -> "RingDescriptor":
        return RingDescriptor(self.variables, self.weights, order, block, self.field)

    def __str__(self) -> str:
        return f"{self.field}[{', '.join(self.variables)}]"


def descriptor_of(f: MultiPoly) -> RingDescriptor:
    """Ring descriptor that produced the ring of ``f``."""
    try:
        return _DESCRIPTORS[f.ring]
    except KeyError as ex:
        raise RingMismatchError(ERROR_RING_MISMATCH, "polynomial has no registered ring") from ex


def check_same_ring(*polys: MultiPoly) -> None:
    if not polys:
        return
    ring = polys[0].ring
    for f in polys[1:]:
        if f.ring != ring:
            raise RingMismatchError(ERROR_RING_MISMATCH, f"{ring} vs {f.ring}")


def poly_arith(f: MultiPoly, g, op: str) -> MultiPoly:
    """Exact ring operation.

    Args:
        f: Left operand
        g: Right operand; a polynomial for add/sub/mul, a scalar or a constant
            polynomial for scale
        op: One of 'add', 'sub', 'mul', 'scale'

    Returns:
        The result, with no zero terms

    Raises:
        RingMismatchError: If f and g live in different rings
    """
    if op == "scale":
        if isinstance(g, PolyElement):
            check_same_ring(f, g)
            if not g.is_ground:
                raise InputError("scale expects a scalar")
            return f.mul_ground(g.LC) if g else f.ring.zero
        return f.mul_ground(descriptor_of(f).scalar(g))
    if not isinstance(g, PolyElement):
        raise InputError(f"{op} expects a polynomial operand")
    check_same_ring(f, g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise InputError(f"Unknown operation {op}")


def graded_degree(
    f: MultiPoly, ring: Optional[RingDescriptor] = None
) -> Union[int, float, str]:
    """Weighted degree of a homogeneous polynomial.

    Returns NEG_INFINITY for zero and INHOMOGENEOUS when terms disagree.
    """
    if not f:
        return NEG_INFINITY
    ring = ring or descriptor_of(f)
    degrees = {ring.monomial_degree(m) for m in f.itermonoms()}
    if len(degrees) > 1:
        return INHOMOGENEOUS
    return degrees.pop()


def top_degree(f: MultiPoly, ring: RingDescriptor) -> int:
    """Largest weighted degree among the terms of a nonzero polynomial."""
    return max(ring.monomial_degree(m) for m in f.itermonoms())


def is_homogeneous(f: MultiPoly, ring: Optional[RingDescriptor] = None) -> bool:
    return graded_degree(f, ring) != INHOMOGENEOUS


@lru_cache(maxsize=4096)
def _weighted_compositions(weights: Tuple[int, ...], degree: int) -> Tuple[Monomial, ...]:
    if degree < 0:
        return ()
    if len(weights) == 1:
        w = weights[0]
        return ((degree // w,),) if degree % w == 0 else ()
    head, rest = weights[0], weights[1:]
    out: List[Monomial] = []
    for e in range(degree // head, -1, -1):
        for tail in _weighted_compositions(rest, degree - e * head):
            out.append((e,) + tail)
    return tuple(out)


def monomials_of_degree(ring: RingDescriptor, degree: int) -> Tuple[Monomial, ...]:
    """All exponent vectors of the given weighted degree, lex-descending."""
    return _weighted_compositions(ring.weights, degree)


def iter_terms(f: MultiPoly) -> Iterator[Tuple[Monomial, object]]:
    """Terms in descending ring order."""
    return iter(f.terms())


def change_ring(f: MultiPoly, source: RingDescriptor, target: RingDescriptor) -> MultiPoly:
    """Move a polynomial between rings by variable name.

    Raises:
        InputError: If ``f`` involves a variable missing from ``target``
    """
    positions = []
    for i, name in enumerate(source.variables):
        positions.append(target.variables.index(name) if name in target.variables else None)
    terms = {}
    for monom, coeff in f.items():
        exps = [0] * target.ngens
        for i, e in enumerate(monom):
            if not e:
                continue
            if positions[i] is None:
                raise InputError(ERROR_UNKNOWN_VARIABLE, source.variables[i])
            exps[positions[i]] = e
        terms[tuple(exps)] = target.field.domain.convert(coeff, source.field.domain)
    return target.poly_ring.dtype(terms)


def parse_poly(text: str, ring: RingDescriptor) -> MultiPoly:
    """Parse ``3*x^2*y - 1/2*z`` style input into a polynomial of ``ring``.

    Raises:
        InputError: On syntax errors, unknown variables or non-polynomial input
    """
    source = text.strip()
    if not source or not _POLY_CHARS_RE.match(source):
        raise InputError(ERROR_BAD_POLYNOMIAL, repr(text))
    for name in _NAME_RE.findall(source):
        if name not in ring.variables:
            raise InputError(ERROR_UNKNOWN_VARIABLE, name)
    symbols = [Symbol(name) for name in ring.variables]
    local_dict = dict(zip(ring.variables, symbols))
    try:
        expr = parse_expr(source, local_dict=local_dict, transformations=_TRANSFORMATIONS)
        poly = sympy.Poly(sympy.expand(expr), *symbols, domain=QQ)
    except (SyntaxError, TypeError, ValueError, PolynomialError, sympy.SympifyError) as ex:
        raise InputError(ERROR_BAD_POLYNOMIAL, f"{text!r}: {ex}") from ex
    terms = {}
    for monom, coeff in poly.terms():
        value = ring.field.from_sympy(coeff)
        if value:
            terms[tuple(int(e) for e in monom)] = value
    return ring.poly_ring.dtype(terms)


def format_monomial(monomial: Monomial, names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, monomial):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def format_poly(f: MultiPoly, ring: Optional[RingDescriptor] = None) -> str:
    """Canonical text form, terms in descending ring order."""
    if not f:
        return "0"
    ring = ring or descriptor_of(f)
    pieces: List[str] = []
    for monom, coeff in f.terms():
        text = ring.field.format(coeff)
        negative = text.startswith("-")
        if negative:
            text = text[1:]
        body = format_monomial(monom, ring.variables)
        if body and text == "1":
            term = body
        elif body:
            term = f"{text}*{body}"
        else:
            term = text
        if not pieces:
            pieces.append(f"-{term}" if negative else term)
        else:
            pieces.append(f"- {term}" if negative else f"+ {term}")
    return " ".join(pieces)
