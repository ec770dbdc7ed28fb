"""Koszul complexes of graded modules and their cohomology."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, Iterable, List, Optional, Protocol, Sequence, Tuple

from .algebra import MultiPoly, RingDescriptor, graded_degree, monomials_of_degree
from .const import (
    CERTIFIED_NONZERO,
    ERROR_CERTIFICATE,
    ERROR_DEGREE_ONE,
    ERROR_NOT_SUBMODULE,
    HYPOTHESES_FAIL,
)
from .exceptions import CertificateError, DegreeError, SubmoduleError
from .gradedmod import BettiTable, GradedModule, submodule_presentation
from .groebner import vector_degree
from .helpers import binomial, run_cells
from .linalg import Entries, exact_rank, rank_mod_p

_LOGGER = logging.getLogger(__name__)


class PieceProvider(Protocol):
    """What the Koszul complex needs from a graded module."""

    ring: RingDescriptor

    def dimension(self, degree: int) -> int:
        ...

    def multiplication(self, f: MultiPoly, degree: int) -> Entries:
        ...


@dataclass(frozen=True)
class KoszulSpace:
    """Wedge^p V tensor M_q with basis (subset, piece index), subsets in lex order."""

    p: int
    q: int
    rank_v: int
    piece_dimension: int

    @cached_property
    def wedge_basis(self) -> Tuple[Tuple[int, ...], ...]:
        if self.p < 0:
            return ()
        return tuple(combinations(range(self.rank_v), self.p))

    @cached_property
    def wedge_index(self) -> Dict[Tuple[int, ...], int]:
        return {subset: i for i, subset in enumerate(self.wedge_basis)}

    @property
    def dimension(self) -> int:
        return binomial(self.rank_v, self.p) * self.piece_dimension

    def position(self, subset_index: int, piece_index: int) -> int:
        return subset_index * self.piece_dimension + piece_index


@dataclass(frozen=True)
class KoszulMatrix:
    source: KoszulSpace
    target: KoszulSpace
    entries: Entries = field(default_factory=dict)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.target.dimension, self.source.dimension


def check_linear_forms(M: PieceProvider, V: Sequence[MultiPoly]) -> None:
    """Raises DegreeError unless every V element is a nonzero degree-1 form of M's ring."""
    ring = M.ring
    for v in V:
        if not v or v.ring != ring.poly_ring or graded_degree(v, ring) != 1:
            raise DegreeError(ERROR_DEGREE_ONE, str(v))


def default_linear_forms(M: PieceProvider) -> List[MultiPoly]:
    """The degree-1 variables of M's ring."""
    ring = M.ring
    return [g for g, w in zip(ring.poly_ring.gens, ring.weights) if w == 1]


def koszul_space(M: PieceProvider, rank_v: int, p: int, q: int) -> KoszulSpace:
    if p < 0 or p > rank_v:
        return KoszulSpace(p, q, rank_v, 0)
    return KoszulSpace(p, q, rank_v, M.dimension(q))


def koszul_differential(M: PieceProvider, V: Sequence[MultiPoly], p: int, q: int) -> KoszulMatrix:
    """d: wedge^p V (x) M_q -> wedge^(p-1) V (x) M_(q+1).

    d(v_S (x) m) = sum_t (-1)^t v_(S minus s_t) (x) v_(s_t) m, t counted from 0.

    Raises:
        DegreeError: If a V element is not a linear form
    """
    check_linear_forms(M, V)
    source = koszul_space(M, len(V), p, q)
    target = koszul_space(M, len(V), p - 1, q + 1)
    entries: Entries = {}
    if not source.dimension or not target.dimension:
        return KoszulMatrix(source, target, entries)
    by_column: List[Dict[int, List[Tuple[int, Any]]]] = []
    for v in V:
        columns: Dict[int, List[Tuple[int, Any]]] = {}
        for (row, col), value in M.multiplication(v, q).items():
            columns.setdefault(col, []).append((row, value))
        by_column.append(columns)
    for s, subset in enumerate(source.wedge_basis):
        for t, v in enumerate(subset):
            face = target.wedge_index[subset[:t] + subset[t + 1:]]
            negative = t % 2 == 1
            for a, images in by_column[v].items():
                col = source.position(s, a)
                for b, value in images:
                    key = (target.position(face, b), col)
                    value = -value if negative else value
                    total = entries.get(key)
                    total = value if total is None else total + value
                    if total:
                        entries[key] = total
                    else:
                        entries.pop(key, None)
    return KoszulMatrix(source, target, entries)


def _rank(matrix: KoszulMatrix, domain) -> int:
    return exact_rank(matrix.entries, domain)


def koszul_cohomology_dim(
    M: PieceProvider,
    V: Optional[Sequence[MultiPoly]] = None,
    p: int = 0,
    q: int = 0,
    prime: Optional[int] = None,
) -> int:
    """dim K_{p,q}(M; V) = dim(wedge^p V (x) M_q) - rank d_{p,q} - rank d_{p+1,q-1}.

    With ``prime`` a modular pass runs first over the rationals; it can only
    overestimate the dimension, so a zero found there is final and anything
    else is recomputed exactly.
    """
    V = list(V) if V is not None else default_linear_forms(M)
    outgoing = koszul_differential(M, V, p, q)
    total = outgoing.source.dimension
    if not total:
        return 0
    incoming = koszul_differential(M, V, p + 1, q - 1)
    field_ = M.ring.field
    if prime is not None and field_.is_rational:
        out_rank = rank_mod_p(outgoing.entries, prime)
        in_rank = rank_mod_p(incoming.entries, prime)
        if out_rank is not None and in_rank is not None and total == out_rank + in_rank:
            _LOGGER.debug("K_{%d,%d} vanishes by the modular pass", p, q)
            return 0
    domain = field_.domain
    dimension = total - _rank(outgoing, domain) - _rank(incoming, domain)
    if dimension < 0:
        raise CertificateError(ERROR_CERTIFICATE, f"negative Koszul dimension at ({p}, {q})")
    return dimension


def koszul_table(
    M: PieceProvider,
    V: Optional[Sequence[MultiPoly]] = None,
    p_range: Iterable[int] = (),
    q_range: Iterable[int] = (),
    threads: int = 1,
    prime: Optional[int] = None,
) -> BettiTable:
    """Dimensions of K_{p,q} over a rectangle, one independent cell per (p, q)."""
    V = list(V) if V is not None else default_linear_forms(M)
    check_linear_forms(M, V)
    if isinstance(M, GradedModule):
        _ = M.relation_basis
    cells = [(p, q) for p in p_range for q in q_range]
    values = run_cells(lambda cell: koszul_cohomology_dim(M, V, cell[0], cell[1], prime), cells, threads)
    return BettiTable(values)


# ---------------------------------------------------------------------------
# Nonvanishing certificate


@dataclass(frozen=True)
class NonvanishingCertificate:
    verdict: str
    hypotheses: Dict[str, bool]
    r: int
    dimension: Optional[int] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "hypotheses": dict(sorted(self.hypotheses.items())),
            "r": self.r,
            "dimension": self.dimension,
        }


def _image_rank(N: GradedModule, gens: Sequence[Tuple], degrees: Sequence[int], degree: int) -> int:
    """dim of the degree piece of the submodule generated by gens, inside N."""
    ring = N.ring
    columns: Dict[Tuple[int, int], Any] = {}
    count = 0
    for v, d in zip(gens, degrees):
        for monomial in monomials_of_degree(ring, degree - d):
            shifted = tuple(f.mul_monom(monomial) if f else f for f in v)
            for row, value in N.coordinates(shifted, degree).items():
                columns[(row, count)] = value
            count += 1
    return exact_rank(columns, ring.field.domain)


def nonvanishing_certificate(
    N: GradedModule,
    gens: Sequence[Sequence[MultiPoly]],
    V: Optional[Sequence[MultiPoly]] = None,
) -> NonvanishingCertificate:
    """Check the hypotheses that force K_{r,1}(M; V) != 0 for M inside N.

    The hypotheses are: N lives in nonnegative degrees, no nonzero element of
    N_0 is killed by all of V, M_0 is a proper subspace of N_0 and M_1 = N_1.
    Here dim V = r + 1. When they hold, K_{r,1}(M; V) is computed and must be
    nonzero.

    Raises:
        SubmoduleError: If a generator is not a vector of N's ambient module
        CertificateError: If the hypotheses hold but K_{r,1} vanishes
    """
    V = list(V) if V is not None else default_linear_forms(N)
    check_linear_forms(N, V)
    vectors = []
    degrees = []
    for v in gens:
        v = tuple(v)
        if len(v) != N.rank or any(f.ring != N.ring.poly_ring for f in v):
            raise SubmoduleError(ERROR_NOT_SUBMODULE, f"{len(v)} entries over rank {N.rank}")
        degree = vector_degree(v, N.shifts, N.ring)
        if degree is None:
            continue
        vectors.append(v)
        degrees.append(degree)
    r = len(V) - 1
    dim_n0, dim_n1 = N.dimension(0), N.dimension(1)
    stacked: Entries = {}
    for offset, v in enumerate(V):
        for (row, col), value in N.multiplication(v, 0).items():
            stacked[(offset * dim_n1 + row, col)] = value
    hypotheses = {
        "nonnegative_grading": all(a >= 0 for a in N.shifts),
        "annihilator_zero": exact_rank(stacked, N.ring.field.domain) == dim_n0,
        "proper_in_degree_0": _image_rank(N, vectors, degrees, 0) < dim_n0,
        "equal_in_degree_1": _image_rank(N, vectors, degrees, 1) == dim_n1,
    }
    if not all(hypotheses.values()):
        _LOGGER.debug("Certificate hypotheses fail: %s", hypotheses)
        return NonvanishingCertificate(HYPOTHESES_FAIL, hypotheses, r)
    M = submodule_presentation(N, vectors)
    dimension = koszul_cohomology_dim(M, V, r, 1)
    if dimension < 1:
        raise CertificateError(ERROR_CERTIFICATE, f"K_{{{r},1}} vanishes although the hypotheses hold")
    return NonvanishingCertificate(CERTIFIED_NONZERO, hypotheses, r, dimension)
