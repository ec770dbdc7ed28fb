"""Symmetric group actions, Reynolds projectors and isotypic dimensions.

Permutations are tuples ``sigma`` with ``sigma[j]`` the image of ``j``
(0-based); products compose right to left.
"""
from __future__ import annotations

import copy
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import MultiPoly, RingDescriptor, ScalarField
from .const import (
    CHARACTER_SIGN,
    CHARACTER_TRIVIAL,
    ERROR_ACTION,
    ERROR_CHARACTERISTIC,
)
from .exceptions import ActionError, CharacteristicError, InputError
from .gradedmod import GradedModule
from .groebner import IdealBasis, Vector, buchberger, normal_form, normal_form_encoded
from .linalg import Entries, exact_rank, matmul

_LOGGER = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


@lru_cache(maxsize=16)
def all_permutations(n: int) -> Tuple[Permutation, ...]:
    """S_n in lexicographic order."""
    return tuple(permutations(range(n)))


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    return tuple(sigma[t] for t in tau)


def inverse(sigma: Permutation) -> Permutation:
    out = [0] * len(sigma)
    for i, s in enumerate(sigma):
        out[s] = i
    return tuple(out)


def sign(sigma: Permutation) -> int:
    """Parity by cycle decomposition."""
    seen = [False] * len(sigma)
    parity = 0
    for start in range(len(sigma)):
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        if length:
            parity += length - 1
    return -1 if parity % 2 else 1


def adjacent_transpositions(n: int) -> List[Permutation]:
    out = []
    for i in range(n - 1):
        sigma = list(range(n))
        sigma[i], sigma[i + 1] = sigma[i + 1], sigma[i]
        out.append(tuple(sigma))
    return out


@dataclass(frozen=True)
class Character:
    """The trivial or the sign character of S_n."""

    kind: str = CHARACTER_TRIVIAL

    def __post_init__(self) -> None:
        if self.kind not in (CHARACTER_TRIVIAL, CHARACTER_SIGN):
            raise InputError("Unknown character", self.kind)

    def __call__(self, sigma: Permutation) -> int:
        return 1 if self.kind == CHARACTER_TRIVIAL else sign(sigma)


TRIVIAL = Character(CHARACTER_TRIVIAL)
SIGN = Character(CHARACTER_SIGN)


class PermAction:
    """S_n acting on a polynomial ring and on the generators of a free module.

    Each block is a list of n variable names permuted together
    (sigma sends block[j] to block[sigma[j]]); other variables are fixed.
    ``generator_images(sigma)`` gives the image of every unit vector e_i;
    the action on vectors is semilinear: sigma(sum g_i e_i) = sum sigma(g_i) sigma(e_i).
    Without it the action fixes every e_i.
    """

    def __init__(
        self,
        n: int,
        ring: RingDescriptor,
        blocks: Sequence[Sequence[str]] = (),
        generator_images: Optional[Callable[[Permutation], Sequence[Vector]]] = None,
    ):
        self.n = n
        self.ring = ring
        self.blocks = [tuple(ring.index(name) for name in block) for block in blocks]
        for block in self.blocks:
            if len(block) != n:
                raise InputError("Every permuted block needs exactly n variables")
        self.generator_images = generator_images
        self._variable_maps: Dict[Permutation, Tuple[int, ...]] = {}
        self._images: Dict[Permutation, Sequence[Vector]] = {}

    def with_images(
        self, generator_images: Optional[Callable[[Permutation], Sequence[Vector]]]
    ) -> "PermAction":
        """Same ring action with other generator images."""
        twin = copy.copy(self)
        twin.generator_images = generator_images
        twin._images = {}
        return twin

    def variable_map(self, sigma: Permutation) -> Tuple[int, ...]:
        """Index of the image of each ring variable."""
        mapping = self._variable_maps.get(sigma)
        if mapping is None:
            target = list(range(self.ring.ngens))
            for block in self.blocks:
                for j, index in enumerate(block):
                    target[index] = block[sigma[j]]
            mapping = tuple(target)
            self._variable_maps[sigma] = mapping
        return mapping

    def apply(self, sigma: Permutation, f: MultiPoly) -> MultiPoly:
        """Ring automorphism sigma applied to f."""
        mapping = self.variable_map(sigma)
        terms = {}
        for monomial, coeff in f.items():
            exponents = [0] * len(monomial)
            for i, e in enumerate(monomial):
                exponents[mapping[i]] = e
            terms[tuple(exponents)] = coeff
        return f.ring.dtype(terms)

    def images(self, sigma: Permutation, rank: int) -> Sequence[Vector]:
        cached = self._images.get(sigma)
        if cached is None:
            if self.generator_images is None:
                zero, one = self.ring.zero, self.ring.one
                cached = [tuple(one if i == j else zero for i in range(rank)) for j in range(rank)]
            else:
                cached = list(self.generator_images(sigma))
            self._images[sigma] = cached
        return cached

    def apply_vector(self, sigma: Permutation, vector: Sequence[MultiPoly]) -> Vector:
        rank = len(vector)
        images = self.images(sigma, rank)
        out = [self.ring.zero] * len(images[0]) if images else []
        for g, image in zip(vector, images):
            if not g:
                continue
            moved = self.apply(sigma, g)
            for r, h in enumerate(image):
                if h:
                    out[r] = out[r] + moved * h
        return tuple(out)

    def verify_group_law(self, rank: int = 0) -> bool:
        """Check sigma(tau x) = (sigma tau) x on variables and unit vectors
        for all pairs of adjacent transpositions."""
        gens = adjacent_transpositions(self.n)
        variables = self.ring.poly_ring.gens
        units = [self.images(tuple(range(self.n)), rank)[i] for i in range(rank)] if rank else []
        for sigma in gens:
            for tau in gens:
                product = compose(sigma, tau)
                for x in variables:
                    if self.apply(sigma, self.apply(tau, x)) != self.apply(product, x):
                        return False
                for e in units:
                    if self.apply_vector(sigma, self.apply_vector(tau, e)) != self.apply_vector(product, e):
                        return False
        return True


def verify_action(action: PermAction, target) -> None:
    """Every relation (or ideal generator) must map into the relations.

    Raises:
        ActionError: With the offending generator index as witness
    """
    for sigma in adjacent_transpositions(action.n):
        if isinstance(target, IdealBasis):
            basis = buchberger(target)
            for index, g in enumerate(target.generators):
                if normal_form(action.apply(sigma, g), basis):
                    raise ActionError(ERROR_ACTION, f"generator {index} under {sigma}", witness=index)
        else:
            relations = target.relation_basis
            encoding = relations.encoding
            for index, column in enumerate(target.relations):
                moved = encoding.encode(action.apply_vector(sigma, column))
                if normal_form_encoded(moved, relations):
                    raise ActionError(ERROR_ACTION, f"relation {index} under {sigma}", witness=index)


def check_characteristic(field_: ScalarField, n: int) -> None:
    if field_.characteristic and field_.characteristic <= n:
        raise CharacteristicError(ERROR_CHARACTERISTIC, f"p={field_.characteristic}, n={n}")


def reynolds(
    representation: Dict[Permutation, Entries],
    character: Character,
    field_: ScalarField,
) -> Entries:
    """Projector (1/n!) sum chi(sigma) rho(sigma) onto the chi-isotypic part.

    Raises:
        CharacteristicError: If the characteristic divides n!
    """
    if not representation:
        return {}
    n = len(next(iter(representation)))
    check_characteristic(field_, n)
    scale = field_.convert(1, factorial(n))
    out: Entries = {}
    for sigma, matrix in representation.items():
        weight = scale if character(sigma) == 1 else -scale
        for key, value in matrix.items():
            total = out.get(key)
            total = weight * value if total is None else total + weight * value
            if total:
                out[key] = total
            else:
                out.pop(key, None)
    return out


def is_idempotent(projector: Entries) -> bool:
    return matmul(projector, projector) == projector


def permutation_representation(n: int, field_: ScalarField) -> Dict[Permutation, Entries]:
    """The natural action on field^n, e_j -> e_sigma(j)."""
    one = field_.domain.one
    return {sigma: {(sigma[j], j): one for j in range(n)} for sigma in all_permutations(n)}


def action_matrix(M: GradedModule, action: PermAction, sigma: Permutation, degree: int) -> Entries:
    """Matrix of sigma on the degree piece of M."""
    piece = M.graded_piece(degree)
    zero = M.ring.zero
    entries: Entries = {}
    for col, (monomial, i) in enumerate(piece.basis):
        unit = tuple(M.ring.monomial(monomial) if j == i else zero for j in range(M.rank))
        image = action.apply_vector(sigma, unit)
        for row, value in M.coordinates(image, degree).items():
            entries[(row, col)] = value
    return entries


def isotypic_dimension(
    M: GradedModule,
    action: PermAction,
    character: Character,
    degree: int,
    verify: bool = True,
) -> int:
    """Dimension of the chi-isotypic subspace of M_q.

    Raises:
        ActionError: If the action does not preserve the relations
        CharacteristicError: If the characteristic divides n!
    """
    check_characteristic(M.ring.field, action.n)
    if verify:
        verify_action(action, M)
    if not M.dimension(degree):
        return 0
    representation = {
        sigma: action_matrix(M, action, sigma, degree) for sigma in all_permutations(action.n)
    }
    projector = reynolds(representation, character, M.ring.field)
    dimension = exact_rank(projector, M.ring.field.domain)
    _LOGGER.debug("Isotypic (%s) dimension in degree %d: %d", character.kind, degree, dimension)
    return dimension


def space_isotypic_dimension(
    representation: Dict[Permutation, Entries], character: Character, field_: ScalarField
) -> int:
    """Image dimension of the Reynolds projector on an explicit representation."""
    return exact_rank(reynolds(representation, character, field_), field_.domain)
