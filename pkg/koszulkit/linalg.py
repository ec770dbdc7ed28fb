"""Exact sparse linear algebra over QQ and prime fields.

Matrices are dicts ``{(row, col): value}`` with nonzero domain elements.
Every routine first splits the matrix into connected blocks (rows and
columns linked by nonzero entries); graded and torus-weighted problems
fall apart into many small independent pieces this way.
"""
import logging
from collections import defaultdict
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

_LOGGER = logging.getLogger(__name__)

Entries = Dict[Tuple[int, int], Any]
Vector = Dict[int, Any]


def _blocks(entries: Entries) -> List[Tuple[List[int], List[int]]]:
    """Connected components of the bipartite row/column graph."""
    parent: Dict[Tuple[str, int], Tuple[str, int]] = {}

    def find(node):
        root = node
        while parent[root] != root:
            root = parent[root]
        while parent[node] != root:
            parent[node], node = root, parent[node]
        return root

    for (r, c) in entries:
        a, b = ("r", r), ("c", c)
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    rows: Dict[Any, List[int]] = defaultdict(list)
    cols: Dict[Any, List[int]] = defaultdict(list)
    for node in parent:
        root = find(node)
        (rows if node[0] == "r" else cols)[root].append(node[1])
    return [(sorted(rows[root]), sorted(cols[root])) for root in sorted(cols)]


def _sub_dod(entries: Entries, rows: Sequence[int], cols: Sequence[int]):
    row_pos = {r: i for i, r in enumerate(rows)}
    col_pos = {c: j for j, c in enumerate(cols)}
    dod: Dict[int, Dict[int, Any]] = defaultdict(dict)
    for (r, c), value in entries.items():
        if r in row_pos and c in col_pos:
            dod[row_pos[r]][col_pos[c]] = value
    return dict(dod)


def _split(entries: Entries) -> List[Tuple[List[int], List[int], Dict[int, Dict[int, Any]]]]:
    blocks = _blocks(entries)
    owner = {c: index for index, (_, cols) in enumerate(blocks) for c in cols}
    per_block: List[Entries] = [dict() for _ in blocks]
    for (r, c), value in entries.items():
        per_block[owner[c]][(r, c)] = value
    return [
        (rows, cols, _sub_dod(block_entries, rows, cols))
        for (rows, cols), block_entries in zip(blocks, per_block)
    ]


def _block_pivots(dod, shape, domain) -> List[int]:
    matrix = DomainMatrix.from_dod(dod, shape, domain)
    if domain == QQ:
        _, matrix = matrix.clear_denoms(convert=True)
        _, _, pivots = matrix.rref_den()
    else:
        _, pivots = matrix.rref()
    return list(pivots)


def exact_rank(entries: Entries, domain=QQ) -> int:
    """Rank of a sparse matrix, fraction-free over QQ."""
    if not entries:
        return 0
    total = 0
    for rows, cols, dod in _split(entries):
        if len(rows) == 1 or len(cols) == 1:
            total += 1
            continue
        total += len(_block_pivots(dod, (len(rows), len(cols)), domain))
    return total


def reduce_mod_p(entries: Entries, prime: int) -> Optional[Entries]:
    """Image of a rational matrix in GF(prime), or None if a denominator vanishes."""
    field = GF(prime, symmetric=False)
    out: Entries = {}
    for key, value in entries.items():
        num, den = int(value.numerator), int(value.denominator)
        if den % prime == 0:
            return None
        residue = field(num) / field(den)
        if residue:
            out[key] = residue
    return out


def rank_mod_p(entries: Entries, prime: int) -> Optional[int]:
    """Rank over GF(prime); a lower bound for the rational rank."""
    reduced = reduce_mod_p(entries, prime)
    if reduced is None:
        return None
    return exact_rank(reduced, GF(prime, symmetric=False))


def independent_columns(entries: Entries, domain=QQ) -> List[int]:
    """Columns independent of all earlier columns, in order."""
    pivots: List[int] = []
    for rows, cols, dod in _split(entries):
        block = _block_pivots(dod, (len(rows), len(cols)), domain)
        pivots.extend(cols[j] for j in block)
    return sorted(pivots)


def nullspace(entries: Entries, ncols: int, domain=QQ) -> List[Vector]:
    """Basis of the right kernel, as sparse column vectors.

    Columns that carry no entry contribute unit vectors.
    """
    basis: List[Vector] = []
    used = set()
    for rows, cols, dod in _split(entries):
        used.update(cols)
        matrix = DomainMatrix.from_dod(dod, (len(rows), len(cols)), domain)
        kernel = matrix.nullspace().to_dod()
        for _, row in sorted(kernel.items()):
            basis.append({cols[j]: value for j, value in row.items()})
    for c in range(ncols):
        if c not in used:
            basis.append({c: domain.one})
    basis.sort(key=lambda v: min(v))
    return basis


def matmul(left: Entries, right: Entries) -> Entries:
    """Sparse product left * right."""
    by_row: Dict[int, List[Tuple[int, Any]]] = defaultdict(list)
    for (k, c), value in right.items():
        by_row[k].append((c, value))
    out: Entries = {}
    for (r, k), a in left.items():
        for c, b in by_row.get(k, ()):
            value = out.get((r, c))
            value = a * b if value is None else value + a * b
            if value:
                out[(r, c)] = value
            else:
                out.pop((r, c), None)
    return out


def columns_to_entries(columns: Sequence[Vector]) -> Entries:
    """Matrix whose j-th column is ``columns[j]``."""
    return {(r, j): value for j, column in enumerate(columns) for r, value in column.items() if value}


def rank_with_prepass(
    entries: Entries, domain=QQ, prime: Optional[int] = None
) -> Tuple[int, bool]:
    """Rank plus a flag telling whether it came from the modular pass.

    The modular rank is only returned when it is already full, since it
    never exceeds the rational rank.
    """
    if prime is not None and domain == QQ and entries:
        modular = rank_mod_p(entries, prime)
        rows = len({r for r, _ in entries})
        cols = len({c for _, c in entries})
        if modular is not None and modular == min(rows, cols):
            return modular, True
    return exact_rank(entries, domain), False
