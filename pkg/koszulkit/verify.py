"""Acceptance suite behind ``koszulkit verify``.

Every criterion returns ``{"passed": bool, "details": ...}``; details hold
only exact values, never timings, so two runs with the same seed produce
the same report byte for byte.
"""
from __future__ import annotations

import json
import logging
import random
from typing import Any, Callable, Dict, List, Sequence, Tuple

from .algebra import RingDescriptor, monomials_of_degree
from .const import (
    CERTIFIED,
    CERTIFIED_NONZERO,
    DETERMINISM_THREADS,
    LEVEL_FULL,
    LEVELS,
    MIN_CERTIFICATE_INSTANCES,
    MIN_CORPUS_SIZE,
    VERDICT_EXT_ZERO,
    VERDICT_INVARIANTS_ZERO,
)
from .exceptions import InputError, KoszulKitError
from .geometry import (
    LineBundleOnP1,
    curve_case_grid,
    curve_criterion_sweep,
    effective_bound_table,
    koszul_of_sections,
    very_ampleness_order,
)
from .gradedmod import GradedFreeModule, GradedModule, betti_table, quotient_module
from .koszul import koszul_table, nonvanishing_certificate
from .polygraph import equivariant_vanishing_check

_LOGGER = logging.getLogger(__name__)

Result = Dict[str, Any]

LOCKED_BOUNDS = {(1, 0): 3, (3, 1): 8, (2, 3): 10, (4, 4): 22}


def _result(passed: bool, details: Any) -> Result:
    return {"passed": bool(passed), "details": details}


def _random_form(ring: RingDescriptor, degree: int, rng: random.Random):
    monomials = monomials_of_degree(ring, degree)
    chosen = rng.sample(monomials, min(len(monomials), rng.randint(1, 3)))
    f = ring.zero
    for monomial in chosen:
        f += ring.monomial(monomial, rng.choice([-3, -2, -1, 1, 2, 3]))
    return f


def random_module(rng: random.Random) -> GradedModule:
    """A graded module on at most 3 variables with at most 4 generators."""
    ring = RingDescriptor(("x", "y", "z")[: rng.randint(2, 3)])
    rank = rng.randint(1, 2)
    shifts = tuple(sorted(rng.randint(0, 1) for _ in range(rank)))
    relations = []
    for _ in range(rng.randint(1, 4 - rank + 1)):
        degree = max(shifts) + rng.randint(1, 3)
        relations.append(tuple(_random_form(ring, degree - a, rng) for a in shifts))
    return GradedModule(GradedFreeModule(ring, shifts), relations)


def fixture_modules() -> Dict[str, GradedModule]:
    xy = RingDescriptor(("x", "y"))
    xyz = RingDescriptor(("x", "y", "z"))
    x, y = xy.poly_ring.gens
    a, b, c = xyz.poly_ring.gens
    return {
        "point": quotient_module(xy, [x, y]),
        "double_line": quotient_module(xy, [x**2]),
        "three_quadrics": quotient_module(xyz, [a**2, b**2, c**2]),
        "monomial_curve": quotient_module(xyz, [a * b, b * c, a * c]),
        "free_plane": GradedModule(GradedFreeModule(xyz, (0, 1))),
    }


def check_betti_koszul(seed: int, threads: int, corpus_size: int = MIN_CORPUS_SIZE) -> Result:
    if corpus_size < MIN_CORPUS_SIZE:
        return _result(False, {"reason": f"corpus smaller than {MIN_CORPUS_SIZE}"})
    rng = random.Random(seed)
    modules = list(fixture_modules().items())
    modules += [(f"random_{i}", random_module(rng)) for i in range(corpus_size)]
    mismatches = []
    for name, M in modules:
        betti = betti_table(M)
        qs = [q for (_, q) in betti.entries] or [0]
        q_range = range(min(min(qs), min(M.shifts)), max(qs) + 2)
        koszul = koszul_table(M, None, range(M.ring.ngens + 1), q_range, threads)
        if koszul.entries != betti.entries:
            mismatches.append(name)
    return _result(not mismatches, {"modules": len(modules), "mismatches": mismatches})


def check_curve_case(threads: int, p_max: int) -> Result:
    rows = curve_case_grid(p_max, threads)
    bad = [
        [row["p"], row["b"], row["d"]]
        for row in rows
        if not row["koszul_zero"] == row["very_ample"] == row["expected"]
    ]
    return _result(not bad, {"cells": len(rows), "failures": bad})


def certificate_instances(seed: int, count: int = MIN_CERTIFICATE_INSTANCES) -> List[Tuple[GradedModule, list]]:
    """Submodules containing every linear vector of a module generated in degree 0.

    Odd instances have rank 2 and also carry a random proper subspace of N_0,
    so M_0 is nonzero there.
    """
    rng = random.Random(seed)
    out = []
    for index in range(count):
        ring = RingDescriptor(("x", "y", "z")[: rng.randint(2, 3)])
        rank = 1 + index % 2
        quadrics = [
            tuple(_random_form(ring, 2, rng) for _ in range(rank)) for _ in range(rng.randint(0, 1))
        ]
        N = GradedModule(GradedFreeModule(ring, (0,) * rank), quadrics)
        zero = ring.zero
        gens = [
            tuple(v if i == j else zero for i in range(rank))
            for j in range(rank)
            for v in ring.poly_ring.gens
        ]
        gens += [tuple(_random_form(ring, 2, rng) for _ in range(rank))]
        for _ in range(rng.randint(1, rank - 1) if rank > 1 else 0):
            scalars = [rng.randint(-3, 3) for _ in range(rank)]
            if not any(scalars):
                scalars[rng.randrange(rank)] = 1
            gens.append(tuple(ring.one * c for c in scalars))
        out.append((N, gens))
    return out


def check_certificates(seed: int) -> Result:
    verdicts = []
    for N, gens in certificate_instances(seed):
        certificate = nonvanishing_certificate(N, gens)
        verdicts.append([certificate.verdict, certificate.dimension])
    passed = len(verdicts) >= MIN_CERTIFICATE_INSTANCES and all(
        verdict == CERTIFIED_NONZERO and dimension >= 1 for verdict, dimension in verdicts
    )
    return _result(passed, {"instances": verdicts})


def check_curve_sweep() -> Result:
    rows = curve_criterion_sweep()
    failures = [
        [row["g"], row["p"], row["d"], row["b"], row["h0B"]]
        for row in rows
        if row["verdict"] != CERTIFIED or not row["gap_matches"]
    ]
    return _result(bool(rows) and not failures, {"cases": len(rows), "failures": failures})


def check_bounds() -> Result:
    table = effective_bound_table(4, 4)
    formula = all(value == (n - 1) * (p + 1) + p + 3 for (n, p), value in table.items())
    locked = all(table[key] == value for key, value in LOCKED_BOUNDS.items())
    return _result(formula and locked, {"table": [[n, p, v] for (n, p), v in sorted(table.items())]})


def check_polygraph(cases: List[Tuple[int, int]], threads: int) -> Result:
    details = []
    passed = True
    for n, k in cases:
        try:
            verdict = equivariant_vanishing_check(n, k, threads=threads).verdict
        except KoszulKitError as ex:
            verdict = f"error: {ex}"
        forced = n == 1 or k == 0
        ok = verdict == VERDICT_EXT_ZERO if forced else verdict in (VERDICT_EXT_ZERO, VERDICT_INVARIANTS_ZERO)
        passed = passed and ok
        details.append([n, k, verdict])
    return _result(passed, {"cases": details})


def check_ampleness(m_max: int = 6) -> Result:
    orders = [[m, very_ampleness_order(LineBundleOnP1(m), m + 1).order] for m in range(m_max + 1)]
    return _result(all(m == order for m, order in orders), {"orders": orders})


def check_duality(d_max: int) -> Result:
    failures = []
    count = 0
    for d in range(3, d_max + 1):
        for p in range(d):
            count += 1
            left = koszul_of_sections(-2, d, p, 1)
            right = koszul_of_sections(0, d, d - 1 - p, 1)
            if left != right:
                failures.append([d, p, left, right])
    return _result(not failures, {"cases": count, "failures": failures})


def check_determinism(
    results_at: Callable[[int], Dict[str, Result]], thread_counts: Sequence[int] = DETERMINISM_THREADS
) -> Result:
    """Serialized criterion results must be byte-identical for every thread count."""
    reports = {threads: json.dumps(results_at(threads), sort_keys=True) for threads in thread_counts}
    reference = reports[thread_counts[0]]
    differing = [threads for threads, report in reports.items() if report != reference]
    return _result(not differing, {"threads": list(thread_counts), "differing": differing})


def _criteria(full: bool, seed: int, threads: int) -> Dict[str, Callable[[], Result]]:
    polygraphs = [(1, 0), (2, 0), (1, 1), (1, 2), (2, 1), (3, 1)]
    if full:
        polygraphs += [(3, 0), (2, 2)]
    return {
        "betti_koszul": lambda: check_betti_koszul(seed, threads),
        "curve_case": lambda: check_curve_case(threads, 3 if full else 2),
        "certificates": lambda: check_certificates(seed),
        "curve_sweep": check_curve_sweep,
        "effective_bounds": check_bounds,
        "polygraph": lambda: check_polygraph(polygraphs, threads),
        "ampleness": check_ampleness,
        "duality": lambda: check_duality(6),
    }


def _run_criteria(criteria: Dict[str, Callable[[], Result]]) -> Dict[str, Result]:
    results = {}
    for name, check in criteria.items():
        _LOGGER.info("Checking %s", name)
        results[name] = check()
    return results


def verify_suite(level: str, seed: int = 0, threads: int = 1) -> Dict[str, Any]:
    """Run every criterion; the full level adds the slow grid points and R(3,0), R(2,2).

    The determinism criterion reruns the others at each of DETERMINISM_THREADS
    and compares the serialized results.
    """
    if level not in LEVELS:
        raise InputError("Unknown verify level", level)
    full = level == LEVEL_FULL
    runs = {threads: _run_criteria(_criteria(full, seed, threads))}

    def results_at(count: int) -> Dict[str, Result]:
        if count not in runs:
            runs[count] = _run_criteria(_criteria(full, seed, count))
        return runs[count]

    results = dict(runs[threads])
    results["determinism"] = check_determinism(results_at)
    for name, result in results.items():
        if not result["passed"]:
            _LOGGER.warning("Criterion %s failed: %s", name, result["details"])
    return {
        "level": level,
        "seed": seed,
        "criteria": results,
        "passed": all(result["passed"] for result in results.values()),
    }
