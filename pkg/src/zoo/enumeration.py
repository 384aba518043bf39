"""
Exhaustive scans over all linear maps ``h -> g`` of a prime field.

Candidates are numbered ``t = 0 .. p^(dim_g * dim_h) - 1``. Entry ``k`` of
the coefficient matrix, counted column by column (``k = u * dim_g + j`` for
the coefficient of ``e_j`` in ``r(e_u)``), is the k-th base-p digit of ``t``.
The range is cut into chunks that run on a thread pool; results are merged
in chunk order so the output order never depends on scheduling.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from src.config import load_settings
from src.engine.errors import BudgetExceeded, FieldMismatch, ShapeError
from src.engine.exactlin import Field
from src.engine.multimap import MultiMap
from src.engine.prototwilled import OmegaStructure, is_deformation_map

logger = logging.getLogger(__name__)

Predicate = Callable[[MultiMap], bool]


def candidate_count(field: Field, dim_g: int, dim_h: int) -> int:
    if field.modulus is None:
        raise FieldMismatch("exhaustive scans need a prime field")
    return field.modulus ** (dim_g * dim_h)


def candidate_map(field: Field, dim_g: int, dim_h: int, t: int) -> MultiMap:
    """The ``t``-th map ``h -> g`` in column-major base-p order."""
    p = field.modulus
    r = MultiMap.zeros(field, dim_g, (dim_h,))
    for k in range(dim_g * dim_h):
        digit = (t // p**k) % p
        if digit:
            u, j = divmod(k, dim_g)
            r.coeffs[j, u] = field.domain(digit)
    return r


def check_budget(field: Field, dim_g: int, dim_h: int, budget: int | None = None) -> int:
    """
    Raises:
        FieldMismatch: Over the rationals.
        BudgetExceeded: If the candidate count exceeds ``budget``.
    """
    total = candidate_count(field, dim_g, dim_h)
    limit = budget if budget is not None else load_settings().enum_budget
    if total > limit:
        raise BudgetExceeded(f"{field.modulus}^{dim_g * dim_h} = {total} candidates exceed the budget {limit}")
    return total


@dataclass
class ScanResult:
    matches: list[tuple[int, MultiMap]]
    scanned: int

    @property
    def maps(self) -> list[MultiMap]:
        return [r for _, r in self.matches]


def _scan_chunk(field: Field, dim_g: int, dim_h: int, start: int, stop: int, predicate: Predicate) -> list[tuple[int, MultiMap]]:
    out = []
    for t in range(start, stop):
        r = candidate_map(field, dim_g, dim_h, t)
        if predicate(r):
            out.append((t, r))
    return out


def scan(
    field: Field,
    dim_g: int,
    dim_h: int,
    predicate: Predicate,
    budget: int | None = None,
    workers: int | None = None,
) -> ScanResult:
    """
    Run ``predicate`` on every candidate map and keep the ones it accepts.

    Raises:
        FieldMismatch: Over the rationals.
        BudgetExceeded: If there are more candidates than ``budget``.
        ShapeError: If ``workers`` is below 1.
    """
    total = check_budget(field, dim_g, dim_h, budget)
    workers = workers if workers is not None else load_settings().workers
    if workers < 1:
        raise ShapeError(f"workers must be at least 1, got {workers}")
    chunk = max(1, -(-total // (workers * 4)))
    bounds = [(start, min(start + chunk, total)) for start in range(0, total, chunk)]
    logger.info(f"[ENUM] scanning {total} maps over {field} in {len(bounds)} chunks on {workers} workers")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_scan_chunk, field, dim_g, dim_h, a, b, predicate) for a, b in bounds]
        matches = [m for future in futures for m in future.result()]

    logger.info(f"[ENUM] {len(matches)} of {total} maps accepted")
    return ScanResult(matches=matches, scanned=total)


def enumerate_deformation_maps(omega: OmegaStructure, budget: int | None = None, workers: int | None = None) -> ScanResult:
    """All deformation maps of ``omega`` over its prime field, in scan order."""
    space = omega.space
    return scan(
        space.field,
        space.dim_g,
        space.dim_h,
        lambda r: is_deformation_map(r, omega).ok,
        budget=budget,
        workers=workers,
    )
