"""Recover central-product structure from a bare multiplication table.

Given only an N x N table and the doubling depth n, the pipeline is:

 1. infer_parameters: the center recovers Z, and N/|Z| must equal 2**(m*n)
    for some factor count m.
 2. rank_of: an element of rank k commutes with exactly b_k(n) of the loop,
    and for n >= 3 the ratios b_0 > b_2 > ... > b_1 never collide, so the
    commutant size reveals the rank.  For n <= 2 every positive rank gives
    the ratio 1/2, which is why those depths are rejected.
 3. recover_factors: a rank-1 pivot x lies in a unique factor D_j, and the
    rank-1 elements failing to commute with x are exactly the rest of
    D_j outside Z<x>; closing over them and the center rebuilds D_j.
 4. match_factors: factor lists of two decompositions are matched up to
    isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .abstract_loop import AbstractLoop, find_isomorphism
from .analytics import b_k_closed
from .errors import DecompositionError


def infer_parameters(loop: AbstractLoop, n: int) -> tuple[int, int]:
    """Deduce (m, |Z|) for a table claimed to be an m-fold product of depth n.

    Raises ValueError for n < 3 (rank detection is blind there) and
    DecompositionError when the element counts rule the shape out.
    """
    if n < 3:
        raise ValueError(
            f"decomposition requires n >= 3, got n = {n}: for depths 1 and 2 "
            "every element outside the center has commutant ratio 1/2, so "
            "ranks cannot be read off the table"
        )
    z_size = len(loop.center())
    if loop.size % z_size:
        raise DecompositionError(
            f"center size {z_size} does not divide the loop order {loop.size}"
        )
    cosets = loop.size // z_size
    step = 1 << n
    m = 0
    remaining = cosets
    while remaining > 1 and remaining % step == 0:
        remaining //= step
        m += 1
    if remaining != 1 or m == 0:
        raise DecompositionError(
            f"not a central product of depth-{n} factors: |L|/|Z| = {cosets} "
            f"is not a positive power of 2**{n}"
        )
    return m, z_size


def _rank_lookup(n: int, m: int, size: int) -> dict[int, int]:
    """Map commutant size to rank; sizes are b_k * size and never collide."""
    table: dict[int, int] = {}
    for k in range(m + 1):
        count = b_k_closed(n, k) * size
        assert count.denominator == 1
        table[int(count)] = k
    return table


def rank_of(loop: AbstractLoop, x: int, n: int) -> int:
    """Rank of element x read off its commutant size."""
    m, _ = infer_parameters(loop, n)
    lookup = _rank_lookup(n, m, loop.size)
    count = loop.commutant_sizes()[x]
    rank = lookup.get(count)
    if rank is None:
        raise DecompositionError(
            f"element {x} commutes with {count} of {loop.size} elements, a ratio "
            f"{Fraction(count, loop.size)} matching no rank 0..{m}: table is not "
            "a central product of Cayley-Dickson loops"
        )
    return rank


@dataclass
class Decomposition:
    """Factors of a table recognized as a central product."""

    loop: AbstractLoop
    n: int
    m: int
    z_size: int
    center: list[int]
    ranks: list[int]
    subsets: list[list[int]]
    factors: list[AbstractLoop]

    def rank_histogram(self) -> list[int]:
        counts = [0] * (self.m + 1)
        for r in self.ranks:
            counts[r] += 1
        return counts


def recover_factors(
    loop: AbstractLoop, n: int, pivot_order: str = "ascending"
) -> Decomposition:
    """Split a table into its m central factors of depth n.

    pivot_order chooses which unassigned rank-1 element seeds the next
    factor; "ascending" (the default) and "descending" scan from opposite
    ends.  The result is independent of the choice for genuine products.
    """
    if pivot_order not in ("ascending", "descending"):
        raise ValueError(f"pivot_order must be ascending or descending, got {pivot_order!r}")
    m, z_size = infer_parameters(loop, n)
    lookup = _rank_lookup(n, m, loop.size)
    counts = loop.commutant_sizes()
    ranks = []
    for x, count in enumerate(counts):
        rank = lookup.get(count)
        if rank is None:
            raise DecompositionError(
                f"element {x} commutes with {count} of {loop.size} elements, "
                f"matching no rank 0..{m}: table is not a central product of "
                "Cayley-Dickson loops"
            )
        ranks.append(rank)
    center = loop.center()
    table = loop.table
    expected_size = (1 << n) * z_size
    assigned = np.zeros(loop.size, dtype=bool)
    assigned[center] = True
    rank1 = np.array(ranks) == 1
    pivots = [x for x in range(loop.size) if rank1[x]]
    if pivot_order == "descending":
        pivots.reverse()
    subsets: list[list[int]] = []
    for pivot in pivots:
        if assigned[pivot]:
            continue
        if len(subsets) == m:
            raise DecompositionError(
                f"element {pivot} has rank 1 but belongs to none of the {m} "
                "recovered factors: table is not a central product"
            )
        anti = table[pivot, :] != table[:, pivot]
        seed = set(np.flatnonzero(anti & rank1)) | {pivot} | set(center)
        members = loop.closure(seed)
        if len(members) != expected_size:
            raise DecompositionError(
                f"factor seeded at element {pivot} closes to {len(members)} "
                f"elements, expected {expected_size}: table is not a central "
                "product"
            )
        overlap = [x for x in members if assigned[x] and x not in center]
        if overlap:
            raise DecompositionError(
                f"factors seeded at different pivots share element {overlap[0]}: "
                "table is not a central product"
            )
        assigned[list(members)] = True
        subsets.append(sorted(members))
    if len(subsets) != m:
        raise DecompositionError(
            f"recovered {len(subsets)} factors, expected {m}: table is not a "
            "central product"
        )
    factors = [loop.subloop(subset) for subset in subsets]
    return Decomposition(
        loop=loop,
        n=n,
        m=m,
        z_size=z_size,
        center=center,
        ranks=ranks,
        subsets=subsets,
        factors=factors,
    )


def match_factors(left: Decomposition, right: Decomposition) -> list[int] | None:
    """Pair up factors of two decompositions by isomorphism.

    Returns sigma with left factor j isomorphic to right factor sigma[j],
    or None when no perfect matching exists.
    """
    if left.m != right.m:
        raise ValueError(
            f"decompositions have different factor counts: {left.m} and {right.m}"
        )
    m = left.m
    compatible = [
        [
            left.factors[j].size == right.factors[k].size
            and find_isomorphism(left.factors[j], right.factors[k]) is not None
            for k in range(m)
        ]
        for j in range(m)
    ]
    sigma = [-1] * m
    used = [False] * m
    def backtrack(j: int) -> bool:
        if j == m:
            return True
        for k in range(m):
            if not used[k] and compatible[j][k]:
                sigma[j] = k
                used[k] = True
                if backtrack(j + 1):
                    return True
                used[k] = False
        return False
    if not backtrack(0):
        return None
    return sigma
