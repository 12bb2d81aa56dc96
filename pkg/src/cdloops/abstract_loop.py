"""Finite loops presented as bare multiplication tables.

Everything downstream of table export forgets the (scalar, mask) coordinates
and works with an N x N Latin square over indices 0..N-1.  This module
validates such tables, computes centers, closures and element orders, builds
tables from loop descriptors, searches for isomorphisms, and reads/writes
the loop-table v1 interchange format.
"""

from __future__ import annotations

import random

import numpy as np

from .budget import ensure_budget
from .cdloop import CDLoop
from .central_product import CentralProduct, coset_twist_matrix
from .errors import BudgetExceeded, TableFormatError

MAX_ISO_SIZE = 256


class AbstractLoop:
    """A finite loop given by its multiplication table.

    table[i][j] is the index of the product of elements i and j.  The table
    must be a Latin square with a two-sided identity; the identity may sit
    at any index (parse_loop_table normalizes it to 0).
    """

    def __init__(self, table, validate: bool = True):
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise TableFormatError(f"table must be square, got shape {arr.shape}")
        if arr.shape[0] == 0:
            raise TableFormatError("table is empty")
        self.table = arr
        self.size = int(arr.shape[0])
        if validate:
            self._validate_latin()
        self.identity = self._find_identity()
        self._center: list[int] | None = None
        self._orders: list[int] | None = None
        self._commutant_counts: np.ndarray | None = None
        self._signature_cache: list[tuple[int, int, int]] | None = None
        self._ladder_cache: list[int] | None = None

    # -- validation ------------------------------------------------------------

    def _validate_latin(self) -> None:
        arr, n = self.table, self.size
        if arr.min() < 0 or arr.max() >= n:
            bad = np.argwhere((arr < 0) | (arr >= n))[0]
            raise TableFormatError(
                f"entry at row {bad[0]}, column {bad[1]} is outside 0..{n - 1}"
            )
        expected = np.arange(n)
        row_ok = (np.sort(arr, axis=1) == expected).all(axis=1)
        if not row_ok.all():
            i = int(np.flatnonzero(~row_ok)[0])
            raise TableFormatError(f"row {i} is not a permutation of 0..{n - 1}")
        col_ok = (np.sort(arr.T, axis=1) == expected).all(axis=1)
        if not col_ok.all():
            j = int(np.flatnonzero(~col_ok)[0])
            raise TableFormatError(f"column {j} is not a permutation of 0..{n - 1}")

    def _find_identity(self) -> int:
        arr = self.table
        expected = np.arange(self.size)
        for e in range(self.size):
            if np.array_equal(arr[e], expected) and np.array_equal(arr[:, e], expected):
                return e
        raise TableFormatError("table has no two-sided identity element")

    # -- basic operations --------------------------------------------------------

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def left_div(self, a: int, b: int) -> int:
        """The unique x with a * x = b."""
        return int(np.flatnonzero(self.table[a] == b)[0])

    def right_div(self, b: int, a: int) -> int:
        """The unique x with x * a = b."""
        return int(np.flatnonzero(self.table[:, a] == b)[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbstractLoop):
            return NotImplemented
        return self.size == other.size and np.array_equal(self.table, other.table)

    __hash__ = None

    # -- structure ----------------------------------------------------------------

    def center(self) -> list[int]:
        """Indices commuting and associating (in all three slots) with everything."""
        if self._center is None:
            arr = self.table
            out = []
            for x in np.flatnonzero((arr == arr.T).all(axis=1)):
                fx = arr[x]
                cx = arr[:, x]
                if not np.array_equal(arr[fx], arr[x, arr]):
                    continue
                if not np.array_equal(arr[cx], arr[:, fx]):
                    continue
                if not np.array_equal(arr[arr, x], arr[:, cx]):
                    continue
                out.append(int(x))
            self._center = out
        return list(self._center)

    def closure(self, seed) -> set[int]:
        """Smallest subset containing the identity and seed, closed under mul."""
        current = np.unique(
            np.concatenate([np.fromiter(seed, dtype=np.int64), [self.identity]])
        )
        while True:
            products = np.unique(self.table[np.ix_(current, current)])
            merged = np.union1d(current, products)
            if merged.size == current.size:
                return {int(i) for i in merged}
            current = merged

    def element_orders(self) -> list[int]:
        """Left-power order of each element: least k with x^(k) = identity,
        where x^(k+1) = x * x^(k)."""
        if self._orders is None:
            n = self.size
            orders = np.zeros(n, dtype=np.int64)
            idx = np.arange(n)
            power = idx.copy()
            k = 1
            while (orders == 0).any():
                hit = (power == self.identity) & (orders == 0)
                orders[hit] = k
                power = self.table[idx, power]
                k += 1
            self._orders = [int(o) for o in orders]
        return list(self._orders)

    def commutant_sizes(self) -> list[int]:
        """|{y : x * y = y * x}| for every x."""
        if self._commutant_counts is None:
            arr = self.table
            self._commutant_counts = (arr == arr.T).sum(axis=1)
        return [int(c) for c in self._commutant_counts]

    def subloop(self, indices) -> "AbstractLoop":
        """Induced loop on a closed subset, elements renumbered in sorted order."""
        idx = sorted(set(int(i) for i in indices))
        lut = np.full(self.size, -1, dtype=np.int64)
        lut[idx] = np.arange(len(idx))
        sub = lut[self.table[np.ix_(idx, idx)]]
        if (sub < 0).any():
            inside = set(idx)
            for a in idx:
                for b in idx:
                    if self.mul(a, b) not in inside:
                        raise ValueError(
                            f"subset is not closed: {a} * {b} = {self.mul(a, b)}"
                        )
        return AbstractLoop(sub, validate=False)

    def relabel(self, perm) -> "AbstractLoop":
        """Transport the table along i -> perm[i]."""
        p = np.asarray(perm, dtype=np.int64)
        if p.shape != (self.size,) or not np.array_equal(np.sort(p), np.arange(self.size)):
            raise ValueError(f"relabeling must be a permutation of 0..{self.size - 1}")
        new = np.empty_like(self.table)
        new[p[:, None], p[None, :]] = p[self.table]
        return AbstractLoop(new, validate=False)

    # -- signatures for isomorphism search ------------------------------------------

    def _signatures(self) -> list[tuple[int, int, int]]:
        if self._signature_cache is None:
            arr = self.table
            orders = self.element_orders()
            comm = self.commutant_sizes()
            assoc = [
                int((arr[arr[x]] == arr[x, arr]).sum()) for x in range(self.size)
            ]
            self._signature_cache = list(zip(orders, comm, assoc))
        return self._signature_cache

    def _generator_ladder(self) -> list[int]:
        """Greedy generating sequence, each pick growing the closure the most."""
        if self._ladder_cache is None:
            known = self.closure(())
            gens: list[int] = []
            while len(known) < self.size:
                best_g, best_closure = -1, known
                for g in range(self.size):
                    if g in known:
                        continue
                    grown = self.closure(list(known) + [g])
                    if len(grown) > len(best_closure):
                        best_g, best_closure = g, grown
                gens.append(best_g)
                known = best_closure
            self._ladder_cache = gens
        return list(self._ladder_cache)


def to_table(obj: CDLoop | CentralProduct, max_elements: int | None = None) -> AbstractLoop:
    """Multiplication table of a loop or central product.

    Element i = s * 2**(m*n) + c is the coset representative with scalar
    exponent s and combined mask c (factor 1 in the low n bits), so the
    identity always lands at index 0.
    """
    if isinstance(obj, CDLoop):
        A = CentralProduct(obj.z, (obj,))
    elif isinstance(obj, CentralProduct):
        A = obj
    else:
        raise TypeError(f"expected CDLoop or CentralProduct, got {type(obj).__name__}")
    size = A.order
    ensure_budget(size * size, max_elements, "table construction")
    k = A.z.order
    cosets = A.coset_count
    twists = coset_twist_matrix(A)
    index = np.arange(size)
    s = index // cosets
    c = index % cosets
    scalar_grid = (s[:, None] + s[None, :] + twists[c[:, None], c[None, :]]) % k
    mask_grid = c[:, None] ^ c[None, :]
    return AbstractLoop(scalar_grid * cosets + mask_grid, validate=False)


# -- loop-table v1 interchange format -----------------------------------------------


def serialize_loop_table(loop: AbstractLoop) -> str:
    """Render as 'loop-table v1 N' plus N rows of N space-separated indices."""
    lines = [f"loop-table v1 {loop.size}"]
    lines.extend(" ".join(map(str, row)) for row in loop.table.tolist())
    return "\n".join(lines) + "\n"


def parse_loop_table(text: str) -> AbstractLoop:
    """Parse the loop-table v1 format and normalize the identity to index 0."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise TableFormatError("empty input")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "loop-table" or header[1] != "v1":
        raise TableFormatError(
            f"expected header 'loop-table v1 N', got {lines[0]!r}"
        )
    try:
        n = int(header[2])
    except ValueError:
        raise TableFormatError(f"invalid size in header: {header[2]!r}") from None
    if n < 1:
        raise TableFormatError(f"size must be positive, got {n}")
    if len(lines) - 1 != n:
        raise TableFormatError(f"expected {n} rows after the header, got {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != n:
            raise TableFormatError(f"row {i} has {len(parts)} entries, expected {n}")
        try:
            rows.append(np.fromiter(map(int, parts), dtype=np.int64, count=n))
        except ValueError:
            raise TableFormatError(f"row {i} contains a non-integer entry") from None
    loop = AbstractLoop(np.vstack(rows))
    if loop.identity != 0:
        perm = list(range(loop.size))
        perm[0], perm[loop.identity] = perm[loop.identity], perm[0]
        loop = loop.relabel(perm)
    return loop


def random_relabel(
    loop: AbstractLoop, rng: random.Random
) -> tuple[AbstractLoop, list[int]]:
    """Apply a uniformly random permutation; returns (new loop, permutation)."""
    perm = list(range(loop.size))
    rng.shuffle(perm)
    return loop.relabel(perm), perm


# -- isomorphism search ---------------------------------------------------------------


def verify_isomorphism(left: AbstractLoop, right: AbstractLoop, mapping) -> bool:
    """Full N^2 check that mapping transports left's table onto right's."""
    if left.size != right.size:
        return False
    p = np.asarray(mapping, dtype=np.int64)
    if p.shape != (left.size,) or not np.array_equal(np.sort(p), np.arange(left.size)):
        return False
    return bool(np.array_equal(p[left.table], right.table[p[:, None], p[None, :]]))


def fixes_center_setwise(left: AbstractLoop, right: AbstractLoop, mapping) -> bool:
    """Whether the witness carries left's center onto right's center."""
    return {mapping[c] for c in left.center()} == set(right.center())


def find_isomorphism(
    left: AbstractLoop, right: AbstractLoop, max_size: int = MAX_ISO_SIZE
) -> list[int] | None:
    """Search for an isomorphism left -> right; returns the index map or None.

    Elements are prefiltered by (left-power order, commutant size, count of
    associating pairs), generators are chosen greedily to cover the loop in
    few steps, and partial maps are propagated through products before
    backtracking.  Any witness found is re-verified over the full table.
    """
    if left.size != right.size:
        return None
    if left.size > max_size:
        raise BudgetExceeded(
            f"isomorphism search supports tables up to {max_size} elements, "
            f"got {left.size}",
            required=left.size,
            budget=max_size,
        )
    sig_left = left._signatures()
    sig_right = right._signatures()
    if sorted(sig_left) != sorted(sig_right):
        return None

    n = left.size
    t1 = left.table.tolist()
    t2 = right.table.tolist()
    gens = left._generator_ladder()
    pools = [
        [h for h in range(n) if sig_right[h] == sig_left[g]] for g in gens
    ]

    mapping = [-1] * n
    reverse = [-1] * n
    known: list[int] = []
    trail: list[int] = []

    def assign(a: int, b: int) -> bool:
        queue = [(a, b)]
        while queue:
            p, q = queue.pop()
            if mapping[p] != -1:
                if mapping[p] != q:
                    return False
                continue
            if reverse[q] != -1:
                return False
            mapping[p] = q
            reverse[q] = p
            known.append(p)
            trail.append(p)
            for c in known:
                for u, v in ((p, c), (c, p)):
                    product = t1[u][v]
                    image = t2[mapping[u]][mapping[v]]
                    got = mapping[product]
                    if got == -1:
                        queue.append((product, image))
                    elif got != image:
                        return False
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            p = trail.pop()
            known.pop()
            reverse[mapping[p]] = -1
            mapping[p] = -1

    if not assign(left.identity, right.identity):
        return None

    def search(level: int) -> bool:
        if level == len(gens):
            return all(v != -1 for v in mapping)
        g = gens[level]
        if mapping[g] != -1:
            return search(level + 1)
        for h in pools[level]:
            if reverse[h] != -1:
                continue
            mark = len(trail)
            if assign(g, h) and search(level + 1):
                return True
            undo(mark)
        return False

    if not search(0):
        return None
    if not verify_isomorphism(left, right, mapping):
        raise RuntimeError("internal error: isomorphism witness failed verification")
    return mapping
