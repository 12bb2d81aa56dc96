"""Self-verification suite: every claim the package relies on, re-checked.

Each check pits an exhaustive enumeration against a closed form, a known
reference value, or a structural identity, at zero tolerance.  Checks that
would blow the enumeration budget are reported as skipped, informational
measurements as info.  The suite is deterministic for a fixed seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .abstract_loop import (
    AbstractLoop,
    find_isomorphism,
    parse_loop_table,
    random_relabel,
    serialize_loop_table,
    to_table,
)
from .analytics import (
    associativity_degree_brute,
    associativity_degree_closed,
    associator_exponent_image,
    b_k_closed,
    commutant,
    commutant_coset_sizes,
    commutativity_degree_brute,
    commutativity_degree_closed,
    commutator_exponent_image,
    is_di_associative,
    moufang_identity_holds,
    pc_limit_table,
    rank_census_brute,
    rank_census_closed,
    two_factor_commutativity_closed,
)
from .cdloop import CDLoop
from .central_product import CentralProduct, make_product
from .decompose import DecompositionError, match_factors, recover_factors
from .errors import BudgetExceeded
from .scalars import Scalar, ScalarGroup, make_scalar_group


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass | fail | skipped | info
    expected: str
    actual: str
    source: str  # reference | derived | direct | enumeration


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(1 for c in self.checks if c.status == status)

    @property
    def ok(self) -> bool:
        return self.count("fail") == 0

    def render_text(self) -> str:
        lines = []
        for c in self.checks:
            lines.append(
                f"[{c.status.upper():>7}] {c.name}: expected {c.expected}, "
                f"got {c.actual} ({c.source})"
            )
        lines.append(
            f"{self.count('pass')} passed, {self.count('fail')} failed, "
            f"{self.count('skipped')} skipped, {self.count('info')} info"
        )
        return "\n".join(lines)


class _Runner:
    def __init__(self, max_elements: int | None):
        self.max_elements = max_elements
        self.report = VerifyReport()

    def check(self, name: str, source: str, expected, compute) -> None:
        """Run one check; compute() returns the actual value."""
        try:
            actual = compute()
        except BudgetExceeded as exc:
            self.report.checks.append(
                CheckResult(name, "skipped", str(expected), str(exc), source)
            )
            return
        except Exception as exc:
            self.report.checks.append(
                CheckResult(
                    name, "fail", str(expected), f"{type(exc).__name__}: {exc}", source
                )
            )
            return
        status = "pass" if actual == expected else "fail"
        self.report.checks.append(
            CheckResult(name, status, str(expected), str(actual), source)
        )

    def info(self, name: str, source: str, compute) -> None:
        try:
            actual = str(compute())
        except BudgetExceeded as exc:
            actual = f"skipped: {exc}"
        except Exception as exc:
            actual = f"{type(exc).__name__}: {exc}"
        self.report.checks.append(CheckResult(name, "info", "n/a", actual, source))


def _expect_raises(fn, exc_type, needle: str | None = None) -> str:
    try:
        fn()
    except exc_type as exc:
        if needle is not None and needle not in str(exc):
            return f"raised {exc_type.__name__} without {needle!r} in message"
        return f"raised {exc_type.__name__}"
    except Exception as exc:
        return f"raised {type(exc).__name__}: {exc}"
    return "no exception"


def _gamma_variants(z: ScalarGroup, n: int) -> list[tuple[Scalar, ...]]:
    """All-minus-one plus a couple of mixed vectors."""
    minus, one = z.minus_one, z.one
    variants = [tuple(minus for _ in range(n))]
    if n >= 1:
        variants.append(tuple(one if i % 2 else minus for i in range(n)))
    if z.order > 2:
        variants.append(tuple(Scalar(z, 1) if i == 0 else minus for i in range(n)))
    return variants


def _dihedral_table(rotations: int) -> list[list[int]]:
    """Multiplication table of the dihedral group with `rotations` rotations.

    Element i + rotations*s is r^i s^s; used as a negative control, since
    dihedral groups are not central products of doubled loops.
    """
    size = 2 * rotations
    table = [[0] * size for _ in range(size)]
    for i in range(rotations):
        for s in range(2):
            for j in range(rotations):
                for t in range(2):
                    k = (i + (j if s == 0 else -j)) % rotations
                    table[i + rotations * s][j + rotations * t] = (
                        k + rotations * (s ^ t)
                    )
    return table


def _half_set(order: int) -> set[int]:
    return {0, order // 2}


def run_verify(
    max_n: int = 4,
    max_m: int = 3,
    z_orders: tuple[int, ...] = (2, 4),
    trials: int = 24,
    seed: int = 2024,
    max_elements: int | None = None,
) -> VerifyReport:
    """Run the whole cross-check suite and return its report."""
    r = _Runner(max_elements)
    me = max_elements
    rng = random.Random(seed)

    # -- closed forms against reference and hand-derived values ---------------
    r.check(
        "assoc-degree-closed-n2-is-1",
        "reference",
        Fraction(1),
        lambda: associativity_degree_closed(2).degree,
    )
    r.check(
        "assoc-degree-closed-n3-is-43/64",
        "reference",
        Fraction(43, 64),
        lambda: associativity_degree_closed(3).degree,
    )
    r.check(
        "assoc-degree-closed-n4-is-197/512",
        "derived",
        Fraction(197, 512),
        lambda: associativity_degree_closed(4).degree,
    )
    r.check(
        "comm-degree-closed-m1-n2-is-5/8",
        "derived",
        Fraction(5, 8),
        lambda: commutativity_degree_closed(1, 2).degree,
    )
    r.check(
        "comm-degree-closed-m2-n2-is-17/32",
        "derived",
        Fraction(17, 32),
        lambda: commutativity_degree_closed(2, 2).degree,
    )
    r.check(
        "comm-degree-closed-m2-n3-is-281/512",
        "derived",
        Fraction(281, 512),
        lambda: commutativity_degree_closed(2, 3).degree,
    )
    r.check(
        "b2-at-n3-is-5/8",
        "derived",
        Fraction(5, 8),
        lambda: b_k_closed(3, 2),
    )
    r.check(
        "bk-satisfies-its-recurrence",
        "reference",
        True,
        lambda: all(
            b_k_closed(n, k)
            == Fraction(1, 2 ** (n - 1)) * b_k_closed(n, k - 1)
            + (1 - Fraction(1, 2 ** (n - 1))) * (1 - b_k_closed(n, k - 1))
            for n in range(2, 7)
            for k in range(1, 9)
        ),
    )
    r.check(
        "two-factor-polynomial-matches-general-form",
        "reference",
        True,
        lambda: all(
            two_factor_commutativity_closed(n)
            == commutativity_degree_closed(2, n).degree
            for n in range(1, 13)
        ),
    )
    r.check(
        "census-closed-m2-n3-z2-is-2-28-98",
        "derived",
        [2, 28, 98],
        lambda: rank_census_closed(2, 3, 2),
    )

    # -- brute force against closed forms --------------------------------------
    for n in range(2, max_n + 1):
        for zo in z_orders:
            r.check(
                f"assoc-degree-brute-vs-closed-n{n}-z{zo}",
                "enumeration",
                associativity_degree_closed(n, zo).degree,
                lambda n=n, zo=zo: associativity_degree_brute(
                    CDLoop.all_minus_one(make_scalar_group(zo), n), me
                ).degree,
            )
    for n in range(2, max_n + 1):
        z = make_scalar_group(2)
        A = make_product(z, [CDLoop.all_minus_one(z, n) for _ in range(2)])
        r.check(
            f"comm-degree-brute-vs-closed-m2-n{n}-z2",
            "enumeration",
            commutativity_degree_closed(2, n, 2).degree,
            lambda A=A: commutativity_degree_brute(A, me).degree,
        )
    r.check(
        "comm-degree-brute-m1-n2-q8",
        "enumeration",
        Fraction(5, 8),
        lambda: commutativity_degree_brute(
            CentralProduct(
                make_scalar_group(2),
                (CDLoop.all_minus_one(make_scalar_group(2), 2),),
            ),
            me,
        ).degree,
    )

    def _mixed_gamma_comm() -> bool:
        z = make_scalar_group(2)
        ok = True
        for gammas in _gamma_variants(z, 3)[1:]:
            A = make_product(z, [CDLoop(z, gammas), CDLoop.all_minus_one(z, 3)])
            ok = ok and (
                commutativity_degree_brute(A, me).degree
                == commutativity_degree_closed(2, 3, 2).degree
            )
        return ok

    r.check(
        "comm-degree-independent-of-gammas-m2-n3",
        "enumeration",
        True,
        _mixed_gamma_comm,
    )

    # -- commutant ratios and censuses over the acceptance grid ----------------
    grid = [
        (m, n)
        for m in range(1, max_m + 1)
        for n in range(3, max_n + 1)
        if m * n <= 9
    ]
    for m, n in grid:
        z = make_scalar_group(2)
        A = make_product(z, [CDLoop.all_minus_one(z, n) for _ in range(m)])

        def _ratios_match(A=A, m=m, n=n) -> bool:
            sizes = commutant_coset_sizes(A, me)
            cosets = A.coset_count
            for combined, size in enumerate(sizes):
                rank = sum(
                    1 for i in range(m) if (combined >> (n * i)) & ((1 << n) - 1)
                )
                if Fraction(size, cosets) != b_k_closed(n, rank):
                    return False
            return True

        r.check(
            f"commutant-ratios-match-bk-m{m}-n{n}-z2",
            "enumeration",
            True,
            _ratios_match,
        )

        def _rank1_size(A=A, m=m, n=n) -> bool:
            sizes = commutant_coset_sizes(A, me)
            expected = 2 ** ((m - 1) * n + 1)
            low = (1 << n) - 1
            for combined, size in enumerate(sizes):
                rank = sum(1 for i in range(m) if (combined >> (n * i)) & low)
                if rank == 1 and size != expected:
                    return False
            return True

        r.check(
            f"rank1-commutant-coset-size-m{m}-n{n}-z2",
            "reference",
            True,
            _rank1_size,
        )
        r.check(
            f"census-brute-vs-closed-m{m}-n{n}-z2",
            "enumeration",
            rank_census_closed(m, n, 2),
            lambda A=A: rank_census_brute(A, me),
        )

    if 4 in z_orders and max_m >= 2 and max_n >= 3:
        z4 = make_scalar_group(4)
        A4 = make_product(z4, [CDLoop.all_minus_one(z4, 3) for _ in range(2)])
        r.check(
            "census-brute-vs-closed-m2-n3-z4",
            "enumeration",
            rank_census_closed(2, 3, 4),
            lambda: rank_census_brute(A4, me),
        )

    def _commutant_elements_consistent() -> bool:
        z = make_scalar_group(2)
        A = make_product(z, [CDLoop.all_minus_one(z, 3) for _ in range(2)])
        sizes = commutant_coset_sizes(A, me)
        for masks in ((1, 0), (1, 2)):
            x = A.element(z.one, masks)
            combined = A.combined_mask(x)
            if len(commutant(A, x, me)) != sizes[combined] * z.order:
                return False
        return True

    r.check(
        "commutant-elements-agree-with-coset-survey-m2-n3",
        "enumeration",
        True,
        _commutant_elements_consistent,
    )

    # -- limit behaviour ---------------------------------------------------------
    r.check(
        "pc-strictly-increasing-in-n-m2",
        "reference",
        True,
        lambda: all(
            a < b
            for (_, a), (_, b) in zip(
                pc_limit_table("grow_n", 2, 2, 10), pc_limit_table("grow_n", 2, 3, 10)
            )
        ),
    )
    r.check(
        "pc-m2-n10-exceeds-0.99",
        "reference",
        True,
        lambda: pc_limit_table("grow_n", 2, 10, 10)[0][1] > Fraction(99, 100),
    )
    r.check(
        "pc-m40-n2-within-0.01-of-half",
        "reference",
        True,
        lambda: abs(commutativity_degree_closed(40, 2).degree - Fraction(1, 2))
        < Fraction(1, 100),
    )
    r.check(
        "pc-decreasing-to-half-in-m-n2",
        "derived",
        True,
        lambda: all(
            a > b > Fraction(1, 2)
            for (_, a), (_, b) in zip(
                pc_limit_table("grow_m", 2, 1, 12), pc_limit_table("grow_m", 2, 2, 12)
            )
        ),
    )

    # -- structural identities over a gamma sweep ---------------------------------
    swept: list[CDLoop] = []
    for zo in z_orders:
        z = make_scalar_group(zo)
        for n in range(1, min(max_n, 4) + 1):
            for gammas in _gamma_variants(z, n):
                swept.append(CDLoop(z, gammas))

    r.check(
        "di-associativity-across-sweep",
        "reference",
        True,
        lambda: all(is_di_associative(L, me) for L in swept),
    )

    def _images_in_pm1() -> bool:
        for L in swept:
            A = CentralProduct(L.z, (L,))
            half = _half_set(L.z.order)
            if not commutator_exponent_image(A, me) <= half:
                return False
            if not associator_exponent_image(A, me) <= half:
                return False
        return True

    r.check(
        "commutators-and-associators-in-pm1-across-sweep",
        "reference",
        True,
        _images_in_pm1,
    )

    def _product_images_in_pm1() -> bool:
        for zo in z_orders:
            z = make_scalar_group(zo)
            for m, n in ((2, 2), (2, 3)):
                if m > max_m or n > max_n:
                    continue
                A = make_product(z, [CDLoop.all_minus_one(z, n)] * m)
                half = _half_set(zo)
                if not commutator_exponent_image(A, me) <= half:
                    return False
                if not associator_exponent_image(A, me) <= half:
                    return False
        return True

    r.check(
        "product-commutators-and-associators-in-pm1",
        "reference",
        True,
        _product_images_in_pm1,
    )

    def _conj_anti_automorphism() -> bool:
        for L in swept:
            if L.n > 3:
                continue
            elems = L.elements(me)
            for x in elems:
                if L.conj(L.conj(x)) != x:
                    return False
            for x in elems:
                for y in elems:
                    if L.conj(L.mul(x, y)) != L.mul(L.conj(y), L.conj(x)):
                        return False
        return True

    r.check(
        "conj-is-an-involutory-anti-automorphism",
        "reference",
        True,
        _conj_anti_automorphism,
    )

    def _two_sided_inverses() -> bool:
        for L in swept:
            for x in L.elements(me):
                if L.mul(x, L.inv(x)) != L.identity:
                    return False
                if L.mul(L.inv(x), x) != L.identity:
                    return False
        return True

    r.check("inverses-are-two-sided", "direct", True, _two_sided_inverses)

    def _mask_map_is_onto_with_kernel_z() -> bool:
        for L in swept:
            elems = L.elements(me)
            masks = {x.mask for x in elems}
            if masks != set(range(1 << L.n)):
                return False
            if sum(1 for x in elems if x.mask == 0) != L.z.order:
                return False
            for x in elems[:: max(1, len(elems) // 8)]:
                for y in elems[:: max(1, len(elems) // 8)]:
                    if L.mul(x, y).mask != x.mask ^ y.mask:
                        return False
        return True

    r.check(
        "mask-map-quotient-is-elementary-abelian",
        "direct",
        True,
        _mask_map_is_onto_with_kernel_z,
    )

    r.check(
        "to-table-yields-latin-squares-across-sweep",
        "direct",
        True,
        lambda: all(
            AbstractLoop(to_table(L, me).table).size == L.order
            for L in swept
            if L.order <= 256
        ),
    )

    for zo in z_orders:
        r.check(
            f"moufang-identity-n3-z{zo}",
            "reference",
            True,
            lambda zo=zo: moufang_identity_holds(
                CDLoop.all_minus_one(make_scalar_group(zo), 3), me
            ),
        )
    if max_n >= 4:
        r.info(
            "moufang-identity-n4-z2",
            "enumeration",
            lambda: moufang_identity_holds(
                CDLoop.all_minus_one(make_scalar_group(2), 4), me
            ),
        )

    # -- table round trips and isomorphism search ----------------------------------
    z2 = make_scalar_group(2)
    o16 = to_table(CDLoop.all_minus_one(z2, 3), me)
    r.check(
        "loop-table-serialize-parse-roundtrip",
        "direct",
        True,
        lambda: parse_loop_table(serialize_loop_table(o16)) == o16,
    )

    def _iso_roundtrip() -> bool:
        shuffled, _ = random_relabel(o16, rng)
        witness = find_isomorphism(o16, shuffled)
        return witness is not None

    r.check("iso-search-finds-self-relabeling", "enumeration", True, _iso_roundtrip)

    def _iso_distinguishes() -> bool:
        q8 = to_table(CDLoop.all_minus_one(z2, 2), me)
        split = to_table(
            CDLoop(z2, (z2.one, z2.minus_one)), me
        )
        return find_isomorphism(q8, split) is None

    r.check(
        "iso-search-separates-q8-from-mixed-gamma-loop",
        "enumeration",
        True,
        _iso_distinguishes,
    )

    # -- decomposition -------------------------------------------------------------
    r.check(
        "decompose-rejects-depth-2",
        "direct",
        "raised ValueError",
        lambda: _expect_raises(
            lambda: recover_factors(to_table(CDLoop.all_minus_one(z2, 2), me), 2),
            ValueError,
            "n >= 3",
        ),
    )
    r.check(
        "decompose-rejects-dihedral-group",
        "derived",
        "raised DecompositionError",
        lambda: _expect_raises(
            lambda: recover_factors(AbstractLoop(_dihedral_table(8)), 3),
            DecompositionError,
        ),
    )

    combos = [
        (n, m, zo)
        for n in (3, 4)
        if n <= max_n
        for m in (1, 2)
        if m <= max_m
        for zo in z_orders
    ]
    per_combo = max(1, -(-trials // max(1, len(combos))))
    pivot_partitions_agree = True

    for n, m, zo in combos:

        def _roundtrip_trials(n=n, m=m, zo=zo) -> str:
            nonlocal pivot_partitions_agree
            z = make_scalar_group(zo)
            for t in range(per_combo):
                gammas_per_factor = [
                    tuple(Scalar(z, rng.randrange(zo)) for _ in range(n))
                    for _ in range(m)
                ]
                factors = [CDLoop(z, gs) for gs in gammas_per_factor]
                A = make_product(z, factors)
                original = to_table(A, me)
                shuffled, _ = random_relabel(original, rng)
                parsed = parse_loop_table(serialize_loop_table(shuffled))
                dec = recover_factors(parsed, n)
                if dec.m != m or dec.z_size != zo:
                    return f"trial {t}: recovered shape ({dec.m}, {dec.z_size})"
                if dec.rank_histogram() != rank_census_closed(m, n, zo):
                    return f"trial {t}: rank histogram {dec.rank_histogram()}"
                base = recover_factors(original, n)
                sigma = match_factors(dec, base)
                if sigma is None:
                    return f"trial {t}: factors do not match the originals"
                for j, D in enumerate(base.factors):
                    direct = to_table(factors[j], me)
                    if find_isomorphism(D, direct) is None:
                        return f"trial {t}: factor {j} differs from its constructor"
                if t == 0:
                    desc = recover_factors(parsed, n, pivot_order="descending")
                    if sorted(map(tuple, desc.subsets)) != sorted(
                        map(tuple, dec.subsets)
                    ):
                        pivot_partitions_agree = False
            return "all trials succeeded"

        r.check(
            f"decompose-roundtrip-n{n}-m{m}-z{zo}-x{per_combo}",
            "enumeration",
            "all trials succeeded",
            _roundtrip_trials,
        )

    r.info(
        "decompose-pivot-order-invariance",
        "enumeration",
        lambda: f"ascending and descending pivots split identically: {pivot_partitions_agree}",
    )

    return r.report
