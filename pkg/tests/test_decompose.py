import random

import pytest

from cdloops import (
    CDLoop,
    DecompositionError,
    Scalar,
    find_isomorphism,
    infer_parameters,
    make_product,
    make_scalar_group,
    match_factors,
    random_relabel,
    rank_census_closed,
    rank_of,
    recover_factors,
    to_table,
)
from cdloops.abstract_loop import AbstractLoop

Z2 = make_scalar_group(2)
Z4 = make_scalar_group(4)
O = CDLoop.all_minus_one(Z2, 3)
SPLIT3 = CDLoop(Z2, (Z2.one, Z2.minus_one, Z2.one))
A2 = make_product(Z2, [O, O])
T2 = to_table(A2)


def dihedral_table(k):
    # 0..k-1 are rotations r^i, k..2k-1 are reflections s*r^i
    size = 2 * k
    table = [[0] * size for _ in range(size)]
    for i in range(k):
        for j in range(k):
            table[i][j] = (i + j) % k
            table[i][k + j] = k + (j - i) % k
            table[k + i][j] = k + (i + j) % k
            table[k + i][k + j] = (j - i) % k
    return AbstractLoop(table)


def test_infer_parameters_on_true_products():
    assert infer_parameters(T2, 3) == (2, 2)
    assert infer_parameters(to_table(O), 3) == (1, 2)
    assert infer_parameters(to_table(CDLoop.all_minus_one(Z4, 3)), 3) == (1, 4)
    assert infer_parameters(to_table(CDLoop.all_minus_one(Z2, 4)), 4) == (1, 2)


def test_infer_parameters_rejects_shallow_depths():
    q8 = to_table(CDLoop.all_minus_one(Z2, 2))
    with pytest.raises(ValueError, match="requires n >= 3"):
        infer_parameters(q8, 2)
    with pytest.raises(ValueError, match="requires n >= 3"):
        recover_factors(q8, 1)


def test_infer_parameters_rejects_wrong_coset_counts():
    # cyclic: the center is everything, so there are no cosets to split
    c96 = AbstractLoop([[(i + j) % 96 for j in range(96)] for i in range(96)])
    with pytest.raises(DecompositionError, match="not a positive power"):
        infer_parameters(c96, 3)
    # dihedral of order 12: 6 cosets of the center, not a power of 8
    with pytest.raises(DecompositionError, match="not a positive power"):
        infer_parameters(dihedral_table(6), 3)
    # octonion table read at the wrong depth
    with pytest.raises(DecompositionError, match="not a positive power"):
        infer_parameters(to_table(O), 4)


def test_rank_read_from_the_table():
    assert rank_of(T2, 0, 3) == 0
    minus_one = A2.element_index(A2.scale(Z2.minus_one, A2.identity))
    assert rank_of(T2, minus_one, 3) == 0
    l1 = A2.element_index(A2.embed(1, O.generator(1)))
    assert rank_of(T2, l1, 3) == 1
    both = A2.element_index(
        A2.pmul(A2.embed(1, O.generator(1)), A2.embed(2, O.generator(2)))
    )
    assert rank_of(T2, both, 3) == 2


def test_recovered_subsets_are_the_embedded_factors():
    dec = recover_factors(T2, 3)
    assert (dec.m, dec.z_size) == (2, 2)
    assert dec.center == [0, 64]
    assert dec.rank_histogram() == [2, 28, 98]
    embedded = [
        {A2.element_index(A2.embed(j + 1, x)) for x in O.elements()} for j in range(2)
    ]
    recovered = [set(s) for s in dec.subsets]
    assert sorted(map(sorted, recovered)) == sorted(map(sorted, embedded))
    for F in dec.factors:
        assert F.size == 16
        assert find_isomorphism(F, to_table(O)) is not None


def test_recover_rejects_non_product_tables_with_matching_size():
    # dihedral of order 16 has 8 center cosets but the wrong commutant profile
    with pytest.raises(DecompositionError, match="matching no rank"):
        recover_factors(dihedral_table(8), 3)


def test_round_trip_with_relabeling_and_mixed_gammas():
    rng = random.Random(20260825)
    cases = [
        (Z2, [(Z2.one, Z2.minus_one, Z2.one), (Z2.minus_one,) * 3]),
        (Z4, [(Scalar(Z4, 1), Z4.one, Z4.minus_one)]),
        (Z2, [(Z2.minus_one,) * 4, (Z2.one, Z2.one, Z2.minus_one, Z2.one)]),
    ]
    for z, gamma_lists in cases:
        factors = [CDLoop(z, gs) for gs in gamma_lists]
        A = make_product(z, factors)
        n = factors[0].n
        original = to_table(A)
        shuffled, _ = random_relabel(original, rng)
        dec = recover_factors(shuffled, n)
        assert dec.m == len(factors)
        assert dec.z_size == z.order
        assert dec.rank_histogram() == rank_census_closed(len(factors), n, z.order)
        base = recover_factors(original, n)
        sigma = match_factors(dec, base)
        assert sigma is not None
        assert sorted(sigma) == list(range(len(factors)))
        for j, F in enumerate(base.factors):
            assert find_isomorphism(F, to_table(factors[j])) is not None


def test_pivot_order_changes_nothing_essential():
    asc = recover_factors(T2, 3, pivot_order="ascending")
    desc = recover_factors(T2, 3, pivot_order="descending")
    assert sorted(map(sorted, asc.subsets)) == sorted(map(sorted, desc.subsets))
    with pytest.raises(ValueError):
        recover_factors(T2, 3, pivot_order="sideways")


def test_match_factors_finds_the_factor_swap():
    left = recover_factors(to_table(make_product(Z2, [O, SPLIT3])), 3)
    right = recover_factors(to_table(make_product(Z2, [SPLIT3, O])), 3)
    sigma = match_factors(left, right)
    assert sigma is not None
    assert sorted(sigma) == [0, 1]
    for j in range(2):
        assert find_isomorphism(left.factors[j], right.factors[sigma[j]]) is not None
    # O and the mixed-gamma loop are non-isomorphic, so the pairing is forced
    o_side = [find_isomorphism(F, to_table(O)) is not None for F in left.factors]
    o_image = [
        find_isomorphism(right.factors[sigma[j]], to_table(O)) is not None
        for j in range(2)
    ]
    assert o_side == o_image and o_side.count(True) == 1


def test_match_factors_failure_modes():
    both_o = recover_factors(to_table(make_product(Z2, [O, O])), 3)
    mixed = recover_factors(to_table(make_product(Z2, [O, SPLIT3])), 3)
    assert match_factors(both_o, mixed) is None
    single = recover_factors(to_table(O), 3)
    with pytest.raises(ValueError):
        match_factors(single, both_o)


def test_factor_tables_are_loops_in_their_own_right():
    dec = recover_factors(T2, 3)
    for F in dec.factors:
        AbstractLoop(F.table)  # revalidates Latin + identity
        assert sorted(F.element_orders()) == sorted(to_table(O).element_orders())
