import random

import numpy as np
import pytest

from cdloops import (
    AbstractLoop,
    CDLoop,
    TableFormatError,
    find_isomorphism,
    fixes_center_setwise,
    make_product,
    make_scalar_group,
    parse_loop_table,
    random_relabel,
    serialize_loop_table,
    to_table,
    verify_isomorphism,
)
from cdloops.errors import BudgetExceeded

Z2 = make_scalar_group(2)
Z4 = make_scalar_group(4)

Q8 = to_table(CDLoop.all_minus_one(Z2, 2))
SPLIT = to_table(CDLoop(Z2, (Z2.one, Z2.minus_one)))
O16 = to_table(CDLoop.all_minus_one(Z2, 3))


def test_zero_generators_gives_the_scalar_group_table():
    L = to_table(CDLoop(Z2, ()))
    assert L.table.tolist() == [[0, 1], [1, 0]]
    L4 = to_table(CDLoop(Z4, ()))
    assert L4.size == 4
    assert L4.table.tolist() == [[(i + j) % 4 for j in range(4)] for i in range(4)]


def test_quaternion_table_shape_and_center():
    assert Q8.size == 8
    assert Q8.identity == 0
    assert Q8.center() == [0, 4]
    assert O16.center() == [0, 8]


def test_element_orders_distinguish_gamma_signs():
    # all minus: six elements of order 4; one +1 gamma: only two
    assert sorted(Q8.element_orders()) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert sorted(SPLIT.element_orders()) == [1, 2, 2, 2, 2, 2, 4, 4]
    orders = O16.element_orders()
    assert orders.count(1) == 1 and orders.count(2) == 1 and orders.count(4) == 14


def test_commutant_sizes_in_the_quaternion_table():
    assert sorted(Q8.commutant_sizes()) == [4, 4, 4, 4, 4, 4, 8, 8]


def test_divisions_solve_their_equations():
    for a in range(O16.size):
        for b in range(O16.size):
            assert O16.mul(a, O16.left_div(a, b)) == b
            assert O16.mul(O16.right_div(b, a), a) == b


def test_table_agrees_with_elementwise_products():
    A = make_product(Z2, [CDLoop.all_minus_one(Z2, 2), CDLoop(Z2, (Z2.one, Z2.minus_one))])
    T = to_table(A)
    elems = A.penumerate()
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            assert T.mul(i, j) == A.element_index(A.pmul(x, y))


def test_closure_examples():
    assert Q8.closure([]) == {0}
    assert Q8.closure([Q8.identity]) == {0}
    i = 1  # index of l1 in enumeration order
    assert Q8.closure([i]) == {0, 1, 4, 5}
    assert Q8.closure([1, 2]) == set(range(8))


def test_subloop_extraction_and_diagnostic():
    sub = Q8.subloop([0, 1, 4, 5])
    assert sub.size == 4
    assert sorted(sub.element_orders()) == [1, 2, 4, 4]
    with pytest.raises(ValueError):
        Q8.subloop([0, 1])


def test_latin_square_diagnostics():
    with pytest.raises(TableFormatError, match="row 0 is not a permutation"):
        AbstractLoop([[0, 0], [1, 1]])
    with pytest.raises(TableFormatError, match="column 0 is not a permutation"):
        AbstractLoop([[0, 1], [0, 1]])
    with pytest.raises(TableFormatError, match="outside 0..1"):
        AbstractLoop([[0, 1], [1, 5]])
    with pytest.raises(TableFormatError, match="no two-sided identity"):
        AbstractLoop([[0, 1, 2], [2, 0, 1], [1, 2, 0]])
    with pytest.raises(TableFormatError):
        AbstractLoop([[0, 1]])


def test_serialize_parse_round_trip():
    text = serialize_loop_table(O16)
    lines = text.strip().split("\n")
    assert lines[0] == "loop-table v1 16"
    assert len(lines) == 17
    assert parse_loop_table(text) == O16


def test_parse_normalizes_identity_to_zero():
    L = AbstractLoop([[1, 0], [0, 1]])
    assert L.identity == 1
    reparsed = parse_loop_table(serialize_loop_table(L))
    assert reparsed.identity == 0
    assert find_isomorphism(L, reparsed) is not None


def test_parse_diagnostics():
    with pytest.raises(TableFormatError, match="expected header"):
        parse_loop_table("loop-table v2 2\n0 1\n1 0\n")
    with pytest.raises(TableFormatError, match="expected 2 rows"):
        parse_loop_table("loop-table v1 2\n0 1\n")
    with pytest.raises(TableFormatError, match="non-integer"):
        parse_loop_table("loop-table v1 2\n0 1\n1 x\n")
    with pytest.raises(TableFormatError, match="3 entries"):
        parse_loop_table("loop-table v1 2\n0 1 1\n1 0\n")


def test_relabel_is_an_isomorphism():
    rng = random.Random(7)
    shuffled, perm = random_relabel(O16, rng)
    assert shuffled.size == 16
    assert verify_isomorphism(O16, shuffled, perm)
    assert sorted(shuffled.element_orders()) == sorted(O16.element_orders())


def test_verify_isomorphism_accepts_and_rejects():
    # indices: 0 +1, 1 i, 2 j, 3 k, then the negatives in the same order
    assert verify_isomorphism(Q8, Q8, list(range(8)))
    swap_only = [0, 2, 1, 3, 4, 6, 5, 7]
    assert not verify_isomorphism(Q8, Q8, swap_only)  # ij = k but ji = -k
    swap_and_flip = [0, 2, 1, 7, 4, 6, 5, 3]
    assert verify_isomorphism(Q8, Q8, swap_and_flip)
    assert not verify_isomorphism(Q8, SPLIT, list(range(8)))


def test_find_isomorphism_reflexive_and_undoes_relabeling():
    assert find_isomorphism(Q8, Q8) is not None
    rng = random.Random(3)
    for L in (Q8, O16):
        shuffled, _ = random_relabel(L, rng)
        w = find_isomorphism(L, shuffled)
        assert w is not None
        assert verify_isomorphism(L, shuffled, w)
        back = find_isomorphism(shuffled, L)
        assert back is not None and verify_isomorphism(shuffled, L, back)


def test_find_isomorphism_separates_non_isomorphic_loops():
    assert find_isomorphism(Q8, SPLIT) is None
    assert find_isomorphism(Q8, O16) is None  # size mismatch
    c8 = AbstractLoop([[(i + j) % 8 for j in range(8)] for i in range(8)])
    assert find_isomorphism(Q8, c8) is None


def test_isomorphisms_respect_the_center():
    rng = random.Random(11)
    shuffled, _ = random_relabel(O16, rng)
    w = find_isomorphism(O16, shuffled)
    assert w is not None
    assert fixes_center_setwise(O16, shuffled, w)


def test_find_isomorphism_size_guard():
    big = to_table(make_product(Z2, [CDLoop.all_minus_one(Z2, 4)] * 2))
    assert big.size == 512
    with pytest.raises(BudgetExceeded):
        find_isomorphism(big, big)


def test_to_table_budget():
    with pytest.raises(BudgetExceeded):
        to_table(CDLoop.all_minus_one(Z2, 3), max_elements=100)


def test_tables_compare_by_contents():
    again = to_table(CDLoop.all_minus_one(Z2, 2))
    assert again == Q8
    assert again != SPLIT
    assert np.array_equal(again.table, Q8.table)
