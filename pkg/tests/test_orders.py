import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from kishon.orders import (
    BEGIN,
    END,
    Precedence,
    all_strict_partial_orders,
    chain_actions,
    enumerate_two_chain_orders,
    induced_two_plus_two,
    interleavings,
    is_russell_wiener,
    is_strict_partial_order,
    order_from_action_sequence,
    realize_intervals,
    russell_wiener_violation,
)

A, B, C, D = range(4)
TWO_PLUS_TWO = Precedence(4, frozenset({(A, B), (C, D)}))


def test_empty_relation_is_a_partial_order():
    assert is_strict_partial_order(Precedence(4, frozenset()))


def test_missing_transitive_pair():
    assert not is_strict_partial_order(Precedence(3, frozenset({(0, 1), (1, 2)})))


def test_cycle_is_not_a_strict_order():
    assert not is_strict_partial_order(Precedence(2, frozenset({(0, 1), (1, 0)})))
    with pytest.raises(ValueError):
        Precedence.closed(2, [(0, 1), (1, 0)])


def test_closed_constructor_takes_closure():
    p = Precedence.closed(3, [(0, 1), (1, 2)])
    assert p == Precedence.chain(3)


@pytest.mark.parametrize("n", range(1, 8))
def test_chains_are_interval_orders(n):
    assert is_russell_wiener(Precedence.chain(n))


def test_two_plus_two_is_the_forbidden_pattern():
    assert not is_russell_wiener(TWO_PLUS_TWO)
    a, b, c, d = russell_wiener_violation(TWO_PLUS_TWO)
    p = TWO_PLUS_TWO
    assert p.precedes(a, b) and p.precedes(c, d) and not p.precedes(c, b) and not p.precedes(a, d)
    assert induced_two_plus_two(TWO_PLUS_TWO) is not None


def test_russell_wiener_rejects_non_orders():
    with pytest.raises(ValueError):
        is_russell_wiener(Precedence(3, frozenset({(0, 1), (1, 2)})))


def test_brute_force_poset_counts():
    # labeled posets: 1, 1, 3, 19, 219, 4231
    assert [sum(1 for _ in all_strict_partial_orders(n)) for n in range(6)] == [1, 1, 3, 19, 219, 4231]


@pytest.mark.parametrize("n", range(0, 7))
def test_russell_wiener_iff_no_induced_two_plus_two(n):
    for p in all_strict_partial_orders(n):
        assert is_strict_partial_order(p)
        assert is_russell_wiener(p) == (induced_two_plus_two(p) is None)


# -- action sequences --------------------------------------------------------


def test_disjoint_intervals():
    p = order_from_action_sequence([(BEGIN, 0), (END, 0), (BEGIN, 1), (END, 1)])
    assert p.pairs == {(0, 1)}


def test_overlapping_intervals():
    p = order_from_action_sequence([(BEGIN, 0), (BEGIN, 1), (END, 0), (END, 1)])
    assert p.pairs == frozenset()


def test_sequential_composition_gives_full_chain():
    seq = chain_actions(range(4)) + chain_actions(range(4, 8))
    assert order_from_action_sequence(seq) == Precedence.chain(8)


@pytest.mark.parametrize(
    "seq",
    [
        [(BEGIN, 0), (BEGIN, 0), (END, 0)],
        [(END, 0), (BEGIN, 0)],
        [(BEGIN, 0)],
        [(BEGIN, 0), (END, 0), (END, 0)],
        [("middle", 0)],
    ],
)
def test_malformed_sequences(seq):
    with pytest.raises(ValueError):
        order_from_action_sequence(seq)


def test_interleaving_count():
    a = chain_actions(range(4))
    b = chain_actions(range(4, 8))
    assert sum(1 for _ in interleavings(a, b)) == comb(16, 8) == 12870


def test_every_interleaving_yields_an_interval_order():
    a = chain_actions(range(4))
    b = chain_actions(range(4, 8))
    for seq in interleavings(a, b):
        p = order_from_action_sequence(seq, 8)
        assert is_strict_partial_order(p)
        assert is_russell_wiener(p)


@settings(max_examples=200)
@given(st.lists(st.integers(0, 5), min_size=0, max_size=12).map(lambda xs: xs))
def test_random_action_sequences_yield_interval_orders(events):
    # lay each event's begin at its first occurrence and end at its second (or at the tail)
    seq = []
    opened = []
    for e in events:
        if e in opened:
            continue
        if e in [x for _, x in seq]:
            seq.append((END, e))
            opened.append(e)
        else:
            seq.append((BEGIN, e))
    live = [e for k, e in seq if k == BEGIN and (END, e) not in seq]
    seq += [(END, e) for e in live]
    labels = sorted({e for _, e in seq})
    relabel = {e: i for i, e in enumerate(labels)}
    seq = [(k, relabel[e]) for k, e in seq]
    p = order_from_action_sequence(seq, len(labels))
    assert is_strict_partial_order(p)
    assert is_russell_wiener(p)


# -- two-chain enumeration ---------------------------------------------------


def test_single_event_chains():
    found = enumerate_two_chain_orders(1)
    assert {p.pairs for p in found} == {frozenset({(0, 1)}), frozenset({(1, 0)}), frozenset()}


def _extends_chains(p, k):
    return all(p.precedes(i, j) for i in range(k) for j in range(i + 1, k)) and all(
        p.precedes(k + i, k + j) for i in range(k) for j in range(i + 1, k)
    )


@pytest.mark.parametrize("k", [1, 2, 3])
def test_two_chain_orders_match_brute_force(k):
    # oracle: every labeled poset on 2k points that extends both chains and is an interval order
    expected = {
        p.canonical()
        for p in all_strict_partial_orders(2 * k)
        if _extends_chains(p, k) and induced_two_plus_two(p) is None
    }
    assert {p.canonical() for p in enumerate_two_chain_orders(k)} == expected


def test_four_chain_golden_count():
    # 12870 interleavings collapse to this many distinct orders (artifact-generated golden value)
    found = enumerate_two_chain_orders(4)
    assert len(found) == 1107
    assert len({p.canonical() for p in found}) == 1107
    assert all(_extends_chains(p, 4) for p in found)


def test_invalid_chain_length():
    with pytest.raises(ValueError):
        enumerate_two_chain_orders(0)


# -- interval realization ----------------------------------------------------


def test_chain_realization():
    iv = realize_intervals(Precedence.chain(3))
    assert (iv.left, iv.right) == ((0, 1, 2), (0, 1, 2))


def test_concurrent_pair_shares_an_instant():
    iv = realize_intervals(Precedence(2, frozenset()))
    assert max(iv.left) <= min(iv.right)


def test_realization_rejects_two_plus_two():
    with pytest.raises(ValueError):
        realize_intervals(TWO_PLUS_TWO)


def test_round_trip_on_every_two_chain_order():
    for p in enumerate_two_chain_orders(4):
        iv = realize_intervals(p)
        assert all(0 <= l <= r for l, r in zip(iv.left, iv.right))
        assert iv.precedence() == p


@pytest.mark.parametrize("n", range(0, 6))
def test_round_trip_on_all_small_interval_orders(n):
    for p in all_strict_partial_orders(n):
        if is_russell_wiener(p):
            assert realize_intervals(p).precedence() == p


def test_json_pairs_sorted():
    p = Precedence(3, frozenset({(2, 0), (0, 1), (2, 1)}))
    assert p.to_json() == [[0, 1], [2, 0], [2, 1]]
    assert p.to_json(["x", "y", "z"]) == [["x", "y"], ["z", "x"], ["z", "y"]]
