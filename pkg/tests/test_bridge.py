import pytest

from kishon import folk
from kishon.bridge import check_seriality_theorem, history_to_execution, serial_violations
from kishon.executions import A3, B3, RegisterSemantics, SystemExecution, enumerate_restricted_executions, trichotomy_violation
from kishon.global_sem import History, enumerate_histories, initial_state, successors, trichotomy_holds
from kishon.orders import BEGIN, END, is_russell_wiener, order_from_action_sequence
from kishon.protocol import kishon_protocol

P = kishon_protocol()


def bridged(bound):
    return [history_to_execution(h, bound).execution for h in enumerate_histories(P, bound)]


def test_image_is_a_chain():
    (h, *_) = enumerate_histories(P, 1)
    e = history_to_execution(h, 1).execution
    assert len(e.order.pairs) == 28
    assert is_russell_wiener(e.order)
    assert folk.is_system_execution(e.structure)


@pytest.mark.parametrize("bound", [1, 2])
def test_images_are_serial_executions(bound):
    serial = {e.key() for e in enumerate_restricted_executions(bound, RegisterSemantics.SERIAL)}
    images = bridged(bound)
    assert len({e.key() for e in images}) == len(images)  # distinct histories, distinct images
    assert {e.key() for e in images} <= serial


@pytest.mark.parametrize("bound", [1, 2])
def test_same_value_tuples_as_serial_executions(bound):
    serial = {e.values for e in enumerate_restricted_executions(bound, RegisterSemantics.SERIAL)}
    assert {e.values for e in bridged(bound)} == serial


def test_theorem_agrees_on_images():
    for h in enumerate_histories(P, 2):
        e = history_to_execution(h, 2).execution
        f = h.final
        assert (trichotomy_violation(e) is None) == trichotomy_holds(f["n_0"], f["n_1"], f["val_0"], f["val_1"])
        assert e.returns == (f["val_0"], f["val_1"])


def test_stale_read_is_caught():
    (h, *_) = [h for h in enumerate_histories(P, 2) if h.schedule()[:4] == ((0, 1), (0, 2), (1, 1), (1, 2))]
    e = history_to_execution(h, 2).execution
    assert serial_violations(e) == []
    vals = list(e.values)
    vals[B3] = 0  # b_3 now ignores the earlier write of R_0
    bad = serial_violations(SystemExecution(e.order, tuple(vals), 2))
    assert [v["reason"] for v in bad] == ["stale value"]


def test_concurrent_read_is_caught():
    e = history_to_execution(next(iter(enumerate_histories(P, 1))), 1).execution
    # a_3 overlaps b_2, the write of the register it reads
    overlap = order_from_action_sequence(
        [(BEGIN, 0), (END, 0), (BEGIN, 4), (END, 4), (BEGIN, 1), (END, 1), (BEGIN, 5), (BEGIN, A3),
         (END, 5), (END, A3), (BEGIN, B3), (END, B3), (BEGIN, 3), (END, 3), (BEGIN, 7), (END, 7)], 8)
    found = serial_violations(SystemExecution(overlap, e.values, 1))
    assert [(v["read"], v["reason"]) for v in found] == [("a_3", "read concurrent with write")]


def test_non_terminating_history_rejected():
    st = successors(initial_state(P), P, 1)[0]
    with pytest.raises(ValueError):
        history_to_execution(History((st,)), 1)


@pytest.mark.parametrize("bound", [1, 2, 3])
def test_seriality_theorem(bound):
    v = check_seriality_theorem(bound)
    assert v.passed, v.counterexample
    assert v.stats["histories"] == 70 * bound ** 2


def test_bridged_images_are_the_linear_serial_executions():
    # serial executions also allow overlapping events that touch no common register,
    # so only the linearly ordered ones correspond one-to-one with histories
    serial = list(enumerate_restricted_executions(1, RegisterSemantics.SERIAL))
    linear = {e.key() for e in serial if len(e.order.pairs) == 28}
    images = {e.key() for e in bridged(1)}
    assert len(serial) == 595
    assert images == linear and len(images) == 70
