"""Round-robin sequencing and orthogonal first-fit allocation tests."""

import numpy as np
import pytest

from d2dalloc.allocator import alloc_bs, allocation_test, rr_sequence


def test_rr_sequence_rotation():
    assert rr_sequence(1, 3) == [0, 1, 2]
    assert rr_sequence(2, 3) == [1, 2, 0]
    assert rr_sequence(3, 3) == [2, 0, 1]
    assert rr_sequence(1, 10) == list(range(10))
    with pytest.raises(ValueError):
        rr_sequence(0, 3)
    with pytest.raises(ValueError):
        rr_sequence(4, 3)


def test_alloc_bs_distinct_heads():
    # heads c5, c1, c3 (0-indexed 4, 0, 2) go straight through
    lists = [(4, 1), (0, 1), (2, 1)]
    profile = alloc_bs(lists, [0, 1, 2])
    assert profile.assigned == [4, 0, 2]
    assert profile.passed == [True, True, True]


def test_alloc_bs_orthogonality_on_identical_lists():
    lists = [(0,), (0,), (0,)]
    profile = alloc_bs(lists, [0, 1, 2])
    assert profile.assigned == [0, None, None]
    assert profile.transmitting_cu(1) is None


def test_alloc_bs_priority_order():
    # second player first in the order takes the shared head
    lists = [(0, 1), (0, 1)]
    profile = alloc_bs(lists, [1, 0])
    assert profile.assigned == [1, 0]


def test_alloc_bs_failed_test_consumes_cu():
    lists = [(0, 1), (0, 1)]
    deny = {(0, 0)}  # cu 0 fails for player 0

    def test_fn(cu, player):
        return (cu, player) not in deny

    profile = alloc_bs(lists, [0, 1], test=test_fn)
    # player 0 muted, but cu 0 stays consumed so player 1 falls to cu 1
    assert profile.assigned == [0, 1]
    assert profile.passed == [False, True]
    assert profile.transmitting_cu(0) is None
    assert profile.transmitting_cu(1) == 1


def test_alloc_bs_input_validation():
    with pytest.raises(ValueError):
        alloc_bs([(0,), (1,)], [0, 0])
    with pytest.raises(ValueError):
        alloc_bs([(0, 0), (1,)], [0, 1])


def test_alloc_bs_orthogonality_random_trials():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        n_d = int(rng.integers(2, 7))
        n_c = int(rng.integers(n_d, n_d + 4))
        k = int(rng.integers(1, min(n_c, 3) + 1))
        lists = [tuple(rng.permutation(n_c)[:k]) for _ in range(n_d)]
        order = list(rng.permutation(n_d))
        profile = alloc_bs(lists, order)
        assigned = [c for c in profile.assigned if c is not None]
        assert len(assigned) == len(set(assigned))
        # the highest-priority player always gets the head of its list
        assert profile.assigned[order[0]] == lists[order[0]][0]


def test_alloc_bs_deterministic():
    lists = [(2, 0, 1), (0, 1, 2), (1, 2, 0)]
    order = [2, 0, 1]
    a = alloc_bs(lists, order)
    b = alloc_bs(lists, order)
    assert a.assigned == b.assigned and a.passed == b.passed


def test_allocation_test_threshold():
    # passes at exact equality: SINR 1.0 against 0 dB
    assert allocation_test(1.0, 1.0, 0.0, 1.0, 1.0, 0.0)
    # concept geometry fails a 0 dB target by a wide margin
    assert not allocation_test(10.0, 4e-4, 10.0, 1e-4, 0.1, 0.0)
    # interference-free high SNR passes
    assert allocation_test(250.0, 1e-4, 1e-12, 1e-12, 1e-8, 0.0)
