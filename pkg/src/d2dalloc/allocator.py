"""BS-side per-subframe allocation: round-robin priority, orthogonal CU
assignment over the players' lists, and the CU-protection allocation test.

Players and CUs are 0-indexed throughout the code; the d1/c1 labels of the
docs map to indices 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .channel import cu_sinr, db_to_linear

# A list (action) is an ordered K-tuple of distinct CU indices.
D2dList = tuple[int, ...]


@dataclass
class AllocationProfile:
    """Outcome of one subframe at the BS.

    assigned[d] is the CU granted to player d (None if its list was
    exhausted). passed[d] is the allocation-test verdict; a player whose CU
    failed the test transmits nothing that subframe but the CU stays consumed.
    """
    assigned: list[Optional[int]]
    passed: list[bool]

    def transmitting_cu(self, d: int) -> Optional[int]:
        c = self.assigned[d]
        if c is None or not self.passed[d]:
            return None
        return c


def rr_sequence(subframe_in_frame: int, n_d: int) -> list[int]:
    """Player priority order for a subframe: identity rotated left by j-1.

    subframe_in_frame is 1-based and resets every frame.
    """
    if not 1 <= subframe_in_frame <= n_d:
        raise ValueError(f"subframe index {subframe_in_frame} out of range 1..{n_d}")
    shift = subframe_in_frame - 1
    return [(shift + i) % n_d for i in range(n_d)]


def alloc_bs(lists: Sequence[D2dList], order: Sequence[int],
             test: Optional[Callable[[int, int], bool]] = None) -> AllocationProfile:
    """Orthogonal first-fit allocation over the lists, in priority order.

    Each player in `order` gets the first CU of its list not yet consumed this
    subframe; after assignment the allocation test runs (test(cu, player)),
    and on failure the player is muted while the CU remains consumed.
    """
    n_d = len(lists)
    if sorted(order) != list(range(n_d)):
        raise ValueError("order must be a permutation of the players")
    for lst in lists:
        if len(set(lst)) != len(lst):
            raise ValueError(f"list {lst} has repeated CU entries")
    assigned: list[Optional[int]] = [None] * n_d
    passed = [False] * n_d
    taken: set[int] = set()
    for d in order:
        for c in lists[d]:
            if c not in taken:
                assigned[d] = c
                taken.add(c)
                passed[d] = test(c, d) if test is not None else True
                break
    return AllocationProfile(assigned, passed)


def allocation_test(p_c_mw: float, g_cb: float, p_d_mw: float, g_db: float,
                    n0_mw: float, gamma_tgt_db: float) -> bool:
    """CU protection check, using only the BS-known gains g_cb and g_db.

    Passes at equality (failure is the strict SINR < gamma_tgt case).
    """
    return cu_sinr(p_c_mw, g_cb, p_d_mw, g_db, n0_mw) >= db_to_linear(gamma_tgt_db)
