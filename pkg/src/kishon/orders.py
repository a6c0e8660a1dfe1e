"""Finite strict partial orders and interval orders.

Elements are the integers ``0..n-1``. A :class:`Precedence` is a plain
relation; use :meth:`Precedence.closed` when the transitive closure should be
taken (and irreflexivity asserted) at construction time.

Interval orders are the orders with the Russell-Wiener property: whenever
``a<b``, ``c<d`` and not ``c<b``, also ``a<d``. For partial orders this is
the same as having no induced 2+2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

BEGIN = "begin"
END = "end"


@dataclass(frozen=True)
class Precedence:
    n: int
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        for i, j in self.pairs:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"pair {(i, j)} outside 0..{self.n - 1}")

    @classmethod
    def closed(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Precedence":
        m = np.zeros((n, n), dtype=bool)
        for i, j in pairs:
            m[i, j] = True
        m = _transitive_closure(m)
        if m.diagonal().any():
            raise ValueError("relation has a cycle; its closure is not irreflexive")
        return cls.from_matrix(m)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "Precedence":
        ii, jj = np.nonzero(m)
        return cls(int(m.shape[0]), frozenset(zip(ii.tolist(), jj.tolist())))

    @classmethod
    def chain(cls, n: int) -> "Precedence":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.pairs:
            m[i, j] = True
        m.setflags(write=False)
        return m

    def precedes(self, i: int, j: int) -> bool:
        return (i, j) in self.pairs

    def concurrent(self, i: int, j: int) -> bool:
        """Incomparable; every element is concurrent with itself."""
        return (i, j) not in self.pairs and (j, i) not in self.pairs

    def canonical(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.pairs))

    def to_json(self, labels: Sequence[str] | None = None) -> list[list]:
        if labels is None:
            return [list(p) for p in self.canonical()]
        return [[labels[i], labels[j]] for i, j in self.canonical()]


def _transitive_closure(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    for k in range(m.shape[0]):
        m |= np.outer(m[:, k], m[k, :])
    return m


def is_strict_partial_order(p: Precedence) -> bool:
    m = p.matrix
    if m.diagonal().any():
        return False
    # transitive iff m∘m ⊆ m
    comp = (m.astype(np.int32) @ m.astype(np.int32)) > 0
    return not (comp & ~m).any()


def russell_wiener_violation(p: Precedence) -> tuple[int, int, int, int] | None:
    """Return some ``(a, b, c, d)`` with a<b, c<d, not c<b and not a<d, or None."""
    m = p.matrix.astype(np.int32)
    nm = 1 - m
    # reach[a, c]: some b with a<b and not c<b
    reach = (m @ nm.T) > 0
    bad = ((reach.astype(np.int32) @ m) > 0) & (nm > 0)
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return None
    a, d = (int(x) for x in hits[0])
    for c in range(p.n):
        if m[c, d] and reach[a, c]:
            for b in range(p.n):
                if m[a, b] and not m[c, b]:
                    return a, b, c, d
    raise AssertionError("unreachable")


def is_russell_wiener(p: Precedence) -> bool:
    if not is_strict_partial_order(p):
        raise ValueError("not a strict partial order")
    return russell_wiener_violation(p) is None


def induced_two_plus_two(p: Precedence) -> tuple[int, int, int, int] | None:
    """Brute force: a<b and c<d on four distinct elements with every cross pair incomparable."""
    comparable = sorted(p.pairs)
    for a, b in comparable:
        for c, d in comparable:
            if len({a, b, c, d}) == 4 and all(p.concurrent(x, y) for x in (a, b) for y in (c, d)):
                return a, b, c, d
    return None


# --------------------------------------------------------------------------
# Begin/end action sequences
# --------------------------------------------------------------------------


def order_from_action_sequence(seq: Sequence[tuple[str, int]], m: int | None = None) -> Precedence:
    """Precedence of events laid out by a begin/end action string.

    ``x`` precedes ``y`` iff ``x`` ends before ``y`` begins.
    """
    if m is None:
        m = 1 + max((e for _, e in seq), default=-1)
    begin = [-1] * m
    end = [-1] * m
    for pos, (kind, e) in enumerate(seq):
        if not 0 <= e < m:
            raise ValueError(f"event {e} outside 0..{m - 1}")
        if kind == BEGIN:
            if begin[e] >= 0:
                raise ValueError(f"event {e} begins twice")
            begin[e] = pos
        elif kind == END:
            if end[e] >= 0:
                raise ValueError(f"event {e} ends twice")
            if begin[e] < 0:
                raise ValueError(f"event {e} ends before it begins")
            end[e] = pos
        else:
            raise ValueError(f"unknown action kind {kind!r}")
    for e in range(m):
        if begin[e] < 0 or end[e] < 0:
            raise ValueError(f"event {e} lacks a begin or an end")
    return Precedence(m, frozenset((x, y) for x in range(m) for y in range(m) if end[x] < begin[y]))


def chain_actions(events: Sequence[int]) -> list[tuple[str, int]]:
    return [(kind, e) for e in events for kind in (BEGIN, END)]


def interleavings(left: Sequence, right: Sequence) -> Iterator[list]:
    """All shuffles of two sequences preserving each one's internal order."""
    n, m = len(left), len(right)
    for slots in itertools.combinations(range(n + m), n):
        out = []
        li = ri = 0
        chosen = set(slots)
        for k in range(n + m):
            if k in chosen:
                out.append(left[li])
                li += 1
            else:
                out.append(right[ri])
                ri += 1
        yield out


def enumerate_two_chain_orders(k: int) -> tuple[Precedence, ...]:
    """Every interval order on ``a_1..a_k`` (0..k-1) and ``b_1..b_k`` (k..2k-1)
    extending both chains, sorted by canonical pair list."""
    if k < 1:
        raise ValueError("chain length must be >= 1")
    a = chain_actions(range(k))
    b = chain_actions(range(k, 2 * k))
    seen = {}
    for seq in interleavings(a, b):
        p = order_from_action_sequence(seq, 2 * k)
        seen.setdefault(p.canonical(), p)
    return tuple(seen[key] for key in sorted(seen))


# --------------------------------------------------------------------------
# Interval realization
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalRealization:
    left: tuple[int, ...]
    right: tuple[int, ...]

    def precedence(self) -> Precedence:
        n = len(self.left)
        return Precedence(
            n, frozenset((x, y) for x in range(n) for y in range(n) if self.right[x] < self.left[y])
        )


def realize_intervals(p: Precedence) -> IntervalRealization:
    """Integer closed intervals with ``x<y`` iff ``right(x) < left(y)``.

    Predecessor sets of an interval order are nested; ``left`` is the rank of
    an element's predecessor set, ``right`` is one less than the rank of the
    first predecessor set containing it.
    """
    if not is_russell_wiener(p):
        raise ValueError("not an interval order; no interval realization exists")
    m = p.matrix
    preds = [frozenset(np.nonzero(m[:, y])[0].tolist()) for y in range(p.n)]
    levels = sorted(set(preds), key=len)
    rank = {s: i for i, s in enumerate(levels)}
    left = tuple(rank[preds[y]] for y in range(p.n))
    right = []
    for x in range(p.n):
        first = next((i for i, s in enumerate(levels) if x in s), len(levels))
        right.append(first - 1)
    return IntervalRealization(left, tuple(right))


# --------------------------------------------------------------------------
# Brute-force generation of all labeled strict partial orders
# --------------------------------------------------------------------------


def all_strict_partial_orders(n: int) -> Iterator[Precedence]:
    """Every strict partial order on ``0..n-1``, each exactly once.

    Built by adding element ``k`` to each order on ``0..k-1`` with a down-closed
    set ``D`` below it and an up-closed set ``U`` above it, where every member
    of ``D`` already precedes every member of ``U``.
    """
    for down, up in _posets(n):
        pairs = frozenset((i, j) for j in range(n) for i in range(n) if down[j] >> i & 1)
        yield Precedence(n, pairs)


def _posets(n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    # each poset as bitmasks: down[j] = strict predecessors of j, up[i] = strict successors of i
    if n == 0:
        yield (), ()
        return
    k = n - 1
    full = (1 << k) - 1
    for down, up in _posets(k):
        for dmask in range(1 << k):
            if any(dmask >> i & 1 and down[i] & ~dmask for i in range(k)):
                continue
            common = full & ~dmask
            for i in range(k):
                if dmask >> i & 1:
                    common &= up[i]
            sub = common
            while True:
                if not any(sub >> i & 1 and up[i] & ~sub for i in range(k)):
                    new_down = list(down) + [dmask]
                    new_up = list(up) + [sub]
                    for i in range(k):
                        if sub >> i & 1:
                            new_down[i] |= (1 << k) | dmask
                        if dmask >> i & 1:
                            new_up[i] |= (1 << k) | sub
                    yield tuple(new_down), tuple(new_up)
                if sub == 0:
                    break
                sub = (sub - 1) & common
