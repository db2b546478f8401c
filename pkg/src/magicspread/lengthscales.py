"""Interval-level structure of the injected magic.

Everything here reduces to one predicate, "does this contiguous interval
hold the full unit", which is monotone under enlargement.  That
monotonicity backs the per-endpoint binary searches for the minimal
intervals, the centered length, and the width of their union.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .codestate import CodeState
from .magic import IntervalMagicCache, MagicClass, subsystem_magic_alg1


class NoMagic(Exception):
    """No interval (including the full system) holds the unit: corruption."""


@dataclass(frozen=True)
class Interval:
    """Contiguous run of qubits, inclusive on both ends; a wrapping
    interval runs start..L-1 then 0..end (periodic boundaries only)."""

    start: int
    end: int
    wraps: bool = False

    def width(self, n: int) -> int:
        if self.wraps:
            return (n - self.start) + self.end + 1
        return self.end - self.start + 1

    def qubits(self, n: int) -> frozenset[int]:
        if self.wraps:
            return frozenset(range(self.start, n)) | frozenset(range(0, self.end + 1))
        return frozenset(range(self.start, self.end + 1))

    def segment(self, n: int) -> tuple[int, int]:
        """(left, right) on the doubled index line."""
        if self.wraps:
            return self.start, self.end + n
        return self.start, self.end

    def contains(self, other: "Interval", n: int) -> bool:
        if self.width(n) >= n:
            return True
        al, ar = self.segment(n)
        bl, br = other.segment(n)
        for shift in (0, n):
            if al <= bl + shift and br + shift <= ar:
                return True
        return False


@dataclass(frozen=True)
class MlmiSet:
    """Minimal intervals holding the full unit; they pairwise overlap and
    none contains another."""

    intervals: tuple[Interval, ...]
    n: int
    injection_site: int

    def widths(self) -> list[int]:
        return [iv.width(self.n) for iv in self.intervals]

    def check(self) -> None:
        ivs = self.intervals
        for i, a in enumerate(ivs):
            for j, b in enumerate(ivs):
                if i != j and a.contains(b, self.n):
                    raise ValueError(f"{a} contains {b}")
            for b in ivs[i + 1 :]:
                if not (a.qubits(self.n) & b.qubits(self.n)):
                    raise ValueError("minimal intervals must mutually overlap")


def extractable(cs: CodeState, iv: Interval) -> bool:
    """True iff the interval holds the full unit (class is FULL)."""
    return subsystem_magic_alg1(cs, iv.qubits(cs.n)) is MagicClass.FULL


def _full_predicate(cs: CodeState, periodic: bool, cache: IntervalMagicCache | None = None):
    """(left, width) -> bool with a cached fast path for straight
    intervals and the general classifier for wrapped ones."""
    if cache is None:
        cache = IntervalMagicCache(cs)
    n = cs.n

    def full(left: int, width: int) -> bool:
        if width >= n:
            return cache.is_full(0, n - 1)
        right = left + width - 1
        if right < n:
            return cache.is_full(left, right)
        if not periodic:
            return False
        qubits = frozenset(range(left, n)) | frozenset(range(0, right - n + 1))
        return subsystem_magic_alg1(cs, qubits) is MagicClass.FULL

    return full


DEBUG_LINEAR_SCAN = False  # re-verify binary searches below 25 qubits


def minimal_intervals(
    cs: CodeState, wrap_intervals: bool = False, cache: IntervalMagicCache | None = None
) -> MlmiSet:
    """All contiguous full-unit intervals minimal under containment.

    Per left endpoint, the smallest full width is found by binary search
    (the predicate is monotone in the width); candidates containing
    another candidate are then pruned.  Intervals live on the fixed qubit
    labeling 0..L-1; pass wrap_intervals=True to also enumerate seam-
    crossing arcs (doubled index line) on a periodic system.
    """
    n = cs.n
    full = _full_predicate(cs, wrap_intervals, cache)
    if not full(0, n):
        raise NoMagic("the full system does not hold the unit")
    candidates: list[Interval] = []
    for left in range(n):
        hi = n if wrap_intervals else n - left
        if not full(left, hi):
            continue
        lo = 1
        while lo < hi:
            mid = (lo + hi) // 2
            if full(left, mid):
                hi = mid
            else:
                lo = mid + 1
        if DEBUG_LINEAR_SCAN and n <= 24:
            max_w = n if wrap_intervals else n - left
            linear = next(w for w in range(1, max_w + 1) if full(left, w))
            if linear != lo:
                raise AssertionError(
                    f"binary search disagrees with linear scan at left={left}"
                )
        right = left + lo - 1
        if lo >= n:
            candidates.append(Interval(0, n - 1, False))
        elif right < n:
            candidates.append(Interval(left, right, False))
        else:
            candidates.append(Interval(left, right - n, True))
    candidates = sorted(set(candidates), key=lambda iv: (iv.start, iv.end, iv.wraps))
    kept = [
        a
        for a in candidates
        if not any(b != a and a.contains(b, n) for b in candidates)
    ]
    if not kept:  # every candidate was the whole system
        kept = [Interval(0, n - 1, False)]
    return MlmiSet(tuple(kept), n, cs.injection_site)


def lml(cs: CodeState, periodic: bool = False, cache: IntervalMagicCache | None = None) -> int:
    """Width of the smallest full-unit interval symmetric about the
    central bond (between qubits L/2-1 and L/2).

    Even widths while both ends are free; at an open boundary the clamped
    end stops and the interval keeps growing on the free side only.
    """
    n = cs.n
    full = _full_predicate(cs, periodic, cache)
    center_right = n // 2  # bond sits between center_right-1 and center_right

    def interval_for(h: int) -> tuple[int, int]:
        if periodic:
            left = (center_right - h) % n
            return left, min(2 * h, n)
        left = max(0, center_right - h)
        right = min(n - 1, center_right + h - 1)
        return left, right - left + 1

    lo, hi = 1, max(center_right, n - center_right)
    while lo < hi:
        mid = (lo + hi) // 2
        left, width = interval_for(mid)
        if full(left, width):
            hi = mid
        else:
            lo = mid + 1
    left, width = interval_for(lo)
    if not full(left, width):
        raise NoMagic("even the full system fails the centered query")
    if DEBUG_LINEAR_SCAN and n <= 24:
        linear = next(
            h for h in range(1, max(center_right, n - center_right) + 1)
            if full(*interval_for(h))
        )
        if linear != lo:
            raise AssertionError("centered binary search disagrees with linear scan")
    return width


def fleom(m: MlmiSet) -> int:
    """Width of the union of the minimal intervals.

    Mutual overlap makes the union one contiguous block (on the ring for
    wrapped sets): the system size minus the largest uncovered gap, or the
    full size when everything is covered.
    """
    if not m.intervals:
        raise ValueError("empty interval set")
    n = m.n
    covered = frozenset().union(*(iv.qubits(n) for iv in m.intervals))
    if len(covered) == n:
        return n
    uncovered = sorted(set(range(n)) - covered)
    runs = []
    run = 1
    for a, b in zip(uncovered, uncovered[1:]):
        if b == a + 1:
            run += 1
        else:
            runs.append(run)
            run = 1
    runs.append(run)
    if len(runs) > 1 and uncovered[0] == 0 and uncovered[-1] == n - 1:
        runs[0] += runs.pop()  # the gap joins across the seam
    return n - max(runs)


def typical_length(widths: Iterable[int] | Mapping[int, int]) -> int:
    """Modal interval width; ties break toward the smallest width."""
    counter = Counter(dict(widths)) if isinstance(widths, Mapping) else Counter(widths)
    if not counter:
        raise ValueError("empty width histogram")
    best = max(counter.values())
    return min(w for w, c in counter.items() if c == best)
