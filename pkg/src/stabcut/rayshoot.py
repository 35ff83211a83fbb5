"""Deletable orthogonal ray shooting among disjoint parallel segments.

The structure is a static segment tree over the cross coordinate.  Every
node keeps the segments assigned to it sorted by line coordinate, plus two
union-find arrays that skip deleted entries in either direction.  A query
walks one root-to-leaf path and does a binary search per node, so queries
and deletions cost O(log^2 n).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Hashable, Iterable

DIRECTIONS = {"+x": (1, 0), "-x": (-1, 0), "+y": (0, 1), "-y": (0, -1)}


def _find(parent: list[int], i: int) -> int:
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        parent[i], i = root, parent[i]
    return root


class OrthogonalRayShooter:
    """Ray shooting structure over closed segments of one orientation.

    ``orientation`` is ``"V"`` (segments at fixed x, spanning y) or ``"H"``.
    Segments are given as ``(sid, line, lo, hi)`` with ``lo <= hi``; they are
    treated as closed.  Callers storing open segments shrink them first.
    """

    def __init__(self, orientation: str, segments: Iterable[tuple[Hashable, int, int, int]] = ()):
        if orientation not in ("H", "V"):
            raise ValueError(f"orientation must be H or V, got {orientation!r}")
        self.orientation = orientation
        self._segs: dict[Hashable, tuple[int, int, int]] = {}
        for sid, line, lo, hi in segments:
            if sid in self._segs:
                raise ValueError(f"duplicate segment id {sid!r}")
            if lo > hi:
                raise ValueError(f"segment {sid!r} has lo > hi")
            self._segs[sid] = (line, lo, hi)
        self._check_disjoint()
        self._deleted: set = set()
        self._build()

    def _check_disjoint(self) -> None:
        by_line: dict[int, list[tuple[int, int, Hashable]]] = {}
        for sid, (line, lo, hi) in self._segs.items():
            by_line.setdefault(line, []).append((lo, hi, sid))
        for line, items in by_line.items():
            items.sort()
            for (lo1, hi1, s1), (lo2, hi2, s2) in zip(items, items[1:]):
                if lo2 <= hi1:
                    raise ValueError(f"segments {s1!r} and {s2!r} intersect on line {line}")

    def _build(self) -> None:
        coords = sorted({c for _, lo, hi in self._segs.values() for c in (lo, hi)})
        self._coords = coords
        nleaves = max(1, 2 * len(coords) - 1)
        size = 1
        while size < nleaves:
            size *= 2
        self._size = size
        buckets: dict[int, list[tuple[int, Hashable]]] = {}
        for sid, (line, lo, hi) in self._segs.items():
            left = 2 * bisect_left(coords, lo) + size
            right = 2 * bisect_left(coords, hi) + size + 1
            while left < right:
                if left & 1:
                    buckets.setdefault(left, []).append((line, sid))
                    left += 1
                if right & 1:
                    right -= 1
                    buckets.setdefault(right, []).append((line, sid))
                left >>= 1
                right >>= 1
        self._lines: dict[int, list[int]] = {}
        self._ids: dict[int, list[Hashable]] = {}
        self._next: dict[int, list[int]] = {}
        self._prev: dict[int, list[int]] = {}
        self._where: dict[Hashable, list[tuple[int, int]]] = {sid: [] for sid in self._segs}
        for node, entries in buckets.items():
            entries.sort(key=lambda e: e[0])
            m = len(entries)
            self._lines[node] = [e[0] for e in entries]
            self._ids[node] = [e[1] for e in entries]
            # index m is the "past the end" sentinel; prev is shifted by one
            self._next[node] = list(range(m + 1))
            self._prev[node] = list(range(m + 1))
            for idx, (_, sid) in enumerate(entries):
                self._where[sid].append((node, idx))

    def __len__(self) -> int:
        return len(self._segs) - len(self._deleted)

    def __contains__(self, sid: Hashable) -> bool:
        return sid in self._segs and sid not in self._deleted

    def segment(self, sid: Hashable) -> tuple[int, int, int]:
        """Return ``(line, lo, hi)`` of a stored segment."""
        return self._segs[sid]

    def _leaf(self, c: int) -> int | None:
        coords = self._coords
        i = bisect_left(coords, c)
        if i < len(coords) and coords[i] == c:
            return 2 * i
        if i == 0 or i == len(coords):
            return None
        return 2 * i - 1

    def query(self, start: tuple[int, int], direction: str) -> Hashable | None:
        """First undeleted segment hit by the ray, excluding the start point."""
        dx, dy = DIRECTIONS[direction]
        if (self.orientation == "V") != (dx != 0):
            raise ValueError(f"ray {direction} is parallel to stored {self.orientation} segments")
        along, cross = (start[0], start[1]) if dx else (start[1], start[0])
        step = dx or dy
        leaf = self._leaf(cross)
        if leaf is None:
            return None
        node = leaf + self._size
        best_line = None
        best = None
        while node:
            lines = self._lines.get(node)
            if lines is not None:
                if step > 0:
                    j = _find(self._next[node], bisect_right(lines, along))
                    if j < len(lines) and (best_line is None or lines[j] < best_line):
                        best_line, best = lines[j], self._ids[node][j]
                else:
                    j = _find(self._prev[node], bisect_left(lines, along)) - 1
                    if j >= 0 and (best_line is None or lines[j] > best_line):
                        best_line, best = lines[j], self._ids[node][j]
            node >>= 1
        return best

    def delete(self, sid: Hashable) -> None:
        if sid not in self._segs:
            raise KeyError(f"unknown segment {sid!r}")
        if sid in self._deleted:
            raise ValueError(f"segment {sid!r} already deleted")
        self._deleted.add(sid)
        for node, idx in self._where[sid]:
            self._next[node][idx] = idx + 1
            self._prev[node][idx + 1] = idx


class LinearScanShooter:
    """Brute-force reference with the same interface, used as a test oracle."""

    def __init__(self, orientation: str, segments: Iterable[tuple[Hashable, int, int, int]] = ()):
        self.orientation = orientation
        self._segs = {sid: (line, lo, hi) for sid, line, lo, hi in segments}
        self._deleted: set = set()

    def query(self, start: tuple[int, int], direction: str) -> Hashable | None:
        dx, dy = DIRECTIONS[direction]
        along, cross = (start[0], start[1]) if dx else (start[1], start[0])
        step = dx or dy
        best = None
        for sid, (line, lo, hi) in self._segs.items():
            if sid in self._deleted or not lo <= cross <= hi:
                continue
            dist = (line - along) * step
            if dist > 0 and (best is None or dist < best[0]):
                best = (dist, sid)
        return None if best is None else best[1]

    def delete(self, sid: Hashable) -> None:
        if sid in self._deleted:
            raise ValueError(f"segment {sid!r} already deleted")
        self._deleted.add(sid)


def fuzz(ops: int, seed: int, nsegs: int = 200, span: int = 60) -> dict:
    """Replay random interleaved queries and deletions against the oracle."""
    import random

    rng = random.Random(seed)
    orientation = rng.choice("HV")
    segs = []
    taken: dict[int, list[tuple[int, int]]] = {}
    sid = 0
    attempts = 0
    while len(segs) < nsegs and attempts < nsegs * 20:
        attempts += 1
        line = rng.randint(-span, span)
        lo = rng.randint(-span, span)
        hi = lo + rng.randint(0, span // 3)
        if any(not (hi < a or lo > b) for a, b in taken.get(line, [])):
            continue
        taken.setdefault(line, []).append((lo, hi))
        segs.append((sid, line, lo, hi))
        sid += 1
    fast = OrthogonalRayShooter(orientation, segs)
    slow = LinearScanShooter(orientation, segs)
    alive = [s[0] for s in segs]
    dirs = ["+x", "-x"] if orientation == "V" else ["+y", "-y"]
    mismatches = 0
    queries = deletes = 0
    for _ in range(ops):
        if alive and rng.random() < 0.2:
            victim = alive.pop(rng.randrange(len(alive)))
            fast.delete(victim)
            slow.delete(victim)
            deletes += 1
        else:
            start = (rng.randint(-span - 2, span + 2), rng.randint(-span - 2, span + 2))
            d = rng.choice(dirs)
            queries += 1
            if fast.query(start, d) != slow.query(start, d):
                mismatches += 1
    return {"ops": ops, "seed": seed, "queries": queries, "deletes": deletes, "mismatches": mismatches}
