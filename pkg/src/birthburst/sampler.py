"""Dynamic weighted sampling over a growing set of slots.

A Fenwick (binary indexed) tree over float weights gives O(log n) draws
and O(log n) weight updates. Capacity doubles on demand; doubling only
appends zero slots and copies the root, so the stored partial sums (and
therefore every draw) depend on the insertion history alone, never on
how large the tree will eventually get.
"""

from __future__ import annotations

import random
from typing import Iterable


class WeightTree:
    def __init__(self, weights: Iterable[float] = ()):
        self._cap = 1
        self._tree = [0.0, 0.0]  # 1-indexed; slot 0 unused
        self._w: list[float] = []
        self._positive = 0
        for w in weights:
            self.append(w)

    def __len__(self) -> int:
        return len(self._w)

    @property
    def total(self) -> float:
        return self._tree[self._cap]

    def weight(self, i: int) -> float:
        return self._w[i]

    def weights(self) -> list[float]:
        return list(self._w)

    def _grow(self) -> None:
        cap = self._cap
        root = self._tree[cap]
        self._tree.extend([0.0] * cap)
        self._tree[2 * cap] = root
        self._cap = 2 * cap

    def append(self, w: float) -> int:
        if w < 0.0:
            raise ValueError(f"negative weight {w}")
        i = len(self._w)
        if i + 1 > self._cap:
            self._grow()
        self._w.append(0.0)
        self.update(i, w)
        return i

    def update(self, i: int, w: float) -> None:
        delta = w - self._w[i]
        if delta == 0.0:
            return
        if self._w[i] > 0.0:
            self._positive -= 1
        if w > 0.0:
            self._positive += 1
        self._w[i] = w
        tree = self._tree
        cap = self._cap
        j = i + 1
        while j <= cap:
            tree[j] += delta
            j += j & -j

    def find(self, target: float) -> int:
        """Smallest slot whose inclusive prefix sum exceeds ``target``."""
        tree = self._tree
        pos = 0
        step = self._cap
        while step:
            nxt = pos + step
            if nxt <= self._cap and tree[nxt] <= target:
                target -= tree[nxt]
                pos = nxt
            step >>= 1
        # Rounding can push the target past the last slot.
        return min(pos, len(self._w) - 1)

    def draw(self, rng: random.Random) -> int:
        """One slot with probability proportional to its weight."""
        total = self.total
        if not self._positive or not total > 0.0:
            raise ValueError("no slot has positive weight")
        while True:
            i = self.find(rng.random() * total)
            # Float residue in partial sums can expose a zero-weight slot.
            if self._w[i] > 0.0:
                return i

    def sample_distinct(self, count: int, rng: random.Random) -> list[int]:
        """``count`` distinct slots by successive draw-and-remove.

        Weights are restored before returning.
        """
        if count > self._positive:
            raise ValueError(
                f"cannot draw {count} distinct slots; only {self._positive} have positive weight"
            )
        picked: list[int] = []
        saved: list[float] = []
        try:
            for _ in range(count):
                i = self.draw(rng)
                picked.append(i)
                saved.append(self._w[i])
                self.update(i, 0.0)
        finally:
            for i, w in zip(picked, saved):
                self.update(i, w)
        return picked

    @property
    def eligible(self) -> int:
        return self._positive
