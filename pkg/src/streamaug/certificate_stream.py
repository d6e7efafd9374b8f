"""One-pass sparse certificate for edge connectivity up to k."""

from __future__ import annotations

from .graph_core import UnionFind, WeightedEdge


class ForestStack:
    """k spanning forests filled greedily from a stream.

    An arriving edge lands in the lowest-index forest where it does not
    close a cycle and is otherwise discarded.  The kept union preserves all
    cuts of size at most k and never exceeds k*(n-1) edges.
    """

    def __init__(self, n: int, k: int):
        if n < 1:
            raise ValueError(f"need n >= 1, got {n}")
        if k < 1:
            raise ValueError(f"need k >= 1, got {k}")
        self.n = n
        self.k = k
        self._forests = [UnionFind(n) for _ in range(k)]
        self._kept: list[WeightedEdge] = []
        self._level: list[int] = []

    def insert(self, e: WeightedEdge) -> bool:
        """True if the edge was stored, False if discarded."""
        if not (0 <= e.u < self.n and 0 <= e.v < self.n):
            raise ValueError(f"edge endpoint out of range: {e}")
        if e.u == e.v:
            return False
        for i, uf in enumerate(self._forests):
            if uf.union(e.u, e.v):
                self._kept.append(e)
                self._level.append(i)
                return True
        return False

    def edges(self) -> list[WeightedEdge]:
        """Stored edges in arrival order."""
        return list(self._kept)

    def forest_edges(self, i: int) -> list[WeightedEdge]:
        return [e for e, lvl in zip(self._kept, self._level) if lvl == i]

    def __len__(self) -> int:
        return len(self._kept)
