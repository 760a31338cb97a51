"""Union-find over small vertex sets, used by the separability and reducibility scans."""

from __future__ import annotations


class DisjointSet:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size
        self.components = size

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.components -= 1
        return True


def split_off_component(size: int, edges) -> frozenset[int] | None:
    """Return the component of vertex 0 if the graph on ``range(size)`` is disconnected, else None.

    ``edges`` is an iterable of vertex pairs; self-loops are ignored.
    """
    ds = DisjointSet(size)
    for a, b in edges:
        if a != b:
            ds.union(a, b)
            if ds.components == 1:
                return None
    if ds.components == 1:
        return None
    root = ds.find(0)
    return frozenset(v for v in range(size) if ds.find(v) == root)
