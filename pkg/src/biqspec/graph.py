"""Bipartite 2-graphs and the biquadratic tensors built from them.

A bipartite 2-graph has vertex sets S = {0..m-1} and T = {0..n-1}; every
edge joins an unordered pair of S-vertices with an unordered pair of
T-vertices and carries a nonnegative weight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .connectivity import split_off_component
from .errors import DimensionError
from .tensor import BiquadraticTensor


@dataclass(frozen=True)
class Edge:
    s_pair: tuple[int, int]
    t_pair: tuple[int, int]
    weight: float = 1.0

    def __post_init__(self):
        i1, i2 = (int(v) for v in self.s_pair)
        j1, j2 = (int(v) for v in self.t_pair)
        if i1 == i2 or j1 == j2:
            raise ValueError(f"edge vertices must be distinct within each side: {self.s_pair}, {self.t_pair}")
        if not self.weight >= 0 or not np.isfinite(self.weight):
            raise ValueError(f"edge weight must be finite and nonnegative, got {self.weight}")
        object.__setattr__(self, "s_pair", (min(i1, i2), max(i1, i2)))
        object.__setattr__(self, "t_pair", (min(j1, j2), max(j1, j2)))
        object.__setattr__(self, "weight", float(self.weight))

    @property
    def key(self):
        return self.s_pair, self.t_pair


@dataclass(frozen=True)
class BipartiteTwoGraph:
    m: int
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DimensionError("vertex sets must be nonempty")
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        seen = set()
        for e in edges:
            if max(e.s_pair) >= self.m or max(e.t_pair) >= self.n or min(e.s_pair + e.t_pair) < 0:
                raise DimensionError(f"edge {e.key} out of range for m={self.m}, n={self.n}")
            if e.key in seen:
                raise ValueError(f"duplicate edge {e.key}")
            seen.add(e.key)
        object.__setattr__(self, "edges", edges)

    def active_edges(self):
        """Edges with positive weight; zero-weight edges count as absent."""
        return [e for e in self.edges if e.weight > 0]


def random_graph(m: int, n: int, p: float, rng: np.random.Generator, weighted: bool = False) -> BipartiteTwoGraph:
    """Each of the C(m,2)*C(n,2) possible edges is present independently with probability p."""
    edges = []
    for s in itertools.combinations(range(m), 2):
        for t in itertools.combinations(range(n), 2):
            if rng.random() < p:
                w = rng.uniform(0.0, 1.0) if weighted else 1.0
                edges.append(Edge(s, t, w))
    return BipartiteTwoGraph(m, n, tuple(edges))


def adjacency_tensor(G: BipartiteTwoGraph) -> BiquadraticTensor:
    """Symmetric nonnegative tensor with four entries per edge.

    Edge ({i1,i2},{j1,j2}) with weight w sets a[i1,j1,i2,j2], a[i1,j2,i2,j1],
    a[i2,j1,i1,j2] and a[i2,j2,i1,j1] to w.
    """
    a = np.zeros((G.m, G.n, G.m, G.n))
    for e in G.edges:
        (i1, i2), (j1, j2) = e.s_pair, e.t_pair
        a[i1, j1, i2, j2] = a[i1, j2, i2, j1] = a[i2, j1, i1, j2] = a[i2, j2, i1, j1] = e.weight
    return BiquadraticTensor(a)


def degree_tensors(G: BipartiteTwoGraph):
    """Return (D0, Dx, Dy) built from the adjacency tensor."""
    a = adjacency_tensor(G).entries
    m, n = G.m, G.n
    d0 = np.zeros_like(a)
    dx = np.zeros_like(a)
    dy = np.zeros_like(a)
    full = a.sum(axis=(2, 3))   # [i1, j1]
    over_i = a.sum(axis=2)      # [i1, j1, j2]
    over_j = a.sum(axis=3)      # [i1, j1, i2]
    for i in range(m):
        for j in range(n):
            d0[i, j, i, j] = full[i, j]
        dx[i, :, i, :] = over_i[i]
    for j in range(n):
        dy[:, j, :, j] = over_j[:, j, :]
    return BiquadraticTensor(d0), BiquadraticTensor(dx), BiquadraticTensor(dy)


def signless_laplacian(G: BipartiteTwoGraph) -> BiquadraticTensor:
    d0, dx, dy = degree_tensors(G)
    return d0 + dx + dy + adjacency_tensor(G)


def laplacian(G: BipartiteTwoGraph) -> BiquadraticTensor:
    d0, dx, dy = degree_tensors(G)
    return d0 - dx - dy + adjacency_tensor(G)


class SeparabilityWitness(NamedTuple):
    """Opposite-side pair plus one block of the separated partition (0-based)."""

    pair: tuple[int, int]
    part: frozenset[int]


def _require_two_by_two(G: BipartiteTwoGraph) -> None:
    if G.m < 2 or G.n < 2:
        raise DimensionError(f"separability needs m, n >= 2 (got m={G.m}, n={G.n})")


def is_T_separable(G: BipartiteTwoGraph):
    """Whether S splits into two blocks with no edge across them for some pair {j1, j2} of T.

    Returns ``(flag, witness)``; the witness is None when the flag is False.
    """
    _require_two_by_two(G)
    by_t = {}
    for e in G.active_edges():
        by_t.setdefault(e.t_pair, []).append(e.s_pair)
    for t_pair in itertools.combinations(range(G.n), 2):
        part = split_off_component(G.m, by_t.get(t_pair, ()))
        if part is not None:
            return True, SeparabilityWitness(t_pair, part)
    return False, None


def is_S_separable(G: BipartiteTwoGraph):
    """Mirror of :func:`is_T_separable`: T splits for some pair {i1, i2} of S."""
    _require_two_by_two(G)
    by_s = {}
    for e in G.active_edges():
        by_s.setdefault(e.s_pair, []).append(e.t_pair)
    for s_pair in itertools.combinations(range(G.m), 2):
        part = split_off_component(G.n, by_s.get(s_pair, ()))
        if part is not None:
            return True, SeparabilityWitness(s_pair, part)
    return False, None


def is_bi_separable(G: BipartiteTwoGraph) -> bool:
    return is_T_separable(G)[0] or is_S_separable(G)[0]


def separability_report(G: BipartiteTwoGraph) -> dict:
    """JSON-ready summary with 1-based witnesses."""
    t_flag, t_wit = is_T_separable(G)
    s_flag, s_wit = is_S_separable(G)

    def external(w):
        if w is None:
            return None
        return {"pair": [v + 1 for v in w.pair], "part": sorted(v + 1 for v in w.part)}

    return {
        "T_separable": t_flag,
        "S_separable": s_flag,
        "bi_separable": t_flag or s_flag,
        "witnesses": {"T_separable": external(t_wit), "S_separable": external(s_wit)},
    }
