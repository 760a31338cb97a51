"""File formats: JSON tensor documents and plain-text edge lists.

Both formats use 1-based indices; conversion to 0-based happens here and
nowhere else.

Tensor document::

    {"m": 2, "n": 2, "entries": [[i1, j1, i2, j2, value], ...], "metadata": {"name": "..."}}

Edge list: a header line ``m n`` followed by one edge per line,
``i1 i2 j1 j2 [weight]``; ``#`` starts a comment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DocumentParseError
from .graph import BipartiteTwoGraph, Edge
from .tensor import BiquadraticTensor


@dataclass
class TensorDocument:
    m: int
    n: int
    entries: list[tuple[int, int, int, int, float]] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_tensor(cls, A: BiquadraticTensor, metadata: dict[str, str] | None = None) -> "TensorDocument":
        """Nonzero entries of A in lexicographic index order."""
        a = A.entries
        entries = [
            (int(i1) + 1, int(j1) + 1, int(i2) + 1, int(j2) + 1, float(a[i1, j1, i2, j2]))
            for i1, j1, i2, j2 in zip(*np.nonzero(a))
        ]
        return cls(A.m, A.n, entries, dict(metadata or {}))

    def to_tensor(self) -> BiquadraticTensor:
        if self.m < 1 or self.n < 1:
            raise DimensionError(f"m and n must be positive, got m={self.m}, n={self.n}")
        for i1, j1, i2, j2, _ in self.entries:
            if not (1 <= i1 <= self.m and 1 <= i2 <= self.m and 1 <= j1 <= self.n and 1 <= j2 <= self.n):
                raise DimensionError(f"entry index {(i1, j1, i2, j2)} out of range for m={self.m}, n={self.n}")
        return BiquadraticTensor.from_entries(
            self.m, self.n, [(i1 - 1, j1 - 1, i2 - 1, j2 - 1, v) for i1, j1, i2, j2, v in self.entries]
        )

    def to_json(self) -> str:
        # one entry per line; float repr is the shortest string that round-trips exactly
        rows = [
            "  " + json.dumps([i1, j1, i2, j2, float(v)])
            for i1, j1, i2, j2, v in sorted(self.entries, key=lambda e: e[:4])
        ]
        entries = "[\n" + ",\n".join(rows) + "\n ]" if rows else "[]"
        metadata = json.dumps(dict(sorted(self.metadata.items())))
        return f'{{\n "m": {self.m},\n "n": {self.n},\n "entries": {entries},\n "metadata": {metadata}\n}}\n'

    @classmethod
    def from_json(cls, text: str) -> "TensorDocument":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentParseError(exc.msg, exc.lineno, exc.colno) from None
        if not isinstance(raw, dict):
            raise DocumentParseError("top level must be an object", 1, 1)
        for key in ("m", "n", "entries"):
            if key not in raw:
                raise DocumentParseError(f"missing field {key!r}", 1, 1)
        m, n = raw["m"], raw["n"]
        if not (_is_int(m) and _is_int(n)):
            raise DocumentParseError("m and n must be integers", *_locate(text, "m"))
        if not isinstance(raw["entries"], list):
            raise DocumentParseError("entries must be a list", *_locate(text, "entries"))
        entries = []
        seen = set()
        for k, rec in enumerate(raw["entries"]):
            if (
                not isinstance(rec, list)
                or len(rec) != 5
                or not all(_is_int(v) for v in rec[:4])
                or not _is_number(rec[4])
            ):
                raise DocumentParseError(f"entry {k} must be [i1, j1, i2, j2, value] with integer indices",
                                         *_locate(text, "entries"))
            key = tuple(rec[:4])
            if key in seen:
                raise DocumentParseError(f"duplicate entry {list(key)}", *_locate(text, "entries"))
            seen.add(key)
            entries.append((*key, float(rec[4])))
        metadata = raw.get("metadata", {})
        if not isinstance(metadata, dict) or not all(isinstance(v, str) for v in metadata.values()):
            raise DocumentParseError("metadata must map strings to strings", *_locate(text, "metadata"))
        return cls(m, n, entries, dict(metadata))


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and np.isfinite(v)


def _locate(text: str, key: str) -> tuple[int, int]:
    """Line and column of the first occurrence of ``"key"``, for error messages."""
    pos = text.find(f'"{key}"')
    if pos < 0:
        return 1, 1
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def parse_edge_list(text: str) -> BipartiteTwoGraph:
    header = None
    edges = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 2:
                raise DocumentParseError("header must be 'm n'", lineno, 1)
            try:
                header = (int(fields[0]), int(fields[1]))
            except ValueError:
                raise DocumentParseError("header must be two integers", lineno, 1) from None
            if header[0] < 1 or header[1] < 1:
                raise DimensionError(f"line {lineno}: m and n must be positive")
            continue
        if len(fields) not in (4, 5):
            raise DocumentParseError("expected 'i1 i2 j1 j2 [weight]'", lineno, 1)
        try:
            i1, i2, j1, j2 = (int(v) for v in fields[:4])
            weight = float(fields[4]) if len(fields) == 5 else 1.0
        except ValueError:
            raise DocumentParseError("non-numeric field", lineno, 1) from None
        m, n = header
        if not (1 <= i1 <= m and 1 <= i2 <= m and 1 <= j1 <= n and 1 <= j2 <= n):
            raise DimensionError(f"line {lineno}: edge index out of range for m={m}, n={n}")
        try:
            edge = Edge((i1 - 1, i2 - 1), (j1 - 1, j2 - 1), weight)
        except ValueError as exc:
            raise DocumentParseError(str(exc), lineno, 1) from None
        if edge.key in seen:
            raise DocumentParseError(f"duplicate edge (first on line {seen[edge.key]})", lineno, 1)
        seen[edge.key] = lineno
        edges.append(edge)
    if header is None:
        raise DocumentParseError("missing 'm n' header", 1, 1)
    return BipartiteTwoGraph(header[0], header[1], tuple(edges))


def format_edge_list(G: BipartiteTwoGraph) -> str:
    lines = [f"{G.m} {G.n}"]
    for e in sorted(G.edges, key=lambda e: e.key):
        (i1, i2), (j1, j2) = e.s_pair, e.t_pair
        lines.append(f"{i1 + 1} {i2 + 1} {j1 + 1} {j2 + 1} {e.weight!r}")
    return "\n".join(lines) + "\n"
