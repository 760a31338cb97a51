"""Biquadratic tensors, their contractions, and M-eigenpair verification.

A biquadratic tensor is a dense real array ``a[i1, j1, i2, j2]`` of shape
``(m, n, m, n)``. Its form is

    f(x, y) = sum a[i1, j1, i2, j2] * x[i1] * y[j1] * x[i2] * y[j2]

and the half-gradients ``g = grad_x f / 2`` and ``h = grad_y f / 2`` define the
M-eigen system ``g = lam * x``, ``h = lam * y``, ``|x| = |y| = 1``.

All contractions accept either single vectors or stacks of vectors with
matching leading batch dimensions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

RESIDUAL_TOL = 1e-9
SUPPORT_TOL = 1e-8


class BiquadraticTensor:
    """Immutable dense order-4 tensor of shape ``(m, n, m, n)``.

    Indices are 0-based. The backing array is copied on construction and
    marked read-only, so instances can be shared freely.
    """

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=float, copy=True)
        if a.ndim != 4 or a.shape[0] != a.shape[2] or a.shape[1] != a.shape[3]:
            raise DimensionError(f"expected shape (m, n, m, n), got {a.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionError("m and n must be at least 1")
        if not np.all(np.isfinite(a)):
            raise ValueError("tensor entries must be finite")
        a.flags.writeable = False
        self._a = a

    @classmethod
    def zeros(cls, m: int, n: int) -> "BiquadraticTensor":
        return cls(np.zeros((m, n, m, n)))

    @classmethod
    def from_entries(cls, m: int, n: int, entries) -> "BiquadraticTensor":
        """Build from ``(i1, j1, i2, j2, value)`` records with 0-based indices."""
        a = np.zeros((m, n, m, n))
        for i1, j1, i2, j2, value in entries:
            for idx, size in ((i1, m), (j1, n), (i2, m), (j2, n)):
                if not 0 <= idx < size:
                    raise DimensionError(f"index {(i1, j1, i2, j2)} out of range for m={m}, n={n}")
            a[i1, j1, i2, j2] = value
        return cls(a)

    @classmethod
    def isotropic(cls, m: int, n: int, c: float = 1.0) -> "BiquadraticTensor":
        """Tensor with ``a[i, j, i, j] = c``; its form equals ``c`` on the unit sphere pair."""
        a = np.zeros((m, n, m, n))
        for i in range(m):
            for j in range(n):
                a[i, j, i, j] = c
        return cls(a)

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def m(self) -> int:
        return self._a.shape[0]

    @property
    def n(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self):
        return self._a.shape

    def __add__(self, other):
        if not isinstance(other, BiquadraticTensor):
            return NotImplemented
        _same_shape(self, other)
        return BiquadraticTensor(self._a + other._a)

    def __sub__(self, other):
        if not isinstance(other, BiquadraticTensor):
            return NotImplemented
        _same_shape(self, other)
        return BiquadraticTensor(self._a - other._a)

    def __neg__(self):
        return BiquadraticTensor(-self._a)

    def __mul__(self, c):
        if isinstance(c, BiquadraticTensor):
            return NotImplemented
        return BiquadraticTensor(self._a * float(c))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BiquadraticTensor):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    __hash__ = None

    def __repr__(self):
        return f"BiquadraticTensor(m={self.m}, n={self.n}, nnz={int(np.count_nonzero(self._a))})"


def _same_shape(a: BiquadraticTensor, b: BiquadraticTensor) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def _operands(A: BiquadraticTensor, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim == 0 or y.ndim == 0 or x.shape[-1] != A.m or y.shape[-1] != A.n:
        raise DimensionError(
            f"vector lengths {x.shape[-1:]} and {y.shape[-1:]} do not match m={A.m}, n={A.n}"
        )
    if x.shape[:-1] != y.shape[:-1]:
        raise DimensionError(f"batch shapes differ: {x.shape[:-1]} vs {y.shape[:-1]}")
    return x, y


def eval_f(A: BiquadraticTensor, x, y):
    """Biquadratic form f(x, y). Unit norm is not required."""
    x, y = _operands(A, x, y)
    return np.einsum("abcd,...a,...b,...c,...d->...", A.entries, x, y, x, y)


def contract_g(A: BiquadraticTensor, x, y):
    """x-side half-gradient: g_i = (A . y x y + A x y . y)_i / 2."""
    x, y = _operands(A, x, y)
    a = A.entries
    left = np.einsum("abcd,...a,...b,...d->...c", a, x, y, y)
    right = np.einsum("abcd,...b,...c,...d->...a", a, y, x, y)
    return 0.5 * (left + right)


def contract_h(A: BiquadraticTensor, x, y):
    """y-side half-gradient: h_j = (A x . x y + A x y x .)_j / 2."""
    x, y = _operands(A, x, y)
    a = A.entries
    left = np.einsum("abcd,...a,...b,...c->...d", a, x, y, x)
    right = np.einsum("abcd,...a,...c,...d->...b", a, x, x, y)
    return 0.5 * (left + right)


def symmetrized(A: BiquadraticTensor) -> np.ndarray:
    """Average of A over the swaps i1<->i2 and j1<->j2.

    The result defines the same form f, hence the same g and h.
    """
    a = A.entries
    return 0.25 * (
        a + a.transpose(2, 1, 0, 3) + a.transpose(0, 3, 2, 1) + a.transpose(2, 3, 0, 1)
    )


def is_weakly_symmetric(A: BiquadraticTensor, tol: float = 0.0) -> bool:
    a = A.entries
    return bool(np.all(np.abs(a - a.transpose(2, 3, 0, 1)) <= tol))


def is_symmetric(A: BiquadraticTensor, tol: float = 0.0) -> bool:
    a = A.entries
    return (
        is_weakly_symmetric(A, tol)
        and bool(np.all(np.abs(a - a.transpose(2, 1, 0, 3)) <= tol))
        and bool(np.all(np.abs(a - a.transpose(0, 3, 2, 1)) <= tol))
    )


def is_nonnegative(A: BiquadraticTensor) -> bool:
    return bool(np.all(A.entries >= 0))


class EigenClass(enum.Flag):
    """Class tags of an M-eigenpair; a pair may carry several (e.g. PLUS | ZERO)."""

    M = 0
    PLUS = enum.auto()
    PLUSPLUS = enum.auto()
    ZERO = enum.auto()

    def labels(self) -> list[str]:
        if not self:
            return ["M"]
        names = {EigenClass.PLUS: "M_PLUS", EigenClass.PLUSPLUS: "M_PLUSPLUS", EigenClass.ZERO: "M_ZERO"}
        return [label for flag, label in names.items() if flag in self]


@dataclass
class MEigenPair:
    lam: float
    x: np.ndarray
    y: np.ndarray
    residual: float = float("nan")
    kind: EigenClass = EigenClass.M

    def __post_init__(self):
        self.lam = float(self.lam)
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "x": self.x.tolist(),
            "y": self.y.tolist(),
            "class": self.kind.labels(),
            "residual": self.residual,
        }


def eigen_residual(A: BiquadraticTensor, lam, x, y):
    """Max-norm of the eigen-equation and normalization defects (batched)."""
    x, y = _operands(A, x, y)
    lam = np.asarray(lam, dtype=float)
    g = contract_g(A, x, y)
    h = contract_h(A, x, y)
    parts = np.stack(
        [
            np.max(np.abs(g - lam[..., None] * x), axis=-1),
            np.max(np.abs(h - lam[..., None] * y), axis=-1),
            np.abs(np.linalg.norm(x, axis=-1) - 1.0),
            np.abs(np.linalg.norm(y, axis=-1) - 1.0),
        ]
    )
    return parts.max(axis=0)


def check_m_eigenpair(A: BiquadraticTensor, cand: MEigenPair, tol: float = RESIDUAL_TOL) -> bool:
    """True iff ``cand`` solves the M-eigen system within ``tol``.

    The achieved residual is stored on ``cand.residual``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    cand.residual = float(eigen_residual(A, cand.lam, cand.x, cand.y))
    return cand.residual <= tol

