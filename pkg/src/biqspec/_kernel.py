"""Batched matrix kernels for f, g, h and their derivatives.

Works on the symmetrized tensor S reshaped to P[(i1,i2), (j1,j2)], so that
g = M(y) x with M(y) = reshape(P @ (y kron y)) and h = N(x) y with
N(x) = reshape(P.T @ (x kron x)). Iterative solvers call these in tight
loops, where plain einsum on four operands is too slow.
"""

from __future__ import annotations

import numpy as np

from .tensor import BiquadraticTensor, symmetrized


class FormKernel:
    def __init__(self, A: BiquadraticTensor):
        self.m, self.n = A.m, A.n
        self.S = symmetrized(A)
        self.P = self.S.transpose(0, 2, 1, 3).reshape(self.m * self.m, self.n * self.n)
        self.scale = float(np.max(np.abs(A.entries), initial=0.0))

    def x_matrix(self, Y: np.ndarray) -> np.ndarray:
        """M(y), batched over leading axes of Y: shape (..., m, m)."""
        yy = (Y[..., :, None] * Y[..., None, :]).reshape(*Y.shape[:-1], self.n * self.n)
        return (yy @ self.P.T).reshape(*Y.shape[:-1], self.m, self.m)

    def y_matrix(self, X: np.ndarray) -> np.ndarray:
        """N(x), batched: shape (..., n, n)."""
        xx = (X[..., :, None] * X[..., None, :]).reshape(*X.shape[:-1], self.m * self.m)
        return (xx @ self.P).reshape(*X.shape[:-1], self.n, self.n)

    def ghf(self, X: np.ndarray, Y: np.ndarray):
        """Return (g, h, f) for paired batches X (..., m) and Y (..., n)."""
        G = np.einsum("...ab,...b->...a", self.x_matrix(Y), X)
        H = np.einsum("...ab,...b->...a", self.y_matrix(X), Y)
        F = np.einsum("...a,...a->...", G, X)
        return G, H, F

    def f(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        G = np.einsum("...ab,...b->...a", self.x_matrix(Y), X)
        return np.einsum("...a,...a->...", G, X)

    def cross(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """d g_i / d y_l = 2 sum S[i, l, i2, j2] x[i2] y[j2], batched: (..., m, n)."""
        return 2.0 * np.einsum("iljk,...j,...k->...il", self.S, X, Y)


def normalize_rows(V: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(V, axis=-1, keepdims=True)
    return V / np.where(norms > 0, norms, 1.0)


def collatz_ratios(G, H, X, Y, support_tol: float):
    """Batched (v, u): min and max of g_i/x_i and h_j/y_j over coordinates above support_tol."""
    with np.errstate(divide="ignore", invalid="ignore"):
        rx = np.where(X > support_tol, G / X, np.nan)
        ry = np.where(Y > support_tol, H / Y, np.nan)
    r = np.concatenate([rx, ry], axis=-1)
    return np.nanmin(r, axis=-1), np.nanmax(r, axis=-1)
