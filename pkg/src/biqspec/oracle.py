"""Exhaustive M-eigenpair enumeration for m, n <= 3.

Scans an angular grid on the product of the two unit spheres for local
minima of the squared stationarity defect |g - f x|^2 + |h - f y|^2, adds
the grid maximizer and minimizer of f, and polishes every candidate with
damped Newton on the square system

    g(x, y) - lam x = 0,  h(x, y) - mu y = 0,  (|x|^2 - 1)/2 = 0,  (|y|^2 - 1)/2 = 0.

(lam = mu = f(x, y) at any solution.) Survivors are deduplicated modulo the
sign flips x -> -x and y -> -y, each of which maps eigenpairs to eigenpairs.

This path shares nothing with :mod:`biqspec.spectra` beyond the contractions,
so it serves as an independent check of the iterative solver.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._kernel import FormKernel, normalize_rows
from .errors import DimensionError
from .structure import classify_eigenpair
from .tensor import SUPPORT_TOL, BiquadraticTensor, EigenClass, MEigenPair, eigen_residual

DEFAULT_GRID_CIRCLES = 721
DEFAULT_GRID = 25
MAX_CANDIDATES = 4000
NEWTON_STEPS = 50
DEDUP_TOL = 1e-6


def worker_count() -> int:
    """Thread cap from BIQ_THREADS (0 or unset: one per CPU)."""
    try:
        n = int(os.environ.get("BIQ_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def sphere_grid(dim: int, resolution: int):
    """Points covering the unit sphere in R^dim modulo sign, with lattice neighbours.

    ``resolution`` counts grid points across an angle range of pi. Returns
    ``(points, neighbours)`` where ``neighbours[p]`` lists indices adjacent to p.
    """
    if dim == 1:
        return np.ones((1, 1)), np.zeros((1, 0), dtype=int)
    k = max(resolution - 1, 4)
    if dim == 2:
        t = np.arange(k) * np.pi / k
        pts = np.column_stack([np.cos(t), np.sin(t)])
        idx = np.arange(k)
        # the angle pi closes the loop up to sign, and the defect is sign-blind
        return pts, np.column_stack([(idx - 1) % k, (idx + 1) % k])
    if dim == 3:
        theta = (np.arange(k) + 0.5) * np.pi / k
        phi = np.arange(2 * k) * np.pi / k
        th, ph = np.meshgrid(theta, phi, indexing="ij")
        pts = np.column_stack(
            [(np.sin(th) * np.cos(ph)).ravel(), (np.sin(th) * np.sin(ph)).ravel(), np.cos(th).ravel()]
        )
        a, b = np.meshgrid(np.arange(k), np.arange(2 * k), indexing="ij")

        def flat(ti, pj):
            # stepping past a pole lands on the opposite meridian
            over = (ti < 0) | (ti >= k)
            ti = np.where(ti < 0, 0, np.where(ti >= k, k - 1, ti))
            pj = np.where(over, pj + k, pj) % (2 * k)
            return (ti * 2 * k + pj).ravel()

        nbrs = np.column_stack([flat(a - 1, b), flat(a + 1, b), flat(a, b - 1), flat(a, b + 1)])
        return pts, nbrs
    raise DimensionError("grid scan supports spheres in R^1..R^3 only")


def _candidates(kernel: FormKernel, grid: int):
    px, nx = sphere_grid(kernel.m, grid)
    py, ny = sphere_grid(kernel.n, grid)
    Mx = kernel.x_matrix(py)                        # (Py, m, m)
    Ny = kernel.y_matrix(px)                        # (Px, n, n)
    G = np.einsum("qab,pb->pqa", Mx, px)            # (Px, Py, m)
    F = np.einsum("pqa,pa->pq", G, px)
    H = np.einsum("pab,qb->pqa", Ny, py)            # (Px, Py, n)
    R = np.sum((G - F[..., None] * px[:, None, :]) ** 2, axis=-1)
    R += np.sum((H - F[..., None] * py[None, :, :]) ** 2, axis=-1)
    del G, H

    margin = 1e-13 * (1.0 + kernel.scale) ** 2
    strict = np.ones(R.shape, dtype=bool)
    if nx.shape[1]:
        strict &= R + margin < R[nx].min(axis=1)
    if ny.shape[1]:
        strict &= R + margin < R[:, ny].min(axis=2)
    cand = np.argwhere(strict)
    if len(cand) > MAX_CANDIDATES:
        order = np.argsort(R[cand[:, 0], cand[:, 1]])
        cand = cand[order[:MAX_CANDIDATES]]
    extremes = np.array([np.unravel_index(np.argmax(F), F.shape), np.unravel_index(np.argmin(F), F.shape)])
    cand = np.vstack([cand, extremes])
    return px[cand[:, 0]], py[cand[:, 1]]


def _system(kernel: FormKernel, Z: np.ndarray):
    m, n = kernel.m, kernel.n
    X, Y, lam, mu = Z[:, :m], Z[:, m:m + n], Z[:, m + n], Z[:, m + n + 1]
    Mx = kernel.x_matrix(Y)
    Ny = kernel.y_matrix(X)
    G = np.einsum("rab,rb->ra", Mx, X)
    H = np.einsum("rab,rb->ra", Ny, Y)
    res = np.concatenate(
        [
            G - lam[:, None] * X,
            H - mu[:, None] * Y,
            0.5 * (np.sum(X**2, axis=1) - 1.0)[:, None],
            0.5 * (np.sum(Y**2, axis=1) - 1.0)[:, None],
        ],
        axis=1,
    )
    return res, Mx, Ny


def _jacobian(kernel: FormKernel, Z, Mx, Ny):
    m, n = kernel.m, kernel.n
    X, Y, lam, mu = Z[:, :m], Z[:, m:m + n], Z[:, m + n], Z[:, m + n + 1]
    r = len(Z)
    J = np.zeros((r, m + n + 2, m + n + 2))
    C = kernel.cross(X, Y)
    J[:, :m, :m] = Mx - lam[:, None, None] * np.eye(m)
    J[:, :m, m:m + n] = C
    J[:, :m, m + n] = -X
    J[:, m:m + n, :m] = C.transpose(0, 2, 1)
    J[:, m:m + n, m:m + n] = Ny - mu[:, None, None] * np.eye(n)
    J[:, m:m + n, m + n + 1] = -Y
    J[:, m + n, :m] = X
    J[:, m + n + 1, m:m + n] = Y
    return J


def newton_polish(kernel: FormKernel, X: np.ndarray, Y: np.ndarray, steps: int = NEWTON_STEPS):
    """Damped Newton on the square eigen system, batched over rows of (X, Y).

    Each step is halved until the residual norm decreases (at most 30 halvings);
    a row that cannot decrease further is frozen.
    """
    F = kernel.f(X, Y)
    Z = np.column_stack([X, Y, F, F])
    res, Mx, Ny = _system(kernel, Z)
    norm = np.linalg.norm(res, axis=1)
    live = np.ones(len(Z), dtype=bool)
    floor = 1e-15 * (1.0 + kernel.scale)
    for _ in range(steps):
        live &= norm > floor
        idx = np.flatnonzero(live)
        if idx.size == 0:
            break
        J = _jacobian(kernel, Z[idx], Mx[idx], Ny[idx])
        step = -np.einsum("rab,rb->ra", np.linalg.pinv(J), res[idx])
        alpha = np.ones(idx.size)
        pending = np.ones(idx.size, dtype=bool)
        for _ in range(30):
            sub = idx[pending]
            trial = Z[sub] + alpha[pending, None] * step[pending]
            t_res, t_Mx, t_Ny = _system(kernel, trial)
            t_norm = np.linalg.norm(t_res, axis=1)
            better = t_norm < norm[sub]
            acc = sub[better]
            Z[acc], res[acc], Mx[acc], Ny[acc], norm[acc] = (
                trial[better], t_res[better], t_Mx[better], t_Ny[better], t_norm[better]
            )
            still = np.flatnonzero(pending)[~better]
            pending[:] = False
            pending[still] = True
            if not pending.any():
                break
            alpha[pending] *= 0.5
        live[idx[pending]] = False
    m, n = kernel.m, kernel.n
    return normalize_rows(Z[:, :m]), normalize_rows(Z[:, m:m + n])


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    return v if v[np.argmax(np.abs(v))] >= 0 else -v


def _same_pair(p: MEigenPair, q: MEigenPair) -> bool:
    if abs(p.lam - q.lam) >= DEDUP_TOL:
        return False
    dx = min(np.linalg.norm(p.x - q.x), np.linalg.norm(p.x + q.x))
    dy = min(np.linalg.norm(p.y - q.y), np.linalg.norm(p.y + q.y))
    return dx < DEDUP_TOL and dy < DEDUP_TOL


def enumerate_m_eigenpairs_small(A: BiquadraticTensor, grid: int | None = None,
                                 tol: float = 1e-9) -> list[MEigenPair]:
    """All distinct M-eigenpairs found by grid scan plus Newton polishing, sorted by eigenvalue.

    Each pair is sign-normalized (largest-magnitude coordinate positive) and
    tagged with its class. ``grid`` is the number of points per angle range
    of pi; the default is 721 when m = n = 2 and 25 otherwise.
    """
    if A.m > 3 or A.n > 3:
        raise DimensionError(
            f"exhaustive enumeration supports m, n <= 3 (got m={A.m}, n={A.n}); use solve_lambda_max instead"
        )
    if grid is None:
        grid = DEFAULT_GRID_CIRCLES if A.m <= 2 and A.n <= 2 else DEFAULT_GRID
    kernel = FormKernel(A)
    X0, Y0 = _candidates(kernel, grid)

    chunks = np.array_split(np.arange(len(X0)), max(1, min(worker_count(), len(X0) // 64)))
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(lambda c: newton_polish(kernel, X0[c], Y0[c]), chunks))
    X = np.vstack([p[0] for p in parts])
    Y = np.vstack([p[1] for p in parts])
    lam = kernel.f(X, Y)
    resid = eigen_residual(A, lam, X, Y)

    found: list[MEigenPair] = []
    for r in np.argsort(lam, kind="stable"):
        if not resid[r] <= tol:
            continue
        cand = MEigenPair(lam[r], _canonical_sign(X[r]), _canonical_sign(Y[r]), float(resid[r]))
        if any(_same_pair(cand, prev) for prev in found):
            continue
        cand.kind = classify_eigenpair(cand, SUPPORT_TOL)
        found.append(cand)
    return found


def m_plus_pairs(pairs: list[MEigenPair]) -> list[MEigenPair]:
    return [p for p in pairs if EigenClass.PLUS in p.kind]
