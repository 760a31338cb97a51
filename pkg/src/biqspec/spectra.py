"""Largest M-eigenvalue of nonnegative biquadratic tensors, Collatz bounds, and PSD probing.

For a nonnegative tensor and nonnegative nonzero (x, y), the Collatz bounds

    v(x, y) = min over support of {g_i / x_i, h_j / y_j}
    u(x, y) = max over the same set

satisfy v <= lambda_max, and sup v over the nonnegative sphere pair equals
lambda_max. :func:`solve_lambda_max` drives (v, u) together with a shifted
power iteration and then polishes by projected gradient ascent on f.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ._kernel import FormKernel, collatz_ratios, normalize_rows
from .errors import DimensionError, NegativeEntriesError
from .tensor import SUPPORT_TOL, BiquadraticTensor, MEigenPair, check_m_eigenpair, is_nonnegative

log = logging.getLogger(__name__)


@dataclass
class SolverConfig:
    max_iter: int = 5000
    tol: float = 1e-10
    shift: float | None = None  # None: largest |a[i,j,i,j]| + 1
    restarts: int = 32
    seed: int = 0
    polish_iter: int = 500

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1 or self.restarts < 1:
            raise ValueError("max_iter and restarts must be at least 1")
        if self.shift is not None and self.shift < 0:
            raise ValueError("shift must be nonnegative")


@dataclass
class SolverOutcome:
    best: MEigenPair
    lower_bound: float
    upper_bound: float
    converged: bool
    iterations_used: int
    restart_values: list[float]
    trace: np.ndarray = field(repr=False)  # (iterations, 2) rows of (v, u) for the winning restart

    def summary(self) -> dict:
        return {
            "lambda": self.best.lam,
            "x": self.best.x.tolist(),
            "y": self.best.y.tolist(),
            "residual": self.best.residual,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "converged": self.converged,
            "iterations_used": self.iterations_used,
            "restart_values": list(self.restart_values),
        }


def _require_nbq(A: BiquadraticTensor) -> None:
    if not is_nonnegative(A):
        raise NegativeEntriesError("tensor has negative entries")


def default_shift(A: BiquadraticTensor) -> float:
    a = A.entries
    diag = [abs(a[i, j, i, j]) for i in range(A.m) for j in range(A.n)]
    return max(diag) + 1.0


def collatz_bounds(A: BiquadraticTensor, x, y, support_tol: float = SUPPORT_TOL) -> tuple[float, float]:
    """Return (v, u) at a nonnegative pair; coordinates at or below support_tol are skipped."""
    _require_nbq(A)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (A.m,) or y.shape != (A.n,):
        raise DimensionError(f"expected vectors of length {A.m} and {A.n}")
    if np.any(x < 0) or np.any(y < 0):
        raise NegativeEntriesError("Collatz bounds need nonnegative vectors")
    if not np.any(x > support_tol) or not np.any(y > support_tol):
        raise ValueError("x and y must each have a coordinate above the support threshold")
    G, H, _ = FormKernel(A).ghf(x, y)
    v, u = collatz_ratios(G, H, x, y, support_tol)
    return float(v), float(u)


def sample_nonnegative_pairs(m: int, n: int, count: int, rng: np.random.Generator):
    """Uniform samples from the nonnegative parts of the two unit spheres."""
    X = normalize_rows(np.abs(rng.standard_normal((count, m))))
    Y = normalize_rows(np.abs(rng.standard_normal((count, n))))
    return X, Y


def _initial_pairs(m: int, n: int, cfg: SolverConfig):
    X = np.empty((cfg.restarts, m))
    Y = np.empty((cfg.restarts, n))
    X[0] = 1.0 / np.sqrt(m)
    Y[0] = 1.0 / np.sqrt(n)
    for r in range(1, cfg.restarts):
        rng = np.random.default_rng(cfg.seed + r)
        X[r] = np.abs(rng.standard_normal(m))
        Y[r] = np.abs(rng.standard_normal(n))
    return normalize_rows(X), normalize_rows(Y)


def sphere_climb(kernel: FormKernel, X, Y, sense: int = 1, iters: int = 500, gtol: float = 1e-14):
    """Projected gradient ascent (sense=+1) or descent (sense=-1) of f on the sphere pair.

    Batched over rows; each row keeps its own step size, grown after accepted
    steps and halved after rejected ones. A step is accepted only when it does
    not worsen f, so f is monotone along accepted steps.
    """
    X = X.copy()
    Y = Y.copy()
    G, H, F = kernel.ghf(X, Y)
    step = np.full(len(X), 0.5 / (1.0 + kernel.scale * kernel.m * kernel.n))
    tiny = gtol * (1.0 + kernel.scale)
    for _ in range(iters):
        DX = G - F[:, None] * X
        DY = H - F[:, None] * Y
        gnorm = np.sqrt(np.sum(DX**2, axis=1) + np.sum(DY**2, axis=1))
        active = gnorm > tiny
        if not np.any(active):
            break
        Xn = normalize_rows(X + sense * step[:, None] * DX)
        Yn = normalize_rows(Y + sense * step[:, None] * DY)
        Gn, Hn, Fn = kernel.ghf(Xn, Yn)
        ok = active & (sense * (Fn - F) >= 0)
        X[ok], Y[ok], G[ok], H[ok], F[ok] = Xn[ok], Yn[ok], Gn[ok], Hn[ok], Fn[ok]
        step = np.where(ok, step * 1.5, np.where(active, step * 0.5, step))
    return X, Y, F


def solve_lambda_max(A: BiquadraticTensor, config: SolverConfig | None = None) -> SolverOutcome:
    """Largest M-eigenvalue of a nonnegative tensor by multi-start shifted power iteration.

    Each restart repeats x <- normalize(g + tau x), y <- normalize(h + tau y)
    (both from the same current pair) until u - v <= tol, then is polished by
    projected gradient ascent. The reported value is f at the best final pair,
    which is always a feasible lower bound on lambda_max.
    """
    cfg = config or SolverConfig()
    _require_nbq(A)
    if A.m < 2 or A.n < 2:
        raise DimensionError(f"needs m, n >= 2, got m={A.m}, n={A.n}")
    kernel = FormKernel(A)
    tau = default_shift(A) if cfg.shift is None else cfg.shift
    X, Y = _initial_pairs(A.m, A.n, cfg)
    R = cfg.restarts

    running = np.ones(R, dtype=bool)
    converged = np.zeros(R, dtype=bool)
    iterations = np.zeros(R, dtype=int)
    trace_v = np.full((cfg.max_iter + 1, R), np.nan)
    trace_u = np.full((cfg.max_iter + 1, R), np.nan)
    for k in range(cfg.max_iter + 1):
        idx = np.flatnonzero(running)
        G, H, _ = kernel.ghf(X[idx], Y[idx])
        v, u = collatz_ratios(G, H, X[idx], Y[idx], SUPPORT_TOL)
        trace_v[k, idx], trace_u[k, idx] = v, u
        done = u - v <= cfg.tol
        converged[idx[done]] = True
        if k == cfg.max_iter:
            break
        go = idx[~done]
        running[idx[done]] = False
        if go.size == 0:
            break
        X[go] = normalize_rows(np.maximum(G[~done] + tau * X[go], 0.0))
        Y[go] = normalize_rows(np.maximum(H[~done] + tau * Y[go], 0.0))
        iterations[go] += 1

    X, Y, F = sphere_climb(kernel, X, Y, sense=1, iters=cfg.polish_iter)
    # f(|x|, |y|) >= f(x, y) for nonnegative tensors
    X, Y = np.abs(X), np.abs(Y)
    G, H, F = kernel.ghf(X, Y)
    r = int(np.argmax(F))
    v, u = collatz_ratios(G[r], H[r], X[r], Y[r], SUPPORT_TOL)
    best = MEigenPair(F[r], X[r], Y[r])
    check_m_eigenpair(A, best, cfg.tol)
    if not converged.any():
        log.warning("power iteration did not reach gap %.1e on any of %d restarts", cfg.tol, R)
    n_iter = int(iterations[r])
    trace = np.column_stack([trace_v[: n_iter + 1, r], trace_u[: n_iter + 1, r]])
    return SolverOutcome(
        best=best,
        lower_bound=float(v),
        upper_bound=float(u),
        converged=bool(converged[r]),
        iterations_used=n_iter,
        restart_values=[float(val) for val in F],
        trace=trace,
    )


def _rho_sample(A: BiquadraticTensor, samples: int, seed: int, outcome: SolverOutcome | None):
    _require_nbq(A)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if outcome is None:
        outcome = solve_lambda_max(A, SolverConfig(seed=seed))
    rng = np.random.default_rng(seed)
    X, Y = sample_nonnegative_pairs(A.m, A.n, samples, rng)
    X = np.vstack([X, outcome.best.x])
    Y = np.vstack([Y, outcome.best.y])
    G, H, _ = FormKernel(A).ghf(X, Y)
    return collatz_ratios(G, H, X, Y, SUPPORT_TOL)


def estimate_rho_star(A: BiquadraticTensor, samples: int = 10_000, seed: int = 0,
                      outcome: SolverOutcome | None = None) -> float:
    """Largest lower Collatz bound v over random nonnegative pairs plus the solver's pair."""
    v, _ = _rho_sample(A, samples, seed, outcome)
    return float(np.max(v))


def estimate_rho_lower(A: BiquadraticTensor, samples: int = 10_000, seed: int = 0,
                       outcome: SolverOutcome | None = None) -> float:
    """Smallest upper Collatz bound u over the same sample set (diagnostic only)."""
    _, u = _rho_sample(A, samples, seed, outcome)
    return float(np.min(u))


@dataclass
class ProbeResult:
    value: float
    x: np.ndarray
    y: np.ndarray
    converged: bool


def min_m_eigenvalue_probe(A: BiquadraticTensor, config: SolverConfig | None = None) -> ProbeResult:
    """Smallest value of f found by multi-start projected gradient descent on the sphere pair.

    Any tensor is accepted. The value is a heuristic upper bound on the
    smallest M-eigenvalue, so a negative value certifies that A is not PSD.
    """
    cfg = config or SolverConfig()
    kernel = FormKernel(A)
    rng = np.random.default_rng(cfg.seed)
    X = normalize_rows(rng.standard_normal((cfg.restarts, A.m)))
    Y = normalize_rows(rng.standard_normal((cfg.restarts, A.n)))
    X[0] = 1.0 / np.sqrt(A.m)
    Y[0] = 1.0 / np.sqrt(A.n)
    X, Y, F = sphere_climb(kernel, X, Y, sense=-1, iters=max(cfg.polish_iter, min(cfg.max_iter, 2000)))
    r = int(np.argmin(F))
    G, H, _ = kernel.ghf(X[r], Y[r])
    stationarity = max(np.max(np.abs(G - F[r] * X[r])), np.max(np.abs(H - F[r] * Y[r])))
    return ProbeResult(float(F[r]), X[r], Y[r], bool(stationarity <= 1e-6 * (1.0 + kernel.scale)))
