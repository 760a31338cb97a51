"""Reducibility and quasi-reducibility of biquadratic tensors, and eigenpair class tags.

Every predicate is a connectivity question. For x-reducibility, fix j and join
i1 -- i2 whenever a[i1,j,i2,j] + a[i2,j,i1,j] != 0; the tensor is x-reducible
iff one of those graphs on the m row indices is disconnected, and any
component is a witness set J_x. The quasi variants use two distinct indices
(j1, j2) in place of the repeated j. The y-side predicates mirror this on the
n column indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .connectivity import split_off_component
from .errors import DimensionError, NotAnEigenpairError
from .tensor import SUPPORT_TOL, BiquadraticTensor, EigenClass, MEigenPair, check_m_eigenpair


class ReducibilityWitness(NamedTuple):
    """``index`` is (j,) / (i,) for reducibility and (j1, j2) / (i1, i2) for quasi-reducibility."""

    index: tuple[int, ...]
    subset: frozenset[int]


def _x_links(a: np.ndarray, j1: int, j2: int):
    m = a.shape[0]
    for i1, i2 in itertools.combinations(range(m), 2):
        if a[i1, j1, i2, j2] + a[i2, j1, i1, j2] != 0:
            yield i1, i2


def _y_links(a: np.ndarray, i1: int, i2: int):
    n = a.shape[1]
    for j1, j2 in itertools.combinations(range(n), 2):
        if a[i1, j1, i2, j2] + a[i1, j2, i2, j1] != 0:
            yield j1, j2


def _need(A: BiquadraticTensor, m_min: int, n_min: int) -> None:
    if A.m < m_min or A.n < n_min:
        raise DimensionError(f"needs m >= {m_min} and n >= {n_min}, got m={A.m}, n={A.n}")


def is_x_reducible(A: BiquadraticTensor):
    _need(A, 2, 1)
    a = A.entries
    for j in range(A.n):
        part = split_off_component(A.m, _x_links(a, j, j))
        if part is not None:
            return True, ReducibilityWitness((j,), part)
    return False, None


def is_y_reducible(A: BiquadraticTensor):
    _need(A, 1, 2)
    a = A.entries
    for i in range(A.m):
        part = split_off_component(A.n, _y_links(a, i, i))
        if part is not None:
            return True, ReducibilityWitness((i,), part)
    return False, None


def is_x_quasi_reducible(A: BiquadraticTensor):
    # the pair-sum is symmetric in (i1, i2) but not in (j1, j2): scan ordered pairs
    _need(A, 2, 2)
    a = A.entries
    for j1, j2 in itertools.permutations(range(A.n), 2):
        part = split_off_component(A.m, _x_links(a, j1, j2))
        if part is not None:
            return True, ReducibilityWitness((j1, j2), part)
    return False, None


def is_y_quasi_reducible(A: BiquadraticTensor):
    _need(A, 2, 2)
    a = A.entries
    for i1, i2 in itertools.permutations(range(A.m), 2):
        part = split_off_component(A.n, _y_links(a, i1, i2))
        if part is not None:
            return True, ReducibilityWitness((i1, i2), part)
    return False, None


def is_irreducible(A: BiquadraticTensor) -> bool:
    return not is_x_reducible(A)[0] and not is_y_reducible(A)[0]


def is_quasi_irreducible(A: BiquadraticTensor) -> bool:
    return not is_x_quasi_reducible(A)[0] and not is_y_quasi_reducible(A)[0]


def witness_holds(A: BiquadraticTensor, kind: str, witness: ReducibilityWitness) -> bool:
    """Re-check a witness entry by entry against the defining zero-sum condition.

    ``kind`` is one of "x", "y", "x_quasi", "y_quasi".
    """
    a = A.entries
    inside = sorted(witness.subset)
    size = A.m if kind.startswith("x") else A.n
    outside = [v for v in range(size) if v not in witness.subset]
    if not inside or not outside:
        return False
    if kind in ("x", "y"):
        p1 = p2 = witness.index[0]
    else:
        p1, p2 = witness.index
    if kind.startswith("x"):
        return all(a[o, p1, s, p2] + a[s, p1, o, p2] == 0 for s in inside for o in outside)
    return all(a[p1, s, p2, o] + a[p1, o, p2, s] == 0 for s in inside for o in outside)


@dataclass(frozen=True)
class StructureReport:
    x_reducible: bool
    x_reducible_witness: ReducibilityWitness | None
    y_reducible: bool
    y_reducible_witness: ReducibilityWitness | None
    x_quasi_reducible: bool
    x_quasi_reducible_witness: ReducibilityWitness | None
    y_quasi_reducible: bool
    y_quasi_reducible_witness: ReducibilityWitness | None

    @property
    def irreducible(self) -> bool:
        return not (self.x_reducible or self.y_reducible)

    @property
    def quasi_irreducible(self) -> bool:
        return not (self.x_quasi_reducible or self.y_quasi_reducible)

    def to_dict(self) -> dict:
        """JSON-ready form; witness indices are 1-based."""

        def external(w):
            if w is None:
                return None
            return {"index": [v + 1 for v in w.index], "subset": sorted(v + 1 for v in w.subset)}

        return {
            "x_reducible": self.x_reducible,
            "y_reducible": self.y_reducible,
            "x_quasi_reducible": self.x_quasi_reducible,
            "y_quasi_reducible": self.y_quasi_reducible,
            "irreducible": self.irreducible,
            "quasi_irreducible": self.quasi_irreducible,
            "witnesses": {
                "x_reducible": external(self.x_reducible_witness),
                "y_reducible": external(self.y_reducible_witness),
                "x_quasi_reducible": external(self.x_quasi_reducible_witness),
                "y_quasi_reducible": external(self.y_quasi_reducible_witness),
            },
        }


def structure_report(A: BiquadraticTensor) -> StructureReport:
    _need(A, 2, 2)
    return StructureReport(
        *is_x_reducible(A),
        *is_y_reducible(A),
        *is_x_quasi_reducible(A),
        *is_y_quasi_reducible(A),
    )


def _sign_normalized(v: np.ndarray, tol: float) -> np.ndarray | None:
    """Return v or -v if one of them is componentwise >= -tol, else None."""
    if np.all(v >= -tol):
        return v
    if np.all(-v >= -tol):
        return -v
    return None


def classify_eigenpair(
    pair: MEigenPair,
    tol: float = SUPPORT_TOL,
    A: BiquadraticTensor | None = None,
    residual_tol: float = 1e-9,
) -> EigenClass:
    """Tag a pair as M, M+ (nonnegative up to sign), M++ (positive) and/or M0 (singleton support).

    The eigen equations are odd in x and odd in y separately, so x and y are
    sign-normalized independently. When ``A`` is given the pair is verified
    first and :class:`NotAnEigenpairError` is raised if it fails.
    """
    if A is not None and not check_m_eigenpair(A, pair, residual_tol):
        raise NotAnEigenpairError(f"residual {pair.residual:.3e} exceeds {residual_tol:.1e}")
    kind = EigenClass.M
    x = _sign_normalized(pair.x, tol)
    y = _sign_normalized(pair.y, tol)
    if x is not None and y is not None:
        kind |= EigenClass.PLUS
        if np.all(x > tol) and np.all(y > tol):
            kind |= EigenClass.PLUSPLUS
    if np.count_nonzero(np.abs(pair.x) > tol) == 1 or np.count_nonzero(np.abs(pair.y) > tol) == 1:
        kind |= EigenClass.ZERO
    return kind
