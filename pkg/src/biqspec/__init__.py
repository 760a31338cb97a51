"""Spectral and structural analysis of nonnegative biquadratic tensors and bipartite 2-graphs."""

from .errors import DimensionError, DocumentParseError, NegativeEntriesError, NotAnEigenpairError
from .graph import (
    BipartiteTwoGraph,
    Edge,
    adjacency_tensor,
    degree_tensors,
    is_bi_separable,
    is_S_separable,
    is_T_separable,
    laplacian,
    signless_laplacian,
)
from .oracle import enumerate_m_eigenpairs_small
from .spectra import (
    SolverConfig,
    SolverOutcome,
    collatz_bounds,
    estimate_rho_lower,
    estimate_rho_star,
    min_m_eigenvalue_probe,
    solve_lambda_max,
)
from .structure import (
    StructureReport,
    classify_eigenpair,
    is_quasi_irreducible,
    is_irreducible,
    is_x_quasi_reducible,
    is_x_reducible,
    is_y_quasi_reducible,
    is_y_reducible,
    structure_report,
)
from .tensor import (
    BiquadraticTensor,
    EigenClass,
    MEigenPair,
    check_m_eigenpair,
    contract_g,
    contract_h,
    eval_f,
    is_nonnegative,
    is_symmetric,
    is_weakly_symmetric,
)

__version__ = "0.1.0"
