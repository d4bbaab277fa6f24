"""lpmax: randomized maximization of homogeneous polynomials and multilinear
forms over L_p balls (p > 2, including p = inf), with certificates, brute-force
oracles, a CLI, and estimator-style wrappers."""

from .config import SolverConfig
from .errors import (ConvergenceError, DegenerateInputError, DomainError,
                     LpmaxError, ResourceLimitError, ShapeError)
from .estimators import (HomogeneousPolynomialMaximizer,
                         MultilinearFormMaximizer, PqNormEstimator)
from .hpopt import HpCertificate, HpInstance, polarize_even, polarize_odd, solve_hp
from .mlopt import MlCertificate, MlInstance, relax_to_ml, solve_ml, solve_ml_d2
from .oracle import (OracleMethod, OracleResult, exact_ml_linf, fn_check,
                     grid_hp, grid_ml, sym_equivalence_check)
from .pqnorm import (GramSolution, RoundedPair, holder_dual, pq_norm_lb,
                     project_lp_ball, round_gram, solve_vecp)
from .sampler import KN, derive_rng, sample_count, sample_pgauss, sample_rademacher
from .symmetry import (BlockPartition, embed_matrix, permutation_expansion,
                       pi_transpose, rebalance_blocks, split, stack, symmetrize)
from .tensor import (Tensor, as_tensor, contract, ContractionSpec, eval_multilinear,
                     eval_poly, is_supersymmetric, load_tensor, save_tensor,
                     tensor_from_doc, tensor_to_doc)
from .validation import conjugate_exponent, lp_norm, parse_exponent

__version__ = "0.1.0"

__all__ = [
    "SolverConfig",
    "LpmaxError", "ShapeError", "DomainError", "DegenerateInputError",
    "ResourceLimitError", "ConvergenceError",
    "Tensor", "as_tensor", "ContractionSpec", "contract", "eval_multilinear",
    "eval_poly", "is_supersymmetric", "tensor_to_doc", "tensor_from_doc",
    "save_tensor", "load_tensor",
    "BlockPartition", "stack", "split", "pi_transpose", "symmetrize",
    "embed_matrix", "rebalance_blocks", "permutation_expansion",
    "KN", "derive_rng", "sample_rademacher", "sample_pgauss", "sample_count",
    "GramSolution", "RoundedPair", "holder_dual", "project_lp_ball",
    "solve_vecp", "round_gram", "pq_norm_lb",
    "MlInstance", "MlCertificate", "solve_ml", "solve_ml_d2", "relax_to_ml",
    "HpInstance", "HpCertificate", "solve_hp", "polarize_odd", "polarize_even",
    "OracleMethod", "OracleResult", "exact_ml_linf", "grid_ml", "grid_hp",
    "fn_check", "sym_equivalence_check",
    "MultilinearFormMaximizer", "HomogeneousPolynomialMaximizer", "PqNormEstimator",
    "conjugate_exponent", "lp_norm", "parse_exponent",
    "__version__",
]
