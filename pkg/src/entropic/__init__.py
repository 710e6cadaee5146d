"""Tsallis-entropy inequality checks on block bipartitions of density matrices.

An ``N = n * m`` dimensional state, a single qudit included, is split into two
subsystems by its block structure. The package checks entropic inequalities
on such splits and minimizes the sum of marginal entropies over global
unitaries.
"""

__version__ = "0.1.0"

from .classical import (
    check_classical_subadditivity,
    conditional_entropy_q,
    conditional_entropy_shannon,
    conditional_given_B,
    marginal_A,
    marginal_B,
    probability_vector,
    reshape_joint,
    shannon_entropy,
    subadditivity_margin,
    tsallis_entropy,
)
from .inequalities import (
    InformationValue,
    check_araki_lieb,
    check_quantum_subadditivity,
    check_tomographic_subadditivity,
    deformed_information,
    information_I,
    mutual_information_bipartite,
    quantum_q_entropy,
    qudit32_conditional_q_entropy,
    tomographic_q_entropy,
    von_neumann_entropy,
)
from .linalg import ginibre_density, haar_unitary, hermitian_eig, kron, matrix_function
from .optimize import OptimizationResult, UnitaryParams, build_unitary, minimize_sigma, sigma_sum
from .reports import InequalityReport, SuiteReport
from .shapes import BipartitionShape, factorizations, padded_dim
from .states import (
    DensityMatrix,
    Tomogram,
    block_marginal_first,
    block_marginal_second,
    conjugate,
    qudit32_omegas,
    tomogram,
    validate_density,
    zero_pad,
)

__all__ = [
    "BipartitionShape",
    "block_marginal_first",
    "block_marginal_second",
    "build_unitary",
    "check_araki_lieb",
    "check_classical_subadditivity",
    "check_quantum_subadditivity",
    "check_tomographic_subadditivity",
    "conditional_entropy_q",
    "conditional_entropy_shannon",
    "conditional_given_B",
    "conjugate",
    "deformed_information",
    "DensityMatrix",
    "factorizations",
    "ginibre_density",
    "haar_unitary",
    "hermitian_eig",
    "InequalityReport",
    "information_I",
    "InformationValue",
    "kron",
    "marginal_A",
    "marginal_B",
    "matrix_function",
    "minimize_sigma",
    "mutual_information_bipartite",
    "OptimizationResult",
    "padded_dim",
    "probability_vector",
    "quantum_q_entropy",
    "qudit32_conditional_q_entropy",
    "qudit32_omegas",
    "reshape_joint",
    "shannon_entropy",
    "sigma_sum",
    "subadditivity_margin",
    "SuiteReport",
    "Tomogram",
    "tomogram",
    "tomographic_q_entropy",
    "tsallis_entropy",
    "UnitaryParams",
    "validate_density",
    "von_neumann_entropy",
    "zero_pad",
]
