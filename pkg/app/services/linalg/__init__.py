from app.services.linalg.rings import RingSpec
from app.services.linalg.matrix import Matrix, block_matrix
from app.services.linalg.normal_forms import (
    Diagonalization,
    column_space_basis,
    complement_basis,
    diagonalize,
    hermite_normal_form,
    kernel_basis,
    left_inverse,
    rank,
    smith_normal_form,
    solve,
    solve_vector,
)
from app.services.linalg.sparse import invariant_factors
from app.services.linalg.modules import FgModule, cokernel

ZZ = RingSpec.integers()
QQ = RingSpec.rationals()

__all__ = [
    "RingSpec",
    "Matrix",
    "block_matrix",
    "Diagonalization",
    "diagonalize",
    "smith_normal_form",
    "hermite_normal_form",
    "kernel_basis",
    "column_space_basis",
    "complement_basis",
    "left_inverse",
    "rank",
    "solve",
    "solve_vector",
    "invariant_factors",
    "FgModule",
    "cokernel",
    "ZZ",
    "QQ",
]
