from app.services.dalg.presentation import AlgebraPresentation, parse_polynomial
from app.services.dalg.finite_algebra import FiniteAlgebra
from app.services.dalg.cotangent import (
    CotangentComplex,
    KahlerModule,
    coefficient_algebra,
    cotangent_complex,
    de_rham_matrix,
    form_basis,
    kahler,
    koszul_data,
)
from app.services.dalg.hodge import THEORIES, hodge_graded_pieces, parse_theory
from app.services.dalg.infinitesimal import (
    IAdicFiltration,
    QrspReport,
    iadic_filtration,
    infinitesimal_stub,
    padic_multiplication_check,
    qrsp_truncated_check,
)
from app.services.dalg.crystalline import (
    CrystallizationComparison,
    PdAlgebraStub,
    crystallization_gr_compare,
    crystallization_stub_map,
    derham_stub,
    free_crystalline_stub,
    free_crystalline_summands,
    pd_envelope_stub,
    stub_map_gr_scalars,
)
from app.services.dalg.hochschild import hkr_graded_ranks, hochschild_complex, hochschild_stub
from app.services.dalg.circle import (
    CircleComparison,
    DMinusDual,
    bar_complex,
    circle_comparison,
    d_minus,
    filtered_circle_stub,
)
from app.services.dalg.monads import (
    FLAVORS,
    TorInterference,
    graded_free_table,
    parse_flavor,
    tor_interference_example,
)

__all__ = [
    "AlgebraPresentation",
    "parse_polynomial",
    "FiniteAlgebra",
    "CotangentComplex",
    "KahlerModule",
    "coefficient_algebra",
    "cotangent_complex",
    "de_rham_matrix",
    "form_basis",
    "kahler",
    "koszul_data",
    "THEORIES",
    "hodge_graded_pieces",
    "parse_theory",
    "IAdicFiltration",
    "QrspReport",
    "iadic_filtration",
    "infinitesimal_stub",
    "padic_multiplication_check",
    "qrsp_truncated_check",
    "CrystallizationComparison",
    "PdAlgebraStub",
    "crystallization_gr_compare",
    "crystallization_stub_map",
    "derham_stub",
    "free_crystalline_stub",
    "free_crystalline_summands",
    "pd_envelope_stub",
    "stub_map_gr_scalars",
    "hkr_graded_ranks",
    "hochschild_complex",
    "hochschild_stub",
    "CircleComparison",
    "DMinusDual",
    "bar_complex",
    "circle_comparison",
    "d_minus",
    "filtered_circle_stub",
    "FLAVORS",
    "TorInterference",
    "graded_free_table",
    "parse_flavor",
    "tor_interference_example",
]
