from app.services.filtered.graded import (
    GradedComplex,
    day_tensor_graded,
    dual_graded,
    graded_direct_sum,
    is_beilinson_static_graded,
    shear,
)
from app.services.filtered.stubs import (
    FilteredStub,
    ReesModule,
    SplitQuotient,
    associated_graded,
    constant_stub,
    day_tensor_stub,
    graded_pieces,
    ideal_power_stub,
    ins_stub,
    padic_stub,
    postnikov_stub,
    rees,
    split_quotient,
    strictify,
    stub_direct_sum,
    subcomplex,
    unit_stub,
)
from app.services.filtered.weighted import WeightedComplex, uniform_weights
from app.services.filtered.spectral import (
    CoherentCochain,
    coherent_cochain,
    e1_page,
    is_beilinson_static,
)

__all__ = [
    "GradedComplex",
    "day_tensor_graded",
    "dual_graded",
    "graded_direct_sum",
    "is_beilinson_static_graded",
    "shear",
    "FilteredStub",
    "ReesModule",
    "SplitQuotient",
    "associated_graded",
    "constant_stub",
    "day_tensor_stub",
    "graded_pieces",
    "ideal_power_stub",
    "ins_stub",
    "padic_stub",
    "postnikov_stub",
    "rees",
    "split_quotient",
    "strictify",
    "stub_direct_sum",
    "subcomplex",
    "unit_stub",
    "WeightedComplex",
    "uniform_weights",
    "CoherentCochain",
    "coherent_cochain",
    "e1_page",
    "is_beilinson_static",
]
