from app.services.dold_kan.power_functors import (
    PowerFunctorKind,
    functor_rank,
    image_of_monomial,
    monomial_basis,
    power_on_free,
    stable_sort_sign,
)
from app.services.dold_kan.simplicial import (
    SimplicialModule,
    apply_functor,
    dk_gamma,
    gamma_level,
    normalize,
)
from app.services.dold_kan.derived import derived_power, derived_power_simplicial, lsym_total
from app.services.dold_kan.koszul import (
    BaseRingAlgebra,
    KoszulInput,
    koszul_exterior,
    koszul_power,
    koszul_sym,
)
from app.services.dold_kan.admissible import AdmissibleClass, admissible_sequences, goerss_ranks

__all__ = [
    "PowerFunctorKind",
    "functor_rank",
    "image_of_monomial",
    "monomial_basis",
    "power_on_free",
    "stable_sort_sign",
    "SimplicialModule",
    "apply_functor",
    "dk_gamma",
    "gamma_level",
    "normalize",
    "derived_power",
    "derived_power_simplicial",
    "lsym_total",
    "BaseRingAlgebra",
    "KoszulInput",
    "koszul_exterior",
    "koszul_power",
    "koszul_sym",
    "AdmissibleClass",
    "admissible_sequences",
    "goerss_ranks",
]
