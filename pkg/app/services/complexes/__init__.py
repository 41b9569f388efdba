from app.services.complexes.chain_complex import ChainComplex, ChainMap
from app.services.complexes.homology import (
    HomologyPresentation,
    HomologyTable,
    betti_numbers,
    homology,
    homology_presentation,
    induced_map,
    is_acyclic,
)
from app.services.complexes.operations import (
    MappingCylinder,
    change_ring,
    change_ring_map,
    cone,
    cone_inclusion,
    cone_projection,
    direct_sum,
    direct_sum_map,
    dual,
    euler_characteristic,
    is_quasi_iso,
    long_exact_sequence_check,
    mapping_cylinder,
    minimal_model,
    shift,
    shift_map,
    tensor,
    tensor_layout,
    tensor_maps,
    truncate_connective,
    truncation_inclusion,
)

__all__ = [
    "ChainComplex",
    "ChainMap",
    "HomologyPresentation",
    "HomologyTable",
    "betti_numbers",
    "homology",
    "homology_presentation",
    "induced_map",
    "is_acyclic",
    "MappingCylinder",
    "change_ring",
    "change_ring_map",
    "cone",
    "cone_inclusion",
    "cone_projection",
    "direct_sum",
    "direct_sum_map",
    "dual",
    "euler_characteristic",
    "is_quasi_iso",
    "long_exact_sequence_check",
    "mapping_cylinder",
    "minimal_model",
    "shift",
    "shift_map",
    "tensor",
    "tensor_layout",
    "tensor_maps",
    "truncate_connective",
    "truncation_inclusion",
]
