"""Perfect space-time block codes: construction, verification and simulation."""

from ._core import (
    CodeSpec,
    build_code,
    crt,
    encode,
    example_2x2,
    generator,
    is_prime,
    ld_matrices,
    min_det,
    mod_order,
    nonnorm,
    odd_lattice,
    power_uniformity,
    primitive_root,
    simulate,
    split_prime,
    validate_gamma,
    vectorization_matrix,
    version,
)

__all__ = [
    "CodeSpec",
    "build_code",
    "crt",
    "encode",
    "example_2x2",
    "generator",
    "is_prime",
    "ld_matrices",
    "min_det",
    "mod_order",
    "nonnorm",
    "odd_lattice",
    "power_uniformity",
    "primitive_root",
    "simulate",
    "split_prime",
    "validate_gamma",
    "vectorization_matrix",
    "version",
]
