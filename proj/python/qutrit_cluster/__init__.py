"""Qutrit adiabatic annealing for 2-D clustering."""

from ._core import (
    MAX_QUTRITS,
    SizeLimitError,
    SpecError,
    anneal,
    argmin_states,
    basis_digits,
    cost,
    distance_matrix,
    generate_instance,
    oracle_min,
    preset_names,
    preset_spec,
    problem_hamiltonian,
    run_preset,
    run_spec,
)

__all__ = [
    "MAX_QUTRITS",
    "SizeLimitError",
    "SpecError",
    "anneal",
    "argmin_states",
    "basis_digits",
    "cost",
    "distance_matrix",
    "generate_instance",
    "oracle_min",
    "preset_names",
    "preset_spec",
    "problem_hamiltonian",
    "run_preset",
    "run_spec",
]
