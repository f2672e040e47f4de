"""Python bindings for the shaplab simulators."""

from ._core import (
    DomainError,
    IntegrityError,
    ResourceError,
    classify,
    emit,
    exact_answer_prob,
    inner_product,
    mu1_tilde_density,
    qubits_sent,
    run,
    sample,
    shift_weights,
    verify_suite,
)

__all__ = [
    "DomainError",
    "IntegrityError",
    "ResourceError",
    "classify",
    "emit",
    "exact_answer_prob",
    "inner_product",
    "mu1_tilde_density",
    "qubits_sent",
    "run",
    "sample",
    "shift_weights",
    "verify_suite",
]
