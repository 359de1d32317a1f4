"""Mahler discrete residues and Mahler summability of rational functions."""

from .field import (
    FieldDescriptor,
    RadicalMonomial,
    TowerElement,
    CycloElement,
    embed,
    invert,
    monomial_eq,
    monomial_pow_p,
    monomial_value,
    root_of_unity,
)

__version__ = "0.1.0"
