"""Analytic flux functions and equilibrium validation."""

from gridforge.flux.fields import (
    DEFAULT_SOLOVEV_COEFFICIENTS,
    DEFAULT_SOLOVEV_R0,
    AnalyticField,
    AnnulusField,
    FluxField,
    HarmonicLogField,
    PowerFourField,
    ProductSquareField,
    SolovevField,
    eval_jet,
    find_o_point,
    solovev_basis,
    solovev_particular,
)
from gridforge.flux.models import FloatArray, FluxJet, Laplacian
from gridforge.flux.presets import (
    FieldPresetMetadata,
    get_field_preset_metadata,
    list_field_presets,
    load_field_from_dict,
    load_field_from_file,
    load_field_preset,
    resolve_field,
)
from gridforge.flux.validation import (
    conformal_condition,
    grad_shafranov_operator,
    gs_residual,
    laplacian_of,
)

__all__ = [
    "DEFAULT_SOLOVEV_COEFFICIENTS",
    "DEFAULT_SOLOVEV_R0",
    "AnalyticField",
    "AnnulusField",
    "FieldPresetMetadata",
    "FloatArray",
    "FluxField",
    "FluxJet",
    "HarmonicLogField",
    "Laplacian",
    "PowerFourField",
    "ProductSquareField",
    "SolovevField",
    "conformal_condition",
    "eval_jet",
    "find_o_point",
    "get_field_preset_metadata",
    "grad_shafranov_operator",
    "gs_residual",
    "laplacian_of",
    "list_field_presets",
    "load_field_from_dict",
    "load_field_from_file",
    "load_field_preset",
    "resolve_field",
    "solovev_basis",
    "solovev_particular",
]
