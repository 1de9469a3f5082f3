"""Flux field preset registry and loaders.

Presets are bundled field descriptions selectable by name on the command line.
They go through the same schema as user-supplied JSON, so callers get
deterministic diagnostics on failure.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from gridforge.config import get_settings
from gridforge.flux.fields import AnalyticField, FluxField
from gridforge.shared.errors import ConfigurationError

_FIELD_ADAPTER: TypeAdapter[Any] = TypeAdapter(AnalyticField)


class FieldPresetMetadata(BaseModel):
    """Metadata for selection lists and help output."""

    id: str = Field(min_length=1)
    name: str = Field(min_length=1)
    description: str = Field(min_length=1)
    closed_contours: bool
    tags: list[str] = Field(default_factory=list)


_PRESET_METADATA: dict[str, FieldPresetMetadata] = {
    "annulus": FieldPresetMetadata(
        id="annulus",
        name="Annulus",
        description="Concentric circles psi = (x^2 + y^2)/2; exact polar and log-polar oracles.",
        closed_contours=True,
        tags=["oracle", "circular"],
    ),
    "harmonic": FieldPresetMetadata(
        id="harmonic",
        name="Harmonic log",
        description="psi = ln r, a harmonic flux whose orthogonal grid is already conformal.",
        closed_contours=True,
        tags=["oracle", "harmonic"],
    ),
    "power_four": FieldPresetMetadata(
        id="power_four",
        name="R^4",
        description="psi = R^4, a Grad-Shafranov solution used for the conformality ratio.",
        closed_contours=False,
        tags=["validation"],
    ),
    "product_square": FieldPresetMetadata(
        id="product_square",
        name="R^2 Z^2",
        description="psi = R^2 Z^2, an equilibrium used for the conformality ratio.",
        closed_contours=False,
        tags=["validation"],
    ),
    "solovev": FieldPresetMetadata(
        id="solovev",
        name="Solovev",
        description="ITER-like up-down asymmetric Solovev equilibrium (kappa=1.75, delta=0.47).",
        closed_contours=True,
        tags=["equilibrium", "tokamak"],
    ),
}


def _preset_payload(preset_id: str) -> dict[str, Any]:
    if preset_id == "solovev":
        return {"type": "solovev", "amplitude": get_settings().solovev_amplitude}
    return {"type": preset_id}


def list_field_presets() -> list[FieldPresetMetadata]:
    return [_PRESET_METADATA[key] for key in sorted(_PRESET_METADATA)]


def get_field_preset_metadata(preset_id: str) -> FieldPresetMetadata:
    try:
        return _PRESET_METADATA[preset_id]
    except KeyError as exc:
        available = ", ".join(sorted(_PRESET_METADATA))
        raise ConfigurationError(
            f"Unknown field preset id '{preset_id}'. Available: {available}"
        ) from exc


def load_field_preset(preset_id: str) -> FluxField:
    get_field_preset_metadata(preset_id)
    return load_field_from_dict(_preset_payload(preset_id))


def load_field_from_dict(data: dict[str, Any]) -> FluxField:
    try:
        field: FluxField = _FIELD_ADAPTER.validate_python(data)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid flux field configuration: {exc}") from exc
    return field


def load_field_from_file(path: str | Path) -> FluxField:
    raw = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"Flux field file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("Flux field file must contain a JSON object")
    return load_field_from_dict(data)


def resolve_field(selector: str | dict[str, Any] | FluxField) -> FluxField:
    """Resolve a preset name, a JSON file path or an inline description."""
    if isinstance(selector, FluxField):
        return selector
    if isinstance(selector, dict):
        return load_field_from_dict(selector)
    if selector in _PRESET_METADATA:
        return load_field_preset(selector)
    if selector.endswith(".json") or Path(selector).is_file():
        return load_field_from_file(selector)
    return load_field_preset(selector)
