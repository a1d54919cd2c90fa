"""Compressive phase retrieval with sparse-graph codes."""

from ._phasecode import (
    AnchorError,
    CodeEnsemble,
    DesignRow,
    MeasurementSet,
    ModulationParams,
    ParameterError,
    align_global_phase,
    chain_roundtrip,
    de_trajectory,
    decode,
    design_row,
    encode,
    error_floor,
    ff_nonsparse_roundtrip,
    ff_verify,
    generate_signal,
    giant_component_range,
    instability_range,
    simulate,
)

__all__ = [
    "AnchorError",
    "CodeEnsemble",
    "DesignRow",
    "MeasurementSet",
    "ModulationParams",
    "ParameterError",
    "align_global_phase",
    "chain_roundtrip",
    "de_trajectory",
    "decode",
    "design_row",
    "encode",
    "error_floor",
    "ff_nonsparse_roundtrip",
    "ff_verify",
    "generate_signal",
    "giant_component_range",
    "instability_range",
    "simulate",
]
