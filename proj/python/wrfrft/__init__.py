"""Windowed RFRFT coherent integration (C++ core)."""

from ._core import (
    WrfrftError,
    alpha_for,
    frft,
    load_echo,
    preset_names,
    run_config,
    save_echo,
    search,
    synthesize,
)

__all__ = [
    "WrfrftError",
    "alpha_for",
    "frft",
    "load_echo",
    "preset_names",
    "run_config",
    "save_echo",
    "search",
    "synthesize",
]
