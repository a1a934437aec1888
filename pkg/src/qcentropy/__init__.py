"""Quantum and classical entropies of two coupled quartic oscillators."""
from .config import ScenarioConfig, load_config, validate
from .model import CHAOTIC_ALPHA, REGULAR_ALPHA, ModelParams
from .presets import PRESETS, preset
from .runner import EntropySeries, run_scenario

__version__ = "0.1.0"

__all__ = ["ScenarioConfig", "load_config", "validate", "ModelParams", "REGULAR_ALPHA",
           "CHAOTIC_ALPHA", "PRESETS", "preset", "EntropySeries", "run_scenario"]
