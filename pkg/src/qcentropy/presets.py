"""Named scenarios for each figure panel family."""
from __future__ import annotations

from .config import ScenarioConfig
from .errors import ConfigError
from .model import CHAOTIC_ALPHA, REGULAR_ALPHA

_REGIMES = {"regular": REGULAR_ALPHA, "chaotic": CHAOTIC_ALPHA}
_ENERGY_BY_LETTER = {"a": 1.5, "d": 1.5, "b": 15.0, "e": 15.0, "c": 150.0, "f": 150.0}


def _build() -> dict[str, ScenarioConfig]:
    out = {}
    # Gaussian on the diagonal periodic orbit; a/d, b/e, c/f share a run
    # (linear and von Neumann entropy panels).
    for fig, alpha in (("fig2", REGULAR_ALPHA), ("fig3", CHAOTIC_ALPHA)):
        for letter, E0 in _ENERGY_BY_LETTER.items():
            name = f"{fig}{letter}"
            out[name] = ScenarioConfig(name, alpha, E0, "gaussian_diagonal")
    # Gaussian launched along a channel.
    for fig, E0 in (("fig4", 15.0), ("fig5", 150.0)):
        for regime, alpha in _REGIMES.items():
            for axis in ("x", "y"):
                name = f"{fig}-{regime}-{axis}"
                out[name] = ScenarioConfig(name, alpha, E0, f"gaussian_channel_{axis}")
    for regime, alpha in _REGIMES.items():
        name = f"fig6-{regime}"
        out[name] = ScenarioConfig(name, alpha, 15.0, "cat_channel", companion=True)
        for E0 in (15.0, 150.0):
            name = f"fig7-{regime}-{int(E0)}"
            out[name] = ScenarioConfig(name, alpha, E0, "bell")
    return out


PRESETS = _build()

FAMILIES = {
    "fig2": ["fig2a", "fig2b", "fig2c"],
    "fig3": ["fig3a", "fig3b", "fig3c"],
    "fig4": ["fig4-regular-x", "fig4-regular-y", "fig4-chaotic-x", "fig4-chaotic-y"],
    "fig5": ["fig5-regular-x", "fig5-regular-y", "fig5-chaotic-x", "fig5-chaotic-y"],
    "fig6": ["fig6-regular", "fig6-chaotic"],
    "fig7": ["fig7-regular-15", "fig7-chaotic-15", "fig7-regular-150", "fig7-chaotic-150"],
}


def preset_names() -> list[str]:
    return sorted(PRESETS) + sorted(FAMILIES)


def preset(name: str) -> ScenarioConfig:
    try:
        return PRESETS[name].replace()
    except KeyError:
        hint = ", ".join(preset_names())
        raise ConfigError(f"unknown preset {name!r}; known presets: {hint}", "preset") from None


def expand(name: str) -> list[ScenarioConfig]:
    """A single preset, or every member of a figure family."""
    if name in FAMILIES:
        return [preset(n) for n in FAMILIES[name]]
    return [preset(name)]
