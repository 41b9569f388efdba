from typing import Callable, Dict

from sympy import isprime

from app.core.errors import InputError
from app.services.dalg import AlgebraPresentation

CIRCLE_PRESET = "filtered-circle"

_PRESETS: Dict[str, Callable[[int], AlgebraPresentation]] = {
    "Fp-over-Z": lambda p: AlgebraPresentation.parse("Z", [], [str(p)], "regseq"),
    "Zx": lambda p: AlgebraPresentation.parse("Z", ["x"], [], "smooth"),
    "Zxy": lambda p: AlgebraPresentation.parse("Z", ["x", "y"], [], "smooth"),
    "hypersurface-x2": lambda p: AlgebraPresentation.parse("Z", ["x"], ["x^2"], "regseq"),
    "x-over-Zx": lambda p: AlgebraPresentation.parse("Z", ["x"], ["x"], "regseq"),
    "Qx-x2": lambda p: AlgebraPresentation.parse("Q", ["x"], ["x^2"], "regseq"),
}


def preset_names() -> list[str]:
    return sorted([*_PRESETS, CIRCLE_PRESET])


def preset(name: str, p: int = 2) -> AlgebraPresentation:
    """The named example presentation; ``p`` only matters for Fp-over-Z."""
    if name == CIRCLE_PRESET:
        raise InputError("filtered-circle is not an algebra presentation; use the circle subcommand")
    factory = _PRESETS.get(name)
    if factory is None:
        raise InputError(f"unknown preset {name!r}; choose from {preset_names()}")
    if name == "Fp-over-Z" and not isprime(p):
        raise InputError(f"--p must be prime, got {p}")
    return factory(p)
