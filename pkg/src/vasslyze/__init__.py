"""Termination-complexity analysis for vector addition systems with states."""

__version__ = "0.1.0"

from .model import Config, Transition, Vass, make_vass, parse_vass, format_vass  # noqa: E402
from .decompose import classify, classify_general, decompose  # noqa: E402
from .linear import analyze_linear  # noqa: E402

__all__ = [
    "Config",
    "Transition",
    "Vass",
    "analyze_linear",
    "classify",
    "classify_general",
    "decompose",
    "format_vass",
    "make_vass",
    "parse_vass",
]
