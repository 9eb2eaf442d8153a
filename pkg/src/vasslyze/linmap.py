"""Linear maps f(pv) = c.v + w(p) over VASS configurations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

from .model import Vass


@dataclass(frozen=True)
class LinMap:
    normal: Tuple[Fraction, ...]
    weights: Mapping[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(Fraction(c) for c in self.normal))
        object.__setattr__(self, "weights", {q: Fraction(w) for q, w in self.weights.items()})

    def __eq__(self, other):
        return (
            isinstance(other, LinMap)
            and self.normal == other.normal
            and dict(self.weights) == dict(other.weights)
        )

    def __hash__(self):
        return hash((self.normal, tuple(sorted(self.weights.items()))))

    def __call__(self, state: str, counters: Sequence[int]) -> Fraction:
        return sum((c * x for c, x in zip(self.normal, counters)), Fraction(0)) + self.weights[state]

    def scaled(self, k) -> "LinMap":
        k = Fraction(k)
        return LinMap(tuple(k * c for c in self.normal), {q: k * w for q, w in self.weights.items()})

    def column_value(self, v: Vass, tid: int) -> Fraction:
        """``c.u + w(target) - w(source)``: the change of f along the transition."""
        t = v.transition(tid)
        delta = sum((c * u for c, u in zip(self.normal, t.update)), Fraction(0))
        return delta + self.weights[t.target] - self.weights[t.source]

    def column_values(self, v: Vass) -> Dict[int, Fraction]:
        return {t.id: self.column_value(v, t.id) for t in v.transitions}

    @classmethod
    def zero(cls, v: Vass) -> "LinMap":
        return cls((Fraction(0),) * v.dim, {q: Fraction(0) for q in v.states})
