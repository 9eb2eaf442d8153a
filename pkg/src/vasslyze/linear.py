"""Linear termination complexity.

For a strongly connected VASS the LP

    maximize 1.rho  subject to  rho >= 0,  U rho >= -1,  F rho = 0

is bounded iff the termination complexity is linear, in which case its
optimum ``c`` gives ``L(n) ~ c n``. The dual optimum is a ranking function;
an unbounded ray is a non-negative cycle flow (at least quadratic).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .graph import (
    MultiCycle,
    NotStronglyConnected,
    Path,
    covering_cycle,
    extract_multicycle,
    is_strongly_connected,
    sccs,
)
from .linmap import LinMap
from .model import Config, Vass, incidence_matrix, max_update, update_matrix
from .ratlp import LpProblem, Optimal, Unbounded, scale_to_integer, solve_lp
from .verify import check_linmap

__all__ = [
    "Bounded",
    "Computation",
    "LinMap",
    "LinearResult",
    "LinearUnbounded",
    "analyze_linear",
    "analyze_linear_general",
    "build_linear_witness",
    "linear_lp",
    "make_positive",
    "ranking_from_dual",
]


class InvalidWitness(ValueError):
    pass


class BelowThreshold(ValueError):
    pass


@dataclass(frozen=True)
class Bounded:
    c: Fraction
    rf: LinMap
    rho: Tuple[Fraction, ...]

    bounded = True


@dataclass(frozen=True)
class LinearUnbounded:
    ray: Tuple[Fraction, ...]

    bounded = False


LinearResult = Union[Bounded, LinearUnbounded]


def _require_sc(v: Vass) -> None:
    if not is_strongly_connected(v):
        raise NotStronglyConnected("expected a strongly connected VASS")


def linear_lp(v: Vass) -> LpProblem:
    """Variables: one flow per transition (declaration order).

    Rows: ``-U rho <= 1`` (one per counter), then ``F rho = 0`` (one per state).
    """
    _require_sc(v)
    U = update_matrix(v).tolist()
    F = incidence_matrix(v).tolist()
    n = len(v.transitions)
    return LpProblem(
        objective=(1,) * n,
        a_ub=tuple(tuple(-x for x in row) for row in U),
        b_ub=(1,) * v.dim,
        a_eq=tuple(tuple(row) for row in F),
        b_eq=(0,) * len(v.states),
        var_names=tuple(t.label for t in v.transitions),
    )


def ranking_from_dual(v: Vass, dual: Sequence[Fraction]) -> LinMap:
    """Read a ranking function off a dual solution of :func:`linear_lp`.

    The counter rows give the normal, the state rows give the weights.
    """
    if dual is None or len(dual) != v.dim + len(v.states):
        raise InvalidWitness("dual vector has the wrong length (primal unbounded?)")
    f = LinMap(tuple(dual[: v.dim]), dict(zip(v.states, dual[v.dim:])))
    if not check_linmap(v, f).is_rf:
        raise InvalidWitness("dual solution does not yield a ranking function")
    return f


def analyze_linear(v: Vass) -> LinearResult:
    res = solve_lp(linear_lp(v))
    if isinstance(res, Optimal):
        return Bounded(res.value, ranking_from_dual(v, res.dual), res.point)
    if isinstance(res, Unbounded):
        return LinearUnbounded(res.ray)
    raise AssertionError("the linear LP is always feasible (rho = 0)")


def make_positive(v: Vass, rf: LinMap, eps: Optional[Fraction] = None) -> LinMap:
    """Turn an RF into one with strictly positive normal: ``2c + eps``, ``2w``.

    ``eps`` defaults to ``1 / (d (maxup + 1))``, which keeps ``eps * sum(u) <= 1``.
    """
    if not check_linmap(v, rf).is_rf:
        raise InvalidWitness("input is not a ranking function")
    if eps is None:
        eps = Fraction(1, v.dim * (max_update(v) + 1))
    eps = Fraction(eps)
    if eps <= 0 or any(eps * sum(t.update) > 1 for t in v.transitions):
        raise ValueError(f"eps={eps} violates eps * sum(u) <= 1")
    return LinMap(
        tuple(2 * c + eps for c in rf.normal),
        {q: 2 * w for q, w in rf.weights.items()},
    )


@dataclass(frozen=True)
class SccLinear:
    vass: Vass
    result: LinearResult


@dataclass(frozen=True)
class GeneralLinear:
    linear: bool
    components: Tuple[SccLinear, ...]


def analyze_linear_general(v: Vass) -> GeneralLinear:
    comps = tuple(SccLinear(s, analyze_linear(s)) for s in sccs(v))
    return GeneralLinear(all(c.result.bounded for c in comps), comps)


@dataclass(frozen=True)
class Computation:
    start: Config
    transitions: Tuple[int, ...]
    configs: Tuple[Config, ...]

    def __len__(self) -> int:
        return len(self.transitions)

    @property
    def final(self) -> Config:
        return self.configs[-1]


def replay(v: Vass, start: Config, tids: Sequence[int]) -> List[Config]:
    """Execute transitions from ``start``; raises if a counter would go negative."""
    state, counters = start.state, list(start.counters)
    out = [start]
    for i, tid in enumerate(tids):
        t = v.transition(tid)
        if t.source != state:
            raise InvalidWitness(f"step {i}: transition {t.label} does not leave {state}")
        for j, u in enumerate(t.update):
            counters[j] += u
            if counters[j] < 0:
                raise InvalidWitness(f"step {i}: counter {j} drops below zero")
        state = t.target
        out.append(Config(state, tuple(counters)))
    return out


def _schedule(v: Vass, cover: Path, m: MultiCycle, copies: int) -> List[int]:
    """Covering cycle with ``copies`` of every cycle of ``m`` spliced in at its start state."""
    by_start: Dict[str, List[Tuple[Tuple[int, ...], int]]] = {}
    for cyc, mult in m.cycles.items():
        by_start.setdefault(v.transition(cyc[0]).source, []).append((cyc, mult))
    out: List[int] = []
    done = set()
    states = cover.states(v)
    for pos, tid in enumerate(cover.transitions):
        q = states[pos]
        if q not in done:
            done.add(q)
            for cyc, mult in by_start.get(q, []):
                out.extend(cyc * (mult * copies))
        out.append(tid)
    return out


def build_linear_witness(v: Vass, rho: Sequence[Fraction], n: int) -> Computation:
    """Computation of length close to ``c n`` from ``p (n,...,n)``.

    Scales ``rho`` to an integer flow ``mu = m rho``, splices ``isqrt(n)``
    copies of its multicycle into a covering cycle, and repeats the result
    ``n'`` times, where ``n'`` keeps every counter non-negative.
    """
    _require_sc(v)
    if len(rho) != len(v.transitions):
        raise ValueError("rho must have one entry per transition")
    mu, mult = scale_to_integer(rho)
    c = sum((Fraction(r) for r in rho), Fraction(0))
    multicycle = extract_multicycle(v, {t.id: x for t, x in zip(v.transitions, mu)})
    cover = covering_cycle(v)
    s = math.isqrt(n)
    l = len(cover)
    maxup = max_update(v)
    length = l + s * c * mult
    num = n - length * maxup
    den = maxup * l + mult * s
    reps = math.floor(num / den) if den else 0
    if reps < 1:
        raise BelowThreshold(f"n={n} is below the construction threshold")
    one = _schedule(v, cover, multicycle, s)
    tids = one * reps
    start = Config(cover.start, (n,) * v.dim)
    configs = replay(v, start, tids)
    return Computation(start, tuple(tids), tuple(configs))
