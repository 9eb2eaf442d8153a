"""Per-transition dichotomy: a non-negative multicycle through ``t`` or a QRF ranking ``t``.

``system_A(v, t)`` asks for a cycle flow ``mu`` with ``U mu >= 0``,
``mu >= 0``, ``F mu = 0`` and ``mu(t) >= 1``. ``system_B(v, t)`` asks for
``c >= 0`` and ``w`` with ``c^T U - w^T F <= 0`` and ``<= -1`` in column
``t``. By Farkas' lemma exactly one is satisfiable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from .graph import MultiCycle, extract_multicycle
from .linmap import LinMap
from .model import Vass, incidence_matrix, update_matrix
from .ratlp import LpProblem, Optimal, scale_to_integer, solve_lp


def _index(v: Vass, t: int) -> int:
    if not v.has_transition(t):
        raise KeyError(f"unknown transition id {t}")
    return v.transition_ids.index(t)


def system_A(v: Vass, t: int) -> LpProblem:
    j = _index(v, t)
    n = len(v.transitions)
    U = update_matrix(v).tolist()
    rows = [tuple(-x for x in row) for row in U]
    pick = [0] * n
    pick[j] = -1
    rows.append(tuple(pick))
    return LpProblem(
        objective=(0,) * n,
        a_ub=tuple(rows),
        b_ub=(0,) * v.dim + (-1,),
        a_eq=tuple(tuple(r) for r in incidence_matrix(v).tolist()),
        b_eq=(0,) * len(v.states),
    )


def system_B(v: Vass, t: int) -> LpProblem:
    """Variables ``c`` (d, non-negative) then ``w`` (one per state, free)."""
    j = _index(v, t)
    U = update_matrix(v).tolist()
    F = incidence_matrix(v).tolist()
    rows = []
    for k, tr in enumerate(v.transitions):
        rows.append(
            tuple(U[i][k] for i in range(v.dim)) + tuple(-F[q][k] for q in range(len(v.states)))
        )
    rhs = [0] * len(v.transitions)
    rhs[j] = -1
    nvars = v.dim + len(v.states)
    return LpProblem(
        objective=(0,) * nvars,
        a_ub=tuple(rows),
        b_ub=tuple(rhs),
        nonneg=(True,) * v.dim + (False,) * len(v.states),
    )


def nonneg_multicycle_through(v: Vass, t: int) -> Optional[MultiCycle]:
    res = solve_lp(system_A(v, t))
    if not isinstance(res, Optimal):
        return None
    mu, _ = scale_to_integer(res.point)
    return extract_multicycle(v, dict(zip(v.transition_ids, mu)))


def qrf_ranking_t(v: Vass, t: int) -> Optional[LinMap]:
    """A QRF with ``t`` ranked, rescaled so no column value lies in ``(-1, 0)``."""
    res = solve_lp(system_B(v, t))
    if not isinstance(res, Optimal):
        return None
    g = LinMap(res.point[: v.dim], dict(zip(v.states, res.point[v.dim:])))
    cols = g.column_values(v).values()
    k = max(x for x in cols if x < 0)
    return g.scaled(Fraction(1) / abs(k))


@dataclass(frozen=True)
class FarkasVerdict:
    transition: int
    multicycle: Optional[MultiCycle] = None
    ranking: Optional[LinMap] = None


def farkas_verdicts(v: Vass) -> Dict[int, FarkasVerdict]:
    out = {}
    for t in v.transition_ids:
        out[t] = FarkasVerdict(t, nonneg_multicycle_through(v, t), qrf_ranking_t(v, t))
    return out
