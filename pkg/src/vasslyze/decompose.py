"""Polynomial bounds by recursive decomposition along maximal quasi-ranking functions.

``decompose`` ranks as many transitions as one QRF can, deletes them, and
recurses on the SCCs of what stays neutral. The recursion depth plus one is
the degree ``k`` of the bound; a level where nothing can be ranked means a
non-negative multicycle exists and the VASS does not terminate. ``classify``
adds the positive-QRF test that decides whether ``k`` is tight (Theta) or
only a lower bound (Omega).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .farkas import nonneg_multicycle_through
from .graph import MultiCycle, NotStronglyConnected, is_strongly_connected, sccs
from .linear import LinearResult, analyze_linear
from .linmap import LinMap
from .model import Vass, incidence_matrix, update_matrix
from .ratlp import Optimal, LpProblem, solve_lp
from .verify import check_linmap

INF = math.inf


class InternalError(AssertionError):
    """An invariant guaranteed by the theory failed; indicates a solver bug."""


def _column_rows(v: Vass) -> List[Tuple[Fraction, ...]]:
    """Row ``k`` holds the coefficients of ``(c, w)`` in column ``k`` of ``c^T U - w^T F``."""
    U = update_matrix(v).tolist()
    F = incidence_matrix(v).tolist()
    return [
        tuple(U[i][k] for i in range(v.dim)) + tuple(-F[q][k] for q in range(len(v.states)))
        for k in range(len(v.transitions))
    ]


def max_qrf_lp(v: Vass) -> LpProblem:
    """Variables ``c`` (d, >= 0), ``w`` (|Q|, free), ``b`` (|T|, in [0, 1]); maximise ``sum b``."""
    d, nq, nt = v.dim, len(v.states), len(v.transitions)
    rows = []
    for k, col in enumerate(_column_rows(v)):
        b = [0] * nt
        b[k] = 1
        rows.append(col + tuple(b))
    for k in range(nt):
        b = [0] * (d + nq + nt)
        b[d + nq + k] = 1
        rows.append(tuple(b))
    return LpProblem(
        objective=(0,) * (d + nq) + (1,) * nt,
        a_ub=tuple(rows),
        b_ub=(0,) * nt + (1,) * nt,
        nonneg=(True,) * d + (False,) * nq + (True,) * nt,
    )


def max_qrf(v: Vass) -> Tuple[LinMap, FrozenSet[int]]:
    """A QRF whose ranked set contains the ranked set of every other QRF."""
    res = solve_lp(max_qrf_lp(v))
    if not isinstance(res, Optimal):
        raise InternalError("LP for the maximal QRF must have an optimum")
    d, nq = v.dim, len(v.states)
    f = LinMap(res.point[:d], dict(zip(v.states, res.point[d:d + nq])))
    b = res.point[d + nq:]
    if any(x not in (0, 1) for x in b):
        raise InternalError(f"non-integral ranking indicators {b}")
    check = check_linmap(v, f)
    ranked = frozenset(t for t, x in zip(v.transition_ids, b) if x == 1)
    if not check.is_qrf or check.ranked != ranked:
        raise InternalError("optimum of the maximal-QRF LP is not a QRF with the claimed ranking")
    return f, ranked


def positive_qrf_lp(v: Vass) -> LpProblem:
    """Variables ``c``, ``w``, ``eps``: maximise ``eps`` subject to
    ``c^T U - w^T F <= 0``, ``c >= eps`` and ``eps <= 1``."""
    d, nq, nt = v.dim, len(v.states), len(v.transitions)
    rows = [col + (0,) for col in _column_rows(v)]
    rhs = [0] * nt
    for i in range(d):
        row = [0] * (d + nq + 1)
        row[i] = -1
        row[-1] = 1
        rows.append(tuple(row))
        rhs.append(0)
    rows.append((0,) * (d + nq) + (1,))
    rhs.append(1)
    return LpProblem(
        objective=(0,) * (d + nq) + (1,),
        a_ub=tuple(rows),
        b_ub=tuple(rhs),
        nonneg=(True,) * d + (False,) * nq + (True,),
    )


def has_positive_qrf(v: Vass) -> Optional[LinMap]:
    """A QRF with strictly positive normal, or None.

    A positive optimum of :func:`positive_qrf_lp` is rescaled so every
    non-neutral column is at most ``-1``.
    """
    d, nq = v.dim, len(v.states)
    res = solve_lp(positive_qrf_lp(v))
    if not isinstance(res, Optimal) or res.value <= 0:
        return None
    g = LinMap(res.point[:d], dict(zip(v.states, res.point[d:d + nq])))
    negative = [-x for x in g.column_values(v).values() if x < 0]
    if negative:
        g = g.scaled(1 / min(negative))
    return g


@dataclass
class DecomposeNode:
    vass: Vass
    depth: int
    qrf: LinMap
    ranked: FrozenSet[int]
    neutral: FrozenSet[int]
    result: Union[int, float] = 0
    children: List["DecomposeNode"] = field(default_factory=list)

    @property
    def transitions(self) -> Tuple[int, ...]:
        return self.vass.transition_ids

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class DecomposeResult:
    k: Union[int, float]
    root: DecomposeNode
    offending: Optional[DecomposeNode] = None

    @property
    def depth(self) -> int:
        """Deepest nested call below the top-level one (top level is depth 0)."""
        return max(n.depth for n in self.root.walk())


def _decompose(v: Vass, depth: int) -> Tuple[DecomposeNode, Optional[DecomposeNode]]:
    f, ranked = max_qrf(v)
    neutral = frozenset(v.transition_ids) - ranked
    node = DecomposeNode(v, depth, f, ranked, neutral)
    if not ranked:
        node.result = INF
        return node, node
    if not neutral:
        node.result = 1
        return node, None
    best = 0
    for sub in sccs(v, neutral):
        child, bad = _decompose(sub, depth + 1)
        node.children.append(child)
        if bad is not None:
            node.result = INF
            return node, bad
        best = max(best, child.result)
    node.result = 1 + best
    return node, None


def decompose(v: Vass) -> DecomposeResult:
    if not v.transitions:
        raise ValueError("decompose needs at least one transition")
    if not is_strongly_connected(v):
        raise NotStronglyConnected("decompose expects a strongly connected VASS")
    root, bad = _decompose(v, 0)
    return DecomposeResult(root.result, root, bad)


TERMINATING = "terminating"
NON_TERMINATING = "non-terminating"


@dataclass
class SccReport:
    vass: Vass
    verdict: str
    k: Optional[int]
    tight: bool
    trace: DecomposeNode
    depth: int
    linear: LinearResult
    positive_qrf: Optional[LinMap] = None
    rf: Optional[LinMap] = None
    offending: Optional[Tuple[int, ...]] = None
    witness: Optional[MultiCycle] = None
    per_transition: Dict[int, MultiCycle] = field(default_factory=dict)

    @property
    def bound_kind(self) -> Optional[str]:
        if self.verdict != TERMINATING:
            return None
        return "theta" if self.tight else "omega"


@dataclass
class Report:
    verdict: str
    k: Optional[int]
    tight: bool
    components: List[SccReport]

    @property
    def bound_kind(self) -> Optional[str]:
        if self.verdict != TERMINATING:
            return None
        return "theta" if self.tight else "omega"


def _classify_scc(v: Vass) -> SccReport:
    result = decompose(v)
    lin = analyze_linear(v)
    pos = has_positive_qrf(v)
    tight = pos is not None
    if result.k == INF:
        bad = result.offending
        per = {}
        for t in bad.transitions:
            m = nonneg_multicycle_through(bad.vass, t)
            if m is None:
                raise InternalError(f"no non-negative multicycle through transition {t}")
            per[t] = m
        witness = MultiCycle()
        for m in per.values():
            witness = witness + m
        return SccReport(
            v, NON_TERMINATING, None, tight, result.root, result.depth, lin,
            positive_qrf=pos, offending=bad.transitions, witness=witness, per_transition=per,
        )
    k = int(result.k)
    if not 1 <= k <= v.dim:
        raise InternalError(f"degree {k} outside 1..{v.dim}")
    rf = lin.rf if lin.bounded else None
    return SccReport(v, TERMINATING, k, tight, result.root, result.depth, lin, positive_qrf=pos, rf=rf)


def _aggregate(components: List[SccReport]) -> Report:
    if any(c.verdict == NON_TERMINATING for c in components):
        return Report(NON_TERMINATING, None, False, components)
    k = max(c.k for c in components)
    return Report(TERMINATING, k, all(c.tight for c in components), components)


def classify(v: Vass) -> Report:
    """Classification of a strongly connected VASS."""
    if not is_strongly_connected(v):
        raise NotStronglyConnected("classify expects a strongly connected VASS; use classify_general")
    return _aggregate([_classify_scc(v)])


def classify_general(v: Vass, jobs: int = 1) -> Report:
    """Per-SCC classification; the aggregate degree is a valid lower bound,
    and tight when every SCC has a positive QRF."""
    parts = sccs(v)
    if jobs > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            comps = list(pool.map(_classify_scc, parts))
    else:
        comps = [_classify_scc(s) for s in parts]
    return _aggregate(comps)
