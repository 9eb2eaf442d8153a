"""Independent witness checkers and desk-scale geometry validators.

Nothing here trusts the analysis: linear maps are checked by substitution,
multicycles by replaying their transitions, and the cycle-effect set ``Inc``
is enumerated explicitly (exponential, meant for small inputs only).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .graph import MultiCycle, is_simple_cycle
from .linmap import LinMap
from .model import Vass
from .ratlp import Optimal, lp_from_lists, scale_to_integer, solve_lp

NONE, QRF, POSITIVE_QRF, RF, POSITIVE_RF = "None", "QRF", "PositiveQRF", "RF", "PositiveRF"


class EnumerationLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    role: str = NONE
    columns: Dict[int, Fraction] = field(default_factory=dict)
    ranked: FrozenSet[int] = frozenset()
    neutral: FrozenSet[int] = frozenset()
    effect: Optional[Tuple[int, ...]] = None
    details: Tuple[str, ...] = ()

    @property
    def is_qrf(self) -> bool:
        return self.role != NONE

    @property
    def is_rf(self) -> bool:
        return self.role in (RF, POSITIVE_RF)

    @property
    def is_positive(self) -> bool:
        return self.role in (POSITIVE_QRF, POSITIVE_RF)


def check_linmap(v: Vass, f: LinMap) -> VerifyResult:
    """Classify ``f`` as RF / QRF (optionally positive) or reject it.

    A column value ``<= -1`` means ranked, ``== 0`` neutral; anything in
    ``(-1, 0)`` or above zero disqualifies the map.
    """
    if len(f.normal) != v.dim:
        raise ValueError(f"normal has length {len(f.normal)}, VASS has dimension {v.dim}")
    missing = [q for q in v.states if q not in f.weights]
    if missing:
        raise ValueError(f"no weight for states {missing}")
    cols = f.column_values(v)
    ranked = frozenset(t for t, x in cols.items() if x <= -1)
    neutral = frozenset(t for t, x in cols.items() if x == 0)
    problems = []
    if any(c < 0 for c in f.normal):
        problems.append("normal has a negative component")
    for t, x in cols.items():
        if t not in ranked and t not in neutral:
            problems.append(f"transition {v.transition(t).label} has column value {x}")
    if problems:
        return VerifyResult(False, NONE, cols, ranked, neutral, details=tuple(problems))
    positive = all(c > 0 for c in f.normal)
    if len(ranked) == len(cols):
        role = POSITIVE_RF if positive else RF
    else:
        role = POSITIVE_QRF if positive else QRF
    return VerifyResult(True, role, cols, ranked, neutral)


def check_multicycle(v: Vass, m: MultiCycle, require_nonneg: bool = False) -> VerifyResult:
    problems = []
    for cyc in m.cycles:
        if not all(v.has_transition(t) for t in cyc) or not is_simple_cycle(v, cyc):
            problems.append(f"{list(cyc)} is not a simple cycle of the VASS")
    if problems:
        return VerifyResult(False, details=tuple(problems))
    eff = m.effect(v)
    if require_nonneg and any(e < 0 for e in eff):
        problems.append(f"effect {eff} has a negative component")
    return VerifyResult(not problems, effect=eff, details=tuple(problems))


def simple_cycles(
    v: Vass, cap: int = 10**5, keep: Optional[Iterable[int]] = None
) -> Iterator[Tuple[int, ...]]:
    """Every simple cycle once, rooted at its smallest state (declaration order).

    ``keep`` restricts the search to a subset of transition ids.
    """
    order = {q: i for i, q in enumerate(v.states)}
    out: Dict[str, list] = {q: [] for q in v.states}
    kept = set(v.transition_ids if keep is None else keep)
    for t in v.transitions:
        if t.id in kept:
            out[t.source].append(t)
    count = 0
    for root in v.states:
        lo = order[root]
        path: List[int] = []
        on_path = {root}
        stack = [iter(out[root])]
        while stack:
            t = next(stack[-1], None)
            if t is None:
                stack.pop()
                if path:
                    on_path.discard(v.transition(path.pop()).target)
                continue
            if t.target == root:
                count += 1
                if count > cap:
                    raise EnumerationLimit(f"more than {cap} simple cycles")
                yield tuple(path) + (t.id,)
            elif order[t.target] > lo and t.target not in on_path:
                path.append(t.id)
                on_path.add(t.target)
                stack.append(iter(out[t.target]))


def inc_set(
    v: Vass, cap: int = 10**5, keep: Optional[Iterable[int]] = None
) -> Set[Tuple[int, ...]]:
    return {v.effect(c) for c in simple_cycles(v, cap, keep)}


@dataclass(frozen=True)
class HalfspaceResult:
    normal: Optional[Tuple[Fraction, ...]] = None
    coefficients: Optional[Tuple[int, ...]] = None

    @property
    def has_normal(self) -> bool:
        return self.normal is not None


def halfspace_or_witness(xs: Sequence[Sequence[int]], dim: int) -> HalfspaceResult:
    """Either a normal ``n > 0`` with ``x.n < 0`` for all ``x`` in ``xs``, or
    non-negative integer coefficients ``b != 0`` with ``sum b_i x_i >= 0``.

    Strict inequalities are scaled away: ``n >= 1`` and ``x.n <= -1``.
    """
    xs = [tuple(int(a) for a in x) for x in xs]
    for x in xs:
        if len(x) != dim:
            raise ValueError("vector of the wrong dimension")
    a_ub = [list(x) for x in xs]
    b_ub = [-1] * len(xs)
    for i in range(dim):
        row = [0] * dim
        row[i] = -1
        a_ub.append(row)
        b_ub.append(-1)
    res = solve_lp(lp_from_lists([0] * dim, a_ub, b_ub))
    if isinstance(res, Optimal):
        return HalfspaceResult(normal=res.point)

    # dual side: b >= 0, sum b >= 1, sum b_i x_i >= 0
    k = len(xs)
    a_ub = [[-xs[j][i] for j in range(k)] for i in range(dim)]
    b_ub = [0] * dim
    a_ub.append([-1] * k)
    b_ub.append(-1)
    res = solve_lp(lp_from_lists([-1] * k, a_ub, b_ub))
    if not isinstance(res, Optimal):
        raise AssertionError("neither half-space alternative holds")
    coeffs, _ = scale_to_integer(res.point)
    return HalfspaceResult(coefficients=coeffs)


def compensation_exists(
    v: Vass,
    f: LinMap,
    cyc_effect: Sequence[int],
    inc: Optional[Set[Tuple[int, ...]]] = None,
) -> Optional[Dict[Tuple[int, ...], Fraction]]:
    """Cone coefficients ``a >= 0`` over ``Inc`` with ``cyc_effect + sum a_i inc_i >= 0``.

    ``f`` must be a QRF with ``c_f . cyc_effect == 0``. For a maximal QRF a
    solution always exists, so ``None`` points at a bug upstream.
    """
    if len(cyc_effect) != v.dim:
        raise ValueError("effect has the wrong dimension")
    if not check_linmap(v, f).is_qrf:
        raise ValueError("f is not a quasi-ranking function")
    if sum(c * e for c, e in zip(f.normal, cyc_effect)) != 0:
        raise ValueError("effect is not orthogonal to the normal of f")
    vecs = sorted(inc_set(v) if inc is None else inc)
    if not vecs:
        return {} if all(e >= 0 for e in cyc_effect) else None
    k = len(vecs)
    a_ub = [[-vecs[j][i] for j in range(k)] for i in range(v.dim)]
    b_ub = list(cyc_effect)
    res = solve_lp(lp_from_lists([-1] * k, a_ub, b_ub))
    if not isinstance(res, Optimal):
        return None
    return {vecs[j]: a for j, a in enumerate(res.point) if a}
