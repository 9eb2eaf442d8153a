"""Brute-force termination complexity on small instances.

``L(n)`` is evaluated only from the configurations ``p(n, ..., n)``. This
is enough because ``L(p, v) <= L(p, v')`` whenever ``v <= v'`` componentwise:
any computation enabled from ``v`` stays enabled from the larger ``v'``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .model import Config, Vass

DEFAULT_STEP_CAP = 10**6
DEFAULT_MEMO_CAP = 10**7


@dataclass(frozen=True)
class CapHit:
    reason: str

    def __bool__(self):
        return False


RunLength = Union[int, CapHit]


def longest_run(
    v: Vass,
    start: Config,
    step_cap: int = DEFAULT_STEP_CAP,
    memo: Optional[Dict] = None,
    memo_cap: int = DEFAULT_MEMO_CAP,
) -> RunLength:
    """Exact length of the longest computation from ``start``.

    Depth-first search over the configuration graph with memoisation. A
    configuration reachable from itself means an infinite run; that, a run
    longer than ``step_cap`` or a memo table beyond ``memo_cap`` entries is
    reported as :class:`CapHit`.
    """
    if start.state not in v.states or len(start.counters) != v.dim:
        raise ValueError("configuration does not belong to this VASS")
    memo = {} if memo is None else memo
    moves = {q: [(t.target, t.update) for t in v.outgoing(q)] for q in v.states}

    def successors(key):
        q, cs = key
        for target, upd in moves[q]:
            nxt = tuple(c + u for c, u in zip(cs, upd))
            if min(nxt, default=0) >= 0:
                yield (target, nxt)

    root = (start.state, tuple(start.counters))
    if root in memo:
        return memo[root]
    on_stack = {root}
    stack = [(root, successors(root), 0)]
    while stack:
        key, it, best = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            on_stack.discard(key)
            memo[key] = best
            if len(memo) > memo_cap:
                return CapHit(f"more than {memo_cap} configurations explored")
            if stack:
                pkey, pit, pbest = stack[-1]
                stack[-1] = (pkey, pit, max(pbest, best + 1))
            continue
        if nxt in on_stack:
            return CapHit(f"configuration cycle through {nxt[0]}{list(nxt[1])}")
        if nxt in memo:
            stack[-1] = (key, it, max(best, memo[nxt] + 1))
            continue
        if len(stack) > step_cap:
            return CapHit(f"run longer than {step_cap} steps")
        on_stack.add(nxt)
        stack.append((nxt, successors(nxt), 0))
    result = memo[root]
    if result > step_cap:
        return CapHit(f"run longer than {step_cap} steps")
    return result


@dataclass
class Curve:
    points: List[Tuple[int, Optional[int], bool]] = field(default_factory=list)
    step_cap: int = DEFAULT_STEP_CAP

    @property
    def any_capped(self) -> bool:
        return any(capped for _, _, capped in self.points)

    def values(self) -> Dict[int, Optional[int]]:
        return {n: L for n, L, _ in self.points}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "L", "capped"])
        for n, L, capped in self.points:
            w.writerow([n, "" if L is None else L, "true" if capped else "false"])
        return buf.getvalue()


def termination_curve(
    v: Vass,
    n_max: int,
    cap: int = DEFAULT_STEP_CAP,
    n_min: int = 1,
    memo_cap: int = DEFAULT_MEMO_CAP,
) -> Curve:
    curve = Curve(step_cap=cap)
    memo: Dict = {}
    for n in range(n_min, n_max + 1):
        best: Optional[int] = 0
        capped = False
        for q in v.states:
            r = longest_run(v, Config(q, (n,) * v.dim), cap, memo, memo_cap)
            if isinstance(r, CapHit):
                capped, best = True, None
                break
            best = max(best, r)
        curve.points.append((n, best, capped))
        if len(memo) > memo_cap:
            memo.clear()
    return curve


def growth_estimate(curve: Union[Curve, Sequence[Tuple[int, int]]]) -> float:
    """Slope of ``log L`` against ``log n`` over the upper half of the cap-free points."""
    pts = curve.points if isinstance(curve, Curve) else [(n, L, False) for n, L in curve]
    clean = [(n, L) for n, L, capped in pts if not capped and L and n > 0]
    if len(clean) < 4:
        raise ValueError("growth estimate needs at least 4 cap-free points")
    upper = clean[len(clean) // 2:]
    xs = np.log([n for n, _ in upper])
    ys = np.log([L for _, L in upper])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)
