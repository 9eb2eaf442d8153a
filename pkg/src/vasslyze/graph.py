"""SCC decomposition, paths, simple cycles and multicycles."""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .model import Vass


class NotStronglyConnected(ValueError):
    pass


class InvalidPath(ValueError):
    pass


class InvalidFlow(ValueError):
    pass


@dataclass(frozen=True)
class Path:
    start: str
    transitions: Tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.transitions)

    def states(self, v: Vass) -> List[str]:
        out = [self.start]
        for tid in self.transitions:
            out.append(v.transition(tid).target)
        return out

    def end(self, v: Vass) -> str:
        return self.states(v)[-1]

    def effect(self, v: Vass) -> Tuple[int, ...]:
        return v.effect(self.transitions)

    def is_cycle(self, v: Vass) -> bool:
        return len(self.transitions) > 0 and self.end(v) == self.start


def check_path(v: Vass, p: Path) -> None:
    if p.start not in v.states:
        raise InvalidPath(f"unknown start state {p.start!r}")
    here = p.start
    for i, tid in enumerate(p.transitions):
        if not v.has_transition(tid):
            raise InvalidPath(f"unknown transition id {tid}")
        t = v.transition(tid)
        if t.source != here:
            raise InvalidPath(f"transition {t.label} at position {i} does not leave {here!r}")
        here = t.target


def canonical_cycle(v: Vass, tids: Sequence[int]) -> Tuple[int, ...]:
    """Rotate a cycle so its smallest (source state, transition id) pair comes first."""
    tids = tuple(tids)
    if not tids:
        return tids
    keys = [(v.transition(t).source, t) for t in tids]
    i = min(range(len(tids)), key=keys.__getitem__)
    return tids[i:] + tids[:i]


def is_simple_cycle(v: Vass, tids: Sequence[int]) -> bool:
    if not tids:
        return False
    try:
        check_path(v, Path(v.transition(tids[0]).source, tuple(tids)))
    except (InvalidPath, KeyError):
        return False
    ts = [v.transition(t) for t in tids]
    if ts[-1].target != ts[0].source:
        return False
    sources = [t.source for t in ts]
    return len(set(sources)) == len(sources)


@dataclass(frozen=True)
class MultiCycle:
    """Multiset of simple cycles, keyed by canonical transition-id tuples."""

    cycles: Mapping[Tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "cycles", {c: m for c, m in sorted(self.cycles.items()) if m > 0}
        )

    def __eq__(self, other):
        return isinstance(other, MultiCycle) and dict(self.cycles) == dict(other.cycles)

    def __hash__(self):
        return hash(tuple(self.cycles.items()))

    def __len__(self) -> int:
        return sum(m for m in self.cycles.values())

    @property
    def length(self) -> int:
        return sum(m * len(c) for c, m in self.cycles.items())

    def transition_counts(self) -> Counter:
        counts: Counter = Counter()
        for c, m in self.cycles.items():
            for tid in c:
                counts[tid] += m
        return counts

    def effect(self, v: Vass) -> Tuple[int, ...]:
        total = [0] * v.dim
        for c, m in self.cycles.items():
            for i, e in enumerate(v.effect(c)):
                total[i] += m * e
        return tuple(total)

    def contains(self, tid: int) -> bool:
        return any(tid in c for c in self.cycles)

    def __add__(self, other: "MultiCycle") -> "MultiCycle":
        merged = Counter(self.cycles)
        merged.update(other.cycles)
        return MultiCycle(dict(merged))


def _tarjan(nodes: Sequence[str], succ: Mapping[str, List[str]]) -> List[List[str]]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index: Dict[str, int] = {}
    low: Dict[str, int] = {}
    on_stack = set()
    stack: List[str] = []
    out: List[List[str]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, i = work.pop()
            if i == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            recurse = False
            nbrs = succ.get(node, [])
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if w not in index:
                    work.append((node, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[node] = min(low[node], index[w])
            if recurse:
                continue
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return out


def sccs(v: Vass, keep: Optional[Iterable[int]] = None) -> List[Vass]:
    """Maximal strongly connected sub-VASS of ``(Q, keep)`` having at least one transition.

    Components are returned in state-declaration order of their first state.
    """
    keep_set = set(v.transition_ids if keep is None else keep)
    for tid in keep_set:
        if not v.has_transition(tid):
            raise KeyError(f"unknown transition id {tid}")
    kept = [t for t in v.transitions if t.id in keep_set]
    succ: Dict[str, List[str]] = {q: [] for q in v.states}
    for t in kept:
        if t.target not in succ[t.source]:
            succ[t.source].append(t.target)
    comp_of: Dict[str, int] = {}
    for n, comp in enumerate(_tarjan(v.states, succ)):
        for q in comp:
            comp_of[q] = n
    members: Dict[int, List[int]] = {}
    for t in kept:
        if comp_of[t.source] == comp_of[t.target]:
            members.setdefault(comp_of[t.source], []).append(t.id)
    subs = [v.restrict(tids) for tids in members.values()]
    subs.sort(key=lambda s: v.state_index(s.states[0]))
    return subs


def is_strongly_connected(v: Vass) -> bool:
    parts = sccs(v)
    return len(parts) == 1 and len(parts[0].states) == len(v.states)


def decompose_path(v: Vass, p: Path) -> Tuple[MultiCycle, Path]:
    """Split a path into its simple cycles (first-closing cycle first) and an acyclic remainder.

    Cycles are detected left to right: whenever the next state already occurs
    on the cycle-free prefix, the segment since that occurrence is removed.
    """
    check_path(v, p)
    states = [p.start]
    trans: List[int] = []
    found: Counter = Counter()
    for tid in p.transitions:
        t = v.transition(tid)
        trans.append(tid)
        if t.target in states:
            i = states.index(t.target)
            cyc = trans[i:]
            found[canonical_cycle(v, cyc)] += 1
            del trans[i:]
            del states[i + 1:]
        else:
            states.append(t.target)
    return MultiCycle(dict(found)), Path(states[0], tuple(trans))


def extract_multicycle(v: Vass, flow: Mapping[int, int]) -> MultiCycle:
    """Decompose a conserved non-negative integer flow over T into simple cycles."""
    remaining: Dict[int, int] = {}
    for tid, x in flow.items():
        if not v.has_transition(tid):
            raise InvalidFlow(f"unknown transition id {tid}")
        if x != int(x):
            raise InvalidFlow(f"non-integral flow on transition {tid}")
        if x < 0:
            raise InvalidFlow(f"negative flow on transition {tid}")
        if x:
            remaining[tid] = int(x)
    balance = {q: 0 for q in v.states}
    for tid, x in remaining.items():
        t = v.transition(tid)
        balance[t.source] -= x
        balance[t.target] += x
    if any(balance.values()):
        raise InvalidFlow("flow is not conserved at every state")

    found: Counter = Counter()
    while remaining:
        first = min(remaining)
        here = v.transition(first).source
        seen = {here: 0}
        walk: List[int] = []
        while True:
            out = [t for t in sorted(remaining) if v.transition(t).source == here]
            tid = out[0]
            walk.append(tid)
            here = v.transition(tid).target
            if here in seen:
                cyc = walk[seen[here]:]
                break
            seen[here] = len(walk)
        mult = min(remaining[t] for t in cyc)
        found[canonical_cycle(v, cyc)] += mult
        for t in cyc:
            remaining[t] -= mult
            if remaining[t] == 0:
                del remaining[t]
    return MultiCycle(dict(found))


def shortest_path(v: Vass, src: str, dst: str) -> Optional[Path]:
    """BFS shortest path with at least zero steps; ties broken by transition id."""
    if src == dst:
        return Path(src, ())
    prev: Dict[str, Tuple[str, int]] = {}
    queue = deque([src])
    seen = {src}
    while queue:
        q = queue.popleft()
        for t in sorted(v.outgoing(q), key=lambda t: t.id):
            if t.target in seen:
                continue
            seen.add(t.target)
            prev[t.target] = (q, t.id)
            if t.target == dst:
                tids = []
                cur = dst
                while cur != src:
                    cur, tid = prev[cur]
                    tids.append(tid)
                return Path(src, tuple(reversed(tids)))
            queue.append(t.target)
    return None


def covering_cycle(v: Vass) -> Path:
    """A cycle through every state, built from BFS shortest paths in state order."""
    if not is_strongly_connected(v):
        raise NotStronglyConnected("covering cycle needs a strongly connected VASS")
    start = v.states[0]
    if len(v.states) == 1:
        loop = min(t.id for t in v.transitions)
        return Path(start, (loop,))
    tids: List[int] = []
    visited = {start}
    here = start
    for q in v.states[1:] + (start,):
        if q in visited and q != start:
            continue
        seg = shortest_path(v, here, q)
        for tid in seg.transitions:
            visited.add(v.transition(tid).target)
        tids.extend(seg.transitions)
        here = q
    return Path(start, tuple(tids))
