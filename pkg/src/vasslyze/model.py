"""VASS data model, the textual input language, and the matrices U and F.

Input grammar (one item per line, ``#`` starts a comment)::

    vass dim 2
    state q1 q2
    trans t1: q1 -> q2 [-1, 1]
    trans t2: q2 -> q1 [0, 0]
    trans t3: q2 -> q2 [0, -1]

Transitions receive integer ids ``0..|T|-1`` in declaration order. Ids are
stable: sub-VASS produced by restriction keep the ids of the parent, so
witnesses always refer to transitions unambiguously.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class VassError(ValueError):
    """Base class for malformed VASS descriptions."""


class ParseError(VassError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class MalformedVass(VassError):
    pass


@dataclass(frozen=True)
class Transition:
    id: int
    source: str
    update: Tuple[int, ...]
    target: str
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or f"t{self.id}"

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Config:
    state: str
    counters: Tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counters):
            raise ValueError(f"negative counter in configuration {self}")

    @property
    def size(self) -> int:
        return max(self.counters, default=0)


@dataclass(frozen=True)
class Vass:
    """A d-dimensional VASS ``(Q, T)``.

    Every state needs at least one outgoing transition. Use :meth:`restrict`
    to obtain sub-VASS; the restriction drops states that no kept transition
    touches.
    """

    dim: int
    states: Tuple[str, ...]
    transitions: Tuple[Transition, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise MalformedVass("dimension must be positive")
        if not self.states:
            raise MalformedVass("a VASS needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise MalformedVass("duplicate state names")
        known = set(self.states)
        seen_ids = set()
        for t in self.transitions:
            if len(t.update) != self.dim:
                raise MalformedVass(
                    f"transition {t.label} has {len(t.update)} update entries, expected {self.dim}"
                )
            if t.source not in known or t.target not in known:
                raise MalformedVass(f"transition {t.label} references an unknown state")
            if t.id in seen_ids:
                raise MalformedVass(f"duplicate transition id {t.id}")
            seen_ids.add(t.id)
        has_out = {t.source for t in self.transitions}
        for q in self.states:
            if q not in has_out:
                raise MalformedVass(f"state without outgoing transition: {q}")

    @cached_property
    def _by_id(self) -> Dict[int, Transition]:
        return {t.id: t for t in self.transitions}

    @cached_property
    def _state_pos(self) -> Dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    def transition(self, tid: int) -> Transition:
        try:
            return self._by_id[tid]
        except KeyError:
            raise KeyError(f"unknown transition id {tid}") from None

    def has_transition(self, tid: int) -> bool:
        return tid in self._by_id

    def state_index(self, state: str) -> int:
        return self._state_pos[state]

    @property
    def transition_ids(self) -> Tuple[int, ...]:
        return tuple(t.id for t in self.transitions)

    def outgoing(self, state: str) -> List[Transition]:
        return [t for t in self.transitions if t.source == state]

    def restrict(self, keep: Iterable[int]) -> "Vass":
        """Sub-VASS with the given transitions and the states they touch."""
        keep = set(keep)
        kept = tuple(t for t in self.transitions if t.id in keep)
        touched = {t.source for t in kept} | {t.target for t in kept}
        states = tuple(q for q in self.states if q in touched)
        return Vass(self.dim, states, kept)

    def effect(self, tids: Iterable[int]) -> Tuple[int, ...]:
        total = [0] * self.dim
        for tid in tids:
            for i, u in enumerate(self.transition(tid).update):
                total[i] += u
        return tuple(total)


@dataclass(frozen=True)
class LabeledMatrix:
    """Dense rational matrix with labelled rows and columns."""

    row_labels: Tuple
    col_labels: Tuple
    rows: Tuple[Tuple[Fraction, ...], ...]

    def __getitem__(self, key):
        r, c = key
        return self.rows[self.row_labels.index(r)][self.col_labels.index(c)]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def column(self, label) -> Tuple[Fraction, ...]:
        j = self.col_labels.index(label)
        return tuple(row[j] for row in self.rows)

    def tolist(self) -> List[List[Fraction]]:
        return [list(r) for r in self.rows]


def update_matrix(v: Vass) -> LabeledMatrix:
    rows = tuple(
        tuple(Fraction(t.update[i]) for t in v.transitions) for i in range(v.dim)
    )
    return LabeledMatrix(tuple(range(v.dim)), v.transition_ids, rows)


def incidence_matrix(v: Vass) -> LabeledMatrix:
    """Oriented incidence matrix: +1 at the source, -1 at the target, self-loops are 0."""
    rows = []
    for q in v.states:
        row = []
        for t in v.transitions:
            if t.is_loop:
                row.append(Fraction(0))
            elif t.source == q:
                row.append(Fraction(1))
            elif t.target == q:
                row.append(Fraction(-1))
            else:
                row.append(Fraction(0))
        rows.append(tuple(row))
    return LabeledMatrix(v.states, v.transition_ids, tuple(rows))


def max_update(v: Vass) -> int:
    return max((abs(u) for t in v.transitions for u in t.update), default=0)


# --- input language -------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z0-9_.']*"
_DIM_RE = re.compile(r"vass\s+dim\s+(\S+)\s*$")
_TRANS_RE = re.compile(
    rf"trans\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})\s*\[(.*)\]\s*$"
)
_NAME_RE = re.compile(rf"{_NAME}$")


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_vass(text: str) -> Vass:
    dim: Optional[int] = None
    states: List[str] = []
    state_line: Dict[str, int] = {}
    pending: List[Tuple[int, int, str, str, str, Tuple[int, ...]]] = []
    names = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        body = line.strip()
        if not body:
            continue
        col = len(line) - len(line.lstrip()) + 1
        keyword = body.split()[0]
        if keyword == "vass":
            m = _DIM_RE.match(body)
            if not m:
                raise ParseError("expected 'vass dim <d>'", lineno, col)
            if dim is not None:
                raise ParseError("dimension declared twice", lineno, col)
            try:
                dim = int(m.group(1))
            except ValueError:
                raise ParseError(f"invalid dimension {m.group(1)!r}", lineno, col) from None
            if dim < 1:
                raise ParseError("dimension must be positive", lineno, col)
        elif keyword == "state":
            if dim is None:
                raise ParseError("'vass dim <d>' must come first", lineno, col)
            parts = body.split()[1:]
            if not parts:
                raise ParseError("'state' needs at least one name", lineno, col)
            for name in parts:
                if not _NAME_RE.match(name):
                    raise ParseError(f"invalid state name {name!r}", lineno, line.find(name) + 1)
                if name in state_line:
                    raise ParseError(f"duplicate state {name!r}", lineno, line.find(name) + 1)
                state_line[name] = lineno
                states.append(name)
        elif keyword == "trans":
            if dim is None:
                raise ParseError("'vass dim <d>' must come first", lineno, col)
            m = _TRANS_RE.match(body)
            if not m:
                raise ParseError(
                    "expected 'trans <id>: <src> -> <dst> [<u1>, ..., <ud>]'", lineno, col
                )
            name, src, dst, vec = m.groups()
            if name in names:
                raise ParseError(f"duplicate transition {name!r}", lineno, col)
            names.add(name)
            entries = [e.strip() for e in vec.split(",")] if vec.strip() else []
            try:
                update = tuple(int(e) for e in entries)
            except ValueError:
                bracket = line.find("[") + 1
                raise ParseError(f"non-integer update in [{vec}]", lineno, bracket + 1) from None
            if len(update) != dim:
                raise ParseError(
                    f"dimension mismatch: update has {len(update)} entries, expected {dim}",
                    lineno,
                    line.find("[") + 1,
                )
            pending.append((lineno, col, name, src, dst, update))
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno, col)

    if dim is None:
        raise ParseError("missing 'vass dim <d>' header", 1)
    if not states:
        raise ParseError("no states declared", 1)

    known = set(states)
    transitions = []
    for tid, (lineno, col, name, src, dst, update) in enumerate(pending):
        for q in (src, dst):
            if q not in known:
                raise ParseError(f"unknown state {q!r}", lineno, col)
        transitions.append(Transition(tid, src, update, dst, name))
    has_out = {t.source for t in transitions}
    for q in states:
        if q not in has_out:
            raise MalformedVass(f"state without outgoing transition: {q} (line {state_line[q]})")
    return Vass(dim, tuple(states), tuple(transitions))


def format_vass(v: Vass) -> str:
    """Canonical text form; ``parse_vass(format_vass(v)) == v`` when ids are 0..|T|-1."""
    lines = [f"vass dim {v.dim}", "state " + " ".join(v.states)]
    for t in v.transitions:
        vec = ", ".join(str(u) for u in t.update)
        lines.append(f"trans {t.label}: {t.source} -> {t.target} [{vec}]")
    return "\n".join(lines) + "\n"


def make_vass(dim: int, states: Sequence[str], transitions: Sequence[Tuple]) -> Vass:
    """Build a VASS from ``(source, update, target)`` or ``(name, source, update, target)`` tuples."""
    ts = []
    for i, spec in enumerate(transitions):
        if len(spec) == 4:
            name, src, upd, dst = spec
        else:
            src, upd, dst = spec
            name = f"t{i + 1}"
        ts.append(Transition(i, src, tuple(int(u) for u in upd), dst, name))
    return Vass(dim, tuple(states), tuple(ts))
