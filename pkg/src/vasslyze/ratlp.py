"""Exact rational linear programming.

Problems are stated as::

    maximize    c . x
    subject to  A x <= b
                C x  = d
                x_j >= 0  for j with nonneg[j], x_j free otherwise

and solved by a dense two-phase simplex over :class:`fractions.Fraction`
with Bland's rule. Every outcome carries a certificate:

* ``Optimal``: the point, its value and a dual ``(y, z)`` with ``y >= 0``
  for the inequality rows and ``z`` free for the equality rows, feasible for
  ``min b.y + d.z  s.t.  (A^T y + C^T z)_j >= c_j`` (``= c_j`` for free
  ``x_j``), with equal objective value.
* ``Unbounded``: a feasible point and a ray ``r`` with ``A r <= 0``,
  ``C r = 0``, ``r_j >= 0`` on sign-constrained variables and ``c . r > 0``.
* ``Infeasible``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

Number = Union[int, Fraction]
_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac_row(row: Sequence[Number]) -> Tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in row)


@dataclass(frozen=True)
class LpProblem:
    objective: Tuple[Fraction, ...]
    a_ub: Tuple[Tuple[Fraction, ...], ...] = ()
    b_ub: Tuple[Fraction, ...] = ()
    a_eq: Tuple[Tuple[Fraction, ...], ...] = ()
    b_eq: Tuple[Fraction, ...] = ()
    nonneg: Tuple[bool, ...] = ()
    var_names: Tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.objective)
        object.__setattr__(self, "objective", _frac_row(self.objective))
        object.__setattr__(self, "a_ub", tuple(_frac_row(r) for r in self.a_ub))
        object.__setattr__(self, "b_ub", _frac_row(self.b_ub))
        object.__setattr__(self, "a_eq", tuple(_frac_row(r) for r in self.a_eq))
        object.__setattr__(self, "b_eq", _frac_row(self.b_eq))
        if not self.nonneg:
            object.__setattr__(self, "nonneg", (True,) * n)
        if len(self.nonneg) != n:
            raise ValueError("sign flags must match the number of variables")
        if len(self.a_ub) != len(self.b_ub) or len(self.a_eq) != len(self.b_eq):
            raise ValueError("row count and right-hand side length differ")
        for r in self.a_ub + self.a_eq:
            if len(r) != n:
                raise ValueError("constraint row has the wrong number of columns")
        if self.var_names and len(self.var_names) != n:
            raise ValueError("variable names must match the number of variables")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.num_vars:
            return False
        if any(s and xi < 0 for s, xi in zip(self.nonneg, x)):
            return False
        if any(_dot(r, x) > b for r, b in zip(self.a_ub, self.b_ub)):
            return False
        return all(_dot(r, x) == b for r, b in zip(self.a_eq, self.b_eq))

    def is_recession_ray(self, r: Sequence[Fraction]) -> bool:
        """``r`` is an improving direction of the feasible region."""
        if len(r) != self.num_vars:
            return False
        if any(s and ri < 0 for s, ri in zip(self.nonneg, r)):
            return False
        if any(_dot(row, r) > 0 for row in self.a_ub):
            return False
        if any(_dot(row, r) != 0 for row in self.a_eq):
            return False
        return _dot(self.objective, r) > 0

    def dual_objective(self, dual: Sequence[Fraction]) -> Fraction:
        m = len(self.a_ub)
        return _dot(self.b_ub, dual[:m]) + _dot(self.b_eq, dual[m:])

    def is_dual_feasible(self, dual: Sequence[Fraction]) -> bool:
        m = len(self.a_ub)
        if len(dual) != m + len(self.a_eq):
            return False
        y, z = dual[:m], dual[m:]
        if any(yi < 0 for yi in y):
            return False
        for j in range(self.num_vars):
            lhs = sum((y[i] * self.a_ub[i][j] for i in range(m)), _ZERO)
            lhs += sum((z[i] * self.a_eq[i][j] for i in range(len(z))), _ZERO)
            if self.nonneg[j] and lhs < self.objective[j]:
                return False
            if not self.nonneg[j] and lhs != self.objective[j]:
                return False
        return True


@dataclass(frozen=True)
class Infeasible:
    status: str = field(default="infeasible", init=False)


@dataclass(frozen=True)
class Unbounded:
    point: Tuple[Fraction, ...]
    ray: Tuple[Fraction, ...]
    status: str = field(default="unbounded", init=False)


@dataclass(frozen=True)
class Optimal:
    point: Tuple[Fraction, ...]
    value: Fraction
    dual: Tuple[Fraction, ...]
    status: str = field(default="optimal", init=False)


LpOutcome = Union[Infeasible, Unbounded, Optimal]


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), _ZERO)


class _Tableau:
    """Rows ``[coefficients..., rhs]`` in equality standard form, basis tracked by column."""

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.rows = rows
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        pv = prow[c]
        if pv != 1:
            prow = [x / pv for x in prow]
            self.rows[r] = prow
        nz = [j for j, x in enumerate(prow) if x]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        self.basis[r] = c

    def reduced_costs(self, cost: Sequence[Fraction], ncols: int) -> List[Fraction]:
        """``cost_j - c_B^T column_j`` for a minimisation objective."""
        red = list(cost[:ncols])
        for i, row in enumerate(self.rows):
            cb = cost[self.basis[i]]
            if cb:
                for j in range(ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def run(self, cost: Sequence[Fraction], allowed: Sequence[bool]) -> Optional[int]:
        """Minimise ``cost`` with Bland's rule; return an unbounded entering column or None."""
        ncols = len(allowed)
        while True:
            red = self.reduced_costs(cost, ncols)
            enter = next((j for j in range(ncols) if allowed[j] and red[j] < 0), None)
            if enter is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return enter
            self.pivot(best[1], enter)


def _solve_any(rows: List[List[Fraction]], rhs: List[Fraction], ncols: int) -> List[Fraction]:
    """One solution of a consistent linear system (free variables set to zero)."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    sol = [_ZERO] * ncols
    for i, c in enumerate(pivots):
        sol[c] = m[i][-1]
    return sol


def solve_lp(p: LpProblem) -> LpOutcome:
    n = p.num_vars
    # standard-form columns: one per sign-constrained variable, two per free variable
    col_of: List[Tuple[int, int]] = []
    for j in range(n):
        col_of.append((j, 1))
        if not p.nonneg[j]:
            col_of.append((j, -1))
    nx = len(col_of)
    m_ub, m_eq = len(p.a_ub), len(p.a_eq)
    m = m_ub + m_eq
    ncols = nx + m_ub  # structural + slack

    std_rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    flipped: List[bool] = []
    for i in range(m):
        src = p.a_ub[i] if i < m_ub else p.a_eq[i - m_ub]
        b = p.b_ub[i] if i < m_ub else p.b_eq[i - m_ub]
        row = [src[j] * s for j, s in col_of] + [_ZERO] * m_ub
        if i < m_ub:
            row[nx + i] = _ONE
        flip = b < 0
        if flip:
            row = [-x for x in row]
            b = -b
        std_rows.append(row)
        rhs.append(b)
        flipped.append(flip)

    # phase 1: one artificial per row
    total = ncols + m
    rows = []
    for i in range(m):
        art = [_ZERO] * m
        art[i] = _ONE
        rows.append(std_rows[i] + art + [rhs[i]])
    tab = _Tableau(rows, [ncols + i for i in range(m)])
    cost1 = [_ZERO] * ncols + [_ONE] * m
    tab.run(cost1, [True] * total)
    if sum((tab.rows[i][-1] for i in range(m) if tab.basis[i] >= ncols), _ZERO) > 0:
        return Infeasible()

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= ncols:
            c = next((j for j in range(ncols) if tab.rows[i][j]), None)
            if c is None:
                del tab.rows[i]
                del tab.basis[i]
                continue
            tab.pivot(i, c)
        i += 1
    tab.rows = [row[:ncols] + [row[-1]] for row in tab.rows]

    # phase 2: maximise c.x == minimise -c.x
    cost2 = [-p.objective[j] * s for j, s in col_of] + [_ZERO] * m_ub
    enter = tab.run(cost2, [True] * ncols)

    xs = [_ZERO] * ncols
    for i, b in enumerate(tab.basis):
        xs[b] = tab.rows[i][-1]
    point = [_ZERO] * n
    for k, (j, s) in enumerate(col_of):
        point[j] += s * xs[k]
    point_t = tuple(point)

    if enter is not None:
        d = [_ZERO] * ncols
        d[enter] = _ONE
        for i, b in enumerate(tab.basis):
            d[b] = -tab.rows[i][enter]
        ray = [_ZERO] * n
        for k, (j, s) in enumerate(col_of):
            ray[j] += s * d[k]
        return Unbounded(point_t, tuple(ray))

    value = _dot(p.objective, point_t)
    # dual from the final basis: B^T y = c_B over the original (sign-adjusted) rows
    gain = [-c for c in cost2]
    bt_rows = [[std_rows[i][b] for i in range(m)] for b in tab.basis]
    y = _solve_any(bt_rows, [gain[b] for b in tab.basis], m)
    dual = tuple(-yi if f else yi for yi, f in zip(y, flipped))
    return Optimal(point_t, value, dual)


def scale_to_integer(v: Sequence[Number]) -> Tuple[Tuple[int, ...], int]:
    """Multiply by the lcm of the denominators; returns ``(integer vector, multiplier)``."""
    fr = [Fraction(x) for x in v]
    mult = math.lcm(*(x.denominator for x in fr)) if fr else 1
    return tuple(int(x * mult) for x in fr), mult


def lp_from_lists(
    objective: Sequence[Number],
    a_ub: Sequence[Sequence[Number]] = (),
    b_ub: Sequence[Number] = (),
    a_eq: Sequence[Sequence[Number]] = (),
    b_eq: Sequence[Number] = (),
    nonneg: Optional[Sequence[bool]] = None,
) -> LpProblem:
    return LpProblem(
        tuple(objective),
        tuple(tuple(r) for r in a_ub),
        tuple(b_ub),
        tuple(tuple(r) for r in a_eq),
        tuple(b_eq),
        tuple(nonneg) if nonneg is not None else (),
    )
