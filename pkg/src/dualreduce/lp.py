"""Exact rational linear programming.

A two-phase tableau simplex with Bland's least-index rule. Arithmetic runs on
``gmpy2.mpq`` when available and on :class:`fractions.Fraction` otherwise;
inputs and outputs are always ``Fraction``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .linalg import rank

try:
    from gmpy2 import mpq as _Q

    def _to_fraction(q) -> Fraction:
        return Fraction(int(q.numerator), int(q.denominator))

except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

    def _to_fraction(q) -> Fraction:
        return q

_ZERO = _Q(0)

LE, GE, EQ = "<=", ">=", "=="
_RELATIONS = (LE, GE, EQ)


class LpError(ValueError):
    """Malformed program, or a region precondition (nonempty) violated."""


class Infeasible(LpError):
    pass


class Unbounded(LpError):
    pass


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise LpError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(a) for a in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, x) if a), Fraction(0))

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        """Nonnegative iff satisfied (for equalities: ``rhs - lhs``)."""
        v = self.lhs(x)
        return v - self.rhs if self.relation == GE else self.rhs - v

    def holds(self, x: Sequence[Fraction]) -> bool:
        s = self.slack(x)
        return s == 0 if self.relation == EQ else s >= 0


@dataclass(frozen=True)
class LinearProgram:
    """``max|min objective·x`` subject to ``constraints`` and ``x_j >= lower[j]``.

    A ``None`` lower bound makes the variable free. Without an explicit
    ``lower``, every variable is nonnegative.
    """

    n_vars: int
    constraints: tuple[Constraint, ...] = ()
    objective: tuple[Fraction, ...] | None = None
    sense: str = "max"
    lower: tuple[Fraction | None, ...] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.n_vars
        cons = tuple(c if isinstance(c, Constraint) else Constraint(*c) for c in self.constraints)
        for k, c in enumerate(cons):
            if len(c.coeffs) != n:
                raise LpError(f"constraint {k} has {len(c.coeffs)} coefficients, expected {n}")
        obj = tuple(Fraction(0) for _ in range(n)) if self.objective is None else \
            tuple(Fraction(a) for a in self.objective)
        if len(obj) != n:
            raise LpError(f"objective has {len(obj)} coefficients, expected {n}")
        if self.sense not in ("max", "min"):
            raise LpError(f"sense must be 'max' or 'min', got {self.sense!r}")
        lower = tuple(Fraction(0) for _ in range(n)) if self.lower is None else \
            tuple(None if lb is None else Fraction(lb) for lb in self.lower)
        if len(lower) != n:
            raise LpError(f"{len(lower)} lower bounds for {n} variables")
        if self.names is not None and len(self.names) != n:
            raise LpError("variable name count mismatch")
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "lower", lower)

    def with_objective(self, objective, sense: str = "max") -> "LinearProgram":
        return LinearProgram(self.n_vars, self.constraints, tuple(objective), sense, self.lower, self.names)

    def with_constraints(self, extra: Iterable[Constraint]) -> "LinearProgram":
        return LinearProgram(self.n_vars, self.constraints + tuple(extra), self.objective, self.sense,
                             self.lower, self.names)

    def inequality_rows(self) -> list[int]:
        return [k for k, c in enumerate(self.constraints) if c.relation != EQ]

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.n_vars:
            return False
        if any(lb is not None and v < lb for v, lb in zip(x, self.lower)):
            return False
        return all(c.holds(x) for c in self.constraints)

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.objective, x) if a), Fraction(0))


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


# --- tableau machinery -----------------------------------------------------


def _pivot(rows, obj, basis, p, q):
    row = rows[p]
    piv = row[q]
    if piv != 1:
        row = [v / piv for v in row]
        rows[p] = row
    nz = [j for j, v in enumerate(row) if v]
    for r, other in enumerate(rows):
        if r != p:
            f = other[q]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
    f = obj[q]
    if f:
        for j in nz:
            obj[j] -= f * row[j]
    basis[p] = q


def _run(rows, obj, basis, ncols):
    """Bland-rule primal simplex on a feasible tableau; True if optimal."""
    while True:
        q = -1
        for j in range(ncols):
            if obj[j] > 0:
                q = j
                break
        if q < 0:
            return True
        best = None
        p = -1
        for r, row in enumerate(rows):
            a = row[q]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[p]):
                    best, p = ratio, r
        if p < 0:
            return False
        _pivot(rows, obj, basis, p, q)


def _reduced_costs(rows, basis, cost, ncols):
    obj = list(cost[:ncols]) + [_ZERO]
    for r, row in enumerate(rows):
        cb = cost[basis[r]]
        if cb:
            for j, v in enumerate(row):
                if v:
                    obj[j] -= cb * v
    return obj


class _Prepared:
    """A program reduced to a feasible basis, reusable across objectives."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        self.n = lp.n_vars
        # column map: var j -> list of (column, sign)
        cols = []
        shift = []
        ncol = 0
        for lb in lp.lower:
            if lb is None:
                cols.append(((ncol, 1), (ncol + 1, -1)))
                shift.append(Fraction(0))
                ncol += 2
            else:
                cols.append(((ncol, 1),))
                shift.append(lb)
                ncol += 1
        self.cols = cols
        self.shift = shift
        self.n_struct = ncol
        raw = []
        for c in lp.constraints:
            coeff = [_ZERO] * ncol
            for j, a in enumerate(c.coeffs):
                if a:
                    for col, sgn in cols[j]:
                        coeff[col] = _Q(a * sgn)
            rhs = c.rhs - sum((a * s for a, s in zip(c.coeffs, shift) if a and s), Fraction(0))
            rel = c.relation
            rhs = _Q(rhs)
            if rhs < 0:
                coeff = [-v for v in coeff]
                rhs = -rhs
                rel = {LE: GE, GE: LE, EQ: EQ}[rel]
            raw.append((coeff, rel, rhs))
        n_slack = sum(1 for _, rel, _ in raw if rel != EQ)
        n_art = sum(1 for _, rel, _ in raw if rel != LE)
        total = ncol + n_slack + n_art
        rows, basis = [], []
        s_at, a_at = ncol, ncol + n_slack
        for coeff, rel, rhs in raw:
            row = coeff + [_ZERO] * (n_slack + n_art) + [rhs]
            if rel == LE:
                row[s_at] = _Q(1)
                basis.append(s_at)
                s_at += 1
            else:
                if rel == GE:
                    row[s_at] = _Q(-1)
                    s_at += 1
                row[a_at] = _Q(1)
                basis.append(a_at)
                a_at += 1
            rows.append(row)
        n_real = ncol + n_slack
        self.feasible = True
        if n_art:
            cost = [_ZERO] * n_real + [_Q(-1)] * n_art
            obj = _reduced_costs(rows, basis, cost, total)
            _run(rows, obj, basis, total)
            if obj[-1] != 0:
                self.feasible = False
                return
            keep = []
            for r in range(len(rows)):
                if basis[r] >= n_real:
                    q = next((j for j in range(n_real) if rows[r][j] != 0), None)
                    if q is None:
                        continue
                    _pivot(rows, obj, basis, r, q)
                keep.append(r)
            rows = [rows[r][:n_real] + [rows[r][-1]] for r in keep]
            basis = [basis[r] for r in keep]
        self.rows = rows
        self.basis = basis
        self.ncols = n_real

    def _extract(self, rows, basis):
        vals = [_ZERO] * self.ncols
        for r, b in enumerate(basis):
            vals[b] = rows[r][-1]
        x = []
        for j in range(self.n):
            v = self.shift[j]
            for col, sgn in self.cols[j]:
                if vals[col]:
                    v += sgn * _to_fraction(vals[col])
            x.append(v)
        return tuple(x)

    def optimize(self, objective, sense: str = "max") -> LpOutcome:
        if not self.feasible:
            return LpOutcome(Status.INFEASIBLE)
        sign = 1 if sense == "max" else -1
        cost = [_ZERO] * self.ncols
        for j, a in enumerate(objective):
            if a:
                for col, s in self.cols[j]:
                    cost[col] = _Q(sign * s * Fraction(a))
        rows = [list(r) for r in self.rows]
        basis = list(self.basis)
        obj = _reduced_costs(rows, basis, cost, self.ncols)
        if not _run(rows, obj, basis, self.ncols):
            return LpOutcome(Status.UNBOUNDED)
        x = self._extract(rows, basis)
        value = sum((Fraction(a) * v for a, v in zip(objective, x) if a), Fraction(0))
        return LpOutcome(Status.OPTIMAL, value, x)


@lru_cache(maxsize=4096)
def _prepared(lp: LinearProgram) -> _Prepared:
    return _Prepared(lp)


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly. Deterministic: equal inputs give equal witnesses."""
    return _prepared(lp).optimize(lp.objective, lp.sense)


def maximize(lp: LinearProgram, objective) -> LpOutcome:
    """Maximize ``objective`` over the feasible region of ``lp``, reusing its feasible basis."""
    return _prepared(lp).optimize(tuple(objective), "max")


def minimize(lp: LinearProgram, objective) -> LpOutcome:
    return _prepared(lp).optimize(tuple(objective), "min")


def is_feasible(lp: LinearProgram) -> bool:
    return _prepared(lp).feasible


def feasible_point(lp: LinearProgram) -> tuple[Fraction, ...]:
    out = maximize(lp, [0] * lp.n_vars)
    if not out.optimal:
        raise Infeasible("region is empty")
    return out.point


# --- region analysis -------------------------------------------------------


def _slack_objective(c: Constraint):
    """Objective whose value plus a constant is the slack of ``c``."""
    if c.relation == GE:
        return c.coeffs, -c.rhs
    return tuple(-a for a in c.coeffs), c.rhs


def _implicit(lp: LinearProgram):
    if not is_feasible(lp):
        raise Infeasible("region is empty")
    rows = lp.inequality_rows()
    bounds = [j for j, lb in enumerate(lp.lower) if lb is not None]
    loose_rows: set[int] = set()
    loose_bounds: set[int] = set()

    def mark(x):
        for k in rows:
            if k not in loose_rows and lp.constraints[k].slack(x) > 0:
                loose_rows.add(k)
        for j in bounds:
            if j not in loose_bounds and x[j] > lp.lower[j]:
                loose_bounds.add(j)

    tight_rows, tight_bounds = set(), set()
    for k in rows:
        if k in loose_rows:
            continue
        obj, const = _slack_objective(lp.constraints[k])
        out = maximize(lp, obj)
        if out.status is Status.UNBOUNDED or out.value + const > 0:
            loose_rows.add(k)
            if out.optimal:
                mark(out.point)
        else:
            tight_rows.add(k)
            mark(out.point)
    for j in bounds:
        if j in loose_bounds:
            continue
        e = [0] * lp.n_vars
        e[j] = 1
        out = maximize(lp, e)
        if out.status is Status.UNBOUNDED or out.value > lp.lower[j]:
            loose_bounds.add(j)
            if out.optimal:
                mark(out.point)
        else:
            tight_bounds.add(j)
    return frozenset(tight_rows), frozenset(tight_bounds)


_implicit_cached = lru_cache(maxsize=4096)(_implicit)


def implicit_equalities(lp: LinearProgram) -> frozenset[int]:
    """Indices of inequality constraints that hold with equality on the whole region.

    Explicit equality constraints are not reported. Raises :class:`Infeasible`
    on an empty region.
    """
    return _implicit_cached(lp)[0]


def implicit_bounds(lp: LinearProgram) -> frozenset[int]:
    """Variables pinned at their lower bound throughout the region."""
    return _implicit_cached(lp)[1]


def affine_dimension(lp: LinearProgram) -> int:
    """Dimension of the affine hull of the feasible region; -1 when empty."""
    if not is_feasible(lp):
        return -1
    tight_rows, tight_bounds = _implicit_cached(lp)
    eqs = [c.coeffs for k, c in enumerate(lp.constraints) if c.relation == EQ or k in tight_rows]
    for j in tight_bounds:
        eqs.append(tuple(Fraction(int(i == j)) for i in range(lp.n_vars)))
    return lp.n_vars - rank(eqs, lp.n_vars)


def max_min_slack(lp: LinearProgram, rows: Iterable[int], cap: Fraction | None = Fraction(1)):
    """Maximize ``t`` subject to ``slack(row) >= t`` for each selected row.

    Returns ``(t, point)``. ``t`` is capped at ``cap`` (``None`` disables the
    cap and raises :class:`Unbounded` instead).
    """
    rows = sorted(set(rows))
    if not is_feasible(lp):
        raise Infeasible("region is empty")
    n = lp.n_vars
    extra = []
    for k in rows:
        if not 0 <= k < len(lp.constraints):
            raise LpError(f"no constraint {k}")
        c = lp.constraints[k]
        if c.relation == GE:
            extra.append(Constraint(c.coeffs + (Fraction(-1),), GE, c.rhs))
        else:
            extra.append(Constraint(c.coeffs + (Fraction(1),), LE, c.rhs))
    base = [Constraint(c.coeffs + (Fraction(0),), c.relation, c.rhs) for c in lp.constraints]
    if cap is not None:
        extra.append(Constraint((Fraction(0),) * n + (Fraction(1),), LE, cap))
    aug = LinearProgram(n + 1, tuple(base + extra), (Fraction(0),) * n + (Fraction(1),), "max",
                        lp.lower + (Fraction(0),))
    out = solve(aug)
    if out.status is Status.UNBOUNDED:
        raise Unbounded("slack is unbounded; pass a cap")
    return out.value, out.point[:n]


# --- duality ---------------------------------------------------------------


def dual_program(lp: LinearProgram):
    """The LP dual of ``lp`` as ``(dual, offset)``.

    ``dual`` is a minimization whose optimal value plus ``offset`` equals the
    optimal value of ``lp`` put in maximization form (i.e. ``-value`` for a
    minimization). Dual variable ``k`` belongs to constraint ``k``; for ``>=``
    rows it stores the negated multiplier so all bounded duals are ``>= 0``.
    """
    sign = 1 if lp.sense == "max" else -1
    c = [sign * a for a in lp.objective]
    shift = [lb if lb is not None else Fraction(0) for lb in lp.lower]
    offset = sum((a * s for a, s in zip(c, shift)), Fraction(0))
    m = len(lp.constraints)
    b, col_sign, lower = [], [], []
    for con in lp.constraints:
        rhs = con.rhs - con.lhs(shift)
        if con.relation == LE:
            col_sign.append(1)
            lower.append(Fraction(0))
        elif con.relation == GE:
            col_sign.append(-1)
            lower.append(Fraction(0))
        else:
            col_sign.append(1)
            lower.append(None)
        b.append(col_sign[-1] * rhs)
    cons = []
    for j in range(lp.n_vars):
        coeffs = tuple(col_sign[k] * lp.constraints[k].coeffs[j] for k in range(m))
        rel = GE if lp.lower[j] is not None else EQ
        cons.append(Constraint(coeffs, rel, c[j]))
    return LinearProgram(m, tuple(cons), tuple(b), "min", tuple(lower)), offset


def certify_optimal(lp: LinearProgram, outcome: LpOutcome) -> bool:
    """Check ``outcome`` against an independently solved dual.

    Verifies primal feasibility, equal objective values, and complementary
    slackness between the primal witness and the dual witness.
    """
    if not outcome.optimal or not lp.is_feasible_point(outcome.point):
        return False
    if lp.value_at(outcome.point) != outcome.value:
        return False
    dual, offset = dual_program(lp)
    d = solve(dual)
    if not d.optimal:
        return False
    sign = 1 if lp.sense == "max" else -1
    if d.value + offset != sign * outcome.value:
        return False
    x, y = outcome.point, d.point
    for k, con in enumerate(lp.constraints):
        if y[k] != 0 and con.relation != EQ and con.slack(x) != 0:
            return False
    for j, con in enumerate(dual.constraints):
        if con.relation == GE and lp.lower[j] is not None and x[j] != lp.lower[j] and con.slack(y) != 0:
            return False
    return True
