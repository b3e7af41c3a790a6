"""Embedded linear programming: a dense two-phase primal simplex with
least-index anti-cycling, a Chebyshev-center routine and a nullspace-basis
helper.  Desk-scale problems only (hundreds of variables); everything is
dense numpy.

Tolerances are fixed and test-pinned: FEAS_TOL for constraint satisfaction,
PIVOT_TOL below which a pivot element is treated as zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

FEAS_TOL = 1e-7
PIVOT_TOL = 1e-10

Relation = Literal["<=", "=", ">="]


class DegenerateBasisError(RuntimeError):
    """The simplex ran out of numerically usable pivots."""


class EmptyPolytopeError(ValueError):
    """A polytope operation was asked of an empty polytope."""


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[float, ...]
    relation: Relation
    rhs: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if self.relation not in ("<=", "=", ">="):
            raise ValueError(f"unknown relation {self.relation!r}")
        if not np.all(np.isfinite(self.coeffs)) or not np.isfinite(self.rhs):
            raise ValueError("constraint entries must be finite")


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective @ x subject to the constraints; variables are free
    unless bounded explicitly."""

    variables: tuple[str, ...]
    objective: tuple[float, ...]
    constraints: tuple[Constraint, ...]
    bounds: dict[str, tuple[float | None, float | None]] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "objective", tuple(float(c) for c in self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n = len(self.variables)
        if len(self.objective) != n:
            raise ValueError("objective length does not match variable count")
        for c in self.constraints:
            if len(c.coeffs) != n:
                raise ValueError("constraint length does not match variable count")
        if self.bounds:
            unknown = set(self.bounds) - set(self.variables)
            if unknown:
                raise ValueError(f"bounds reference unknown variables {sorted(unknown)}")


@dataclass(frozen=True)
class LPSolution:
    status: Literal["optimal", "infeasible", "unbounded"]
    objective_value: float | None
    assignment: dict[str, float] | None
    iterations: int = 0

    def __getitem__(self, var: str) -> float:
        if self.assignment is None:
            raise KeyError(f"no assignment available (status {self.status})")
        return self.assignment[var]


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


def _run_simplex(
    tableau: np.ndarray,
    basis: list[int],
    allowed: np.ndarray,
    max_iter: int,
) -> str:
    """Pivot until optimality. Dantzig rule with a permanent switch to
    Bland's least-index rule once the objective stalls, which rules out
    cycling on degenerate problems."""
    bland = False
    stall = 0
    last_obj = -np.inf
    for iteration in range(max_iter):
        zrow = tableau[-1, :-1]
        candidates = np.where(allowed & (zrow < -PIVOT_TOL))[0]
        if candidates.size == 0:
            return "optimal", iteration
        if bland:
            col = int(candidates[0])
        else:
            col = int(candidates[np.argmin(zrow[candidates])])
        column = tableau[:-1, col]
        rows = np.where(column > PIVOT_TOL)[0]
        if rows.size == 0:
            return "unbounded", iteration
        ratios = tableau[rows, -1] / column[rows]
        best = np.min(ratios)
        ties = rows[ratios <= best + PIVOT_TOL]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(tableau, row, col)
        basis[row] = col
        obj = tableau[-1, -1]
        if obj > last_obj + 1e-12:
            last_obj = obj
            stall = 0
        else:
            stall += 1
            if stall > 100:
                bland = True
    raise DegenerateBasisError("simplex pivot limit exceeded")


def solve(lp: LinearProgram) -> LPSolution:
    """Two-phase primal simplex on the dense tableau.

    Free variables are split into positive and negative parts; bounds are
    folded in as rows.  Raises :class:`DegenerateBasisError` instead of
    returning a wrong answer when the basis degenerates numerically.
    """
    n = len(lp.variables)
    rows: list[tuple[np.ndarray, str, float]] = [
        (np.asarray(c.coeffs, dtype=float), c.relation, float(c.rhs)) for c in lp.constraints
    ]
    if lp.bounds:
        for var, (lo, hi) in lp.bounds.items():
            unit = np.zeros(n)
            unit[lp.variables.index(var)] = 1.0
            if lo is not None:
                rows.append((unit, ">=", float(lo)))
            if hi is not None:
                rows.append((unit, "<=", float(hi)))
    m = len(rows)
    # split free variables: x = u - v with u, v >= 0
    a = np.zeros((m, 2 * n))
    b = np.zeros(m)
    relations: list[str] = []
    for k, (coeffs, rel, rhs) in enumerate(rows):
        a[k, :n] = coeffs
        a[k, n:] = -coeffs
        b[k] = rhs
        relations.append(rel)
    flip = b < 0.0
    a[flip] *= -1.0
    b[flip] *= -1.0
    relations = [
        {"<=": ">=", ">=": "<=", "=": "="}[rel] if f else rel
        for rel, f in zip(relations, flip)
    ]
    n_slack = sum(1 for r in relations if r == "<=")
    n_surplus = sum(1 for r in relations if r == ">=")
    n_art = sum(1 for r in relations if r in ("=", ">="))
    width = 2 * n + n_slack + n_surplus + n_art
    tableau = np.zeros((m + 1, width + 1))
    tableau[:m, : 2 * n] = a
    tableau[:m, -1] = b
    s_base, t_base, a_base = 2 * n, 2 * n + n_slack, 2 * n + n_slack + n_surplus
    si = ti = ai = 0
    basis: list[int] = []
    art_cols: list[int] = []
    for k, rel in enumerate(relations):
        if rel == "<=":
            tableau[k, s_base + si] = 1.0
            basis.append(s_base + si)
            si += 1
        elif rel == ">=":
            tableau[k, t_base + ti] = -1.0
            tableau[k, a_base + ai] = 1.0
            basis.append(a_base + ai)
            art_cols.append(a_base + ai)
            ti += 1
            ai += 1
        else:
            tableau[k, a_base + ai] = 1.0
            basis.append(a_base + ai)
            art_cols.append(a_base + ai)
            ai += 1
    art_mask = np.zeros(width, dtype=bool)
    art_mask[art_cols] = True
    max_iter = 2000 + 200 * (m + width)

    total_pivots = 0
    # phase 1: maximize -(sum of artificials)
    if art_cols:
        cost = np.zeros(width)
        cost[art_cols] = -1.0
        tableau[-1, :-1] = -cost
        tableau[-1, -1] = 0.0
        for r, bc in enumerate(basis):
            if tableau[-1, bc] != 0.0:
                tableau[-1] -= tableau[-1, bc] * tableau[r]
        status, pivots = _run_simplex(tableau, basis, np.ones(width, dtype=bool), max_iter)
        total_pivots += pivots
        if status != "optimal":  # pragma: no cover - phase 1 cannot be unbounded
            raise DegenerateBasisError("phase 1 did not reach optimality")
        if tableau[-1, -1] < -FEAS_TOL:
            return LPSolution("infeasible", None, None, total_pivots)
        # drive leftover artificials out of the basis
        drop_rows = []
        for r, bc in enumerate(basis):
            if art_mask[bc]:
                structural = np.where(
                    ~art_mask & (np.abs(tableau[r, :-1]) > PIVOT_TOL)
                )[0]
                if structural.size:
                    _pivot(tableau, r, int(structural[0]))
                    basis[r] = int(structural[0])
                else:
                    drop_rows.append(r)
        if drop_rows:
            keep = [r for r in range(m) if r not in drop_rows]
            tableau = tableau[keep + [m]]
            basis = [basis[r] for r in keep]
            m = len(keep)

    # phase 2: maximize the real objective
    cost = np.zeros(width)
    cost[:n] = lp.objective
    cost[n : 2 * n] = -np.asarray(lp.objective)
    tableau[-1, :-1] = -cost
    tableau[-1, -1] = 0.0
    for r, bc in enumerate(basis):
        if tableau[-1, bc] != 0.0:
            tableau[-1] -= tableau[-1, bc] * tableau[r]
    status, pivots = _run_simplex(tableau, basis, ~art_mask, max_iter)
    total_pivots += pivots
    if status == "unbounded":
        return LPSolution("unbounded", None, None, total_pivots)
    z = np.zeros(width)
    for r, bc in enumerate(basis):
        z[bc] = tableau[r, -1]
    x = z[:n] - z[n : 2 * n]
    # refuse to return an assignment that does not satisfy the input rows
    for coeffs, rel, rhs in rows:
        lhs = float(coeffs @ x)
        if rel == "<=" and lhs > rhs + FEAS_TOL:
            raise DegenerateBasisError(f"constraint violated by {lhs - rhs}")
        if rel == ">=" and lhs < rhs - FEAS_TOL:
            raise DegenerateBasisError(f"constraint violated by {rhs - lhs}")
        if rel == "=" and abs(lhs - rhs) > FEAS_TOL:
            raise DegenerateBasisError(f"equality off by {lhs - rhs}")
    assignment = {v: float(x[i]) for i, v in enumerate(lp.variables)}
    return LPSolution("optimal", float(np.asarray(lp.objective) @ x), assignment, total_pivots)


_active_solver = None


def set_solver(solver) -> None:
    """Swap in an external LP solver with the same signature as
    :func:`solve`; pass None to restore the embedded simplex.  Elicitation
    and sampling go through this hook exclusively."""
    global _active_solver
    _active_solver = solver


def get_solver():
    return _active_solver or solve


def nullspace_basis(rows: Sequence[Sequence[float]], n_vars: int | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the solution space of ``rows @ x = 0``.

    An empty row set yields the identity.  Rank is decided at 1e-10 relative
    to the largest singular value.
    """
    a = np.asarray(rows, dtype=float)
    if a.size == 0:
        if n_vars is None:
            raise ValueError("n_vars required for an empty row set")
        return np.eye(n_vars)
    if a.ndim != 2:
        raise ValueError("rows must form a matrix")
    _, s, vt = np.linalg.svd(a)
    cutoff = 1e-10 * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > cutoff))
    return vt[rank:].T


def chebyshev_center(
    a_ub: Sequence[Sequence[float]],
    b_ub: Sequence[float],
    a_eq: Sequence[Sequence[float]] | None = None,
    b_eq: Sequence[float] | None = None,
) -> tuple[np.ndarray, float]:
    """Deepest point of ``{x: a_ub x <= b_ub, a_eq x = b_eq}``.

    The slack is measured inside the affine hull of the equality rows (row
    normals are projected onto the equality nullspace), so a positive slack
    is equivalent to a nonempty relative interior.  Raises
    :class:`EmptyPolytopeError` on an empty polytope.
    """
    a = np.atleast_2d(np.asarray(a_ub, dtype=float))
    b = np.asarray(b_ub, dtype=float)
    if a.size == 0:
        raise ValueError("chebyshev_center needs at least one inequality")
    n = a.shape[1]
    if a_eq is not None and len(a_eq) > 0:
        e = np.atleast_2d(np.asarray(a_eq, dtype=float))
        f = np.asarray(b_eq, dtype=float)
        x_part, *_ = np.linalg.lstsq(e, f, rcond=None)
        if not np.allclose(e @ x_part, f, atol=1e-8):
            raise EmptyPolytopeError("equality system is inconsistent")
        basis = nullspace_basis(e, n)
    else:
        x_part = np.zeros(n)
        basis = np.eye(n)
    if basis.shape[1] == 0:
        # affine hull is a single point
        slack = float(np.min(b - a @ x_part)) if len(b) else np.inf
        if slack < -FEAS_TOL:
            raise EmptyPolytopeError("polytope is empty")
        return x_part, 0.0
    a_red = a @ basis
    b_red = b - a @ x_part
    norms = np.linalg.norm(a_red, axis=1)
    keep = norms > 1e-12
    if np.any(~keep):
        if np.any(b_red[~keep] < -FEAS_TOL):
            raise EmptyPolytopeError("polytope is empty")
    a_red, b_red, norms = a_red[keep], b_red[keep], norms[keep]
    k = basis.shape[1]
    names = tuple(f"y{i}" for i in range(k)) + ("s",)
    constraints = [
        Constraint(tuple(a_red[i]) + (float(norms[i]),), "<=", float(b_red[i]))
        for i in range(len(b_red))
    ]
    lp = LinearProgram(
        names,
        (0.0,) * k + (1.0,),
        tuple(constraints),
        bounds={"s": (None, 1e9)},
    )
    sol = solve(lp)
    if sol.status != "optimal":
        raise EmptyPolytopeError(f"chebyshev LP ended {sol.status}")
    slack = sol.objective_value
    if slack < -FEAS_TOL:
        raise EmptyPolytopeError("polytope is empty")
    y = np.asarray([sol[f"y{i}"] for i in range(k)])
    return x_part + basis @ y, float(slack)
