"""Dense two-phase simplex for small maximization LPs.

Problems are max c'x subject to Ax <= b, 0 <= x <= ub. Bland's rule keeps
the pivot sequence finite; suitable for the modest instances the charge
scheduler builds (0 is always feasible there, so phase one is a no-op).
"""

from dataclasses import dataclass, field

import numpy as np

PIVOT_TOL = 1e-10


class LpError(RuntimeError):
    """Infeasible or unbounded problem (internal error for scheduling use)."""


@dataclass
class LpProblem:
    """max objective . x  s.t.  a_ub @ x <= b_ub,  0 <= x <= upper_bounds."""

    objective: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray
    upper_bounds: np.ndarray = None  # np.inf entries mean unbounded above

    def __post_init__(self):
        self.objective = np.atleast_1d(np.asarray(self.objective, dtype=float))
        n = self.objective.size
        self.a_ub = np.asarray(self.a_ub, dtype=float).reshape(-1, n) if n else np.zeros((0, 0))
        self.b_ub = np.atleast_1d(np.asarray(self.b_ub, dtype=float))
        if self.upper_bounds is None:
            self.upper_bounds = np.full(n, np.inf)
        else:
            self.upper_bounds = np.atleast_1d(np.asarray(self.upper_bounds, dtype=float))
        if not np.all(np.isfinite(self.objective)):
            raise ValueError("objective must be finite")
        if not (np.all(np.isfinite(self.a_ub)) and np.all(np.isfinite(self.b_ub))):
            raise ValueError("constraints must be finite")
        if self.a_ub.shape[0] != self.b_ub.size:
            raise ValueError("constraint matrix / rhs size mismatch")

    @property
    def n_vars(self) -> int:
        return self.objective.size


def _bland_entering(reduced: np.ndarray) -> int:
    idx = np.nonzero(reduced < -PIVOT_TOL)[0]
    return int(idx[0]) if idx.size else -1


def _bland_leaving(tableau: np.ndarray, col: int, basis: list) -> int:
    best = -1
    best_ratio = np.inf
    best_var = None
    for i in range(tableau.shape[0] - 1):
        a = tableau[i, col]
        if a > PIVOT_TOL:
            ratio = tableau[i, -1] / a
            if ratio < best_ratio - PIVOT_TOL or (
                abs(ratio - best_ratio) <= PIVOT_TOL and basis[i] < best_var
            ):
                best, best_ratio, best_var = i, ratio, basis[i]
    return best


def _pivot(tableau: np.ndarray, row: int, col: int):
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


def _run_simplex(tableau: np.ndarray, basis: list) -> str:
    while True:
        col = _bland_entering(tableau[-1, :-1])
        if col == -1:
            return "optimal"
        row = _bland_leaving(tableau, col, basis)
        if row == -1:
            return "unbounded"
        _pivot(tableau, row, col)
        basis[row] = col


def solve_lp(problem: LpProblem):
    """Return (optimal objective value, optimal x). Raises LpError otherwise."""
    n = problem.n_vars
    if n == 0:
        return 0.0, np.zeros(0)

    # fold finite upper bounds in as extra <= rows
    finite = np.isfinite(problem.upper_bounds)
    extra = np.eye(n)[finite]
    a = np.vstack([problem.a_ub, extra]) if extra.size else problem.a_ub
    b = np.concatenate([problem.b_ub, problem.upper_bounds[finite]])
    m = a.shape[0]

    # tableau columns: x (n) | slacks (m) | rhs; rows: constraints | objective
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b
    basis = list(range(n, n + m))

    negative = np.nonzero(b < 0)[0]
    if negative.size:
        _phase_one(tableau, basis, negative, n + m)

    tableau[-1, :] = 0.0
    tableau[-1, :n] = -problem.objective
    for i, var in enumerate(basis):
        if var < n + m and abs(tableau[-1, var]) > 0:
            tableau[-1] -= tableau[-1, var] * tableau[i]

    status = _run_simplex(tableau, basis)
    if status == "unbounded":
        raise LpError("problem is unbounded")

    x = np.zeros(n + m)
    for i, var in enumerate(basis):
        if var < n + m:
            x[var] = tableau[i, -1]
    return float(tableau[-1, -1]), x[:n]


def _phase_one(tableau, basis, negative_rows, n_cols):
    """Drive artificial variables (one per negative-rhs row) out of the basis."""
    m = tableau.shape[0] - 1
    n_art = negative_rows.size
    art = np.zeros((m + 1, n_art))
    work = np.hstack([tableau[:, :-1], art, tableau[:, -1:]])
    for k, i in enumerate(negative_rows):
        work[i] *= -1.0
        work[i, n_cols + k] = 1.0
        basis[i] = n_cols + k
    # phase-one objective: minimize sum of artificials (as max of negated sum)
    work[-1, :] = 0.0
    work[-1, n_cols : n_cols + n_art] = 1.0
    for k, i in enumerate(negative_rows):
        work[-1] -= work[i]
    status = _run_simplex(work, basis)
    if status != "optimal" or work[-1, -1] < -1e-8:
        raise LpError("problem is infeasible")
    # pivot any artificial still basic (at zero level) out on a structural column
    for i in range(m):
        if basis[i] >= n_cols:
            cols = np.nonzero(np.abs(work[i, :n_cols]) > PIVOT_TOL)[0]
            if cols.size:
                _pivot(work, i, int(cols[0]))
                basis[i] = int(cols[0])
    tableau[:, :-1] = work[:, :n_cols]
    tableau[:, -1] = work[:, -1]
