"""Two-phase primal simplex with [0, u] variable bounds, numpy edition.

Reference implementation of the LP kernel; the Cython module
``gaitgraph._kernels._simplex`` mirrors it loop for loop.  The problem
form is

    minimize c @ x   subject to   A x = b,   0 <= x <= u

with per-variable upper bounds (np.inf allowed).  Inequalities are the
caller's business (add slack columns); so are general lower bounds
(shift the variables).

Upper bounds are handled without extra rows: a nonbasic variable rests
at either of its bounds and the ratio test caps the step at a basic
variable hitting 0 or its own upper bound, or at the entering variable
flipping straight to its opposite bound.  Entering uses Dantzig pricing
with a switch to Bland's rule after a fixed iteration budget so the
method cannot cycle.

Statuses: 0 optimal, 1 infeasible, 2 unbounded, 3 iteration limit.
"""

from __future__ import annotations

import numpy as np

TOL_COST = 1e-9
TOL_PIV = 1e-9
TOL_FEAS = 1e-7

OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT = 0, 1, 2, 3


def simplex_bounded(A, b, c, u, max_iter: int = 0):
    """Solve min c@x s.t. A x = b, 0 <= x <= u.

    Returns (status, x, objective); x is meaningful only for status 0.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    k, n = A.shape
    if max_iter <= 0:
        max_iter = 500 + 60 * (k + n)
    bland_after = 200 + 20 * (k + n)

    # Tableau over [structurals | artificials], rows oriented so b >= 0.
    sign = np.where(b < 0.0, -1.0, 1.0)
    T = np.empty((k, n + k), dtype=np.float64)
    T[:, :n] = A * sign[:, None]
    T[:, n:] = np.eye(k)
    xB = b * sign

    basis = np.arange(n, n + k)
    in_basis = np.zeros(n + k, dtype=bool)
    in_basis[n:] = True
    at_upper = np.zeros(n + k, dtype=bool)
    uext = np.concatenate([u, np.full(k, np.inf)])
    allowed = np.ones(n + k, dtype=bool)
    allowed[:n] = u > TOL_PIV  # zero-range variables are fixed at 0

    iters = 0

    def run_phase(cost):
        nonlocal iters, T, xB
        y = cost - cost[basis] @ T
        while True:
            if iters >= max_iter:
                return ITERATION_LIMIT
            iters += 1
            score = np.where(at_upper, y, -y)
            score[in_basis] = 0.0
            score[~allowed] = 0.0
            if iters > bland_after:
                cand = np.nonzero(score > TOL_COST)[0]
                if cand.size == 0:
                    return OPTIMAL
                j = int(cand[0])
            else:
                j = int(np.argmax(score))
                if score[j] <= TOL_COST:
                    return OPTIMAL

            sigma = -1.0 if at_upper[j] else 1.0
            d = sigma * T[:, j]
            ub_basic = uext[basis]
            t_row = np.full(k, np.inf)
            pos = d > TOL_PIV
            t_row[pos] = xB[pos] / d[pos]
            neg = (d < -TOL_PIV) & np.isfinite(ub_basic)
            t_row[neg] = (ub_basic[neg] - xB[neg]) / (-d[neg])
            np.maximum(t_row, 0.0, out=t_row)

            t_bound = uext[j]
            if t_row.size:
                r = int(np.argmin(t_row))
                t_min = t_row[r]
                if iters > bland_after and np.isfinite(t_min):
                    ties = np.nonzero(t_row <= t_min + 1e-12)[0]
                    r = int(ties[np.argmin(basis[ties])])
                    t_min = t_row[r]
            else:
                r, t_min = -1, np.inf

            if not np.isfinite(t_min) and not np.isfinite(t_bound):
                return UNBOUNDED
            if t_bound < t_min - 1e-12:
                # entering variable flips to its other bound
                xB -= t_bound * d
                at_upper[j] = ~at_upper[j]
                continue

            t = t_min
            xB -= t * d
            enter_val = t if sigma > 0 else uext[j] - t
            lv = basis[r]
            at_upper[lv] = d[r] < 0.0  # left at upper bound, else at lower
            in_basis[lv] = False
            if lv >= n:
                allowed[lv] = False  # artificials never re-enter
            basis[r] = j
            in_basis[j] = True
            at_upper[j] = False
            xB[r] = enter_val

            piv = T[r, j]
            T[r] /= piv
            colv = T[:, j].copy()
            colv[r] = 0.0
            T -= np.outer(colv, T[r])
            T[:, j] = 0.0
            T[r, j] = 1.0
            yj = y[j]
            if yj != 0.0:
                y -= yj * T[r]
            y[j] = 0.0

    # Phase 1: drive the artificial variables to zero.
    cost1 = np.zeros(n + k)
    cost1[n:] = 1.0
    status = run_phase(cost1)
    if status != OPTIMAL:
        return status, np.zeros(n), np.inf
    art_rows = np.nonzero(basis >= n)[0]
    if xB[art_rows].sum() > TOL_FEAS:
        return INFEASIBLE, np.zeros(n), np.inf

    # Pivot leftover artificials out on any usable structural column;
    # rows with none are redundant and keep a zero-valued artificial.
    for r in art_rows:
        if basis[r] < n:
            continue
        row = np.abs(T[r, :n])
        row[in_basis[:n]] = 0.0
        j = int(np.argmax(row))
        if row[j] <= TOL_PIV:
            continue
        lv = basis[r]
        in_basis[lv] = False
        allowed[lv] = False
        basis[r] = j
        in_basis[j] = True
        # the entering variable keeps its current value (0 or its upper
        # bound); only the bookkeeping changes in this degenerate pivot
        xB[r] = uext[j] if at_upper[j] else 0.0
        at_upper[j] = False
        piv = T[r, j]
        T[r] /= piv
        colv = T[:, j].copy()
        colv[r] = 0.0
        T -= np.outer(colv, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0

    # Phase 2 on the real objective with artificials locked out.
    allowed[n:] = False
    cost2 = np.concatenate([c, np.zeros(k)])
    status = run_phase(cost2)
    if status == UNBOUNDED:
        return UNBOUNDED, np.zeros(n), -np.inf
    if status == ITERATION_LIMIT:
        return ITERATION_LIMIT, np.zeros(n), np.inf

    x_full = np.where(at_upper, uext, 0.0)
    x_full[~np.isfinite(x_full)] = 0.0
    x_full[basis] = xB
    x = np.clip(x_full[:n], 0.0, np.where(np.isfinite(u), u, np.inf))
    return OPTIMAL, x, float(c @ x)
