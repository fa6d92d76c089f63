# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled edition of the bounded-variable two-phase simplex.

Same algorithm and tolerances as gaitgraph._kernels.pure, with the
pivot loop in C.  Kept in lockstep with the pure module; the parity
tests run both backends on identical instances and compare statuses
and objectives (pivot tie-breaking may differ in degenerate cases, so
the optimal vertex itself is not required to be bit-identical).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

cdef double TOL_COST = 1e-9
cdef double TOL_PIV = 1e-9
cdef double TOL_FEAS = 1e-7

OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT = 0, 1, 2, 3


cdef void _pivot(double[:, ::1] T, double[::1] y, Py_ssize_t r, Py_ssize_t j,
                 Py_ssize_t ncols, Py_ssize_t k) noexcept:
    cdef Py_ssize_t i, col
    cdef double piv = T[r, j]
    cdef double factor, yj
    for col in range(ncols):
        T[r, col] /= piv
    for i in range(k):
        if i == r:
            continue
        factor = T[i, j]
        if factor != 0.0:
            for col in range(ncols):
                T[i, col] -= factor * T[r, col]
    yj = y[j]
    if yj != 0.0:
        for col in range(ncols):
            y[col] -= yj * T[r, col]
    for i in range(k):
        T[i, j] = 0.0
    T[r, j] = 1.0
    y[j] = 0.0


cdef int _run_phase(double[:, ::1] T, double[::1] xB, double[::1] y,
                    long[::1] basis, cnp.uint8_t[::1] in_basis,
                    cnp.uint8_t[::1] at_upper, cnp.uint8_t[::1] allowed,
                    double[::1] uext, Py_ssize_t n, Py_ssize_t k,
                    long* iters, long max_iter, long bland_after) noexcept:
    cdef Py_ssize_t ncols = n + k
    cdef Py_ssize_t i, j, r, lv
    cdef double score, best, sigma, d_i, t_min, t_bound, t, limit, ub, enter_val
    cdef bint bland

    while True:
        if iters[0] >= max_iter:
            return ITERATION_LIMIT
        iters[0] += 1
        bland = iters[0] > bland_after

        j = -1
        best = TOL_COST
        for i in range(ncols):
            if in_basis[i] or not allowed[i]:
                continue
            score = y[i] if at_upper[i] else -y[i]
            if score > best:
                j = i
                if bland:
                    break
                best = score
        if j < 0:
            return OPTIMAL

        sigma = -1.0 if at_upper[j] else 1.0

        t_min = INFINITY
        r = -1
        for i in range(k):
            d_i = sigma * T[i, j]
            if d_i > TOL_PIV:
                limit = xB[i] / d_i
            elif d_i < -TOL_PIV:
                ub = uext[basis[i]]
                if ub == INFINITY:
                    continue
                limit = (ub - xB[i]) / (-d_i)
            else:
                continue
            if limit < 0.0:
                limit = 0.0
            if limit < t_min:
                t_min = limit
                r = i
            elif bland and r >= 0 and limit <= t_min + 1e-12 and basis[i] < basis[r]:
                r = i

        t_bound = uext[j]
        if r < 0 and t_bound == INFINITY:
            return UNBOUNDED
        if t_bound < t_min - 1e-12:
            for i in range(k):
                xB[i] -= t_bound * sigma * T[i, j]
            at_upper[j] = 1 - at_upper[j]
            continue

        t = t_min
        for i in range(k):
            xB[i] -= t * sigma * T[i, j]
        enter_val = t if sigma > 0.0 else uext[j] - t
        lv = basis[r]
        at_upper[lv] = 1 if sigma * T[r, j] < 0.0 else 0
        in_basis[lv] = 0
        if lv >= n:
            allowed[lv] = 0
        basis[r] = j
        in_basis[j] = 1
        at_upper[j] = 0
        xB[r] = enter_val
        _pivot(T, y, r, j, ncols, k)


def simplex_bounded(A, b, c, u, long max_iter=0):
    """Solve min c@x s.t. A x = b, 0 <= x <= u.

    Returns (status, x, objective); statuses match the pure module.
    """
    cdef cnp.ndarray[double, ndim=2] A_arr = np.ascontiguousarray(A, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] b_arr = np.asarray(b, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] c_arr = np.asarray(c, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] u_arr = np.asarray(u, dtype=np.float64)
    cdef Py_ssize_t k = A_arr.shape[0]
    cdef Py_ssize_t n = A_arr.shape[1]
    cdef long bland_after = 200 + 20 * (k + n)
    if max_iter <= 0:
        max_iter = 500 + 60 * (k + n)

    sign = np.where(b_arr < 0.0, -1.0, 1.0)
    T_np = np.empty((k, n + k), dtype=np.float64)
    T_np[:, :n] = A_arr * sign[:, None]
    T_np[:, n:] = np.eye(k)
    xB_np = b_arr * sign

    basis_np = np.arange(n, n + k, dtype=np.int64)
    in_basis_np = np.zeros(n + k, dtype=np.uint8)
    in_basis_np[n:] = 1
    at_upper_np = np.zeros(n + k, dtype=np.uint8)
    uext_np = np.concatenate([u_arr, np.full(k, np.inf)])
    allowed_np = np.ones(n + k, dtype=np.uint8)
    allowed_np[:n] = u_arr > TOL_PIV

    cdef double[:, ::1] T = T_np
    cdef double[::1] xB = xB_np
    cdef long[::1] basis = basis_np
    cdef cnp.uint8_t[::1] in_basis = in_basis_np
    cdef cnp.uint8_t[::1] at_upper = at_upper_np
    cdef cnp.uint8_t[::1] allowed = allowed_np
    cdef double[::1] uext = uext_np
    cdef long iters = 0
    cdef int status
    cdef Py_ssize_t r, j

    # phase 1: drive the artificial basis to zero
    cost1 = np.zeros(n + k)
    cost1[n:] = 1.0
    y1_np = cost1 - cost1[basis_np] @ T_np
    cdef double[::1] y1 = y1_np
    status = _run_phase(T, xB, y1, basis, in_basis, at_upper, allowed,
                        uext, n, k, &iters, max_iter, bland_after)
    if status != OPTIMAL:
        return status, np.zeros(n), np.inf
    art_rows = np.nonzero(basis_np >= n)[0]
    if art_rows.size and xB_np[art_rows].sum() > TOL_FEAS:
        return INFEASIBLE, np.zeros(n), np.inf

    for r in art_rows:
        if basis_np[r] < n:
            continue
        row = np.abs(T_np[r, :n])
        row[in_basis_np[:n].astype(bool)] = 0.0
        j = <Py_ssize_t> np.argmax(row)
        if row[j] <= TOL_PIV:
            continue  # redundant row; artificial stays basic at zero
        lv = basis_np[r]
        in_basis[lv] = 0
        allowed[lv] = 0
        basis[r] = j
        in_basis[j] = 1
        # the entering variable keeps its current value (0 or its upper
        # bound); only the bookkeeping changes in this degenerate pivot
        xB[r] = uext[j] if at_upper[j] else 0.0
        at_upper[j] = 0
        _pivot(T, y1, r, j, n + k, k)

    # phase 2 on the real objective with artificials locked out
    allowed_np[n:] = 0
    cost2 = np.concatenate([c_arr, np.zeros(k)])
    y2_np = cost2 - cost2[basis_np] @ T_np
    cdef double[::1] y2 = y2_np
    status = _run_phase(T, xB, y2, basis, in_basis, at_upper, allowed,
                        uext, n, k, &iters, max_iter, bland_after)
    if status == UNBOUNDED:
        return UNBOUNDED, np.zeros(n), -np.inf
    if status == ITERATION_LIMIT:
        return ITERATION_LIMIT, np.zeros(n), np.inf

    x_full = np.where(at_upper_np.astype(bool), uext_np, 0.0)
    x_full[~np.isfinite(x_full)] = 0.0
    x_full[basis_np] = xB_np
    x = np.clip(x_full[:n], 0.0, np.where(np.isfinite(u_arr), u_arr, np.inf))
    return OPTIMAL, x, float(c_arr @ x)
