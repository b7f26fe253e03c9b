"""Dense two-phase simplex over an arbitrary ordered field.

The same tableau code runs on float64 arrays (eps = 1e-9) and on numpy object
arrays holding Fraction / Quad entries (eps = 0, every comparison exact).  The
exact path is what turns LP-based membership and exposure statements into
certificates: a replayed optimal basis plus exact complementary slackness.

Bland's rule for both the entering and leaving choice, so no cycling.
Artificial columns stay in the tableau through phase 2 (barred from entering);
the final reduced cost over artificial i is -y_i which yields the duals
without refactorisation.

Dual sign convention follows sensitivity: dual_eq[i] = d(value)/d(b_eq[i]) and
dual_ub[i] = d(value)/d(b_ub[i]) for the problem in its *original* sense, so
for a maximisation an active upper-bound row has a nonnegative dual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPError(RuntimeError):
    pass


class _UnstableError(LPError):
    """Float tableau lost feasibility or optimality beyond repair; the
    caller replays the instance in exact rational arithmetic."""


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    value: object = None
    dual_eq: np.ndarray | None = None
    dual_ub: np.ndarray | None = None
    duality_gap: object = None
    niter: int = 0

    def require(self, status=OPTIMAL) -> "LPResult":
        if self.status != status:
            raise LPError("LP status %s, wanted %s" % (self.status, status))
        return self


def _as_array(data, n_cols, exact):
    if data is None:
        if exact:
            return np.empty((0, n_cols), dtype=object)
        return np.zeros((0, n_cols))
    if exact:
        arr = np.array([[_exactify(v) for v in row] for row in data], dtype=object)
        if arr.ndim == 1:
            arr = arr.reshape(0, n_cols)
        return arr
    return np.atleast_2d(np.asarray(data, dtype=float))


def _exactify(v):
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10 ** 12) if v != int(v) else Fraction(int(v))
    return v


def _vec(data, exact):
    if data is None:
        return np.zeros(0) if not exact else np.empty(0, dtype=object)
    if exact:
        return np.array([_exactify(v) for v in data], dtype=object)
    return np.asarray(data, dtype=float)


def solve_lp(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, bounds=(0, None),
             maximize=False, exact=False, eps=None, max_iter=None) -> LPResult:
    """Solve min/max c.x subject to a_ub x <= b_ub, a_eq x = b_eq, bounds.

    bounds: one (lo, hi) pair for all variables or a sequence of pairs;
    None means unbounded on that side.  Exact mode accepts Fraction / Quad /
    int entries and returns exact values.
    """
    c = _vec(c, exact)
    n = len(c)
    a_ub = _as_array(a_ub, n, exact)
    b_ub = _vec(b_ub, exact)
    a_eq = _as_array(a_eq, n, exact)
    b_eq = _vec(b_eq, exact)
    if a_ub.shape[0] != len(b_ub) or a_eq.shape[0] != len(b_eq):
        raise ValueError("constraint matrix / rhs length mismatch")
    if isinstance(bounds, tuple) and len(bounds) == 2 and not isinstance(bounds[0], (tuple, list)):
        bounds = [bounds] * n
    bounds = list(bounds)
    if len(bounds) != n:
        raise ValueError("need one bounds pair per variable")

    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    if eps is None:
        eps = zero if exact else 1e-9

    sense = -one if maximize else one
    cmin = c * sense if maximize else c.copy()

    # --- build standard equality form  min cz, Az = b, z >= 0 ----------------
    # column map: per original variable either one shifted column, one mirrored
    # column, or a (plus, minus) pair for free variables
    col_of = []      # per original var: ("shift", col, lo) / ("mirror", col, hi) / ("free", cp, cm)
    cols = []        # standard-form objective entries
    var_ub_rows = [] # (col, hi - lo) extra rows for two-sided bounds
    for j in range(n):
        lo, hi = bounds[j]
        lo = _exactify(lo) if exact and lo is not None else lo
        hi = _exactify(hi) if exact and hi is not None else hi
        if lo is None and hi is None:
            col_of.append(("free", len(cols), len(cols) + 1))
            cols.append(cmin[j])
            cols.append(-cmin[j])
        elif lo is not None:
            col_of.append(("shift", len(cols), lo))
            cols.append(cmin[j])
            if hi is not None:
                var_ub_rows.append((len(cols) - 1, hi - lo))
        else:
            col_of.append(("mirror", len(cols), hi))
            cols.append(-cmin[j])

    n_rows = len(b_eq) + len(b_ub) + len(var_ub_rows)
    n_slack = len(b_ub) + len(var_ub_rows)
    n_struct = len(cols)
    n_cols = n_struct + n_slack

    if exact:
        A = np.full((n_rows, n_cols), Fraction(0), dtype=object)
        b = np.full(n_rows, Fraction(0), dtype=object)
        chat = np.array(cols + [Fraction(0)] * n_slack, dtype=object)
    else:
        A = np.zeros((n_rows, n_cols))
        b = np.zeros(n_rows)
        chat = np.array(cols + [0.0] * n_slack)

    def fill_row(r, a_row, rhs):
        acc = rhs
        for j in range(n):
            kind = col_of[j]
            aj = a_row[j]
            if kind[0] == "shift":
                A[r, kind[1]] = A[r, kind[1]] + aj
                acc = acc - aj * kind[2]
            elif kind[0] == "mirror":
                A[r, kind[1]] = A[r, kind[1]] - aj
                acc = acc - aj * kind[2]
            else:
                A[r, kind[1]] = A[r, kind[1]] + aj
                A[r, kind[2]] = A[r, kind[2]] - aj
        b[r] = acc

    r = 0
    for i in range(len(b_eq)):
        fill_row(r, a_eq[i], b_eq[i])
        r += 1
    slack = n_struct
    for i in range(len(b_ub)):
        fill_row(r, a_ub[i], b_ub[i])
        A[r, slack] = one
        slack += 1
        r += 1
    for col, cap in var_ub_rows:
        A[r, col] = one
        A[r, slack] = one
        b[r] = cap
        slack += 1
        r += 1

    flips = [one] * n_rows
    for i in range(n_rows):
        if b[i] < zero:
            A[i] = -A[i]
            b[i] = -b[i]
            flips[i] = -one

    try:
        res = _simplex(A, b, chat, exact=exact, eps=eps, max_iter=max_iter)
    except _UnstableError:
        if exact:
            raise
        # degenerate instances can defeat any fixed float pivoting; replay
        # the identical instance exactly (floats are dyadic rationals) and
        # round the result
        fres = solve_lp(
            [Fraction(float(v)) for v in c0],
            a_ub=_fraction_rows(a_ub), b_ub=[Fraction(float(v)) for v in b_ub],
            a_eq=_fraction_rows(a_eq), b_eq=[Fraction(float(v)) for v in b_eq],
            bounds=[(None if lo is None else Fraction(float(lo)),
                     None if hi is None else Fraction(float(hi)))
                    for lo, hi in bounds],
            maximize=maximize, exact=True)
        return _float_result(fres)
    if res[0] != OPTIMAL:
        return LPResult(status=res[0], niter=res[3] if len(res) > 3 else 0)
    z, y, niter = res[1], res[2], res[3]

    # map solution back
    if exact:
        x = np.empty(n, dtype=object)
    else:
        x = np.zeros(n)
    for j in range(n):
        kind = col_of[j]
        if kind[0] == "shift":
            x[j] = kind[2] + z[kind[1]]
        elif kind[0] == "mirror":
            x[j] = kind[2] - z[kind[1]]
        else:
            x[j] = z[kind[1]] - z[kind[2]]

    value_min = sum(cmin[j] * x[j] for j in range(n)) if n else zero
    # strong duality holds in the shifted standard form: chat.z = b.y
    value_std = sum(chat[j] * z[j] for j in range(n_cols))
    dual_gap = value_std - sum(b[i] * y[i] for i in range(n_rows))
    value = -value_min if maximize else value_min
    dsign = -one if maximize else one
    dual_eq = np.array([y[i] * flips[i] * dsign for i in range(len(b_eq))],
                       dtype=object if exact else float)
    dual_ub = np.array([y[len(b_eq) + i] * flips[len(b_eq) + i] * dsign
                        for i in range(len(b_ub))],
                       dtype=object if exact else float)
    return LPResult(OPTIMAL, x=x, value=value, dual_eq=dual_eq, dual_ub=dual_ub,
                    duality_gap=dual_gap, niter=niter)


def _simplex(A, b, c, exact, eps, max_iter=None):
    """Two-phase tableau on  min c z, A z = b (b >= 0), z >= 0.

    Returns (status,) or (OPTIMAL, z, y, niter) with y the equality duals.
    """
    m, n = A.shape
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    if max_iter is None:
        max_iter = 2000 + 200 * (m + n)

    # tableau: n structural+slack cols, m artificial cols, rhs
    if exact:
        T = np.full((m, n + m + 1), Fraction(0), dtype=object)
    else:
        T = np.zeros((m, n + m + 1))
    T[:, :n] = A
    for i in range(m):
        T[i, n + i] = one
        T[i, -1] = b[i]
    basis = list(range(n, n + m))
    structural = list(range(n))

    # cost rows over all n + m columns for the two phases
    if exact:
        phase1_cost = np.array([zero] * n + [one] * m, dtype=object)
        phase2_cost = np.array(list(c) + [zero] * m, dtype=object)
        obj = np.full(n + m + 1, Fraction(0), dtype=object)
    else:
        phase1_cost = np.concatenate([np.zeros(n), np.ones(m)])
        phase2_cost = np.concatenate([np.asarray(c, dtype=float), np.zeros(m)])
        obj = np.zeros(n + m + 1)
        Afull = np.hstack([np.asarray(A, dtype=float), np.eye(m)])
        brhs = np.asarray(b, dtype=float)[:, None]
    current_cost = [phase1_cost]
    niter = 0

    def rebuild_obj():
        # reduced-cost row for the current basis from the original costs
        nonlocal obj
        cost = current_cost[0]
        if exact:
            obj = np.array(list(cost) + [zero], dtype=object)
        else:
            obj = np.concatenate([cost, [0.0]])
        for i in range(m):
            cb = cost[basis[i]]
            if cb != zero:
                obj = obj - cb * T[i]

    def rebuild_from_basis():
        # float tableaus drift: every pivot smears roundoff over the whole
        # tableau, and a few hundred pivots can corrupt it enough to stop at
        # a non-optimal (or slightly infeasible) vertex.  Refactorizing from
        # the original data for the current basis resets the error.
        if exact:
            return False
        M = Afull[:, basis]
        try:
            fresh = np.linalg.solve(M, np.hstack([Afull, brhs]))
        except np.linalg.LinAlgError:
            return False
        if not np.all(np.isfinite(fresh)):
            return False
        T[:, :] = fresh
        return True

    def clamp_rhs():
        for i in range(m):
            if T[i, -1] < zero:
                T[i, -1] = zero

    def pivot(r, col):
        piv = T[r, col]
        T[r] = T[r] / piv
        for i in range(m):
            if i != r and T[i, col] != zero:
                T[i] = T[i] - T[i, col] * T[r]
        nonlocal obj
        if obj[col] != zero:
            obj = obj - obj[col] * T[r]
        basis[r] = col

    def run(allowed_cols, stop_below=None):
        nonlocal niter
        dead = set()
        while True:
            if stop_below is not None and -obj[-1] <= stop_below:
                return OPTIMAL    # phase 1 cannot go below zero
            enter = -1
            for j in allowed_cols:
                if j not in dead and obj[j] < -eps:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            if exact:
                leave, best = -1, None
                for i in range(m):
                    t = T[i, enter]
                    if t > eps:
                        ratio = T[i, -1] / t
                        if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                            best, leave = ratio, i
            else:
                # among (near-)tied minimal ratios pivot on the largest
                # entry; pivoting on an eps-scale entry multiplies the
                # tableau's accumulated error by its reciprocal
                leave, best, bpiv = -1, None, 0.0
                for i in range(m):
                    t = T[i, enter]
                    if t > eps:
                        ratio = T[i, -1] / t
                        if best is None:
                            best, leave, bpiv = ratio, i, t
                            continue
                        tie = 1e-12 * (1.0 + abs(best))
                        if ratio < best - tie:
                            best, leave, bpiv = ratio, i, t
                        elif ratio <= best + tie and t > bpiv:
                            leave, bpiv = i, t
                            if ratio < best:
                                best = ratio
            if leave < 0:
                # every LP built here lives on a bounded polytope, so a
                # recession direction whose reduced cost is at roundoff scale
                # is noise from accumulated row operations, not a real ray;
                # retire the column instead of declaring unboundedness
                if not exact and obj[enter] > -1e-6:
                    dead.add(enter)
                    continue
                return UNBOUNDED
            pivot(leave, enter)
            niter += 1
            if not exact and niter % 64 == 0 and rebuild_from_basis():
                clamp_rhs()
                rebuild_obj()
                dead.clear()
            if niter > max_iter:
                raise LPError("simplex iteration limit (%d) exceeded" % max_iter)

    def dual_repair(rhs_tol):
        # pivot genuinely negative rhs rows out while the reduced costs stay
        # (near) nonnegative: standard dual-simplex ratio rule
        nonlocal niter
        for _ in range(2 * m + 16):
            row, worst = -1, -rhs_tol
            for i in range(m):
                if T[i, -1] < worst:
                    worst, row = T[i, -1], i
            if row < 0:
                return True
            enter, best = -1, None
            for j in structural:
                t = T[row, j]
                if t < -eps:
                    ratio = obj[j] / (-t)
                    if best is None or ratio < best:
                        best, enter = ratio, j
            if enter < 0:
                return False
            pivot(row, enter)
            niter += 1
        return False

    feas_tol = zero if exact else 1e-7 * max(1.0, float(np.max(np.abs(b))) if m else 1.0)
    rebuild_obj()
    # float mode stops phase 1 as soon as the artificials are numerically
    # cleared; grinding further only chases roundoff in the reduced costs
    status = run(structural, stop_below=None if exact else 0.01 * feas_tol)
    if status != OPTIMAL:   # phase 1 objective is bounded below by 0
        raise LPError("phase-1 unbounded; constraint matrix is broken")
    phase1_val = -obj[-1]
    if phase1_val > feas_tol:
        return (INFEASIBLE, None, None, niter)

    if rebuild_from_basis():
        clamp_rhs()

    # drive basic artificials out where a nonzero structural entry exists
    for i in range(m):
        if basis[i] >= n:
            best_j, best_mag = -1, eps
            for j in range(n):
                mag = abs(T[i, j])
                if mag > best_mag:
                    best_j, best_mag = j, mag
            if best_j >= 0:
                pivot(i, best_j)
    # rows still holding an artificial are dependent; they never change again
    # because every structural entry in them is (numerically) zero

    # phase 2, with an audit loop in float mode: a declared optimum only
    # counts once the basis refactors to nonnegative rhs and reduced costs
    current_cost[0] = phase2_cost
    rebuild_obj()
    audits = 0
    while True:
        status = run(structural)
        if status != OPTIMAL:
            return (status, None, None, niter)
        if exact or not rebuild_from_basis():
            break
        rebuild_obj()
        bad_rhs = min((float(T[i, -1]) for i in range(m)), default=0.0)
        bad_red = min((float(obj[j]) for j in structural), default=0.0)
        if bad_rhs >= -feas_tol and bad_red >= -1e-7:
            break
        audits += 1
        if audits >= 5:
            raise LPError("simplex failed to stabilise (rhs %.3g, "
                          "reduced cost %.3g)" % (bad_rhs, bad_red))
        if bad_rhs < -feas_tol and not dual_repair(feas_tol):
            raise LPError("simplex lost primal feasibility (rhs %.3g)"
                          % bad_rhs)
        clamp_rhs()

    if exact:
        z = np.full(n, Fraction(0), dtype=object)
        y = np.empty(m, dtype=object)
    else:
        z = np.zeros(n)
        y = np.zeros(m)
    for i in range(m):
        if basis[i] < n:
            z[basis[i]] = T[i, -1]
    for i in range(m):
        y[i] = -obj[n + i]
    return (OPTIMAL, z, y, niter)


def solve_lp_exact(c, **kw) -> LPResult:
    kw["exact"] = True
    return solve_lp(c, **kw)
