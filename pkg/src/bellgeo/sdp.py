"""Log-det barrier solver for linear matrix inequalities.

Solves  max c.y  subject to  F(y) = F0 + sum_i y_i F_i >= 0  (psd) with a
standard path-following barrier: Newton-centre  -t c.y - log det F(y)  for a
geometrically increasing t until the barrier parameter m/t (m = matrix size)
is below the requested gap.  At an exactly centred point Z = F(y)^-1 / t is
dual feasible (<F_i, Z> = -c_i) with duality gap <F(y), Z> = m/t, so

    value <= <F0, Z>

is a certified upper bound up to the reported residual in the dual
equalities.  Both numbers are returned; callers that need a safe upper side
use ``upper``.

No external solver: matrices here are at most a few dozen rows, and dense
Cholesky plus einsum Hessians are plenty.
"""

from __future__ import annotations

import numpy as np

GAP_TOL = 1e-9


class SDPError(RuntimeError):
    pass


def _chol(F):
    try:
        return np.linalg.cholesky(F)
    except np.linalg.LinAlgError:
        return None


def _center(c, F0, Fs, y, t, newton_tol=1e-11, max_newton=60):
    """Newton-centre min -t c.y - log det F(y) from a strictly feasible y."""
    n = len(c)
    y = y.copy()
    F = F0 + np.einsum("i,ijk->jk", y, Fs) if n else F0.copy()
    L = _chol(F)
    if L is None:
        raise SDPError("centering started at an infeasible point")
    for _ in range(max_newton):
        Linv = np.linalg.inv(L)
        # S_i = L^-1 F_i L^-T, symmetric congruences of the constraint maps
        S = np.einsum("ab,ibc,dc->iad", Linv, Fs, Linv) if n else np.zeros((0,) + F.shape)
        grad = -t * c - np.trace(S, axis1=1, axis2=2)
        H = np.einsum("iab,jab->ij", S, S)
        try:
            step = np.linalg.solve(H, -grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, -grad, rcond=None)[0]
        lam2 = float(step @ H @ step)
        if not np.isfinite(lam2):
            raise SDPError("Newton step diverged")
        if lam2 <= newton_tol:
            break
        phi = -t * float(c @ y) - 2.0 * float(np.sum(np.log(np.diag(L))))
        alpha = 1.0
        for _ in range(60):
            y_try = y + alpha * step
            F_try = F0 + np.einsum("i,ijk->jk", y_try, Fs)
            L_try = _chol(F_try)
            if L_try is not None:
                phi_try = -t * float(c @ y_try) - 2.0 * float(np.sum(np.log(np.diag(L_try))))
                if phi_try <= phi - 1e-4 * alpha * lam2 or alpha < 1e-12:
                    y, F, L = y_try, F_try, L_try
                    break
            alpha *= 0.5
        else:
            break
    return y, F, L


def solve_lmi(c, F0, Fs, y0=None, gap_tol=GAP_TOL, t0=1.0, mu=10.0):
    """max c.y s.t. F0 + sum y_i F_i psd, from a strictly feasible y0.

    y0 defaults to 0, which must then be strictly feasible (true for moment
    problems where F0 is an identity block).  Returns a dict with the primal
    ``value``, certified ``upper`` bound, dual matrix ``Z``, the reported
    ``gap`` m/t and the max dual-equality ``residual``.
    """
    c = np.asarray(c, dtype=float)
    F0 = np.asarray(F0, dtype=float)
    Fs = np.asarray(Fs, dtype=float)
    n = len(c)
    m = F0.shape[0]
    y = np.zeros(n) if y0 is None else np.asarray(y0, dtype=float).copy()
    F = F0 + (np.einsum("i,ijk->jk", y, Fs) if n else 0.0)
    if _chol(F) is None:
        raise SDPError("starting point not strictly feasible")
    t = t0
    best = None  # (upper, Z, residual); certificates from mid-path t values
    # beat the final one, where eps * t noise in F^-1 dominates m/t
    for _ in range(200):
        y, F, L = _center(c, F0, Fs, y, t)
        Finv = np.linalg.inv(F)
        Z = (Finv + Finv.T) / (2.0 * t)
        Z, upper, residual = _refine_dual(c, F0, Fs, Z)
        if best is None or upper < best[0]:
            best = (upper, Z, residual)
        if m / t < gap_tol:
            break
        if abs(float(c @ y)) > 1e8:
            raise SDPError("objective diverging; problem looks unbounded")
        t *= mu
    else:
        raise SDPError("barrier failed to reach the requested gap")
    value = float(c @ y)
    upper, Z, residual = best
    upper = max(upper, value)  # value is feasible, so never report below it
    return {
        "y": y, "value": value, "upper": upper, "Z": Z,
        "gap": m / t, "residual": residual, "matrix": F,
    }


def _refine_dual(c, F0, Fs, Z):
    """Tighten Z into a genuinely dual-feasible certificate.

    Newton centring leaves <F_i, Z> = -c_i only to gradient accuracy, which
    can exceed the duality gap and would invalidate <F0, Z> as an upper
    bound.  Project Z onto the dual equality space (a Gram solve over the
    pencil span), then fix any tiny negative eigenvalue by adding a multiple
    of the identity, which preserves the equalities because the pencil
    matrices all have zero diagonal here.
    """
    n = len(c)
    m = F0.shape[0]
    if n:
        resid = np.einsum("ijk,jk->i", Fs, Z) + c
        G = np.einsum("ijk,ljk->il", Fs, Fs)
        w = np.linalg.lstsq(G, resid, rcond=None)[0]
        Z = Z - np.einsum("i,ijk->jk", w, Fs)
        Z = 0.5 * (Z + Z.T)
    lam_min = float(np.linalg.eigvalsh(Z)[0])
    if lam_min < 0:
        traceless = (not n) or float(np.max(np.abs(np.einsum("ijj->i", Fs)))) < 1e-13
        if traceless:
            Z = Z + (-lam_min) * np.eye(m)
        # otherwise leave Z; the residual below reflects remaining slack
    residual = float(np.max(np.abs(np.einsum("ijk,jk->i", Fs, Z) + c))) if n else 0.0
    residual = max(residual, max(0.0, -float(np.linalg.eigvalsh(Z)[0])))
    upper = float(np.sum(F0 * Z))
    return Z, upper, residual


def feasible_start(F0, Fs, target_margin=1e-3, gap_tol=1e-6):
    """Strictly feasible y for the LMI, or None if none exists.

    Runs the same barrier on  max s : F(y) - s I psd, which is strictly
    feasible at y = 0, s = lambda_min(F0) - 1; stops as soon as the margin is
    comfortably positive.
    """
    m = F0.shape[0]
    n = len(Fs)
    Fs_ext = np.concatenate([np.asarray(Fs, dtype=float),
                             -np.eye(m)[None, :, :]], axis=0)
    c_ext = np.zeros(n + 1)
    c_ext[-1] = 1.0
    s0 = float(np.linalg.eigvalsh(F0)[0]) - 1.0
    y = np.zeros(n + 1)
    y[-1] = s0
    t = 1.0
    while True:
        y, F, L = _center(c_ext, F0, Fs_ext, y, t)
        if y[-1] > target_margin:
            return y[:-1]
        if (m / t) < gap_tol:
            break
        t *= 10.0
    if y[-1] > 0:
        return y[:-1]
    return None


def solve_lmi_eq(c, F0, Fs, a_eq, b_eq, y0=None, gap_tol=GAP_TOL):
    """max c.y s.t. F(y) psd and a_eq y = b_eq, by null-space elimination.

    The affine solution set y = y_p + N u is substituted into the pencil, the
    reduced problem is solved with solve_lmi, and the answer is mapped back.
    y0, when given, must satisfy the equalities and strict feasibility.
    """
    c = np.asarray(c, dtype=float)
    Fs = np.asarray(Fs, dtype=float)
    A = np.atleast_2d(np.asarray(a_eq, dtype=float))
    b = np.asarray(b_eq, dtype=float)
    y_p, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.max(np.abs(A @ y_p - b)) > 1e-9:
        raise SDPError("equality system inconsistent")
    u, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > 1e-12 * (s[0] if len(s) else 1.0)))
    N = vt[rank:].T  # columns span the null space
    if y0 is not None:
        y0 = np.asarray(y0, dtype=float)
        u0 = N.T @ (y0 - y_p)
    else:
        u0 = None
    F0_red = F0 + np.einsum("i,ijk->jk", y_p, Fs)
    Fs_red = np.einsum("ij,ikl->jkl", N, Fs)
    c_red = N.T @ c
    if u0 is None:
        start = feasible_start(F0_red, Fs_red)
        if start is None:
            raise SDPError("no strictly feasible point on the affine slice")
        u0 = start
    res = solve_lmi(c_red, F0_red, Fs_red, y0=u0, gap_tol=gap_tol)
    y = y_p + N @ res["y"]
    offset = float(c @ y_p)
    res["y"] = y
    res["value"] = float(c @ y)
    res["upper"] = res["upper"] + offset
    return res
