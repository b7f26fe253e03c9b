"""Local and no-signalling polytopes: bounds, membership, vertices, noise.

Everything here is linear programming over the flattened probability vector.
The no-signalling affine hull is written as normalisation rows plus, for each
party, the requirement that summing out that party's outcome gives a table
independent of its setting; for the scenarios in scope those single-party
conditions already imply the full hierarchy of marginal conditions.

The local polytope is the convex hull of the deterministic points, so local
bounds are finite maxima and membership is a small feasibility LP.  In the
two-setting bipartite scenario everything is cross-checked twice over: the
no-signalling polytope has exactly 24 vertices (16 deterministic, 8 of
box type), and locality is equivalent to all eight sign variants of the
two-setting correlation inequality being at most 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lp import INFEASIBLE, OPTIMAL, solve_lp
from .scenario import (
    Behaviour,
    BellFunctional,
    CorrelatorTable,
    Scenario,
    behaviour_to_json,
    corr_to_prob,
    deterministic_matrix,
    functional_to_json,
)

CHSH_SCENARIO = Scenario((2, 2))


def affine_dimension(points, tol: float = 1e-7) -> int:
    """Dimension of the affine hull of a point set (rank of centred matrix)."""
    pts = np.atleast_2d(np.asarray(list(points), dtype=float))
    if pts.shape[0] <= 1:
        return 0
    return int(np.linalg.matrix_rank(pts[1:] - pts[0], tol=tol))


# --------------------------------------------------------------------------
# affine hull of the no-signalling set


def ns_equality_rows(scenario: Scenario):
    """Integer (A, b) with NS = {p >= 0 : A p = b} in the flat basis."""
    n = scenario.n_parties
    rows, rhs = [], []
    for x in scenario.input_tuples():
        row = np.zeros(scenario.n_cells, dtype=int)
        for a in scenario.output_tuples():
            row[np.ravel_multi_index(x + a, scenario.shape)] = 1
        rows.append(row)
        rhs.append(1)
    for j in range(n):
        others = [i for i in range(n) if i != j]
        if scenario.inputs[j] == 1:
            continue
        for xo in itertools.product(*[range(scenario.inputs[i]) for i in others]):
            for ao in itertools.product((0, 1), repeat=len(others)):
                for k in range(1, scenario.inputs[j]):
                    row = np.zeros(scenario.n_cells, dtype=int)
                    for xj, sgn in ((k, 1), (0, -1)):
                        x = [0] * n
                        a = [0] * n
                        for i, v in zip(others, xo):
                            x[i] = v
                        for i, v in zip(others, ao):
                            a[i] = v
                        x[j] = xj
                        for aj in (0, 1):
                            a[j] = aj
                            row[np.ravel_multi_index(tuple(x) + tuple(a),
                                                     scenario.shape)] += sgn
                    rows.append(row)
                    rhs.append(0)
    return np.array(rows), np.array(rhs)


# --------------------------------------------------------------------------
# two-setting correlation inequality variants and box-type vertices


def chsh_sign_patterns():
    """The 8 sign matrices s with prod(s) = -1, row-major over settings."""
    out = []
    for bits in itertools.product((1, -1), repeat=4):
        if bits[0] * bits[1] * bits[2] * bits[3] == -1:
            out.append(((bits[0], bits[1]), (bits[2], bits[3])))
    return out


def chsh_functional(signs=((1, 1), (1, -1))) -> BellFunctional:
    table = CorrelatorTable.bipartite(
        [0, 0], [0, 0], [[signs[0][0], signs[0][1]], [signs[1][0], signs[1][1]]])
    return BellFunctional.from_correlators(
        table, name="chsh%s" % (tuple(signs[0]) + tuple(signs[1]),))


def chsh_variants():
    return [chsh_functional(s) for s in chsh_sign_patterns()]


def pr_box(signs=((1, 1), (1, -1))) -> Behaviour:
    """Box-type extreme point: zero marginals, correlators equal to signs."""
    table = CorrelatorTable.bipartite(
        [0, 0], [0, 0], [[signs[0][0], signs[0][1]], [signs[1][0], signs[1][1]]])
    return corr_to_prob(table)


def pr_variants():
    return [pr_box(s) for s in chsh_sign_patterns()]


# --------------------------------------------------------------------------
# vertex enumeration (two-setting bipartite scenario)

_NS_VERTEX_CACHE: dict = {}


def ns_vertices(scenario: Scenario) -> np.ndarray:
    """All vertices of the no-signalling polytope, one flat behaviour per row.

    Enumerates cell subsets of size dim(NS) and solves the equality system
    with those cells pinned to zero; every vertex arises this way.  Kept to
    scenarios with at most 16 cells, which is all the exhaustive callers need.
    """
    key = scenario.inputs
    if key in _NS_VERTEX_CACHE:
        return _NS_VERTEX_CACHE[key]
    if scenario.n_cells > 16:
        raise NotImplementedError("vertex enumeration is limited to 16 cells")
    A, b = ns_equality_rows(scenario)
    A = A.astype(float)
    b = b.astype(float)
    dim = scenario.ns_dim
    n_cells = scenario.n_cells
    found = {}
    for zeros in itertools.combinations(range(n_cells), dim):
        keep = [j for j in range(n_cells) if j not in zeros]
        sub = A[:, keep]
        sol, residual, rank, _ = np.linalg.lstsq(sub, b, rcond=None)
        if rank < len(keep):
            continue
        if np.linalg.norm(sub @ sol - b) > 1e-10:
            continue
        if np.min(sol) < -1e-10:
            continue
        full = np.zeros(n_cells)
        full[keep] = sol
        found[tuple(np.round(full, 12))] = full
    verts = np.array(sorted(found.values(), key=tuple))
    _NS_VERTEX_CACHE[key] = verts
    return verts


# --------------------------------------------------------------------------
# bounds


def local_bound(functional: BellFunctional, exact: bool = False):
    """(beta_L, maximiser det indices).  Exact when the functional carries
    exact coefficients."""
    sc = functional.scenario
    D = deterministic_matrix(sc)
    if exact:
        if functional.exact_coeffs is None:
            raise ValueError("functional has no exact coefficients")
        coeffs = functional.exact_coeffs
        vals = []
        for row in D.astype(int):
            vals.append(sum(c for c, d in zip(coeffs, row) if d))
        best = vals[0]
        for v in vals[1:]:
            if v > best:
                best = v
        argmax = [i for i, v in enumerate(vals) if v == best]
        return best, argmax
    vals = D @ functional.flat()
    best = float(np.max(vals))
    scale = max(1.0, abs(best))
    argmax = [int(i) for i in np.flatnonzero(vals >= best - 1e-9 * scale)]
    return best, argmax


def ns_bound(functional: BellFunctional, exact: bool = False):
    """(beta_NS, maximiser Behaviour) via LP over the no-signalling set."""
    sc = functional.scenario
    A, b = ns_equality_rows(sc)
    if exact:
        if functional.exact_coeffs is None:
            raise ValueError("functional has no exact coefficients")
        res = solve_lp(functional.exact_coeffs, a_eq=A, b_eq=b, bounds=(0, None),
                       maximize=True, exact=True).require()
        p = Behaviour(sc, np.array([float(v) for v in res.x]))
        return res.value, p
    res = solve_lp(functional.flat(), a_eq=A, b_eq=b, bounds=(0, None),
                   maximize=True).require()
    return float(res.value), Behaviour(sc, res.x)


def ns_face_vertices(functional: BellFunctional, beta=None, tol: float = 1e-9):
    """Vertices of the maximising face, exhaustively (16-cell scenarios)."""
    verts = ns_vertices(functional.scenario)
    vals = verts @ functional.flat()
    if beta is None:
        beta = float(np.max(vals))
    scale = max(1.0, abs(float(beta)))
    return verts[vals >= float(beta) - tol * scale]


def ns_face_vertex_sample(functional: BellFunctional, beta, rng=None) -> Behaviour:
    """One vertex of the face {B = beta} of the NS polytope, any scenario.

    A linear program with a random objective lands on a basic feasible point
    of the face, and faces of a polytope only have polytope vertices as their
    own vertices.
    """
    rng = np.random.default_rng(rng)
    sc = functional.scenario
    A, b = ns_equality_rows(sc)
    A2 = np.vstack([A.astype(float), functional.flat()])
    b2 = np.concatenate([b.astype(float), [float(beta)]])
    res = solve_lp(rng.random(sc.n_cells), a_eq=A2, b_eq=b2,
                   bounds=(0, None), maximize=True).require()
    return Behaviour(sc, np.clip(res.x, 0.0, None), check=False)


# --------------------------------------------------------------------------
# local membership


def local_membership(p: Behaviour, tol: float = 1e-9):
    """(member, distance, weights): distance is the max-norm gap to the hull.

    Solves  min t  s.t.  |D^T w - p| <= t,  sum w = 1,  w >= 0;  membership
    means t <= tol.  weights is None when not a member.
    """
    D = deterministic_matrix(p.scenario)
    n_det, n_cells = D.shape
    flat = p.flat()
    # variables: w (n_det), t
    c = np.zeros(n_det + 1)
    c[-1] = 1.0
    a_ub = np.zeros((2 * n_cells, n_det + 1))
    b_ub = np.zeros(2 * n_cells)
    a_ub[:n_cells, :n_det] = D.T
    a_ub[:n_cells, -1] = -1.0
    b_ub[:n_cells] = flat
    a_ub[n_cells:, :n_det] = -D.T
    a_ub[n_cells:, -1] = -1.0
    b_ub[n_cells:] = -flat
    a_eq = np.zeros((1, n_det + 1))
    a_eq[0, :n_det] = 1.0
    res = solve_lp(c, a_ub, b_ub, a_eq, [1.0],
                   bounds=[(0, None)] * n_det + [(0, None)]).require()
    dist = float(res.value)
    member = dist <= tol
    return member, dist, (res.x[:n_det] if member else None)


def separating_functional(p: Behaviour):
    """(functional, margin): B with |coeffs| <= 1, max_det B.D <= z, B.p = z + margin.

    margin > 0 certifies p is outside the local polytope; margin <= 0 means no
    box-normalised separator exists, i.e. p is local.
    """
    D = deterministic_matrix(p.scenario)
    n_det, n_cells = D.shape
    # variables: B (n_cells), z
    c = np.concatenate([p.flat(), [-1.0]])
    a_ub = np.zeros((n_det, n_cells + 1))
    a_ub[:, :n_cells] = D
    a_ub[:, -1] = -1.0
    res = solve_lp(c, a_ub, np.zeros(n_det),
                   bounds=[(-1, 1)] * n_cells + [(None, None)],
                   maximize=True).require()
    margin = float(res.value)
    fn = BellFunctional(p.scenario, res.x[:n_cells], name="separator")
    return fn, margin


def fine_membership(p: Behaviour, tol: float = 1e-9):
    """Locality in the two-setting bipartite scenario without any LP:
    no-signalling plus all eight correlation inequalities at most 2."""
    if p.scenario.inputs != (2, 2):
        raise ValueError("only meaningful in the two-setting bipartite scenario")
    worst = max(fn.value(p) for fn in chsh_variants())
    return worst <= 2.0 + tol, worst


# --------------------------------------------------------------------------
# decomposition and noise robustness around a violating point


def chsh_scan(p: Behaviour):
    """(best signs, best value) over the eight variants."""
    best_s, best_v = None, -np.inf
    for s in chsh_sign_patterns():
        v = chsh_functional(s).value(p)
        if v > best_v:
            best_s, best_v = s, v
    return best_s, best_v


def bierhorst_decompose(p: Behaviour, tol: float = 1e-9):
    """Write a violating no-signalling point as box + local-face mixture.

    For a point with a unique violated variant (value beta > 2), the box with
    that variant's signs together with the eight deterministic points achieving
    2 on it are affinely independent and span the slab boundary, so the
    mixture weights come from one linear solve.  The box weight is exactly
    (beta - 2) / 2.
    """
    sc = p.scenario
    if sc.inputs != (2, 2):
        raise ValueError("decomposition lives in the two-setting bipartite scenario")
    signs, beta = chsh_scan(p)
    if beta <= 2.0 + 1e-12:
        raise ValueError("no violation: max variant value %.6f <= 2" % beta)
    fn = chsh_functional(signs)
    D = deterministic_matrix(sc)
    det_vals = D @ fn.flat()
    face_idx = [int(i) for i in np.flatnonzero(np.abs(det_vals - 2.0) < 1e-9)]
    cols = [pr_box(signs).flat()] + [D[i] for i in face_idx]
    M = np.array(cols).T
    M = np.vstack([M, np.ones(len(cols))])
    rhs = np.concatenate([p.flat(), [1.0]])
    w, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    residual = float(np.linalg.norm(M @ w - rhs, np.inf))
    if residual > tol:
        raise ValueError("decomposition residual %.3e; point not on the slab" % residual)
    if float(np.min(w)) < -1e-9:
        raise ValueError("negative mixture weight; point outside the slab")
    return {
        "signs": signs,
        "beta": beta,
        "box_weight": float(w[0]),
        "det_weights": {i: float(v) for i, v in zip(face_idx, w[1:])},
        "residual": residual,
    }


def noise_thresholds(p: Behaviour):
    """Critical noise weights for three standard noise models.

    Mixing (1-v) p + v eta with a noise point eta of variant value zeta turns
    the value to 2 at v = (beta-2)/(beta-zeta); for these noise choices the
    mixture at threshold is on the slab boundary and hence local.
    """
    sc = p.scenario
    signs, beta = chsh_scan(p)
    if beta <= 2.0 + 1e-12:
        raise ValueError("no violation to dilute")
    opposite = tuple(tuple(-v for v in row) for row in signs)
    p0 = corr_to_prob(CorrelatorTable.bipartite([0, 0], [0, 0], [[0, 0], [0, 0]]))
    anti = pr_box(opposite)
    half = Behaviour(sc, 0.5 * (p0.p + anti.p))
    out = {"signs": signs, "beta": beta, "noise": {}}
    for name, eta, zeta in (("white", p0, 0.0),
                            ("boundary_mix", half, -2.0),
                            ("opposite_box", anti, -4.0)):
        v = (beta - 2.0) / (beta - zeta)
        mixed = Behaviour(sc, (1.0 - v) * p.p + v * eta.p)
        out["noise"][name] = {"threshold": v, "zeta": zeta,
                              "mixed": mixed}
    return out


@dataclass
class VisibilityReport:
    """Critical noise weights that make a violating point local.

    beta is the best variant value of the two-setting correlation inequality;
    the three weights correspond to mixing with uniform noise, with the point
    on the local boundary opposite the violated facet, and with the box most
    negative on it.  All three put the mixture exactly on the local boundary.
    """

    beta: float
    v_white: float
    v_local: float
    v_ns: float
    checks: dict

    def to_json(self) -> dict:
        return {"beta": self.beta, "v_white": self.v_white,
                "v_local": self.v_local, "v_ns": self.v_ns,
                "checks": self.checks}


def visibilities(p: Behaviour, check: bool = True, tol: float = 1e-9) -> VisibilityReport:
    """Noise visibilities (beta-2)/beta, (beta-2)/(beta+2), (beta-2)/(beta+4).

    A point with no violation gets all three set to zero.  With check=True the
    three threshold mixtures are verified to sit exactly on the local boundary:
    membership LP distance at most tol and best variant value 2 within tol.
    """
    _, beta = chsh_scan(p)
    if beta <= 2.0 + 1e-12:
        return VisibilityReport(beta, 0.0, 0.0, 0.0, {"status": "already local"})
    thr = noise_thresholds(p)
    by_model = {"white": "v_white", "boundary_mix": "v_local", "opposite_box": "v_ns"}
    vals = {}
    checks = {}
    for model, field_name in by_model.items():
        info = thr["noise"][model]
        vals[field_name] = float(info["threshold"])
        if check:
            mixed = info["mixed"]
            member, dist, _ = local_membership(mixed, tol=tol)
            _, worst = chsh_scan(mixed)
            if not member or abs(worst - 2.0) > tol:
                raise ArithmeticError(
                    "threshold mixture for %s is not on the local boundary "
                    "(membership gap %.3e, variant value %.12f)" % (model, dist, worst))
            checks[field_name] = {"membership_gap": dist, "variant_value": worst}
    return VisibilityReport(beta, vals["v_white"], vals["v_local"], vals["v_ns"], checks)


# --------------------------------------------------------------------------
# faces as first-class objects


@dataclass
class PolyFace:
    """A face of L or NS cut out by a functional at its maximum value."""

    functional: BellFunctional
    value: float
    vertices: list
    dim: int
    exhaustive: bool = True

    def __post_init__(self):
        scale = max(1.0, abs(self.value))
        for v in self.vertices:
            if abs(self.functional.value(v) - self.value) > 1e-9 * scale:
                raise AssertionError("face vertex misses the face value")

    def to_json(self) -> dict:
        return {
            "functional": functional_to_json(self.functional),
            "value": self.value,
            "vertices": [behaviour_to_json(v) for v in self.vertices],
            "dim": self.dim,
            "exhaustive": self.exhaustive,
        }


def local_face(functional: BellFunctional, tol: float = 1e-9) -> PolyFace:
    """The face of the local polytope at the local maximum."""
    sc = functional.scenario
    beta, argmax = local_bound(functional)
    D = deterministic_matrix(sc)
    verts = [Behaviour(sc, D[i].astype(float), check=False) for i in argmax]
    dim = affine_dimension([v.flat() for v in verts])
    return PolyFace(functional, float(beta), verts, dim)


def ns_face(functional: BellFunctional, samples: int = 24, seed: int = 0) -> PolyFace:
    """The face of the no-signalling polytope at the no-signalling maximum.

    Exhaustive vertex list in scenarios small enough to enumerate; elsewhere
    the vertices are a deduplicated random sample and the dimension comes from
    the forced-zero-cell computation, which is exact either way.
    """
    sc = functional.scenario
    beta, ns_max = ns_bound(functional)
    if sc.n_cells <= 16:
        rows = ns_face_vertices(functional, beta)
        verts = [Behaviour(sc, r, check=False) for r in rows]
        dim = affine_dimension(rows)
        return PolyFace(functional, float(beta), verts, dim)
    seen = {}
    for k in range(samples):
        v = ns_face_vertex_sample(functional, beta, rng=seed + k)
        seen[tuple(np.round(v.flat(), 10))] = v
    dim = face_dimension(functional, beta, witnesses=[ns_max])
    return PolyFace(functional, float(beta), list(seen.values()), dim,
                    exhaustive=False)


def face_dimension(functional: BellFunctional, beta=None, witnesses=()) -> int:
    """Affine dimension of the NS face {B.p = beta} via forced-zero cells.

    A cell is forced to zero when its maximum over the face vanishes; the
    affine hull of the face is then the no-signalling hull plus the face row
    plus those zero rows, and the dimension drops out as a rank.  Each LP
    maximiser certifies every cell positive at it, so few LPs are needed.
    """
    sc = functional.scenario
    A, b = ns_equality_rows(sc)
    if beta is None:
        beta = ns_bound(functional)[0]
    rows = np.vstack([A.astype(float), functional.flat()[None, :]])
    rhs = np.concatenate([b.astype(float), [float(beta)]])
    support = np.zeros(sc.n_cells, dtype=bool)
    for w in witnesses:
        flat = w.flat() if hasattr(w, "flat") else np.asarray(w, dtype=float)
        if abs(functional.value_flat(flat) - float(beta)) <= 1e-9 * max(1.0, abs(float(beta))):
            support |= flat > 1e-9
    for j in range(sc.n_cells):
        if support[j]:
            continue
        obj = np.zeros(sc.n_cells)
        obj[j] = 1.0
        res = solve_lp(obj, a_eq=rows, b_eq=rhs, bounds=(0, None), maximize=True).require()
        # cells above the face maximum threshold can never be forced, so any
        # maximiser safely widens the support and spares later solves
        support |= res.x > 1e-9
    forced = np.eye(sc.n_cells)[~support]
    stack = np.vstack([rows, forced]) if len(forced) else rows
    return int(sc.n_cells - np.linalg.matrix_rank(stack))
