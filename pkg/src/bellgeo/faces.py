"""Classification of the faces a Bell functional cuts out of L, Q and NS.

Maximising a functional over the local polytope, the quantum set and the
no-signalling polytope gives three nested values and three nested faces.
Comparing them sorts every functional into one of seven realizable classes:

  1    all three values differ
  2a   local and quantum values agree below the no-signalling value, and the
       quantum face strictly contains the local one
  2b   as 2a but the two faces coincide
  3a   local value below the coinciding quantum and no-signalling values
  4a   all values equal, local face < quantum face < no-signalling face
  4b   all values equal, local face = quantum face < no-signalling face
  4d   all values equal, all faces equal

Two conceivable patterns are empty and never emitted: a no-signalling face
equal to the quantum face would consist of quantum vertices, but nonlocal
vertices of the no-signalling polytope are never quantum, so such a face has
local vertices only and collapses onto the local face.  That rules out the
"3b" variant of class 3 and the "4c" variant of class 4.

Strict containments are always backed by point certificates that can be
replayed with bell_value and local_membership alone: a nonlocal quantum
maximiser found by seesaw for L < Q, a nonlocal no-signalling vertex on the
face for Q < NS.  Value equalities are decided at a caller-set tolerance;
certificates are held to fixed tighter tolerances so that loosening the value
tolerance never loosens the evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactnum import Quad, exact_sign
from .lp import INFEASIBLE, solve_lp
from .npa import default_level, npa_upper_bound
from .polytope import (
    affine_dimension,
    chsh_variants,
    face_dimension,
    local_bound,
    local_membership,
    ns_bound,
    ns_face_vertex_sample,
    ns_face_vertices,
    ns_vertices,
)
from .quantum import QubitRealization, seesaw_lower_bound, tlm_check
from .scenario import (
    Behaviour,
    BellFunctional,
    CorrelatorTable,
    behaviour_to_json,
    deterministic_matrix,
    functional_to_json,
    prob_to_corr,
)
from . import zoo as _zoo

CLASS_LABELS = ("1", "2a", "2b", "3a", "4a", "4b", "4d", "undecided")

# value-coincidence tolerance is the caller's; the two below are fixed so
# that certificates stay meaningful whatever tolerance classification ran at
CERT_VALUE_TOL = 1e-6   # a maximiser must come this close to the upper bound
# membership-LP distance above which a point counts as nonlocal.  Kept well
# above the reach of a tilted search sliding off a curved boundary (that
# artifact scales with the tilt, which is 1e-7) yet far below any genuine
# witness, which sits at macroscopic distance from the local polytope.
NONLOCAL_TOL = 1e-5


def hardy_family_functional(a1=1, a2=1, a3=1) -> BellFunctional:
    """Nonnegative combination of the three probability cells that vanish at
    the Hardy point, rewritten in correlator coefficients.  All three bounds
    equal a1+a2+a3 (equivalently zero for the pure cell combination)."""
    return _zoo.hardy_family_functional(a1, a2, a3).functional


# --------------------------------------------------------------------------
# report types


@dataclass
class FaceReport:
    functional: BellFunctional
    beta_L: float
    beta_Q_lower: float
    beta_Q_upper: float
    beta_NS: float
    class_label: str
    evidence: list
    dim_L: int
    dim_NS: int
    dim_Q_lower: int
    level: str = ""

    def __post_init__(self):
        if self.class_label not in CLASS_LABELS:
            raise ValueError("unknown class label %r" % (self.class_label,))
        chain = (self.beta_L <= self.beta_Q_lower + 1e-9
                 and self.beta_Q_lower <= self.beta_Q_upper + 1e-6
                 and self.beta_Q_upper <= self.beta_NS + 1e-9)
        if not chain:
            raise AssertionError(
                "bound chain broken: L=%.12g Q=[%.12g, %.12g] NS=%.12g"
                % (self.beta_L, self.beta_Q_lower, self.beta_Q_upper, self.beta_NS))

    def summary(self) -> str:
        name = self.functional.name or "functional"
        return ("%s: class %s  beta_L=%.9g beta_Q=[%.9g, %.9g] beta_NS=%.9g "
                "dims L=%d Q>=%d NS=%d"
                % (name, self.class_label, self.beta_L, self.beta_Q_lower,
                   self.beta_Q_upper, self.beta_NS, self.dim_L,
                   self.dim_Q_lower, self.dim_NS))

    def to_json(self) -> dict:
        return {
            "functional": functional_to_json(self.functional),
            "beta_L": self.beta_L,
            "beta_Q_lower": self.beta_Q_lower,
            "beta_Q_upper": self.beta_Q_upper,
            "beta_NS": self.beta_NS,
            "class_label": self.class_label,
            "evidence": self.evidence,
            "dim_L": self.dim_L,
            "dim_NS": self.dim_NS,
            "dim_Q_lower": self.dim_Q_lower,
            "level": self.level,
        }


def _exact_json(v):
    if isinstance(v, Quad):
        return {"rational": str(v.p), "surd_coefficient": str(v.q), "surd": v.d}
    if isinstance(v, Fraction):
        return str(v)
    return v


@dataclass
class ExposureCertificate:
    """Exact-LP record showing a tangency system pins the local bound.

    dual_weights replay the primal optimum exactly: the weighted deterministic
    rows plus z times the tangent row reproduce the target point, so the
    optimum cannot exceed the weight sum.
    """

    point: Behaviour
    tangent: dict
    functional: BellFunctional
    lp_value: object
    dual_weights: dict
    conclusion: str
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "point": behaviour_to_json(self.point),
            "tangent": {k: _exact_json(v) for k, v in self.tangent.items()},
            "functional": functional_to_json(self.functional),
            "lp_value": _exact_json(self.lp_value),
            "dual_weights": {
                "y": {str(k): _exact_json(v) for k, v in self.dual_weights["y"].items()},
                "z": _exact_json(self.dual_weights["z"]),
            },
            "conclusion": self.conclusion,
            "checks": self.checks,
        }


# --------------------------------------------------------------------------
# classification


def _nonlocal_quantum_maximizer(fn: BellFunctional, target: float,
                                seesaw_result=None, seed: int = 0,
                                tilt: float = 1e-7, restarts: int = 12):
    """A nonlocal quantum point within CERT_VALUE_TOL of target, or None.

    First scans the optima the plain seesaw already produced; if the maximising
    face is flat the seesaw may settle on a deterministic corner, so a second
    pass biases the objective toward each sign variant of the two-setting
    correlation inequality, which slides the maximiser along the face toward a
    nonlocal corner while perturbing the achieved value only to second order.
    """

    def check(p, value=None):
        v = fn.value(p) if value is None else float(value)
        if v < target - CERT_VALUE_TOL:
            return None
        member, dist, _ = local_membership(p)
        if member or dist <= NONLOCAL_TOL:
            return None
        return {"kind": "nonlocal_quantum_maximizer", "value": float(fn.value(p)),
                "local_distance": float(dist), "cells": p.tolist(), "behaviour": p}

    if seesaw_result is not None:
        for entry in seesaw_result.all_optima:
            hit = check(entry["behaviour"], entry["value"])
            if hit:
                hit["method"] = "seesaw"
                return hit
    sc = fn.scenario
    if sc.n_parties == 2 and sc.inputs == (2, 2):
        base = fn.flat()
        for k, variant in enumerate(chsh_variants()):
            tilted = BellFunctional(sc, base + tilt * variant.flat(), name="tilted")
            res = seesaw_lower_bound(tilted, restarts=restarts, seed=seed + 31 * k + 7)
            for entry in res.all_optima:
                hit = check(entry["behaviour"])
                if hit:
                    hit["method"] = "seesaw-tilted"
                    return hit
    return None


def classify(b: BellFunctional, tol: float = 1e-6, level: str | None = None,
             restarts: int = 64, seed: int = 0, vertex_samples: int = 24) -> FaceReport:
    """Sort a functional into its face class with point certificates.

    tol governs the value comparisons only.  "undecided" is a valid outcome:
    it appears when the upper and lower quantum bounds straddle a comparison,
    or when a non-exhaustive vertex sample cannot settle a face question.
    """
    sc = b.scenario
    D = deterministic_matrix(sc)
    beta_l_raw, argmax = local_bound(b)
    beta_l = float(beta_l_raw)
    beta_ns_raw, ns_max = ns_bound(b)
    beta_ns = float(beta_ns_raw)
    level = level or default_level(sc)
    npa = npa_upper_bound(b, level=level)
    # the quantum value sits between the local and no-signalling values, so
    # clamping the SDP bound into that interval only sharpens it
    beta_q_upper = min(max(float(npa["upper"]), beta_l), beta_ns)
    see = seesaw_lower_bound(b, restarts=restarts, seed=seed)
    beta_q_lower = min(max(float(see.value), beta_l), beta_q_upper)

    evidence = [
        {"kind": "local_maximizers", "value": beta_l, "count": len(argmax),
         "det_indices": [int(i) for i in argmax]},
        {"kind": "npa_upper_bound", "level": level, "upper": float(npa["upper"]),
         "residual": float(npa["residual"])},
        {"kind": "seesaw_lower_bound", "value": float(see.value),
         "restarts": int(restarts), "distinct_optima": len(see.all_optima)},
    ]

    lq_equal = beta_q_upper <= beta_l + tol
    lq_strict = beta_q_lower > beta_l + tol
    qns_equal = beta_ns <= beta_q_lower + tol
    qns_strict = beta_ns > beta_q_upper + tol

    # vertices of the no-signalling face: exhaustive where enumerable
    if sc.n_cells <= 16:
        rows = ns_face_vertices(b, beta_ns)
        face_pts = [Behaviour(sc, r, check=False) for r in rows]
        exhaustive = True
        dim_ns = affine_dimension(rows)
    else:
        seen = {}
        for k in range(vertex_samples):
            v = ns_face_vertex_sample(b, beta_ns, rng=seed + 101 * k)
            seen[tuple(np.round(v.flat(), 10))] = v
        face_pts = list(seen.values())
        exhaustive = False
        dim_ns = face_dimension(b, beta_ns, witnesses=[ns_max] + face_pts)

    nonlocal_vertex = None
    for v in face_pts:
        member, dist, _ = local_membership(v)
        if not member and dist > NONLOCAL_TOL:
            nonlocal_vertex = {"kind": "nonlocal_ns_vertex", "value": float(b.value(v)),
                               "local_distance": float(dist), "cells": v.tolist()}
            break
    all_scanned_local = nonlocal_vertex is None

    q_wit = None
    if lq_equal and (qns_strict or (qns_equal and nonlocal_vertex is not None)):
        q_wit = _nonlocal_quantum_maximizer(b, beta_q_upper, see, seed=seed)

    label = "undecided"
    if lq_strict and qns_strict:
        label = "1"
    elif lq_equal and qns_strict:
        label = "2a" if q_wit else "2b"
    elif lq_strict and qns_equal:
        # the face-coincidence variant of class 3 is impossible: it would make
        # every vertex of the no-signalling face quantum, hence local, hence
        # beta_L = beta_NS against the strict comparison
        label = "3a"
        evidence.append({"kind": "vertex_elimination",
                         "note": "equal quantum and no-signalling faces would "
                                 "have local vertices only, contradicting "
                                 "beta_L < beta_Q"})
    elif lq_equal and qns_equal:
        single_local = dim_ns == 0 and local_membership(ns_max)[0]
        if exhaustive and all_scanned_local:
            label = "4d"
            evidence.append({"kind": "ns_face_vertices_all_local",
                             "count": len(face_pts)})
        elif not exhaustive and single_local:
            label = "4d"
            evidence.append({"kind": "ns_face_is_local_point"})
        elif nonlocal_vertex is not None:
            label = "4a" if q_wit else "4b"
        else:
            evidence.append({"kind": "inconclusive_vertex_sample",
                             "count": len(face_pts),
                             "note": "sampled vertices all local but the "
                                     "enumeration is not exhaustive"})

    if q_wit:
        entry = {k: v for k, v in q_wit.items() if k != "behaviour"}
        evidence.append(entry)
    if nonlocal_vertex is not None and label in ("3a", "4a", "4b"):
        evidence.append(nonlocal_vertex)
    if label == "4b":
        evidence.append({"kind": "no_nonlocal_quantum_maximizer",
                         "note": "plain and tilted seesaw found no nonlocal "
                                 "point at the quantum bound; face equality "
                                 "with the local face is the supported reading"})
    if qns_equal:
        evidence.append({"kind": "dim_upper_bound", "dim_Q_upper": int(dim_ns),
                         "note": "quantum face sits inside the no-signalling "
                                 "face of the same value"})

    dim_l = affine_dimension(D[argmax]) if len(argmax) else 0
    q_points = []
    if beta_l >= beta_q_upper - CERT_VALUE_TOL:
        q_points.extend(D[i] for i in argmax)
    for entry in see.all_optima:
        if float(entry["value"]) >= beta_q_upper - CERT_VALUE_TOL:
            q_points.append(entry["behaviour"].flat())
    if q_wit:
        q_points.append(q_wit["behaviour"].flat())
    dim_q_lower = affine_dimension(q_points) if q_points else 0

    return FaceReport(
        functional=b,
        beta_L=beta_l,
        beta_Q_lower=beta_q_lower,
        beta_Q_upper=beta_q_upper,
        beta_NS=beta_ns,
        class_label=label,
        evidence=evidence,
        dim_L=int(dim_l),
        dim_NS=int(dim_ns),
        dim_Q_lower=int(dim_q_lower),
        level=level,
    )


# --------------------------------------------------------------------------
# exposing functionals for deterministic points


def exposing_functional(p: Behaviour, check: bool = True) -> BellFunctional:
    """Unit weight on every full cell of a deterministic point.

    Any other no-signalling behaviour puts strictly less than one unit of
    probability on some selected cell, so the point is the unique maximiser
    over the whole no-signalling polytope; its face is the single point and
    the classification is 4d.
    """
    sc = p.scenario
    flat = p.flat()
    if not np.all((flat < 1e-12) | (np.abs(flat - 1.0) < 1e-12)):
        raise ValueError("point is not deterministic")
    ones = flat > 0.5
    coeffs = ones.astype(float)
    exact = np.array([Fraction(1) if v else Fraction(0) for v in ones], dtype=object)
    fn = BellFunctional(sc, coeffs, name="exposing", exact_coeffs=exact)
    beta = float(sc.n_input_tuples)
    if check:
        if sc.n_cells <= 16:
            verts = ns_vertices(sc)
            vals = verts @ coeffs
            top = np.flatnonzero(vals >= beta - 1e-9)
            unique = len(top) == 1 and np.allclose(verts[top[0]], flat, atol=1e-9)
        else:
            val, ns_max = ns_bound(fn)
            unique = (abs(float(val) - beta) <= 1e-9
                      and np.allclose(ns_max.flat(), flat, atol=1e-7)
                      and face_dimension(fn, beta) == 0)
        if not unique:
            raise AssertionError("exposing functional has a non-unique maximiser")
    return fn


# --------------------------------------------------------------------------
# tangency-constrained search for functionals


def _planar_realization(p: Behaviour) -> QubitRealization | None:
    """Maximally entangled two-qubit model for a zero-marginal two-setting
    point whose correlators factor as cos(a_x - b_y); None when they do not.

    Equatorial Bloch measurements on the singlet-class state reproduce any
    such correlator table exactly, and the factorisation holds precisely on
    the curved part of the correlator boundary, so this covers the points a
    tangency search most wants realized without the caller supplying one.
    """
    sc = p.scenario
    if sc.n_parties != 2 or sc.inputs != (2, 2):
        return None
    table = prob_to_corr(p)
    if table.max_abs_marginal() > 1e-11:
        return None
    c = np.array([[table.get((0, 1), (x, y)) for y in range(2)] for x in range(2)])
    if np.max(np.abs(c)) > 1.0 + 1e-12:
        return None
    c = np.clip(c, -1.0, 1.0)
    a = [0.0, None]
    b0 = float(np.arccos(c[0, 0]))
    for s1 in (1.0, -1.0):
        b1 = s1 * float(np.arccos(c[0, 1]))
        for s2 in (1.0, -1.0):
            a1 = b0 + s2 * float(np.arccos(c[1, 0]))
            if abs(np.cos(a1 - b1) - c[1, 1]) > 1e-9:
                continue
            a[1] = a1
            state = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
            alice = [[np.cos(t), np.sin(t), 0.0] for t in (a[0], a[1])]
            bob = [[np.cos(t), -np.sin(t), 0.0] for t in (b0, b1)]
            real = QubitRealization(sc, state, [alice, bob])
            if np.max(np.abs(real.behaviour().flat() - p.flat())) < 1e-8:
                return real
    return None


def _realization_tangents(real: QubitRealization, eps: float = 1e-5) -> list:
    """Unit vectors spanning the first-order moves of a realization's
    behaviour, by central differences over state and measurement parameters.

    Directions whose derivative is below 1e-4 are dropped: those are
    stationary to first order (a deterministic point rotated in place) and
    normalising them would only amplify differencing noise.
    """
    sc = real.scenario
    base_state = real.state
    base_bloch = [b.copy() for b in real.bloch]

    def behaviour_of(state, bloch):
        return QubitRealization(sc, state, bloch).behaviour().flat()

    out = []

    def central(plus_args, minus_args):
        v = (behaviour_of(*plus_args) - behaviour_of(*minus_args)) / (2.0 * eps)
        nrm = float(np.linalg.norm(v))
        if nrm > 1e-4:
            out.append(v / nrm)

    dim = base_state.shape[0]
    q, _ = np.linalg.qr(np.column_stack([base_state, np.eye(dim)]))
    for k in range(1, dim):
        for chi in (q[:, k], 1j * q[:, k]):
            central((base_state + eps * chi, base_bloch),
                    (base_state - eps * chi, base_bloch))
    for i, b in enumerate(base_bloch):
        for s in range(b.shape[0]):
            axis = np.zeros(3)
            axis[int(np.argmin(np.abs(b[s])))] = 1.0
            u = axis - np.dot(axis, b[s]) * b[s]
            u /= np.linalg.norm(u)
            for d in (u, np.cross(b[s], u)):
                plus = [x.copy() for x in base_bloch]
                minus = [x.copy() for x in base_bloch]
                plus[i][s] = np.cos(eps) * b[s] + np.sin(eps) * d
                minus[i][s] = np.cos(eps) * b[s] - np.sin(eps) * d
                central((base_state, plus), (base_state, minus))
    return out


def tangent_bell_search(points, tangents=(), restarts=16, seed=0,
                        max_cuts=40) -> BellFunctional | None:
    """A functional worth exactly 1 at each point, 0 along each tangent
    direction, with local bound at most 1; None when no such functional
    exists.

    Feasibility alone leaves a polytope of candidates, most of which the
    quantum set pierces above the shared value.  Three refinements narrow
    the answer to a supporting functional whenever one exists.  A point may
    carry a qubit realization (pass a (behaviour, realization) pair, a bare
    QubitRealization, or an object exposing both), and zero-marginal
    two-setting points on the curved correlator boundary get one constructed
    automatically; the first-order moves of each realization are added as
    tangent rows, which pins candidates to the supporting cone at that point.
    The objective minimises the hinged value sum over the no-signalling
    vertices (over the deterministic points when vertex enumeration is out of
    reach), counting each vertex as max(B.v, -1) so that extreme points not
    forced by the inputs are driven strictly below 1 without rewarding
    arbitrarily steep coefficients; vertex values are additionally floored at
    -4 so the answer stays on the scale set by the shared value 1.  Finally
    each candidate is checked by
    seesaw, and any quantum point found above 1 is appended as a linear cut
    before re-solving.  Returns None when the constraint system is
    infeasible, including infeasibility reached through cuts, or when the
    cut budget runs out before a candidate survives the seesaw check.
    """
    pts = []
    auto_tangents: list[np.ndarray] = []
    for item in points:
        q, witness = _split_candidate(item)
        if witness is None:
            witness = _planar_realization(q)
        elif np.max(np.abs(witness.behaviour().flat() - q.flat())) > 1e-9:
            raise ValueError("realization does not reproduce its point")
        if witness is not None:
            auto_tangents.extend(_realization_tangents(witness))
        pts.append(q)
    if not pts:
        raise ValueError("need at least one point")
    sc = pts[0].scenario
    if any(q.scenario.inputs != sc.inputs for q in pts):
        raise ValueError("points live in different scenarios")
    D = deterministic_matrix(sc)
    n = sc.n_cells
    V = ns_vertices(sc) if n <= 16 else D
    n_v = len(V)
    # variables: cell coefficients, then one hinge h_v >= max(B.v, -1) per
    # vertex; minimising sum(h) pushes unforced vertices below the shared
    # value while the hinge floor keeps the optimum away from steep corners
    obj = np.concatenate([np.zeros(n), np.ones(n_v)])
    hinge = np.hstack([V, -np.eye(n_v)])
    a_eq = [np.concatenate([q.flat(), np.zeros(n_v)]) for q in pts]
    all_tangents = [np.asarray(t, dtype=float) for t in tangents] + auto_tangents
    for t in all_tangents:
        a_eq.append(np.concatenate([t, np.zeros(n_v)]))
    b_eq = [1.0] * len(pts) + [0.0] * len(all_tangents)
    bounds = [(-4.0, 4.0)] * n + [(-1.0, None)] * n_v
    floor = np.hstack([-V, np.zeros((n_v, n_v))])
    cuts: list[np.ndarray] = []
    for _ in range(max_cuts + 1):
        rows = [np.hstack([D, np.zeros((len(D), n_v))]), hinge, floor]
        if cuts:
            rows.append(np.hstack([np.array(cuts), np.zeros((len(cuts), n_v))]))
        a_ub = np.vstack(rows)
        b_ub = np.concatenate([np.ones(len(D)), np.zeros(n_v),
                               np.full(n_v, 4.0), np.ones(len(cuts))])
        res = solve_lp(obj, a_ub, b_ub, a_eq, b_eq, bounds=bounds)
        if res.status == INFEASIBLE:
            return None
        res.require()
        fn = BellFunctional(sc, res.x[:n].copy(), name="tangent-search")
        see = seesaw_lower_bound(fn, restarts=restarts, seed=seed + len(cuts))
        if see.value <= 1.0 + 1e-7:
            return fn
        cuts.append(see.realization.behaviour().flat())
    return None


# --------------------------------------------------------------------------
# the exact tangency LP at the Hardy point


def _det_sign_patterns_ordered():
    """All 16 sign patterns, the eight named catalogue ones first."""
    first = list(_zoo._DET_SIGNS.values())
    allpat = []
    for a0 in (1, -1):
        for a1 in (1, -1):
            for b0 in (1, -1):
                for b1 in (1, -1):
                    allpat.append(((a0, a1), (b0, b1)))
    rest = [s for s in allpat if s not in first]
    return first + rest


def _det_correlator_vector(signs):
    (a0, a1), (b0, b1) = signs
    return [a0, a1, b0, b1, a0 * b0, a0 * b1, a1 * b0, a1 * b1]


HARDY_TANGENT = {
    "A0": 1, "A1": 0, "B0": 1, "B1": 0,
    "A0B0": Quad(-1, 1), "A0B1": -1, "A1B0": -1, "A1B1": 0,
}


def hardy_exposure_lp() -> ExposureCertificate:
    """Exact linear program over the field extended by sqrt 5.

    Maximise B at the Hardy point over all functionals that are tangent there
    (the kernel constraint that keeps the point an eigenvector of the
    functional's operator) and have local bound at most 1.  The optimum is
    exactly 1 and the dual weights replay it, so every functional maximised by
    the Hardy point has equal local and quantum values: the point lies on a
    flat piece of the quantum boundary and is not exposed.
    """
    hardy = _zoo.named("P_hardy").behaviour
    p_h = [Quad(5, -2), Quad(-2, 1), Quad(5, -2), Quad(-2, 1),
           Quad(-13, 6), Quad(-6, 3), Quad(-6, 3), Quad(-5, 2)]
    t_vec = [HARDY_TANGENT[k] for k in
             ("A0", "A1", "B0", "B1", "A0B0", "A0B1", "A1B0", "A1B1")]
    patterns = _det_sign_patterns_ordered()
    det_rows = [_det_correlator_vector(s) for s in patterns]

    res = solve_lp(p_h, a_ub=det_rows, b_ub=[1] * 16, a_eq=[t_vec], b_eq=[0],
                   bounds=(None, None), maximize=True, exact=True).require()
    if exact_sign(res.value - 1) != 0:
        raise AssertionError("tangency LP optimum is not exactly 1")

    # frozen dual certificate: weights on three deterministic rows plus the
    # tangent row reproduce the Hardy point coordinate by coordinate
    y = {0: Quad(-2, 1), 4: Quad(Fraction(3, 2), Fraction(-1, 2)),
         5: Quad(Fraction(3, 2), Fraction(-1, 2))}
    z = Quad(4, -2)
    for k, w in y.items():
        if exact_sign(w) < 0:
            raise AssertionError("negative dual weight")
    for j in range(8):
        acc = z * t_vec[j]
        for k, w in y.items():
            acc = acc + w * det_rows[k][j]
        if exact_sign(acc - p_h[j]) != 0:
            raise AssertionError("dual replay fails on coordinate %d" % j)
    total = sum(y.values(), Quad(0, 0))
    if exact_sign(total - 1) != 0:
        raise AssertionError("dual objective is not exactly 1")

    # the optimum is degenerate: the positivity functional of each zero cell
    # of the point is an optimal vertex.  Report the canonical one (the cell
    # with both settings 1), proving its optimality exactly, and keep the
    # solver's own vertex in the checks.
    b_can = [0, 1, 0, 1, 0, 0, 0, -1]
    if exact_sign(sum(b * t for b, t in zip(b_can, t_vec))) != 0:
        raise AssertionError("canonical optimum is not tangent")
    for row in det_rows:
        if sum(b * d for b, d in zip(b_can, row)) > 1:
            raise AssertionError("canonical optimum breaks a deterministic row")
    v_can = sum((b * v for b, v in zip(b_can, p_h)), Quad(0, 0))
    if exact_sign(v_can - res.value) != 0:
        raise AssertionError("canonical vertex is not optimal")
    fn = _zoo.named("B_pos").functional
    p_l4 = _zoo.named("P_L4").behaviour
    labels = ("A0", "A1", "B0", "B1", "A0B0", "A0B1", "A1B0", "A1B1")
    checks = {
        "value_at_point": float(fn.value(hardy)),
        "value_at_local_maximiser": float(fn.value(p_l4)),
        "local_bound": float(local_bound(fn)[0]),
        "coefficients": {k: _exact_json(v) for k, v in zip(labels, b_can)},
        "solver_vertex": {k: _exact_json(v) for k, v in zip(labels, res.x)},
        "note": "degenerate optimum; the reported functional is the canonical "
                "optimal vertex with exact optimality replay, the raw simplex "
                "vertex is kept alongside",
    }
    return ExposureCertificate(
        point=hardy,
        tangent=dict(HARDY_TANGENT),
        functional=fn,
        lp_value=res.value,
        dual_weights={"y": y, "z": z},
        conclusion=(
            "every functional tangent at this point with local bound 1 attains "
            "at most 1 there, so its local and quantum values coincide and the "
            "point, though extremal, is not an exposed point of the quantum set"),
        checks=checks,
    )


# --------------------------------------------------------------------------
# flat-boundary certification


def _split_candidate(item):
    if isinstance(item, tuple) and len(item) == 2:
        p, witness = item
        if not isinstance(p, Behaviour):
            attr = getattr(p, "behaviour")
            p = attr() if callable(attr) else attr
        return p, witness
    if isinstance(item, Behaviour):
        return item, None
    if isinstance(item, QubitRealization):
        return item.behaviour(), item
    attr = getattr(item, "behaviour")
    return (attr() if callable(attr) else attr), None


def _realizability(p: Behaviour, witness) -> dict:
    if witness is not None:
        got = witness.behaviour() if callable(getattr(witness, "behaviour")) else witness.behaviour
        gap = float(np.max(np.abs(got.flat() - p.flat())))
        if gap > 1e-9:
            raise ValueError("realization witness misses the candidate by %.3e" % gap)
        return {"how": "qubit_realization", "gap": gap}
    member, dist, _ = local_membership(p)
    if member:
        return {"how": "local_mixture", "gap": float(dist)}
    sc = p.scenario
    if sc.n_parties == 2 and sc.inputs == (2, 2):
        table = prob_to_corr(p)
        if table.max_abs_marginal() < 1e-12:
            corr = np.array([[table.get((0, 1), (x, y)) for y in range(2)]
                             for x in range(2)])
            rep = tlm_check(corr)
            if rep.member:
                return {"how": "tlm_boundary", "gap": float(max(0.0, -rep.lhs))}
    return {"how": "assumed"}


def flat_region_certificate(b: BellFunctional, candidates, level: str | None = None,
                            tol: float = 1e-6) -> dict:
    """Verify claimed maximisers of a functional and span their affine hull.

    Each candidate must reach the SDP upper bound within tol; verified points
    certify that the quantum face has at least their affine dimension.  When
    the quantum and no-signalling values agree, the no-signalling face
    dimension caps the quantum one from above and is reported alongside.
    """
    sc = b.scenario
    level = level or default_level(sc)
    npa = npa_upper_bound(b, level=level)
    beta_ns, ns_max = ns_bound(b)
    upper = min(float(npa["upper"]), float(beta_ns))
    entries = []
    verified = []
    for item in candidates:
        p, witness = _split_candidate(item)
        v = float(b.value(p))
        gap = upper - v
        ok = gap <= tol
        entry = {"value": v, "gap": gap, "verified": bool(ok),
                 "realizability": _realizability(p, witness)}
        entries.append(entry)
        if ok:
            verified.append(p.flat())
    report = {
        "beta_Q_upper": upper,
        "level": level,
        "candidates": entries,
        "verified_count": len(verified),
        "dim_Q_lower": int(affine_dimension(verified)) if verified else 0,
    }
    if float(beta_ns) <= upper + tol:
        if sc.n_cells <= 16:
            dim_ns = affine_dimension(ns_face_vertices(b, beta_ns))
        else:
            dim_ns = face_dimension(b, beta_ns, witnesses=[ns_max])
        report["dim_Q_upper"] = int(dim_ns)
    return report
