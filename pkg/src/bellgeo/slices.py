"""2-D slices and projections of the correlation sets, with file emission.

A slice pins every behaviour coordinate: the sampled point center + r(cos t
d1 + sin t d2) must itself belong to the set under test.  A projection only
constrains two linear images, so its region always contains the matching
slice region.  Four radii are reported per angle: the local and
no-signalling ones are exact up to LP accuracy, the quantum set gets an
inner bound (exact correlator criterion on zero-marginal slices, otherwise
a certified convex hull of explicit qubit realizations grown by seesaw
extensions) and an outer bound (moment-relaxation ray maximization).  The
inner/outer gap is part of the output, never hidden.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exactnum import sqrt2
from .lp import solve_lp
from .npa import default_level, npa_ray_max, npa_upper_bound
from .polytope import deterministic_matrix, ns_equality_rows, chsh_variants
from .quantum import seesaw_lower_bound, tlm_check, tlm_ray_max
from .scenario import (
    Behaviour,
    BellFunctional,
    CorrelatorTable,
    Scenario,
    corr_direction,
    prob_to_corr,
)
from . import zoo as _zoo

__all__ = [
    "BoundaryCurve",
    "SliceSpec",
    "convexity_report",
    "curve_from_json",
    "emit",
    "fig5_quantum_floor",
    "kink_detect",
    "preset",
    "PRESET_NAMES",
    "projection_boundary",
    "slice_boundary",
    "slice_point",
]

_MARGINAL_EPS = 1e-11


def _cross2(a, b) -> float:
    return float(a[0]) * float(b[1]) - float(a[1]) * float(b[0])


# ---------------------------------------------------------------------------
# domain types

@dataclass
class SliceSpec:
    """A plane through behaviour space plus sampling parameters.

    direction1/direction2 are flat probability-basis vectors that must stay
    inside the affine span of behaviours (all no-signalling equalities
    annihilate them), so center + r*d is a valid candidate behaviour for
    every r until positivity fails.
    """

    center: Behaviour
    direction1: np.ndarray
    direction2: np.ndarray
    resolution: int = 360
    radial_tol: float = 1e-6
    level: str | None = None
    seed: int = 0
    restarts: int = 32
    name: str = ""

    def __post_init__(self):
        sc = self.center.scenario
        self.direction1 = np.asarray(self.direction1, dtype=float).reshape(-1)
        self.direction2 = np.asarray(self.direction2, dtype=float).reshape(-1)
        if self.direction1.shape != (sc.n_cells,) \
                or self.direction2.shape != (sc.n_cells,):
            raise ValueError("directions must be flat cell-space vectors")
        pair = np.vstack([self.direction1, self.direction2])
        if np.linalg.matrix_rank(pair, tol=1e-9) != 2:
            raise ValueError("slice directions must be linearly independent")
        A, _ = ns_equality_rows(sc)
        drift = float(np.max(np.abs(A @ pair.T)))
        if drift > 1e-9:
            raise ValueError(
                "directions leave the affine span of behaviours (drift %.3e)"
                % drift)
        if self.resolution < 8:
            raise ValueError("resolution too small")
        if not _local_contains(self.center):
            raise ValueError("slice center must lie inside the local set")


@dataclass
class BoundaryCurve:
    """Radial (slice) or support-value (projection) boundary data."""

    kind: str
    scenario: Scenario
    thetas: np.ndarray
    r_L: np.ndarray
    r_Q_inner: np.ndarray
    r_Q_outer: np.ndarray
    r_NS: np.ndarray
    meta: dict = field(default_factory=dict)

    def component(self, name: str) -> np.ndarray:
        return {"L": self.r_L, "Q_inner": self.r_Q_inner,
                "Q_outer": self.r_Q_outer, "NS": self.r_NS}[name]

    def points(self, name: str) -> np.ndarray:
        """Sampled 2-D boundary points (slice radii or support envelope)."""
        r = self.component(name)
        if self.kind == "slice":
            return np.column_stack([r * np.cos(self.thetas),
                                    r * np.sin(self.thetas)])
        return _support_envelope(self.thetas, r)


# ---------------------------------------------------------------------------
# small geometry helpers

def _local_contains(p: Behaviour, tol: float = 1e-9) -> bool:
    D = deterministic_matrix(p.scenario)
    n_det = D.shape[0]
    a_eq = np.vstack([D.T, np.ones(n_det)])
    b_eq = np.concatenate([p.flat(), [1.0]])
    try:
        solve_lp(np.zeros(n_det), a_eq=a_eq, b_eq=b_eq,
                 bounds=(0, None)).require()
        return True
    except Exception:
        return False


def _corr_coords(scenario: Scenario, vec: np.ndarray) -> dict:
    """Correlator coordinates of a cell-space vector (completions averaged)."""
    import itertools as _it

    arr = np.asarray(vec, dtype=float).reshape(scenario.shape)
    n = scenario.n_parties
    out = {}
    for subset, xs in scenario.correlator_keys():
        others = [i for i in range(n) if i not in subset]
        total = 0.0
        count = 0
        for xo in _it.product(*[range(scenario.inputs[i]) for i in others]):
            x = [0] * n
            for i, v in zip(subset, xs):
                x[i] = v
            for i, v in zip(others, xo):
                x[i] = v
            count += 1
            for a in scenario.output_tuples():
                sign = -1 if sum(a[i] for i in subset) % 2 else 1
                total += sign * arr[tuple(x) + a]
        out[(subset, xs)] = total / count
    return out


def _corr_block(scenario: Scenario, coords: dict) -> np.ndarray:
    """2x2 full-correlator block of a (2,2)-scenario coordinate dict."""
    return np.array([[coords[((0, 1), (x, y))] for y in range(2)]
                     for x in range(2)])


def _positivity_radius(center: np.ndarray, d: np.ndarray) -> float:
    """max r with center + r d >= 0 cellwise."""
    neg = d < -1e-15
    if not np.any(neg):
        raise ValueError("direction never exits positivity")
    return float(np.min(center[neg] / -d[neg]))


def _local_radius(sc: Scenario, center: np.ndarray, d: np.ndarray,
                  D: np.ndarray) -> float:
    n_det = D.shape[0]
    # variables: weights over deterministic points, r; maximize r
    a_eq = np.zeros((sc.n_cells + 1, n_det + 1))
    a_eq[:sc.n_cells, :n_det] = D.T
    a_eq[:sc.n_cells, n_det] = -d
    a_eq[sc.n_cells, :n_det] = 1.0
    b_eq = np.concatenate([center, [1.0]])
    c = np.zeros(n_det + 1)
    c[-1] = 1.0
    bounds = [(0.0, None)] * n_det + [(0.0, None)]
    res = solve_lp(c, a_eq=a_eq, b_eq=b_eq, bounds=bounds,
                   maximize=True).require()
    return float(res.value)


def _hull_radius(bank: np.ndarray, center: np.ndarray,
                 d: np.ndarray) -> float:
    n_pts, n_cells = bank.shape
    a_eq = np.zeros((n_cells + 1, n_pts + 1))
    a_eq[:n_cells, :n_pts] = bank.T
    a_eq[:n_cells, n_pts] = -d
    a_eq[n_cells, :n_pts] = 1.0
    b_eq = np.concatenate([center, [1.0]])
    c = np.zeros(n_pts + 1)
    c[-1] = 1.0
    res = solve_lp(c, a_eq=a_eq, b_eq=b_eq, bounds=(0.0, None),
                   maximize=True).require()
    return float(res.value)


def _hull_separation(q: np.ndarray, bank: np.ndarray):
    """(coefficients, margin): box-normalised functional with f.q - max f.b_i
    maximal; positive margin means q lies outside the bank hull."""
    n_pts, n_cells = bank.shape
    c = np.concatenate([q, [-1.0]])
    a_ub = np.zeros((n_pts, n_cells + 1))
    a_ub[:, :n_cells] = bank
    a_ub[:, -1] = -1.0
    res = solve_lp(c, a_ub, np.zeros(n_pts),
                   bounds=[(-1.0, 1.0)] * n_cells + [(None, None)],
                   maximize=True).require()
    return res.x[:n_cells], float(res.value)


# ---------------------------------------------------------------------------
# slice sampling

def slice_point(spec: SliceSpec, theta: float, r: float) -> Behaviour:
    flat = spec.center.flat() + r * (math.cos(theta) * spec.direction1
                                     + math.sin(theta) * spec.direction2)
    return Behaviour(spec.center.scenario, flat)


def _is_zero_marginal(spec: SliceSpec) -> bool:
    if spec.center.scenario.inputs != (2, 2):
        return False
    if prob_to_corr(spec.center).max_abs_marginal() > _MARGINAL_EPS:
        return False
    for d in (spec.direction1, spec.direction2):
        coords = _corr_coords(spec.center.scenario, d)
        if max(abs(v) for (s, _), v in coords.items() if len(s) == 1) \
                > _MARGINAL_EPS:
            return False
    return True


def _seed_bank(spec: SliceSpec) -> list:
    """Starting quantum points: deterministic vertices, the CHSH maximizers,
    and seesaw optima of in-plane direction functionals."""
    sc = spec.center.scenario
    D = deterministic_matrix(sc)
    bank = [row.astype(float) for row in D]
    jobs = [fn for fn in chsh_variants()] if sc.inputs == (2, 2) else []
    coarse = 24
    for k in range(coarse):
        phi = 2.0 * math.pi * k / coarse
        vec = math.cos(phi) * spec.direction1 + math.sin(phi) * spec.direction2
        jobs.append(BellFunctional(sc, vec, name="slice-dir"))
    for i, fn in enumerate(jobs):
        see = seesaw_lower_bound(fn, restarts=max(8, spec.restarts // 4),
                                 seed=spec.seed + 1000 + i)
        _bank_add(bank, see.realization.behaviour().flat())
    return bank


def _bank_add(bank: list, p: np.ndarray, tol: float = 1e-10) -> bool:
    for row in bank:
        if float(np.max(np.abs(row - p))) <= tol:
            return False
    bank.append(np.asarray(p, dtype=float))
    return True


def slice_boundary(spec: SliceSpec) -> BoundaryCurve:
    """Sample the four boundary radii of the slice at every angle.

    The no-signalling radius is a positivity ratio test, the local radius an
    LP over deterministic weights, the quantum outer radius a single
    moment-relaxation SDP per angle (ray objective, no bisection error), and
    the quantum inner radius either the exact correlator criterion (slices
    with vanishing marginals, where that criterion characterizes the quantum
    set) or the certified hull of explicit realizations, extended per angle
    by seesaw runs against hull-separating functionals until the outer gap
    stops shrinking.
    """
    sc = spec.center.scenario
    level = spec.level or default_level(sc)
    center_flat = spec.center.flat()
    center_coords = {k: float(v)
                     for k, v in prob_to_corr(spec.center).values.items()}
    thetas = np.array([2.0 * math.pi * k / spec.resolution
                       for k in range(spec.resolution)])
    D = deterministic_matrix(sc)
    zero_marginal = _is_zero_marginal(spec)

    r_L = np.zeros(spec.resolution)
    r_Q_inner = np.zeros(spec.resolution)
    r_Q_outer = np.zeros(spec.resolution)
    r_NS = np.zeros(spec.resolution)

    if zero_marginal:
        c_block = _corr_block(sc, center_coords)
        d1_block = _corr_block(sc, _corr_coords(sc, spec.direction1))
        d2_block = _corr_block(sc, _corr_coords(sc, spec.direction2))
        bank = None
    else:
        bank = _seed_bank(spec)

    d1c = _corr_coords(sc, spec.direction1)
    d2c = _corr_coords(sc, spec.direction2)

    for k, theta in enumerate(thetas):
        ct, st = math.cos(theta), math.sin(theta)
        d = ct * spec.direction1 + st * spec.direction2
        r_NS[k] = _positivity_radius(center_flat, d)
        r_L[k] = _local_radius(sc, center_flat, d, D)
        dir_coords = {key: ct * d1c[key] + st * d2c[key] for key in d1c}
        r_Q_outer[k] = npa_ray_max(sc, center_coords, dir_coords,
                                   level=level)["r"]
        if zero_marginal:
            block = ct * d1_block + st * d2_block
            r_Q_inner[k] = tlm_ray_max(c_block, block, hi=r_NS[k])
        else:
            r_Q_inner[k] = _hull_inner_radius(
                spec, bank, center_flat, d, r_Q_outer[k], k)
    meta = {
        "name": spec.name,
        "level": level,
        "radial_tol": spec.radial_tol,
        "q_inner_method": "tlm" if zero_marginal else "hull",
        "resolution": spec.resolution,
        "seed": spec.seed,
    }
    if bank is not None:
        meta["bank_size"] = len(bank)
    return BoundaryCurve("slice", sc, thetas, r_L, r_Q_inner, r_Q_outer,
                         r_NS, meta)


def _hull_inner_radius(spec: SliceSpec, bank: list, center: np.ndarray,
                       d: np.ndarray, r_out: float, angle_index: int,
                       max_rounds: int = 6) -> float:
    sc = spec.center.scenario
    r_in = _hull_radius(np.vstack(bank), center, d)
    for round_no in range(max_rounds):
        if r_out - r_in <= 3.0 * spec.radial_tol:
            break
        r_try = 0.5 * (r_in + r_out)
        q = center + r_try * d
        coeffs, margin = _hull_separation(q, np.vstack(bank))
        if margin <= 1e-10:
            break
        fn = BellFunctional(sc, coeffs, name="hull-gap")
        see = seesaw_lower_bound(fn, restarts=spec.restarts,
                                 seed=spec.seed + 7919 * angle_index
                                 + round_no)
        best = float(np.max(np.vstack(bank) @ coeffs))
        if see.value <= best + 1e-12:
            break
        if not _bank_add(bank, see.realization.behaviour().flat()):
            break
        new_r = _hull_radius(np.vstack(bank), center, d)
        if new_r <= r_in + spec.radial_tol * 1e-3:
            break
        r_in = new_r
    return r_in


# ---------------------------------------------------------------------------
# projections

def projection_boundary(f1: BellFunctional, f2: BellFunctional,
                        resolution: int = 360, level: str | None = None,
                        restarts: int = 32, seed: int = 0) -> BoundaryCurve:
    """Support values of the three sets in every direction of the
    (f1, f2)-image plane; the quantum inner curve is the convex hull of the
    projected seesaw optima, the outer one the moment-relaxation support."""
    if f1.scenario is not f2.scenario \
            and f1.scenario.inputs != f2.scenario.inputs:
        raise ValueError("functionals live in different scenarios")
    sc = f1.scenario
    v1, v2 = f1.flat(), f2.flat()
    if np.linalg.matrix_rank(np.vstack([v1, v2]), tol=1e-9) != 2:
        raise ValueError("projection functionals must be independent")
    level = level or default_level(sc)
    thetas = np.array([2.0 * math.pi * k / resolution
                       for k in range(resolution)])
    D = deterministic_matrix(sc)
    det_xy = np.column_stack([D @ v1, D @ v2])
    A_ns, b_ns = ns_equality_rows(sc)

    inner_pts = [row for row in det_xy]
    h_L = np.zeros(resolution)
    h_NS = np.zeros(resolution)
    h_out = np.zeros(resolution)
    h_in = np.zeros(resolution)
    for k, theta in enumerate(thetas):
        ct, st = math.cos(theta), math.sin(theta)
        fdir = BellFunctional(sc, ct * v1 + st * v2, name="proj-dir")
        h_L[k] = float(np.max(det_xy @ [ct, st]))
        res = solve_lp(fdir.flat(), a_eq=A_ns, b_eq=b_ns, bounds=(0, None),
                       maximize=True).require()
        h_NS[k] = float(res.value)
        h_out[k] = npa_upper_bound(fdir, level=level)["value"]
        see = seesaw_lower_bound(fdir, restarts=restarts, seed=seed + k)
        p = see.realization.behaviour().flat()
        inner_pts.append(np.array([float(p @ v1), float(p @ v2)]))
    pts = np.vstack(inner_pts)
    for k, theta in enumerate(thetas):
        h_in[k] = float(np.max(pts @ [math.cos(theta), math.sin(theta)]))
    meta = {
        "level": level,
        "resolution": resolution,
        "seed": seed,
        "axes": [f1.name or "f1", f2.name or "f2"],
        "inner_points": _hull_2d(pts).tolist(),
    }
    return BoundaryCurve("projection", sc, thetas, h_L, h_in, h_out, h_NS,
                         meta)


def _hull_2d(pts: np.ndarray) -> np.ndarray:
    """Convex hull in the plane (monotone chain), counterclockwise."""
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    keep = [0]
    for i in range(1, len(pts)):
        if float(np.max(np.abs(pts[i] - pts[keep[-1]]))) > 1e-12:
            keep.append(i)
    pts = pts[keep]
    if len(pts) < 3:
        return pts

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross2(out[-1] - out[-2],
                                            p - out[-2]) <= 1e-14:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(pts[::-1])
    return np.vstack(lower[:-1] + upper[:-1])


def _support_envelope(thetas: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Boundary points of the region defined by support values: intersect
    consecutive tangent lines x cos t + y sin t = h(t)."""
    n = len(thetas)
    pts = np.zeros((n, 2))
    for k in range(n):
        t1, t2 = thetas[k], thetas[(k + 1) % n]
        A = np.array([[math.cos(t1), math.sin(t1)],
                      [math.cos(t2), math.sin(t2)]])
        pts[k] = np.linalg.solve(A, [h[k], h[(k + 1) % n]])
    return pts


# ---------------------------------------------------------------------------
# feature detection

def kink_detect(curve: BoundaryCurve, component: str | None = None,
                flat_tol: float = 1e-7, slope_tol: float = 1e-4) -> list:
    """Flat segments, kinks and smooth joins on a sampled boundary.

    Flatness is collinearity of three consecutive boundary points (middle
    point within flat_tol of its neighbours' chord).  At each end of a flat
    run the adjacent arc is refit as a cubic in the frame of the flat line;
    the fit's root nearest the run is where the arc meets the line and the
    fit's slope there is the tangent mismatch.  A mismatch below slope_tol
    (radians) marks a smooth join, the signature of a non-exposed extremal
    point; anything larger is a kink.  The mismatch floor scales like
    sqrt(curvature * sample_noise), so slope_tol = 1e-4 needs boundary
    samples good to ~1e-10.  Defaults to the exact inner curve when
    available, else the outer.
    """
    if len(curve.thetas) < 360:
        raise ValueError("kink detection needs resolution >= 360")
    if component is None:
        component = ("Q_inner"
                     if curve.meta.get("q_inner_method") == "tlm"
                     else "Q_outer")
    pts = curve.points(component)
    n = len(pts)
    flat = np.zeros(n, dtype=bool)
    for k in range(n):
        a, b, c = pts[(k - 1) % n], pts[k], pts[(k + 1) % n]
        chord = c - a
        nrm = float(np.linalg.norm(chord))
        if nrm == 0.0:
            continue
        flat[k] = abs(_cross2(chord, b - a)) / nrm < flat_tol
    events = []
    runs = _flat_runs(flat)
    for start, end in runs:
        # flat[k] needs both neighbours on the line, so the on-line samples
        # extend one index past the run at each end
        run_len = (end - start) % n + 1
        line_idx = [(start - 1 + i) % n for i in range(run_len + 2)]
        theta_mid = float(curve.thetas[line_idx[len(line_idx) // 2]])
        events.append({
            "type": "flat-segment",
            "theta": theta_mid,
            "theta_start": float(curve.thetas[line_idx[0]]),
            "theta_end": float(curve.thetas[line_idx[-1]]),
        })
        for edge_pos, step in ((len(line_idx) - 1, 1), (0, -1)):
            ev = _arc_meets_line(pts, line_idx, edge_pos, step)
            if ev is None:
                continue
            point, diff = ev
            events.append({
                "type": "smooth-join" if diff < slope_tol else "kink",
                "theta": math.atan2(point[1], point[0]) % (2.0 * math.pi),
                "point": [float(point[0]), float(point[1])],
                "slope_difference": diff,
            })
    events.sort(key=lambda e: (e["theta"], e["type"]))
    return events


def _flat_runs(flat: np.ndarray) -> list:
    n = len(flat)
    if np.all(flat) or not np.any(flat):
        return []
    runs = []
    idx = 0
    while flat[idx % n] and idx < n:
        idx += 1  # rotate start off a run
    start = None
    for off in range(n + 1):
        k = (idx + off) % n
        if off < n and flat[k]:
            if start is None:
                start = k
            end = k
        else:
            if start is not None:
                runs.append((start, end))
                start = None
    return runs


def _arc_meets_line(pts: np.ndarray, line_idx: list, edge_pos: int,
                    step: int, m: int = 6):
    """Junction of the arc beyond a flat run with the run's line.

    Works in the line's own frame (xi along, eta across, from a least
    squares fit of the on-line samples): the arc's eta(xi) is fit by a
    cubic, whose real root nearest the run's edge is the junction and whose
    slope there is the tangent mismatch.  Extrapolating the slope this way
    is immune to the curvature-gradient bias of secant schemes; a smooth
    join shows up as a double root with slope ~ sqrt(noise * curvature).
    Returns (junction point, mismatch angle in radians), or None if the arc
    is degenerate.
    """
    n = len(pts)
    online = pts[line_idx]
    centroid = online.mean(axis=0)
    _, _, vt = np.linalg.svd(online - centroid, full_matrices=False)
    axis = vt[0]
    edge = line_idx[edge_pos]
    if float((pts[edge] - centroid) @ axis) < 0.0:
        axis = -axis
    normal = np.array([-axis[1], axis[0]])
    arc = np.asarray([pts[(edge + step * (i + 1)) % n] for i in range(m)])
    xi = (arc - centroid) @ axis
    eta = (arc - centroid) @ normal
    xi_edge = float((pts[edge] - centroid) @ axis)
    spacing = abs(float(xi[0]) - xi_edge)
    if spacing == 0.0 or len(np.unique(np.round(xi, 12))) < 4:
        return None
    coef = np.polynomial.polynomial.polyfit(xi, eta, 3)
    target = 0.5 * (xi_edge + float(xi[0]))
    best = None
    for root in np.polynomial.polynomial.polyroots(coef):
        # a smooth join is a double root: rounding splits it into a
        # conjugate pair, so small imaginary parts are still junctions
        if abs(root.imag) > 0.5 * spacing:
            continue
        if best is None or abs(root.real - target) < abs(best - target):
            best = float(root.real)
    if best is None or abs(best - target) > 4.0 * spacing:
        # no nearby crossing: fall back to the first secant off the edge
        mismatch = abs(math.atan2(float(eta[0]), float(xi[0]) - xi_edge))
        return pts[edge], mismatch
    slope = np.polynomial.polynomial.polyval(
        best, np.polynomial.polynomial.polyder(coef))
    point = centroid + best * axis
    return point, math.atan(abs(float(slope)))


def convexity_report(curve: BoundaryCurve) -> dict:
    """Per component: the most negative normalized turn (counterclockwise
    sampling makes every cross product of consecutive edges nonnegative on a
    convex boundary)."""
    out = {}
    for name in ("L", "Q_inner", "Q_outer", "NS"):
        pts = curve.points(name)
        n = len(pts)
        worst = float("inf")
        for k in range(n):
            e1 = pts[k] - pts[(k - 1) % n]
            e2 = pts[(k + 1) % n] - pts[k]
            nrm = float(np.linalg.norm(e1) * np.linalg.norm(e2))
            if nrm == 0.0:
                continue
            worst = min(worst, _cross2(e1, e2) / nrm)
        out[name] = worst
    return out


# ---------------------------------------------------------------------------
# the exact quantum floor of the symmetric-correlator slice

def fig5_quantum_floor(alpha: float, tol: float = 1e-12) -> float:
    """Least value of <A1B1> compatible with the quantum set when the other
    three correlators all equal alpha (marginals zero): -1 on the flat part,
    the cubic boundary beyond it."""
    if not -1.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [-1, 1]")

    def member(u):
        # exact zero tolerance: the default slack inflates the answer by
        # sqrt(slack) wherever the boundary is tangential (alpha near 1)
        return tlm_check(np.array([[alpha, alpha], [alpha, u]]),
                         tol=0.0).member

    if member(-1.0):
        return -1.0
    lo, hi = -1.0, alpha  # the all-equal point is always realizable
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if member(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# emission

def _curve_payload(curve: BoundaryCurve) -> dict:
    return {
        "kind": curve.kind,
        "inputs": list(curve.scenario.inputs),
        "theta": [float(t) for t in curve.thetas],
        "r_L": [float(v) for v in curve.r_L],
        "r_Q_inner": [float(v) for v in curve.r_Q_inner],
        "r_Q_outer": [float(v) for v in curve.r_Q_outer],
        "r_NS": [float(v) for v in curve.r_NS],
        "meta": curve.meta,
    }


def curve_from_json(text: str) -> BoundaryCurve:
    data = json.loads(text)
    return BoundaryCurve(
        data["kind"], Scenario(tuple(data["inputs"])),
        np.array(data["theta"]), np.array(data["r_L"]),
        np.array(data["r_Q_inner"]), np.array(data["r_Q_outer"]),
        np.array(data["r_NS"]), data.get("meta", {}))


def emit(curve: BoundaryCurve, fmt: str, path: str) -> str:
    """Write the curve as csv, json or svg; identical input gives identical
    bytes."""
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("theta,r_L,r_Q_inner,r_Q_outer,r_NS\n")
        for k in range(len(curve.thetas)):
            buf.write("%.12g,%.12g,%.12g,%.12g,%.12g\n" % (
                curve.thetas[k], curve.r_L[k], curve.r_Q_inner[k],
                curve.r_Q_outer[k], curve.r_NS[k]))
        data = buf.getvalue()
    elif fmt == "json":
        data = json.dumps(_curve_payload(curve), sort_keys=True,
                          indent=1) + "\n"
    elif fmt == "svg":
        data = _render_svg(curve)
    else:
        raise ValueError("format must be csv, json or svg")
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as fh:
        fh.write(data)
    return path


_SVG_STYLE = {
    "NS": {"color": "#888888", "ls": "-", "label": "no-signalling"},
    "Q_outer": {"color": "#1f77b4", "ls": "--", "label": "quantum (outer)"},
    "Q_inner": {"color": "#d62728", "ls": "-", "label": "quantum (inner)"},
    "L": {"color": "#2ca02c", "ls": "-", "label": "local"},
}


def _render_svg(curve: BoundaryCurve) -> bytes:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with plt.rc_context({"svg.hashsalt": "bellgeo", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6.0, 6.0))
        for name in ("NS", "Q_outer", "Q_inner", "L"):
            pts = curve.points(name)
            closed = np.vstack([pts, pts[:1]])
            style = _SVG_STYLE[name]
            ax.plot(closed[:, 0], closed[:, 1], style["ls"],
                    color=style["color"], linewidth=1.2,
                    label=style["label"])
        ax.set_aspect("equal")
        ax.legend(loc="upper right", fontsize=8)
        title = curve.meta.get("name") or curve.kind
        ax.set_title(str(title))
        ax.grid(True, linewidth=0.3, alpha=0.5)
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# figure presets

PRESET_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig7")


def _behaviour(name: str) -> Behaviour:
    return _zoo.named(name).behaviour


def preset(name: str, resolution: int | None = None,
           seed: int = 0) -> BoundaryCurve:
    """The five stock pictures.

    fig2: the symmetric slice through the four PR-type vertices (round
    quantum boundary).  fig3: the slice through the maximally CHSH-violating
    point, the uniform point and a deterministic point (flat quantum face
    between the first and last).  fig4: the projection onto the marginal-sum
    functional and CHSH.  fig5: the symmetric-correlator slice whose flat and
    curved arcs join smoothly.  fig7: the slice through the uniform point,
    a PR vertex and the maximal Hardy-paradox point.
    """
    if name not in PRESET_NAMES:
        raise ValueError("unknown preset %r (known: %s)"
                         % (name, ", ".join(PRESET_NAMES)))
    p0 = _behaviour("P0")
    sc = p0.scenario
    if name == "fig4":
        r2 = float(sqrt2())
        table = CorrelatorTable.bipartite([1.0 - r2, 1.0], [1.0 - r2, 1.0],
                                          [[0.0, 0.0], [0.0, 0.0]],
                                          scenario=sc)
        f1 = BellFunctional.from_correlators(table, name="marginal-sum")
        f2 = _zoo.named("B1").functional
        return projection_boundary(f1, f2, resolution=resolution or 360,
                                   seed=seed)
    if name == "fig2":
        d1 = _behaviour("PR").flat() - p0.flat()
        d2 = _behaviour("PR3").flat() - p0.flat()
    elif name == "fig3":
        d1 = _behaviour("P_det1").flat() - p0.flat()
        d2 = _behaviour("pCHSH").flat() - p0.flat()
    elif name == "fig5":
        d1 = corr_direction(sc, {((0, 1), (0, 0)): 1.0,
                                 ((0, 1), (0, 1)): 1.0,
                                 ((0, 1), (1, 0)): 1.0})
        d2 = corr_direction(sc, {((0, 1), (1, 1)): 1.0})
    else:
        d1 = _behaviour("PR").flat() - p0.flat()
        d2 = _behaviour("hardy").flat() - p0.flat()
    spec = SliceSpec(p0, d1, d2, resolution=resolution or 360,
                     seed=seed, name=name)
    return slice_boundary(spec)
