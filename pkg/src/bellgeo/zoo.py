"""Catalog of named behaviours and Bell functionals with exact coefficients.

Every entry stores its defining data symbolically (integers, Fractions or
quadratic irrationals), together with the known optimal values over the
local, quantum and no-signalling sets where those are available in closed
form.  Tests replay the stored numbers against the solvers, so the catalog
doubles as a regression anchor.

Entries are retrieved by name via :func:`named`; :func:`names` lists the
catalog.  Parameterised families are exposed as builder functions
(:func:`b3_functional`, :func:`hardy_family_functional`).
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactnum import Quad, sqrt2, sqrt5
from .scenario import (
    Scenario,
    Behaviour,
    CorrelatorTable,
    BellFunctional,
    corr_to_prob,
)

__all__ = [
    "NamedObject",
    "names",
    "named",
    "behaviour_names",
    "functional_names",
    "hardy_family_functional",
    "hardy_realization",
    "pchsh_realization",
    "ac_gap",
    "b3_cmax",
    "b3_functional",
    "b3_nonlocal_maximizer",
    "B3_DET_MAXIMIZERS",
]

_R2 = sqrt2()
_R5 = sqrt5()

SCENARIO_22 = Scenario((2, 2))


# ---------------------------------------------------------------------------
# container


@dataclass(frozen=True, eq=False)
class NamedObject:
    """A catalog entry: a behaviour or a Bell functional plus its exact data.

    bounds maps "local" / "quantum" / "no_signalling" to exact values (when
    known); correlators holds the defining correlator table with symbolic
    entries; notes carries entry-specific structure such as decompositions.
    """

    name: str
    kind: str  # "behaviour" or "functional"
    payload: object
    provenance: str
    bounds: dict = None
    correlators: CorrelatorTable = None
    notes: dict = field(default_factory=dict)

    @property
    def behaviour(self) -> Behaviour:
        if self.kind != "behaviour":
            raise ValueError("%s is a %s, not a behaviour" % (self.name, self.kind))
        return self.payload

    @property
    def functional(self) -> BellFunctional:
        if self.kind != "functional":
            raise ValueError("%s is a %s, not a functional" % (self.name, self.kind))
        return self.payload

    def bounds_float(self) -> dict:
        if self.bounds is None:
            return {}
        return {k: float(v) for k, v in self.bounds.items()}


def _behaviour_entry(name, table, provenance, notes=None):
    return NamedObject(name=name, kind="behaviour", payload=corr_to_prob(table),
                       provenance=provenance, correlators=table,
                       notes=notes or {})


def _functional_entry(name, table, provenance, bounds, notes=None):
    fn = BellFunctional.from_correlators(table, name=name)
    return NamedObject(name=name, kind="functional", payload=fn,
                       provenance=provenance, bounds=bounds,
                       correlators=table, notes=notes or {})


def _corr2(a_marginals, b_marginals, correlators):
    return CorrelatorTable.bipartite(list(a_marginals), list(b_marginals),
                                     [list(row) for row in correlators])


def _corr3(three_body, inputs=(2, 2, 2)):
    """All one- and two-body terms zero; three_body indexed [x][y][z]."""
    one = [[0] * m for m in inputs]
    two = {(i, j): [[0] * inputs[j] for _ in range(inputs[i])]
           for i in range(3) for j in range(i + 1, 3)}
    return CorrelatorTable.tripartite(one, two, three_body)


# ---------------------------------------------------------------------------
# behaviours

# Deterministic strategies, written as marginal sign vectors; +1 is output 0.
_DET_SIGNS = {
    "P_det1": ((1, 1), (1, 1)),
    "P_det2": ((-1, -1), (-1, -1)),
    "P_det3": ((-1, -1), (-1, 1)),
    "P_det4": ((-1, 1), (-1, -1)),
    "P_det5": ((1, 1), (1, -1)),
    "P_det6": ((1, -1), (1, 1)),
    "P_det7": ((-1, 1), (1, -1)),
    "P_det8": ((1, -1), (-1, 1)),
}


def _det_table(a_signs, b_signs):
    corr = [[ax * by for by in b_signs] for ax in a_signs]
    return _corr2(a_signs, b_signs, corr)


def _det_entry(name):
    a_signs, b_signs = _DET_SIGNS[name]
    outs_a = tuple((1 - s) // 2 for s in a_signs)
    outs_b = tuple((1 - s) // 2 for s in b_signs)
    return _behaviour_entry(
        name, _det_table(a_signs, b_signs),
        "deterministic strategy: Alice outputs %s, Bob outputs %s "
        "(per setting)" % (outs_a, outs_b),
        notes={"outputs_alice": outs_a, "outputs_bob": outs_b})


_PR_CORR = {
    "PR": ((1, 1), (1, -1)),
    "PR2": ((-1, -1), (-1, 1)),
    "PR3": ((-1, 1), (1, 1)),
    "PR4": ((1, -1), (-1, -1)),
}


def _pr_entry(name):
    corr = _PR_CORR[name]
    return _behaviour_entry(
        name, _corr2((0, 0), (0, 0), corr),
        "extremal no-signalling box: unbiased marginals, perfect correlators "
        "with sign pattern %s" % (corr,))


def _p0_entry():
    return _behaviour_entry(
        "P0", _corr2((0, 0), (0, 0), ((0, 0), (0, 0))),
        "uniform behaviour: every output pair equally likely at every setting")


def _pchsh_entry():
    h = _R2 / 2
    return _behaviour_entry(
        "pCHSH", _corr2((0, 0), (0, 0), ((h, h), (h, -h))),
        "two-qubit behaviour maximising the CHSH expression: maximally "
        "entangled state with optimal equatorial measurements",
        notes={"chsh_value": 2 * _R2})


def _hardy_entry():
    m = 5 - 2 * _R5
    w = _R5 - 2
    corr = ((6 * _R5 - 13, 3 * _R5 - 6), (3 * _R5 - 6, 2 * _R5 - 5))
    return _behaviour_entry(
        "hardy", _corr2((m, w), (m, w), corr),
        "two-qubit behaviour with three outcome probabilities exactly zero, "
        "which forces nonlocality whenever the fourth is positive",
        notes={
            # cells P(a b | x y) that vanish identically
            "zero_cells": (((1, 1), (1, 1)), ((1, 0), (0, 1)), ((0, 1), (1, 0))),
            "chsh_value": 10 * _R5 - 20,
        })


def _pne_entry():
    h = Fraction(1, 2)
    return _behaviour_entry(
        "P_NE", _corr2((0, 0), (0, 0), ((h, h), (h, -1))),
        "extremal quantum behaviour at which the flat and curved parts of the "
        "boundary meet with equal gradients, so no functional exposes it")


def _pl1_entry():
    t = Fraction(-1, 3)
    return _behaviour_entry(
        "P_L1", _corr2((t, t), (t, t), ((t, t), (t, t))),
        "local behaviour with every marginal and correlator equal to -1/3; "
        "all four output pairs (0,0) have probability zero")


def _pl2_entry():
    t = Fraction(1, 3)
    return _behaviour_entry(
        "P_L2", _corr2((0, 0), (0, 0), ((t, t), (t, -1))),
        "local behaviour on the boundary: unbiased marginals, three "
        "correlators 1/3 and one perfect anticorrelator")


def _pl3_entry():
    return _behaviour_entry(
        "P_L3", _corr2((0, 0), (0, 0), ((1, 1), (1, 1))),
        "local behaviour: unbiased marginals with all four correlators "
        "perfect (equal mixture of the two constant strategies)")


def _pl4_entry():
    w1 = Quad(Fraction(1, 19), Fraction(2, 19), 5)
    w5 = Quad(Fraction(9, 38), Fraction(-1, 38), 5)
    parts = {"P_det1": w1, "P_det5": w5, "P_det6": w5, "P_det7": w5,
             "P_det8": w5}
    vals = None
    for det, w in parts.items():
        table = _det_table(*_DET_SIGNS[det])
        if vals is None:
            vals = {k: w * v for k, v in table.values.items()}
        else:
            for k, v in table.values.items():
                vals[k] = vals[k] + w * v
    table = CorrelatorTable(SCENARIO_22, vals)
    return _behaviour_entry(
        "P_L4", table,
        "local but non-deterministic behaviour: the intersection of the line "
        "through the PR box and the hardy point with the hyperplane of CHSH "
        "value 2; its decomposition over deterministic strategies is unique",
        notes={"decomposition": parts})


# ---------------------------------------------------------------------------
# functionals

_TWO_R2 = 2 * _R2


def _b1_entry():
    table = _corr2((0, 0), (0, 0), ((1, 1), (1, -1)))
    return _functional_entry(
        "B1", table,
        "CHSH expression: the unique nontrivial facet class of the local "
        "polytope for two parties with two settings",
        bounds={"local": 2, "quantum": _TWO_R2, "no_signalling": 4},
        notes={"local_maximizers": ("P_det1",), "quantum_maximizers": ("pCHSH",),
               "ns_maximizers": ("PR",)})


def _b2_entry():
    t = 1 - _R2
    table = _corr2((t, 1), (t, 1), ((_R2, _R2), (_R2, -_R2)))
    return _functional_entry(
        "B2", table,
        "tilted expression maximised simultaneously by a nonlocal two-qubit "
        "behaviour and a deterministic one: its quantum face is a segment",
        bounds={"local": 4, "quantum": 4, "no_signalling": 4 * _R2},
        notes={"quantum_maximizers": ("pCHSH", "P_det1")})


def _b2star_entry():
    t = _R2 - 1
    table = _corr2((t, -1), (t, -1), ((_R2, _R2), (_R2, -_R2)))
    return _functional_entry(
        "B2star", table,
        "image of the segment-face expression under swapping all outputs; "
        "its quantum face is the reflected segment",
        bounds={"local": 4, "quantum": 4, "no_signalling": 4 * _R2},
        notes={"quantum_maximizers": ("pCHSH", "P_det2")})


def _b4_entry():
    table = _corr2((0, 0), (0, 0), ((0, 0), (0, -1)))
    return _functional_entry(
        "B4", table,
        "negated single-correlator expression; all three sets reach 1 but "
        "the quantum face has infinitely many extremal points",
        bounds={"local": 1, "quantum": 1, "no_signalling": 1},
        notes={"face_members": ("P_NE", "P_L2")})


def _b5_entry():
    table = _corr2((0, 0), (0, 0), ((1, 1), (0, 0)))
    return _functional_entry(
        "B5", table,
        "sum of the two correlators of Alice's first setting; the three "
        "maximal faces coincide with a two-dimensional classical face",
        bounds={"local": 2, "quantum": 2, "no_signalling": 2})


def _b6_entry():
    corr = ((1, 1, 1), (1, 1, -1), (1, -1, 0))
    table = _corr2((0, 0, 0), (0, 0, 0), corr)
    return _functional_entry(
        "B6", table,
        "three-setting correlation expression whose quantum bound 5 is "
        "certified by an exact sum of three squares",
        bounds={"local": 4, "quantum": 5, "no_signalling": 8})


def _b4d_entry():
    table = _corr2((0, 0), (0, 0), ((1, 1), (1, 1)))
    return _functional_entry(
        "B_4d", table,
        "sum of all four correlators; the maximal faces of all three sets "
        "coincide with the segment between the two constant strategies",
        bounds={"local": 4, "quantum": 4, "no_signalling": 4},
        notes={"face_members": ("P_det1", "P_det2")})


def _bpos_entry():
    table = _corr2((0, 1), (0, 1), ((0, 0), (0, -1)))
    return _functional_entry(
        "B_pos", table,
        "positivity expression: equals 1 minus four times the probability "
        "of outputs (1,1) at settings (1,1)",
        bounds={"local": 1, "quantum": 1, "no_signalling": 1})


def hardy_family_functional(a1=1, a2=1, a3=1) -> NamedObject:
    """Family of expressions maximised by the hardy behaviour.

    Coefficients must be nonnegative; for positive weights the maximising
    quantum face contains the hardy point together with five deterministic
    strategies.  (a1, a2, a3) = (0, 0, 1) reduces to the positivity
    expression B_pos.  All three optimal values equal a1 + a2 + a3.
    """
    for v in (a1, a2, a3):
        if float(v) < 0:
            raise ValueError("coefficients must be nonnegative")
    total = a1 + a2 + a3
    table = _corr2((a1, a3 - a2), (a2, a3 - a1),
                   ((0, a1), (a2, -a3)))
    name = "B_hardyfam(%s,%s,%s)" % (a1, a2, a3)
    return NamedObject(
        name=name, kind="functional",
        payload=BellFunctional.from_correlators(table, name=name),
        provenance="member of the three-parameter family of expressions "
                   "tangent to the quantum set at the hardy point",
        bounds={"local": total, "quantum": total, "no_signalling": total},
        correlators=table,
        notes={"saturating_points": ("P_det1", "P_det5", "P_det6", "P_det7",
                                     "P_det8", "PR", "hardy")})


def _hardyfam_entry():
    obj = hardy_family_functional(1, 1, 1)
    return NamedObject(name="B_hardyfam", kind="functional",
                       payload=obj.payload, provenance=obj.provenance,
                       bounds=obj.bounds, correlators=obj.correlators,
                       notes=obj.notes)


def _b7mod_entry():
    tb = [[[1], [1]], [[1], [-1]]]
    table = _corr3(tb, inputs=(2, 2, 1))
    return _functional_entry(
        "B7_mod", table,
        "CHSH expression modulated by a third party with a single binary "
        "measurement; its quantum face is a segment of extremal points",
        bounds={"local": 2, "quantum": _TWO_R2, "no_signalling": 4})


def _b8ww_entry():
    tb = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    tb[0][0][0] = 1
    tb[0][1][1] = 1
    tb[1][0][0] = 1
    tb[1][1][1] = -1
    table = _corr3(tb)
    return _functional_entry(
        "B8_ww", table,
        "three-party correlation expression of Werner-Wolf type whose "
        "quantum face contains a continuous curve of extremal points",
        bounds={"local": 2, "quantum": _TWO_R2, "no_signalling": 4})


def _mermin_entry():
    tb = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    tb[0][0][1] = 1
    tb[0][1][0] = 1
    tb[1][0][0] = 1
    tb[1][1][1] = -1
    table = _corr3(tb)
    return _functional_entry(
        "mermin", table,
        "Mermin three-party expression: quantum strategies reach the full "
        "no-signalling value 4 while classical ones are capped at 2",
        bounds={"local": 2, "quantum": 4, "no_signalling": 4})


# ---------------------------------------------------------------------------
# registry

_FACTORIES = {
    "P0": _p0_entry,
    "pCHSH": _pchsh_entry,
    "PR": _pr_entry,
    "PR2": _pr_entry,
    "PR3": _pr_entry,
    "PR4": _pr_entry,
    "hardy": _hardy_entry,
    "P_NE": _pne_entry,
    "P_L1": _pl1_entry,
    "P_L2": _pl2_entry,
    "P_L3": _pl3_entry,
    "P_L4": _pl4_entry,
    "B1": _b1_entry,
    "B2": _b2_entry,
    "B2star": _b2star_entry,
    "B4": _b4_entry,
    "B5": _b5_entry,
    "B6": _b6_entry,
    "B_4d": _b4d_entry,
    "B_pos": _bpos_entry,
    "B_hardyfam": _hardyfam_entry,
    "B7_mod": _b7mod_entry,
    "B8_ww": _b8ww_entry,
    "mermin": _mermin_entry,
}
for _n in _DET_SIGNS:
    _FACTORIES[_n] = _det_entry

_ALIASES = {
    "CHSH": "B1",
    "PR1": "PR",
    "B2*": "B2star",
    "B9": "B_hardyfam",
    "P_hardy": "hardy",
}

_BEHAVIOUR_NAMES = ("P0", "pCHSH", "PR", "PR2", "PR3", "PR4",
                    "P_det1", "P_det2", "P_det3", "P_det4",
                    "P_det5", "P_det6", "P_det7", "P_det8",
                    "hardy", "P_NE", "P_L1", "P_L2", "P_L3", "P_L4")

_CACHE: dict = {}


def names() -> list:
    """Canonical catalog names (aliases not included), behaviours first."""
    return list(_BEHAVIOUR_NAMES) + [n for n in _FACTORIES
                                     if n not in _BEHAVIOUR_NAMES]


def behaviour_names() -> list:
    return list(_BEHAVIOUR_NAMES)


def functional_names() -> list:
    return [n for n in _FACTORIES if n not in _BEHAVIOUR_NAMES]


def named(name: str) -> NamedObject:
    """Look up a catalog entry by name (a few aliases are accepted)."""
    canonical = _ALIASES.get(name, name)
    if canonical not in _FACTORIES:
        if canonical == "B3":
            raise ValueError("B3 is a two-parameter family: call "
                             "b3_functional(a, c)")
        raise ValueError("unknown catalog name %r; known names: %s"
                         % (name, ", ".join(names())))
    if canonical not in _CACHE:
        factory = _FACTORIES[canonical]
        entry = factory(canonical) if factory in (_det_entry, _pr_entry) \
            else factory()
        _CACHE[canonical] = entry
    return _CACHE[canonical]


# ---------------------------------------------------------------------------
# explicit quantum realizations for the two named quantum behaviours


def pchsh_realization():
    """Two-qubit model reaching the CHSH maximum (reproduces pCHSH exactly)."""
    from .quantum import QubitRealization

    r = 1 / np.sqrt(2.0)
    state = np.zeros(4)
    state[0] = state[3] = r
    bloch_a = [(0.0, 0.0, 1.0), (1.0, 0.0, 0.0)]
    bloch_b = [(r, 0.0, r), (-r, 0.0, r)]
    return QubitRealization(SCENARIO_22, state, [bloch_a, bloch_b])


def hardy_realization():
    """Two-qubit model for the hardy behaviour (partially entangled state)."""
    from .quantum import QubitRealization

    a = np.sqrt(np.sqrt(5.0) - 2.0)
    s = np.sqrt((1.0 - a * a) / 2.0)
    state = np.array([0.0, s, s, a])
    first = (2.0 * a, 0.0, np.sqrt(5.0) - 2.0)
    second = (0.0, 0.0, -1.0)
    return QubitRealization(SCENARIO_22, state, [[first, second],
                                                 [first, second]])


# ---------------------------------------------------------------------------
# the two-parameter tilted family

B3_DET_MAXIMIZERS = ("P_det1", "P_det3", "P_det4")


def ac_gap(a: float, c: float) -> float:
    """Slack of the flat-face condition for the tilted family at (a, c).

    Nonnegative exactly when the local and quantum maxima of the (a, c)
    expression coincide; the largest root in c marks the end of the flat
    regime.  Requires c > 0.
    """
    t1 = (c - 2 * a + 1) * (2 * a ** 3 - 3 * a ** 2 + (3 * a - 1) * c ** 2
                            - 5 * (a - 1) * a * c - c ** 3)
    inner = -2 * a ** 2 + 3 * (a - 1) * c + a + c ** 2
    return t1 - (a ** 2 / (4 * c ** 2)) * inner ** 2


def b3_cmax(a: float, tol: float = 1e-10) -> float:
    """Largest c in [a, 2] at which the flat-face condition is tight.

    Scans downward from c = 2 for the first sign change of :func:`ac_gap`
    and bisects the bracket to ``tol``.
    """
    a = float(a)
    if not 0.0 < a < 1.0:
        raise ValueError("parameter a must lie strictly between 0 and 1")
    grid = np.linspace(2.0, a, 241)
    prev_c, prev_g = grid[0], ac_gap(a, grid[0])
    if prev_g >= 0:
        raise ValueError("no bracket: the condition already holds at c = 2")
    for c in grid[1:]:
        g = ac_gap(a, c)
        if g >= 0:
            lo, hi = c, prev_c  # gap(lo) >= 0 > gap(hi)
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if ac_gap(a, mid) >= 0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev_c, prev_g = c, g
    raise ValueError("no bracket: the condition fails on all of [a, 2]")


def b3_functional(a, c) -> NamedObject:
    """Tilted expression with marginal weight a and correlator weight c.

    Valid for 0 < a < 1 and a <= c <= cmax(a); in that regime the local and
    quantum maxima coincide at 2c + 1 while the no-signalling maximum is
    4c + 1 - 2a.  Exact coefficients are kept when a and c are exact.
    """
    af, cf = float(a), float(c)
    if not 0.0 < af < 1.0:
        raise ValueError("parameter a must lie strictly between 0 and 1")
    if cf < af - 1e-12 or ac_gap(af, cf) < -1e-9:
        raise ValueError("(a, c) outside the flat regime: need a <= c <= "
                         "cmax(a) = %.12g" % b3_cmax(af))
    table = _corr2((-a, 1), (-a, 1), ((c, c), (c, -(c + 1 - 2 * a))))
    name = "B3(a=%.6g,c=%.6g)" % (af, cf)
    return NamedObject(
        name=name, kind="functional",
        payload=BellFunctional.from_correlators(table, name=name),
        provenance="tilted two-parameter expression whose quantum maximum "
                   "stays classical up to the critical correlator weight",
        bounds={"local": 2 * c + 1, "quantum": 2 * c + 1,
                "no_signalling": 4 * c + 1 - 2 * a},
        correlators=table,
        notes={"a": a, "c": c, "local_maximizers": B3_DET_MAXIMIZERS})


def b3_nonlocal_maximizer(a: float, restarts: int = 48, seed: int = 0,
                          tilt: float = 1e-5) -> dict:
    """Nonlocal quantum maximiser of the tilted expression at c = cmax(a).

    At the critical weight the quantum maximum 2c + 1 is attained both by
    deterministic strategies and by a single entangled two-qubit model; this
    returns the entangled one.  Because the optimum is degenerate there, a
    plain seesaw may stop on a mixture-like stationary point, so the search
    runs twice: once to identify the CHSH variant the nonlocal point
    violates, then again on the objective tilted by ``tilt`` times that
    variant, whose unique maximiser is the extremal nonlocal point (bias
    O(tilt)).  Keys: value, beta_chsh (best CHSH variant at the maximiser),
    lambda (larger squared Schmidt coefficient), phi (angle in degrees
    between the two measurement directions of one party), realization,
    behaviour, a, c.
    """
    from .quantum import seesaw_lower_bound
    from .polytope import chsh_scan, chsh_functional, local_membership
    from .scenario import BellFunctional

    c = b3_cmax(float(a))
    fn = b3_functional(float(a), c).payload
    res = seesaw_lower_bound(fn, restarts=restarts, seed=seed)
    signs, best_v = None, 2.0 + 1e-6
    for opt in res.all_optima:
        s, v = chsh_scan(opt["behaviour"])
        if v > best_v:
            signs, best_v = s, v
    if signs is None:
        raise RuntimeError("no nonlocal maximiser found at a=%.6g (value "
                           "%.12g, %d optima)" % (a, res.value,
                                                  len(res.all_optima)))
    chsh = chsh_functional(signs)
    tilted = BellFunctional(fn.scenario, fn.coeffs + tilt * chsh.coeffs)
    res2 = seesaw_lower_bound(tilted, restarts=restarts, seed=seed)
    opt = res2.all_optima[0]
    member, _, _ = local_membership(opt["behaviour"], tol=1e-6)
    if member:
        raise RuntimeError("tilted search collapsed onto a local point at "
                           "a=%.6g" % a)
    real = opt["realization"]
    return {
        "a": float(a),
        "c": c,
        "value": fn.value(opt["behaviour"]),
        "beta_chsh": chsh.value(opt["behaviour"]),
        "lambda": float(real.schmidt_weights()[0]),
        "phi": real.setting_angle_deg(0),
        "realization": real,
        "behaviour": opt["behaviour"],
    }
