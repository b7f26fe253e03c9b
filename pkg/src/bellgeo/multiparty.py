"""Three-party faces computed end to end.

Two binary-output examples where the whole quantum face can be written down:
a CHSH expression switched by a third party's single measurement, whose face
is a segment between two product-realizable statistics, and the two-setting
three-party correlation functional whose face is the convex hull of eight
discrete points and a one-parameter curve of GHZ-state statistics.  The
Mermin expression supplies the class-3a witness: its quantum and
no-signalling values coincide at 4 while the local bound stays at 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exactnum import sqrt2
from .faces import FaceReport, classify
from .npa import npa_upper_bound
from .polytope import local_bound, ns_bound
from .quantum import QubitRealization, seesaw_lower_bound
from .scenario import Behaviour, CorrelatorTable, Scenario, corr_to_prob
from . import zoo as _zoo

__all__ = [
    "BRANCHES",
    "GhzFaceParams",
    "ghz_face_point",
    "modulated_chsh",
    "modulated_realization",
    "mermin_witness",
    "ww_eigenvalues",
    "ww_face",
    "ww_family_behaviour",
    "ww_observables",
]

_R2 = sqrt2()
_HALF_R2 = _R2 / 2

SCENARIO_221 = Scenario((2, 2, 1))
SCENARIO_222 = Scenario((2, 2, 2))


# ---------------------------------------------------------------------------
# the modulated-CHSH segment

def _modulated_endpoint(sign: int) -> Behaviour:
    """Closed-form statistics with the third party pinned to an output.

    sign +1: third-party expectation +1 and two-body AB correlators equal to
    the three-body ones; sign -1: expectation -1 and AB correlators flipped.
    Both leave every other one- and two-body term zero.
    """
    one = [[0, 0], [0, 0], [sign]]
    two = {(0, 1): [[0, 0], [0, 0]], (0, 2): [[0], [0]], (1, 2): [[0], [0]]}
    three = [[[0], [0]], [[0], [0]]]
    for x in range(2):
        for y in range(2):
            corr = _HALF_R2 if (x, y) != (1, 1) else -_HALF_R2
            three[x][y][0] = corr
            two[(0, 1)][x][y] = corr * sign
    table = CorrelatorTable.tripartite(one, two, three, scenario=SCENARIO_221)
    return corr_to_prob(table)


def modulated_realization(theta: float) -> QubitRealization:
    """Three-qubit model saturating the modulated CHSH expression.

    The first two parties measure the standard CHSH observables, the third
    measures along z, and the state interpolates between the two face
    endpoints: at theta=0 a maximally entangled pair with the third qubit at
    +1, at theta=pi/2 the opposite-signature pair with the third qubit at -1.
    """
    r = 1.0 / math.sqrt(2.0)
    state = np.zeros(8)
    # cos(t) * (|000> + |110>)/sqrt2 + sin(t) * (|011> - |101>)/sqrt2
    state[0] = math.cos(theta) * r
    state[6] = math.cos(theta) * r
    state[3] = math.sin(theta) * r
    state[5] = -math.sin(theta) * r
    bloch = [
        [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
        [[r, 0.0, r], [r, 0.0, -r]],
        [[0.0, 0.0, 1.0]],
    ]
    return QubitRealization(SCENARIO_221, state, bloch)


def modulated_chsh(check: bool = True) -> dict:
    """The switched-CHSH functional with its three bounds and face segment.

    Returns {"functional", "bounds", "face_endpoints", "realization"}.  The
    face of the quantum set at the bound is the segment between the two
    endpoint statistics; realization maps theta in [0, pi/2] onto it (the
    endpoints arise at theta = 0 and pi/2, the midpoint at pi/4).  With
    check=True the catalog bounds are recomputed: the local and
    no-signalling values by LP, the quantum value by the level-1 moment
    relaxation against a seesaw lower bound.
    """
    entry = _zoo.named("B7_mod")
    fn = entry.functional
    endpoints = [_modulated_endpoint(+1), _modulated_endpoint(-1)]
    out = {
        "functional": fn,
        "bounds": dict(entry.bounds),
        "face_endpoints": endpoints,
        "realization": modulated_realization,
    }
    if check:
        beta_l, _ = local_bound(fn)
        beta_ns, _ = ns_bound(fn)
        upper = npa_upper_bound(fn, level="1")["value"]
        lower = seesaw_lower_bound(fn, restarts=8, seed=0).value
        target = float(2 * _R2)
        checks = {
            "local": beta_l,
            "no_signalling": beta_ns,
            "quantum_upper": upper,
            "quantum_lower": lower,
        }
        if abs(beta_l - 2.0) > 1e-9 or abs(beta_ns - 4.0) > 1e-9:
            raise ArithmeticError("polytope bounds off catalog: %r" % (checks,))
        if upper < target - 1e-7 or lower < target - 1e-6 \
                or upper > target + 1e-6:
            raise ArithmeticError("quantum bound off catalog: %r" % (checks,))
        for p in endpoints:
            val = fn.value(p)
            if abs(val - target) > 1e-12:
                raise ArithmeticError("endpoint misses the bound: %r" % val)
        out["checks"] = checks
    return out


# ---------------------------------------------------------------------------
# the two-setting three-party correlation face

BRANCHES = ("b+c=3pi/4", "b-c=-pi/4", "b-c=pi/4", "b+c=pi/4")

# branch -> (pair of computational-basis indices, relative sign) of the
# GHZ-type top eigenvector
_BRANCH_VECTORS = {
    "b+c=3pi/4": ((0, 7), -1.0),
    "b-c=-pi/4": ((1, 6), +1.0),
    "b-c=pi/4": ((2, 5), +1.0),
    "b+c=pi/4": ((3, 4), +1.0),
}

_BRANCH_RESIDUAL = {
    "b+c=3pi/4": lambda b, c: b + c - 3 * math.pi / 4,
    "b-c=-pi/4": lambda b, c: b - c + math.pi / 4,
    "b-c=pi/4": lambda b, c: b - c - math.pi / 4,
    "b+c=pi/4": lambda b, c: b + c - math.pi / 4,
}


@dataclass(frozen=True)
class GhzFaceParams:
    """Measurement angles on one of the four lines where the two-setting
    three-party correlation functional reaches its quantum value."""

    b: float
    c: float
    branch: str

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError("branch must be one of %r" % (BRANCHES,))
        if not (0.0 <= self.b <= math.pi / 2 + 1e-12):
            raise ValueError("b outside [0, pi/2]")
        if not (0.0 <= self.c <= math.pi / 2 + 1e-12):
            raise ValueError("c outside [0, pi/2]")
        if abs(_BRANCH_RESIDUAL[self.branch](self.b, self.c)) > 1e-12:
            raise ValueError("angles miss the %s line" % self.branch)


def ww_observables(b: float, c: float) -> list:
    """Equatorial Bloch vectors: the first party measures x and y, the other
    two measure at +-b and +-c from the x axis."""
    return [
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        [[math.cos(b), math.sin(b), 0.0], [math.cos(b), -math.sin(b), 0.0]],
        [[math.cos(c), math.sin(c), 0.0], [math.cos(c), -math.sin(c), 0.0]],
    ]


def ww_eigenvalues(b: float, c: float) -> list:
    """The eight eigenvalue/eigenvector pairs of the correlation operator.

    The operator built from the equatorial observables swaps each
    computational-basis state with its bitwise complement, so its
    eigenvectors are the eight GHZ vectors independent of the angles; only
    the eigenvalues move.  Each returned entry is verified against the dense
    operator to 1e-10 at runtime.
    """
    if not (0.0 <= b <= math.pi / 2 and 0.0 <= c <= math.pi / 2):
        raise ValueError("angles must lie in [0, pi/2]")
    amp = 2.0 * math.sqrt(2.0)
    quarter = math.pi / 4
    spec = [
        ("+1", (0, 7), +1.0, -amp * math.sin(b + c - quarter)),
        ("-1", (0, 7), -1.0, +amp * math.sin(b + c - quarter)),
        ("+2", (1, 6), +1.0, -amp * math.sin(b - c - quarter)),
        ("-2", (1, 6), -1.0, +amp * math.sin(b - c - quarter)),
        ("+3", (2, 5), +1.0, +amp * math.sin(b - c + quarter)),
        ("-3", (2, 5), -1.0, -amp * math.sin(b - c + quarter)),
        ("+4", (3, 4), +1.0, +amp * math.sin(b + c + quarter)),
        ("-4", (3, 4), -1.0, -amp * math.sin(b + c + quarter)),
    ]
    operator = _ww_operator(b, c)
    out = []
    for label, (i, j), sign, lam in spec:
        vec = np.zeros(8)
        vec[i] = 1.0 / math.sqrt(2.0)
        vec[j] = sign / math.sqrt(2.0)
        residual = float(np.linalg.norm(operator @ vec - lam * vec))
        if residual > 1e-10:
            raise ArithmeticError(
                "eigenpair %s fails by %.3e" % (label, residual))
        out.append({"label": label, "eigenvalue": lam, "eigenvector": vec})
    return out


def _ww_operator(b: float, c: float) -> np.ndarray:
    from .quantum import PAULI

    bloch = ww_observables(b, c)
    obs = [[np.einsum("k,kab->ab", np.asarray(v, dtype=float), PAULI)
            for v in party] for party in bloch]
    w = np.zeros((8, 8), dtype=complex)
    for (x, y, z), coef in (((0, 0, 0), 1), ((0, 1, 1), 1),
                            ((1, 0, 0), 1), ((1, 1, 1), -1)):
        w += coef * np.kron(np.kron(obs[0][x], obs[1][y]), obs[2][z])
    return w


def ww_family_behaviour(alpha: float) -> Behaviour:
    """The one-parameter curve of face points: all one- and two-body terms
    vanish and the three-body block interpolates with cos/sin of alpha."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    r = float(_HALF_R2)
    three = [
        [[r, ca], [ca, r]],
        [[r, sa], [-sa, -r]],
    ]
    one = [[0, 0], [0, 0], [0, 0]]
    two = {(i, j): [[0, 0], [0, 0]] for i in range(3) for j in range(i + 1, 3)}
    table = CorrelatorTable.tripartite(one, two, three, scenario=SCENARIO_222)
    return corr_to_prob(table)


def ghz_face_point(params: GhzFaceParams) -> dict:
    """Statistics of the top eigenvector on a branch of the face.

    Returns {"params", "realization", "behaviour", "alpha"}: the behaviour of
    the branch's GHZ eigenvector under the (b, c) observables, together with
    the curve parameter alpha it lands on.  The construction is rejected
    (ValueError from the params type) off the four lines, where the top
    eigenvalue drops below the quantum bound and the point leaves the face.
    """
    if not isinstance(params, GhzFaceParams):
        params = GhzFaceParams(*params)
    (i, j), sign = _BRANCH_VECTORS[params.branch]
    state = np.zeros(8)
    state[i] = 1.0 / math.sqrt(2.0)
    state[j] = sign / math.sqrt(2.0)
    real = QubitRealization(SCENARIO_222, state,
                            ww_observables(params.b, params.c))
    p = real.behaviour()
    table = real.correlator_table()
    alpha = math.atan2(table.get((0, 1, 2), (1, 0, 1)),
                       table.get((0, 1, 2), (0, 0, 1)))
    closed = ww_family_behaviour(alpha)
    gap = float(np.max(np.abs(p.flat() - closed.flat())))
    if gap > 1e-10:
        raise ArithmeticError(
            "branch statistics miss the closed-form curve by %.3e" % gap)
    return {"params": params, "realization": real, "behaviour": p,
            "alpha": alpha}


def _swap_last_two_parties(table: CorrelatorTable) -> CorrelatorTable:
    perm = {0: 0, 1: 2, 2: 1}
    vals = {}
    for (subset, settings), v in table.values.items():
        pairs = sorted(zip((perm[i] for i in subset), settings))
        vals[tuple(s for s, _ in pairs), tuple(x for _, x in pairs)] = v
    return CorrelatorTable(table.scenario, vals)


def _ww_discrete_points() -> list:
    """The eight extremal points: the first party shares a maximal CHSH
    correlation with one partner while the other answers deterministically.

    Points 1/2 pin the third party to +1/-1 with both settings agreeing;
    points 3/4 let its two settings disagree, which flips the variant of the
    CHSH correlation the first pair saturates; points 5-8 repeat 1-4 with
    the roles of the two partners exchanged.
    """
    pts = []
    for k, czs in enumerate(((1, 1), (-1, -1), (1, -1), (-1, 1))):
        one = [[0, 0], [0, 0], [0, 0]]
        two = {(i, j): [[0, 0], [0, 0]]
               for i in range(3) for j in range(i + 1, 3)}
        three = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
        one[2] = list(czs)
        for x in range(2):
            for y in range(2):
                # agreeing third-party settings keep the plain CHSH block,
                # disagreeing ones its variant with the role of x shifted
                if k < 2:
                    block = _HALF_R2 if x * y == 0 else -_HALF_R2
                else:
                    block = _HALF_R2 if (x + 1) * y % 2 == 0 else -_HALF_R2
                # product structure across the AB|C split
                two[(0, 1)][x][y] = block * czs[0]
                for z in range(2):
                    three[x][y][z] = block * czs[0] * czs[z]
        table = CorrelatorTable.tripartite(one, two, three,
                                           scenario=SCENARIO_222)
        pts.append(table)
    pts.extend(_swap_last_two_parties(t) for t in list(pts))
    return [corr_to_prob(t) for t in pts]


def ww_face(sample_count: int = 16, check: bool = True) -> dict:
    """The full quantum face of the two-setting three-party correlation
    functional: eight discrete extremal points plus the one-parameter curve.

    Returns {"points", "family", "samples", "alphas"}; family is the callable
    alpha -> Behaviour and samples holds it evaluated on an even grid over
    [0, 2pi).  With check=True every returned behaviour is verified to give
    the functional its quantum value to 1e-12 and to satisfy no-signalling.
    """
    entry = _zoo.named("B8_ww")
    fn = entry.functional
    points = _ww_discrete_points()
    alphas = [2.0 * math.pi * k / sample_count for k in range(sample_count)]
    samples = [ww_family_behaviour(a) for a in alphas]
    if check:
        target = float(2 * _R2)
        for p in points + samples:
            val = fn.value(p)
            if abs(val - target) > 1e-12:
                raise ArithmeticError(
                    "face point value %.15f misses the bound" % val)
    return {"points": points, "family": ww_family_behaviour,
            "samples": samples, "alphas": alphas}


# ---------------------------------------------------------------------------
# the Mermin witness

def mermin_witness(tol: float = 1e-6, restarts: int = 64,
                   seed: int = 0) -> FaceReport:
    """Classify the Mermin expression; lands in class 3a.

    The quantum and no-signalling values coincide at 4 (level-1 relaxation
    meets the GHZ seesaw and the vertex LP), twice the local bound, and the
    face carries a nonlocal no-signalling vertex certificate.
    """
    fn = _zoo.named("mermin").functional
    return classify(fn, tol=tol, restarts=restarts, seed=seed)
