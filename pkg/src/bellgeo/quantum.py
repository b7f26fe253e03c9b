"""Quantum-side machinery: membership tests, seesaw heuristics, realizations.

Everything here works with explicit qubit models: an n-qubit pure state plus
one traceless +-1-valued observable per party and setting, stored as unit
Bloch vectors.  Such models always produce valid quantum behaviours, so every
value reported by the seesaw is a certified lower bound on the quantum
maximum.  Upper bounds come from the moment-matrix relaxations in ``npa``.
"""

from __future__ import annotations


from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .scenario import (
    Behaviour,
    BellFunctional,
    CorrelatorTable,
    Scenario,
    corr_to_prob,
    prob_to_corr,
)

PAULI = np.array([
    [[0.0, 1.0], [1.0, 0.0]],
    [[0.0, -1.0j], [1.0j, 0.0]],
    [[1.0, 0.0], [0.0, -1.0]],
])
IDENTITY2 = np.eye(2, dtype=complex)

TLM_TOL = 1e-10


class TlmReport(NamedTuple):
    lhs: float
    member: bool
    max_abs_marginal: float


def _correlator_square(x) -> np.ndarray:
    """Extract the 2x2 correlator block T[x][y] = <A_x B_y> for a 2222 object."""
    if isinstance(x, Behaviour):
        x = prob_to_corr(x)
    if isinstance(x, CorrelatorTable):
        if x.scenario.inputs != (2, 2):
            raise ValueError("the two-party two-setting criterion needs a (2,2) scenario")
        vals = x.as_float()
        marg = x.max_abs_marginal()
        t = np.array([[vals[((0, 1), (xx, yy))] for yy in range(2)] for xx in range(2)])
        return t, marg
    t = np.asarray(x, dtype=float)
    if t.shape != (2, 2):
        raise ValueError("expected a 2x2 correlator block")
    return t, 0.0


def tlm_check(x, tol: float = TLM_TOL) -> TlmReport:
    """Quantum realizability of a 2x2-setting correlator block.

    The block (T_00, T_01, T_10, T_11) is realizable iff

        1 + prod(T) + prod(sqrt(1 - T^2)) - sum(T^2)/2 >= 0,

    which is the algebraic form of the arcsine criterion.  Zero marks the
    boundary; the maximally mixed point scores +2 and the PR box -2.  For a
    behaviour with vanishing marginals this decides membership in the quantum
    set exactly (mixing any realization with its all-outcome flip preserves
    correlators and kills marginals); with nonzero marginals it only tests the
    correlator projection, which is still a valid necessary condition.
    """
    t, marg = _correlator_square(x)
    sq = t * t
    if float(np.max(sq)) > 1.0 + 1e-12:
        return TlmReport(float("-inf"), False, marg)
    lhs = 1.0 + float(np.prod(t)) + float(np.prod(np.sqrt(np.maximum(0.0, 1.0 - sq)))) \
        - 0.5 * float(np.sum(sq))
    return TlmReport(lhs, lhs >= -tol, marg)


def tlm_ray_max(center: np.ndarray, direction: np.ndarray, hi: float,
                tol: float = 1e-12) -> float:
    """Largest r with tlm_check(center + r*direction) true; center must pass."""
    center = np.asarray(center, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if not tlm_check(center).member:
        raise ValueError("ray center is outside the quantum correlator body")
    lo = 0.0
    if tlm_check(center + hi * direction).member:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if tlm_check(center + mid * direction).member:
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# qubit realizations


class QubitRealization:
    """n-qubit pure state plus unit Bloch vectors, one per party and setting."""

    __slots__ = ("scenario", "state", "bloch")

    def __init__(self, scenario: Scenario, state, bloch):
        self.scenario = scenario
        state = np.asarray(state, dtype=complex).reshape(-1)
        dim = 2 ** scenario.n_parties
        if state.shape != (dim,):
            raise ValueError("state must have dimension 2^n")
        nrm = float(np.linalg.norm(state))
        if nrm == 0.0:
            raise ValueError("state must be nonzero")
        self.state = state / nrm
        self.bloch = []
        for i, m in enumerate(scenario.inputs):
            b = np.asarray(bloch[i], dtype=float)
            if b.shape != (m, 3):
                raise ValueError("party %d needs %d Bloch vectors" % (i, m))
            norms = np.linalg.norm(b, axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-9):
                raise ValueError("Bloch vectors must be unit length")
            self.bloch.append(b / norms[:, None])

    def observable(self, party: int, setting: int) -> np.ndarray:
        return np.einsum("k,kab->ab", self.bloch[party][setting], PAULI)

    def correlator(self, subset, settings) -> float:
        n = self.scenario.n_parties
        ops = []
        it = iter(zip(subset, settings))
        nxt = next(it, None)
        for i in range(n):
            if nxt is not None and nxt[0] == i:
                ops.append(self.observable(i, nxt[1]))
                nxt = next(it, None)
            else:
                ops.append(IDENTITY2)
        full = ops[0]
        for op in ops[1:]:
            full = np.kron(full, op)
        return float(np.real(np.conj(self.state) @ (full @ self.state)))

    def correlator_table(self) -> CorrelatorTable:
        sc = self.scenario
        vals = {key: self.correlator(*key) for key in sc.correlator_keys()}
        return CorrelatorTable(sc, vals)

    def behaviour(self) -> Behaviour:
        return corr_to_prob(self.correlator_table())

    def schmidt_weights(self) -> np.ndarray:
        """Squared Schmidt coefficients across the party-0 | rest cut, descending."""
        n = self.scenario.n_parties
        mat = self.state.reshape(2, 2 ** (n - 1))
        s = np.linalg.svd(mat, compute_uv=False)
        return np.sort(s * s)[::-1]

    def setting_angle_deg(self, party: int, s1: int = 0, s2: int = 1) -> float:
        b = self.bloch[party]
        c = float(np.clip(np.dot(b[s1], b[s2]), -1.0, 1.0))
        return float(np.degrees(np.arccos(c)))


def realization_to_behaviour(realization: QubitRealization) -> Behaviour:
    return realization.behaviour()


# ---------------------------------------------------------------------------
# seesaw lower bounds


class SeesawResult(NamedTuple):
    value: float
    realization: QubitRealization
    all_optima: list
    restart_values: np.ndarray


def _batched_kron(mats):
    out = mats[0]
    for m in mats[1:]:
        r, a, b = out.shape
        _, c, d = m.shape
        out = np.einsum("rab,rcd->racbd", out, m).reshape(r, a * c, b * d)
    return out


def _structured_starts(scenario: Scenario, rng) -> list:
    """Qubit models that sit at known extremal points; used to seed restarts."""
    n = scenario.n_parties
    dim = 2 ** n
    s2 = 1.0 / np.sqrt(2.0)
    starts = []

    def pad(vectors, m):
        out = list(vectors)[:m]
        while len(out) < m:
            v = rng.normal(size=3)
            out.append(v / np.linalg.norm(v))
        return np.array(out)

    z = (0.0, 0.0, 1.0)
    x = (1.0, 0.0, 0.0)
    y = (0.0, 1.0, 0.0)
    diag = (s2, 0.0, s2)
    anti = (s2, 0.0, -s2)

    # maximally entangled pair (parties beyond the second get a spectator qubit)
    phi = np.zeros(dim, dtype=complex)
    phi[0] = s2
    phi[3 if n == 2 else 6] = s2  # |00>+|11> on the first two qubits, |0> elsewhere
    starts.append((phi, [pad([z, x, y], m) if i == 0 else pad([diag, anti, y], m)
                         for i, m in enumerate(scenario.inputs)]))

    # GHZ with x/y measurements everywhere
    ghz = np.zeros(dim, dtype=complex)
    ghz[0] = s2
    ghz[-1] = s2
    starts.append((ghz, [pad([x, y, z], m) for m in scenario.inputs]))

    # deterministic product point
    e0 = np.zeros(dim, dtype=complex)
    e0[0] = 1.0
    starts.append((e0, [pad([z, z, z], m) for m in scenario.inputs]))

    if n == 2:
        # the lopsided two-qubit state that maximizes the Hardy paradox
        a = np.sqrt(np.sqrt(5.0) - 2.0)
        h = np.zeros(4, dtype=complex)
        h[1] = np.sqrt((1.0 - a * a) / 2.0)
        h[2] = np.sqrt((1.0 - a * a) / 2.0)
        h[3] = a
        ha = (2.0 * a, 0.0, np.sqrt(5.0) - 2.0)
        starts.append((h, [pad([ha, (0.0, 0.0, -1.0), y], m) for m in scenario.inputs]))

        # singlet with the three-setting arrangement that is exact for m = 3
        if max(scenario.inputs) >= 3:
            sing = np.array([0.0, s2, -s2, 0.0], dtype=complex)
            r3 = np.sqrt(3.0) / 2.0
            a0 = (r3, 0.5, 0.0)
            a1 = (r3, -0.5, 0.0)
            b0 = (-r3, -0.5, 0.0)
            b1 = (-r3, 0.5, 0.0)
            starts.append((sing, [pad([a0, a1, y], scenario.inputs[0]),
                                  pad([b0, b1, (0.0, -1.0, 0.0)], scenario.inputs[1])]))
    return starts


def seesaw_lower_bound(functional: BellFunctional, restarts: int = 64, seed: int = 0,
                       max_iter: int = 400, value_tol: float = 1e-13,
                       optimum_tol: float = 1e-6) -> SeesawResult:
    """Alternating qubit optimization of a Bell functional.

    Each half-step is exact: measurements update to the normalized Bloch
    gradient (the unique maximizer with the state fixed) and the state updates
    to the top eigenvector of the Bell operator (the unique maximizer with
    measurements fixed, up to degeneracy).  The iteration is therefore
    monotone and every reported value is attained by an explicit realization.

    all_optima collects the distinct behaviours (max-norm separation above
    optimum_tol) whose value lies within optimum_tol of the best restart.
    """
    sc = functional.scenario
    n = sc.n_parties
    dim = 2 ** n
    const, coefs = functional.correlator_form()
    terms = [(subset, xs, w) for (subset, xs), w in coefs.items() if w != 0.0]

    rng = np.random.default_rng(seed)
    r = max(1, int(restarts))

    states = rng.normal(size=(r, dim)) + 1j * rng.normal(size=(r, dim))
    states /= np.linalg.norm(states, axis=1)[:, None]
    bloch = []
    for m in sc.inputs:
        b = rng.normal(size=(r, m, 3))
        b /= np.linalg.norm(b, axis=2)[:, :, None]
        bloch.append(b)
    for k, (state, vecs) in enumerate(_structured_starts(sc, rng)):
        if k >= r:
            break
        states[k] = state
        for i in range(n):
            bloch[i][k] = vecs[i]

    def observables():
        return [np.einsum("rmk,kab->rmab", bloch[i], PAULI) for i in range(n)]

    def bell_operator(obs):
        w = np.zeros((r, dim, dim), dtype=complex)
        eye = np.broadcast_to(IDENTITY2, (r, 2, 2))
        for subset, xs, coef in terms:
            mats = []
            it = iter(zip(subset, xs))
            nxt = next(it, None)
            for i in range(n):
                if nxt is not None and nxt[0] == i:
                    mats.append(obs[i][:, nxt[1]])
                    nxt = next(it, None)
                else:
                    mats.append(eye)
            w += coef * _batched_kron(mats)
        return w

    def values(obs):
        w = bell_operator(obs)
        return np.real(np.einsum("rd,rde,re->r", np.conj(states), w, states)) + const

    psi_shape = (r,) + (2,) * n
    letters = "abc"[:n]

    def partial_expectation(party, rest, restx, obs):
        """Gradient block h[r,a,b] with term value = sum_ab O_party[a,b] h[r,a,b]."""
        psi = states.reshape(psi_shape)
        ins = ["r" + letters]
        args = [np.conj(psi)]
        ket = list(letters)
        ket[party] = letters[party].upper()
        for j, xj in zip(rest, restx):
            new = letters[j].upper()
            ins.append("r" + letters[j] + new)
            args.append(obs[j][:, xj])
            ket[j] = new
        ins.append("r" + "".join(ket))
        args.append(psi)
        spec = ",".join(ins) + "->r" + letters[party] + letters[party].upper()
        return np.einsum(spec, *args)

    obs = observables()
    prev = values(obs)
    for _ in range(max_iter):
        # measurement sweep: each (party, setting) gets its exact best response
        for i in range(n):
            for xv in range(sc.inputs[i]):
                h = np.zeros((r, 2, 2), dtype=complex)
                for subset, xs, coef in terms:
                    if i not in subset or xs[subset.index(i)] != xv:
                        continue
                    rest = tuple(p for p in subset if p != i)
                    restx = tuple(x for p, x in zip(subset, xs) if p != i)
                    h += coef * partial_expectation(i, rest, restx, obs)
                g = np.real(np.einsum("rab,kab->rk", h, PAULI))
                norms = np.linalg.norm(g, axis=1)
                keep = norms > 1e-14
                bloch[i][keep, xv] = g[keep] / norms[keep, None]
            obs[i] = np.einsum("rmk,kab->rmab", bloch[i], PAULI)

        # state sweep: top eigenvector of the Bell operator
        w = bell_operator(obs)
        w = 0.5 * (w + np.conj(np.swapaxes(w, 1, 2)))
        _, vecs = np.linalg.eigh(w)
        states = vecs[:, :, -1]

        cur = values(obs)
        if float(np.max(cur - prev)) < value_tol:
            prev = cur
            break
        prev = cur

    order = np.argsort(prev)[::-1]
    best = float(prev[order[0]])

    def realization_of(k):
        return QubitRealization(sc, states[k], [bloch[i][k] for i in range(n)])

    optima = []
    flats = []
    for k in order:
        if best - float(prev[k]) > optimum_tol:
            break
        real = realization_of(int(k))
        beh = real.behaviour()
        fl = beh.flat()
        if any(float(np.max(np.abs(fl - f0))) <= optimum_tol for f0 in flats):
            continue
        flats.append(fl)
        optima.append({"behaviour": beh, "realization": real, "value": float(prev[k])})

    return SeesawResult(best, optima[0]["realization"], optima, prev[order])


# ---------------------------------------------------------------------------
# exact operator algebra for sum-of-squares certificates

# A monomial is a pair (alice_word, bob_word): tuples of setting indices with
# the involution X_s X_s = 1 already applied.  Letters of different parties
# commute, letters of one party do not.


def _reduce_word(word):
    out = []
    for letter in word:
        if out and out[-1] == letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def _mono_mul(m1, m2):
    return (_reduce_word(m1[0] + m2[0]), _reduce_word(m1[1] + m2[1]))


def _mono_adjoint(m):
    return (m[0][::-1], m[1][::-1])


def poly_mul(p1: dict, p2: dict) -> dict:
    out = {}
    for m1, c1 in p1.items():
        for m2, c2 in p2.items():
            m = _mono_mul(m1, m2)
            c = out.get(m, 0) + c1 * c2
            if c == 0:
                out.pop(m, None)
            else:
                out[m] = c
    return out


def poly_add(p1: dict, p2: dict, scale=1) -> dict:
    out = dict(p1)
    for m, c in p2.items():
        cc = out.get(m, 0) + scale * c
        if cc == 0:
            out.pop(m, None)
        else:
            out[m] = cc
    return out


def poly_adjoint(p: dict) -> dict:
    return {_mono_adjoint(m): c for m, c in p.items()}


def a_letter(x):
    return ((x,), ())


def b_letter(y):
    return ((), (y,))


IDENTITY_MONO = ((), ())

# the two-party three-setting correlation functional with quantum value 5
B6_CORRELATOR_COEFFS = {
    (0, 0): 1, (0, 1): 1, (0, 2): 1,
    (1, 0): 1, (1, 1): 1, (1, 2): -1,
    (2, 0): 1, (2, 1): -1, (2, 2): 0,
}

B6_SQUARES = (
    {a_letter(0): 1, a_letter(1): 1, b_letter(0): -1, b_letter(1): -1},
    {a_letter(0): 1, a_letter(1): -1, b_letter(2): -1},
    {a_letter(2): 1, b_letter(0): -1, b_letter(1): 1},
)


def sos_gap_expansion(bound, correlator_coeffs: dict, squares) -> dict:
    """Exact expansion of bound*1 - W - 1/2 * sum V^dag V over the word algebra."""
    gap = {IDENTITY_MONO: Fraction(bound)}
    for (x, y), c in correlator_coeffs.items():
        if c:
            gap = poly_add(gap, {((x,), (y,)): Fraction(c)}, scale=-1)
    for v in squares:
        vf = {m: Fraction(c) for m, c in v.items()}
        gap = poly_add(gap, poly_mul(poly_adjoint(vf), vf), scale=Fraction(-1, 2))
    return gap


def verify_sos_b6(squares=None) -> dict:
    """Exact proof that the three-setting correlation functional is at most 5.

    Expands 5 - W - 1/2 sum_j V_j^dag V_j in the free algebra generated by
    three binary observables per party (modulo X^2 = 1 and cross-party
    commutation) and reports the residual, which is identically zero for the
    shipped squares.  A zero residual shows 5 - W is a sum of squares, hence
    positive semidefinite in every quantum representation.
    """
    if squares is None:
        squares = B6_SQUARES
    residual = sos_gap_expansion(5, B6_CORRELATOR_COEFFS, squares)
    target = {IDENTITY_MONO: Fraction(5)}
    for (x, y), c in B6_CORRELATOR_COEFFS.items():
        if c:
            target[((x,), (y,))] = -Fraction(c)
    return {
        "ok": not residual,
        "residual": residual,
        "bound": 5,
        "target": target,
        "squares": squares,
    }


def b6_family(alpha: float) -> dict:
    """One-parameter curve of qubit models all reaching value 5.

    A singlet pair with party-0 settings closing an angle that rotates with
    alpha while the value of the three-setting correlation functional stays
    pinned at 5; the correlators themselves move, so the maximizing set
    contains a curve.
    """
    r3 = np.sqrt(3.0) / 2.0
    ca, sa = np.cos(alpha), np.sin(alpha)
    s2 = 1.0 / np.sqrt(2.0)
    state = np.array([0.0, s2, -s2, 0.0], dtype=complex)
    bloch_a = np.array([
        [r3, 0.5 * ca, 0.5 * sa],
        [r3, -0.5 * ca, -0.5 * sa],
        [0.0, 1.0, 0.0],
    ])
    bloch_b = np.array([
        [-r3, -0.5, 0.0],
        [-r3, 0.5, 0.0],
        [0.0, -ca, -sa],
    ])
    real = QubitRealization(Scenario((3, 3)), state, [bloch_a, bloch_b])
    return {"alpha": float(alpha), "realization": real, "behaviour": real.behaviour()}


def b6_family_correlators(alpha: float) -> CorrelatorTable:
    """Closed form of the b6_family correlators (all marginals vanish)."""
    ca = np.cos(alpha)
    corr = [
        [(3.0 + ca) / 4.0, (3.0 - ca) / 4.0, 0.5],
        [(3.0 - ca) / 4.0, (3.0 + ca) / 4.0, -0.5],
        [0.5, -0.5, ca],
    ]
    return CorrelatorTable.bipartite([0.0] * 3, [0.0] * 3, corr, scenario=Scenario((3, 3)))
