"""Moment-matrix outer relaxations of the quantum set.

A word is a tuple of per-party letter strings, each letter a setting index of
that party's +-1-valued observable.  Letters from different parties commute,
same-party letters square to the identity, so a product reduces per party by
cancelling adjacent repeats.  The moment matrix over a word list W has entry
M[u, v] = <u^dag v>; identifying each moment with its adjoint (string
reversal per party) gives the real symmetric relaxation, and <u^dag u> = 1
puts an identity on the diagonal, which doubles as the strictly feasible
starting point y = 0 of the barrier solver.

Word levels:
  "1"    bipartite: identity, A_x, B_y.  Tripartite: every product with at
         most one letter per party (the strongest one-letter set).
  "1ab"  bipartite level 1 plus the products A_x B_y.
  "2"    bipartite: all words of length at most two, both orderings of
         same-party pairs kept.

The relaxations only ever see correlator data, so objectives and pinned
coordinates are given in correlator form (party subset, settings).
"""

from __future__ import annotations

import itertools

import numpy as np

from .scenario import BellFunctional, Scenario
from .sdp import SDPError, solve_lmi

LEVELS = ("1", "1ab", "2")

_LEVEL_ALIASES = {"1+ab": "1ab", "1+AB": "1ab"}


def canonical_level(level: str) -> str:
    return _LEVEL_ALIASES.get(level, _LEVEL_ALIASES.get(str(level).lower(), level))


def _reduce(letters):
    out = []
    for s in letters:
        if out and out[-1] == s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def word_mult(u, v):
    return tuple(_reduce(a + b) for a, b in zip(u, v))


def word_adjoint(u):
    return tuple(tuple(reversed(a)) for a in u)


def word_canonical(w):
    return min(w, word_adjoint(w))


def word_set(scenario: Scenario, level: str):
    """Ordered word list for the relaxation level."""
    level = canonical_level(level)
    n = scenario.n_parties
    if n == 3:
        if level != "1":
            raise ValueError("tripartite word sets are provided at level '1'")
        parts = []
        for m in scenario.inputs:
            parts.append([()] + [(x,) for x in range(m)])
        return [tuple(combo) for combo in itertools.product(*parts)]
    if level not in LEVELS and not level.isdigit():
        raise ValueError("unknown level %r" % (level,))
    ma, mb = scenario.inputs
    ident = ((), ())
    singles = [((x,), ()) for x in range(ma)] + [((), (y,)) for y in range(mb)]
    if level == "1":
        return [ident] + singles
    if level == "1ab":
        return [ident] + singles + [((x,), (y,)) for x in range(ma) for y in range(mb)]
    depth = int(level)
    str_a = _alternating_strings(ma, depth)
    str_b = _alternating_strings(mb, depth)
    return [(u, v) for u in str_a for v in str_b if len(u) + len(v) <= depth]


def _alternating_strings(m, max_len):
    """Reduced words over m letters by length: adjacent repeats cancel."""
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        new = []
        for s in frontier:
            for x in range(m):
                if not s or s[-1] != x:
                    new.append(s + (x,))
        out.extend(new)
        frontier = new
    return out


class MomentStructure:
    """Symbolic layout of the moment matrix for a word list."""

    def __init__(self, scenario: Scenario, level: str):
        self.scenario = scenario
        self.level = canonical_level(level)
        level = self.level
        self.words = word_set(scenario, level)
        m = len(self.words)
        ident = tuple(() for _ in range(scenario.n_parties))
        positions: dict = {}
        for i in range(m):
            ui = word_adjoint(self.words[i])
            for j in range(i, m):
                lab = word_canonical(word_mult(ui, self.words[j]))
                positions.setdefault(lab, []).append((i, j))
        ident_pos = positions.pop(ident)
        if ident_pos != [(i, i) for i in range(m)]:
            raise AssertionError("identity moments must fill exactly the diagonal")
        self.labels = sorted(positions)
        self.index = {lab: k for k, lab in enumerate(self.labels)}
        self.size = m
        pencil = np.zeros((len(self.labels), m, m))
        for lab, pos in positions.items():
            k = self.index[lab]
            for i, j in pos:
                pencil[k, i, j] = 1.0
                pencil[k, j, i] = 1.0
        self.pencil = pencil

    def label_of_correlator(self, subset, settings):
        w = [()] * self.scenario.n_parties
        for party, x in zip(subset, settings):
            w[party] = (x,)
        lab = word_canonical(tuple(w))
        if lab not in self.index:
            raise KeyError("correlator %r not covered by level %s"
                           % ((subset, settings), self.level))
        return lab

    def objective_vector(self, functional: BellFunctional):
        const, coefs = functional.correlator_form()
        c = np.zeros(len(self.labels))
        for (subset, xs), v in coefs.items():
            if abs(v) < 1e-14:
                continue
            c[self.index[self.label_of_correlator(subset, xs)]] += v
        return const, c

    def constraint_split(self, pinned: dict):
        """(F0', fixed objective offset matrix info, free pencil, free labels).

        pinned maps (subset, settings) -> value; the corresponding moment
        variables are substituted into F0.
        """
        F0 = np.eye(self.size)
        fixed = np.zeros(len(self.labels), dtype=bool)
        for (subset, xs), v in pinned.items():
            k = self.index[self.label_of_correlator(subset, xs)]
            F0 = F0 + float(v) * self.pencil[k]
            fixed[k] = True
        free_idx = np.flatnonzero(~fixed)
        return F0, free_idx


_STRUCT_CACHE: dict = {}


def moment_structure(scenario: Scenario, level: str) -> MomentStructure:
    level = canonical_level(level)
    key = (scenario.inputs, level)
    if key not in _STRUCT_CACHE:
        _STRUCT_CACHE[key] = MomentStructure(scenario, level)
    return _STRUCT_CACHE[key]


def default_level(scenario: Scenario) -> str:
    """Level 2 for the two-setting bipartite scenario, level 1 elsewhere.

    Level 1 already contains every one-letter product in the tripartite case,
    and in the three-setting bipartite scenario it is tight for the catalogue
    functionals while level 2 is two orders of magnitude slower.
    """
    if scenario.n_parties == 2 and scenario.inputs == (2, 2):
        return "2"
    return "1"


def npa_upper_bound(functional: BellFunctional, level: str | None = None,
                    gap_tol: float = 1e-9):
    """Certified upper bound on the quantum value of the functional.

    Returns dict with value (primal, accurate), upper (certificate side),
    level, and the optimising moment assignment by label.
    """
    sc = functional.scenario
    level = level or default_level(sc)
    ms = moment_structure(sc, level)
    const, c = ms.objective_vector(functional)
    res = solve_lmi(c, np.eye(ms.size), ms.pencil, gap_tol=gap_tol)
    moments = {lab: float(v) for lab, v in zip(ms.labels, res["y"])}
    return {
        "value": const + res["value"],
        "upper": const + res["upper"],
        "residual": res["residual"],
        "level": level,
        "moments": moments,
        "structure": ms,
    }


def npa_feasibility_margin(scenario: Scenario, pinned: dict,
                           level: str | None = None, gap_tol: float = 1e-7):
    """max s such that some moment matrix with the pinned correlators is >= s.

    Nonnegative margin (within tolerance) means the correlator data passes
    the relaxation; strictly negative excludes it from the quantum set.
    """
    level = level or default_level(scenario)
    ms = moment_structure(scenario, level)
    F0, free_idx = ms.constraint_split(pinned)
    m = ms.size
    Fs = np.concatenate([ms.pencil[free_idx], -np.eye(m)[None]], axis=0)
    c = np.zeros(len(free_idx) + 1)
    c[-1] = 1.0
    y0 = np.zeros(len(free_idx) + 1)
    y0[-1] = float(np.linalg.eigvalsh(F0)[0]) - 1.0
    res = solve_lmi(c, F0, Fs, y0=y0, gap_tol=gap_tol)
    return {
        "margin": res["value"],
        "margin_upper": res["upper"],
        "level": level,
        "moments_free": {ms.labels[k]: float(v)
                         for k, v in zip(free_idx, res["y"][:-1])},
    }


def npa_ray_max(scenario: Scenario, center: dict, direction: dict,
                level: str | None = None, gap_tol: float = 1e-9):
    """max r with pinned correlators center + r * direction inside the level.

    center/direction map (subset, settings) -> value; keys present only in
    center are pinned constants.  Returns the primal r (and certificate).
    """
    level = level or default_level(scenario)
    ms = moment_structure(scenario, level)
    keys = set(center) | set(direction)
    F0 = np.eye(ms.size)
    Fr = np.zeros((ms.size, ms.size))
    fixed = np.zeros(len(ms.labels), dtype=bool)
    for key in keys:
        k = ms.index[ms.label_of_correlator(*key)]
        fixed[k] = True
        F0 = F0 + float(center.get(key, 0.0)) * ms.pencil[k]
        Fr = Fr + float(direction.get(key, 0.0)) * ms.pencil[k]
    free_idx = np.flatnonzero(~fixed)
    Fs = np.concatenate([ms.pencil[free_idx], Fr[None]], axis=0)
    c = np.zeros(len(free_idx) + 1)
    c[-1] = 1.0
    y0 = np.zeros(len(free_idx) + 1)
    if _min_eig(F0) < 1e-9:
        raise SDPError("ray centre is not strictly inside the relaxation")
    res = solve_lmi(c, F0, Fs, y0=y0, gap_tol=gap_tol)
    return {
        "r": res["value"],
        "r_upper": res["upper"],
        "level": level,
    }


def _min_eig(F):
    return float(np.linalg.eigvalsh(F)[0])
