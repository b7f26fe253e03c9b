"""Data model for small Bell scenarios with binary outcomes.

A scenario has n parties (n = 2 or 3), each holding m_i measurement settings
(1 <= m_i <= 3) with two outcomes labelled 0 and 1 (eigenvalues +1 and -1).
A behaviour is the conditional distribution P(a|x) stored as an array of shape
(m_0, ..., m_{n-1}, 2, ..., 2): inputs first, then outputs, party 0 slowest.
Flattened vectors use C order on that shape; serialization nests lists in the
same order.  That index contract is relied on by every other module.

The correlator representation stores one expectation value per non-empty party
subset S and setting choice x_S:  <prod_{i in S} O^i_{x_i}> where O^i_x is the
+-1 valued observable of party i at setting x.  For binary outcomes the two
representations are affinely equivalent:

    P(a|x) = 2^-n * sum_S (-1)^(sum_{i in S} a_i) * c_S(x_S)     (c_empty = 1)

Conversion routines keep exact arithmetic (Fraction / Quad) when the input
table is exact, so catalog points built from radicals hit their zero cells
exactly rather than to rounding error.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import NamedTuple

import numpy as np

from .exactnum import Quad

POSITIVITY_TOL = 1e-12
NORMALISATION_TOL = 1e-12
NS_TOL = 1e-9


class NegativeCellError(ValueError):
    """Correlator table maps to a signed measure: some cell is negative.

    ``cells`` lists (outputs, inputs, value) for every offending cell; nothing
    is clamped.
    """

    def __init__(self, cells):
        self.cells = cells
        head = ", ".join("P(%s|%s)=%.3e" % (
            "".join(map(str, a)), "".join(map(str, x)), float(v))
            for a, x, v in cells[:4])
        more = "" if len(cells) <= 4 else " and %d more" % (len(cells) - 4)
        super().__init__("negative probability cells: %s%s" % (head, more))


class SignallingError(ValueError):
    def __init__(self, violation):
        self.violation = violation
        super().__init__("behaviour signals: max marginal mismatch %.3e" % violation)


@dataclass(frozen=True)
class Scenario:
    """n-party binary-outcome scenario; ``inputs[i]`` is party i's setting count.

    ``outputs`` may be passed for explicitness but every party must have
    exactly two outcomes; other outcome counts are rejected.
    """

    inputs: tuple
    outputs: tuple = None

    def __post_init__(self):
        if not 2 <= len(self.inputs) <= 3:
            raise ValueError("supported party counts are 2 and 3, got %d" % len(self.inputs))
        if any(not 1 <= m <= 3 for m in self.inputs):
            raise ValueError("settings per party must be in 1..3, got %r" % (self.inputs,))
        object.__setattr__(self, "inputs", tuple(int(m) for m in self.inputs))
        if self.outputs is None:
            object.__setattr__(self, "outputs", (2,) * len(self.inputs))
        else:
            object.__setattr__(self, "outputs", tuple(int(d) for d in self.outputs))
            if len(self.outputs) != len(self.inputs):
                raise ValueError("outputs list must match the party count")
            if any(d != 2 for d in self.outputs):
                raise ValueError("only binary outcomes are supported, got %r" % (self.outputs,))

    @property
    def n_parties(self) -> int:
        return len(self.inputs)

    @property
    def shape(self) -> tuple:
        return self.inputs + (2,) * self.n_parties

    @property
    def n_cells(self) -> int:
        return prod(self.shape)

    @property
    def n_input_tuples(self) -> int:
        return prod(self.inputs)

    def input_tuples(self):
        return itertools.product(*[range(m) for m in self.inputs])

    def output_tuples(self):
        return itertools.product((0, 1), repeat=self.n_parties)

    def party_subsets(self):
        """Non-empty subsets of parties, smallest first, as sorted tuples."""
        n = self.n_parties
        for size in range(1, n + 1):
            yield from itertools.combinations(range(n), size)

    def subset_settings(self, subset):
        return itertools.product(*[range(self.inputs[i]) for i in subset])

    def correlator_keys(self):
        for subset in self.party_subsets():
            for xs in self.subset_settings(subset):
                yield (subset, xs)

    @property
    def ns_dim(self) -> int:
        """Affine dimension of the no-signalling polytope (= # correlator keys)."""
        return prod(m + 1 for m in self.inputs) - 1


CHSH_SCENARIO = Scenario((2, 2))


class Behaviour:
    """Validated conditional distribution P(a|x) for a scenario."""

    __slots__ = ("scenario", "p")

    def __init__(self, scenario: Scenario, p, check: bool = True):
        self.scenario = scenario
        arr = np.asarray(p, dtype=float).reshape(scenario.shape).copy()
        arr.setflags(write=False)
        self.p = arr
        if check:
            if np.min(arr) < -POSITIVITY_TOL:
                bad = np.argwhere(arr < -POSITIVITY_TOL)
                n = scenario.n_parties
                cells = [(tuple(idx[n:]), tuple(idx[:n]), arr[tuple(idx)]) for idx in bad]
                raise NegativeCellError(cells)
            sums = arr.reshape(scenario.inputs + (2 ** scenario.n_parties,)).sum(axis=-1)
            if np.max(np.abs(sums - 1.0)) > NORMALISATION_TOL:
                raise ValueError("behaviour not normalised: max |sum-1| = %.3e"
                                 % np.max(np.abs(sums - 1.0)))

    def flat(self) -> np.ndarray:
        return self.p.reshape(-1)

    def cell(self, outputs, inputs) -> float:
        return float(self.p[tuple(inputs) + tuple(outputs)])

    def tolist(self):
        return self.p.tolist()

    def __eq__(self, other):
        return (isinstance(other, Behaviour)
                and self.scenario == other.scenario
                and np.array_equal(self.p, other.p))

    def allclose(self, other, tol=1e-9) -> bool:
        return (self.scenario == other.scenario
                and float(np.max(np.abs(self.p - other.p))) <= tol)

    def __repr__(self):
        return "Behaviour(%s)" % (self.scenario.inputs,)


class CorrelatorTable:
    """Complete table of marginal and joint correlators for a scenario.

    ``values`` maps (party_subset, settings) -> number.  Values may be floats
    or exact Fractions/Quads; arithmetic on them follows the value type.
    """

    __slots__ = ("scenario", "values")

    def __init__(self, scenario: Scenario, values: dict):
        expected = set(scenario.correlator_keys())
        got = set(values)
        if got != expected:
            missing = sorted(expected - got)[:3]
            extra = sorted(got - expected)[:3]
            raise ValueError("correlator table keys mismatch (missing %s, extra %s)"
                             % (missing, extra))
        self.scenario = scenario
        self.values = dict(values)

    @classmethod
    def bipartite(cls, a_marginals, b_marginals, correlators, scenario=None):
        """Build from <A_x>, <B_y> sequences and an m_A x m_B correlator matrix."""
        ma, mb = len(a_marginals), len(b_marginals)
        scenario = scenario or Scenario((ma, mb))
        vals = {}
        for x in range(ma):
            vals[((0,), (x,))] = a_marginals[x]
        for y in range(mb):
            vals[((1,), (y,))] = b_marginals[y]
        for x in range(ma):
            for y in range(mb):
                vals[((0, 1), (x, y))] = correlators[x][y]
        return cls(scenario, vals)

    @classmethod
    def tripartite(cls, one_body, two_body, three_body, scenario=None):
        """one_body: 3 sequences; two_body: dict {(i,j): matrix}; three_body: nested [x][y][z]."""
        ms = tuple(len(v) for v in one_body)
        scenario = scenario or Scenario(ms)
        vals = {}
        for i in range(3):
            for x in range(ms[i]):
                vals[((i,), (x,))] = one_body[i][x]
        for (i, j), mat in two_body.items():
            for xi in range(ms[i]):
                for xj in range(ms[j]):
                    vals[((i, j), (xi, xj))] = mat[xi][xj]
        for x in range(ms[0]):
            for y in range(ms[1]):
                for z in range(ms[2]):
                    vals[((0, 1, 2), (x, y, z))] = three_body[x][y][z]
        return cls(scenario, vals)

    def get(self, subset, settings):
        return self.values[(tuple(subset), tuple(settings))]

    def is_exact(self) -> bool:
        return all(isinstance(v, (Fraction, Quad)) or type(v) is int
                   for v in self.values.values())

    def as_float(self) -> dict:
        return {k: float(v) for k, v in self.values.items()}

    def max_abs_marginal(self) -> float:
        return max((abs(float(v)) for (subset, _), v in self.values.items()
                    if len(subset) == 1), default=0.0)


def corr_to_prob(table: CorrelatorTable, check: bool = True) -> Behaviour:
    """Invert the correlator representation; exact inputs stay exact per cell.

    Raises NegativeCellError listing every cell below -1e-12 (exact inputs:
    below 0) instead of clamping.
    """
    sc = table.scenario
    n = sc.n_parties
    exact = table.is_exact()
    one = Fraction(1) if exact else 1.0
    denom = 2 ** n
    arr = np.zeros(sc.shape)
    bad = []
    for x in sc.input_tuples():
        for a in sc.output_tuples():
            cell = one
            for subset in sc.party_subsets():
                xs = tuple(x[i] for i in subset)
                sign = -1 if sum(a[i] for i in subset) % 2 else 1
                v = table.values[(subset, xs)]
                cell = cell + (v if sign > 0 else -v)
            cell = cell / denom
            fcell = float(cell)
            if exact:
                if cell < 0:
                    bad.append((a, x, fcell))
            elif fcell < -POSITIVITY_TOL:
                bad.append((a, x, fcell))
            arr[x + a] = fcell
    if bad and check:
        raise NegativeCellError(bad)
    return Behaviour(sc, arr, check=check and not bad)


class NoSignallingReport(NamedTuple):
    ok: bool
    max_violation: float


def check_no_signalling(p: Behaviour, tol: float = NS_TOL) -> NoSignallingReport:
    """Report the worst marginal mismatch over single-party marginalisations."""
    sc = p.scenario
    n = sc.n_parties
    worst = 0.0
    for j in range(n):
        # sum out party j's outcome; resulting table must not depend on x_j
        marg = p.p.sum(axis=n + j)
        marg = np.moveaxis(marg, j, 0)  # x_j first
        worst = max(worst, float(np.max(np.abs(marg - marg[0]))) if sc.inputs[j] > 1 else 0.0)
    return NoSignallingReport(worst <= tol, worst)


def prob_to_corr(p: Behaviour, tol: float = NS_TOL) -> CorrelatorTable:
    """Extract the correlator table; rejects signalling behaviours."""
    violation = check_no_signalling(p, tol).max_violation
    if violation > tol:
        raise SignallingError(violation)
    sc = p.scenario
    n = sc.n_parties
    vals = {}
    for subset in sc.party_subsets():
        others = [i for i in range(n) if i not in subset]
        for xs in sc.subset_settings(subset):
            total = 0.0
            count = 0
            for xo in itertools.product(*[range(sc.inputs[i]) for i in others]):
                x = [0] * n
                for i, v in zip(subset, xs):
                    x[i] = v
                for i, v in zip(others, xo):
                    x[i] = v
                block = p.p[tuple(x)]
                val = 0.0
                for a in sc.output_tuples():
                    sign = -1 if sum(a[i] for i in subset) % 2 else 1
                    val += sign * block[a]
                total += val
                count += 1
            vals[(subset, xs)] = total / count
    return CorrelatorTable(sc, vals)


def corr_direction(scenario: Scenario, deltas: dict) -> np.ndarray:
    """Probability-basis direction for a correlator-coordinate displacement.

    ``deltas`` maps (subset, settings) to the displacement of that correlator;
    missing keys move by zero.  This is the linear part of corr_to_prob.
    """
    n = scenario.n_parties
    arr = np.zeros(scenario.shape)
    denom = 2 ** n
    for (subset, xs), dv in deltas.items():
        subset, xs = tuple(subset), tuple(xs)
        others = [i for i in range(n) if i not in subset]
        for xo in itertools.product(*[range(scenario.inputs[i]) for i in others]):
            x = [0] * n
            for i, v in zip(subset, xs):
                x[i] = v
            for i, v in zip(others, xo):
                x[i] = v
            for a in scenario.output_tuples():
                sign = -1 if sum(a[i] for i in subset) % 2 else 1
                arr[tuple(x) + a] += sign * float(dv) / denom
    return arr.reshape(-1)


class BellFunctional:
    """Linear functional on behaviours, stored in the probability basis."""

    __slots__ = ("scenario", "coeffs", "name", "exact_coeffs", "_corr_form")

    def __init__(self, scenario: Scenario, coeffs, name: str = "", exact_coeffs=None):
        self.scenario = scenario
        arr = np.asarray(coeffs, dtype=float).reshape(scenario.shape).copy()
        arr.setflags(write=False)
        self.coeffs = arr
        self.name = name
        self.exact_coeffs = exact_coeffs  # flat object array (Fraction/Quad) or None
        self._corr_form = None

    @classmethod
    def from_correlators(cls, table: CorrelatorTable, constant=0.0, name: str = ""):
        """Functional sum_key coef * <correlator> + constant.

        A coefficient on subset S is spread uniformly over the settings of the
        parties outside S (divide by their setting-tuple count, not 2^n: this
        is the dual map, not the linear part of corr_to_prob).  The value then
        matches on every no-signalling behaviour.
        """
        sc = table.scenario
        n = sc.n_parties
        exact = table.is_exact()
        if exact:
            earr = np.full(sc.n_cells, Fraction(0), dtype=object).reshape(sc.shape)
        arr = np.zeros(sc.shape)
        for (subset, xs), coef in table.values.items():
            others = [i for i in range(n) if i not in subset]
            n_ext = prod(sc.inputs[i] for i in others) if others else 1
            for xo in itertools.product(*[range(sc.inputs[i]) for i in others]):
                x = [0] * n
                for i, v in zip(subset, xs):
                    x[i] = v
                for i, v in zip(others, xo):
                    x[i] = v
                for a in sc.output_tuples():
                    sign = -1 if sum(a[i] for i in subset) % 2 else 1
                    arr[tuple(x) + a] += sign * float(coef) / n_ext
                    if exact:
                        cell = tuple(x) + a
                        term = coef * Fraction(sign, n_ext)
                        earr[cell] = earr[cell] + term
        if constant:
            arr = arr + float(constant) / sc.n_input_tuples
            if exact:
                if isinstance(constant, float):
                    constant = Fraction(constant).limit_denominator(10 ** 12)
                earr = earr + constant * Fraction(1, sc.n_input_tuples)
        return cls(sc, arr, name=name,
                   exact_coeffs=earr.reshape(-1) if exact else None)

    def value(self, p: Behaviour) -> float:
        return float(np.dot(self.coeffs.reshape(-1), p.flat()))

    def value_flat(self, flat: np.ndarray) -> float:
        return float(np.dot(self.coeffs.reshape(-1), flat))

    def flat(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def correlator_form(self):
        """(constant, {(subset, settings): coefficient}) with exact value match.

        The decomposition is the Fourier expansion over +-1 outcome variables
        and is unique once the no-signalling spread convention is fixed.
        """
        if self._corr_form is not None:
            return self._corr_form
        sc = self.scenario
        n = sc.n_parties
        coefs = {}
        const_total = float(self.coeffs.sum()) / 2 ** n
        for subset in sc.party_subsets():
            for xs in sc.subset_settings(subset):
                others = [i for i in range(n) if i not in subset]
                tot = 0.0
                for xo in itertools.product(*[range(sc.inputs[i]) for i in others]):
                    x = [0] * n
                    for i, v in zip(subset, xs):
                        x[i] = v
                    for i, v in zip(others, xo):
                        x[i] = v
                    for a in sc.output_tuples():
                        sign = -1 if sum(a[i] for i in subset) % 2 else 1
                        tot += sign * self.coeffs[tuple(x) + a]
                coefs[(subset, xs)] = tot / 2 ** n
        self._corr_form = (const_total, coefs)
        return self._corr_form

    def __repr__(self):
        return "BellFunctional(%s%s)" % (self.scenario.inputs,
                                         ", %r" % self.name if self.name else "")


def bell_value(functional: BellFunctional, p: Behaviour) -> float:
    """Inner product in the probability basis."""
    if functional.scenario != p.scenario:
        raise ValueError("scenario mismatch")
    return functional.value(p)


@dataclass(frozen=True)
class DeterministicPoint:
    """Local deterministic strategy: assignments[i][x] is party i's output."""

    scenario: Scenario
    assignments: tuple
    index: int

    def behaviour(self) -> Behaviour:
        arr = np.zeros(self.scenario.shape)
        for x in self.scenario.input_tuples():
            a = tuple(self.assignments[i][x[i]] for i in range(self.scenario.n_parties))
            arr[x + a] = 1.0
        return Behaviour(self.scenario, arr)


def deterministic_strategies(scenario: Scenario):
    """All local deterministic strategies, lexicographic, party 0 slowest."""
    per_party = []
    for m in scenario.inputs:
        per_party.append([tuple(bits) for bits in itertools.product((0, 1), repeat=m)])
    points = []
    for idx, combo in enumerate(itertools.product(*per_party)):
        points.append(DeterministicPoint(scenario, tuple(combo), idx))
    return points


def enumerate_deterministic(scenario: Scenario):
    """All local deterministic behaviours, lexicographic, party 0 slowest."""
    return [d.behaviour() for d in deterministic_strategies(scenario)]


def deterministic_matrix(scenario: Scenario) -> np.ndarray:
    """Rows are flattened deterministic behaviours (cached per scenario)."""
    key = scenario.inputs
    if key not in _DET_CACHE:
        pts = deterministic_strategies(scenario)
        _DET_CACHE[key] = np.array([d.behaviour().flat() for d in pts])
    return _DET_CACHE[key]


_DET_CACHE: dict = {}


def _nested(arr: np.ndarray):
    return np.asarray(arr, dtype=float).tolist()


def scenario_to_json(scenario: Scenario) -> dict:
    return {
        "parties": scenario.n_parties,
        "inputs": list(scenario.inputs),
        "outputs": list(scenario.outputs),
    }


def scenario_from_json(obj: dict) -> Scenario:
    sc = Scenario(tuple(obj["inputs"]), tuple(obj.get("outputs", (2,) * len(obj["inputs"]))))
    if "parties" in obj and int(obj["parties"]) != sc.n_parties:
        raise ValueError("party count disagrees with the inputs list")
    return sc


def behaviour_to_json(p: Behaviour) -> dict:
    return {"scenario": scenario_to_json(p.scenario), "p": _nested(p.p)}


def behaviour_from_json(obj: dict) -> Behaviour:
    sc = scenario_from_json(obj["scenario"])
    return Behaviour(sc, np.array(obj["p"], dtype=float))


def correlator_table_to_json(table: CorrelatorTable) -> dict:
    """2x2-setting bipartite tables serialize as a 3x3 layout.

    Row 0 holds [1, <B_0>, <B_1>], later rows hold [<A_x>, <A_x B_0>, ...];
    other scenarios get a flat {"subset|settings": value} map.
    """
    sc = table.scenario
    out = {"scenario": scenario_to_json(sc)}
    if sc.inputs == (2, 2):
        vals = table.as_float()
        layout = [[1.0] + [vals[((1,), (y,))] for y in range(2)]]
        for x in range(2):
            layout.append([vals[((0,), (x,))]] + [vals[((0, 1), (x, y))] for y in range(2)])
        out["layout"] = layout
    else:
        vals = table.as_float()
        out["values"] = {
            ",".join(map(str, subset)) + "|" + ",".join(map(str, xs)): v
            for (subset, xs), v in sorted(vals.items())
        }
    return out


def correlator_table_from_json(obj: dict) -> CorrelatorTable:
    sc = scenario_from_json(obj["scenario"])
    if "layout" in obj:
        if sc.inputs != (2, 2):
            raise ValueError("3x3 layout only describes the two-party two-setting scenario")
        layout = obj["layout"]
        return CorrelatorTable.bipartite(
            a_marginals=[layout[1][0], layout[2][0]],
            b_marginals=[layout[0][1], layout[0][2]],
            correlators=[[layout[1][1], layout[1][2]], [layout[2][1], layout[2][2]]],
            scenario=sc,
        )
    vals = {}
    for key, v in obj["values"].items():
        subset_s, xs_s = key.split("|")
        subset = tuple(int(t) for t in subset_s.split(","))
        xs = tuple(int(t) for t in xs_s.split(","))
        vals[(subset, xs)] = v
    return CorrelatorTable(sc, vals)


def functional_to_json(fn: BellFunctional) -> dict:
    out = {
        "scenario": scenario_to_json(fn.scenario),
        "coefficients": _nested(fn.coeffs),
    }
    if fn.name:
        out["name"] = fn.name
    return out


def functional_from_json(obj: dict) -> BellFunctional:
    sc = scenario_from_json(obj["scenario"])
    if "coefficients" in obj:
        return BellFunctional(sc, np.array(obj["coefficients"], dtype=float),
                              name=obj.get("name", ""))
    if "correlators" in obj:
        table = correlator_table_from_json({"scenario": obj["scenario"], **obj["correlators"]})
        return BellFunctional.from_correlators(table, constant=obj.get("constant", 0.0),
                                               name=obj.get("name", ""))
    raise ValueError("functional JSON needs 'coefficients' or 'correlators'")


def load_json_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
