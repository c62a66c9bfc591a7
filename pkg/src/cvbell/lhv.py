"""Local-hidden-variable ensembles as first-class objects.

A deterministic strategy assigns one real value to every (site, setting)
observable; an ensemble is a convex mixture of strategies.  The constructive
results here show that any table of full n-site first-moment correlators
(plus arbitrary lower-order moments) is reproduced exactly by an equal-weight
ensemble: first moments alone can never witness nonlocality.  The Monte-Carlo
harness drives that point home empirically against the second-moment
inequality, which every strategy saturates and every mixture satisfies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product as _cartesian
from types import MappingProxyType
from typing import Iterator, Mapping, Sequence

import numpy as np

#: reproduction tolerance for constructed ensembles
CONSTRUCTION_TOL = 1e-12
#: slack allowed on the ratio before calling something a violation
RATIO_TOL = 1e-12

ObservableKey = tuple[int, int]  # (site, setting index)
LowerKey = tuple[tuple[int, ...], tuple[int, ...]]  # (sites, settings)


@dataclass(frozen=True)
class Scenario:
    """n sites, m settings per site."""

    sites: int
    settings: int

    def __post_init__(self) -> None:
        if self.sites < 1 or self.settings < 1:
            raise ValueError("scenario needs >= 1 site and >= 1 setting")

    def observable_keys(self) -> frozenset[ObservableKey]:
        return frozenset(
            (i, j) for i in range(self.sites) for j in range(self.settings)
        )


@dataclass(frozen=True)
class DeterministicStrategy:
    """One value per (site, setting): the hidden variable's full assignment."""

    values: Mapping[ObservableKey, float]

    def __post_init__(self) -> None:
        vals = {}
        for key, v in self.values.items():
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"value for {key} is not finite")
            vals[(int(key[0]), int(key[1]))] = v
        object.__setattr__(self, "values", MappingProxyType(vals))


@dataclass(frozen=True)
class LhvEnsemble:
    """Convex mixture of strategies over a fixed scenario."""

    scenario: Scenario
    entries: tuple[tuple[float, DeterministicStrategy], ...]

    def __post_init__(self) -> None:
        expected = self.scenario.observable_keys()
        total = 0.0
        cleaned = []
        for weight, strategy in self.entries:
            weight = float(weight)
            if weight < 0:
                raise ValueError("ensemble weights must be nonnegative")
            if strategy.values.keys() != expected:
                raise ValueError(
                    "strategy does not assign exactly one value per "
                    "(site, setting) of the scenario"
                )
            total += weight
            cleaned.append((weight, strategy))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"ensemble weights sum to {total!r}, not 1")
        object.__setattr__(self, "entries", tuple(cleaned))


def _full_strategy(scenario: Scenario, assigned: Mapping[ObservableKey, float]) -> DeterministicStrategy:
    values = {key: 0.0 for key in scenario.observable_keys()}
    values.update(assigned)
    return DeterministicStrategy(values)


@dataclass(frozen=True)
class CorrelationTable:
    """Target first-moment correlators: all m**n full ones, optional lower-order."""

    scenario: Scenario
    full: Mapping[tuple[int, ...], float]
    lower: Mapping[LowerKey, float]

    def __post_init__(self) -> None:
        n, m = self.scenario.sites, self.scenario.settings
        full = {}
        for combo, v in self.full.items():
            combo = tuple(int(j) for j in combo)
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"target for {combo} is not finite")
            full[combo] = v
        expected = set(_cartesian(range(m), repeat=n))
        if set(full) != expected:
            raise ValueError(
                f"full correlators must cover all {m}**{n} setting "
                "combinations exactly once"
            )
        lower = {}
        for (sites, settings), v in self.lower.items():
            sites = tuple(int(i) for i in sites)
            settings = tuple(int(j) for j in settings)
            v = float(v)
            if len(sites) != len(settings):
                raise ValueError("lower-order sites/settings length mismatch")
            if not 1 <= len(sites) < n:
                raise ValueError("lower-order targets must involve a proper subset")
            if list(sites) != sorted(set(sites)):
                raise ValueError("lower-order sites must be strictly increasing")
            if any(not 0 <= i < n for i in sites):
                raise ValueError(f"site index out of range in {sites}")
            if any(not 0 <= j < m for j in settings):
                raise ValueError(f"setting index out of range in {settings}")
            if not math.isfinite(v):
                raise ValueError("lower-order target is not finite")
            lower[(sites, settings)] = v
        object.__setattr__(self, "full", MappingProxyType(full))
        object.__setattr__(self, "lower", MappingProxyType(lower))


def evaluate(
    ensemble: LhvEnsemble, sites: Sequence[int], settings: Sequence[int]
) -> float:
    """Ensemble average of the product of the chosen observables."""
    sites = tuple(int(i) for i in sites)
    settings = tuple(int(j) for j in settings)
    if len(sites) != len(settings):
        raise ValueError("sites and settings must have equal length")
    scn = ensemble.scenario
    for i, j in zip(sites, settings):
        if not 0 <= i < scn.sites:
            raise ValueError(f"site {i} out of range")
        if not 0 <= j < scn.settings:
            raise ValueError(f"setting {j} out of range")
    total = 0.0
    for weight, strategy in ensemble.entries:
        prod = 1.0
        for i, j in zip(sites, settings):
            prod *= strategy.values[(i, j)]
        total += weight * prod
    return total


def evaluate_full(ensemble: LhvEnsemble, settings: Sequence[int]) -> float:
    return evaluate(ensemble, range(ensemble.scenario.sites), settings)


def _signed_root(product: float, arity: int) -> list[float]:
    """arity values of equal magnitude whose product is `product` (sign first)."""
    mag = abs(product) ** (1.0 / arity)
    return [math.copysign(mag, product)] + [mag] * (arity - 1)


def construct_two_party(table: CorrelationTable) -> LhvEnsemble:
    """The printed 2x2 construction: four full-correlator states (prefactor
    sqrt(K)), plus one correction slot per single-site observable when any
    lower-order target is present (then K = 8 and the prefactor is 2*sqrt(2)).

    Each full state puts sqrt(K) on one of Alice's observables and
    sqrt(K) * target on one of Bob's, so exactly one state feeds each of the
    four two-site correlators.
    """
    scn = table.scenario
    if (scn.sites, scn.settings) != (2, 2):
        raise ValueError("two-party construction needs exactly 2 sites x 2 settings")
    k_states = 8 if table.lower else 4
    root = math.sqrt(k_states)
    strategies = []
    for ja, jb in ((0, 0), (0, 1), (1, 0), (1, 1)):
        target = table.full[(ja, jb)]
        strategies.append(
            _full_strategy(scn, {(0, ja): root, (1, jb): root * target})
        )
    if table.lower:
        for site, j in ((0, 0), (0, 1), (1, 0), (1, 1)):
            key = ((site,), (j,))
            assigned: dict[ObservableKey, float] = {}
            if key in table.lower:
                residue = (
                    sum(s.values[(site, j)] for s in strategies) / k_states
                )
                assigned[(site, j)] = k_states * (table.lower[key] - residue)
            strategies.append(_full_strategy(scn, assigned))
    weight = 1.0 / k_states
    return LhvEnsemble(scn, tuple((weight, s) for s in strategies))


def construct_general(table: CorrelationTable) -> LhvEnsemble:
    """Equal-weight ensemble reproducing every targeted correlator exactly.

    One strategy per setting combination, assigning nonzero values only to
    the observables in that combination, with product K * target (equal
    magnitudes, sign carried by the first site).  Lower-order targets are
    then satisfied by one correction strategy each, processed in decreasing
    subset size so that later corrections never disturb moments already
    fixed; corrections touch no full n-site correlator at all.
    """
    scn = table.scenario
    n, m = scn.sites, scn.settings
    k_states = m**n + len(table.lower)
    strategies = []
    for combo in sorted(table.full):
        product = k_states * table.full[combo]
        vals = _signed_root(product, n)
        strategies.append(
            _full_strategy(scn, {(i, j): vals[i] for i, j in enumerate(combo)})
        )
    for key in sorted(table.lower, key=lambda sk: (-len(sk[0]), sk)):
        sites, settings = key
        residue = (
            sum(
                math.prod(s.values[(i, j)] for i, j in zip(sites, settings))
                for s in strategies
            )
            / k_states
        )
        product = k_states * (table.lower[key] - residue)
        vals = _signed_root(product, len(sites))
        strategies.append(
            _full_strategy(
                scn, {(i, j): v for (i, j), v in zip(zip(sites, settings), vals)}
            )
        )
    weight = 1.0 / k_states
    return LhvEnsemble(scn, tuple((weight, s) for s in strategies))


def sample_strategies(
    scenario: Scenario,
    count: int,
    distribution: str = "normal",
    seed: int = 0,
) -> Iterator[DeterministicStrategy]:
    """Reproducible stream of random strategies (PCG64 generator).

    distribution: "normal" draws each value from a standard normal (matching
    the unbounded continuous-variable setting); "uniform" draws from [-1, 1].
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if distribution not in ("normal", "uniform"):
        raise ValueError(f"unknown distribution {distribution!r}")
    rng = np.random.default_rng(seed)
    keys = sorted(scenario.observable_keys())
    for _ in range(count):
        if distribution == "normal":
            draws = rng.standard_normal(len(keys))
        else:
            draws = rng.uniform(-1.0, 1.0, len(keys))
        yield DeterministicStrategy(dict(zip(keys, (float(d) for d in draws))))


@dataclass(frozen=True)
class LhvCfrdReport:
    """Both sides of the second-moment inequality over an ensemble."""

    lhs: float
    rhs: float
    ratio: float
    satisfied: bool


def strategy_ladder(strategy: DeterministicStrategy, sites: int) -> complex:
    """prod_k (x_k + i y_k) with x = setting 0 and y = setting 1."""
    z = 1.0 + 0.0j
    for k in range(sites):
        z *= complex(strategy.values[(k, 0)], strategy.values[(k, 1)])
    return z


def cfrd_lhv_check(ensemble: LhvEnsemble) -> LhvCfrdReport:
    """Evaluate <Xtilde>^2 + <Ytilde>^2 against <prod (x^2 + y^2)>.

    The two settings per site are read as (X_k, Y_k).  A single strategy
    saturates the inequality exactly; mixtures satisfy it by convexity.
    """
    scn = ensemble.scenario
    if scn.settings != 2:
        raise ValueError("the check needs exactly 2 settings per site")
    mean_z = 0.0 + 0.0j
    rhs = 0.0
    for weight, strategy in ensemble.entries:
        z = strategy_ladder(strategy, scn.sites)
        mean_z += weight * z
        rhs += weight * abs(z) ** 2
    lhs = abs(mean_z) ** 2
    ratio = lhs / rhs if rhs > 0 else 0.0
    return LhvCfrdReport(
        lhs=lhs, rhs=rhs, ratio=ratio, satisfied=ratio <= 1.0 + RATIO_TOL
    )


def sample_cfrd_report(
    n: int,
    trials: int,
    seed: int = 0,
    distribution: str = "normal",
) -> dict:
    """Monte-Carlo falsification run: per-strategy ratios plus the pooled mixture."""
    scenario = Scenario(sites=n, settings=2)
    violations = 0
    max_ratio = 0.0
    mean_z = 0.0 + 0.0j
    rhs_total = 0.0
    for strategy in sample_strategies(scenario, trials, distribution, seed):
        report = cfrd_lhv_check(LhvEnsemble(scenario, ((1.0, strategy),)))
        if report.ratio > 1.0 + RATIO_TOL:
            violations += 1
        max_ratio = max(max_ratio, report.ratio)
        mean_z += strategy_ladder(strategy, n) / trials
        rhs_total += report.rhs / trials
    pooled = abs(mean_z) ** 2 / rhs_total if rhs_total > 0 else 0.0
    if pooled > 1.0 + RATIO_TOL:
        violations += 1
    return {
        "trials": trials,
        "n": n,
        "seed": seed,
        "distribution": distribution,
        "violations": violations,
        "max_ratio": max_ratio,
        "pooled_mixture_ratio": pooled,
    }


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def table_to_json(table: CorrelationTable) -> str:
    data = {
        "n": table.scenario.sites,
        "m": table.scenario.settings,
        "full": [
            {"settings": list(combo), "value": v}
            for combo, v in sorted(table.full.items())
        ],
        "lower": [
            {"sites": list(sites), "settings": list(settings), "value": v}
            for (sites, settings), v in sorted(table.lower.items())
        ],
    }
    return json.dumps(data, indent=2)


def table_from_json(text: str) -> CorrelationTable:
    """Parse a correlation-table document, raising with field diagnostics."""
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("table document must be a JSON object")
    for field in ("n", "m", "full"):
        if field not in data:
            raise ValueError(f"table document is missing required field '{field}'")
    scenario = Scenario(sites=int(data["n"]), settings=int(data["m"]))
    if not isinstance(data["full"], list):
        raise ValueError("field 'full' must be a list of correlator entries")
    full = {}
    for pos, entry in enumerate(data["full"]):
        if not isinstance(entry, dict) or "settings" not in entry or "value" not in entry:
            raise ValueError(
                f"full[{pos}] must be an object with 'settings' and 'value'"
            )
        full[tuple(entry["settings"])] = float(entry["value"])
    lower = {}
    for pos, entry in enumerate(data.get("lower", [])):
        if (
            not isinstance(entry, dict)
            or "sites" not in entry
            or "settings" not in entry
            or "value" not in entry
        ):
            raise ValueError(
                f"lower[{pos}] must be an object with 'sites', 'settings' and 'value'"
            )
        lower[(tuple(entry["sites"]), tuple(entry["settings"]))] = float(entry["value"])
    return CorrelationTable(scenario=scenario, full=full, lower=lower)


def ensemble_to_json_dict(ensemble: LhvEnsemble) -> dict:
    return {
        "n": ensemble.scenario.sites,
        "m": ensemble.scenario.settings,
        "entries": [
            {
                "weight": weight,
                "values": [
                    {"site": i, "setting": j, "value": v}
                    for (i, j), v in sorted(strategy.values.items())
                ],
            }
            for weight, strategy in ensemble.entries
        ],
    }
