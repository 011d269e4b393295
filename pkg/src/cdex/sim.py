"""Adversarial exchange simulation and random-coding success estimation.

One exchange: every client broadcasts once, compromised clients substitute
an arbitrary field value, every honest client decodes. The exhaustive
checker sweeps all compromised sets and substitution values up to a target
delta; the Monte Carlo estimator measures how often a fresh random encoding
verifies, against the theoretical floor 1 - degree_bound/q.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from statistics import NormalDist
from typing import Callable, Mapping, Optional, Sequence

from .analysis import capability
from .codec import (
    DEFAULT_DISTANCE_BUDGET,
    BudgetExceededError,
    EncodingMatrix,
    random_encoding,
    verify_error_correction,
)
from .decoder import DecodeResult, DecodeStatus, decode_all, honest_broadcast
from .field import FieldElement, PrimeField
from .model import CdeProblem

DEFAULT_ADVERSARY_BUDGET = 1_000_000


@dataclass(frozen=True)
class AdversaryPlan:
    """Which clients lie, and the false broadcast value each one sends."""

    substitutions: Mapping[int, FieldElement]

    @property
    def compromised(self) -> frozenset[int]:
        return frozenset(self.substitutions)

    def to_dict(self) -> dict:
        return {str(j): v.value for j, v in sorted(self.substitutions.items())}


@dataclass(frozen=True)
class ExchangeTrace:
    """Complete record of one simulated exchange.

    ``received`` differs from ``honest`` only on compromised positions (a
    substitution equal to the honest value is allowed and is simply a wasted
    corruption). ``results`` covers the non-compromised clients only; the
    verdict is AllRecovered when each of them decodes uniquely to the truth.
    """

    encoding: EncodingMatrix
    packets: tuple[FieldElement, ...]
    honest: tuple[FieldElement, ...]
    received: tuple[FieldElement, ...]
    plan: AdversaryPlan
    results: Mapping[int, DecodeResult]
    all_recovered: bool
    violations: tuple[int, ...]


def run_exchange(
    e: EncodingMatrix,
    x: Sequence,
    plan: AdversaryPlan,
    budget: int = DEFAULT_DISTANCE_BUDGET,
) -> ExchangeTrace:
    """Broadcast, corrupt, and decode at every non-compromised client."""
    p = e.problem
    f = e.field
    packets = tuple(f.element(v) for v in x)
    if len(packets) != p.k:
        raise ValueError(f"packet vector has length {len(packets)}, expected {p.k}")
    for j in plan.substitutions:
        if not 1 <= j <= p.n:
            raise ValueError(f"compromised client {j} outside [1, {p.n}]")
    honest = tuple(honest_broadcast(e, packets))
    received = tuple(
        f.element(plan.substitutions[j]) if j in plan.substitutions else honest[j - 1]
        for j in range(1, p.n + 1)
    )
    results: dict[int, DecodeResult] = {}
    violations = []
    for j in range(1, p.n + 1):
        if j in plan.substitutions:
            continue
        held = {i: packets[i - 1] for i in p.holdings[j - 1]}
        try:
            res = decode_all(e, j, received, held, budget)
        except BudgetExceededError:
            res = DecodeResult(
                client=j,
                recovered={},
                status=DecodeStatus.FAILED,
                distance=None,
                tie_count=0,
            )
        results[j] = res
        if res.status is not DecodeStatus.UNIQUE or res.estimate != packets:
            violations.append(j)
    return ExchangeTrace(
        encoding=e,
        packets=packets,
        honest=honest,
        received=received,
        plan=plan,
        results=results,
        all_recovered=not violations,
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class AdversaryCheckResult:
    """Outcome of the exhaustive sweep over adversary plans."""

    ok: bool
    plans_checked: int
    witness_plan: Optional[AdversaryPlan]
    witness_clients: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "plans_checked": self.plans_checked,
            "witness_plan": None if self.witness_plan is None else self.witness_plan.to_dict(),
            "witness_clients": list(self.witness_clients),
        }


def exhaustive_adversary_check(
    e: EncodingMatrix,
    delta: int,
    x: Sequence,
    budget: int = DEFAULT_ADVERSARY_BUDGET,
    decode_budget: int = DEFAULT_DISTANCE_BUDGET,
    on_trace: Optional[Callable[[ExchangeTrace], None]] = None,
) -> AdversaryCheckResult:
    """Try every compromised set of size <= delta with every value combination.

    Returns ok=True iff all traces end AllRecovered; otherwise carries the
    first failing plan and the clients it broke as a concrete witness.
    ``on_trace`` observes every executed trace (for logging).
    """
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    p = e.problem
    q = e.field.q
    total = sum(comb(p.n, w) * q**w for w in range(0, min(delta, p.n) + 1))
    if total > budget:
        raise BudgetExceededError(total, budget, "adversary plan sweep")
    worst_decode = max(q ** len(p.missing(j)) for j in range(1, p.n + 1))
    if worst_decode > decode_budget:
        # refuse upfront rather than mislabel budget-starved decodes as
        # adversary wins
        raise BudgetExceededError(worst_decode, decode_budget, "decode enumeration")
    checked = 0
    for w in range(0, min(delta, p.n) + 1):
        for clients in combinations(range(1, p.n + 1), w):
            for values in product(range(q), repeat=w):
                plan = AdversaryPlan(
                    substitutions={
                        j: e.field.element(v) for j, v in zip(clients, values)
                    }
                )
                trace = run_exchange(e, x, plan, decode_budget)
                checked += 1
                if on_trace is not None:
                    on_trace(trace)
                if not trace.all_recovered:
                    return AdversaryCheckResult(
                        ok=False,
                        plans_checked=checked,
                        witness_plan=plan,
                        witness_clients=trace.violations,
                    )
    return AdversaryCheckResult(
        ok=True, plans_checked=checked, witness_plan=None, witness_clients=()
    )


@dataclass(frozen=True)
class MonteCarloStats:
    """Empirical verification rate of random encodings, with its Wilson CI
    and the theoretical floor from the degree bound."""

    q: int
    delta: int
    trials: int
    passes: int
    pass_fraction: float
    confidence: float
    ci_low: float
    ci_high: float
    degree_bound: int
    theoretical_floor: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "delta": self.delta,
            "trials": self.trials,
            "passes": self.passes,
            "pass_fraction": self.pass_fraction,
            "confidence": self.confidence,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "degree_bound": self.degree_bound,
            "theoretical_floor": self.theoretical_floor,
            "seed": self.seed,
        }


def _wilson_interval(passes: int, trials: int, confidence: float) -> tuple[float, float]:
    z = NormalDist().inv_cdf(1 - (1 - confidence) / 2)
    phat = passes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (
        z
        * ((phat * (1 - phat) / trials + z * z / (4 * trials * trials)) ** 0.5)
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)


def monte_carlo_success_rate(
    p: CdeProblem,
    f: PrimeField,
    delta: int,
    trials: int,
    seed: int,
    confidence: float = 0.95,
    budget: int = DEFAULT_DISTANCE_BUDGET,
) -> MonteCarloStats:
    """Fraction of seeded random encodings that verify at the given delta.

    Trial t uses the encoding seeded with ``seed + t``, so campaigns are
    reproducible and individual trials can be replayed. The theoretical
    floor max(0, 1 - degree_bound/q) applies whenever delta does not exceed
    the problem's capability; beyond it no encoding can pass, so the floor
    is reported as 0.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    report = capability(p)
    passes = 0
    for t in range(trials):
        e = random_encoding(p, f, seed + t)
        if verify_error_correction(e, delta, budget).passed:
            passes += 1
    floor = max(0.0, 1.0 - report.degree_bound / f.q) if delta <= report.delta else 0.0
    low, high = _wilson_interval(passes, trials, confidence)
    return MonteCarloStats(
        q=f.q,
        delta=delta,
        trials=trials,
        passes=passes,
        pass_fraction=passes / trials,
        confidence=confidence,
        ci_low=low,
        ci_high=high,
        degree_bound=report.degree_bound,
        theoretical_floor=floor,
        seed=seed,
    )
