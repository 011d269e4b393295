"""Rendering of analysis, verification, decode, and simulation results.

Each result type gets three surfaces: a human-readable text block built from
whitespace-delimited tables, a stable JSON document ("structured" format),
and an optional matplotlib figure written to a file next to the delimited
output. Figures are rendered with the Agg backend so everything works
headless.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .analysis import CapabilityReport
from .codec import VerificationReport
from .decoder import DecodeResult
from .sim import AdversaryCheckResult, MonteCarloStats


def to_structured_text(kind: str, payload: dict) -> str:
    return json.dumps({"kind": kind, **payload}, indent=2) + "\n"


def capability_text(r: CapabilityReport) -> str:
    lines = ["client  rho"]
    for j, rho_j in enumerate(r.rho_per_client, start=1):
        mark = "  (holds everything; rho=0 by convention)" if j in r.trivial_clients else ""
        lines.append(f"{j:>6}  {rho_j}{mark}")
    lines.append(f"diameter rho      = {r.rho}")
    lines.append(f"capability delta  = {r.delta}   (floor((n - rho) / 2))")
    lines.append(f"degree bound      = {r.degree_bound}")
    if len(r.trivial_clients) == len(r.rho_per_client):
        lines.append("note: every client already holds all packets; no decoding is needed")
    return "\n".join(lines) + "\n"


def verification_text(r: VerificationReport) -> str:
    lines = [
        f"target delta      = {r.delta}",
        f"required distance = {r.required_distance}",
        "client  distance  ok",
    ]
    for j, d in sorted(r.distances.items()):
        ok = "yes" if d >= r.required_distance else "NO"
        lines.append(f"{j:>6}  {d:>8}  {ok}")
    for j in r.trivial_clients:
        lines.append(f"{j:>6}  {'-':>8}  n/a (holds everything)")
    lines.append(f"result            = {'PASS' if r.passed else 'FAIL'}")
    if r.binding_client is not None:
        lines.append(
            f"binding client    = {r.binding_client} "
            f"(distance {r.distances[r.binding_client]})"
        )
    return "\n".join(lines) + "\n"


def decode_text(r: DecodeResult) -> str:
    lines = [
        f"client   = {r.client}",
        f"status   = {r.status.value}",
        f"distance = {r.distance}",
        f"ties     = {r.tie_count}",
    ]
    if r.recovered:
        lines.append("packet  value")
        for i, v in sorted(r.recovered.items()):
            lines.append(f"{i:>6}  {v.value}")
    else:
        lines.append("nothing to recover")
    if r.estimate is not None:
        lines.append("estimate = " + " ".join(str(v.value) for v in r.estimate))
    return "\n".join(lines) + "\n"


def adversary_text(r: AdversaryCheckResult, delta: int) -> str:
    lines = [
        f"exhaustive sweep up to {delta} compromised client(s)",
        f"plans checked = {r.plans_checked}",
        f"result        = {'all recovered' if r.ok else 'VIOLATION FOUND'}",
    ]
    if not r.ok and r.witness_plan is not None:
        subs = ", ".join(
            f"client {j} -> {v}" for j, v in sorted(r.witness_plan.to_dict().items())
        )
        lines.append(f"witness plan  = {subs or '(no substitutions)'}")
        lines.append(f"broken client(s) = {list(r.witness_clients)}")
    return "\n".join(lines) + "\n"


def monte_carlo_text(r: MonteCarloStats) -> str:
    lines = [
        f"random encodings over GF({r.q}), delta = {r.delta}",
        f"trials        = {r.trials}  (base seed {r.seed})",
        f"passes        = {r.passes}",
        f"pass fraction = {r.pass_fraction:.4f}",
        f"{int(r.confidence * 100)}% CI       = [{r.ci_low:.4f}, {r.ci_high:.4f}]",
        f"degree bound  = {r.degree_bound}",
        f"floor 1 - d/q = {r.theoretical_floor:.4f}",
    ]
    if r.theoretical_floor == 0.0:
        lines.append("note: the bound is vacuous here (field not larger than the degree bound)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def save_capability_figure(r: CapabilityReport, path: Union[str, Path]) -> None:
    plt = _pyplot()
    clients = list(range(1, len(r.rho_per_client) + 1))
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(clients, r.rho_per_client, color="#4878cf")
    ax.axhline(r.rho, color="#d65f5f", linestyle="--", label=f"diameter rho = {r.rho}")
    ax.set_xlabel("client")
    ax.set_ylabel("per-client diameter")
    ax.set_xticks(clients)
    ax.set_title(f"capability delta = {r.delta}")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_verification_figure(r: VerificationReport, path: Union[str, Path]) -> None:
    plt = _pyplot()
    clients = sorted(r.distances)
    dists = [r.distances[j] for j in clients]
    colors = ["#6acc65" if d >= r.required_distance else "#d65f5f" for d in dists]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(clients, dists, color=colors)
    ax.axhline(
        r.required_distance,
        color="black",
        linestyle="--",
        label=f"required 2*delta+1 = {r.required_distance}",
    )
    ax.set_xlabel("client")
    ax.set_ylabel("local minimum distance")
    ax.set_xticks(clients)
    ax.set_title("verification " + ("PASS" if r.passed else "FAIL"))
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_monte_carlo_figure(r: MonteCarloStats, path: Union[str, Path]) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar([0], [r.pass_fraction], width=0.5, color="#4878cf", label="empirical")
    ax.errorbar(
        [0],
        [r.pass_fraction],
        yerr=[[r.pass_fraction - r.ci_low], [r.ci_high - r.pass_fraction]],
        fmt="none",
        ecolor="black",
        capsize=6,
    )
    ax.axhline(
        r.theoretical_floor,
        color="#d65f5f",
        linestyle="--",
        label=f"floor 1 - d/q = {r.theoretical_floor:.3f}",
    )
    ax.set_xticks([0])
    ax.set_xticklabels([f"GF({r.q}), {r.trials} trials"])
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("verified fraction")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
