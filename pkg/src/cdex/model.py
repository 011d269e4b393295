"""Cooperative data exchange instances and their incidence support structure.

A problem is ``n`` clients exchanging ``k`` packets over a shared broadcast
channel, each client initially holding the packet subset ``holdings[j]``.
Packet and client indices are 1-based in every public interface and file
format; internals convert to 0-based where convenient.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union


class PacketIndexError(ValueError):
    """A holding refers to a packet index outside [1, k]."""


class UncoveredPacketError(ValueError):
    """Some packets are held by no client at all."""

    def __init__(self, missing: Sequence[int]):
        self.missing = tuple(missing)
        super().__init__(f"no client holds packet(s) {list(self.missing)}")


@dataclass(frozen=True)
class CdeProblem:
    """A data-exchange instance: k packets, n clients, per-client holdings.

    ``holdings[j-1]`` is the sorted tuple of packet indices client j starts
    with. Duplicate indices in the input are deduplicated with a warning;
    an empty holding set is allowed (that client can only broadcast 0).
    """

    k: int
    n: int
    holdings: tuple[tuple[int, ...], ...]

    def __init__(self, k: int, n: int, holdings: Iterable[Iterable[int]]):
        if k < 1 or n < 1:
            raise ValueError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
        normalized = []
        for j, raw in enumerate(holdings, start=1):
            items = list(raw)
            dedup = sorted(set(items))
            if len(dedup) != len(items):
                warnings.warn(
                    f"client {j}: duplicate packet indices were deduplicated",
                    stacklevel=2,
                )
            for i in dedup:
                if not isinstance(i, int) or i < 1 or i > k:
                    raise PacketIndexError(
                        f"client {j} holds packet {i!r}, outside [1, {k}]"
                    )
            normalized.append(tuple(dedup))
        if len(normalized) != n:
            raise ValueError(f"expected {n} holding sets, got {len(normalized)}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "holdings", tuple(normalized))

    def holding_set(self, j: int) -> frozenset[int]:
        """Packets client j holds (1-based client index)."""
        return frozenset(self.holdings[j - 1])

    def missing(self, j: int) -> tuple[int, ...]:
        """Sorted indices of the packets client j lacks."""
        held = set(self.holdings[j - 1])
        return tuple(i for i in range(1, self.k + 1) if i not in held)

    def trivial_clients(self) -> tuple[int, ...]:
        """Clients that already hold every packet."""
        return tuple(j for j in range(1, self.n + 1) if len(self.holdings[j - 1]) == self.k)


def validate_problem(p: CdeProblem) -> CdeProblem:
    """Check that the clients collectively hold every packet; return p."""
    covered: set[int] = set()
    for holding in p.holdings:
        covered.update(holding)
    missing = [i for i in range(1, p.k + 1) if i not in covered]
    if missing:
        raise UncoveredPacketError(missing)
    return p


@dataclass(frozen=True)
class SupportPattern:
    """Boolean k x n grid: entry (i, j) is True iff client j holds packet i.

    This is the support of the symbolic incidence matrix: a True cell marks a
    free coefficient, a False cell a structural zero of every encoding matrix.
    """

    k: int
    n: int
    grid: tuple[tuple[bool, ...], ...]

    def has(self, i: int, j: int) -> bool:
        """1-based lookup."""
        return self.grid[i - 1][j - 1]

    def true_count(self) -> int:
        return sum(sum(row) for row in self.grid)


@dataclass(frozen=True)
class LocalSupport:
    """Row restriction of the support pattern to one client's missing packets.

    ``rows`` lists the missing packet indices of ``client`` in sorted order;
    ``grid[r][c]`` tells whether column c+1 may carry packet ``rows[r]``.
    Column ``client`` is always all-False: a client's own broadcast cannot
    involve packets it does not hold.
    """

    client: int
    rows: tuple[int, ...]
    n: int
    grid: tuple[tuple[bool, ...], ...]


def support_pattern(p: CdeProblem) -> SupportPattern:
    grid = []
    holding_sets = [set(h) for h in p.holdings]
    for i in range(1, p.k + 1):
        grid.append(tuple(i in holding_sets[j] for j in range(p.n)))
    return SupportPattern(k=p.k, n=p.n, grid=tuple(grid))


def local_support(p: CdeProblem, j: int) -> LocalSupport:
    if not 1 <= j <= p.n:
        raise ValueError(f"client index {j} outside [1, {p.n}]")
    rows = p.missing(j)
    holding_sets = [set(h) for h in p.holdings]
    grid = tuple(
        tuple(i in holding_sets[c] for c in range(p.n)) for i in rows
    )
    return LocalSupport(client=j, rows=rows, n=p.n, grid=grid)


# ---------------------------------------------------------------------------
# Problem-spec files.
#
# Canonical form (bit-exact, used by fixtures and round-trip checks): UTF-8
# JSON with keys in the order k, n, q, holdings; two-space indent; a single
# trailing newline. Holdings are 1-based, sorted, duplicate-free.
# ---------------------------------------------------------------------------


def problem_to_canonical_text(p: CdeProblem, q: int) -> str:
    doc = {"k": p.k, "n": p.n, "q": q, "holdings": [list(h) for h in p.holdings]}
    return json.dumps(doc, indent=2) + "\n"


def save_problem_file(path: Union[str, Path], p: CdeProblem, q: int) -> None:
    Path(path).write_text(problem_to_canonical_text(p, q), encoding="utf-8")


def load_problem_file(path: Union[str, Path]) -> tuple[CdeProblem, int]:
    """Read a problem-spec file; returns the validated problem and its field size q."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: top level must be an object")
    for key in ("k", "n", "q", "holdings"):
        if key not in doc:
            raise ValueError(f"{path}: missing field {key!r}")
    k, n, q, holdings = doc["k"], doc["n"], doc["q"], doc["holdings"]
    if not isinstance(k, int) or not isinstance(n, int) or not isinstance(q, int):
        raise ValueError(f"{path}: k, n, q must be integers")
    if not isinstance(holdings, list) or not all(isinstance(h, list) for h in holdings):
        raise ValueError(f"{path}: holdings must be a list of integer lists")
    problem = validate_problem(CdeProblem(k=k, n=n, holdings=holdings))
    return problem, q
