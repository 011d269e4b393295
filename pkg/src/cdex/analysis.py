"""Structural analysis of a data-exchange instance.

Everything here works on the support pattern alone, never on concrete
coefficients. Because each free coefficient appears in exactly one cell of
the incidence matrix, a square submatrix has a generically nonzero
determinant exactly when its support admits a perfect matching, so generic
rank reduces to maximum bipartite matching. The per-client diameter then
falls out of a Hall-deficiency argument over subsets of the missing rows,
which is exponential only in the (typically small) number of missing
packets rather than in the number of clients.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .model import CdeProblem, LocalSupport, local_support, validate_problem


class InfeasibleError(Exception):
    """A client cannot recover its missing packets even with zero errors."""

    def __init__(self, client: int):
        self.client = client
        super().__init__(
            f"client {client} cannot be served: even all n broadcasts lack "
            f"full generic rank for its missing packets"
        )


@dataclass(frozen=True)
class CapabilityReport:
    """Per-client diameters, global diameter, capability, and degree bound.

    ``delta`` is the exact number of compromised broadcasts every client can
    tolerate: floor((n - rho) / 2). ``degree_bound`` upper-bounds the degree
    of the product-of-determinants certificate polynomial and feeds the
    random-coding success floor 1 - degree_bound/q. Clients that miss
    nothing get diameter 0 by convention and are listed in
    ``trivial_clients`` so reports can flag the convention explicitly.
    """

    rho_per_client: tuple[int, ...]
    rho: int
    delta: int
    degree_bound: int
    trivial_clients: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "rho_per_client": list(self.rho_per_client),
            "rho": self.rho,
            "delta": self.delta,
            "degree_bound": self.degree_bound,
            "trivial_clients": list(self.trivial_clients),
        }


def _row_masks(s: LocalSupport) -> list[int]:
    """Column adjacency of each missing-packet row, as bitmasks (bit c = column c+1)."""
    masks = []
    for row in s.grid:
        m = 0
        for c, hit in enumerate(row):
            if hit:
                m |= 1 << c
        masks.append(m)
    return masks


def _max_matching(row_masks: Sequence[int], allowed_cols: int) -> int:
    """Maximum bipartite matching between rows and the allowed column set."""
    owner: dict[int, int] = {}

    def augment(r: int, visited: set[int]) -> bool:
        m = row_masks[r] & allowed_cols
        while m:
            low = m & -m
            c = low.bit_length() - 1
            m ^= low
            if c in visited:
                continue
            visited.add(c)
            if c not in owner or augment(owner[c], visited):
                owner[c] = r
                return True
        return False

    size = 0
    for r in range(len(row_masks)):
        if augment(r, set()):
            size += 1
    return size


def generic_rank(s: LocalSupport, columns: Iterable[int]) -> int:
    """Maximum rank of the client's symbolic submatrix on the given columns.

    ``columns`` are 1-based client indices. The value is the rank achieved
    by some (equivalently, almost every) assignment of the free
    coefficients, computed as a maximum matching of the support.
    """
    allowed = 0
    for c in columns:
        if not 1 <= c <= s.n:
            raise ValueError(f"column {c} outside [1, {s.n}]")
        allowed |= 1 << (c - 1)
    return _max_matching(_row_masks(s), allowed)


def local_diameter(s: LocalSupport) -> int:
    """Smallest size at which every column subset fully serves this client.

    Computed by Hall deficiency: with N(T) the set of clients holding at
    least one packet of T,

        rho_j = n - min over nonempty T of missing rows of (|N(T)| - |T|).

    A subset with |N(T)| < |T| pushes the requirement past n broadcasts,
    which means the client cannot decode even error-free: InfeasibleError.
    """
    if not s.rows:
        return 0
    masks = _row_masks(s)
    r = len(masks)
    min_deficiency = None
    for bits in range(1, 1 << r):
        union = 0
        size = 0
        t = bits
        while t:
            low = t & -t
            union |= masks[low.bit_length() - 1]
            size += 1
            t ^= low
        deficiency = union.bit_count() - size
        if min_deficiency is None or deficiency < min_deficiency:
            min_deficiency = deficiency
    assert min_deficiency is not None
    if min_deficiency < 0:
        raise InfeasibleError(s.client)
    return s.n - min_deficiency


def client_diameters(p: CdeProblem) -> tuple[int, ...]:
    validate_problem(p)
    return tuple(local_diameter(local_support(p, j)) for j in range(1, p.n + 1))


def diameter(p: CdeProblem) -> int:
    """Global diameter: the worst per-client diameter."""
    return max(client_diameters(p))


def char_poly_degree_bound(p: CdeProblem) -> int:
    """Upper bound on the degree of the certificate polynomial.

    For each client, counts the column subsets of size |missing(j)| whose
    support admits a perfect matching; each contributes a determinant of
    total degree exactly |missing(j)| (all entries are distinct variables).
    Summing over clients without deduplicating across clients can only
    overcount, so the random-coding floor 1 - bound/q stays valid.
    """
    validate_problem(p)
    total = 0
    for j in range(1, p.n + 1):
        s = local_support(p, j)
        r = len(s.rows)
        if r == 0:
            continue
        masks = _row_masks(s)
        count = 0
        for cols in combinations(range(p.n), r):
            allowed = 0
            for c in cols:
                allowed |= 1 << c
            if _max_matching(masks, allowed) == r:
                count += 1
        total += count * r
    return total


def capability(p: CdeProblem) -> CapabilityReport:
    """Full structural report: diameters, capability delta, degree bound."""
    rhos = client_diameters(p)
    rho = max(rhos)
    return CapabilityReport(
        rho_per_client=rhos,
        rho=rho,
        delta=(p.n - rho) // 2,
        degree_bound=char_poly_degree_bound(p),
        trivial_clients=p.trivial_clients(),
    )
