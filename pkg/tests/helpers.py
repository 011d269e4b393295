"""Independent oracles and generators shared by the test modules.

Nothing here reuses the library's matching or diameter code paths: the
matching oracle is a separate augmenting-path implementation on adjacency
lists, and the diameter oracle enumerates every column subset directly from
the definition.
"""

from __future__ import annotations

import random
from itertools import combinations

from cdex import CdeProblem, LocalSupport, Matrix, PrimeField, rank


def oracle_matching(adjacency: list[list[int]], allowed: set[int]) -> int:
    """Maximum bipartite matching via plain augmenting paths (oracle copy)."""
    match: dict[int, int] = {}

    def try_row(r: int, seen: set[int]) -> bool:
        for c in adjacency[r]:
            if c not in allowed or c in seen:
                continue
            seen.add(c)
            if c not in match or try_row(match[c], seen):
                match[c] = r
                return True
        return False

    return sum(1 for r in range(len(adjacency)) if try_row(r, set()))


def support_adjacency(s: LocalSupport) -> list[list[int]]:
    return [[c + 1 for c, hit in enumerate(row) if hit] for row in s.grid]


def oracle_generic_rank(s: LocalSupport, columns) -> int:
    return oracle_matching(support_adjacency(s), set(columns))


def oracle_local_diameter(s: LocalSupport) -> int | None:
    """Directly from the definition: smallest subset size whose every subset
    of columns admits a row-saturating matching. None when no size works."""
    r = len(s.rows)
    if r == 0:
        return 0
    adjacency = support_adjacency(s)
    for size in range(r, s.n + 1):
        if all(
            oracle_matching(adjacency, set(cols)) == r
            for cols in combinations(range(1, s.n + 1), size)
        ):
            return size
    return None


def evaluation_rank(s: LocalSupport, columns, field: PrimeField, rng: random.Random) -> int:
    """Rank of one random evaluation of the symbolic submatrix (PIT oracle)."""
    cols = sorted(columns)
    rows = []
    for row in s.grid:
        rows.append([rng.randrange(field.q) if row[c - 1] else 0 for c in cols])
    if not rows:
        return 0
    return rank(Matrix(field, rows, cols=len(cols)))


def random_problem(rng: random.Random, max_k: int = 8, max_n: int = 8) -> CdeProblem:
    """Random holdings with guaranteed coverage."""
    k = rng.randint(1, max_k)
    n = rng.randint(1, max_n)
    holdings = [
        [i for i in range(1, k + 1) if rng.random() < 0.45] for _ in range(n)
    ]
    for i in range(1, k + 1):
        if not any(i in h for h in holdings):
            holdings[rng.randrange(n)].append(i)
    return CdeProblem(k=k, n=n, holdings=holdings)


def random_problem_small_missing(
    rng: random.Random, max_missing: int = 3
) -> CdeProblem:
    """Random problem where every client misses at most ``max_missing`` packets."""
    k = rng.randint(2, 6)
    n = rng.randint(2, 6)
    holdings = []
    for _ in range(n):
        miss = rng.sample(range(1, k + 1), rng.randint(0, min(max_missing, k)))
        holdings.append([i for i in range(1, k + 1) if i not in miss])
    for i in range(1, k + 1):
        if not any(i in h for h in holdings):
            holdings[rng.randrange(n)].append(i)
    return CdeProblem(k=k, n=n, holdings=holdings)


def binomial_cdf(k: int, n: int, p: float) -> float:
    """Exact P(X <= k) for X ~ Binomial(n, p), via log-gamma."""
    from math import exp, lgamma, log

    if p <= 0.0:
        return 1.0
    if p >= 1.0:
        return 1.0 if k >= n else 0.0
    total = 0.0
    for i in range(0, k + 1):
        logpmf = (
            lgamma(n + 1)
            - lgamma(i + 1)
            - lgamma(n - i + 1)
            + i * log(p)
            + (n - i) * log(1.0 - p)
        )
        total += exp(logpmf)
    return min(1.0, total)
