"""Per-client broadcast encoding and minimum-distance decoding.

A client strips the contribution of its own packets from every received
broadcast, leaving a word that is (error pattern aside) a codeword of its
local receiving matrix; the decoder then searches all candidate messages
for the Hamming-closest codeword. The client's own coordinate participates
in the metric but is reconstructed rather than read from the channel, so it
is always error-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Mapping, Optional, Sequence

from .codec import (
    DEFAULT_DISTANCE_BUDGET,
    BudgetExceededError,
    EncodingMatrix,
    LocalCode,
    local_receiving_matrix,
)
from .field import FieldElement


class DecodeStatus(Enum):
    UNIQUE = "unique"
    AMBIGUOUS = "ambiguous"
    # Not produced by the decoder itself; orchestration layers use it for
    # decode attempts aborted by budget limits.
    FAILED = "failed"


@dataclass(frozen=True)
class DecodeResult:
    """What one client concluded from one round of broadcasts.

    ``recovered`` maps the client's missing packet indices to decoded
    values; ``estimate`` is the full packet vector (held values merged in)
    when the caller supplied the held packets, and it always agrees with
    those held values. ``tie_count`` counts minimum-distance codewords; a
    tie is reported as AMBIGUOUS, never silently broken.
    """

    client: int
    recovered: Mapping[int, FieldElement]
    status: DecodeStatus
    distance: Optional[int]
    tie_count: int
    estimate: Optional[tuple[FieldElement, ...]] = None

    def to_dict(self) -> dict:
        return {
            "client": self.client,
            "status": self.status.value,
            "distance": self.distance,
            "tie_count": self.tie_count,
            "recovered": {str(i): v.value for i, v in sorted(self.recovered.items())},
            "estimate": None
            if self.estimate is None
            else [v.value for v in self.estimate],
        }


def _as_residues(
    e: EncodingMatrix, values: Sequence, expected_len: int, what: str
) -> list[int]:
    if len(values) != expected_len:
        raise ValueError(f"{what} has length {len(values)}, expected {expected_len}")
    q = e.field.q
    out = []
    for v in values:
        if isinstance(v, FieldElement):
            out.append(e.field.element(v).value)
        else:
            out.append(v % q)
    return out


def encode_broadcast(e: EncodingMatrix, x: Sequence, j: int) -> FieldElement:
    """The honest broadcast of client j for packet vector x."""
    xs = _as_residues(e, x, e.problem.k, "packet vector")
    q = e.field.q
    acc = 0
    for i in e.problem.holdings[j - 1]:
        acc += e.matrix.row_ints(i - 1)[j - 1] * xs[i - 1]
    return FieldElement(acc % q, e.field)


def honest_broadcast(e: EncodingMatrix, x: Sequence) -> list[FieldElement]:
    """All n honest broadcasts for packet vector x."""
    return [encode_broadcast(e, x, j) for j in range(1, e.problem.n + 1)]


def reduce_received(
    e: EncodingMatrix, j: int, y: Sequence, held: Mapping[int, FieldElement]
) -> list[FieldElement]:
    """Strip client j's known packets from the received broadcasts.

    ``held`` must cover exactly the packets client j holds. Position j of
    the result is 0 by construction: the client knows its own broadcast, so
    nothing received there can carry an error into the decoder.
    """
    p = e.problem
    held_keys = set(held)
    expected = set(p.holdings[j - 1])
    if held_keys != expected:
        raise ValueError(
            f"held packets {sorted(held_keys)} do not match client {j}'s "
            f"holdings {sorted(expected)}"
        )
    ys = _as_residues(e, y, p.n, "broadcast vector")
    q = e.field.q
    held_vals = {i: e.field.element(v).value for i, v in held.items()}
    z = []
    for jp in range(1, p.n + 1):
        if jp == j:
            z.append(FieldElement(0, e.field))
            continue
        acc = ys[jp - 1]
        for i, xv in held_vals.items():
            acc -= e.matrix.row_ints(i - 1)[jp - 1] * xv
        z.append(FieldElement(acc % q, e.field))
    return z


def min_distance_decode(
    code: LocalCode, z: Sequence, budget: int = DEFAULT_DISTANCE_BUDGET
) -> DecodeResult:
    """Nearest-codeword decoding by complete enumeration of the message space.

    Returns the message whose codeword is Hamming-closest to z; UNIQUE only
    when no other message ties. Correctness is guaranteed whenever the true
    error weight is at most floor((min_distance - 1) / 2).
    """
    f = code.matrix.field
    q = f.q
    r = len(code.row_indices)
    n = code.matrix.cols
    zs = []
    if len(z) != n:
        raise ValueError(f"received vector has length {len(z)}, expected {n}")
    for v in z:
        zs.append(f.element(v).value if not isinstance(v, int) else v % q)
    if r == 0:
        dist = sum(1 for v in zs if v)
        return DecodeResult(
            client=code.client,
            recovered={},
            status=DecodeStatus.UNIQUE,
            distance=dist,
            tie_count=1,
        )
    total = q**r
    if total > budget:
        raise BudgetExceededError(total, budget, "decode enumeration")
    cols = [code.matrix.column_ints(c) for c in range(n)]
    best: Optional[tuple[int, ...]] = None
    best_dist = n + 1
    ties = 0
    for msg in product(range(q), repeat=r):
        dist = 0
        for c in range(n):
            acc = 0
            col = cols[c]
            for a, v in zip(msg, col):
                if a and v:
                    acc += a * v
            if acc % q != zs[c]:
                dist += 1
        if dist < best_dist:
            best_dist = dist
            best = msg
            ties = 1
        elif dist == best_dist:
            ties += 1
    assert best is not None
    recovered = {
        i: FieldElement(v, f) for i, v in zip(code.row_indices, best)
    }
    status = DecodeStatus.UNIQUE if ties == 1 else DecodeStatus.AMBIGUOUS
    return DecodeResult(
        client=code.client,
        recovered=recovered,
        status=status,
        distance=best_dist,
        tie_count=ties,
    )


def decode_all(
    e: EncodingMatrix,
    j: int,
    y: Sequence,
    held: Mapping[int, FieldElement],
    budget: int = DEFAULT_DISTANCE_BUDGET,
) -> DecodeResult:
    """Reduce, decode, and merge into a full packet-vector estimate."""
    z = reduce_received(e, j, y, held)
    code = local_receiving_matrix(e, j)
    inner = min_distance_decode(code, z, budget)
    held_vals = {i: e.field.element(v) for i, v in held.items()}
    estimate = tuple(
        held_vals[i] if i in held_vals else inner.recovered[i]
        for i in range(1, e.problem.k + 1)
    )
    return DecodeResult(
        client=j,
        recovered=inner.recovered,
        status=inner.status,
        distance=inner.distance,
        tie_count=inner.tie_count,
        estimate=estimate,
    )
