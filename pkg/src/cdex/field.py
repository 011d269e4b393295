"""Exact arithmetic and linear algebra over prime fields GF(q).

Elements are residues stored as plain Python ints, so every operation in the
package is exact: no floating point, no overflow. The modulus is capped at
2**31 - 1 so that single products stay comfortably inside 64-bit range even
if a caller moves the hot loops into a fixed-width representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

MAX_MODULUS = 2**31 - 1

# Witness set makes Miller-Rabin deterministic for all n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class NotPrimeError(ValueError):
    """Requested modulus is not a usable prime."""


class FieldMismatchError(ValueError):
    """Operands live in different fields."""


class NoSolutionError(ValueError):
    """The linear system is inconsistent."""


class NotUniqueError(ValueError):
    """The linear system has more than one solution."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The prime field GF(q). Instances compare equal iff they share q."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        if not isinstance(q, int) or isinstance(q, bool):
            raise NotPrimeError(f"field size must be an integer, got {q!r}")
        if q < 2:
            raise NotPrimeError(f"field size must be at least 2, got {q}")
        if q > MAX_MODULUS:
            raise NotPrimeError(
                f"field size {q} exceeds the supported maximum {MAX_MODULUS}"
            )
        if not is_prime(q):
            raise NotPrimeError(f"{q} is not prime")
        self.q = q

    def element(self, value: Union[int, "FieldElement"]) -> "FieldElement":
        """Coerce an int (reduced mod q) or a matching element into this field."""
        if isinstance(value, FieldElement):
            if value.field.q != self.q:
                raise FieldMismatchError(
                    f"element of GF({value.field.q}) used in GF({self.q})"
                )
            return value
        if not isinstance(value, int) or isinstance(value, bool):
            raise TypeError(f"field elements are built from ints, got {value!r}")
        return FieldElement(value % self.q, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def elements(self) -> Iterator["FieldElement"]:
        for v in range(self.q):
            yield FieldElement(v, self)

    def vector(self, values: Sequence[Union[int, "FieldElement"]]) -> list["FieldElement"]:
        return [self.element(v) for v in values]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __repr__(self) -> str:
        return f"GF({self.q})"


@dataclass(frozen=True, slots=True)
class FieldElement:
    """A residue in [0, q) tied to its field; cross-field arithmetic is rejected."""

    value: int
    field: PrimeField

    def _check(self, other: "FieldElement") -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field.q != self.field.q:
            raise FieldMismatchError(
                f"cannot combine GF({self.field.q}) with GF({other.field.q})"
            )
        return self.field.q

    def __add__(self, other: "FieldElement") -> "FieldElement":
        q = self._check(other)
        return FieldElement((self.value + other.value) % q, self.field)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        q = self._check(other)
        return FieldElement((self.value - other.value) % q, self.field)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        q = self._check(other)
        return FieldElement(self.value * other.value % q, self.field)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value % self.field.q, self.field)

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no multiplicative inverse in GF({self.field.q})")
        return FieldElement(pow(self.value, self.field.q - 2, self.field.q), self.field)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inv()

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.q})"


class Matrix:
    """An immutable rows x cols matrix over a prime field.

    Entries are kept as int residues internally; ``at``/``entries`` hand out
    :class:`FieldElement` views. ``int_rows`` exposes a mutable copy of the
    raw grid for elimination kernels.
    """

    __slots__ = ("field", "rows", "cols", "_data")

    def __init__(
        self,
        field: PrimeField,
        rows_data: Sequence[Sequence[Union[int, FieldElement]]],
        *,
        cols: int | None = None,
    ):
        q = field.q
        grid: list[tuple[int, ...]] = []
        width = cols
        for row in rows_data:
            ints = []
            for entry in row:
                if isinstance(entry, FieldElement):
                    if entry.field.q != q:
                        raise FieldMismatchError(
                            f"entry of GF({entry.field.q}) in a GF({q}) matrix"
                        )
                    ints.append(entry.value)
                elif isinstance(entry, int) and not isinstance(entry, bool):
                    ints.append(entry % q)
                else:
                    raise TypeError(f"matrix entries must be ints, got {entry!r}")
            if width is None:
                width = len(ints)
            elif len(ints) != width:
                raise ValueError("ragged rows in matrix construction")
            grid.append(tuple(ints))
        if width is None:
            raise ValueError("cannot infer column count of an empty matrix; pass cols=")
        self.field = field
        self.rows = len(grid)
        self.cols = width
        self._data = tuple(grid)

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "Matrix":
        return cls(field, [[0] * cols for _ in range(rows)], cols=cols)

    def at(self, r: int, c: int) -> FieldElement:
        return FieldElement(self._data[r][c], self.field)

    @property
    def entries(self) -> tuple[FieldElement, ...]:
        f = self.field
        return tuple(FieldElement(v, f) for row in self._data for v in row)

    def int_rows(self) -> list[list[int]]:
        return [list(row) for row in self._data]

    def row_ints(self, r: int) -> tuple[int, ...]:
        return self._data[r]

    def column_ints(self, c: int) -> tuple[int, ...]:
        return tuple(row[c] for row in self._data)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            [[self._data[r][c] for r in range(self.rows)] for c in range(self.cols)],
            cols=self.rows,
        )

    def columns(self, indices: Sequence[int]) -> "Matrix":
        """Column-subset view (0-based indices), preserving the given order."""
        return Matrix(
            self.field,
            [[row[c] for c in indices] for row in self._data],
            cols=len(indices),
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other._data == self._data
            and other.cols == self.cols
        )

    def __hash__(self) -> int:
        return hash((self.field, self.cols, self._data))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols} over GF({self.field.q}))"


def rank(m: Matrix) -> int:
    """Row rank by exact Gaussian elimination with per-column pivot search."""
    q = m.field.q
    grid = m.int_rows()
    nr, nc = m.rows, m.cols
    r = 0
    for c in range(nc):
        pivot = None
        for i in range(r, nr):
            if grid[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        grid[r], grid[pivot] = grid[pivot], grid[r]
        inv = pow(grid[r][c], q - 2, q)
        prow = grid[r]
        for i in range(r + 1, nr):
            f = grid[i][c]
            if f:
                factor = f * inv % q
                row = grid[i]
                for cc in range(c, nc):
                    row[cc] = (row[cc] - factor * prow[cc]) % q
        r += 1
        if r == nr:
            break
    return r


def solve_unique(
    a: Matrix, b: Sequence[Union[int, FieldElement]]
) -> list[FieldElement]:
    """Solve a ``x = b`` when the solution exists and is unique.

    Raises :class:`NoSolutionError` on an inconsistent system and
    :class:`NotUniqueError` when the coefficient matrix lacks full column
    rank (so the solution set is empty or a coset of positive dimension).
    """
    if len(b) != a.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {a.rows}")
    q = a.field.q
    rhs = [v.value if isinstance(v, FieldElement) else v % q for v in b]
    for v in b:
        if isinstance(v, FieldElement) and v.field.q != q:
            raise FieldMismatchError("right-hand side from a different field")
    aug = [grow + [rv] for grow, rv in zip(a.int_rows(), rhs)]
    nr, nc = a.rows, a.cols
    pivot_cols: list[int] = []
    r = 0
    for c in range(nc):
        pivot = None
        for i in range(r, nr):
            if aug[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = pow(aug[r][c], q - 2, q)
        prow = aug[r]
        for i in range(nr):
            if i != r and aug[i][c]:
                factor = aug[i][c] * inv % q
                row = aug[i]
                for cc in range(c, nc + 1):
                    row[cc] = (row[cc] - factor * prow[cc]) % q
        pivot_cols.append(c)
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if aug[i][nc]:
            raise NoSolutionError("system is inconsistent")
    if len(pivot_cols) < nc:
        raise NotUniqueError(
            f"coefficient matrix has rank {len(pivot_cols)} < {nc} columns"
        )
    x = [0] * nc
    for idx, c in enumerate(pivot_cols):
        inv = pow(aug[idx][c], q - 2, q)
        x[c] = aug[idx][nc] * inv % q
    f = a.field
    return [FieldElement(v, f) for v in x]


def mul_row_vector(vec: Sequence[Union[int, FieldElement]], m: Matrix) -> list[FieldElement]:
    """Row vector times matrix: returns ``vec @ m`` of length ``m.cols``."""
    if len(vec) != m.rows:
        raise ValueError(f"vector length {len(vec)} does not match {m.rows} rows")
    q = m.field.q
    ints = []
    for v in vec:
        if isinstance(v, FieldElement):
            if v.field.q != q:
                raise FieldMismatchError("vector entry from a different field")
            ints.append(v.value)
        else:
            ints.append(v % q)
    out = []
    for c in range(m.cols):
        acc = 0
        for r, coeff in enumerate(ints):
            if coeff:
                acc += coeff * m._data[r][c]
        out.append(FieldElement(acc % q, m.field))
    return out
