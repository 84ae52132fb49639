"""Operation tables, permutations, axiom validation, and .qdl files.

Tables are n x n with entries in 1..n; the entry in row i, column j is i * j.
Column i therefore lists the right translation R_i, the map j -> j * i.  A
table is a quandle when every i * i = i, every column is a bijection, and
(i * j) * k = (i * k) * (j * k) holds for all triples.

The .qdl text format: optional '#' comment lines, then the order n on its own
line, then n rows of n whitespace-separated integers.  The writer emits the
canonical form (no comments unless asked, single spaces, trailing newline), so
parse(format(q)) round-trips bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConjugationViolation,
    FixedPointMissing,
    IndexOutOfRange,
    InvalidQuandleError,
    ParamOutOfRange,
    ParseError,
)

# Above this order the distributivity scan switches to a vectorized kernel.
_NUMPY_CUTOVER = 32


@dataclass(frozen=True, order=True)
class CycleStructure:
    """Multiset of disjoint-cycle lengths of a permutation, sorted ascending."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        if not self.lengths or any(x < 1 for x in self.lengths):
            raise ParamOutOfRange(f"bad cycle lengths {self.lengths}")
        if list(self.lengths) != sorted(self.lengths):
            raise ParamOutOfRange("cycle lengths must be sorted ascending")

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "CycleStructure":
        return cls(tuple(sorted(lengths)))

    @property
    def total(self) -> int:
        """Number of points moved or fixed, i.e. the degree."""
        return sum(self.lengths)

    def __str__(self) -> str:
        parts = []
        i = 0
        while i < len(self.lengths):
            j = i
            while j < len(self.lengths) and self.lengths[j] == self.lengths[i]:
                j += 1
            if j - i == 1:
                parts.append(str(self.lengths[i]))
            else:
                parts.append(f"{self.lengths[i]}^{j - i}")
            i = j
        return "(" + ", ".join(parts) + ")"


class Permutation:
    """Bijection of {1..n}, stored as the image tuple (image[i-1] = sigma(i))."""

    __slots__ = ("n", "image")

    def __init__(self, image: Iterable[int]):
        img = tuple(image)
        n = len(img)
        if sorted(img) != list(range(1, n + 1)):
            raise ParamOutOfRange(f"not a permutation of 1..{n}: {img}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "image", img)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Iterable[int]]) -> "Permutation":
        img = list(range(1, n + 1))
        for cyc in cycles:
            cyc = tuple(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if not 1 <= a <= n:
                    raise IndexOutOfRange(f"label {a} outside 1..{n}")
                img[a - 1] = b
        return cls(img)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"label {i} outside 1..{self.n}")
        return self.image[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: (p * q)(i) = p(q(i))."""
        if self.n != other.n:
            raise ParamOutOfRange("cannot compose permutations of different degree")
        img = self.image
        return Permutation(img[x - 1] for x in other.image)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.image):
            inv[x - 1] = i + 1
        return Permutation(inv)

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = Permutation.identity(self.n)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Disjoint cycles in orbit order, each starting at its smallest label."""
        seen = [False] * self.n
        out = []
        for start in range(1, self.n + 1):
            if seen[start - 1]:
                continue
            cyc = []
            x = start
            while not seen[x - 1]:
                seen[x - 1] = True
                cyc.append(x)
                x = self.image[x - 1]
            out.append(tuple(cyc))
        return tuple(out)

    def cycle_structure(self) -> CycleStructure:
        return CycleStructure.from_lengths(len(c) for c in self.cycles())

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if self.image[i - 1] == i)

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        moved = [c for c in self.cycles() if len(c) > 1]
        if not moved:
            return f"Permutation(id/{self.n})"
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in moved)
        return f"Permutation({body})"


def cycle_structure(p: Permutation) -> CycleStructure:
    """Cycle structure of a permutation, e.g. (1, 2, 6)."""
    return p.cycle_structure()


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of axiom validation; error is None when the table is valid.

    Error names: NonSquare, EntryOutOfRange, IdempotencyViolation,
    RightInvertibilityViolation, DistributivityViolation.  The witness holds
    the 1-based indices of the first violation in scan order (i, then j,
    then k).
    """

    ok: bool
    error: str | None = None
    witness: tuple[int, ...] = ()
    order: int = 0

    def __str__(self) -> str:
        if self.ok:
            return f"valid quandle of order {self.order}"
        at = f" at {self.witness}" if self.witness else ""
        return f"{self.error}{at}"


def _first_mismatch_np(tbl: np.ndarray) -> tuple[int, int, int] | None:
    """Lexicographically first failing (i, j, k) of right distributivity, 0-based."""
    n = tbl.shape[0]
    best = None
    for k in range(n):
        colk = tbl[:, k]
        lhs = colk[tbl]                       # lhs[i, j] = t[t[i, j], k]
        rhs = tbl[colk[:, None], colk[None, :]]  # rhs[i, j] = t[t[i, k], t[j, k]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            i, j = int(bad[0, 0]), int(bad[0, 1])
            if best is None or (i, j, k) < best:
                best = (i, j, k)
    return best


def validate_quandle(rows: Sequence[Sequence[int]]) -> ValidationResult:
    """Check the three quandle axioms; report the first violation found.

    Scan order is idempotency over i, then column bijectivity over j, then
    distributivity over (i, j, k) lexicographically.
    """
    n = len(rows)
    if n == 0:
        return ValidationResult(False, "NonSquare", ())
    for i, row in enumerate(rows, start=1):
        if len(row) != n:
            return ValidationResult(False, "NonSquare", (i,))
    for i, row in enumerate(rows, start=1):
        for j, v in enumerate(row, start=1):
            if not isinstance(v, int) or not 1 <= v <= n:
                return ValidationResult(False, "EntryOutOfRange", (i, j))
    t = [[v - 1 for v in row] for row in rows]
    for i in range(n):
        if t[i][i] != i:
            return ValidationResult(False, "IdempotencyViolation", (i + 1,))
    for j in range(n):
        if sorted(row[j] for row in t) != list(range(n)):
            return ValidationResult(False, "RightInvertibilityViolation", (j + 1,))
    if n <= _NUMPY_CUTOVER:
        for i in range(n):
            ti = t[i]
            for j in range(n):
                tij = t[ti[j]]
                tj = t[j]
                for k in range(n):
                    if tij[k] != t[ti[k]][tj[k]]:
                        return ValidationResult(
                            False, "DistributivityViolation", (i + 1, j + 1, k + 1)
                        )
    else:
        bad = _first_mismatch_np(np.array(t, dtype=np.int32))
        if bad is not None:
            i, j, k = bad
            return ValidationResult(
                False, "DistributivityViolation", (i + 1, j + 1, k + 1)
            )
    return ValidationResult(True, None, (), n)


class QuandleTable:
    """Immutable validated operation table with 1-based labels."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[int]], *, validate: bool = True):
        # validate=False is for internal use and tests that need a broken table.
        tup = tuple(tuple(row) for row in rows)
        if validate:
            result = validate_quandle(tup)
            if not result.ok:
                raise InvalidQuandleError(result)
        object.__setattr__(self, "n", len(tup))
        object.__setattr__(self, "rows", tup)

    def __setattr__(self, name, value):
        raise AttributeError("QuandleTable is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "QuandleTable":
        """Validate rows and wrap them; raises InvalidQuandleError on failure."""
        return cls(rows)

    def op(self, i: int, j: int) -> int:
        """The product i * j."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexOutOfRange(f"labels ({i}, {j}) outside 1..{self.n}")
        return self.rows[i - 1][j - 1]

    def row(self, i: int) -> tuple[int, ...]:
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"label {i} outside 1..{self.n}")
        return self.rows[i - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, QuandleTable) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"QuandleTable(order={self.n})"


def right_translation(q: QuandleTable, i: int) -> Permutation:
    """The permutation R_i: j -> j * i, i.e. column i of the table."""
    if not 1 <= i <= q.n:
        raise IndexOutOfRange(f"label {i} outside 1..{q.n}")
    return Permutation(row[i - 1] for row in q.rows)


def translations(q: QuandleTable) -> tuple[Permutation, ...]:
    """All right translations (R_1, ..., R_n)."""
    return tuple(right_translation(q, i) for i in range(1, q.n + 1))


def from_translations(perms: Sequence[Permutation]) -> QuandleTable:
    """Build the table whose columns are the given translations.

    The list yields a quandle exactly when R_(j*i) = R_i R_j R_i^-1 for all
    i, j and each R_i fixes i.  The conjugation condition is checked first,
    in lexicographic (i, j) order, then the fixed points.
    """
    n = len(perms)
    if n == 0 or any(p.n != n for p in perms):
        raise ParamOutOfRange("need n permutations of degree n")
    imgs = [p.image for p in perms]
    invs = [p.inverse().image for p in perms]
    for i in range(n):
        ri, ri_inv = imgs[i], invs[i]
        for j in range(n):
            rj = imgs[j]
            target = imgs[imgs[i][j] - 1]
            for x in range(n):
                if target[x] != ri[rj[ri_inv[x] - 1] - 1]:
                    raise ConjugationViolation(i + 1, j + 1)
    for i in range(n):
        if imgs[i][i] != i + 1:
            raise FixedPointMissing(i + 1)
    rows = [[imgs[i][j] for i in range(n)] for j in range(n)]
    return QuandleTable.from_rows(rows)


def parse_qdl(text: str) -> QuandleTable:
    """Parse .qdl text; raises ParseError (with line number) on format errors."""
    data: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        data.append((lineno, stripped))
    if not data:
        raise ParseError("no table data found")
    lineno, head = data[0]
    tokens = head.split()
    if len(tokens) != 1:
        raise ParseError(f"expected a single order, found {head!r}", lineno)
    try:
        n = int(tokens[0])
    except ValueError:
        raise ParseError(f"invalid order {tokens[0]!r}", lineno) from None
    if n < 1:
        raise ParseError(f"order must be positive, found {n}", lineno)
    body = data[1:]
    if len(body) < n:
        last = data[-1][0]
        raise ParseError(f"expected {n} rows, file ends after {len(body)}", last)
    if len(body) > n:
        raise ParseError("unexpected content after table", body[n][0])
    rows = []
    for lineno, line in body:
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"expected {n} entries, found {len(tokens)}", lineno)
        try:
            rows.append([int(tok) for tok in tokens])
        except ValueError:
            raise ParseError(f"invalid integer in row: {line!r}", lineno) from None
    return QuandleTable.from_rows(rows)


def format_qdl(q: QuandleTable, comments: Iterable[str] = ()) -> str:
    """Serialize to canonical .qdl text (optional leading comment lines)."""
    out = [f"# {c}" for c in comments]
    out.append(str(q.n))
    out.extend(" ".join(map(str, row)) for row in q.rows)
    return "\n".join(out) + "\n"


def read_qdl(path: str | Path) -> QuandleTable:
    return parse_qdl(Path(path).read_text())


def write_qdl(q: QuandleTable, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_qdl(q, comments))
