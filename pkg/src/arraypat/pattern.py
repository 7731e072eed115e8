"""Array patterns: rectangular arrays of variables, kept in canonical naming.

Variables are positive integers printed as ``x1``, ``x2``, ... A pattern is
canonical when, reading row-major, the k-th distinct variable is ``x<k>``.
Two patterns that differ only by a renaming therefore compare equal.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Hashable, Iterable, Iterator, Sequence

from .errors import CapacityError, FormatError
from .grid import GeomOp, Grid, transform_rows

__all__ = [
    "Pattern",
    "canonicalize",
    "canonical_renaming",
    "enumerate_patterns",
    "equivalent",
    "format_pattern",
    "parse_pattern",
    "parse_variable",
    "transform_pattern",
]

log = logging.getLogger(__name__)

MAX_PATTERN_CELLS = 12

_VAR_RE = re.compile(r"x([1-9][0-9]*)\Z")


def parse_variable(token) -> int:
    """``"x3"`` -> 3. Positive integers pass through."""
    if isinstance(token, int) and not isinstance(token, bool):
        if token < 1:
            raise FormatError(f"variable index must be positive, got {token}")
        return token
    match = _VAR_RE.match(str(token))
    if not match:
        raise FormatError(f"not a variable token: {token!r} (expected x<positive-integer>)")
    return int(match.group(1))


def canonical_renaming(rows: Iterable[Iterable[Hashable]]) -> dict:
    """Map each identifier to its row-major first-occurrence number."""
    renaming: dict = {}
    for row in rows:
        for v in row:
            if v not in renaming:
                renaming[v] = len(renaming) + 1
    return renaming


def _check_rect(rows) -> tuple[tuple, ...]:
    data = tuple(tuple(row) for row in rows)
    if not data or not data[0]:
        raise FormatError("a pattern must be non-empty")
    width = len(data[0])
    if any(len(row) != width for row in data):
        raise FormatError("ragged pattern rows")
    return data


def _canonical_rows(data) -> tuple[tuple[int, ...], ...]:
    renaming = canonical_renaming(data)
    return tuple(tuple(renaming[v] for v in row) for row in data)


class Pattern:
    """A non-empty rectangular array of variables in canonical form.

    Accepts rows of ints, ``x<k>`` tokens, or any hashable identifiers;
    identifiers are renamed to canonical first-occurrence numbering.
    """

    __slots__ = ("_data", "_hash")

    def __init__(self, rows: Iterable[Sequence[Hashable]] | Grid | "Pattern"):
        if isinstance(rows, (Grid, Pattern)):
            rows = rows.data
        self._data = _canonical_rows(_check_rect(rows))
        self._hash = None

    @classmethod
    def _trusted(cls, data) -> "Pattern":
        p = object.__new__(cls)
        p._data = data
        p._hash = None
        return p

    @classmethod
    def from_string(cls, text: str) -> "Pattern":
        """``"x1 x2 / x2 x1"`` -> 2x2 pattern."""
        return cls(
            [parse_variable(tok) for tok in row.split()] for row in text.split("/")
        )

    @property
    def data(self) -> tuple[tuple[int, ...], ...]:
        return self._data

    @property
    def nrows(self) -> int:
        return len(self._data)

    @property
    def ncols(self) -> int:
        return len(self._data[0])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._data), len(self._data[0])

    @property
    def variables(self) -> tuple[int, ...]:
        # canonical form: exactly 1..k
        return tuple(range(1, max(max(row) for row in self._data) + 1))

    @property
    def nvars(self) -> int:
        return max(max(row) for row in self._data)

    def cells(self) -> tuple[int, ...]:
        return tuple(v for row in self._data for v in row)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        if not (1 <= i <= self.nrows and 1 <= j <= self.ncols):
            raise IndexError(f"cell ({i}, {j}) outside {self.nrows}x{self.ncols} pattern")
        return self._data[i - 1][j - 1]

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return self._data == other._data

    def __lt__(self, other: "Pattern"):
        return (self.shape, self.cells()) < (other.shape, other.cells())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._data)
        return self._hash

    def __repr__(self):
        return "Pattern(" + " / ".join(" ".join(f"x{v}" for v in row) for row in self._data) + ")"

    def __str__(self):
        return format_pattern(self)


def canonicalize(raw) -> Pattern:
    """Return the canonical representative of ``raw``'s renaming class."""
    if isinstance(raw, Pattern):
        return raw
    if isinstance(raw, Grid):
        raw = [[parse_variable(t) for t in row] for row in raw.data]
    return Pattern(raw)


def equivalent(p, q) -> bool:
    """True iff ``p`` and ``q`` differ only by a renaming of variables."""
    return canonicalize(p) == canonicalize(q)


def transform_pattern(p: Pattern, op: GeomOp | str) -> Pattern:
    return Pattern(transform_rows(p.data, GeomOp.parse(op)))


def _restricted_growth(n: int) -> Iterator[tuple[int, ...]]:
    # Lexicographic restricted growth strings, values starting at 1.
    seq = [1] * n
    highs = [1] * n  # highs[i] = max(seq[:i+1])
    if n == 0:
        return
    while True:
        yield tuple(seq)
        i = n - 1
        while i > 0 and seq[i] > highs[i - 1]:
            i -= 1
        if i == 0:
            return
        seq[i] += 1
        highs[i] = max(highs[i - 1], seq[i])
        for k in range(i + 1, n):
            seq[k] = 1
            highs[k] = highs[i]


def enumerate_patterns(rows: int, cols: int, max_cells: int = MAX_PATTERN_CELLS) -> list[Pattern]:
    """Every canonical pattern of the given shape, one per renaming class.

    These are the set partitions of the ``rows * cols`` positions, so there
    are Bell(rows * cols) of them. Order is lexicographic on the row-major
    variable sequence.
    """
    if rows < 1 or cols < 1:
        raise ValueError("pattern dimensions must be positive")
    if rows * cols > max_cells:
        raise CapacityError(
            f"{rows}x{cols} patterns need Bell({rows * cols}) entries; "
            f"limit is {max_cells} cells"
        )
    out = []
    for seq in _restricted_growth(rows * cols):
        out.append(Pattern._trusted(tuple(seq[i * cols : (i + 1) * cols] for i in range(rows))))
    return out


def parse_pattern(text: str) -> Pattern:
    """Parse the pattern text format (grid format with ``x<k>`` tokens).

    Logs a warning when the input was not already canonical.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        raise FormatError("empty pattern")
    raw = []
    for number, line in enumerate(lines, 1):
        tokens = line.split()
        if not tokens:
            raise FormatError(f"line {number}: blank line inside pattern")
        try:
            raw.append([parse_variable(t) for t in tokens])
        except FormatError as exc:
            raise FormatError(f"line {number}: {exc}") from None
    width = len(raw[0])
    for number, row in enumerate(raw, 1):
        if len(row) != width:
            raise FormatError(f"line {number}: expected {width} cells, found {len(row)}")
    p = Pattern(raw)
    if [list(r) for r in p.data] != raw:
        log.warning("pattern was not in canonical form; variables renamed")
    return p


def parse_raw_pattern(text: str) -> tuple[tuple[int, ...], ...]:
    """Parse pattern text without renaming (keeps the file's variable numbers)."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty pattern")
    return _check_rect([parse_variable(t) for t in line.split()] for line in lines)


def format_pattern(p: Pattern) -> str:
    return "\n".join(" ".join(f"x{v}" for v in row) for row in p.data)
