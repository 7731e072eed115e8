"""Immutable rectangular arrays and their partial concatenations.

A :class:`Grid` is a rectangular array of symbol tokens. Row concatenation
(``row_concat``, stacking) and column concatenation (``col_concat``, placing
side by side) are partial; a dimension mismatch yields :data:`UNDEFINED`,
which is absorbing. The empty grid :data:`EMPTY` is the identity of both.
"""

from __future__ import annotations

import enum
from collections.abc import Hashable, Iterable, Mapping, Sequence
from typing import Union

from .errors import DomainError, FormatError

__all__ = [
    "EMPTY",
    "UNDEFINED",
    "GeomOp",
    "Grid",
    "Undefined",
    "col_concat",
    "conjugate",
    "format_grid",
    "parse_grid",
    "project",
    "row_concat",
    "subgrid",
    "transform",
]

Rows = tuple[tuple[Hashable, ...], ...]


class Grid:
    """A rectangular two-dimensional word.

    Rows are given as any iterable of sequences. Indexing through ``grid[i, j]``
    is 1-based, ``grid.data`` exposes the 0-based nested tuples.
    """

    __slots__ = ("_data", "_hash")

    def __init__(self, rows: Iterable[Sequence[Hashable]] = ()):
        data = tuple(tuple(row) for row in rows)
        if data:
            width = len(data[0])
            if width == 0:
                if any(data):
                    raise FormatError("ragged rows: first row is empty")
                data = ()
            elif any(len(row) != width for row in data):
                raise FormatError(
                    "ragged rows: lengths " + ", ".join(str(len(r)) for r in data)
                )
        self._data = data
        self._hash = None

    @classmethod
    def _trusted(cls, data: Rows) -> "Grid":
        # Callers guarantee rectangular nested tuples.
        grid = object.__new__(cls)
        grid._data = data
        grid._hash = None
        return grid

    @classmethod
    def from_string(cls, text: str) -> "Grid":
        """Build a grid of one-character tokens from ``"ab/cd"``-style text."""
        if not text:
            return EMPTY
        return cls(tuple(row) for row in text.split("/"))

    @property
    def data(self) -> Rows:
        return self._data

    @property
    def nrows(self) -> int:
        return len(self._data)

    @property
    def ncols(self) -> int:
        return len(self._data[0]) if self._data else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def size(self) -> int:
        return self.nrows * self.ncols

    def is_empty(self) -> bool:
        return not self._data

    def symbols(self) -> frozenset:
        return frozenset(c for row in self._data for c in row)

    def cells(self) -> tuple:
        """Row-major flat tuple of the cells."""
        return tuple(c for row in self._data for c in row)

    def __getitem__(self, key: tuple[int, int]):
        i, j = key
        if not (1 <= i <= self.nrows and 1 <= j <= self.ncols):
            raise IndexError(f"cell ({i}, {j}) outside {self.nrows}x{self.ncols} grid")
        return self._data[i - 1][j - 1]

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._data)
        return self._hash

    def __repr__(self):
        if not self._data:
            return "Grid(λ)"
        return "Grid(" + "/".join(" ".join(map(str, row)) for row in self._data) + ")"

    def __str__(self):
        return format_grid(self)

    def sort_key(self, order: Mapping[Hashable, int] | None = None) -> tuple:
        """Key ordering grids by rows, columns, then row-major cells."""
        cells = self.cells()
        if order is not None:
            cells = tuple(order[c] for c in cells)
        return (self.nrows, self.ncols, cells)


class Undefined:
    """The absorbing result of a concatenation whose dimensions do not match."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __str__(self):
        return "undefined"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (Undefined, ())


UNDEFINED = Undefined()
EMPTY = Grid()

ConcatResult = Union[Grid, Undefined]


def row_concat(a: ConcatResult, b: ConcatResult) -> ConcatResult:
    """Stack ``a`` above ``b``; undefined when the widths differ."""
    if a is UNDEFINED or b is UNDEFINED:
        return UNDEFINED
    if not a._data:
        return b
    if not b._data:
        return a
    if len(a._data[0]) != len(b._data[0]):
        return UNDEFINED
    return Grid._trusted(a._data + b._data)


def col_concat(a: ConcatResult, b: ConcatResult) -> ConcatResult:
    """Place ``a`` to the left of ``b``; undefined when the heights differ."""
    if a is UNDEFINED or b is UNDEFINED:
        return UNDEFINED
    if not a._data:
        return b
    if not b._data:
        return a
    if len(a._data) != len(b._data):
        return UNDEFINED
    return Grid._trusted(tuple(x + y for x, y in zip(a._data, b._data)))


def subgrid(a: Grid, top: int, left: int, height: int, width: int) -> Grid:
    """The ``height`` x ``width`` block whose top-left cell is ``a[top, left]``."""
    if height < 1 or width < 1:
        raise IndexError("subgrid height and width must be positive")
    if top < 1 or left < 1 or top + height - 1 > a.nrows or left + width - 1 > a.ncols:
        raise IndexError(
            f"block ({top}, {left}) of {height}x{width} exceeds {a.nrows}x{a.ncols} grid"
        )
    return Grid._trusted(
        tuple(row[left - 1 : left - 1 + width] for row in a._data[top - 1 : top - 1 + height])
    )


class GeomOp(enum.Enum):
    """Geometric operations on arrays."""

    TRANSPOSE = "transpose"
    HFLIP = "hflip"  # reflection along the horizontal axis: row order reversed
    VFLIP = "vflip"  # reflection along the vertical axis: column order reversed
    RIGHT_TURN = "right"
    LEFT_TURN = "left"
    HALF_TURN = "half"

    @classmethod
    def parse(cls, name: "str | GeomOp") -> "GeomOp":
        if isinstance(name, GeomOp):
            return name
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "t": cls.TRANSPOSE,
            "right-turn": cls.RIGHT_TURN,
            "left-turn": cls.LEFT_TURN,
            "half-turn": cls.HALF_TURN,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(op.value for op in cls)
            raise FormatError(f"unknown geometric operation {name!r} (expected one of {names})")


def transform_rows(data: Rows, op: GeomOp) -> Rows:
    """Apply ``op`` to raw nested tuples; shared with patterns."""
    if not data:
        return data
    if op is GeomOp.TRANSPOSE:
        return tuple(zip(*data))
    if op is GeomOp.HFLIP:
        return data[::-1]
    if op is GeomOp.VFLIP:
        return tuple(row[::-1] for row in data)
    if op is GeomOp.RIGHT_TURN:
        return tuple(zip(*data[::-1]))
    if op is GeomOp.LEFT_TURN:
        return tuple(zip(*data))[::-1]
    if op is GeomOp.HALF_TURN:
        return tuple(row[::-1] for row in data[::-1])
    raise TypeError(f"not a GeomOp: {op!r}")


def transform(a: Grid, op: GeomOp | str) -> Grid:
    return Grid._trusted(transform_rows(a.data, GeomOp.parse(op)))


def conjugate(a: Grid, alphabet: Iterable[Hashable]) -> Grid:
    """Exchange the two symbols of a binary alphabet everywhere in ``a``."""
    pair = list(dict.fromkeys(alphabet))
    if len(pair) != 2:
        raise DomainError(f"conjugation needs exactly two symbols, got {pair!r}")
    x, y = pair
    return project(a, {x: y, y: x})


def project(a: Grid, mapping: Mapping[Hashable, Hashable]) -> Grid:
    """Apply a letter-to-letter map cell by cell."""
    try:
        return Grid._trusted(tuple(tuple(mapping[c] for c in row) for row in a.data))
    except KeyError as exc:
        raise DomainError(f"symbol {exc.args[0]!r} has no image under the projection") from None


def parse_grid(text: str, allow_empty: bool = False) -> Grid:
    """Parse the whitespace-separated grid text format.

    One row per line, cells separated by spaces or tabs. Trailing blank lines
    are ignored; blank lines elsewhere are an error.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        if allow_empty:
            return EMPTY
        raise FormatError("empty grid")
    rows = []
    for number, line in enumerate(lines, 1):
        cells = line.split()
        if not cells:
            raise FormatError(f"line {number}: blank line inside grid")
        rows.append(tuple(cells))
    width = len(rows[0])
    for number, row in enumerate(rows, 1):
        if len(row) != width:
            raise FormatError(f"line {number}: expected {width} cells, found {len(row)}")
    return Grid._trusted(tuple(rows))


def format_grid(a: Grid) -> str:
    return "\n".join(" ".join(str(c) for c in row) for row in a.data)
