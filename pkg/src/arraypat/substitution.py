"""Substitutions and the two ways of assembling a pattern's image.

``assemble_cr`` column-concatenates the images along each pattern row and
then stacks the resulting strips; ``assemble_rc`` stacks the images down
each pattern column and then places the columns side by side. Either may be
undefined. For uniform substitutions they coincide and give the
two-dimensional morphism induced by the substitution.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from typing import NamedTuple

from .errors import FormatError, IncompleteSubstitutionError, MorphismError
from .grid import EMPTY, UNDEFINED, Grid, col_concat, row_concat
from .pattern import Pattern, parse_variable

__all__ = [
    "Substitution",
    "UniformDims",
    "apply_morphism",
    "assemble",
    "assemble_cr",
    "assemble_rc",
    "compose_uniform",
    "format_substitution",
    "parse_substitution",
    "uniform_dims",
]


class UniformDims(NamedTuple):
    m: int
    n: int


def _as_grid(image) -> Grid:
    if isinstance(image, Grid):
        return image
    if isinstance(image, str):
        return Grid.from_string(image)
    return Grid(image)


class Substitution(Mapping):
    """Immutable map from variables (positive ints) to non-empty grids.

    Keys may be given as ints or ``x<k>`` tokens; images as grids, nested
    sequences, or ``"ab/cd"`` strings of one-character symbols.
    """

    __slots__ = ("_images",)

    def __init__(self, images: Mapping | Iterable[tuple] = ()):
        items = images.items() if isinstance(images, Mapping) else images
        built = {}
        for var, image in items:
            grid = _as_grid(image)
            if grid.is_empty():
                raise ValueError(f"image of x{parse_variable(var)} is empty; substitutions are non-erasing")
            built[parse_variable(var)] = grid
        self._images = built

    def __getitem__(self, var) -> Grid:
        return self._images[parse_variable(var) if not isinstance(var, int) else var]

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._images))

    def __len__(self) -> int:
        return len(self._images)

    def __hash__(self):
        return hash(frozenset(self._images.items()))

    def __eq__(self, other):
        if isinstance(other, Substitution):
            return self._images == other._images
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"x{v}: {self._images[v]!r}" for v in self)
        return f"Substitution({{{body}}})"

    def __str__(self):
        return format_substitution(self)

    def restrict(self, variables: Iterable[int]) -> "Substitution":
        keep = set(variables)
        return Substitution({v: g for v, g in self._images.items() if v in keep})


def _var_rows(p) -> tuple[tuple, ...]:
    """Rows of variable ids for a Pattern, a grid of x-tokens, or nested ints."""
    if isinstance(p, Pattern):
        return p.data
    if isinstance(p, Grid):
        return tuple(tuple(parse_variable(t) for t in row) for row in p.data)
    return tuple(tuple(row) for row in p)


def assemble(images: Mapping, lines: Iterable[Iterable[Hashable]],
             inner: Callable, outer: Callable, unit=EMPTY):
    """Fold ``inner`` along each line of variables, then ``outer`` across lines."""
    result = unit
    for line in lines:
        strip = unit
        for v in line:
            strip = inner(strip, images[v])
        result = outer(result, strip)
    return result


def _lookup(h: Mapping, rows) -> dict:
    needed = {v for row in rows for v in row}
    try:
        return {v: h[v] for v in needed}
    except KeyError as exc:
        raise IncompleteSubstitutionError(f"no image for variable x{exc.args[0]}") from None


def assemble_cr(h: Mapping, p):
    """Column-concatenate each pattern row, then row-concatenate the strips."""
    rows = _var_rows(p)
    return assemble(_lookup(h, rows), rows, col_concat, row_concat)


def assemble_rc(h: Mapping, p):
    """Row-concatenate each pattern column, then column-concatenate those."""
    rows = _var_rows(p)
    return assemble(_lookup(h, rows), zip(*rows), row_concat, col_concat)


def uniform_dims(h: Mapping, over: Iterable[int] | None = None) -> UniformDims | None:
    """Common image dimensions of ``h`` on ``over`` (default: its whole domain)."""
    variables = list(h) if over is None else list(over)
    try:
        shapes = {h[v].shape for v in variables}
    except KeyError as exc:
        raise IncompleteSubstitutionError(f"no image for variable x{exc.args[0]}") from None
    if len(shapes) != 1:
        return None
    return UniformDims(*shapes.pop())


def apply_morphism(h: Mapping, p) -> Grid:
    """Image of ``p`` under the morphism induced by a uniform substitution."""
    rows = _var_rows(p)
    used = {v for row in rows for v in row}
    if uniform_dims(h, used) is None:
        raise MorphismError("substitution is not uniform on the pattern's variables")
    result = assemble_cr(h, rows)
    assert result is not UNDEFINED
    return result


def compose_uniform(outer: Mapping, inner: Mapping) -> Substitution:
    """``x -> outer applied to inner(x)``, where inner's images are x-token grids."""
    if uniform_dims(inner) is None:
        raise MorphismError("inner substitution is not uniform")
    inner_rows = {x: _var_rows(inner[x]) for x in inner}
    used = {v for rows in inner_rows.values() for row in rows for v in row}
    if uniform_dims(outer, used) is None:
        raise MorphismError("outer substitution is not uniform on the variables inner produces")
    return Substitution({x: assemble_cr(outer, rows) for x, rows in inner_rows.items()})


def parse_substitution(text: str) -> Substitution:
    """Parse lines of the form ``x2 = a b / c d``; ``#`` starts a comment."""
    images = {}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"line {number}: expected 'x<k> = <row> / <row> ...'")
        lhs, rhs = line.split("=", 1)
        try:
            var = parse_variable(lhs.strip())
        except FormatError as exc:
            raise FormatError(f"line {number}: {exc}") from None
        if var in images:
            raise FormatError(f"line {number}: x{var} bound twice")
        rows = [r.split() for r in rhs.split("/")]
        if not rows or any(not r for r in rows):
            raise FormatError(f"line {number}: empty row in image of x{var}")
        if len({len(r) for r in rows}) != 1:
            raise FormatError(f"line {number}: ragged image of x{var}")
        images[var] = Grid(rows)
    return Substitution(images)


def format_substitution(h: Mapping) -> str:
    lines = []
    for v in sorted(h):
        rows = " / ".join(" ".join(str(c) for c in row) for row in h[v].data)
        lines.append(f"x{v} = {rows}")
    return "\n".join(lines)
