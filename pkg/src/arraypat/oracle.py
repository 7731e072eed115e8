"""Bounded enumeration of array pattern languages and set algebra on the results.

A fragment keeps, for every grid shape within the bounds, a boolean mask over
all grids of that shape. The index of a grid is the row-major base-k number
formed by the positions of its symbols in the alphabet, so ascending index is
the canonical member order within a shape. Set operations, concatenations,
geometric transforms and letter maps then become array operations.

Membership of a shape's grids is computed from cell partitions: a grid is an
image for one fixed choice of tile dimensions iff it is constant on every
class of the induced partition of its cells. Three independent routes produce
the partitions (or the masks):

``substitution``
    enumerate image dimensions per variable, prune with interval arithmetic,
    then assemble symbolic label images with the real assembly functions;
``geometry``
    enumerate the tilings of the grid directly (row heights, per-row width
    compositions, and so on) and keep those whose tiles have consistent
    dimensions per variable;
``decide``
    run the membership decider on every grid.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from .errors import CapacityError, ConfigurationError, DomainError, FormatError
from .grid import (
    UNDEFINED,
    GeomOp,
    Grid,
    col_concat,
    format_grid,
    parse_grid,
    row_concat,
    transform_rows,
)
from .membership import Mode, decide
from .pattern import Pattern, canonicalize, enumerate_patterns
from .substitution import assemble, assemble_cr, assemble_rc

__all__ = [
    "Bounds",
    "GridSet",
    "LangFragment",
    "RefutationReport",
    "REFUTATION_CASES",
    "concat_closure",
    "distinguish",
    "enumerate_language",
    "format_fragment",
    "image_under",
    "max_cells",
    "parse_fragment",
    "preimage_under",
    "project_set",
    "refute_closure",
    "set_op",
    "shortest_members",
    "transform_set",
]

MAX_CELLS_ENV = "ARRAYPAT_MAX_CELLS"
DEFAULT_MAX_CELLS = 16
# Largest per-shape mask we are willing to allocate.
MAX_STATES = 1 << 24

METHODS = ("substitution", "geometry", "decide")


def max_cells() -> int:
    """Largest grid area an enumeration may reach (env ``ARRAYPAT_MAX_CELLS``)."""
    raw = os.environ.get(MAX_CELLS_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_MAX_CELLS
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{MAX_CELLS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigurationError(f"{MAX_CELLS_ENV} must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class Bounds:
    """Largest grid dimensions and the ordered alphabet of an enumeration."""

    max_rows: int
    max_cols: int
    alphabet: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if self.max_rows < 1 or self.max_cols < 1:
            raise ValueError("bounds must be at least 1x1")
        if not self.alphabet:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"alphabet has repeated symbols: {self.alphabet!r}")

    @property
    def k(self) -> int:
        return len(self.alphabet)

    def shapes(self) -> list[tuple[int, int]]:
        """All shapes within bounds in canonical (rows, cols) order."""
        return [(r, c) for r in range(1, self.max_rows + 1) for c in range(1, self.max_cols + 1)]

    def check_capacity(self) -> None:
        cells = self.max_rows * self.max_cols
        limit = max_cells()
        if cells > limit:
            raise CapacityError(
                f"bounds {self} reach {cells} cells; the limit is {limit} "
                f"(set {MAX_CELLS_ENV} to raise it)"
            )
        if self.k ** cells > MAX_STATES:
            raise CapacityError(
                f"{self.k}^{cells} grids of the largest shape exceed the mask limit {MAX_STATES}"
            )

    def __str__(self):
        return f"{self.max_rows}x{self.max_cols}"


def _by_area(shapes):
    return sorted(shapes, key=lambda s: (s[0] * s[1], s[0], s[1]))


@lru_cache(maxsize=64)
def _digits(k: int, n: int) -> np.ndarray:
    """Row ``i`` holds the n base-k digits of i, most significant first."""
    idx = np.arange(k ** n, dtype=np.int64)
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    table = ((idx[:, None] // powers) % k).astype(np.uint8)
    table.setflags(write=False)
    return table


def _powers(k: int, n: int) -> np.ndarray:
    return k ** np.arange(n - 1, -1, -1, dtype=np.int64)


class GridSet:
    """A set of grids within fixed bounds, stored as one mask per shape.

    Iteration yields grids in canonical order: rows, then columns, then the
    row-major cell sequence compared under the alphabet order.
    """

    def __init__(self, bounds: Bounds, masks: Optional[dict] = None):
        bounds.check_capacity()
        self.bounds = bounds
        self._masks = dict(masks or {})
        self._pos = {s: i for i, s in enumerate(bounds.alphabet)}

    # -- construction -----------------------------------------------------
    @classmethod
    def from_grids(cls, bounds: Bounds, grids: Iterable[Grid]) -> "GridSet":
        out = cls(bounds)
        for g in grids:
            shape = g.shape
            if not out._fits(shape):
                raise DomainError(f"grid of shape {shape[0]}x{shape[1]} lies outside bounds {bounds}")
            idx = out._index(g)
            if idx is None:
                raise DomainError(f"grid uses symbols outside the alphabet {bounds.alphabet!r}")
            out._writable(shape)[idx] = True
        return out

    @classmethod
    def universe(cls, bounds: Bounds) -> "GridSet":
        k = bounds.k
        return cls(bounds, {(r, c): np.ones(k ** (r * c), dtype=bool) for r, c in bounds.shapes()})

    # -- mask access ------------------------------------------------------
    def _fits(self, shape) -> bool:
        r, c = shape
        return 1 <= r <= self.bounds.max_rows and 1 <= c <= self.bounds.max_cols

    def mask(self, shape: tuple[int, int]) -> np.ndarray:
        m = self._masks.get(shape)
        if m is None:
            m = np.zeros(self.bounds.k ** (shape[0] * shape[1]), dtype=bool)
            self._masks[shape] = m
        return m

    def _writable(self, shape):
        return self.mask(shape)

    def _index(self, g: Grid) -> Optional[int]:
        k = self.bounds.k
        idx = 0
        pos = self._pos
        for c in g.cells():
            p = pos.get(c)
            if p is None:
                return None
            idx = idx * k + p
        return idx

    def grid_at(self, shape: tuple[int, int], index: int) -> Grid:
        r, c = shape
        digits = _digits(self.bounds.k, r * c)[index]
        alpha = self.bounds.alphabet
        return Grid._trusted(tuple(tuple(alpha[d] for d in digits[i * c : (i + 1) * c]) for i in range(r)))

    # -- set protocol -----------------------------------------------------
    def __contains__(self, g) -> bool:
        if not isinstance(g, Grid) or g.is_empty() or not self._fits(g.shape):
            return False
        idx = self._index(g)
        return idx is not None and bool(self.mask(g.shape)[idx])

    def __iter__(self) -> Iterator[Grid]:
        for shape in self.bounds.shapes():
            for idx in np.flatnonzero(self.mask(shape)):
                yield self.grid_at(shape, int(idx))

    def __len__(self) -> int:
        return int(sum(int(self.mask(s).sum()) for s in self.bounds.shapes()))

    def __bool__(self) -> bool:
        return any(self.mask(s).any() for s in self.bounds.shapes())

    def __eq__(self, other):
        if isinstance(other, GridSet):
            if other.bounds != self.bounds:
                return False
            return all(np.array_equal(self.mask(s), other.mask(s)) for s in self.bounds.shapes())
        if isinstance(other, (set, frozenset)):
            return self.to_set() == other
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(bounds={self.bounds}, size={len(self)})"

    def to_set(self) -> frozenset:
        return frozenset(self)

    @property
    def members(self) -> tuple[Grid, ...]:
        return tuple(self)

    def count(self, shape: tuple[int, int]) -> int:
        return int(self.mask(shape).sum())

    def materialize(self) -> "GridSet":
        """A plain GridSet holding every mask (forces lazy fragments)."""
        return GridSet(self.bounds, {s: self.mask(s).copy() for s in self.bounds.shapes()})

    def complement(self) -> "GridSet":
        return GridSet(self.bounds, {s: ~self.mask(s) for s in self.bounds.shapes()})

    def restrict(self, shapes: Iterable[tuple[int, int]]) -> "GridSet":
        keep = set(shapes)
        return GridSet(self.bounds, {s: self.mask(s).copy() for s in self.bounds.shapes() if s in keep})

    def minimal_shapes(self) -> list[tuple[int, int]]:
        """Shapes of minimal area that contain at least one member."""
        best = None
        found = []
        for s in _by_area(self.bounds.shapes()):
            area = s[0] * s[1]
            if best is not None and area > best:
                break
            if self.mask(s).any():
                best = area
                found.append(s)
        return found


# ---------------------------------------------------------------------------
# partitions of a shape's cells

def _canonical(labels: Iterable) -> tuple[int, ...]:
    seen: dict = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def _partition_mask(parts: Iterable[tuple[int, ...]], k: int, n: int) -> np.ndarray:
    digits = _digits(k, n)
    mask = np.zeros(k ** n, dtype=bool)
    for part in set(parts):
        first: dict = {}
        src, dst = [], []
        for t, cls in enumerate(part):
            f = first.setdefault(cls, t)
            if f != t:
                src.append(t)
                dst.append(f)
        if not src:
            mask[:] = True
            return mask
        mask |= np.all(digits[:, src] == digits[:, dst], axis=1)
    return mask


# substitution route: interval arithmetic on (rmin, rmax, cmin, cmax); () is
# the empty grid and None the undefined result.

def _irow(a, b):
    if a is None or b is None:
        return None
    if a == ():
        return b
    if b == ():
        return a
    lo, hi = max(a[2], b[2]), min(a[3], b[3])
    if lo > hi:
        return None
    return (a[0] + b[0], a[1] + b[1], lo, hi)


def _icol(a, b):
    if a is None or b is None:
        return None
    if a == ():
        return b
    if b == ():
        return a
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    if lo > hi:
        return None
    return (lo, hi, a[2] + b[2], a[3] + b[3])


def _label_image(v, h, w) -> Grid:
    return Grid._trusted(tuple(tuple((v, i, j) for j in range(w)) for i in range(h)))


def _union_labels(first: Grid, second: Grid) -> tuple[int, ...]:
    parent: dict = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in zip(first.cells(), second.cells()):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return _canonical(find(a) for a in first.cells())


def _substitution_partitions(P, mode: Mode, r: int, c: int) -> Iterator[tuple[int, ...]]:
    m, n = len(P), len(P[0])
    nvars = max(max(row) for row in P)
    cols = tuple(zip(*P))
    if mode is Mode.H:
        if r % m or c % n:
            return
        images = {v: _label_image(v, r // m, c // n) for v in range(1, nvars + 1)}
        yield _canonical(assemble_cr(images, P).cells())
        return
    need_cr = mode in (Mode.R, Mode.P)
    need_rc = mode in (Mode.C, Mode.P)
    box = (1, r, 1, c)
    ivals = {v: box for v in range(1, nvars + 1)}

    def feasible():
        for needed, lines, inner, outer in (
            (need_cr, P, _icol, _irow),
            (need_rc, cols, _irow, _icol),
        ):
            if not needed:
                continue
            res = assemble(ivals, lines, inner, outer, ())
            if res is None or not (res[0] <= r <= res[1] and res[2] <= c <= res[3]):
                return False
        return True

    def rec(v):
        if v > nvars:
            images = {u: _label_image(u, iv[0], iv[2]) for u, iv in ivals.items()}
            first = assemble_cr(images, P) if need_cr else None
            second = assemble_rc(images, P) if need_rc else None
            if mode is Mode.P:
                if first is UNDEFINED or second is UNDEFINED:
                    return
                yield _union_labels(first, second)
            else:
                layout = first if need_cr else second
                if layout is not UNDEFINED and layout.shape == (r, c):
                    yield _canonical(layout.cells())
            return
        for a in range(1, r + 1):
            for b in range(1, c + 1):
                ivals[v] = (a, a, b, b)
                if feasible():
                    yield from rec(v + 1)
        ivals[v] = box

    yield from rec(1)


# geometry route: enumerate tilings of the r x c grid directly.

def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def _tile(P, tiles, r, c):
    """Label each cell by (variable, offset) given per-cell (top, left, h, w).

    Returns None when some variable receives tiles of different sizes.
    """
    labels = [[None] * c for _ in range(r)]
    dims: dict = {}
    for (i, j), (top, left, h, w) in tiles.items():
        x = P[i][j]
        if dims.setdefault(x, (h, w)) != (h, w):
            return None
        for a in range(h):
            row = labels[top + a]
            for b in range(w):
                row[left + b] = (x, a, b)
    return _canonical(v for row in labels for v in row)


def _geometry_cr(P, r, c):
    m, n = len(P), len(P[0])
    if r < m or c < n:
        return
    for heights in _compositions(r, m):
        tops = [sum(heights[:i]) for i in range(m)]
        for widths in itertools.product(tuple(_compositions(c, n)), repeat=m):
            tiles = {}
            for i in range(m):
                left = 0
                for j in range(n):
                    tiles[i, j] = (tops[i], left, heights[i], widths[i][j])
                    left += widths[i][j]
            part = _tile(P, tiles, r, c)
            if part is not None:
                yield part


def _geometry_rc(P, r, c):
    m, n = len(P), len(P[0])
    if r < m or c < n:
        return
    for widths in _compositions(c, n):
        lefts = [sum(widths[:j]) for j in range(n)]
        for heights in itertools.product(tuple(_compositions(r, m)), repeat=n):
            tiles = {}
            for j in range(n):
                top = 0
                for i in range(m):
                    tiles[i, j] = (top, lefts[j], heights[j][i], widths[j])
                    top += heights[j][i]
            part = _tile(P, tiles, r, c)
            if part is not None:
                yield part


def _geometry_proper(P, r, c, uniform=False):
    m, n = len(P), len(P[0])
    if r < m or c < n:
        return
    if uniform:
        if r % m or c % n:
            return
        row_choices = [(r // m,) * m]
        col_choices = [(c // n,) * n]
    else:
        row_choices = _compositions(r, m)
        col_choices = tuple(_compositions(c, n))
    for heights in row_choices:
        tops = [sum(heights[:i]) for i in range(m)]
        for widths in col_choices:
            lefts = [sum(widths[:j]) for j in range(n)]
            tiles = {(i, j): (tops[i], lefts[j], heights[i], widths[j]) for i in range(m) for j in range(n)}
            part = _tile(P, tiles, r, c)
            if part is not None:
                yield part


def _geometry_partitions(P, mode: Mode, r: int, c: int):
    if mode is Mode.H:
        return _geometry_proper(P, r, c, uniform=True)
    if mode is Mode.P:
        return _geometry_proper(P, r, c)
    if mode is Mode.R:
        return _geometry_cr(P, r, c)
    return _geometry_rc(P, r, c)


# ---------------------------------------------------------------------------
# fragments

class LangFragment(GridSet):
    """The members of a pattern language that fit within the bounds.

    Masks are computed per shape on first access, so walking shapes in
    order (as ``distinguish`` does) stops paying once an answer is found.
    """

    def __init__(self, pattern: Pattern, mode: Mode, bounds: Bounds, method: str = "substitution"):
        if method not in METHODS:
            raise ValueError(f"unknown enumeration method {method!r} (expected one of {', '.join(METHODS)})")
        super().__init__(bounds)
        self.pattern = pattern
        self.mode = mode
        self.method = method

    def mask(self, shape):
        m = self._masks.get(shape)
        if m is None:
            m = self._compute(shape)
            m.setflags(write=False)
            self._masks[shape] = m
        return m

    def _writable(self, shape):
        raise TypeError("language fragments are read-only")

    def _compute(self, shape) -> np.ndarray:
        r, c = shape
        k = self.bounds.k
        P = self.pattern.data
        if self.method == "decide":
            out = np.zeros(k ** (r * c), dtype=bool)
            for idx in range(k ** (r * c)):
                out[idx] = decide(self.grid_at(shape, idx), self.pattern, self.mode).member
            return out
        producer: Callable = _substitution_partitions if self.method == "substitution" else _geometry_partitions
        if self.mode is Mode.RC:
            return _partition_mask(
                itertools.chain(producer(P, Mode.R, r, c), producer(P, Mode.C, r, c)), k, r * c
            )
        return _partition_mask(producer(P, self.mode, r, c), k, r * c)

    def __repr__(self):
        return f"LangFragment({self.pattern!r}, mode={self.mode}, bounds={self.bounds})"


def enumerate_language(p, z: Mode | str, b: Bounds, method: str = "substitution") -> LangFragment:
    """All grids within ``b`` that lie in the ``z``-language of ``p``.

    ``method`` picks the enumeration route: ``substitution`` (default),
    ``geometry`` (direct tilings of each grid shape) or ``decide``.
    """
    b.check_capacity()
    return LangFragment(canonicalize(p), Mode.parse(z), b, method)


def shortest_members(p, z: Mode | str, alphabet: Iterable) -> GridSet:
    """Members of minimal area (all of shape ``p.rows x p.cols``)."""
    p = canonicalize(p)
    frag = enumerate_language(p, z, Bounds(p.nrows, p.ncols, tuple(alphabet)))
    return frag.restrict(frag.minimal_shapes())


# ---------------------------------------------------------------------------
# set algebra

_OP_ALIASES = {
    "union": "union",
    "intersection": "intersection",
    "difference": "difference",
    "rowconcat": "row",
    "row": "row",
    "colconcat": "col",
    "col": "col",
}


def _check_compatible(a: GridSet, b: GridSet):
    if a.bounds != b.bounds:
        raise ConfigurationError(f"incompatible bounds/alphabets: {a.bounds!r} vs {b.bounds!r}")


def _row_concat_masks(a: GridSet, b: GridSet) -> dict:
    bounds = a.bounds
    out: dict = {}
    for (r1, c) in bounds.shapes():
        m1 = a.mask((r1, c))
        if not m1.any():
            continue
        for r2 in range(1, bounds.max_rows - r1 + 1):
            m2 = b.mask((r2, c))
            if not m2.any():
                continue
            shape = (r1 + r2, c)
            prod = np.logical_and.outer(m1, m2).ravel()
            out[shape] = out[shape] | prod if shape in out else prod
    return out


def _col_concat_masks(a: GridSet, b: GridSet) -> dict:
    bounds = a.bounds
    k = bounds.k
    out: dict = {}
    for (r, c1) in bounds.shapes():
        m1 = a.mask((r, c1))
        if not m1.any():
            continue
        for c2 in range(1, bounds.max_cols - c1 + 1):
            m2 = b.mask((r, c2))
            if not m2.any():
                continue
            outer = np.logical_and.outer(m1.reshape((k ** c1,) * r), m2.reshape((k ** c2,) * r))
            order = [ax for i in range(r) for ax in (i, r + i)]
            prod = outer.transpose(order).ravel()
            shape = (r, c1 + c2)
            out[shape] = out[shape] | prod if shape in out else prod
    return out


def set_op(a: GridSet, b: GridSet, op: str) -> GridSet:
    """Union, intersection, difference, ``rowConcat`` or ``colConcat``.

    Concatenations drop undefined results and results beyond the bounds.
    """
    key = _OP_ALIASES.get(op.replace("_", "").replace("-", "").lower())
    if key is None:
        raise ValueError(f"unknown set operation {op!r}")
    _check_compatible(a, b)
    shapes = a.bounds.shapes()
    if key == "union":
        return GridSet(a.bounds, {s: a.mask(s) | b.mask(s) for s in shapes})
    if key == "intersection":
        return GridSet(a.bounds, {s: a.mask(s) & b.mask(s) for s in shapes})
    if key == "difference":
        return GridSet(a.bounds, {s: a.mask(s) & ~b.mask(s) for s in shapes})
    if key == "row":
        return GridSet(a.bounds, _row_concat_masks(a, b))
    return GridSet(a.bounds, _col_concat_masks(a, b))


def concat_closure(a: GridSet, direction: str) -> GridSet:
    """Row (``"row"``) or column (``"col"``) concatenation closure within bounds."""
    op = {"row": "row", "col": "col"}.get(direction)
    if op is None:
        raise ValueError(f"direction must be 'row' or 'col', got {direction!r}")
    result = a.materialize()
    while True:
        grown = set_op(result, set_op(result, a, op), "union")
        if grown == result:
            return result
        result = grown


def _remap(src: GridSet, bounds: Bounds, shape_map, cell_perm, letter_map) -> GridSet:
    """Move every member of ``src`` to a new shape/alphabet.

    ``cell_perm(shape)`` lists, for each cell of the new shape, the old cell
    it is read from; ``letter_map`` sends old digit values to new ones.
    """
    out: dict = {}
    k_old, k_new = src.bounds.k, bounds.k
    for shape in src.bounds.shapes():
        m = src.mask(shape)
        if not m.any():
            continue
        new_shape = shape_map(shape)
        n = shape[0] * shape[1]
        digits = _digits(k_old, n)[np.flatnonzero(m)]
        digits = letter_map[digits][:, cell_perm(shape)]
        idx = digits.astype(np.int64) @ _powers(k_new, n)
        target = out.setdefault(new_shape, np.zeros(k_new ** n, dtype=bool))
        target[idx] = True
    return GridSet(bounds, out)


_SWAPS = {GeomOp.TRANSPOSE, GeomOp.RIGHT_TURN, GeomOp.LEFT_TURN}


def transform_set(a: GridSet, op: GeomOp | str) -> GridSet:
    """Apply a geometric operation to every member."""
    op = GeomOp.parse(op)
    swap = op in _SWAPS
    b = a.bounds
    bounds = Bounds(b.max_cols, b.max_rows, b.alphabet) if swap else b

    def shape_map(shape):
        return shape[::-1] if swap else shape

    def cell_perm(shape):
        r, c = shape
        cells = tuple(tuple(range(i * c, (i + 1) * c)) for i in range(r))
        return [t for row in transform_rows(cells, op) for t in row]

    return _remap(a, bounds, shape_map, cell_perm, np.arange(b.k))


def project_set(a: GridSet, mapping: dict, alphabet: Iterable) -> GridSet:
    """Image of every member under a letter-to-letter map into ``alphabet``."""
    alphabet = tuple(alphabet)
    pos = {s: i for i, s in enumerate(alphabet)}
    try:
        table = np.array([pos[mapping[s]] for s in a.bounds.alphabet])
    except KeyError as exc:
        raise DomainError(f"symbol {exc.args[0]!r} has no image inside the target alphabet") from None
    bounds = Bounds(a.bounds.max_rows, a.bounds.max_cols, alphabet)
    return _remap(a, bounds, lambda s: s, lambda s: list(range(s[0] * s[1])), table)


def preimage_under(a: GridSet, coding: dict, alphabet: Iterable) -> GridSet:
    """All grids over ``alphabet`` whose letter-to-letter image lies in ``a``."""
    alphabet = tuple(alphabet)
    pos = a._pos
    try:
        table = np.array([pos[coding[s]] for s in alphabet], dtype=np.int64)
    except KeyError as exc:
        raise DomainError(f"symbol {exc.args[0]!r} has no image inside {a.bounds.alphabet!r}") from None
    bounds = Bounds(a.bounds.max_rows, a.bounds.max_cols, alphabet)
    out = {}
    for shape in bounds.shapes():
        n = shape[0] * shape[1]
        idx = table[_digits(len(alphabet), n)] @ _powers(a.bounds.k, n)
        out[shape] = a.mask(shape)[idx]
    return GridSet(bounds, out)


def image_under(a: GridSet, images: dict, bounds: Bounds) -> GridSet:
    """Image of every member under the morphism sending each symbol to a grid.

    Images need not be uniform; members whose image is undefined or falls
    outside ``bounds`` are dropped.
    """
    images = {s: (g if isinstance(g, Grid) else Grid.from_string(g)) for s, g in images.items()}
    out = []
    for g in a:
        w = assemble(images, g.data, col_concat, row_concat)
        if w is UNDEFINED or w.nrows > bounds.max_rows or w.ncols > bounds.max_cols:
            continue
        out.append(w)
    return GridSet.from_grids(bounds, out)


# ---------------------------------------------------------------------------
# comparisons

def _first_difference(a: GridSet, b: GridSet):
    """Smallest grid in the symmetric difference and whether it lies in ``a``."""
    for shape in _by_area(a.bounds.shapes()):
        diff = a.mask(shape) ^ b.mask(shape)
        hits = np.flatnonzero(diff)
        if hits.size:
            idx = int(hits[0])
            return a.grid_at(shape, idx), bool(a.mask(shape)[idx])
    return None


def distinguish(p, z1: Mode | str, q, z2: Mode | str, b: Bounds,
                shortcut: bool = True, method: str = "substitution") -> Optional[Grid]:
    """A smallest grid on which the two bounded languages disagree, or None.

    Smallest means least area, then fewest rows, then canonical cell order.
    With ``shortcut`` the pair (p, z) vs (q, z) with p equivalent to q is
    answered without enumeration.
    """
    p, q = canonicalize(p), canonicalize(q)
    m1, m2 = Mode.parse(z1), Mode.parse(z2)
    if shortcut and p == q and m1 is m2:
        return None
    found = _first_difference(enumerate_language(p, m1, b, method), enumerate_language(q, m2, b, method))
    return None if found is None else found[0]


# ---------------------------------------------------------------------------
# refutations

@dataclass(frozen=True)
class CandidateResult:
    pattern: Pattern
    witness: Optional[Grid]
    # "missing": the witness is in the target but not generated;
    # "extra": generated but not in the target.
    kind: Optional[str]

    @property
    def separated(self) -> bool:
        return self.witness is not None


@dataclass(frozen=True)
class RefutationReport:
    case: str
    mode: Mode
    bounds: Bounds
    description: str
    forced_shape: Optional[tuple[int, int]]
    minimal_members: tuple[Grid, ...]
    candidates: tuple[CandidateResult, ...] = field(default_factory=tuple)

    @property
    def success(self) -> bool:
        return all(c.separated for c in self.candidates)

    def result_for(self, p) -> CandidateResult:
        p = canonicalize(p)
        for c in self.candidates:
            if c.pattern == p:
                return c
        raise KeyError(repr(p))

    def __str__(self):
        def inline(g):
            return " / ".join(" ".join(map(str, row)) for row in g.data)

        lines = [
            f"case: {self.case}",
            f"mode: {self.mode}",
            f"bounds: {self.bounds} alphabet={','.join(map(str, self.bounds.alphabet))}",
            f"target: {self.description}",
        ]
        if self.forced_shape is None:
            lines.append("forced shape: none (minimal members have several shapes)")
        else:
            r, c = self.forced_shape
            lines.append(f"forced shape: {r}x{c} ({len(self.minimal_members)} minimal members)")
        lines.append(f"candidates: {len(self.candidates)}")
        for cand in self.candidates:
            text = " / ".join(
                " ".join(f"x{v}" for v in row) for row in cand.pattern.data
            )
            if cand.separated:
                lines.append(f"  {text}: {cand.kind} {inline(cand.witness)}")
            else:
                lines.append(f"  {text}: not separated at these bounds")
        lines.append("result: " + ("refuted" if self.success else "not refuted"))
        return "\n".join(lines)


def _frag(rows, mode, bounds):
    return enumerate_language(Pattern(rows), mode, bounds)


def _case_union(mode, b):
    target = set_op(_frag([[1, 2, 1]], mode, b), _frag([[1, 1, 2]], mode, b), "union")
    return target, "L(x1 x2 x1) union L(x1 x1 x2)"


def _case_intersection(mode, b):
    target = set_op(_frag([[1, 2, 1]], mode, b), _frag([[1, 1, 2]], mode, b), "intersection")
    return target, "L(x1 x2 x1) intersect L(x1 x1 x2)"


def _case_complement(mode, b):
    return _frag([[1, 2]], mode, b).complement(), "complement of L(x1 x2)"


def _case_morphism(mode, b):
    a, bb = b.alphabet[0], b.alphabet[1]
    image = Grid(((a, bb),))
    target = image_under(_frag([[1]], mode, b), {a: image, bb: image}, b)
    return target, f"image of L(x1) under {a}->{a}{bb}, {bb}->{a}{bb}"


INVERSE_CODING = {"a": "1", "b": "1", "c": "2", "d": "3"}


def _case_inverse_coding(mode, b):
    target_bounds = Bounds(b.max_rows, b.max_cols, ("1", "2", "3"))
    words = _frag([[1, 1]], mode, target_bounds)
    target = preimage_under(words, INVERSE_CODING, b.alphabet)
    return target, "preimage of L(x1 x1) over {1,2,3} under a,b->1, c->2, d->3"


def _case_kleene(mode, b):
    return concat_closure(_frag([[1, 1]], mode, b), "col"), "column concatenation closure of L(x1 x1)"


_GAMMA = [[1, 2], [2, 1]]


def _case_transposition(mode, b):
    src = _frag(_GAMMA, mode, Bounds(b.max_cols, b.max_rows, b.alphabet))
    return transform_set(src, GeomOp.TRANSPOSE), "transpose of L(x1 x2 / x2 x1)"


def _case_quarter_turn(mode, b):
    src = _frag(_GAMMA, mode, Bounds(b.max_cols, b.max_rows, b.alphabet))
    return transform_set(src, GeomOp.RIGHT_TURN), "right turn of L(x1 x2 / x2 x1)"


def _case_column_concat(mode, b):
    left = _frag([[1, 2], [2, 3]], mode, b)
    return set_op(left, left, "col"), "L(x1 x2 / x2 x3) column-concatenated with itself"


def _case_concat_p(mode, b):
    top = _frag([[1, 1]], mode, b)
    bottom = _frag([[1, 2], [1, 3]], mode, b)
    return set_op(top, bottom, "row"), "L(x1 x1) row-concatenated with L(x1 x2 / x1 x3)"


def _case_concat_h(mode, b):
    universal = _frag([[1]], mode, b)
    return set_op(universal, universal, "row"), "L(x1) row-concatenated with itself"


# name -> (builder, default mode, default bounds)
REFUTATION_CASES: dict = {
    "union": (_case_union, Mode.P, Bounds(1, 6, ("a", "b"))),
    "intersection": (_case_intersection, Mode.P, Bounds(1, 6, ("a", "b"))),
    "complement": (_case_complement, Mode.P, Bounds(1, 6, ("a", "b"))),
    "morphism": (_case_morphism, Mode.P, Bounds(1, 8, ("a", "b"))),
    "inverse-coding": (_case_inverse_coding, Mode.P, Bounds(1, 6, ("a", "b", "c", "d"))),
    "kleene": (_case_kleene, Mode.P, Bounds(1, 8, ("a", "b"))),
    "transposition": (_case_transposition, Mode.R, Bounds(3, 3, ("a", "b"))),
    "quarter-turn": (_case_quarter_turn, Mode.R, Bounds(3, 3, ("a", "b"))),
    "column-concat": (_case_column_concat, Mode.R, Bounds(2, 6, ("a", "b"))),
    "row-concat-p": (_case_concat_p, Mode.P, Bounds(4, 4, ("a", "b"))),
    "row-concat-h": (_case_concat_h, Mode.H, Bounds(3, 3, ("a", "b"))),
}


def refute_closure(case: str, bounds: Optional[Bounds] = None,
                   mode: Mode | str | None = None) -> RefutationReport:
    """Run the exhaustion behind a non-closure argument at the given bounds.

    Builds the target set, reads off the shape forced by its minimal
    members, and compares every canonical pattern of that shape against the
    target, recording the smallest separating grid for each.
    """
    try:
        builder, default_mode, default_bounds = REFUTATION_CASES[case]
    except KeyError:
        names = ", ".join(REFUTATION_CASES)
        raise ValueError(f"unknown refutation case {case!r} (expected one of {names})") from None
    z = default_mode if mode is None else Mode.parse(mode)
    b = default_bounds if bounds is None else bounds
    if case == "morphism" and b.k < 2:
        raise ValueError("the morphism case needs at least two symbols")
    if case == "inverse-coding" and not set(INVERSE_CODING) <= set(b.alphabet):
        raise ValueError("the inverse-coding case needs the alphabet a,b,c,d")
    b.check_capacity()
    target, description = builder(z, b)
    if case == "inverse-coding":
        b = target.bounds
    shapes = target.minimal_shapes()
    if not shapes:
        raise ValueError(f"target of case {case!r} is empty at bounds {b}; enlarge the bounds")
    if len(shapes) > 1:
        # Every pattern's minimal members share the pattern's own shape.
        return RefutationReport(case, z, b, description, None, tuple(target.restrict(shapes)))
    forced = shapes[0]
    minimal = tuple(target.restrict(shapes))
    results = []
    for cand in enumerate_patterns(*forced):
        found = _first_difference(target, enumerate_language(cand, z, b))
        if found is None:
            results.append(CandidateResult(cand, None, None))
        else:
            grid, in_target = found
            results.append(CandidateResult(cand, grid, "missing" if in_target else "extra"))
    return RefutationReport(case, z, b, description, forced, minimal, tuple(results))


# ---------------------------------------------------------------------------
# text format

def format_fragment(frag: GridSet, pattern_name: str = "-") -> str:
    b = frag.bounds
    mode = getattr(frag, "mode", None)
    header = (
        f"# pattern={pattern_name} mode={mode if mode is not None else '-'} "
        f"bounds={b.max_rows}x{b.max_cols} alphabet={','.join(map(str, b.alphabet))}"
    )
    body = "\n\n".join(format_grid(g) for g in frag)
    return header + ("\n" + body if body else "") + "\n"


def parse_fragment(text: str) -> tuple[dict, list[Grid]]:
    """Inverse of :func:`format_fragment`: header fields and member grids."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise FormatError("fragment must start with a '# pattern=... mode=...' header")
    header = {}
    for item in lines[0][1:].split():
        if "=" not in item:
            raise FormatError(f"bad header field {item!r}")
        key, value = item.split("=", 1)
        header[key] = value
    grids = []
    block: list[str] = []
    for line in lines[1:] + [""]:
        if line.strip():
            block.append(line)
        elif block:
            grids.append(parse_grid("\n".join(block)))
            block = []
    return header, grids
