"""Pattern-level constructions: expansion, h-mode intersection, concatenation,
and transfer of geometric operations and projections to patterns."""

from __future__ import annotations

from collections.abc import Mapping
from math import lcm
from typing import NamedTuple

from .errors import UnsupportedOperationError
from .grid import GeomOp
from .membership import Mode
from .pattern import Pattern, canonicalize, transform_pattern

__all__ = [
    "ExpansionSpec",
    "SUPPORTED_CONCATENATIONS",
    "concat_pattern",
    "expand",
    "intersect_h",
    "lcm_specs",
    "transfer",
]


class ExpansionSpec(NamedTuple):
    row_factor: int
    col_factor: int


def expand(p, spec: ExpansionSpec, tag=None) -> Pattern:
    """Replace every variable by a block of fresh variables.

    All occurrences of a variable receive the same block, so the result's
    coincidences refine those of ``p``; its dimensions are multiplied by the
    factors.
    """
    p = canonicalize(p)
    rf, cf = spec
    if rf < 1 or cf < 1:
        raise ValueError("expansion factors must be positive")
    return Pattern(_expanded_rows(p, rf, cf, tag))


def _expanded_rows(p: Pattern, rf: int, cf: int, tag=None):
    return [
        [(tag, x, a, b) for x in row for b in range(cf)]
        for row in p.data
        for a in range(rf)
    ]


def lcm_specs(p: Pattern, q: Pattern, rows: bool = True, cols: bool = True):
    """Expansion factors that bring both patterns to common lcm dimensions."""
    m = lcm(p.nrows, q.nrows) if rows else None
    n = lcm(p.ncols, q.ncols) if cols else None
    sp = ExpansionSpec(m // p.nrows if rows else 1, n // p.ncols if cols else 1)
    sq = ExpansionSpec(m // q.nrows if rows else 1, n // q.ncols if cols else 1)
    return sp, sq


def intersect_h(p, q) -> Pattern:
    """A pattern whose h-language is the intersection of the two h-languages."""
    p, q = canonicalize(p), canonicalize(q)
    sp, sq = lcm_specs(p, q)
    left = _expanded_rows(p, *sp, tag="p")
    right = _expanded_rows(q, *sq, tag="q")
    parent: dict = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    # Cells coincide when they coincide in either expansion.
    for lrow, rrow in zip(left, right):
        for a, b in zip(lrow, rrow):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    return Pattern([[find(a) for a in row] for row in left])


SUPPORTED_CONCATENATIONS = frozenset({
    (Mode.R, "row"),
    (Mode.C, "col"),
    (Mode.P, "row"),
    (Mode.P, "col"),
    (Mode.H, "row"),
    (Mode.H, "col"),
})


def concat_pattern(p, q, direction: str, z: Mode | str) -> Pattern:
    """A pattern for the row (``"row"``) or column (``"col"``) concatenation
    of the ``z``-languages of ``p`` and ``q``.

    The operands are made variable-disjoint and aligned by lcm strip
    expansion (width for row concatenation, height for column
    concatenation) before being glued.
    """
    mode = Mode.parse(z)
    if direction not in ("row", "col"):
        raise ValueError(f"direction must be 'row' or 'col', got {direction!r}")
    if (mode, direction) not in SUPPORTED_CONCATENATIONS:
        raise UnsupportedOperationError(
            f"no {direction} concatenation pattern exists in general for mode {mode}"
        )
    p, q = canonicalize(p), canonicalize(q)
    if direction == "row":
        sp, sq = lcm_specs(p, q, rows=False)
        return Pattern(_expanded_rows(p, *sp, tag="p") + _expanded_rows(q, *sq, tag="q"))
    sp, sq = lcm_specs(p, q, cols=False)
    left = _expanded_rows(p, *sp, tag="p")
    right = _expanded_rows(q, *sq, tag="q")
    return Pattern([a + b for a, b in zip(left, right)])


def transfer(p, op) -> Pattern:
    """Carry a language operation over to the pattern.

    A geometric operation is applied to the pattern itself. A projection
    (any mapping of symbols) leaves the pattern unchanged, since patterns do
    not mention terminal symbols. Whether the language class is closed under
    the operation for a given mode is the caller's concern.
    """
    p = canonicalize(p)
    if isinstance(op, Mapping):
        return p
    return transform_pattern(p, GeomOp.parse(op))
