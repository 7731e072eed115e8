"""Membership of a terminal array in the language of an array pattern.

Five modes are supported:

* ``h``  the array is the image of the pattern under a uniform substitution
  (a two-dimensional morphism);
* ``r``  column-row image: ``assemble_cr(h, p) == w`` for some ``h``;
* ``c``  row-column image: ``assemble_rc(h, p) == w``;
* ``p``  proper image: both assemblies equal ``w``;
* ``rc`` the union of ``r`` and ``c``.

``h`` is decided directly (there is only one candidate tiling). The other
modes backtrack over tile sizes, fixing each variable's dimensions at its
first placement, propagating equal heights (and, for ``p``, equal widths)
through rows and columns that share a variable, and comparing contents as
soon as a repeated variable is placed.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from dataclasses import dataclass
from typing import Optional

from .errors import FormatError
from .grid import Grid
from .pattern import Pattern, canonicalize
from .substitution import (
    Substitution,
    apply_morphism,
    assemble_cr,
    assemble_rc,
    uniform_dims,
)

__all__ = ["MembershipAnswer", "Mode", "decide", "verify_witness"]


class Mode(enum.Enum):
    H = "h"
    P = "p"
    R = "r"
    C = "c"
    RC = "rc"

    @classmethod
    def parse(cls, value: "str | Mode") -> "Mode":
        if isinstance(value, Mode):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise FormatError(f"unknown mode {value!r} (expected h, p, r, c or rc)") from None

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class MembershipAnswer:
    member: bool
    witness: Optional[Substitution] = None
    # For rc-membership: which assembly the witness satisfies (R or C).
    via: Optional[Mode] = None

    def __bool__(self):
        return self.member


def _components(lines) -> list[int]:
    """Union lines (rows or columns of variables) that share a variable."""
    parent = list(range(len(lines)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    first_line = {}
    for i, line in enumerate(lines):
        for v in line:
            if v in first_line:
                a, b = find(first_line[v]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                first_line[v] = i
    return [find(i) for i in range(len(lines))]


def _size_candidates(index, comps, assigned, total, offset):
    """Admissible sizes for line ``index`` whose component is not yet sized.

    ``assigned`` maps components to fixed sizes. Every later line needs at
    least one unit; lines of the same component share the chosen size.
    """
    comp = comps[index]
    count = 1
    fixed = 0
    free = 0
    for k in range(index + 1, len(comps)):
        ck = comps[k]
        if ck == comp:
            count += 1
        elif ck in assigned:
            fixed += assigned[ck]
        else:
            free += 1
    avail = total - offset - fixed
    if free == 0:
        if avail < count or avail % count:
            return ()
        return (avail // count,)
    return range(1, (avail - free) // count + 1)


def _search_h(W, P):
    R, C = len(W), len(W[0])
    m, n = len(P), len(P[0])
    if R % m or C % n:
        return None
    r, c = R // m, C // n
    blocks = {}
    for i, prow in enumerate(P):
        strip = W[i * r : (i + 1) * r]
        for j, x in enumerate(prow):
            block = tuple(row[j * c : (j + 1) * c] for row in strip)
            seen = blocks.get(x)
            if seen is None:
                blocks[x] = block
            elif seen != block:
                return None
    return blocks


@lru_cache(maxsize=4096)
def _row_plan(P):
    """Per-pattern data for the column-row search (content independent)."""
    comps = tuple(_components(P))
    later = tuple(tuple(row[j + 1 :] for j in range(len(row))) for row in P)
    return comps, later


def _search_cr(W, P):
    """Backtracking search for a column-row factorisation of W along P."""
    R, C = len(W), len(W[0])
    m, n = len(P), len(P[0])
    if R < m or C < n:
        return None
    comps, later = _row_plan(P)
    comp_h = {}
    width = {}
    blocks = {}

    def place_row(i, top):
        if i == m:
            return top == R
        h = comp_h.get(comps[i])
        if h is not None:
            return top + h <= R and place_cell(i, 0, top, h, 0)
        for h in _size_candidates(i, comps, comp_h, R, top):
            comp_h[comps[i]] = h
            if place_cell(i, 0, top, h, 0):
                return True
        comp_h.pop(comps[i], None)
        return False

    def place_cell(i, j, top, h, left):
        if j == n:
            return left == C and place_row(i + 1, top + h)
        x = P[i][j]
        w = width.get(x)
        if w is not None:
            right = left + w
            if right > C:
                return False
            if [row[left:right] for row in W[top : top + h]] != blocks[x]:
                return False
            return place_cell(i, j + 1, top, h, right)
        known = 0
        count = 1
        free = 0
        for y in later[i][j]:
            if y == x:
                count += 1
            else:
                wy = width.get(y)
                if wy is None:
                    free += 1
                else:
                    known += wy
        avail = C - left - known
        if free == 0:
            if avail < count or avail % count:
                return False
            candidates = (avail // count,)
        else:
            candidates = range(1, (avail - free) // count + 1)
        strip = W[top : top + h]
        for w in candidates:
            width[x] = w
            blocks[x] = [row[left : left + w] for row in strip]
            if place_cell(i, j + 1, top, h, left + w):
                return True
        del width[x], blocks[x]
        return False

    if not place_row(0, 0):
        return None
    return {x: tuple(b) for x, b in blocks.items()}


def _transpose(data):
    return tuple(zip(*data))


def _search_rc(W, P):
    blocks = _search_cr(_transpose(W), _transpose(P))
    if blocks is None:
        return None
    return {x: _transpose(b) for x, b in blocks.items()}


@lru_cache(maxsize=4096)
def _grid_plan(P):
    return tuple(_components(P)), tuple(_components(_transpose(P)))


def _search_proper(W, P):
    """Backtracking over row heights and column widths of a grid tiling."""
    R, C = len(W), len(W[0])
    m, n = len(P), len(P[0])
    if R < m or C < n:
        return None
    rcomps, ccomps = _grid_plan(P)
    comp_h = {}
    comp_w = {}
    col_left = [0] * (n + 1)
    col_w = [0] * n
    blocks = {}

    def place_row(i, top):
        if i == m:
            return top == R
        h = comp_h.get(rcomps[i])
        if h is not None:
            return top + h <= R and place_cell(i, 0, top, h)
        for h in _size_candidates(i, rcomps, comp_h, R, top):
            comp_h[rcomps[i]] = h
            if place_cell(i, 0, top, h):
                return True
        comp_h.pop(rcomps[i], None)
        return False

    def check_and_continue(i, j, top, h, left, w):
        x = P[i][j]
        block = [row[left : left + w] for row in W[top : top + h]]
        seen = blocks.get(x)
        if seen is None:
            blocks[x] = block
            if place_cell(i, j + 1, top, h):
                return True
            del blocks[x]
            return False
        return seen == block and place_cell(i, j + 1, top, h)

    def place_cell(i, j, top, h):
        if j == n:
            return (i > 0 or col_left[n] == C) and place_row(i + 1, top + h)
        if i > 0:
            return check_and_continue(i, j, top, h, col_left[j], col_w[j])
        left = col_left[j]
        comp = ccomps[j]
        w = comp_w.get(comp)
        if w is not None:
            if left + w > C:
                return False
            col_w[j] = w
            col_left[j + 1] = left + w
            return check_and_continue(0, j, top, h, left, w)
        for w in _size_candidates(j, ccomps, comp_w, C, left):
            comp_w[comp] = w
            col_w[j] = w
            col_left[j + 1] = left + w
            if check_and_continue(0, j, top, h, left, w):
                return True
        comp_w.pop(comp, None)
        return False

    if not place_row(0, 0):
        return None
    return {x: tuple(b) for x, b in blocks.items()}


_SEARCH = {
    Mode.H: _search_h,
    Mode.R: _search_cr,
    Mode.C: _search_rc,
    Mode.P: _search_proper,
}


def _witness(blocks) -> Substitution:
    return Substitution({x: Grid._trusted(b) for x, b in blocks.items()})


def decide(w: Grid, p, z: Mode | str) -> MembershipAnswer:
    """Decide whether ``w`` lies in the ``z``-language of pattern ``p``.

    A positive answer carries a witness substitution; among the candidate
    tilings the one with the smallest tiles (heights top-down, then widths
    left-to-right) is reported.
    """
    mode = Mode.parse(z)
    if w.is_empty():
        raise ValueError("membership is defined for non-empty arrays only")
    P = canonicalize(p).data
    W = w.data
    if mode is Mode.RC:
        blocks = _search_cr(W, P)
        if blocks is not None:
            return MembershipAnswer(True, _witness(blocks), Mode.R)
        blocks = _search_rc(W, P)
        if blocks is not None:
            return MembershipAnswer(True, _witness(blocks), Mode.C)
        return MembershipAnswer(False)
    blocks = _SEARCH[mode](W, P)
    if blocks is None:
        return MembershipAnswer(False)
    return MembershipAnswer(True, _witness(blocks), mode)


def verify_witness(w: Grid, p, z: Mode | str, h) -> bool:
    """Check that substitution ``h`` exhibits ``w`` as a ``z``-image of ``p``."""
    mode = Mode.parse(z)
    if not isinstance(p, Pattern):
        p = canonicalize(p)
    if mode is Mode.H:
        used = set(p.cells())
        if uniform_dims(h, used) is None:
            return False
        return apply_morphism(h, p) == w
    if mode is Mode.R:
        return assemble_cr(h, p) == w
    if mode is Mode.C:
        return assemble_rc(h, p) == w
    if mode is Mode.P:
        return assemble_cr(h, p) == w and assemble_rc(h, p) == w
    return assemble_cr(h, p) == w or assemble_rc(h, p) == w
