from itertools import product

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from arraypat import (
    UNDEFINED,
    FormatError,
    Grid,
    IncompleteSubstitutionError,
    MorphismError,
    Pattern,
    Substitution,
    UniformDims,
    apply_morphism,
    assemble_cr,
    assemble_rc,
    col_concat,
    compose_uniform,
    format_substitution,
    parse_substitution,
    row_concat,
    transform,
    uniform_dims,
)
from strategies import grids, grids_of_shape, patterns

G = Grid.from_string
P = Pattern.from_string
GAMMA = P("x1 x2 / x2 x1")


class TestAssembly:
    def test_column_row_factorisation(self):
        p = P("x1 x2 x3 / x2 x3 x1")
        h = Substitution({1: "aaa", 2: "b", 3: "c"})
        assert assemble_cr(h, p) == G("aaabc/bcaaa")
        assert assemble_rc(h, p) is UNDEFINED

    def test_row_column_w1(self):
        g = Substitution({1: "a", 2: "a/a"})
        assert assemble_rc(g, GAMMA) == G("aa/aa/aa")
        assert assemble_cr(g, GAMMA) is UNDEFINED

    def test_column_row_w2(self):
        g = Substitution({1: "a", 2: "aa"})
        assert assemble_cr(g, GAMMA) == G("aaa/aaa")
        assert assemble_rc(g, GAMMA) is UNDEFINED

    @given(grids())
    def test_single_cell_pattern(self, w):
        h = Substitution({1: w})
        assert assemble_cr(h, P("x1")) == w == assemble_rc(h, P("x1"))

    def test_missing_image(self):
        with pytest.raises(IncompleteSubstitutionError):
            assemble_cr(Substitution({1: "a"}), GAMMA)

    def test_extra_images_ignored(self):
        h = Substitution({1: "a", 2: "b", 9: "abc/abc"})
        assert assemble_cr(h, GAMMA) == G("ab/ba")

    def test_raw_variable_numbers(self):
        # assembly reads the file's variable numbers, not canonical ones
        h = Substitution({3: "a", 5: "b"})
        assert assemble_cr(h, [[3, 5], [5, 3]]) == G("ab/ba")


class TestUniform:
    def test_all_a_3x3_substitution_not_uniform(self):
        g = Substitution({1: "aa/aa", 2: "a/a", 3: "aa", 4: "a"})
        assert uniform_dims(g, [1, 2, 3, 4]) is None

    def test_unit_images(self):
        assert uniform_dims(Substitution({1: "a", 2: "b"})) == UniformDims(1, 1)

    def test_two_by_three(self):
        assert uniform_dims(Substitution({1: "abc/abc", 2: "bbb/aaa"}), {1, 2}) == (2, 3)

    def test_restricted_domain(self):
        h = Substitution({1: "a", 2: "b", 3: "abc"})
        assert uniform_dims(h, {1, 2}) == (1, 1)
        assert uniform_dims(h) is None


class TestMorphism:
    def test_unit_images(self):
        h = Substitution({1: "a", 2: "a", 3: "a", 4: "a"})
        assert apply_morphism(h, P("x1 x2 / x3 x4")) == G("aa/aa")

    def test_two_rows(self):
        assert apply_morphism(Substitution({1: "a", 2: "c"}), P("x1 x1 / x2 x2")) == G("aa/cc")

    def test_repeated_block(self):
        block = G("ab/ba")
        h = Substitution({1: block})
        assert apply_morphism(h, P("x1 x1")) == col_concat(block, block) == assemble_cr(h, P("x1 x1"))

    def test_non_uniform_rejected(self):
        with pytest.raises(MorphismError):
            apply_morphism(Substitution({1: "a", 2: "aa"}), P("x1 x2"))

    def test_compose_identity(self):
        outer = Substitution({1: "ab/ba", 2: "aa/bb"})
        ident = Substitution({1: [["x1"]], 2: [["x2"]]})
        assert compose_uniform(outer, ident) == outer

    def test_compose_dimensions(self):
        inner = Substitution({1: [["x1", "x2"]], 2: [["x2", "x2"]]})
        outer = Substitution({1: "a/b", 2: "b/b"})
        h = compose_uniform(outer, inner)
        assert uniform_dims(h) == (2, 2)
        assert h[1] == G("ab/bb")

    def test_compose_rejects_non_uniform(self):
        with pytest.raises(MorphismError):
            compose_uniform(Substitution({1: "a"}), Substitution({1: [["x1"]], 2: [["x1", "x1"]]}))


def _var_grid(cells, r, c):
    return Grid([[f"x{cells[i * c + j]}" for j in range(c)] for i in range(r)])


@st.composite
def uniform_substitutions(draw, variables=(1, 2, 3), max_dim=2, alphabet="ab"):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    return Substitution({v: draw(grids_of_shape(m, n, alphabet)) for v in variables})


@st.composite
def any_substitutions(draw, variables=(1, 2, 3, 4), max_dim=3):
    return Substitution({v: draw(grids(max_dim, max_dim)) for v in variables})


@given(patterns(3, 3, 3), uniform_substitutions())
def test_uniform_assemblies_agree(p, h):
    cr = assemble_cr(h, p)
    assert cr is not UNDEFINED and cr == assemble_rc(h, p)
    m, n = uniform_dims(h)
    assert cr.shape == (m * p.nrows, n * p.ncols)


@given(any_substitutions())
def test_non_uniform_breaks_an_assembly(h):
    """If two images differ in height, some 1x2 pattern has no cr-assembly;
    if they differ in width, some 2x1 pattern has no rc-assembly."""
    for x, y in product(h, repeat=2):
        if h[x].nrows != h[y].nrows:
            assert assemble_cr(h, [[x, y]]) is UNDEFINED
        if h[x].ncols != h[y].ncols:
            assert assemble_rc(h, [[x], [y]]) is UNDEFINED


def _cr_defined_directly(h, p):
    widths = set()
    for row in p.data:
        if len({h[v].nrows for v in row}) != 1:
            return False
        widths.add(sum(h[v].ncols for v in row))
    return len(widths) == 1


def _rc_defined_directly(h, p):
    heights = set()
    for col in zip(*p.data):
        if len({h[v].ncols for v in col}) != 1:
            return False
        heights.add(sum(h[v].nrows for v in col))
    return len(heights) == 1


@given(patterns(3, 3, 4), any_substitutions())
def test_definedness_characterisation(p, h):
    assert (assemble_cr(h, p) is not UNDEFINED) == _cr_defined_directly(h, p)
    assert (assemble_rc(h, p) is not UNDEFINED) == _rc_defined_directly(h, p)


def test_both_defined_implies_equal_exhaustive():
    shapes = [(1, 1), (1, 2), (2, 1), (2, 2)]
    fill = {(r, c): G("/".join("ab"[(i + r) % 2] * c for i in range(r))) for r, c in shapes}
    pats = [Pattern(x) for x in ([[1, 2], [2, 1]], [[1, 2], [3, 1]], [[1, 1], [2, 2]], [[1, 2, 3], [3, 2, 1]])]
    checked = 0
    for p in pats:
        for dims in product(shapes, repeat=p.nvars):
            h = Substitution({v + 1: fill[d] for v, d in enumerate(dims)})
            cr, rc = assemble_cr(h, p), assemble_rc(h, p)
            if cr is not UNDEFINED and rc is not UNDEFINED:
                checked += 1
                assert cr == rc
    assert checked > 0


@given(patterns(2, 2, 4), any_substitutions())
def test_both_defined_implies_equal(p, h):
    cr, rc = assemble_cr(h, p), assemble_rc(h, p)
    assume(cr is not UNDEFINED and rc is not UNDEFINED)
    assert cr == rc


@given(st.data(), st.integers(1, 2), st.integers(1, 2), st.integers(1, 3))
def test_morphism_respects_concatenation(data, r1, r2, c):
    h = data.draw(uniform_substitutions(variables=(1, 2, 3, 4)))
    top = data.draw(st.lists(st.integers(1, 4), min_size=r1 * c, max_size=r1 * c))
    bot = data.draw(st.lists(st.integers(1, 4), min_size=r2 * c, max_size=r2 * c))
    p = _var_grid(top, r1, c)
    q = _var_grid(bot, r2, c)
    assert apply_morphism(h, row_concat(p, q)) == row_concat(apply_morphism(h, p), apply_morphism(h, q))
    pt, qt = transform(p, "transpose"), transform(q, "transpose")
    assert apply_morphism(h, col_concat(pt, qt)) == col_concat(apply_morphism(h, pt), apply_morphism(h, qt))


@given(st.data())
def test_compose_uniform_matches_two_steps(data):
    inner = data.draw(uniform_substitutions(variables=(1, 2), alphabet=["x1", "x2", "x3"]))
    outer = data.draw(uniform_substitutions(variables=(1, 2, 3)))
    p = data.draw(patterns(2, 2, 2))
    step = apply_morphism(inner, p)
    assert apply_morphism(compose_uniform(outer, inner), p) == apply_morphism(outer, step)


class TestTextFormat:
    def test_parse(self):
        h = parse_substitution("x2 = a b / c d\n# note\nx1 = a   # trailing\n")
        assert h == Substitution({1: "a", 2: "ab/cd"})

    @pytest.mark.parametrize(
        "text",
        ["x1 a b", "y1 = a", "x1 = a b / c", "x1 = a / / b", "x1 = a\nx1 = b", "x1 ="],
    )
    def test_rejected(self, text):
        with pytest.raises(FormatError):
            parse_substitution(text)

    @given(any_substitutions())
    def test_round_trip(self, h):
        assert parse_substitution(format_substitution(h)) == h

    def test_empty_image_rejected(self):
        with pytest.raises(ValueError):
            Substitution({1: Grid([])})
