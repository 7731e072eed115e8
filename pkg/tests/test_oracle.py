from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arraypat import (
    Bounds,
    CapacityError,
    ConfigurationError,
    DomainError,
    GeomOp,
    Grid,
    GridSet,
    Mode,
    Pattern,
    decide,
    distinguish,
    enumerate_language,
    enumerate_patterns,
    project,
    refute_closure,
    set_op,
    shortest_members,
    transform,
)
from arraypat.grid import UNDEFINED, col_concat, row_concat
from arraypat.oracle import (
    MAX_CELLS_ENV,
    REFUTATION_CASES,
    concat_closure,
    format_fragment,
    image_under,
    parse_fragment,
    preimage_under,
    project_set,
    transform_set,
)
from arraypat.substitution import assemble
from strategies import patterns

G = Grid.from_string
P = Pattern.from_string
GAMMA = P("x1 x2 / x2 x1")
BETA = P("x1 x2 / x3 x4")
AB = ("a", "b")
ALL_MODES = list(Mode)
SMALL = [p for shape in [(1, 1), (1, 2), (2, 1), (2, 2)] for p in enumerate_patterns(*shape)]


def words(*ws):
    return {G(w) for w in ws}


class TestEnumerate:
    def test_universal_pattern(self):
        frag = enumerate_language(P("x1"), "p", Bounds(2, 2, "a"))
        assert frag.members == (G("a"), G("aa"), G("a/a"), G("aa/aa"))

    def test_gamma_proper_needs_even_sides(self):
        assert enumerate_language(GAMMA, "p", Bounds(3, 3, "a")).members == (G("aa/aa"),)

    def test_gamma_row_and_column(self):
        b = Bounds(3, 3, "a")
        assert G("aa/aa/aa") in enumerate_language(GAMMA, "c", b)
        assert G("aaa/aaa") in enumerate_language(GAMMA, "r", b)
        assert G("aaa/aaa") not in enumerate_language(GAMMA, "c", b)

    def test_canonical_order(self):
        frag = enumerate_language(P("x1 x2"), "p", Bounds(2, 3, "ba"))
        members = frag.members
        key = lambda g: (g.nrows, g.ncols, ["ba".index(s) for s in g.cells()])
        assert list(members) == sorted(members, key=key)
        assert members[0] == G("bb")

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            enumerate_language(GAMMA, "p", Bounds(2, 2, AB), method="magic")

    def test_fragments_are_read_only(self):
        frag = enumerate_language(GAMMA, "p", Bounds(2, 2, AB))
        with pytest.raises(ValueError):
            frag.mask((2, 2))[0] = False


class TestShortest:
    @pytest.mark.parametrize("mode", ["p", "r", "c", "rc"])
    def test_xyx(self, mode):
        assert shortest_members(P("x1 x2 x1"), mode, AB) == words("aaa", "aba", "bab", "bbb")

    @pytest.mark.parametrize("mode", ["p", "r", "c", "rc"])
    def test_xxy(self, mode):
        assert shortest_members(P("x1 x1 x2"), mode, AB) == words("aaa", "aab", "bba", "bbb")

    def test_single_variable(self):
        assert shortest_members(P("x1"), "h", "abc") == words("a", "b", "c")


class TestSetOp:
    def test_union_of_shortest(self):
        b = Bounds(1, 3, AB)
        s1 = shortest_members(P("x1 x2 x1"), "p", AB)
        s2 = shortest_members(P("x1 x1 x2"), "p", AB)
        assert set_op(s1, s2, "union") == words("aaa", "aab", "aba", "bab", "bba", "bbb")
        assert s1.bounds == s2.bounds == b

    def test_intersection_contains_aabaa(self):
        b = Bounds(1, 5, AB)
        both = set_op(enumerate_language(P("x1 x2 x1"), "p", b), enumerate_language(P("x1 x1 x2"), "p", b), "intersection")
        assert G("aabaa") in both

    def test_concat_with_empty(self):
        b = Bounds(3, 3, AB)
        frag = enumerate_language(GAMMA, "r", b)
        assert set_op(frag, GridSet(b), "rowConcat") == set()
        assert set_op(GridSet(b), frag, "colConcat") == set()

    def test_mismatched_bounds(self):
        with pytest.raises(ConfigurationError):
            set_op(GridSet(Bounds(2, 2, AB)), GridSet(Bounds(2, 3, AB)), "union")
        with pytest.raises(ConfigurationError):
            set_op(GridSet(Bounds(2, 2, AB)), GridSet(Bounds(2, 2, "abc")), "union")

    def test_unknown_op(self):
        b = Bounds(1, 1, AB)
        with pytest.raises(ValueError):
            set_op(GridSet(b), GridSet(b), "xor")

    @pytest.mark.parametrize("op, glue", [("rowConcat", row_concat), ("colConcat", col_concat)])
    def test_concatenation_elementwise(self, op, glue):
        b = Bounds(3, 3, AB)
        left = enumerate_language(P("x1 x1"), "r", b)
        right = enumerate_language(P("x1 / x2"), "c", b)
        expected = set()
        for u, v in product(left, right):
            w = glue(u, v)
            if w is not UNDEFINED and w.nrows <= 3 and w.ncols <= 3:
                expected.add(w)
        assert set_op(left, right, op) == expected

    def test_difference_and_complement(self):
        b = Bounds(2, 2, AB)
        frag = enumerate_language(P("x1 x1"), "p", b)
        universe = GridSet.universe(b)
        assert set_op(universe, frag, "difference") == frag.complement()
        assert len(frag) + len(frag.complement()) == 2 + 4 + 4 + 16

    def test_from_grids_checks(self):
        b = Bounds(2, 2, AB)
        with pytest.raises(DomainError):
            GridSet.from_grids(b, [G("aaa")])
        with pytest.raises(DomainError):
            GridSet.from_grids(b, [G("ac")])


class TestDistinguish:
    def test_all_a_3x3_separates_h_from_p(self):
        b = Bounds(4, 4, AB)
        h = enumerate_language(BETA, "h", b)
        p = enumerate_language(BETA, "p", b)
        assert G("aaa/aaa/aaa") in p and G("aaa/aaa/aaa") not in h
        sep = distinguish(BETA, "h", BETA, "p", b)
        # a smaller separator exists: 2x3 with one odd side
        assert sep == G("aaa/aaa")

    def test_p_vs_c_separator_is_w1(self):
        assert distinguish(GAMMA, "p", GAMMA, "c", Bounds(4, 4, AB)) == G("aa/aa/aa")

    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_same_language(self, mode):
        b = Bounds(3, 3, AB)
        assert distinguish(GAMMA, mode, GAMMA, mode, b) is None
        assert distinguish(GAMMA, mode, P("x7 x3 / x3 x7"), mode, b, shortcut=False) is None

    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_inequivalent_patterns_are_separated(self, mode):
        b = Bounds(4, 4, AB)
        frags = {p: enumerate_language(p, mode, b) for p in SMALL}
        for p, q in product(SMALL, repeat=2):
            sep = distinguish(p, mode, q, mode, b)
            if p == q:
                assert sep is None
            else:
                assert sep is not None
                assert (sep in frags[p]) != (sep in frags[q])


class TestAgreement:
    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_three_methods_agree(self, mode):
        b = Bounds(3, 3, AB)
        for p in enumerate_patterns(2, 2) + enumerate_patterns(1, 3):
            sub = enumerate_language(p, mode, b)
            assert sub == enumerate_language(p, mode, b, method="geometry")
            assert sub == enumerate_language(p, mode, b, method="decide")

    @settings(max_examples=40)
    @given(patterns(2, 3, 4), st.sampled_from(ALL_MODES))
    def test_sound_and_complete(self, p, mode):
        b = Bounds(3, 4, AB)
        frag = enumerate_language(p, mode, b)
        for g in GridSet.universe(b):
            assert (g in frag) == decide(g, p, mode).member

    @settings(max_examples=40)
    @given(patterns(2, 2, 4), st.sampled_from(ALL_MODES))
    def test_monotone(self, p, mode):
        small = enumerate_language(p, mode, Bounds(2, 3, AB))
        large = enumerate_language(p, mode, Bounds(3, 4, AB))
        assert small.to_set() <= large.to_set()

    def test_members_pass_decide(self):
        for g in enumerate_language(P("x1 x2 x1 / x2 x1 x2"), "rc", Bounds(4, 4, AB)):
            assert decide(g, P("x1 x2 x1 / x2 x1 x2"), "rc")


class TestTransforms:
    @pytest.mark.parametrize("op", list(GeomOp))
    def test_transform_set_elementwise(self, op):
        frag = enumerate_language(P("x1 x2 / x1 x1"), "r", Bounds(3, 4, AB))
        moved = transform_set(frag, op)
        assert moved == {transform(g, op) for g in frag}

    def test_project_set_elementwise(self):
        frag = enumerate_language(P("x1 x2 x1"), "p", Bounds(2, 4, "abc"))
        mapping = {"a": "1", "b": "1", "c": "2"}
        assert project_set(frag, mapping, "12") == {project(g, mapping) for g in frag}

    def test_project_set_missing_symbol(self):
        frag = enumerate_language(P("x1"), "p", Bounds(1, 2, "ab"))
        with pytest.raises(DomainError):
            project_set(frag, {"a": "1"}, "1")

    def test_preimage_elementwise(self):
        b = Bounds(1, 4, ("1", "2", "3"))
        frag = enumerate_language(P("x1 x1"), "p", b)
        coding = {"a": "1", "b": "1", "c": "2", "d": "3"}
        pre = preimage_under(frag, coding, "abcd")
        expected = {g for g in GridSet.universe(Bounds(1, 4, "abcd")) if project(g, coding) in frag}
        assert pre == expected

    def test_image_under(self):
        b = Bounds(1, 6, AB)
        frag = enumerate_language(P("x1"), "p", b)
        image = image_under(frag, {"a": "ab", "b": "ab"}, b)
        assert image == words("ab", "abab", "ababab")

    def test_image_under_non_uniform(self):
        b = Bounds(2, 4, AB)
        frag = GridSet.from_grids(b, [G("ab"), G("a/b")])
        images = {"a": G("aa"), "b": G("b")}
        expected = {assemble(images, g.data, col_concat, row_concat) for g in frag} - {UNDEFINED}
        assert image_under(frag, images, b) == expected

    def test_concat_closure(self):
        b = Bounds(1, 6, AB)
        closure = concat_closure(enumerate_language(P("x1 x1"), "p", b), "col")
        assert G("aabb") in closure and G("ab") not in closure
        assert G("aabbaa") in closure
        with pytest.raises(ValueError):
            concat_closure(closure, "diagonal")


class TestRefutations:
    @pytest.mark.parametrize("case", list(REFUTATION_CASES))
    def test_every_case_refuted(self, case):
        report = refute_closure(case)
        assert report.success, str(report)
        assert str(report).endswith("result: refuted")

    def test_union_witnesses(self):
        report = refute_closure("union")
        assert report.forced_shape == (1, 3) and len(report.candidates) == 5
        assert set(report.minimal_members) == words("aaa", "aab", "aba", "bab", "bba", "bbb")
        assert report.result_for(P("x1 x2 x1")).kind == "missing"
        assert report.result_for(P("x1 x2 x1")).witness == G("aab")
        assert report.result_for(P("x1 x1 x2")).witness == G("aba")
        assert report.result_for(P("x1 x2 x3")).kind == "extra"

    def test_intersection_only_candidate(self):
        report = refute_closure("intersection")
        assert set(report.minimal_members) == words("aaa", "bbb")
        cand = report.result_for(P("x1 x1 x1"))
        assert cand.separated
        # the displayed witness also separates, though a smaller one exists
        b = report.bounds
        target = set_op(enumerate_language(P("x1 x2 x1"), "p", b), enumerate_language(P("x1 x1 x2"), "p", b), "intersection")
        assert G("aabaa") in target
        assert G("aabaa") not in enumerate_language(P("x1 x1 x1"), "p", b)

    def test_kleene_candidates(self):
        report = refute_closure("kleene")
        assert len(report.candidates) == 2
        assert report.result_for(P("x1 x1")).witness == G("aabb")
        assert report.result_for(P("x1 x2")).kind == "extra"
        assert report.result_for(P("x1 x2")).witness == G("ab")

    def test_inverse_coding_candidates(self):
        report = refute_closure("inverse-coding")
        b = report.bounds
        same = report.result_for(P("x1 x1"))
        assert same.kind == "missing" and same.witness == G("ab")
        free = report.result_for(P("x1 x2"))
        assert free.kind == "extra"
        target_bounds = Bounds(b.max_rows, b.max_cols, ("1", "2", "3"))
        words_ = enumerate_language(P("x1 x1"), "p", target_bounds)
        target = preimage_under(words_, {"a": "1", "b": "1", "c": "2", "d": "3"}, b.alphabet)
        assert G("cd") not in target and G("cd") in enumerate_language(P("x1 x2"), "p", b)

    def test_morphism_forced_shape(self):
        report = refute_closure("morphism")
        assert report.forced_shape == (1, 2)
        assert set(report.minimal_members) == words("ab")

    def test_h_mode_intersection_is_not_refuted(self):
        report = refute_closure("intersection", mode="h")
        assert not report.success

    def test_unknown_case(self):
        with pytest.raises(ValueError):
            refute_closure("nonsense")

    def test_bounds_override(self):
        report = refute_closure("union", bounds=Bounds(1, 5, AB), mode="r")
        assert report.success and report.mode is Mode.R


class TestFormatAndGuard:
    def test_fragment_round_trip(self):
        frag = enumerate_language(GAMMA, "c", Bounds(3, 3, AB))
        text = format_fragment(frag, "gamma.pat")
        header, grids = parse_fragment(text)
        assert header == {"pattern": "gamma.pat", "mode": "c", "bounds": "3x3", "alphabet": "a,b"}
        assert tuple(grids) == frag.members

    def test_empty_fragment(self):
        frag = enumerate_language(BETA, "p", Bounds(1, 1, AB))
        header, grids = parse_fragment(format_fragment(frag))
        assert grids == []

    def test_capacity_guard(self, monkeypatch):
        with pytest.raises(CapacityError):
            enumerate_language(GAMMA, "p", Bounds(5, 5, AB))
        monkeypatch.setenv(MAX_CELLS_ENV, "4")
        with pytest.raises(CapacityError):
            enumerate_language(GAMMA, "p", Bounds(2, 3, AB))
        monkeypatch.setenv(MAX_CELLS_ENV, "20")
        assert len(enumerate_language(P("x1"), "p", Bounds(1, 20, "a"))) == 20

    def test_bad_env_value(self, monkeypatch):
        monkeypatch.setenv(MAX_CELLS_ENV, "lots")
        with pytest.raises(ConfigurationError):
            enumerate_language(GAMMA, "p", Bounds(2, 2, AB))

    def test_bounds_validation(self):
        with pytest.raises(ValueError):
            Bounds(0, 2, AB)
        with pytest.raises(ValueError):
            Bounds(2, 2, ())
        with pytest.raises(ValueError):
            Bounds(2, 2, "aa")
