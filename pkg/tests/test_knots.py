import itertools

import pytest
from hypothesis import given, strategies as st

from knothost.knots import (
    AliasConflictError,
    AliasTable,
    FiberSurface,
    KnotParseError,
    KnotType,
    MissingAttributeError,
    Named,
    Slope,
    Torus,
    canonical,
    connected_sum,
    genus_bounds,
    parse_knot,
    parse_knot_list,
    resolve_alias,
    torus_genus,
)
from knothost.slopes import SlopePair, slope_genus

TEN_ATOMS = [
    "3_1",
    "4_1",
    "5_1",
    "5_2",
    "6_1",
    "6_2",
    "8_19",
    "T(2,7)",
    "K[trefoil](2,3)",
    "K[fig8](1,2)",
]


def test_resolve_alias_examples(table):
    assert resolve_alias(Torus(2, 3), table) == Named("3_1")
    assert resolve_alias(Slope(FiberSurface.TREFOIL, 1, 3), table) == Named("8_19")
    assert resolve_alias(Named("6_2"), table) == Named("6_2")
    assert resolve_alias(Slope(FiberSurface.FIGURE_EIGHT, 1, 1), table) == Named("3_1")


def test_resolve_alias_idempotent(table):
    for atom in table.atoms():
        once = table.resolve(atom)
        assert table.resolve(once) == once


def test_alias_classes_partition(table):
    atoms = table.atoms() + [Torus(2, 9), Slope(FiberSurface.TREFOIL, 2, 3)]
    same = {(a, b): table.resolve(a) == table.resolve(b) for a in atoms for b in atoms}
    for a in atoms:
        assert same[a, a]
    for a, b in itertools.product(atoms, repeat=2):
        assert same[a, b] == same[b, a]
    for a, b, c in itertools.product(atoms, repeat=3):
        if same[a, b] and same[b, c]:
            assert same[a, c]


def test_alias_conflict():
    t = AliasTable()
    t.add(Torus(2, 3), Named("3_1"))
    with pytest.raises(AliasConflictError):
        t.add(Torus(2, 3), Named("4_1"))


def test_connected_sum_examples(k):
    assert str(connected_sum(k("3_1"), k("4_1"))) == "3_1#4_1"
    assert connected_sum(k("3_1#3_1"), k("3_1")) == k("3_1#3_1#3_1")
    assert connected_sum(k("3_1"), k("4_1")) == connected_sum(k("4_1"), k("3_1"))


def test_connected_sum_algebra_exhaustive(k):
    atoms = [k(a) for a in TEN_ATOMS]
    assert len(set(atoms)) == 10
    for a, b in itertools.product(atoms, repeat=2):
        assert connected_sum(a, b) == connected_sum(b, a)
    for a, b, c in itertools.product(atoms, repeat=3):
        assert connected_sum(connected_sum(a, b), c) == connected_sum(a, connected_sum(b, c))


@given(st.lists(st.sampled_from(TEN_ATOMS + ["T(3,2)", "T(2,3)", "K[trefoil](1,3)"]), min_size=1, max_size=5))
def test_canonicalization_idempotent(table, parts):
    text = "#".join(parts)
    once = parse_knot(text, table)
    assert parse_knot(str(once), table) == once
    assert canonical(once, table) == once


@given(st.permutations(["3_1", "4_1", "T(2,5)", "K[trefoil](2,3)", "3_1"]))
def test_summand_order_irrelevant(table, parts):
    assert parse_knot("#".join(parts), table) == parse_knot("3_1#3_1#4_1#5_1#K[trefoil](2,3)", table)


def test_torus_normalization(k):
    assert k("T(3,2)") == k("T(2,3)") == k("3_1")
    assert Torus(5, 3) == Torus(3, 5)
    assert str(Torus(7, 2)) == "T(2,7)"


@pytest.mark.parametrize(
    "text",
    ["T(2,4)", "T(1,5)", "9_99", "K[trefoil](2,4)", "K[trefoil](1,1)", "K[torus](1,2)", "3_1#", "3_1 4_1", ""],
)
def test_parse_errors(table, text):
    with pytest.raises(KnotParseError):
        parse_knot(text, table)


def test_parse_error_position(table):
    with pytest.raises(KnotParseError) as err:
        parse_knot("3_1#T(2,4)", table)
    assert err.value.position == 4


def test_parse_list_alias_merge(table):
    assert set(parse_knot_list("3_1, T(2,3)", table)) == {parse_knot("3_1", table)}
    assert parse_knot_list("3_1#4_1", table)[0].summands == (Named("3_1"), Named("4_1"))
    assert parse_knot_list("  ", table) == []


def test_sort_order_named_torus_slope(k):
    x = k("K[trefoil](2,3)#T(2,9)#6_2")
    assert [type(a) for a in x.summands] == [Named, Torus, Slope]
    assert k("3_1") < k("10_124")


def test_torus_genus_examples():
    assert torus_genus(2, 3) == 1
    assert torus_genus(3, 4) == 3
    assert torus_genus(2, 5) == 2
    with pytest.raises(Exception):
        torus_genus(2, 4)


def test_torus_genus_matches_slope_genus_on_aliases():
    assert torus_genus(2, 3) == slope_genus(SlopePair(1, 2)) == 1
    assert torus_genus(3, 4) == slope_genus(SlopePair(1, 3)) == 3


def test_genus_bounds_examples(k, table):
    assert genus_bounds(k("3_1"), table) == (1, 1)
    assert genus_bounds(k("5_1"), table) == (2, 2)
    assert genus_bounds(k("3_1#3_1#3_1"), table) == (3, 3)
    assert genus_bounds(k("T(2,9)"), table) == (4, 4)
    assert genus_bounds(k("K[trefoil](2,3)"), table) == (5, 5)


def test_genus_bounds_missing(k, table):
    with pytest.raises(MissingAttributeError, match=r"K\[fig8\]\(2,3\)"):
        genus_bounds(k("3_1#K[fig8](2,3)"), table)


def test_genus_additivity(k, table):
    atoms = [k(a) for a in TEN_ATOMS if "fig8" not in a]
    for a, b in itertools.product(atoms, repeat=2):
        ga, gb = genus_bounds(a, table), genus_bounds(b, table)
        assert genus_bounds(connected_sum(a, b), table) == (ga[0] + gb[0], ga[1] + gb[1])


def test_knot_type_needs_summand():
    with pytest.raises(Exception):
        KnotType(())
