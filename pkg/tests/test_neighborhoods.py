import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graph_map
from symfitch import (
    NeighborhoodSystem,
    Subsplit,
    SymmetricMap,
    ValidationError,
    complementary_neighborhood,
    displays,
    exact_compatibility,
    explain,
    full_subsplit_systems,
    is_partition,
    neighborhood_system,
    subsplit_system,
)
from symfitch.neighborhoods import is_partition_by_membership
from symfitch.reduction import leaf_names, random_labeled_tree, random_map


def empty_map():
    return SymmetricMap.build("abcd", ["m"])


def test_hourglass_neighborhoods(hg):
    assert complementary_neighborhood(hg, "1", "a") == {"a", "c"}
    assert complementary_neighborhood(hg, "1", "c") == {"a", "c"}
    assert complementary_neighborhood(hg, "1", "b") == {"b", "d"}
    assert complementary_neighborhood(hg, "1", "d") == {"b", "d"}
    assert complementary_neighborhood(hg, "2", "a") == {"a", "b"}
    assert complementary_neighborhood(hg, "2", "c") == {"c", "d"}


def test_empty_map_neighborhood_is_everything():
    e = empty_map()
    for y in e.leaves:
        assert complementary_neighborhood(e, "m", y) == set("abcd")
    assert neighborhood_system(e, "m").members == (frozenset("abcd"),)


def test_unknown_leaf_or_color(hg):
    with pytest.raises(ValidationError):
        complementary_neighborhood(hg, "9", "a")
    with pytest.raises(ValidationError):
        complementary_neighborhood(hg, "1", "z")
    with pytest.raises(ValidationError):
        neighborhood_system(hg, "9")


def test_hourglass_neighborhood_systems(hg):
    assert set(neighborhood_system(hg, "1").members) == {frozenset("ac"), frozenset("bd")}
    assert set(neighborhood_system(hg, "2").members) == {frozenset("ab"), frozenset("cd")}


def test_is_partition_examples():
    assert is_partition(NeighborhoodSystem.from_sets("1", "abcd", ["ac", "bd"])) is None
    assert is_partition(NeighborhoodSystem.from_sets("1", "abcd", ["abcd"])) is None
    wit = is_partition(NeighborhoodSystem.from_sets("1", "abc", ["ab", "ac", "c"]))
    assert wit == (frozenset("ab"), frozenset("ac"), "a")


def test_subsplit_systems_hourglass(hg):
    assert subsplit_system(hg, "1").as_set() == {Subsplit("ac", "bd")}
    assert subsplit_system(hg, "2").as_set() == {Subsplit("ab", "cd")}
    full, star = full_subsplit_systems(hg)
    assert full.as_set() == star.as_set() == {Subsplit("ab", "cd"), Subsplit("ac", "bd")}


def test_subsplit_provenance_names_color(hg):
    sys1 = subsplit_system(hg, "1")
    (prov,) = sys1.provenance[Subsplit("ac", "bd")]
    assert prov.color == "1"
    assert {prov.left, prov.right} == {frozenset("ac"), frozenset("bd")}


def test_subsplit_systems_complete_bipartite():
    e = graph_map("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    _, star = full_subsplit_systems(e)
    assert star.as_set() == {Subsplit("ab", "cd")}


def test_subsplit_systems_empty_map():
    e = empty_map()
    assert len(subsplit_system(e, "m")) == 0
    full, star = full_subsplit_systems(e)
    assert len(full) == 0 and len(star) == 0


maps = st.builds(
    lambda n, k, d, s: random_map(leaf_names(n), [str(i) for i in range(1, k + 1)], d, s),
    st.integers(2, 6),
    st.integers(1, 3),
    st.sampled_from([0.2, 0.5, 0.8]),
    st.integers(0, 2**32),
)


@settings(max_examples=300, deadline=None)
@given(maps)
def test_neighborhoods_cover_and_contain_generator(emap):
    for m in emap.colors:
        ns = neighborhood_system(emap, m)
        assert frozenset().union(*ns.members) == frozenset(emap.leaves)
        for y in emap.leaves:
            assert y in complementary_neighborhood(emap, m, y)


@settings(max_examples=300, deadline=None)
@given(maps)
def test_partition_agrees_with_membership_form(emap):
    for m in emap.colors:
        assert (is_partition(neighborhood_system(emap, m)) is None) == is_partition_by_membership(emap, m)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 8), st.integers(1, 3), st.integers(0, 2**32))
def test_non_star_subsplits_are_trivial_and_compatibility_coincides(n, k, seed):
    colors = [str(i) for i in range(1, k + 1)]
    emap = random_map(leaf_names(n), colors, 0.5, seed)
    if any(is_partition(neighborhood_system(emap, m)) for m in colors):
        return
    full, star = full_subsplit_systems(emap)
    assert star.as_set() <= full.as_set()
    assert all(s.is_trivial for s in full.as_set() - star.as_set())
    assert exact_compatibility(full).compatible == exact_compatibility(star).compatible


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 10), st.integers(1, 4), st.integers(0, 2**32))
def test_generating_tree_displays_every_subsplit(n, k, seed):
    colors = [str(i) for i in range(1, k + 1)]
    t = random_labeled_tree(n, colors, 0.3, seed)
    full, _ = full_subsplit_systems(explain(t, colors))
    assert all(displays(t, s) for s in full)
