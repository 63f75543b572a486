import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ssg.errors import CapacityExceeded
from ssg.presentation import act_word
from ssg.structure import (
    SubsetVertex,
    build_delta,
    build_strongfix,
    cyclic_subsets,
    delta_step,
    hausdorff_witness,
    is_hausdorff,
    mask_of,
    maximal_cyclic_subgroups,
    members_of,
    strong_fix_set,
)

from conftest import BUNDLED, load_bundled


def named_edges(a, edges):
    return {(a.names[g], a.letters[x], a.names[h]) for g, x, h in edges}


def named_sets(a, vertices):
    return {frozenset(v.names(a)) for v in vertices}


def brute_strong_fix(a, w):
    return {g for g in range(a.size) if act_word(a, g, w) == (tuple(w), a.identity)}


def brute_h(a, w):
    return {g for g in range(a.size) if act_word(a, g, w) == (tuple(w), g)}


def test_mask_round_trip():
    assert members_of(mask_of([0, 3, 5])) == (0, 3, 5)
    assert members_of(0) == ()


def test_subset_vertex_sorted():
    assert SubsetVertex((3, 0, 3)).members == (0, 3)
    assert SubsetVertex((0, 2)) < SubsetVertex((0, 3))


# fixing subgraph


def test_strongfix_grigorchuk(grig):
    h = build_strongfix(grig)
    assert named_edges(grig, h.edges) == {
        ("e", "0", "e"), ("e", "1", "e"),
        ("b", "0", "a"), ("b", "1", "c"),
        ("c", "0", "a"), ("c", "1", "d"),
        ("d", "0", "e"), ("d", "1", "b"),
    }
    assert {grig.names[g] for g in h.cyclic} == {"e", "b", "c", "d"}


def test_strongfix_edges_are_exactly_the_fixed_letters(bundled):
    for a in bundled.values():
        h = build_strongfix(a)
        expected = {(g, x, a.restrictions[g][x]) for g in range(a.size) for x in range(a.alphabet_size)
                    if a.outputs[g][x] == x}
        assert set(h.edges) == expected


def test_core_edges_end_in_cyclic_states(grig):
    h = build_strongfix(grig)
    assert all(t in h.cyclic for _, _, t in h.core_edges)
    assert len(h.core_edges) == len(h.edges) - 2


def test_hausdorff_flags(bundled):
    flags = {name: is_hausdorff(build_strongfix(a)) for name, a in bundled.items()}
    assert flags == {
        "grigorchuk": False,
        "grigorchuk-erschler": False,
        "trivial": True,
        "adding-machine": True,
        "dihedral": True,
    }


@pytest.mark.parametrize("name", ["grigorchuk", "grigorchuk-erschler"])
def test_hausdorff_witness_strongly_fixes(name):
    a = load_bundled(name)
    h = build_strongfix(a)
    g, w = hausdorff_witness(h)
    assert g in h.cyclic and g != a.identity
    assert act_word(a, g, w) == (w, a.identity)


def test_sunic_cyclic_set(sunic):
    h = build_strongfix(sunic)
    assert len(h.cyclic) == 16
    assert sunic.state("a") not in h.cyclic
    assert not is_hausdorff(h)


# subsets of the cyclic set


@pytest.mark.parametrize("name", BUNDLED)
def test_cyclic_subsets_match_subgroups_h_w(name):
    a = load_bundled(name)
    h = build_strongfix(a)
    expected = set()
    for length in range(1, 11):
        for w in itertools.product(range(a.alphabet_size), repeat=length):
            hw = brute_h(a, w)
            others = sorted(hw - {a.identity})
            for r in range(len(others) + 1):
                for sub in itertools.combinations(others, r):
                    expected.add(SubsetVertex((a.identity,) + sub))
    assert set(cyclic_subsets(h)) == expected


def test_maximal_subgroups_grigorchuk(grig):
    subs = maximal_cyclic_subgroups(build_strongfix(grig))
    assert len(subs) == 1
    assert subs[0].elements.names(grig) == ["e", "b", "c", "d"]
    assert grig.format_word(subs[0].word) == "111"
    assert subs[0].group.order == 4


def test_maximal_subgroups_grigorchuk_erschler(ge):
    subs = maximal_cyclic_subgroups(build_strongfix(ge))
    assert [s.elements.names(ge) for s in subs] == [["e", "b", "c", "d"]]
    assert ge.format_word(subs[0].word) == "11"


@pytest.mark.parametrize("name", BUNDLED)
def test_witness_words_define_the_subgroup(name):
    a = load_bundled(name)
    for sub in maximal_cyclic_subgroups(build_strongfix(a)):
        assert set(sub.elements.members) == brute_h(a, sub.word)


def test_capacity_exceeded(sunic):
    with pytest.raises(CapacityExceeded) as info:
        cyclic_subsets(build_strongfix(sunic), capacity=1 << 10)
    assert info.value.size == 1 << 15


# Delta


def test_delta_grigorchuk_figure(grig):
    d = build_delta(grig)
    names = [frozenset(v.names(grig)) for v in d.vertices]
    edges = {(names[s], grig.letters[x], names[t]) for s, x, t in d.edges}
    E, ED, EC, EB = (frozenset(s) for s in ("e", "ed", "ec", "eb"))
    assert set(names) == {E, ED, EC, EB}
    assert edges == {
        (E, "0", ED), (E, "1", E),
        (ED, "0", ED), (ED, "1", EC),
        (EC, "0", ED), (EC, "1", EB),
        (EB, "0", ED), (EB, "1", ED),
    }
    assert [v.names(grig) for v in d.minimal] == [["e", "b"], ["e", "c"], ["e", "d"]]


def test_delta_grigorchuk_erschler_figure(ge):
    d = build_delta(ge)
    names = [frozenset(v.names(ge)) for v in d.vertices]
    edges = {(names[s], ge.letters[x], names[t]) for s, x, t in d.edges}
    E, ED, EC = (frozenset(s) for s in ("e", "ed", "ec"))
    assert set(names) == {E, ED, EC}
    assert edges == {
        (E, "0", ED), (E, "1", E),
        (ED, "0", ED), (ED, "1", EC),
        (EC, "0", ED), (EC, "1", ED),
    }
    assert [v.names(ge) for v in d.minimal] == [["e", "c"], ["e", "d"]]


@pytest.mark.parametrize("name", BUNDLED)
def test_delta_vertices_are_strong_fix_sets(name):
    a = load_bundled(name)
    d = build_delta(a)
    # every vertex is N_w for a word found by walking the edges from {e}
    words = {0: ()}
    for s, x, t in d.edges:
        if t not in words and s in words:
            words[t] = (x,) + words[s]
    assert set(words) == set(range(len(d.vertices)))
    for v, w in words.items():
        assert set(d.vertices[v].members) == brute_strong_fix(a, w)
    for s, x, t in d.edges:
        assert delta_step(a, d.vertices[s].mask, x) == d.vertices[t].mask


def test_strong_fix_set_examples(grig):
    assert strong_fix_set(grig, ()).names(grig) == ["e"]
    assert strong_fix_set(grig, grig.word("0")).names(grig) == ["e", "d"]
    assert strong_fix_set(grig, grig.word("01")).names(grig) == ["e", "d"]
    assert strong_fix_set(grig, grig.word("10")).names(grig) == ["e", "c"]
    assert strong_fix_set(grig, grig.word("110")).names(grig) == ["e", "b"]


@given(st.sampled_from(BUNDLED), st.lists(st.integers(0, 1), max_size=12))
def test_strong_fix_set_is_brute_force(name, w):
    a = load_bundled(name)
    assert set(strong_fix_set(a, w).members) == brute_strong_fix(a, w)
