from __future__ import annotations

import random
from math import gcd

import pytest
from conftest import Z, corpus_names, corpus_pairs, module
from hypothesis import given, strategies as st

from finmod.abelian import FiniteAbelianGroup, MalformedInput, enumerate_subgroups, image, kernel
from finmod.certificates import NaiveModule, naive_homs
from finmod.modules import (
    ContextMismatch,
    RModule,
    direct_power,
    direct_sum,
    end_set,
    hom_set,
    module_from_matrices,
    r_submodules,
    submodule_as_module,
    validate_module,
)

NON_ABELIAN = ["swap_z2_z2", "t2_f2_regular", "z12_regular", "skew_right_mult_conj", "skew_right_mult_only", "skew_left_mult_conj"]


def test_hom_examples():
    assert hom_set(Z(2), Z(3)).cardinality == 1
    assert hom_set(Z(6), Z(4)).cardinality == 2
    assert end_set(Z(2, 2)).cardinality == 16
    assert hom_set(Z(), Z(4)).cardinality == 1


@pytest.mark.parametrize("a", range(1, 25))
def test_cyclic_hom_count_is_gcd(a):
    for b in range(1, 25):
        assert hom_set(Z(a), Z(b)).cardinality == gcd(a, b)


def test_swap_module_lattice():
    m = module("swap_z2_z2")
    assert len(list(enumerate_subgroups(m.group))) == 5
    subs = r_submodules(m)
    assert len(subs) == 3
    assert sorted(s.cardinality for s in subs) == [1, 2, 4]
    assert end_set(m).cardinality == 4


@pytest.mark.parametrize("name", NON_ABELIAN)
def test_submodules_match_naive(name):
    m = module(name)
    ours = {frozenset(s.elements()) for s in r_submodules(m)}
    assert ours == set(NaiveModule.of(m).lattice())


@pytest.mark.parametrize("name", NON_ABELIAN + ["z2_z8", "z4_z8", "z6", "z2_z12"])
def test_end_matches_naive(name):
    m = module(name)
    nm = NaiveModule.of(m)
    listed = naive_homs(nm, nm)
    ours = {f.matrix for f in end_set(m).elements()}
    assert ours == set(listed)


@pytest.mark.parametrize("pair", [p for p in corpus_pairs()])
def test_hom_matches_naive_on_corpus_pairs(pair):
    m, n = module(pair[0]), module(pair[1])
    listed = naive_homs(NaiveModule.of(m), NaiveModule.of(n))
    if listed is None:
        pytest.skip("too many candidate maps to list naively")
    hs = hom_set(m, n)
    assert hs.cardinality == len(listed)
    assert {f.matrix for f in hs.elements()} == set(listed)
    for mat in listed:
        f = hs.hom(hs.coords(_ghom(m, n, mat)))
        assert f.matrix == mat and hs.contains(f)


def _ghom(m, n, mat):
    from finmod.abelian import GroupHom

    return GroupHom(m.group, n.group, mat)


@pytest.mark.parametrize("name", NON_ABELIAN + ["z4_z8", "z3_z9"])
def test_end_closed_under_sum_and_composition(name):
    m = module(name)
    hs = end_set(m)
    rng = random.Random(7)
    for _ in range(40):
        f, g = hs.random_element(rng), hs.random_element(rng)
        assert hs.contains(f.compose(g))
        s = f.underlying.add(g.underlying)
        assert hs.contains(s)


def test_hom_rejects_mismatched_context():
    with pytest.raises(ContextMismatch):
        hom_set(module("swap_z2_z2"), Z(2, 2))
    with pytest.raises(ContextMismatch):
        direct_sum([module("swap_z2_z2"), Z(2)])


def test_validate_and_malformed_actions():
    assert validate_module(module("t2_f2_regular")) == []
    with pytest.raises(MalformedInput):
        module_from_matrices((2, 4), [("a", [[1, 0], [1, 1]])])
    with pytest.raises(MalformedInput):
        module_from_matrices((2,), [("a", [[1]]), ("a", [[0]])])


def test_direct_sum_structure():
    total, inj, proj = direct_sum([Z(2), Z(4), Z(3)])
    assert total.size == 24
    for i, (a, b) in enumerate(zip(inj, proj)):
        assert b.compose(a).underlying.matrix == tuple(
            tuple(int(r == c) for c in range(a.domain.group.rank)) for r in range(a.domain.group.rank)
        )
        assert kernel(a.underlying).cardinality == 1
        assert image(b.underlying).cardinality == b.codomain.size
    power, _, _ = direct_power(module("swap_z2_z2"), 2)
    assert power.size == 16 and power.context == module("swap_z2_z2").context
    assert {frozenset(s.elements()) for s in r_submodules(power)} == set(NaiveModule.of(power).lattice())


@pytest.mark.parametrize("name", ["t2_f2_regular", "z12_regular", "z2_z8"])
def test_submodule_presentation_embeds(name):
    m = module(name)
    for s in r_submodules(m):
        sm, inc = submodule_as_module(m, s)
        assert sm.size == s.cardinality
        assert kernel(inc.underlying).cardinality == 1
        assert image(inc.underlying) == s


@given(st.lists(st.sampled_from([2, 3, 4, 6, 8, 9]), max_size=2), st.lists(st.sampled_from([2, 3, 4, 6, 8, 9]), max_size=2))
def test_hom_count_formula(a, b):
    expected = 1
    for x in a:
        for y in b:
            expected *= gcd(x, y)
    assert hom_set(Z(*a), Z(*b)).cardinality == expected


def test_corpus_modules_validate():
    for name in corpus_names():
        m = module(name)
        assert validate_module(m) == []
        assert isinstance(m, RModule) and isinstance(m.group, FiniteAbelianGroup)
