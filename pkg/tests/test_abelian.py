from __future__ import annotations

from itertools import product
from math import gcd, prod

import pytest
from hypothesis import given, strategies as st

from finmod.abelian import (
    AmbientMismatch,
    FiniteAbelianGroup,
    GroupHom,
    MalformedInput,
    SizeGuardExceeded,
    canonicalize,
    check_size,
    enumerate_subgroups,
    factorize,
    image,
    invariant_factors,
    join,
    kernel,
    meet,
    quotient,
    structure,
)
from finmod.linalg import smith_form


def naive_span(g: FiniteAbelianGroup, gens) -> frozenset:
    out = {g.zero()}
    gens = [g.element(v) for v in gens]
    while True:
        grown = out | {g.add(x, y) for x in out for y in gens}
        if grown == out:
            return frozenset(out)
        out = grown


def naive_subgroups(g: FiniteAbelianGroup) -> set[frozenset]:
    elems = list(g.elements())
    found = {frozenset([g.zero()])}
    frontier = list(found)
    while frontier:
        new = []
        for s in frontier:
            for x in elems:
                if x not in s:
                    t = naive_span(g, list(s) + [x])
                    if t not in found:
                        found.add(t)
                        new.append(t)
        frontier = new
    return found


SMALL = [(), (2,), (4,), (6,), (2, 2), (2, 4), (4, 4), (2, 2, 2), (3, 9), (2, 6), (4, 8), (2, 2, 4), (12,)]

groups = st.lists(st.sampled_from([2, 3, 4, 6, 8, 9]), min_size=0, max_size=3).map(
    lambda o: FiniteAbelianGroup(tuple(o))
)


@st.composite
def group_and_subs(draw, count: int = 3):
    g = draw(groups)
    subs = []
    for _ in range(count):
        gens = draw(st.lists(st.tuples(*[st.integers(0, d - 1) for d in g.orders]), max_size=3))
        subs.append(canonicalize(gens, g))
    return g, subs


# -- worked examples ----------------------------------------------------------------------------


def test_canonicalize_examples():
    g = FiniteAbelianGroup((4, 2))
    assert canonicalize([], g).cardinality == 1
    assert canonicalize([(1, 0), (0, 1)], g).cardinality == 8
    c = canonicalize([(2, 1)], g)
    assert c.cardinality == 2
    assert set(c.elements()) == {(0, 0), (2, 1)}


def test_canonicalize_rejects_wrong_rank():
    with pytest.raises(MalformedInput):
        canonicalize([(1, 0, 0)], FiniteAbelianGroup((4, 2)))


def test_kernel_image_examples():
    z6, z4, z2, z8 = (FiniteAbelianGroup((d,)) for d in (6, 4, 2, 8))
    f = GroupHom(z6, z4, ((2,),))
    assert set(kernel(f).elements()) == {(0,), (2,), (4,)}
    assert set(image(f).elements()) == {(0,), (2,)}
    zero = GroupHom.zero(z4, z2)
    assert kernel(zero).cardinality == 4 and image(zero).cardinality == 1
    ident = GroupHom.identity(z8)
    assert kernel(ident).cardinality == 1 and image(ident).cardinality == 8


def test_hom_congruence_rejected():
    with pytest.raises(MalformedInput):
        GroupHom(FiniteAbelianGroup((2,)), FiniteAbelianGroup((4,)), ((1,),))


def test_meet_join_quotient_examples():
    g = FiniteAbelianGroup((4, 2))
    a = canonicalize([(2, 0)], g)
    b = canonicalize([(0, 1)], g)
    assert meet(a, b).cardinality == 1
    assert join(a, b).cardinality == 4
    z8 = FiniteAbelianGroup((8,))
    q, proj = quotient(canonicalize([(4,)], z8))
    assert q.invariant_factors() == (4,)
    assert image(proj).cardinality == q.size
    assert kernel(proj) == canonicalize([(4,)], z8)


def test_ambient_mismatch():
    a = canonicalize([(1,)], FiniteAbelianGroup((4,)))
    b = canonicalize([(1,)], FiniteAbelianGroup((2,)))
    with pytest.raises(AmbientMismatch):
        meet(a, b)


def test_invariant_factors_and_factorize():
    assert invariant_factors((2, 3, 4)) == (2, 12)
    assert invariant_factors((1, 1)) == ()
    assert FiniteAbelianGroup.canonical((6, 4)).orders == (2, 12)
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert FiniteAbelianGroup(()).size == 1 and FiniteAbelianGroup(()).is_zero()


def test_size_guard(monkeypatch):
    monkeypatch.setenv("FINMOD_MAX_SIZE", "100")
    with pytest.raises(SizeGuardExceeded):
        check_size(101)
    with pytest.raises(SizeGuardExceeded):
        list(enumerate_subgroups(FiniteAbelianGroup((2,) * 7)))


# -- oracles ------------------------------------------------------------------------------------


@pytest.mark.parametrize("orders", SMALL)
def test_subgroup_enumeration_matches_brute_force(orders):
    g = FiniteAbelianGroup(orders)
    subs = list(enumerate_subgroups(g))
    as_sets = [frozenset(s.elements()) for s in subs]
    assert len(set(as_sets)) == len(as_sets)
    assert set(as_sets) == naive_subgroups(g)
    for s, e in zip(subs, as_sets):
        assert s.cardinality == len(e)
        assert canonicalize(list(e), g) == s


@pytest.mark.parametrize("orders", [(2, 2, 2), (4, 4), (2, 4), (3, 9)])
def test_modularity_all_triples(orders):
    subs = list(enumerate_subgroups(FiniteAbelianGroup(orders)))
    for x, y, z in product(subs, repeat=3):
        if z.contains_sub(x):
            assert join(x, meet(y, z)) == meet(join(x, y), z)


@given(group_and_subs())
def test_lattice_laws(data):
    g, (a, b, c) = data
    assert join(a, b) == join(b, a) and meet(a, b) == meet(b, a)
    assert join(a, meet(a, b)) == a and meet(a, join(a, b)) == a
    assert join(a, b).cardinality * meet(a, b).cardinality == a.cardinality * b.cardinality
    if c.contains_sub(a):
        assert join(a, meet(b, c)) == meet(join(a, b), c)


@given(group_and_subs(count=1))
def test_canonical_roundtrip(data):
    g, (a,) = data
    elems = a.elements()
    assert len(elems) == a.cardinality == len(set(elems))
    assert canonicalize(elems, g) == a
    assert frozenset(elems) == naive_span(g, a.generators)
    q, proj = quotient(a)
    assert q.size * a.cardinality == g.size
    assert kernel(proj) == a
    assert structure(a) == invariant_factors(structure(a))


@st.composite
def homs(draw):
    a, b = draw(groups), draw(groups)
    rows = []
    for e in b.orders:
        row = []
        for d in a.orders:
            step = e // gcd(d, e)
            row.append(step * draw(st.integers(0, e)) % e)
        rows.append(tuple(row))
    return GroupHom(a, b, tuple(rows))


@given(homs())
def test_kernel_image_counts(f):
    k, im = kernel(f), image(f)
    assert k.cardinality * im.cardinality == f.domain.size
    brute_k = {x for x in f.domain.elements() if not any(f(x))}
    brute_im = {f(x) for x in f.domain.elements()}
    assert set(k.elements()) == brute_k
    assert set(im.elements()) == brute_im


def _det(a: list[list[int]]) -> int:
    if len(a) == 1:
        return a[0][0]
    return sum((-1) ** j * a[0][j] * _det([r[:j] + r[j + 1 :] for r in a[1:]]) for j in range(len(a)))


@given(
    st.integers(1, 3).flatmap(
        lambda k: st.lists(st.lists(st.integers(-12, 12), min_size=k, max_size=k), min_size=k, max_size=k)
    )
)
def test_smith_form_divisibility(rows):
    d = _det(rows)
    if d == 0:
        with pytest.raises(ValueError):
            smith_form(rows)
        return
    s, v = smith_form(rows)
    assert all(x > 0 for x in s)
    assert prod(s) == abs(d)
    for x, y in zip(s, s[1:]):
        assert y % x == 0
    assert abs(_det(v)) == 1
