from __future__ import annotations

import random

import pytest
from conftest import corpus_pairs, module

from finmod.abelian import canonicalize, image, join, kernel, meet
from finmod.galois import Pair, pair
from finmod.lattice import lattice
from finmod.modules import common_kernel, hom_set, image_sum
from finmod.properties import l_U, l_U_prime, r_M, r_N_prime

SAMPLES = 1000
PAIRS = corpus_pairs()


def _random_z(u, rng: random.Random):
    """A random subgroup of ``U`` given by up to three random maps."""
    k = rng.randint(0, 3)
    coords = [u.coords(u.random_element(rng)) for _ in range(k)]
    return canonicalize(coords, u.entries)


class Ops:
    """Galois operators with memoised results keyed by canonical subgroups."""

    def __init__(self, m, n) -> None:
        self.u = hom_set(m, n)
        self.lm, self.ln = lattice(m), lattice(n)
        self._l: dict = {}
        self._lp: dict = {}
        self._r: dict = {}
        self._rp: dict = {}

    def l(self, x):
        if x not in self._l:
            self._l[x] = meet(l_U(x, self.u), self.u.sub)
        return self._l[x]

    def lp(self, y):
        if y not in self._lp:
            self._lp[y] = meet(l_U_prime(y, self.u), self.u.sub)
        return self._lp[y]

    def r(self, z):
        if z not in self._r:
            self._r[z] = r_M(z, self.u)
        return self._r[z]

    def rp(self, z):
        if z not in self._rp:
            self._rp[z] = r_N_prime(z, self.u)
        return self._rp[z]


@pytest.mark.parametrize("names", PAIRS, ids=[f"{a}->{b}" for a, b in PAIRS])
def test_galois_laws(names):
    m, n = module(names[0]), module(names[1])
    ops = Ops(m, n)
    rng = random.Random(f"{names[0]}|{names[1]}")
    for _ in range(SAMPLES):
        x = ops.lm.subs[rng.randrange(len(ops.lm))]
        y = ops.ln.subs[rng.randrange(len(ops.ln))]
        z = _random_z(ops.u, rng)
        assert ops.u.sub.contains_sub(z)

        lx, rz = ops.l(x), ops.r(z)
        assert ops.r(lx).contains_sub(x)
        assert ops.l(rz).contains_sub(z)
        assert ops.l(ops.r(lx)) == lx
        assert ops.r(ops.l(rz)) == rz
        assert lx.contains_sub(z) == rz.contains_sub(x)

        lpy, rpz = ops.lp(y), ops.rp(z)
        assert y.contains_sub(ops.rp(lpy))
        assert ops.lp(rpz).contains_sub(z)
        assert ops.lp(ops.rp(lpy)) == lpy
        assert ops.rp(ops.lp(rpz)) == rpz
        assert lpy.contains_sub(z) == y.contains_sub(rpz)


@pytest.mark.parametrize("names", PAIRS, ids=[f"{a}->{b}" for a, b in PAIRS])
def test_operators_are_monotone_and_join_meet(names):
    m, n = module(names[0]), module(names[1])
    ops = Ops(m, n)
    rng = random.Random(names[0] + names[1])
    for _ in range(100):
        a = ops.lm.subs[rng.randrange(len(ops.lm))]
        b = ops.lm.subs[rng.randrange(len(ops.lm))]
        assert ops.l(join(a, b)) == meet(ops.l(a), ops.l(b))
        c = ops.ln.subs[rng.randrange(len(ops.ln))]
        d = ops.ln.subs[rng.randrange(len(ops.ln))]
        assert ops.lp(meet(c, d)) == meet(ops.lp(c), ops.lp(d))


SMALL_PAIRS = [p for p in PAIRS if hom_set(module(p[0]), module(p[1])).cardinality <= 4096]


@pytest.mark.parametrize("names", SMALL_PAIRS, ids=[f"{a}->{b}" for a, b in SMALL_PAIRS])
def test_routes_agree(names):
    m, n = module(names[0]), module(names[1])
    listed = Pair(m, n)
    generic = Pair(m, n, enumerate_limit=0, closed_forms=False)
    formulas = Pair(m, n, enumerate_limit=0, closed_forms=True)
    assert listed.small and not generic.small
    assert sorted(listed.kernel_meets()) == sorted(generic.kernel_meets()) == sorted(formulas.kernel_meets())
    assert sorted(listed.image_joins()) == sorted(generic.image_joins()) == sorted(formulas.image_joins())
    assert listed.kernel_counts() == generic.kernel_counts() == formulas.kernel_counts()
    assert listed.image_counts() == generic.image_counts() == formulas.image_counts()
    for x in range(len(listed.lm)):
        assert generic.closure(x) == formulas.closure(x)
        assert generic.ann_size(x) == formulas.ann_size(x)
    for y in range(len(listed.ln)):
        assert generic.coclosure(y) == formulas.coclosure(y)
        assert generic.coann_size(y) == formulas.coann_size(y)


@pytest.mark.parametrize("names", PAIRS, ids=[f"{a}->{b}" for a, b in PAIRS])
def test_witness_maps(names):
    m, n = module(names[0]), module(names[1])
    pr = pair(m, n)
    for x in pr.single_kernels()[:20]:
        f = pr.map_with_kernel(x)
        assert f is not None and pr.lm.index_of(kernel(f.underlying)) == x
    for y in pr.single_images()[:20]:
        f = pr.map_with_image(y)
        assert f is not None and pr.ln.index_of(image(f.underlying)) == y
    for x in pr.kernel_meets()[:20]:
        fam = pr.kernel_family_for(x)
        assert pr.lm.index_of(common_kernel(fam, m)) == x
    for y in pr.image_joins()[:20]:
        fam = pr.image_family_for(y)
        assert pr.ln.index_of(image_sum(fam, n)) == y


@pytest.mark.parametrize("names", SMALL_PAIRS, ids=[f"{a}->{b}" for a, b in SMALL_PAIRS])
def test_annihilators_match_definition(names):
    m, n = module(names[0]), module(names[1])
    ops = Ops(m, n)
    maps = ops.u.elements()
    kers = [kernel(f.underlying) for f in maps]
    ims = [image(f.underlying) for f in maps]
    for x in ops.lm.subs:
        want = {f.matrix for f, k in zip(maps, kers) if k.contains_sub(x)}
        assert {ops.u.matrix_of(t) for t in ops.l(x).elements()} == want
    for y in ops.ln.subs:
        want = {f.matrix for f, i in zip(maps, ims) if y.contains_sub(i)}
        assert {ops.u.matrix_of(t) for t in ops.lp(y).elements()} == want
