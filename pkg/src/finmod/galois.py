"""Kernel and image families of ``U = Hom(M, N)``.

The meet-closure of the kernels of maps in ``U`` is exactly the set of
``X`` with ``r_M(l_U(X)) = X``, and dually the join-closure of the images is
the set of ``Y`` with ``r'_N(l'_U(Y)) = Y``.  Both closures are computed from
generators of ``l_U(X)`` (resp. ``l'_U(Y)``), so ``U`` itself is never listed.
When ``U`` is small the families are also available by listing every map,
which is how the tests cross-check the routes.

Over ``Z`` there are closed forms: the closure of ``X`` is ``X + eM`` with
``e = exp(N)``, the trace of ``M`` in ``Y`` is ``{y in Y : e'y = 0}`` with
``e' = exp(M)``, and ``|Hom(A, B)|`` is the product of ``gcd(a_i, b_j)`` over
invariant factors.  These are used for plain abelian groups with large ``U``.

Single kernels are recovered by inclusion-exclusion: ``|l_U(X)|`` counts the
maps whose kernel contains ``X``, and every kernel is closed, so

    #{f : Ker f = X} = |l_U(X)| - sum over closed Z > X of #{f : Ker f = Z}.
"""

from __future__ import annotations

import random
from functools import cached_property
from math import gcd, prod

from .abelian import SubmoduleRep, canonicalize, image, kernel, quotient, structure
from .lattice import Lattice, lattice
from .modules import ZZ, HomSet, RHom, RModule, common_kernel, hom_set, image_sum

ENUMERATION_LIMIT = 4096


class Pair:
    """Cached data for an ordered pair ``(M, N)`` of modules."""

    def __init__(
        self,
        m: RModule,
        n: RModule,
        enumerate_limit: int = ENUMERATION_LIMIT,
        closed_forms: bool = True,
    ) -> None:
        self.m = m
        self.n = n
        self.homs: HomSet = hom_set(m, n)
        self.small = self.homs.cardinality <= enumerate_limit
        self.formulas = closed_forms and m.context == ZZ
        self._closure: dict[int, int] = {}
        self._coclosure: dict[int, int] = {}
        self._ann: dict[int, SubmoduleRep] = {}
        self._coann: dict[int, SubmoduleRep] = {}
        self._maps: list[RHom] | None = None
        self._kers: list[int] | None = None
        self._ims: list[int] | None = None

    # lattices are built on first use, so a pair can be queried on one side only

    @cached_property
    def lm(self) -> Lattice:
        return lattice(self.m)

    @cached_property
    def ln(self) -> Lattice:
        return lattice(self.n)

    @cached_property
    def _em(self) -> int:
        """Index of ``exp(N) * M``, the closure of ``0`` over ``Z``."""
        e = self.n.group.exponent
        g = self.m.group
        return self.lm.index_of(canonicalize([g.scale(e, v) for v in g.generators()], g))

    @cached_property
    def _n_f(self) -> int:
        """Index of ``{y in N : exp(M) y = 0}``, the trace of ``M`` in ``N`` over ``Z``."""
        f = self.m.group.exponent
        h = self.n.group
        return self.ln.by_mask[sum(1 << h.index(y) for y in h.elements() if not any(h.scale(f, y)))]

    # -- operators ------------------------------------------------------------------------

    def ann_size(self, x: int) -> int:
        """``|l_U(X)|``."""
        if self.formulas:
            q, _ = quotient(self.lm.subs[x])
            return _hom_count(q.invariant_factors(), self.n.group.invariant_factors())
        return self.ann(x).cardinality

    def coann_size(self, y: int) -> int:
        """``|l'_U(Y)|``."""
        if self.formulas:
            return _hom_count(self.m.group.invariant_factors(), structure(self.ln.subs[y]))
        return self.coann(y).cardinality

    def ann(self, x: int) -> SubmoduleRep:
        """``l_U(X)`` as a subgroup of the entry group."""
        r = self._ann.get(x)
        if r is None:
            r = self.homs.annihilator(self.lm.subs[x])
            self._ann[x] = r
        return r

    def coann(self, y: int) -> SubmoduleRep:
        """``l'_U(Y)`` as a subgroup of the entry group."""
        r = self._coann.get(y)
        if r is None:
            r = self.homs.co_annihilator(self.ln.subs[y])
            self._coann[y] = r
        return r

    def closure(self, x: int) -> int:
        """Index of ``r_M(l_U(X))``."""
        r = self._closure.get(x)
        if r is None and self.formulas:
            r = self.lm.join(x, self._em)
            self._closure[x] = r
        if r is None:
            gens = self.homs.generators(self.ann(x))
            r = self.lm.index_of(common_kernel(gens, self.m))
            self._closure[x] = r
        return r

    def coclosure(self, y: int) -> int:
        """Index of ``r'_N(l'_U(Y))``, the trace of ``M`` in ``Y``."""
        r = self._coclosure.get(y)
        if r is None and self.formulas:
            r = self.ln.meet(y, self._n_f)
            self._coclosure[y] = r
        if r is None:
            gens = self.homs.generators(self.coann(y))
            r = self.ln.index_of(image_sum(gens, self.n))
            self._coclosure[y] = r
        return r

    # -- listing route ----------------------------------------------------------------------

    def maps(self) -> list[RHom]:
        """Every map (small ``U`` only)."""
        if self._maps is None:
            self._maps = self.homs.elements()
        return self._maps

    def listed_kernels(self) -> list[int]:
        if self._kers is None:
            self._kers = [self.lm.index_of(kernel(f.underlying)) for f in self.maps()]
        return self._kers

    def listed_images(self) -> list[int]:
        if self._ims is None:
            self._ims = [self.ln.index_of(image(f.underlying)) for f in self.maps()]
        return self._ims

    # -- families ---------------------------------------------------------------------------

    def kernel_meets(self) -> list[int]:
        """Meet-closure of all kernels (contains ``M``, the kernel of zero)."""
        if self.small:
            return self.lm.meet_close(set(self.listed_kernels()))
        return [x for x in range(len(self.lm)) if self.closure(x) == x]

    def image_joins(self) -> list[int]:
        """Join-closure of all images (contains ``0``)."""
        if self.small:
            return self.ln.join_close(set(self.listed_images()))
        return [y for y in range(len(self.ln)) if self.coclosure(y) == y]

    def kernel_counts(self) -> dict[int, int]:
        """Number of maps with kernel exactly ``X`` for each closed ``X``."""
        return dict(self._kernel_counts)

    @cached_property
    def _kernel_counts(self) -> dict[int, int]:
        if self.small:
            counts: dict[int, int] = {}
            for k in self.listed_kernels():
                counts[k] = counts.get(k, 0) + 1
            return counts
        lat = self.lm
        closed = sorted(self.kernel_meets(), key=lambda i: -lat.sizes[i])
        counts = {}
        done: list[int] = []
        for x in closed:
            c = self.ann_size(x)
            for z in done:
                if z != x and lat.leq(x, z):
                    c -= counts[z]
            counts[x] = c
            done.append(x)
        return {x: c for x, c in counts.items() if c}

    def image_counts(self) -> dict[int, int]:
        return dict(self._image_counts)

    @cached_property
    def _image_counts(self) -> dict[int, int]:
        if self.small:
            counts: dict[int, int] = {}
            for y in self.listed_images():
                counts[y] = counts.get(y, 0) + 1
            return counts
        lat = self.ln
        closed = sorted(self.image_joins(), key=lambda i: lat.sizes[i])
        counts = {}
        done: list[int] = []
        for y in closed:
            c = self.coann_size(y)
            for z in done:
                if z != y and lat.leq(z, y):
                    c -= counts[z]
            counts[y] = c
            done.append(y)
        return {y: c for y, c in counts.items() if c}

    def single_kernels(self) -> list[int]:
        return sorted(self.kernel_counts())

    def single_images(self) -> list[int]:
        return sorted(self.image_counts())

    # -- witnesses ----------------------------------------------------------------------------

    def map_with_kernel(self, x: int, rng: random.Random | None = None) -> RHom | None:
        """Some map whose kernel is exactly ``X``."""
        if self.small:
            for f, k in zip(self.maps(), self.listed_kernels()):
                if k == x:
                    return f
            return None
        rng = rng or random.Random(x)
        sub = self.ann(x)
        target = self.lm.subs[x]
        for _ in range(4000):
            f = self.homs.random_element(rng, sub)
            if common_kernel([f], self.m) == target:
                return f
        return None

    def map_with_image(self, y: int, rng: random.Random | None = None) -> RHom | None:
        if self.small:
            for f, i in zip(self.maps(), self.listed_images()):
                if i == y:
                    return f
            return None
        rng = rng or random.Random(y)
        sub = self.coann(y)
        target = self.ln.subs[y]
        for _ in range(4000):
            f = self.homs.random_element(rng, sub)
            if image_sum([f], self.n) == target:
                return f
        return None

    def kernel_family_for(self, x: int) -> list[RHom]:
        """A short list of maps whose kernels meet in ``X`` (``X`` closed)."""
        cur = self.lm.top
        chosen: list[RHom] = []
        target = self.lm.subs[x]
        for f in self.homs.generators(self.ann(x)):
            if cur == x:
                break
            nxt = self.lm.index_of(common_kernel(chosen + [f], self.m))
            if nxt != cur:
                chosen.append(f)
                cur = nxt
        if self.lm.subs[cur] != target:
            raise AssertionError("submodule is not an intersection of kernels")
        return chosen

    def image_family_for(self, y: int) -> list[RHom]:
        """A short list of maps whose images sum to ``Y`` (``Y`` closed)."""
        cur = self.ln.bottom
        chosen: list[RHom] = []
        for f in self.homs.generators(self.coann(y)):
            if cur == y:
                break
            nxt = self.ln.index_of(image_sum(chosen + [f], self.n))
            if nxt != cur:
                chosen.append(f)
                cur = nxt
        if cur != y:
            raise AssertionError("submodule is not a sum of images")
        return chosen


def _hom_count(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    return prod(gcd(x, y) for x in a for y in b)


def pair(m: RModule, n: RModule | None = None) -> Pair:
    n = m if n is None else n
    key = ("pair", n)
    if key not in m._cache:
        m._cache[key] = Pair(m, n)
    return m._cache[key]
