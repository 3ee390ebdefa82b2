"""Finite modules presented as a group together with action endomorphisms.

The ring is never built.  A module over a ring generated by labelled elements
``r_1, ..., r_t`` is the additive group plus the matrices by which each
``r_i`` acts; the submodules are the subgroups stable under these matrices and
the module maps are the group maps commuting with them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Iterable, Sequence

from .abelian import (
    FiniteAbelianGroup,
    GroupHom,
    MalformedInput,
    SizeGuardExceeded,
    SubmoduleRep,
    Vector,
    canonicalize,
    check_size,
    enumerate_subgroups,
    kernel,
    quotient,
)


class ContextMismatch(ValueError):
    """Raised when modules over different ring contexts are combined."""


@dataclass(frozen=True)
class RingContext:
    name: str
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise MalformedInput(f"duplicate generator labels in context {self.name!r}")


ZZ = RingContext("Z")


@dataclass(frozen=True)
class RModule:
    group: FiniteAbelianGroup
    actions: tuple[GroupHom, ...] = ()
    context: RingContext = ZZ
    name: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", tuple(self.actions))
        if len(self.actions) != len(self.context.labels):
            raise MalformedInput(
                f"{len(self.actions)} actions for {len(self.context.labels)} labels"
            )
        for label, a in zip(self.context.labels, self.actions):
            if a.domain != self.group or a.codomain != self.group:
                raise MalformedInput(f"action {label!r} is not an endomorphism of {self.group}")

    @classmethod
    def abelian(cls, orders: Iterable[int], name: str = "") -> RModule:
        return cls(FiniteAbelianGroup(tuple(orders)), name=name)

    @property
    def size(self) -> int:
        return self.group.size

    def is_zero(self) -> bool:
        return self.group.is_zero()

    def is_stable(self, sub: SubmoduleRep) -> bool:
        return all(sub.contains(a(v)) for a in self.actions for v in sub.generators)

    def label(self) -> str:
        return self.name or str(self.group)

    def cached(self, key: str, build):
        # builds are deterministic, so a racing duplicate build is harmless
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


def validate_module(m: RModule) -> list[str]:
    """Problems with ``m`` as human-readable strings; empty means valid."""
    problems = []
    g = m.group
    for label, a in zip(m.context.labels, m.actions):
        if a.domain != g or a.codomain != g:
            problems.append(f"action {label!r}: not an endomorphism of {g}")
            continue
        for i in range(g.rank):
            for j in range(g.rank):
                if (a.matrix[i][j] * g.orders[j]) % g.orders[i]:
                    problems.append(f"action {label!r}: entry ({i},{j}) violates the order congruence")
    return problems


def module_from_matrices(
    orders: Sequence[int],
    actions: Sequence[tuple[str, Sequence[Sequence[int]]]] = (),
    name: str = "",
    context_name: str | None = None,
) -> RModule:
    g = FiniteAbelianGroup(tuple(orders))
    labels = tuple(label for label, _ in actions)
    homs = []
    for label, mat in actions:
        try:
            homs.append(GroupHom(g, g, tuple(tuple(r) for r in mat)))
        except MalformedInput as exc:
            raise MalformedInput(f"action {label!r}: {exc}") from None
    ctx = RingContext(context_name or ("Z" if not labels else "R<" + ",".join(labels) + ">"), labels)
    if not labels:
        ctx = ZZ
    return RModule(g, tuple(homs), ctx, name)


@dataclass(frozen=True)
class RHom:
    domain: RModule
    codomain: RModule
    underlying: GroupHom

    def __post_init__(self) -> None:
        if self.domain.context != self.codomain.context:
            raise ContextMismatch("hom between modules over different contexts")
        f = self.underlying
        for a, b in zip(self.domain.actions, self.codomain.actions):
            if f.compose(a) != b.compose(f):
                raise MalformedInput("matrix does not commute with the ring action")

    @property
    def matrix(self) -> tuple[Vector, ...]:
        return self.underlying.matrix

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.underlying(x)

    def is_zero(self) -> bool:
        return self.underlying.is_zero()

    def compose(self, first: RHom) -> RHom:
        return RHom(first.domain, self.codomain, self.underlying.compose(first.underlying))


def _check_context(m: RModule, n: RModule) -> None:
    if m.context != n.context:
        raise ContextMismatch(f"contexts {m.context.name!r} and {n.context.name!r} differ")


class HomSet:
    """``Hom_R(M, N)`` as a subgroup ``U`` of an entry group ``E``.

    A group map ``h`` has ``h_ij = c_ij * t_ij`` with ``t_ij`` in
    ``Z/gcd(d_j, e_i)`` and ``c_ij = e_i / gcd(d_j, e_i)``, so ``E`` is exactly
    ``Hom_Z(M, N)``.  ``U`` is the kernel of ``h -> (h A_g - B_g h)_g``.  The
    element list is only materialised on request because ``U`` can be huge.
    """

    def __init__(self, domain: RModule, codomain: RModule) -> None:
        _check_context(domain, codomain)
        self.domain = domain
        self.codomain = codomain
        d, e = domain.group.orders, codomain.group.orders
        self.positions: list[tuple[int, int]] = []
        self.scales: list[int] = []
        entry_orders = []
        for i in range(len(e)):
            for j in range(len(d)):
                g = gcd(d[j], e[i])
                if g > 1:
                    self.positions.append((i, j))
                    self.scales.append(e[i] // g)
                    entry_orders.append(g)
        self.entries = FiniteAbelianGroup(tuple(entry_orders))
        self.sub = self._solve([])

    # -- linear constraints on entry vectors -------------------------------------------------

    def _constraint_rows(self) -> tuple[list[list[int]], list[int]]:
        """Rows of ``t -> (hA - Bh)`` with their target moduli."""
        m, n = self.domain, self.codomain
        d, e = m.group.orders, n.group.orders
        rows: list[list[int]] = []
        mods: list[int] = []
        for a, b in zip(m.actions, n.actions):
            for i in range(len(e)):
                for j in range(len(d)):
                    row = []
                    for (i0, j0), c in zip(self.positions, self.scales):
                        v = 0
                        if i0 == i:
                            v += c * a.matrix[j0][j]
                        if j0 == j:
                            v -= b.matrix[i][i0] * c
                        row.append(v)
                    rows.append(row)
                    mods.append(e[i])
        return rows, mods

    def _eval_rows(self, x: Sequence[int], target: GroupHom | None = None) -> tuple[list[list[int]], list[int]]:
        """Rows of ``t -> P h(x)`` where ``P`` is ``target`` (identity if omitted)."""
        e = self.codomain.group.orders
        base = []
        for i in range(len(e)):
            base.append(
                [c * x[j0] if i0 == i else 0 for (i0, j0), c in zip(self.positions, self.scales)]
            )
        if target is None:
            return base, list(e)
        rows = []
        for q in range(target.codomain.rank):
            rows.append(
                [sum(target.matrix[q][i] * base[i][t] for i in range(len(e))) for t in range(len(self.positions))]
            )
        return rows, list(target.codomain.orders)

    def _solve(self, extra: list[tuple[list[list[int]], list[int]]]) -> SubmoduleRep:
        rows, mods = self._constraint_rows()
        for r, m in extra:
            rows += r
            mods += m
        if not rows:
            return canonicalize(self.entries.generators(), self.entries)
        f = GroupHom(self.entries, FiniteAbelianGroup(tuple(mods)), tuple(tuple(r) for r in rows))
        return kernel(f)

    # -- conversions ----------------------------------------------------------------------

    @property
    def cardinality(self) -> int:
        return self.sub.cardinality

    def matrix_of(self, t: Sequence[int]) -> tuple[Vector, ...]:
        d, e = self.domain.group.orders, self.codomain.group.orders
        mat = [[0] * len(d) for _ in range(len(e))]
        for (i, j), c, v in zip(self.positions, self.scales, t):
            mat[i][j] = (c * v) % e[i]
        return tuple(tuple(r) for r in mat)

    def hom(self, t: Sequence[int]) -> RHom:
        g = GroupHom(self.domain.group, self.codomain.group, self.matrix_of(t))
        return RHom(self.domain, self.codomain, g)

    def coords(self, f: RHom | GroupHom) -> Vector:
        mat = f.matrix
        out = []
        for (i, j), c in zip(self.positions, self.scales):
            out.append(mat[i][j] // c)
        return self.entries.element(out)

    def contains(self, f: RHom | GroupHom) -> bool:
        mat = f.matrix
        e = self.codomain.group.orders
        for i, row in enumerate(mat):
            for j, v in enumerate(row):
                if v % e[i] and (i, j) not in self.positions:
                    return False
        try:
            t = self.coords(f)
        except MalformedInput:
            return False
        if self.matrix_of(t) != tuple(tuple(v % e[i] for v in r) for i, r in enumerate(mat)):
            return False
        return self.sub.contains(t)

    def zero(self) -> RHom:
        return self.hom(self.entries.zero())

    def generators(self, sub: SubmoduleRep | None = None) -> list[RHom]:
        return [self.hom(t) for t in (sub or self.sub).generators]

    def elements(self, limit: int = 1 << 16) -> list[RHom]:
        """All maps, ordered lexicographically by matrix entries."""
        if self.cardinality > limit:
            raise SizeGuardExceeded(f"Hom set of size {self.cardinality} exceeds limit {limit}")
        mats = sorted(self.matrix_of(t) for t in self.sub.elements())
        g = GroupHom
        return [RHom(self.domain, self.codomain, g(self.domain.group, self.codomain.group, m)) for m in mats]

    def random_element(self, rng: random.Random, sub: SubmoduleRep | None = None) -> RHom:
        s = sub or self.sub
        e = self.entries
        t = e.zero()
        # coefficient i ranges over the i-th Hermite step, which is a bijection onto s
        for i, row in enumerate(s.basis):
            steps = e.orders[i] // row[i]
            if steps > 1:
                t = e.add(t, e.scale(rng.randrange(steps), row))
        return self.hom(t)

    # -- annihilator operators --------------------------------------------------------------

    def annihilator(self, x_sub: SubmoduleRep) -> SubmoduleRep:
        """Entry-space subgroup of maps vanishing on ``x_sub``."""
        extra = [self._eval_rows(x) for x in x_sub.generators]
        return self._solve(extra)

    def co_annihilator(self, y_sub: SubmoduleRep) -> SubmoduleRep:
        """Entry-space subgroup of maps with image inside ``y_sub``."""
        _, proj = quotient(y_sub)
        if proj.codomain.rank == 0:
            return self.sub
        extra = [self._eval_rows(x, proj) for x in self.domain.group.generators()]
        return self._solve(extra)


def hom_set(m: RModule, n: RModule) -> HomSet:
    _check_context(m, n)
    if m == n:
        return m.cached("end", lambda: HomSet(m, m))
    return HomSet(m, n)


def end_set(m: RModule) -> HomSet:
    return hom_set(m, m)


def common_kernel(homs: Sequence[RHom | GroupHom], m: RModule) -> SubmoduleRep:
    """Intersection of kernels; the empty family gives ``M``."""
    g = m.group
    if not homs:
        return canonicalize(g.generators(), g)
    rows: list[Vector] = []
    mods: list[int] = []
    for f in homs:
        rows += list(f.matrix)
        mods += list((f.codomain.group if isinstance(f, RHom) else f.codomain).orders)
    big = FiniteAbelianGroup(tuple(mods))
    return kernel(GroupHom(g, big, tuple(rows)))


def image_sum(homs: Sequence[RHom | GroupHom], n: RModule) -> SubmoduleRep:
    """Sum of images; the empty family gives ``0``."""
    gens = []
    for f in homs:
        dom = f.domain.group if isinstance(f, RHom) else f.domain
        gens += [f(v) for v in dom.generators()]
    return canonicalize(gens, n.group)


def r_submodules(m: RModule) -> list[SubmoduleRep]:
    """All submodules ordered by (cardinality, basis)."""

    def build() -> list[SubmoduleRep]:
        check_size(m.size)
        subs = [s for s in enumerate_subgroups(m.group) if m.is_stable(s)]
        subs.sort(key=SubmoduleRep.key)
        return subs

    return m.cached("submodules", build)


def direct_sum(ms: Sequence[RModule], name: str = "") -> tuple[RModule, list[RHom], list[RHom]]:
    if not ms:
        raise MalformedInput("direct sum of an empty list")
    ctx = ms[0].context
    for m in ms:
        _check_context(ms[0], m)
    orders = tuple(d for m in ms for d in m.group.orders)
    g = FiniteAbelianGroup(orders)
    offsets = []
    off = 0
    for m in ms:
        offsets.append(off)
        off += m.group.rank
    actions = []
    for a_idx in range(len(ctx.labels)):
        mat = [[0] * off for _ in range(off)]
        for m, o in zip(ms, offsets):
            a = m.actions[a_idx].matrix
            for i in range(m.group.rank):
                for j in range(m.group.rank):
                    mat[o + i][o + j] = a[i][j]
        actions.append(GroupHom(g, g, tuple(tuple(r) for r in mat)))
    total = RModule(g, tuple(actions), ctx, name or " + ".join(m.label() for m in ms))
    inj, proj = [], []
    for m, o in zip(ms, offsets):
        k = m.group.rank
        im = tuple(tuple(int(i == o + j) for j in range(k)) for i in range(off))
        pm = tuple(tuple(int(o + i == j) for j in range(off)) for i in range(k))
        inj.append(RHom(m, total, GroupHom(m.group, g, im)))
        proj.append(RHom(total, m, GroupHom(g, m.group, pm)))
    return total, inj, proj


def direct_power(m: RModule, k: int) -> tuple[RModule, list[RHom], list[RHom]]:
    if k < 1:
        raise MalformedInput("power must be at least 1")
    return direct_sum([m] * k, name=f"({m.label()})^{k}")


def submodule_as_module(m: RModule, sub: SubmoduleRep) -> tuple[RModule, RHom]:
    """A presentation of ``sub`` as a module with its inclusion into ``m``."""
    s, v = _sub_presentation(sub)
    g = FiniteAbelianGroup(tuple(s))
    # generators of the abstract group map to these elements of m
    gens = v
    inc = GroupHom(g, m.group, tuple(tuple(gens[j][i] for j in range(len(gens))) for i in range(m.group.rank)))
    actions = []
    for a in m.actions:
        images = [a(x) for x in gens]
        actions.append(GroupHom(g, g, tuple(tuple(r) for r in _solve_in(gens, s, images, m.group))))
    mod = RModule(g, tuple(actions), m.context, f"sub({m.label()})")
    return mod, RHom(mod, m, inc)


def _sub_presentation(sub: SubmoduleRep) -> tuple[list[int], list[Vector]]:
    """Invariant factors of ``sub`` and elements generating each cyclic factor."""
    from .linalg import smith_form

    g = sub.ambient
    k = g.rank
    h = [list(r) for r in sub.basis]
    rel = []
    for i in range(k):
        target = [0] * k
        target[i] = g.orders[i]
        coeffs = [0] * k
        for j in range(k):
            c = target[j] // h[j][j]
            coeffs[j] = c
            for t in range(j, k):
                target[t] -= c * h[j][t]
        rel.append(coeffs)
    s, v = smith_form(rel)
    # the rows of V^{-1} H are the new generators; compute V^{-1} exactly
    vinv = _unimodular_inverse(v)
    s_out, gens = [], []
    for i, si in enumerate(s):
        if si > 1:
            row = [sum(vinv[i][t] * h[t][c] for t in range(k)) for c in range(k)]
            s_out.append(si)
            gens.append(g.element(row))
    return s_out, gens


def _unimodular_inverse(v: list[list[int]]) -> list[list[int]]:
    from fractions import Fraction

    n = len(v)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(v)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = []
    for row in a:
        vals = row[n:]
        if any(x.denominator != 1 for x in vals):
            raise AssertionError("transform is not unimodular")
        out.append([int(x) for x in vals])
    return out


def _solve_in(
    gens: list[Vector], orders: list[int], targets: list[Vector], ambient: FiniteAbelianGroup
) -> list[list[int]]:
    """Matrix expressing each target as a combination of ``gens``."""
    table = {}
    for coeffs in product(*(range(o) for o in orders)):
        x = ambient.zero()
        for c, v in zip(coeffs, gens):
            x = ambient.add(x, ambient.scale(c, v))
        table.setdefault(x, coeffs)
    cols = [table[t] for t in targets]
    return [[cols[j][i] for j in range(len(targets))] for i in range(len(orders))]
