"""Submodule lattices and the predicates defined on them.

Every submodule of a module is indexed once; each carries a bitmask over the
element indices of the ambient group, so meets are ``&`` and inclusion is a
mask test.  For finite modules the definitional scans reduce to socle and
radical tests:

* ``K`` is essential in ``L`` exactly when ``L n Soc(M)`` lies in ``K``;
* ``K`` is superfluous in ``L`` exactly when ``K`` lies in ``Rad(L)``;
* ``L`` lies above ``K`` exactly when ``L/K`` lies in ``Rad(M/K)``, i.e. ``L``
  is inside every maximal submodule containing ``K``.

The scans themselves live in :mod:`finmod.certificates` and are used as
oracles in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .abelian import AmbientMismatch, SubmoduleRep, canonicalize, join, meet
from .modules import RModule, end_set, r_submodules


class PreconditionError(ValueError):
    """Raised when an argument violates a documented precondition."""


@dataclass(frozen=True)
class Verdict:
    value: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.value


class Lattice:
    """Indexed submodule lattice of one module (built once, then read-only)."""

    def __init__(self, module: RModule) -> None:
        self.module = module
        self.subs: list[SubmoduleRep] = r_submodules(module)
        self.masks: list[int] = [s.mask for s in self.subs]
        self.sizes: list[int] = [s.cardinality for s in self.subs]
        self.by_mask: dict[int, int] = {m: i for i, m in enumerate(self.masks)}
        self.by_sub: dict[SubmoduleRep, int] = {s: i for i, s in enumerate(self.subs)}
        self.bottom = 0
        self.top = len(self.subs) - 1
        self.full_mask = self.masks[self.top]
        self.zero_mask = self.masks[0]
        self._joins: dict[tuple[int, int], int] = {}
        self._fi: dict[int, bool] = {}
        self._rad_of: dict[int, int] = {}
        self._above: dict[int, int] = {}
        self._complement: dict[int, int | None] | None = None
        self._summands: list[int] | None = None
        self._envelope: dict[tuple[int, bool], int | None] = {}
        self._below: dict[tuple[int, bool], int | None] = {}
        self._end_images: list[list[int]] | None = None
        self._shift = _ShiftTables(module.group)
        self._steps: list[list[tuple[tuple[int, ...], int]]] = [
            _hermite_steps(sub) for sub in self.subs
        ]

        order = sorted(range(len(self.subs)), key=lambda i: self.sizes[i])
        atoms: list[int] = []
        for i in order:
            if i == self.bottom:
                continue
            if not any(self.leq(a, i) for a in atoms):
                atoms.append(i)
        coatoms: list[int] = []
        for i in reversed(order):
            if i == self.top:
                continue
            if not any(self.leq(i, c) for c in coatoms):
                coatoms.append(i)
        self.atoms = sorted(atoms)
        self.coatoms = sorted(coatoms)
        self.soc = self.index_of(self.closure_of_union([self.subs[a] for a in self.atoms]))
        rad = self.full_mask
        for c in self.coatoms:
            rad &= self.masks[c]
        self.rad = self.by_mask[rad]

    # -- basic lattice operations ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.subs)

    def index_of(self, sub: SubmoduleRep) -> int:
        try:
            return self.by_sub[sub]
        except KeyError:
            raise PreconditionError(f"{sub} is not a submodule of {self.module.label()}") from None

    def closure_of_union(self, subs: Iterable[SubmoduleRep]) -> SubmoduleRep:
        gens = [v for s in subs for v in s.generators]
        return canonicalize(gens, self.module.group)

    def leq(self, i: int, j: int) -> bool:
        return self.masks[i] & ~self.masks[j] == 0

    def meet(self, i: int, j: int) -> int:
        return self.by_mask[self.masks[i] & self.masks[j]]

    def join(self, i: int, j: int) -> int:
        if self.leq(i, j):
            return j
        if self.leq(j, i):
            return i
        key = (i, j) if i < j else (j, i)
        r = self._joins.get(key)
        if r is None:
            acc = self.masks[j]
            for step, order in self._steps[i]:
                acc = self._shift.orbit(acc, step, order)
            r = self.by_mask[acc]
            self._joins[key] = r
        return r

    def join_many(self, idxs: Iterable[int]) -> int:
        idxs = list(idxs)
        if not idxs:
            return self.bottom
        return self.by_sub[self.closure_of_union(self.subs[i] for i in idxs)]

    # -- socle / radical / essential / superfluous -------------------------------------------

    def is_essential(self, k: int, l: int) -> bool:
        """``k`` essential in ``l`` (requires ``k <= l``)."""
        return self.masks[l] & self.masks[self.soc] & ~self.masks[k] == 0

    def rad_of(self, l: int) -> int:
        """Radical of the submodule ``l``: meet of its maximal submodules."""
        r = self._rad_of.get(l)
        if r is not None:
            return r
        if l == self.bottom:
            self._rad_of[l] = l
            return l
        inside = [i for i in range(len(self.subs)) if i != l and self.leq(i, l)]
        inside.sort(key=lambda i: -self.sizes[i])
        maximal: list[int] = []
        for i in inside:
            if not any(self.leq(i, m) for m in maximal):
                maximal.append(i)
        mask = self.masks[l]
        for m in maximal:
            mask &= self.masks[m]
        r = self.by_mask[mask]
        self._rad_of[l] = r
        return r

    def maximal_in(self, l: int) -> list[int]:
        inside = [i for i in range(len(self.subs)) if i != l and self.leq(i, l)]
        inside.sort(key=lambda i: -self.sizes[i])
        maximal: list[int] = []
        for i in inside:
            if not any(self.leq(i, m) for m in maximal):
                maximal.append(i)
        return sorted(maximal)

    def is_superfluous(self, k: int, l: int) -> bool:
        """``k`` superfluous in ``l`` (requires ``k <= l``)."""
        if l == self.top:
            return self.leq(k, self.rad)
        return self.leq(k, self.rad_of(l))

    def above(self, k: int) -> int:
        """Meet of the maximal submodules containing ``k``; the preimage of ``Rad(M/k)``."""
        r = self._above.get(k)
        if r is None:
            mask = self.full_mask
            for c in self.coatoms:
                if self.leq(k, c):
                    mask &= self.masks[c]
            r = self.by_mask[mask]
            self._above[k] = r
        return r

    def lies_above(self, l: int, k: int) -> bool:
        """``k <= l`` and ``l/k`` superfluous in ``M/k``."""
        return self.leq(k, l) and self.leq(l, self.above(k))

    # -- summands and full invariance -----------------------------------------------------

    def complements(self) -> dict[int, int | None]:
        """Each submodule mapped to its first complement in canonical order, if any."""
        if self._complement is None:
            by_size: dict[int, list[int]] = {}
            for i, s in enumerate(self.sizes):
                by_size.setdefault(s, []).append(i)
            total = self.sizes[self.top]
            out: dict[int, int | None] = {}
            for i in range(len(self.subs)):
                out[i] = None
                mi = self.masks[i]
                for j in by_size.get(total // self.sizes[i], ()):
                    if mi & self.masks[j] == self.zero_mask:
                        out[i] = j
                        break
            self._complement = out
        return self._complement

    def is_summand(self, i: int) -> bool:
        return self.complements()[i] is not None

    def summands(self) -> list[int]:
        if self._summands is None:
            self._summands = [i for i, c in self.complements().items() if c is not None]
        return self._summands

    def end_images(self) -> list[list[int]]:
        """For each generator of ``End(M)``, the image index of every element index."""
        if self._end_images is None:
            g = self.module.group
            elems = list(g.elements())
            tables = []
            for h in end_set(self.module).generators():
                tables.append([g.index(h(x)) for x in elems])
            self._end_images = tables
        return self._end_images

    def fi_witness(self, i: int) -> tuple[int, tuple[int, ...]] | None:
        """``(generator number, element)`` moving ``i`` outside itself, or ``None``."""
        g = self.module.group
        mask = self.masks[i]
        gens = [g.index(v) for v in self.subs[i].generators]
        for t, table in enumerate(self.end_images()):
            for x in gens:
                if not mask >> table[x] & 1:
                    return t, g.unindex(x)
        return None

    def is_fully_invariant(self, i: int) -> bool:
        r = self._fi.get(i)
        if r is None:
            r = self.fi_witness(i) is None
            self._fi[i] = r
        return r

    def envelope(self, x: int, strict: bool = False) -> int | None:
        """First (fully invariant, if ``strict``) summand in which ``x`` is essential."""
        key = (x, strict)
        if key not in self._envelope:
            self._envelope[key] = next(
                (d for d in self.summands()
                 if self.leq(x, d) and self.is_essential(x, d) and (not strict or self.is_fully_invariant(d))),
                None,
            )
        return self._envelope[key]

    def summand_below(self, l: int, strict: bool = False) -> int | None:
        """First (fully invariant) summand ``k`` such that ``l`` lies above ``k``."""
        key = (l, strict)
        if key not in self._below:
            self._below[key] = next(
                (k for k in self.summands()
                 if self.lies_above(l, k) and (not strict or self.is_fully_invariant(k))),
                None,
            )
        return self._below[key]

    def meet_close(self, idxs: Iterable[int]) -> list[int]:
        out = set(idxs)
        frontier = list(out)
        while frontier:
            new = []
            for a in frontier:
                for b in list(out):
                    c = self.meet(a, b)
                    if c not in out:
                        out.add(c)
                        new.append(c)
            frontier = new
        return sorted(out)

    def join_close(self, idxs: Iterable[int]) -> list[int]:
        out = set(idxs)
        frontier = list(out)
        while frontier:
            new = []
            for a in frontier:
                for b in list(out):
                    c = self.join(a, b)
                    if c not in out:
                        out.add(c)
                        new.append(c)
            frontier = new
        return sorted(out)


class _ShiftTables:
    """Translation of element bitmasks by group elements.

    Element ``x`` sits at bit ``sum x_i * stride_i``.  Adding ``a`` to
    coordinate ``i`` rotates each block of ``d_i * stride_i`` bits, which is two
    masked shifts.
    """

    def __init__(self, g) -> None:
        self.g = g
        self.low: list[list[int]] = []
        self.high: list[list[int]] = []
        size = g.size
        for i, d in enumerate(g.orders):
            stride = g.strides[i]
            lows, highs = [0], [0]
            for a in range(1, d):
                lo = hi = 0
                for n in range(size):
                    if (n // stride) % d < d - a:
                        lo |= 1 << n
                    else:
                        hi |= 1 << n
                lows.append(lo)
                highs.append(hi)
            self.low.append(lows)
            self.high.append(highs)

    def translate(self, mask: int, v: tuple[int, ...]) -> int:
        g = self.g
        for i, a in enumerate(v):
            if a:
                s = g.strides[i]
                d = g.orders[i]
                mask = ((mask & self.low[i][a]) << (a * s)) | ((mask & self.high[i][a]) >> ((d - a) * s))
        return mask

    def orbit(self, mask: int, v: tuple[int, ...], order: int) -> int:
        """Union of ``mask + c*v`` for ``0 <= c < order``."""
        acc = mask
        cur = mask
        for _ in range(order - 1):
            cur = self.translate(cur, v)
            acc |= cur
        return acc


def _hermite_steps(sub: SubmoduleRep) -> list[tuple[tuple[int, ...], int]]:
    g = sub.ambient
    out = []
    for i, row in enumerate(sub.basis):
        o = g.orders[i] // row[i]
        if o > 1:
            out.append((g.element(row), o))
    return out


def lattice(m: RModule) -> Lattice:
    return m.cached("lattice", lambda: Lattice(m))


def _module_for(sub: SubmoduleRep, m: RModule | None) -> RModule:
    if m is None:
        return RModule(sub.ambient)
    if m.group != sub.ambient:
        raise AmbientMismatch(f"{sub} does not live in {m.label()}")
    return m


def socle(m: RModule) -> SubmoduleRep:
    lat = lattice(m)
    return lat.subs[lat.soc]


def radical(m: RModule) -> SubmoduleRep:
    lat = lattice(m)
    return lat.subs[lat.rad]


def is_essential(k: SubmoduleRep, l: SubmoduleRep, m: RModule | None = None) -> Verdict:
    """Essentiality with a witness ``X`` (nonzero, ``X n K = 0``) on failure."""
    m = _module_for(k, m)
    lat = lattice(m)
    ki, li = lat.index_of(k), lat.index_of(l)
    if not lat.leq(ki, li):
        raise PreconditionError("K is not contained in L")
    if lat.is_essential(ki, li):
        return Verdict(True)
    bad = [a for a in lat.atoms if lat.leq(a, li) and not lat.leq(a, ki)]
    if not bad:
        raise AssertionError("socle law violated")
    return Verdict(False, _first(lat, bad))


def is_superfluous(k: SubmoduleRep, l: SubmoduleRep, m: RModule | None = None) -> Verdict:
    """Superfluity with a witness ``X`` (proper in ``L``, ``K + X = L``) on failure."""
    m = _module_for(k, m)
    lat = lattice(m)
    ki, li = lat.index_of(k), lat.index_of(l)
    if not lat.leq(ki, li):
        raise PreconditionError("K is not contained in L")
    if lat.is_superfluous(ki, li):
        return Verdict(True)
    bad = [p for p in lat.maximal_in(li) if not lat.leq(ki, p)]
    if not bad:
        raise AssertionError("radical law violated")
    return Verdict(False, _first(lat, bad))


def _first(lat: Lattice, idxs: Sequence[int]) -> SubmoduleRep:
    # the witness with the lexicographically smallest element list
    return min((lat.subs[i] for i in idxs), key=lambda s: sorted(s.elements()))


def summands(m: RModule) -> list[SubmoduleRep]:
    lat = lattice(m)
    return [lat.subs[i] for i in lat.summands()]


def is_summand(k: SubmoduleRep, m: RModule | None = None) -> Verdict:
    m = _module_for(k, m)
    lat = lattice(m)
    c = lat.complements()[lat.index_of(k)]
    return Verdict(c is not None, None if c is None else lat.subs[c])


def is_fully_invariant(k: SubmoduleRep, m: RModule | None = None) -> Verdict:
    """Full invariance; the witness is ``(h, x)`` with ``h(x)`` outside ``K``."""
    m = _module_for(k, m)
    lat = lattice(m)
    w = lat.fi_witness(lat.index_of(k))
    if w is None:
        return Verdict(True)
    h = end_set(m).generators()[w[0]]
    return Verdict(False, (h, w[1]))


def lies_above(l: SubmoduleRep, k: SubmoduleRep, m: RModule | None = None) -> Verdict:
    m = _module_for(l, m)
    lat = lattice(m)
    li, ki = lat.index_of(l), lat.index_of(k)
    if not lat.leq(ki, li):
        raise PreconditionError("K is not contained in L")
    return Verdict(lat.lies_above(li, ki))


def essential_envelope_summand(
    x: SubmoduleRep, m: RModule | None = None, strict: bool = False
) -> SubmoduleRep | None:
    m = _module_for(x, m)
    lat = lattice(m)
    d = lat.envelope(lat.index_of(x), strict)
    return None if d is None else lat.subs[d]


def meet_closure(subs: Iterable[SubmoduleRep]) -> list[SubmoduleRep]:
    return _close(subs, meet)


def join_closure(subs: Iterable[SubmoduleRep]) -> list[SubmoduleRep]:
    return _close(subs, join)


def _close(subs: Iterable[SubmoduleRep], op) -> list[SubmoduleRep]:
    out = set(subs)
    ambients = {s.ambient for s in out}
    if len(ambients) > 1:
        raise AmbientMismatch("closure over submodules of different groups")
    frontier = list(out)
    while frontier:
        new = []
        for a in frontier:
            for b in list(out):
                c = op(a, b)
                if c not in out:
                    out.add(c)
                    new.append(c)
        frontier = new
    return sorted(out, key=SubmoduleRep.key)


def end_ring_is_abelian(m: RModule) -> Verdict:
    """Whether every idempotent of ``End(M)`` is central.

    Idempotents are exactly the projections ``M = K + T``, and such a
    projection is central iff ``K`` and ``T`` are fully invariant, so the
    answer is the weak duo test.  The witness on failure is a pair ``(e, h)``
    with ``eh != he``; on success it is the list of idempotent matrices (each
    summand has a single complement in that case).
    """
    lat = lattice(m)
    idempotents = []
    for k in lat.summands():
        t = lat.complements()[k]
        e = projection(m, lat.subs[k], lat.subs[t])
        w = lat.fi_witness(k)
        if w is not None:
            hs = end_set(m).generators()
            h = hs[w[0]]
            if e.compose(h) == h.compose(e):
                raise AssertionError("non-invariant summand with a central projection")
            return Verdict(False, (e, h))
        idempotents.append(e)
    return Verdict(True, idempotents)


def projection(m: RModule, k: SubmoduleRep, t: SubmoduleRep):
    """The idempotent with image ``k`` and kernel ``t`` (``M = k + t``)."""
    from .abelian import GroupHom
    from .modules import RHom

    g = m.group
    k_elems = k.elements()
    cols = []
    for v in g.generators():
        for a in k_elems:
            if t.contains(tuple((x - y) % d for x, y, d in zip(v, a, g.orders))):
                cols.append(a)
                break
        else:
            raise PreconditionError("the given submodules are not complementary")
    mat = tuple(tuple(cols[j][i] for j in range(g.rank)) for i in range(g.rank))
    return RHom(m, m, GroupHom(g, g, mat))


def sub_list(lat: Lattice, idxs: Sequence[int]) -> list[SubmoduleRep]:
    return [lat.subs[i] for i in idxs]
