"""Finite abelian groups, their subgroups and homomorphisms.

A group is ``Z/d_1 + ... + Z/d_k`` with the orders kept exactly as given, so
matrices always refer to the presentation the caller chose.  Subgroups are
stored by their Hermite basis (see :mod:`finmod.linalg`), which makes equal
subgroups compare equal and hash equal.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from .linalg import hnf, kernel_basis, reduce_vector, smith_form

Vector = tuple[int, ...]

DEFAULT_MAX_SIZE = 1 << 20


class MalformedInput(ValueError):
    """Raised for data that does not describe a valid object."""


class SizeGuardExceeded(RuntimeError):
    """Raised when an ambient group is larger than the configured guard."""


class AmbientMismatch(ValueError):
    """Raised when two objects live in different ambient groups."""


def max_size() -> int:
    """Size guard in force, overridable through ``FINMOD_MAX_SIZE``."""
    raw = os.environ.get("FINMOD_MAX_SIZE")
    return int(raw) if raw else DEFAULT_MAX_SIZE


def check_size(n: int, limit: int | None = None) -> None:
    bound = max_size() if limit is None else limit
    if n > bound:
        raise SizeGuardExceeded(f"group of order {n} exceeds size guard {bound}")


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors ``d_1 | d_2 | ...`` (all > 1) of ``+ Z/orders``."""
    by_prime: dict[int, list[int]] = {}
    for d in orders:
        for p, e in factorize(d).items():
            by_prime.setdefault(p, []).append(p**e)
    for powers in by_prime.values():
        powers.sort(reverse=True)
    length = max((len(v) for v in by_prime.values()), default=0)
    out = []
    for i in range(length):
        out.append(prod(v[i] for v in by_prime.values() if i < len(v)))
    return tuple(reversed(out))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``Z/d_1 + ... + Z/d_k``; the zero group has no orders or only 1s."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = tuple(int(d) for d in self.orders)
        if any(d < 1 for d in orders):
            raise MalformedInput(f"orders must be positive, got {list(orders)}")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def canonical(cls, orders: Iterable[int]) -> FiniteAbelianGroup:
        """Invariant-factor presentation of the group with the given orders."""
        return cls(invariant_factors(orders))

    @property
    def rank(self) -> int:
        return len(self.orders)

    @cached_property
    def size(self) -> int:
        return prod(self.orders)

    @cached_property
    def exponent(self) -> int:
        e = 1
        for d in self.orders:
            e = e * d // gcd(e, d)
        return e

    @cached_property
    def strides(self) -> tuple[int, ...]:
        s = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            s[i] = s[i + 1] * self.orders[i + 1]
        return tuple(s)

    def invariant_factors(self) -> tuple[int, ...]:
        return invariant_factors(self.orders)

    def is_zero(self) -> bool:
        return self.size == 1

    def element(self, coords: Sequence[int]) -> Vector:
        if len(coords) != self.rank:
            raise MalformedInput(f"element of length {len(coords)} in rank-{self.rank} group")
        return tuple(c % d for c, d in zip(coords, self.orders))

    def zero(self) -> Vector:
        return (0,) * self.rank

    def add(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def scale(self, c: int, x: Sequence[int]) -> Vector:
        return tuple((c * a) % d for a, d in zip(x, self.orders))

    def index(self, x: Sequence[int]) -> int:
        return sum(a * s for a, s in zip(x, self.strides))

    def unindex(self, n: int) -> Vector:
        return tuple((n // s) % d for s, d in zip(self.strides, self.orders))

    def elements(self) -> Iterator[Vector]:
        """All elements in index order."""
        return product(*(range(d) for d in self.orders))

    def generators(self) -> list[Vector]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def order_of(self, x: Sequence[int]) -> int:
        o = 1
        for a, d in zip(x, self.orders):
            c = d // gcd(a, d)
            o = o * c // gcd(o, c)
        return o

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return "+".join(f"Z{d}" for d in self.orders)


@dataclass(frozen=True)
class SubmoduleRep:
    """A subgroup given by the Hermite basis of its preimage lattice.

    ``basis`` has one row per coordinate; row ``i`` has pivot ``basis[i][i]``
    dividing ``orders[i]``.  Rows whose pivot equals the order contribute
    nothing and are kept only to make the form canonical.
    """

    ambient: FiniteAbelianGroup
    basis: tuple[Vector, ...]

    @cached_property
    def cardinality(self) -> int:
        return prod(d // self.basis[i][i] for i, d in enumerate(self.ambient.orders))

    @cached_property
    def generators(self) -> list[Vector]:
        g = self.ambient
        out = []
        for i, row in enumerate(self.basis):
            if row[i] != g.orders[i]:
                out.append(g.element(row))
        return out

    def contains(self, x: Sequence[int]) -> bool:
        return not any(reduce_vector(self.basis, x))

    def contains_sub(self, other: SubmoduleRep) -> bool:
        return all(self.contains(v) for v in other.generators)

    def elements(self) -> list[Vector]:
        """Elements in a deterministic order (not sorted)."""
        orders = self.ambient.orders
        elems: list[Vector] = [self.ambient.zero()]
        for i in range(len(orders) - 1, -1, -1):
            row = self.basis[i]
            o = orders[i] // row[i]
            if o == 1:
                continue
            step = tuple(r % d for r, d in zip(row, orders))
            layer = elems
            new = list(layer)
            cur = layer
            for _ in range(o - 1):
                cur = [tuple((a + b) % d for a, b, d in zip(e, step, orders)) for e in cur]
                new.extend(cur)
            elems = new
        return elems

    @cached_property
    def mask(self) -> int:
        """Bitmask over element indices of the ambient group."""
        g = self.ambient
        m = 0
        for e in self.elements():
            m |= 1 << g.index(e)
        return m

    def key(self) -> tuple:
        return (self.cardinality, self.basis)

    def __str__(self) -> str:
        gens = ", ".join(str(v) for v in self.generators)
        return f"<{gens}> ({self.cardinality})"


def _from_basis(ambient: FiniteAbelianGroup, basis: Sequence[Sequence[int]]) -> SubmoduleRep:
    return SubmoduleRep(ambient, tuple(tuple(r) for r in basis))


def canonicalize(generators: Iterable[Sequence[int]], ambient: FiniteAbelianGroup) -> SubmoduleRep:
    gens = []
    for v in generators:
        if len(v) != ambient.rank:
            raise MalformedInput(
                f"generator {tuple(v)} has {len(v)} coordinates, ambient rank is {ambient.rank}"
            )
        gens.append(list(v))
    return _from_basis(ambient, hnf(gens, ambient.orders))


def zero_sub(ambient: FiniteAbelianGroup) -> SubmoduleRep:
    return canonicalize([], ambient)


def full_sub(ambient: FiniteAbelianGroup) -> SubmoduleRep:
    return canonicalize(ambient.generators(), ambient)


def _same(a: SubmoduleRep, b: SubmoduleRep) -> None:
    if a.ambient != b.ambient:
        raise AmbientMismatch(f"subgroups of {a.ambient} and {b.ambient}")


def join(a: SubmoduleRep, b: SubmoduleRep) -> SubmoduleRep:
    _same(a, b)
    return canonicalize(a.generators + b.generators, a.ambient)


def meet(a: SubmoduleRep, b: SubmoduleRep) -> SubmoduleRep:
    """Intersection via the lattice trick on rows ``(a | a)`` and ``(b | 0)``."""
    _same(a, b)
    g = a.ambient
    k = g.rank
    rows = [list(r) + list(r) for r in a.generators]
    rows += [list(r) + [0] * k for r in b.generators]
    full = hnf(rows, list(g.orders) * 2)
    return _from_basis(g, [r[k:] for r in full[k:]])


@dataclass(frozen=True)
class GroupHom:
    """``matrix[i][j]`` is coordinate ``i`` of the image of generator ``j``."""

    domain: FiniteAbelianGroup
    codomain: FiniteAbelianGroup
    matrix: tuple[Vector, ...] = field(default=())

    def __post_init__(self) -> None:
        m, n = self.codomain.rank, self.domain.rank
        rows = [list(r) for r in self.matrix] if self.matrix else [[0] * n for _ in range(m)]
        if len(rows) != m or any(len(r) != n for r in rows):
            raise MalformedInput(f"matrix shape does not match {n} -> {m} generators")
        e, d = self.codomain.orders, self.domain.orders
        norm = tuple(tuple(rows[i][j] % e[i] for j in range(n)) for i in range(m))
        for i in range(m):
            for j in range(n):
                if (norm[i][j] * d[j]) % e[i]:
                    raise MalformedInput(
                        f"entry ({i},{j}) = {norm[i][j]} is not well defined: "
                        f"{d[j]} * {norm[i][j]} != 0 mod {e[i]}"
                    )
        object.__setattr__(self, "matrix", norm)

    @classmethod
    def identity(cls, g: FiniteAbelianGroup) -> GroupHom:
        return cls(g, g, tuple(tuple(int(i == j) for j in range(g.rank)) for i in range(g.rank)))

    @classmethod
    def zero(cls, a: FiniteAbelianGroup, b: FiniteAbelianGroup) -> GroupHom:
        return cls(a, b, tuple((0,) * a.rank for _ in range(b.rank)))

    def __call__(self, x: Sequence[int]) -> Vector:
        e = self.codomain.orders
        return tuple(
            sum(h * a for h, a in zip(row, x)) % e[i] for i, row in enumerate(self.matrix)
        )

    def compose(self, first: GroupHom) -> GroupHom:
        """``self o first``."""
        if first.codomain != self.domain:
            raise AmbientMismatch("composition of incompatible homomorphisms")
        n, mid = first.domain.rank, self.domain.rank
        mat = tuple(
            tuple(sum(self.matrix[i][t] * first.matrix[t][j] for t in range(mid)) for j in range(n))
            for i in range(self.codomain.rank)
        )
        return GroupHom(first.domain, self.codomain, mat)

    def add(self, other: GroupHom) -> GroupHom:
        return GroupHom(
            self.domain,
            self.codomain,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)),
        )

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.matrix for v in r)


def kernel(f: GroupHom) -> SubmoduleRep:
    return _from_basis(
        f.domain, kernel_basis(f.matrix, f.domain.orders, f.codomain.orders)
    )


def image(f: GroupHom) -> SubmoduleRep:
    return canonicalize([f(v) for v in f.domain.generators()], f.codomain)


def image_of(f: GroupHom, sub: SubmoduleRep) -> SubmoduleRep:
    return canonicalize([f(v) for v in sub.generators], f.codomain)


def preimage(f: GroupHom, sub: SubmoduleRep) -> SubmoduleRep:
    """``f^{-1}(sub)`` computed as the kernel of the composite into the quotient."""
    _, proj = quotient(sub)
    return kernel(proj.compose(f))


def quotient(k: SubmoduleRep) -> tuple[FiniteAbelianGroup, GroupHom]:
    """``M/K`` in invariant-factor form with the projection ``M -> M/K``."""
    g = k.ambient
    if g.rank == 0:
        q = FiniteAbelianGroup(())
        return q, GroupHom.zero(g, q)
    s, v = smith_form([list(r) for r in k.basis])
    keep = [i for i, si in enumerate(s) if si > 1]
    q = FiniteAbelianGroup(tuple(s[i] for i in keep))
    mat = tuple(tuple(v[j][i] for j in range(g.rank)) for i in keep)
    return q, GroupHom(g, q, mat)


def structure(sub: SubmoduleRep) -> tuple[int, ...]:
    """Invariant factors of the subgroup as an abstract group."""
    g = sub.ambient
    k = g.rank
    if sub.cardinality == 1:
        return ()
    # relations: diag(d) expressed in the basis H; H is upper triangular
    h = [list(r) for r in sub.basis]
    rel = []
    for i in range(k):
        target = [0] * k
        target[i] = g.orders[i]
        coeffs = [0] * k
        for j in range(k):
            c, r = divmod(target[j], h[j][j])
            if r:
                raise AssertionError("lattice does not contain the moduli")
            coeffs[j] = c
            for t in range(j, k):
                target[t] -= c * h[j][t]
        rel.append(coeffs)
    s, _ = smith_form(rel)
    return tuple(x for x in s if x > 1)


def enumerate_subgroups(g: FiniteAbelianGroup) -> Iterator[SubmoduleRep]:
    """Every subgroup exactly once, by building Hermite bases bottom-up."""
    check_size(g.size)
    k = g.rank
    d = g.orders
    divisors = [[p for p in range(1, di + 1) if di % p == 0] for di in d]
    rows: list[list[int]] = [[0] * k for _ in range(k)]

    def tail_ok(i: int, row: list[int], p: int) -> bool:
        c = d[i] // p
        v = [0] * (i + 1) + [(c * row[j]) % d[j] for j in range(i + 1, k)]
        return not any(reduce_vector(rows, v))

    def rec(i: int) -> Iterator[SubmoduleRep]:
        if i < 0:
            yield SubmoduleRep(g, tuple(tuple(r) for r in rows))
            return
        ranges = [range(rows[j][j]) for j in range(i + 1, k)]
        for p in divisors[i]:
            for tail in product(*ranges):
                row = [0] * i + [p] + list(tail)
                if p == d[i] and any(tail):
                    continue
                if tail_ok(i, row, p):
                    rows[i] = row
                    yield from rec(i - 1)
        rows[i] = [int(j == i) for j in range(k)]

    # placeholder rows with pivot 1 never act on vectors that vanish before column i
    for i in range(k):
        rows[i][i] = 1
    yield from rec(k - 1)
