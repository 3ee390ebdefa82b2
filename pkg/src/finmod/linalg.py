"""Integer row reduction for lattices that contain a diagonal of moduli.

Every subgroup of ``Z/d_1 + ... + Z/d_k`` is the image of a full-rank lattice
``L`` in ``Z^k`` with ``diag(d) Z^k <= L``.  Such a lattice has a unique upper
triangular Hermite basis, which is what :func:`hnf` returns.
"""

from __future__ import annotations

from typing import Sequence

Row = list[int]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) = a*x + b*y`` and ``g >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hnf(gens: Sequence[Sequence[int]], moduli: Sequence[int]) -> list[Row]:
    """Hermite basis of ``span(gens) + diag(moduli) Z^k``.

    The result has ``k`` rows, row ``i`` has pivot ``H[i][i]`` dividing
    ``moduli[i]``, zeros left of the pivot, and ``0 <= H[i][j] < H[j][j]`` for
    ``j > i``.  All moduli must be positive.
    """
    k = len(moduli)
    rows: list[Row] = []
    for g in gens:
        if len(g) != k:
            raise ValueError(f"generator of length {len(g)} in rank-{k} lattice")
        r = [g[c] % moduli[c] for c in range(k)]
        if any(r):
            rows.append(r)
    basis: list[Row] = []
    for col in range(k):
        m = moduli[col]
        piv = [0] * k
        piv[col] = m
        rest: list[Row] = []
        for r in rows:
            a = r[col]
            if a == 0:
                rest.append(r)
                continue
            b = piv[col]
            g, x, y = xgcd(a, b)
            if b % a == 0:
                # r becomes the pivot, old pivot reduces to a multiple of r
                q = b // a
                new_piv = r
                other = [piv[c] - q * r[c] for c in range(k)]
            else:
                ua, ub = a // g, b // g
                new_piv = [x * r[c] + y * piv[c] for c in range(k)]
                other = [ua * piv[c] - ub * r[c] for c in range(k)]
            piv = new_piv
            for c in range(col + 1, k):
                other[c] %= moduli[c]
                piv[c] %= moduli[c]
            if any(other[col + 1:]):
                other[col] = 0
                rest.append(other)
        if piv[col] < 0:
            piv = [-v for v in piv]
        for c in range(col + 1, k):
            piv[c] %= moduli[c]
        basis.append(piv)
        rows = rest
    # back-substitution so that entries above each pivot lie in [0, pivot)
    for j in range(k):
        p = basis[j][j]
        bj = basis[j]
        for i in range(j):
            bi = basis[i]
            q = bi[j] // p
            if q:
                for c in range(j, k):
                    bi[c] -= q * bj[c]
    return basis


def reduce_vector(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    """Reduce ``v`` against an upper triangular basis; zero result means membership."""
    w = list(v)
    k = len(w)
    for i in range(k):
        p = basis[i][i]
        q = w[i] // p
        if q:
            bi = basis[i]
            for c in range(i, k):
                w[c] -= q * bi[c]
    return w


def kernel_basis(
    matrix: Sequence[Sequence[int]],
    src_moduli: Sequence[int],
    dst_moduli: Sequence[int],
) -> list[Row]:
    """Hermite basis of the kernel of ``x -> matrix @ x`` from ``Z/src`` to ``Z/dst``.

    ``matrix[i][j]`` is coordinate ``i`` of the image of generator ``j``.  The
    map must be well defined (``src[j] * matrix[i][j] = 0 mod dst[i]``).
    """
    m, n = len(dst_moduli), len(src_moduli)
    gens = []
    for j in range(n):
        row = [matrix[i][j] for i in range(m)] + [0] * n
        row[m + j] = 1
        gens.append(row)
    full = hnf(gens, list(dst_moduli) + list(src_moduli))
    return [r[m:] for r in full[m:]]


def smith_form(
    basis: Sequence[Sequence[int]],
) -> tuple[list[int], list[Row]]:
    """Smith form of a square nonsingular integer matrix.

    Returns ``(s, V)`` where ``U @ basis @ V = diag(s)`` for some unimodular
    ``U``, with ``s[0] | s[1] | ...``.  Only the column transform ``V`` is kept:
    ``x -> x @ V`` identifies ``Z^k / rowspan(basis)`` with ``+ Z/s_i``.
    """
    k = len(basis)
    A = [list(r) for r in basis]
    V = [[int(i == j) for j in range(k)] for i in range(k)]

    def col_sub(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src, tracked in V
        for M in (A, V):
            for r in M:
                r[dst] -= q * r[src]

    def col_swap(c1: int, c2: int) -> None:
        for M in (A, V):
            for r in M:
                r[c1], r[c2] = r[c2], r[c1]

    for t in range(k):
        while True:
            # the smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, k):
                for j in range(t, k):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                raise ValueError("singular matrix in smith_form")
            bi, bj = best
            A[t], A[bi] = A[bi], A[t]
            if bj != t:
                col_swap(t, bj)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, k):
                q = A[i][t] // p
                if q:
                    A[i] = [u - q * v for u, v in zip(A[i], A[t])]
                dirty = dirty or A[i][t] != 0
            for j in range(t + 1, k):
                q = A[t][j] // p
                if q:
                    col_sub(j, t, q)
                dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, k) for j in range(t + 1, k) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            A[t] = [u + v for u, v in zip(A[t], A[bad])]
        if A[t][t] < 0:
            A[t] = [-u for u in A[t]]
    return [A[i][i] for i in range(k)], V
