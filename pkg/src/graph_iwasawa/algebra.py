"""Exact integer linear algebra.

Matrices are numpy arrays of ``dtype=object`` holding Python ints, so no
entry ever overflows. The heavy loops run on plain lists of lists.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, InfiniteGroup

DEFAULT_MAX_DIM = 4096


def int_matrix(rows: Iterable[Iterable[int]], shape: tuple[int, int] | None = None) -> np.ndarray:
    """Build an exact integer matrix (object dtype) from nested iterables.

    ``shape`` is needed only to give empty matrices a definite column count.
    """
    data = [[int(x) for x in row] for row in rows]
    if shape is not None:
        out = np.zeros(shape, dtype=object)
        for i, row in enumerate(data):
            out[i, :] = row
        return out
    if not data:
        return np.zeros((0, 0), dtype=object)
    return np.array(data, dtype=object).reshape(len(data), len(data[0]))


def zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def to_lists(A: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(A)]


def det(A: np.ndarray) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = to_lists(A)
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            Mi, Mk = M[i], M[k]
            a = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (pk * Mi[j] - a * Mk[j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


def valuation(x: int, p: int) -> float | int:
    """p-adic valuation of an integer; ``math.inf`` for zero."""
    if x == 0:
        return math.inf
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        r, c = self.S.shape
        return [int(self.S[i, i]) for i in range(min(r, c))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _snf_lists(S, U=None, V=None):
    """In-place Smith reduction of the list matrix ``S``.

    Row operations are mirrored on ``U`` and column operations on ``V`` when
    those are given. Returns the diagonal length that is nonzero (the rank).
    """
    m = len(S)
    n = len(S[0]) if m else 0
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = S[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        _swap_rows(S, U, t, i)
        _swap_cols(S, V, t, j)

        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                a = S[i][t]
                if a:
                    q = a // p
                    _row_axpy(S, U, i, t, -q, t)
                    if S[i][t]:
                        dirty = True
            rowt = S[t]
            for j in range(t + 1, n):
                a = rowt[j]
                if a:
                    q = a // p
                    _col_axpy(S, V, j, t, -q, t)
                    if rowt[j]:
                        dirty = True
            if dirty:
                # bring the smallest remainder on row/column t to the pivot
                cand = (abs(S[t][t]), t, t)
                for i in range(t + 1, m):
                    a = S[i][t]
                    if a and abs(a) < cand[0]:
                        cand = (abs(a), i, t)
                for j in range(t + 1, n):
                    a = S[t][j]
                    if a and abs(a) < cand[0]:
                        cand = (abs(a), t, j)
                _swap_rows(S, U, t, cand[1])
                _swap_cols(S, V, t, cand[2])
                continue
            # pivot must divide the whole remaining block
            bad = None
            for i in range(t + 1, m):
                row = S[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _row_axpy(S, U, t, bad, 1, t)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    return t


def _swap_rows(S, U, a, b):
    if a != b:
        S[a], S[b] = S[b], S[a]
        if U is not None:
            U[a], U[b] = U[b], U[a]


def _swap_cols(S, V, a, b):
    if a != b:
        for row in S:
            row[a], row[b] = row[b], row[a]
        if V is not None:
            for row in V:
                row[a], row[b] = row[b], row[a]


def _row_axpy(S, U, i, k, c, start):
    """row_i += c * row_k."""
    ri, rk = S[i], S[k]
    for j in range(start, len(ri)):
        if rk[j]:
            ri[j] += c * rk[j]
    if U is not None:
        ui, uk = U[i], U[k]
        for j in range(len(ui)):
            if uk[j]:
                ui[j] += c * uk[j]


def _col_axpy(S, V, j, k, c, start):
    """col_j += c * col_k."""
    for i in range(start, len(S)):
        row = S[i]
        if row[k]:
            row[j] += c * row[k]
    if V is not None:
        for row in V:
            if row[k]:
                row[j] += c * row[k]


def smith_normal_form(A: np.ndarray) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Args:
      A: an integer matrix of shape (m, n).

    Returns:
      ``SmithDecomposition(U, S, V)`` with ``U @ A @ V == S``, ``S`` diagonal,
      nonnegative diagonal entries each dividing the next, zeros last.
    """
    A = np.asarray(A, dtype=object)
    m, n = A.shape
    S = to_lists(A)
    U = to_lists(identity(m))
    V = to_lists(identity(n))
    _snf_lists(S, U, V)
    return SmithDecomposition(int_matrix(U, (m, m)), int_matrix(S, (m, n)), int_matrix(V, (n, n)))


def _eliminate_units(A: np.ndarray):
    """Sparse elimination of unit pivots.

    Each unit pivot contributes an invariant factor 1, so the pivot row and
    column can be dropped without changing the cokernel. Returns the number of
    pivots removed and the dense remainder.
    """
    A = np.asarray(A, dtype=object)
    m, n = A.shape
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {j: set() for j in range(n)}
    for i in range(m):
        r = {j: int(x) for j, x in enumerate(A[i]) if x != 0}
        rows[i] = r
        for j in r:
            cols[j].add(i)
    units = 0
    while True:
        best = None
        for i, r in rows.items():
            ri = len(r) - 1
            for j, a in r.items():
                if a == 1 or a == -1:
                    cost = ri * (len(cols[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i, j = best
        piv = rows.pop(i)
        a = piv[j]
        for k in list(cols[j]):
            if k == i:
                continue
            rk = rows[k]
            c = -rk[j] * a
            for jj, x in piv.items():
                y = rk.get(jj, 0) + c * x
                if y:
                    if jj not in rk:
                        cols[jj].add(k)
                    rk[jj] = y
                else:
                    if jj in rk:
                        del rk[jj]
                        cols[jj].discard(k)
        for jj in piv:
            cols[jj].discard(i)
        del cols[j]
        units += 1
    keep_cols = sorted(cols)
    col_index = {j: c for c, j in enumerate(keep_cols)}
    rest = []
    for i in sorted(rows):
        dense = [0] * len(keep_cols)
        for j, x in rows[i].items():
            dense[col_index[j]] = x
        rest.append(dense)
    return units, rest, len(keep_cols)


def invariant_factors(A: np.ndarray) -> tuple[list[int], int]:
    """Nonzero Smith diagonal (1s included) and the row count of ``A``."""
    A = np.asarray(A, dtype=object)
    m, _ = A.shape
    units, rest, ncols = _eliminate_units(A)
    if rest and ncols:
        r = _snf_lists(rest)
        diag = [rest[i][i] for i in range(r)]
    else:
        diag = []
    return [1] * units + diag, m


# ---------------------------------------------------------------------------
# Abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroupStructure:
    """A finitely generated abelian group ``Z^free_rank + sum Z/d_i``.

    ``torsion`` lists the invariant factors in ascending divisibility order,
    each at least 2.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {a} does not divide {b}")
        if any(d < 2 for d in self.torsion):
            raise ValueError("invariant factors must be at least 2")

    @classmethod
    def from_diagonal(cls, diagonal: Sequence[int], rows: int) -> "AbelianGroupStructure":
        """Cokernel of a diagonal map into ``Z^rows``."""
        nonzero = [abs(int(d)) for d in diagonal if d != 0]
        torsion = _normalize_torsion([d for d in nonzero if d != 1])
        return cls(free_rank=rows - len(nonzero), torsion=torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion)

    @property
    def order(self) -> int:
        if self.free_rank:
            raise InfiniteGroup(f"group has free rank {self.free_rank}")
        return self.torsion_order

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.torsion)}

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _normalize_torsion(factors: Iterable[int]) -> tuple[int, ...]:
    """Rewrite arbitrary cyclic orders as an invariant-factor chain."""
    primes: dict[int, list[int]] = {}
    for d in factors:
        d = abs(int(d))
        if d in (0, 1):
            continue
        q = 2
        while q * q <= d:
            if d % q == 0:
                e = 1
                d //= q
                while d % q == 0:
                    d //= q
                    e += 1
                primes.setdefault(q, []).append(q ** e)
            q += 1
        if d > 1:
            primes.setdefault(d, []).append(d)
    if not primes:
        return ()
    length = max(len(v) for v in primes.values())
    chain = [1] * length
    for powers in primes.values():
        powers.sort()
        for k, pe in enumerate(powers):
            chain[length - len(powers) + k] *= pe
    return tuple(chain)


def cokernel_structure(A: np.ndarray) -> AbelianGroupStructure:
    """Structure of ``Z^rows / (column span of A)``."""
    diag, rows = invariant_factors(A)
    return AbelianGroupStructure.from_diagonal(diag, rows)


def p_part(group: AbelianGroupStructure, p: int, keep_free: bool = False) -> AbelianGroupStructure:
    """p-primary part of ``group``.

    Raises InfiniteGroup for groups with free rank unless ``keep_free`` is set,
    in which case the free rank is carried over unchanged.
    """
    if group.free_rank and not keep_free:
        raise InfiniteGroup("p-part of an infinite group requested without keep_free")
    torsion = []
    for d in group.torsion:
        v = valuation(d, p)
        if v:
            torsion.append(p ** v)
    return AbelianGroupStructure(group.free_rank if keep_free else 0, tuple(torsion))


# ---------------------------------------------------------------------------
# Kernels and Hermite form
# ---------------------------------------------------------------------------

def hermite_normal_form_rows(A: np.ndarray) -> np.ndarray:
    """Row-style Hermite normal form; zero rows are dropped.

    Pivots are positive and the entries above each pivot are reduced into
    ``[0, pivot)``.
    """
    M = to_lists(A)
    m = len(M)
    n = np.asarray(A).shape[1]
    r = 0
    pivots = []
    for c in range(n):
        while True:
            nz = [i for i in range(r, m) if M[i][c]]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(M[k][c]))
            M[r], M[i] = M[i], M[r]
            done = True
            for k in range(r + 1, m):
                if M[k][c]:
                    q = M[k][c] // M[r][c]
                    rk, rr = M[k], M[r]
                    M[k] = [x - q * y for x, y in zip(rk, rr)]
                    if M[k][c]:
                        done = False
            if done:
                break
        if r < m and M[r][c]:
            if M[r][c] < 0:
                M[r] = [-x for x in M[r]]
            for k in range(r):
                q = M[k][c] // M[r][c]
                if q:
                    M[k] = [x - q * y for x, y in zip(M[k], M[r])]
            pivots.append(c)
            r += 1
            if r == m:
                break
    return int_matrix(M[:r], (r, n))


def kernel_basis(A: np.ndarray) -> np.ndarray:
    """Saturated integer kernel basis of ``A`` as the columns of a matrix.

    Taken from the trailing columns of the Smith transform ``V`` and put in
    column Hermite form, so the result depends only on the kernel lattice.
    """
    A = np.asarray(A, dtype=object)
    _, n = A.shape
    dec = smith_normal_form(A)
    K = dec.V[:, dec.rank:]
    if K.shape[1] == 0:
        return zeros(n, 0)
    return hermite_normal_form_rows(K.T).T


def rank(A: np.ndarray) -> int:
    diag, _ = invariant_factors(A)
    return len(diag)


# ---------------------------------------------------------------------------
# Group ring of a cyclic group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupRingMatrix:
    """Matrix over ``Z[T]/(T^m - 1)`` with ``m = p**n``.

    ``entries[i][j]`` is the length-``m`` coefficient vector of the entry, the
    k-th coefficient multiplying ``T**k``.
    """

    p: int
    n: int
    entries: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.n < 0:
            raise ValueError("level must be nonnegative")
        m = self.modulus
        fixed = tuple(tuple(tuple(int(c) for c in e) for e in row) for row in self.entries)
        for row in fixed:
            for e in row:
                if len(e) != m:
                    raise ValueError(f"coefficient vector of length {len(e)}, expected {m}")
        object.__setattr__(self, "entries", fixed)

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    @property
    def shape(self) -> tuple[int, int]:
        rows = len(self.entries)
        return rows, (len(self.entries[0]) if rows else 0)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int, n: int) -> "GroupRingMatrix":
        m = p ** n
        return cls(p, n, tuple(tuple((0,) * m for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def from_polys(cls, polys, p: int, n: int) -> "GroupRingMatrix":
        """Build from entries given as ``{power: coefficient}`` dicts.

        Powers are reduced mod ``p**n``, so negative powers are allowed.
        """
        m = p ** n
        rows = []
        for prow in polys:
            row = []
            for poly in prow:
                vec = [0] * m
                for k, c in poly.items():
                    vec[k % m] += c
                row.append(tuple(vec))
            rows.append(tuple(row))
        return cls(p, n, tuple(rows))

    def __matmul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("group rings differ")
        r, k = self.shape
        k2, c = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        m = self.modulus
        out = []
        for i in range(r):
            row = []
            for j in range(c):
                acc = [0] * m
                for l in range(k):
                    a, b = self.entries[i][l], other.entries[l][j]
                    for x, ax in enumerate(a):
                        if ax:
                            for y, by in enumerate(b):
                                if by:
                                    acc[(x + y) % m] += ax * by
                row.append(tuple(acc))
            out.append(tuple(row))
        return GroupRingMatrix(self.p, self.n, tuple(out))

    def poly(self, i: int, j: int) -> dict[int, int]:
        return {k: c for k, c in enumerate(self.entries[i][j]) if c}

    def __str__(self) -> str:
        def fmt(vec):
            terms = []
            for k, c in enumerate(vec):
                if not c:
                    continue
                mono = "1" if k == 0 else ("T" if k == 1 else f"T^{k}")
                if mono == "1":
                    terms.append(str(c))
                else:
                    terms.append(mono if c == 1 else ("-" + mono if c == -1 else f"{c}*{mono}"))
            return " + ".join(terms).replace("+ -", "- ") or "0"
        return "\n".join("[" + ", ".join(fmt(e) for e in row) + "]" for row in self.entries)


def flatten_group_ring(M: GroupRingMatrix, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Regular representation of a group-ring matrix.

    Entry ``(i, j)`` becomes the ``m x m`` circulant block whose ``(h, g)``
    entry is the coefficient of ``T**(h - g)``: multiplication by ``T`` sends
    basis vector ``g`` to ``g + 1``. Block ``(i, j)`` occupies rows
    ``i*m .. i*m + m - 1`` and columns ``j*m .. j*m + m - 1``.
    """
    rows, cols = M.shape
    m = M.modulus
    R, C = rows * m, cols * m
    if max(R, C) > max_dim:
        raise CapExceeded(f"flattened matrix {R}x{C} exceeds dimension cap {max_dim}")
    out = zeros(R, C)
    for i in range(rows):
        for j in range(cols):
            vec = M.entries[i][j]
            for k, c in enumerate(vec):
                if c:
                    for g in range(m):
                        out[i * m + (g + k) % m, j * m + g] = c
    return out
