"""Exact integer linear algebra.

Everything here works over the integers with Python's arbitrary precision
``int``; there is no floating point anywhere.  The pieces are

* :class:`IntMatrix`, an immutable dense integer matrix,
* normal forms: :func:`smith_normal_form` (with unimodular transforms) and
  :func:`column_echelon` (integer column-style Hermite reduction),
* lattices: :func:`kernel_basis`, :class:`Lattice` and
  :func:`preimage_lattice`,
* finitely generated abelian groups given by presentations
  (:class:`PresentedAbelianGroup`, :class:`GroupHom`) and
  :func:`homology` of a pair of composable maps between them.

>>> A = IntMatrix([[2, 4], [6, 10]])
>>> U, D, V = smith_normal_form(A)
>>> D.diagonal()
[2, 2]
>>> U @ A @ V == D
True
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence


class CompositionNotZero(ValueError):
    """Raised by :func:`homology` when ``d_out . d_in`` is not zero."""


class NotWellDefined(ValueError):
    """A matrix does not respect the relations of its source group."""


# ---------------------------------------------------------------------------
# matrices


class IntMatrix:
    """Immutable dense integer matrix.

    The shape is stored explicitly so that ``0 x n`` and ``n x 0`` matrices
    keep their dimensions.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Sequence[int]] = (), rows: int | None = None,
                 cols: int | None = None):
        tup = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(tup)
        if cols is None:
            cols = len(tup[0]) if tup else 0
        if not tup:
            tup = tuple((0,) * cols for _ in range(rows))
        if len(tup) != rows or any(len(r) != cols for r in tup):
            raise ValueError(f"ragged or mis-sized matrix data for shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._data = tup

    # construction helpers
    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls((), rows, cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        cols = len(columns)
        return cls([[columns[j][i] for j in range(cols)] for i in range(rows)], rows, cols)

    @classmethod
    def diag(cls, entries: Sequence[int], rows: int | None = None,
             cols: int | None = None) -> IntMatrix:
        n = len(entries)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            data[i][i] = d
        return cls(data, rows, cols)

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self._data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def diagonal(self) -> list[int]:
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(zip(*self._data), self.cols, self.rows) if self.rows else \
            IntMatrix((), self.cols, 0)

    # arithmetic
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         self.rows, self.cols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         self.rows, self.cols)

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self._data], self.rows, self.cols)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix([[c * a for a in r] for r in self._data], self.rows, self.cols)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        # skip zeros on both sides; the maps we build are very sparse
        other_nz = [[(j, b) for j, b in enumerate(r) if b] for r in other._data]
        out = []
        for r in self._data:
            acc = [0] * other.cols
            for k, a in enumerate(r):
                if a:
                    for j, b in other_nz[k]:
                        acc[j] += a * b
            out.append(acc)
        return IntMatrix(out, self.rows, other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return [sum(r[k] * x for k, x in nz) for r in self._data]

    def _same_shape(self, other: IntMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"


def hstack(*mats: IntMatrix) -> IntMatrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("hstack needs equal row counts")
    data = [sum((m.row(i) for m in mats), ()) for i in range(rows)]
    return IntMatrix(data, rows, sum(m.cols for m in mats))


def vstack(*mats: IntMatrix) -> IntMatrix:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("vstack needs equal column counts")
    data = [r for m in mats for r in m.tolist()]
    return IntMatrix(data, sum(m.rows for m in mats), cols)


def block_diag(*mats: IntMatrix) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    data = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            data[r0 + i][c0:c0 + m.cols] = m.row(i)
        r0 += m.rows
        c0 += m.cols
    return IntMatrix(data, rows, cols)


def determinant(A: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = A.rows
    if n != A.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = A.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries ``d_0 | d_1 | ...``.  The pivot is always the entry of least
    absolute value in the remaining block, which keeps coefficient growth
    down on the small matrices this package deals with.
    """
    m, n = A.shape
    D = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        rs, rd = D[src], D[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        us, ud = U[src], U[dst]
        for k in range(m):
            if us[k]:
                ud[k] += q * us[k]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = D[i]
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
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot survived; move it in
                best = None
                for i in range(t, m):
                    if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                        best = (abs(D[i][t]), i, t)
                for j in range(t, n):
                    if D[t][j] and abs(D[t][j]) < best[0]:
                        best = (abs(D[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return IntMatrix(U, m, m), IntMatrix(D, m, n), IntMatrix(V, n, n)


def diagonal_to_invariants(diag: Iterable[int]) -> list[int]:
    """Normalize nonzero diagonal entries to an invariant-factor chain.

    ``diag(a, b)`` is equivalent to ``diag(gcd, lcm)``; repeated pairwise
    replacement gives the Smith diagonal.  Units are kept.
    """
    ds = sorted(abs(d) for d in diag if d)
    k = len(ds)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = ds[i], ds[j]
            g = gcd(a, b)
            ds[i], ds[j] = g, a // g * b
    return ds


def elementary_divisors(A: IntMatrix) -> list[int]:
    """Nonzero Smith diagonal of ``A`` (ascending, units included).

    Transform-free sparse elimination; its length is the rank of ``A``.
    """
    rows = []
    for r in A._data:
        d = {j: a for j, a in enumerate(r) if a}
        if d:
            rows.append(d)
    diag = []
    while rows:
        # smallest pivot, shortest row on ties
        best = None
        for ri, row in enumerate(rows):
            for j, a in row.items():
                key = (abs(a), len(row))
                if best is None or key < best[0]:
                    best = (key, ri, j)
            if best[0] == (1, 1):
                break
        _, ri, c = best
        prow = rows[ri]
        p = prow[c]
        clean = True
        for k, row in enumerate(rows):
            if k == ri or c not in row:
                continue
            q = row[c] // p
            for j, a in prow.items():
                v = row.get(j, 0) - q * a
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
            if c in row:
                clean = False
        if clean:
            # column c now lives only in the pivot row, so column ops touch only it
            rest = {j: a % p for j, a in prow.items() if j != c and a % p}
            if rest:
                rest[c] = p
                rows[ri] = rest
            else:
                diag.append(abs(p))
                rows[ri] = {}
        rows = [r for r in rows if r]
    return diagonal_to_invariants(diag)


def rank(A: IntMatrix) -> int:
    return len(elementary_divisors(A))


# ---------------------------------------------------------------------------
# column echelon form and lattices


@dataclass(frozen=True)
class Echelon:
    """Result of :func:`column_echelon`: ``A @ V == E``.

    The first ``len(pivots)`` columns of ``E`` are nonzero, column ``j`` is
    zero above row ``pivots[j]`` and positive there; the remaining columns
    are zero.  ``V`` is unimodular (``None`` if not tracked).
    """

    E: list[list[int]]        # column-major
    V: list[list[int]] | None  # column-major
    pivots: list[int]
    rows: int


def column_echelon(A: IntMatrix, track: bool = True) -> Echelon:
    cols = A.columns()
    ncols = len(cols)
    V = [[int(i == j) for i in range(ncols)] for j in range(ncols)] if track else None
    pivots: list[int] = []
    k = 0

    def sub(dst, src, q):  # col_dst -= q * col_src
        cd, cs = cols[dst], cols[src]
        for i, a in enumerate(cs):
            if a:
                cd[i] -= q * a
        if V is not None:
            vd, vs = V[dst], V[src]
            for i, a in enumerate(vs):
                if a:
                    vd[i] -= q * a

    for i in range(A.rows):
        if k == ncols:
            break
        while True:
            live = [j for j in range(k, ncols) if cols[j][i]]
            if not live:
                break
            j0 = min(live, key=lambda j: abs(cols[j][i]))
            if len(live) == 1:
                cols[k], cols[j0] = cols[j0], cols[k]
                if V is not None:
                    V[k], V[j0] = V[j0], V[k]
                if cols[k][i] < 0:
                    cols[k] = [-a for a in cols[k]]
                    if V is not None:
                        V[k] = [-a for a in V[k]]
                pivots.append(i)
                k += 1
                break
            p = cols[j0][i]
            for j in live:
                if j != j0:
                    sub(j, j0, cols[j][i] // p)
    return Echelon(cols, V, pivots, A.rows)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the integer kernel lattice of ``A``.

    The basis is saturated: it spans every integer solution of ``A x = 0``.
    """
    ech = column_echelon(A, track=True)
    k = len(ech.pivots)
    return IntMatrix.from_columns(ech.V[k:], A.cols)


class Lattice:
    """Sublattice of ``Z^n`` with a basis in column echelon form.

    Membership tests and coordinates are computed by back substitution.
    """

    def __init__(self, generators: IntMatrix):
        ech = column_echelon(generators, track=False)
        k = len(ech.pivots)
        self.dim = generators.rows
        self._basis = ech.E[:k]
        self._pivots = ech.pivots

    @property
    def rank(self) -> int:
        return len(self._basis)

    @property
    def basis(self) -> IntMatrix:
        return IntMatrix.from_columns(self._basis, self.dim)

    def coords(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients of ``v`` in the basis, or ``None`` if ``v`` is outside."""
        if len(v) != self.dim:
            raise ValueError("vector length mismatch")
        r = list(v)
        y = []
        for col, p in zip(self._basis, self._pivots):
            q, rem = divmod(r[p], col[p])
            if rem:
                return None
            y.append(q)
            if q:
                for i in range(p, self.dim):
                    if col[i]:
                        r[i] -= q * col[i]
        if any(r):
            return None
        return y

    def __contains__(self, v: Sequence[int]) -> bool:
        return self.coords(v) is not None

    def coords_matrix(self, M: IntMatrix) -> IntMatrix:
        """Coordinates of every column of ``M``; raises if one lies outside."""
        out = []
        for j, c in enumerate(M.columns()):
            y = self.coords(c)
            if y is None:
                raise ValueError(f"column {j} is not in the lattice")
            out.append(y)
        return IntMatrix.from_columns(out, self.rank)


def _relation_blocks(R: IntMatrix) -> list[tuple[list[int], list[int]]]:
    """Split the rows/columns of ``R`` into independent diagonal blocks."""
    parent = list(range(R.rows))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    col_rows = [[i for i in range(R.rows) if R[i, j]] for j in range(R.cols)]
    for rs in col_rows:
        for i in rs[1:]:
            parent[find(i)] = find(rs[0])
    blocks: dict[int, tuple[list[int], list[int]]] = {}
    for i in range(R.rows):
        blocks.setdefault(find(i), ([], []))[0].append(i)
    for j, rs in enumerate(col_rows):
        if rs:
            blocks[find(rs[0])][1].append(j)
    return list(blocks.values())


def preimage_lattice(A: IntMatrix, R: IntMatrix) -> Lattice:
    """The lattice ``{x : A x in colspan(R)}``.

    ``R`` is normalized blockwise with the Smith form, which turns the
    condition into equations (free rows) and congruences (torsion rows).
    Congruences sharing a modulus are first row-reduced, which keeps the
    final kernel computation at most about twice the width of ``A``.
    """
    if A.rows != R.rows:
        raise ValueError("row count mismatch")
    n = A.cols
    Arows = A.tolist()
    by_modulus: dict[int, list[list[int]]] = {}
    for rows_, cols_ in _relation_blocks(R):
        if not cols_:
            by_modulus.setdefault(0, []).extend(Arows[i] for i in rows_)
            continue
        sub = IntMatrix([[R[i, j] for j in cols_] for i in rows_])
        U, D, _ = smith_normal_form(sub)
        diag = D.diagonal()
        block_rows = [Arows[i] for i in rows_]
        for t in range(len(rows_)):
            d = diag[t] if t < len(diag) else 0
            if d == 1:
                continue
            urow = U.row(t)
            new = [sum(u * r[c] for u, r in zip(urow, block_rows) if u) for c in range(n)]
            by_modulus.setdefault(d, []).append(new)
    eqs: list[list[int]] = []
    mods: list[int] = []
    for d in sorted(by_modulus):
        rows_ = by_modulus[d]
        if not any(any(r) for r in rows_):
            continue
        # unimodular row reduction: same solution set, at most n rows remain
        ech = column_echelon(IntMatrix(rows_, len(rows_), n).T, track=False)
        for c in ech.E[:len(ech.pivots)]:
            eqs.append(c)
            mods.append(d)
    if not eqs:
        return Lattice(IntMatrix.identity(n))
    torsion = [t for t, d in enumerate(mods) if d]
    big = []
    for t, row in enumerate(eqs):
        ext = [0] * len(torsion)
        if mods[t]:
            ext[torsion.index(t)] = mods[t]
        big.append(row + ext)
    K = kernel_basis(IntMatrix(big, len(big), n + len(torsion)))
    return Lattice(IntMatrix([K.row(i) for i in range(n)], n, K.cols))


def solve(A: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """An integer solution of ``A x = b`` or ``None``.

    The solution is the one with all free echelon parameters zero, so it is
    a deterministic function of ``(A, b)``.
    """
    ech = column_echelon(A, track=True)
    lat_cols = ech.E[:len(ech.pivots)]
    r = list(b)
    y = []
    for col, p in zip(lat_cols, ech.pivots):
        q, rem = divmod(r[p], col[p])
        if rem:
            return None
        y.append(q)
        for i in range(p, A.rows):
            if col[i]:
                r[i] -= q * col[i]
    if any(r):
        return None
    x = [0] * A.cols
    for q, vcol in zip(y, ech.V):
        if q:
            for i, a in enumerate(vcol):
                x[i] += q * a
    return x


# ---------------------------------------------------------------------------
# abelian groups


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | ... | d_k``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        ts = tuple(self.torsion)
        if any(d < 2 for d in ts) or any(b % a for a, b in zip(ts, ts[1:])):
            raise ValueError(f"torsion {ts} is not an invariant-factor chain")
        object.__setattr__(self, "torsion", ts)

    @classmethod
    def from_diagonal(cls, n_generators: int, diag: Iterable[int]) -> AbelianInvariants:
        """Invariants of ``Z^n / span(diag)`` for a diagonal-equivalent relation set."""
        ds = diagonal_to_invariants(diag)
        return cls(n_generators - len(ds), tuple(d for d in ds if d > 1))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        """Group order, or ``None`` when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class PresentedAbelianGroup:
    """``Z^rank / colspan(relations)``."""

    rank: int
    relations: IntMatrix = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", IntMatrix.zeros(self.rank, 0))
        if self.relations.rows != self.rank:
            raise ValueError("relations must have one row per generator")

    @classmethod
    def free(cls, rank: int) -> PresentedAbelianGroup:
        return cls(rank)

    @classmethod
    def cyclic(cls, m: int) -> PresentedAbelianGroup:
        """``Z/m``; ``m = 0`` gives ``Z``."""
        return cls(1, IntMatrix([[m]]) if m else IntMatrix.zeros(1, 0))

    @classmethod
    def from_invariants(cls, factors: Sequence[int]) -> PresentedAbelianGroup:
        """Direct sum of ``Z/d`` for each ``d`` in ``factors`` (``0`` means ``Z``)."""
        return direct_sum(*(cls.cyclic(d) for d in factors)) if factors else cls(0)

    @property
    def is_free(self) -> bool:
        return self.relations.is_zero()

    @cached_property
    def relation_lattice(self) -> Lattice:
        return Lattice(self.relations)

    @cached_property
    def invariants(self) -> AbelianInvariants:
        return AbelianInvariants.from_diagonal(self.rank, elementary_divisors(self.relations))

    def is_zero_element(self, v: Sequence[int]) -> bool:
        if not any(v):
            return True
        return v in self.relation_lattice

    def same_presentation(self, other: PresentedAbelianGroup) -> bool:
        return self.rank == other.rank and self.relations == other.relations


def direct_sum(*groups: PresentedAbelianGroup) -> PresentedAbelianGroup:
    if not groups:
        return PresentedAbelianGroup(0)
    return PresentedAbelianGroup(sum(g.rank for g in groups),
                                 block_diag(*(g.relations for g in groups)))


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by an integer matrix of shape ``target.rank x source.rank``."""

    source: PresentedAbelianGroup
    target: PresentedAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise ValueError(f"matrix shape {self.matrix.shape} does not fit "
                             f"{self.target.rank}x{self.source.rank}")

    @classmethod
    def identity(cls, G: PresentedAbelianGroup) -> GroupHom:
        return cls(G, G, IntMatrix.identity(G.rank))

    @classmethod
    def zero(cls, source: PresentedAbelianGroup, target: PresentedAbelianGroup) -> GroupHom:
        return cls(source, target, IntMatrix.zeros(target.rank, source.rank))

    def is_well_defined(self) -> bool:
        img = self.matrix @ self.source.relations
        return all(self.target.is_zero_element(c) for c in img.columns())

    def check_well_defined(self) -> GroupHom:
        if not self.is_well_defined():
            raise NotWellDefined("matrix does not map relations into relations")
        return self

    def __matmul__(self, other: GroupHom) -> GroupHom:
        """Composition ``self . other``."""
        if other.target.rank != self.source.rank:
            raise ValueError("maps are not composable")
        return GroupHom(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: GroupHom) -> GroupHom:
        return GroupHom(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: GroupHom) -> GroupHom:
        return GroupHom(self.source, self.target, self.matrix - other.matrix)

    def __call__(self, v: Sequence[int]) -> list[int]:
        return self.matrix.apply(v)

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(c) for c in self.matrix.columns())

    def equals(self, other: GroupHom) -> bool:
        """Equality as maps, i.e. modulo the target relations."""
        if self.matrix.shape != other.matrix.shape:
            return False
        return (self - other).is_zero()

    def is_surjective(self) -> bool:
        gens = hstack(self.matrix, self.target.relations)
        return AbelianInvariants.from_diagonal(self.target.rank,
                                               elementary_divisors(gens)).is_zero

    def preimage(self, v: Sequence[int]) -> list[int] | None:
        """Some ``x`` with ``self(x) = v`` in the target group, or ``None``."""
        sol = solve(hstack(self.matrix, self.target.relations), v)
        return None if sol is None else sol[:self.source.rank]


def homology(d_out: GroupHom, d_in: GroupHom, shortcut: bool = True) -> AbelianInvariants:
    """Invariants of ``ker(d_out) / im(d_in)`` at the middle group.

    The cycles are the lattice of generator vectors ``x`` whose image lies
    in the span of the target relations; the boundaries are spanned by the
    image of ``d_in`` together with the middle group's own relations.  When
    every group involved is free the cycle lattice is never materialized
    (``shortcut=False`` forces the general route).
    """
    mid = d_out.source
    if not d_in.target.same_presentation(mid):
        raise ValueError("d_in.target and d_out.source differ")
    if not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out . d_in is not zero")
    if shortcut and mid.is_free and d_out.target.is_free:
        # ker(d_out) is saturated, so torsion comes from d_in's divisors alone
        ker_rank = mid.rank - rank(d_out.matrix)
        ds = elementary_divisors(d_in.matrix)
        return AbelianInvariants(ker_rank - len(ds), tuple(d for d in ds if d > 1))
    cycles = preimage_lattice(d_out.matrix, d_out.target.relations)
    bounds = cycles.coords_matrix(hstack(d_in.matrix, mid.relations))
    return AbelianInvariants.from_diagonal(cycles.rank, elementary_divisors(bounds))
