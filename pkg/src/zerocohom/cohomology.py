"""Cochain complex ``C^n(S, D)`` on the nerve, its coboundary and cohomology.

A cochain of degree ``n`` assigns to every tuple ``(a_1, ..., a_n)`` of the
nerve an element of ``D`` at the product ``a_1 ... a_n``.  The whole degree
is one presented group, the direct sum of these blocks in nerve order, so
cochains are plain integer vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .exactalg import (AbelianInvariants, GroupHom, IntMatrix, PresentedAbelianGroup,
                       direct_sum, homology)
from .facnerve import nerve
from .monoid import MonoidWithZero
from .natsys import NaturalSystem, check_functoriality

MAX_ELEMENTS = 12
MAX_DEGREE = 3


class GuardrailExceeded(ValueError):
    pass


class NotFunctorial(ValueError):
    pass


def check_guardrail(M: MonoidWithZero, n_max: int, force: bool = False) -> None:
    if force:
        return
    if M.size > MAX_ELEMENTS:
        raise GuardrailExceeded(f"|S| = {M.size} > {MAX_ELEMENTS}; use --force")
    if n_max > MAX_DEGREE:
        raise GuardrailExceeded(f"degree {n_max} > {MAX_DEGREE}; use --force")


@dataclass(frozen=True)
class CochainLevel:
    degree: int
    index: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]
    group: PresentedAbelianGroup
    block_groups: tuple[PresentedAbelianGroup, ...] = field(repr=False)
    _position: dict = field(repr=False, compare=False, default=None)

    @property
    def rank(self) -> int:
        return self.group.rank

    def position(self, tup: tuple[int, ...]) -> int:
        return self._position[tup]

    def block(self, tup: tuple[int, ...]) -> slice:
        i = self._position[tup]
        return slice(self.offsets[i], self.offsets[i + 1])

    def value(self, f: Sequence[int], tup: tuple[int, ...]) -> list[int]:
        """The component of cochain ``f`` at ``tup``."""
        return list(f[self.block(tup)])


@lru_cache(maxsize=256)
def _verified(D: NaturalSystem) -> NaturalSystem:
    bad = check_functoriality(D)
    if bad:
        raise NotFunctorial("; ".join(map(str, bad[:3])))
    return D


@lru_cache(maxsize=256)
def _level(D: NaturalSystem, n: int) -> CochainLevel:
    M = D.monoid
    index = nerve(M, n)
    blocks = tuple(D.value[M.prod(t)] for t in index)
    offsets = [0]
    for g in blocks:
        offsets.append(offsets[-1] + g.rank)
    return CochainLevel(n, index, tuple(offsets), direct_sum(*blocks), blocks,
                        {t: i for i, t in enumerate(index)})


def cochain_level(M: MonoidWithZero, D: NaturalSystem, n: int,
                  verify: bool = True) -> CochainLevel:
    if D.monoid != M:
        raise ValueError("natural system lives on a different monoid")
    if verify:
        _verified(D)
    return _level(D, n)


@dataclass(frozen=True)
class CoboundaryMap:
    source: CochainLevel
    target: CochainLevel
    hom: GroupHom

    @property
    def matrix(self) -> IntMatrix:
        return self.hom.matrix


def coboundary_matrix(M: MonoidWithZero, D: NaturalSystem, n: int,
                      middle_sign: Callable[[int], int] | None = None) -> IntMatrix:
    """Matrix of ``delta^n : C^n -> C^{n+1}``.

    Row block ``(a_1..a_{n+1})`` receives ``left(a_1) f(a_2..a_{n+1})``, the
    alternating middle contractions (identity blocks, since every contraction
    has the same product) and ``(-1)^{n+1} right(a_{n+1}) f(a_1..a_n)``.
    ``middle_sign`` overrides ``(-1)^i`` and exists for mutation tests.
    """
    src = cochain_level(M, D, n, verify=False)
    tgt = cochain_level(M, D, n + 1, verify=False)
    sign = middle_sign or (lambda i: -1 if i % 2 else 1)
    rows = [[0] * src.rank for _ in range(tgt.rank)]
    t = M.table

    def add(r0: int, c0: int, mat: IntMatrix, s: int):
        for i in range(mat.rows):
            row = rows[r0 + i]
            for j, x in enumerate(mat.row(i)):
                if x:
                    row[c0 + j] += s * x

    for k, tup in enumerate(tgt.index):
        r0 = tgt.offsets[k]
        head, tail = tup[0], tup[1:]
        add(r0, src.block(tail).start, D.left_map(head, M.prod(tail)).matrix, 1)
        p = M.prod(tup)
        for i in range(1, n + 1):
            contracted = tup[:i - 1] + (t[tup[i - 1]][tup[i]],) + tup[i + 1:]
            add(r0, src.block(contracted).start, IntMatrix.identity(D.value[p].rank), sign(i))
        init, last = tup[:-1], tup[-1]
        add(r0, src.block(init).start, D.right_map(M.prod(init), last).matrix,
            -1 if (n + 1) % 2 else 1)
    return IntMatrix(rows, tgt.rank, src.rank)


@lru_cache(maxsize=256)
def _coboundary(D: NaturalSystem, n: int) -> CoboundaryMap:
    M = D.monoid
    src = cochain_level(M, D, n, verify=False)
    tgt = cochain_level(M, D, n + 1, verify=False)
    return CoboundaryMap(src, tgt, GroupHom(src.group, tgt.group, coboundary_matrix(M, D, n)))


def coboundary(M: MonoidWithZero, D: NaturalSystem, n: int) -> CoboundaryMap:
    if n < 0:
        raise ValueError("negative degree")
    cochain_level(M, D, n)
    return _coboundary(D, n)


def cohomology_group(M: MonoidWithZero, D: NaturalSystem, n: int) -> AbelianInvariants:
    """``H^n(S, D)``; in degree 0 this is the kernel of ``delta^0`` in ``D_1``."""
    d_out = coboundary(M, D, n).hom
    if n == 0:
        d_in = GroupHom.zero(PresentedAbelianGroup(0), d_out.source)
    else:
        d_in = coboundary(M, D, n - 1).hom
    return homology(d_out, d_in)


def cohomology_groups(M: MonoidWithZero, D: NaturalSystem, n_max: int) -> list[AbelianInvariants]:
    return [cohomology_group(M, D, n) for n in range(n_max + 1)]


@dataclass(frozen=True)
class DDCounterexample:
    degree: int          # delta^degree . delta^(degree-1) != 0
    row_tuple: tuple[int, ...]
    column_tuple: tuple[int, ...]


def check_dd_zero(M: MonoidWithZero, D: NaturalSystem, n_max: int,
                  builder: Callable[[MonoidWithZero, NaturalSystem, int], IntMatrix]
                  = coboundary_matrix) -> DDCounterexample | None:
    """First ``n <= n_max`` with ``delta^n delta^(n-1) != 0``, or ``None``.

    ``builder`` produces the coboundary matrices; tests pass a corrupted one.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    cochain_level(M, D, 0)
    prev = builder(M, D, 0)
    for n in range(1, n_max + 1):
        cur = builder(M, D, n)
        comp = cur @ prev
        src = cochain_level(M, D, n - 1, verify=False)
        tgt = cochain_level(M, D, n + 1, verify=False)
        for j in range(comp.cols):
            col = comp.column(j)
            if tgt.group.is_zero_element(col):
                continue
            ci = max(i for i, o in enumerate(src.offsets) if o <= j)
            for k, tup in enumerate(tgt.index):
                blk = col[tgt.offsets[k]:tgt.offsets[k + 1]]
                if not tgt.block_groups[k].is_zero_element(blk):
                    return DDCounterexample(n, tup, src.index[ci])
        prev = cur
    return None


# ---------------------------------------------------------------------------
# cohomological dimension evidence


@dataclass(frozen=True)
class CdReport:
    monoid: str
    n_max: int
    table: tuple[tuple[str, int, AbelianInvariants], ...]

    @property
    def top_degree(self) -> int | None:
        nz = [n for _, n, h in self.table if not h.is_zero]
        return max(nz) if nz else None

    def witnesses(self, degree: int) -> list[str]:
        return [name for name, n, h in self.table if n == degree and not h.is_zero]

    def vanishes_above(self, k: int) -> bool:
        return all(h.is_zero for _, n, h in self.table if n > k)

    def verdict(self) -> str:
        k = self.top_degree
        lines = []
        if k is None:
            lines.append(f"all computed H^n vanish for n <= {self.n_max}")
        else:
            for w in self.witnesses(k):
                lines.append(f"H^{k} nonzero for coefficient {w}")
            lines.append(f"c.d. >= {k}")
            if k < self.n_max:
                lines.append(f"no nonvanishing H^n for n >= {k + 1} across battery "
                             f"(checked up to degree {self.n_max}); consistent with c.d. <= {k}")
            else:
                lines.append(f"nonvanishing at the top computed degree {k}; no upper bound "
                             f"suggested")
        lines.append(f"evidence only: {len({c for c, _, _ in self.table})} coefficient systems "
                     f"and degrees <= {self.n_max} were tested, not all natural systems")
        return "\n".join(lines)


def cd_probe(M: MonoidWithZero, battery: Sequence[NaturalSystem], n_max: int = 3,
             name: str = "") -> CdReport:
    """``H^n(M, D)`` for every ``D`` in the battery and ``0 <= n <= n_max``."""
    if not battery:
        raise ValueError("empty battery")
    table = []
    for D in battery:
        for n, h in enumerate(cohomology_groups(M, D, n_max)):
            table.append((D.label, n, h))
    return CdReport(name, n_max, tuple(table))
