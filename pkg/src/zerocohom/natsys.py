"""Natural systems: functors from the category of factorizations to Ab.

A natural system stores a presented group ``D_a`` for every nonzero ``a``,
a *left* map ``D_a -> D_{alpha a}`` for every pair ``(alpha, a)`` with
``alpha a != 0`` and a *right* map ``D_a -> D_{a beta}`` for every pair
``(a, beta)`` with ``a beta != 0``.  The value on a morphism is
``D(alpha, beta) = left(alpha, a beta) . right(a, beta)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Mapping, Sequence

from .exactalg import GroupHom, IntMatrix, PresentedAbelianGroup, block_diag, direct_sum
from .facnerve import factorizations
from .monoid import MonoidWithZero


class MissingMap(KeyError):
    pass


class BadAction(ValueError):
    def __init__(self, s: str, t: str, msg: str = ""):
        super().__init__(msg or f"action violates s(ta) = (st)a at s={s}, t={t}")
        self.witness = (s, t)


class TooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NaturalSystem:
    """Compared and hashed by identity; the maps are never mutated."""

    monoid: MonoidWithZero
    value: Mapping[int, PresentedAbelianGroup]
    left: Mapping[tuple[int, int], GroupHom]
    right: Mapping[tuple[int, int], GroupHom]
    label: str = ""
    bar_degree: int | None = field(default=None, compare=False)

    def left_map(self, alpha: int, a: int) -> GroupHom:
        try:
            return self.left[alpha, a]
        except KeyError:
            M = self.monoid
            raise MissingMap(f"no left map for ({M.name(alpha)}, {M.name(a)})") from None

    def right_map(self, a: int, beta: int) -> GroupHom:
        try:
            return self.right[a, beta]
        except KeyError:
            M = self.monoid
            raise MissingMap(f"no right map for ({M.name(a)}, {M.name(beta)})") from None

    def on_morphism(self, alpha: int, a: int, beta: int) -> GroupHom:
        """``D(alpha, beta) = alpha_* beta^*`` on the object ``a``."""
        M = self.monoid
        return self.left_map(alpha, M.mul(a, beta)) @ self.right_map(a, beta)


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.law} fails at ({', '.join(self.witness)})"


def required_pairs(M: MonoidWithZero):
    t, z = M.table, M.zero
    lefts = [(al, a) for al in M.nonzero for a in M.nonzero if t[al][a] != z]
    rights = [(a, be) for a in M.nonzero for be in M.nonzero if t[a][be] != z]
    return lefts, rights


def check_functoriality(D: NaturalSystem) -> list[Violation]:
    """All failed functor laws; empty when ``D`` is a natural system.

    Raises :class:`MissingMap` if a required map is absent.
    """
    M = D.monoid
    t, z, one = M.table, M.zero, M.identity
    nm = M.name
    out: list[Violation] = []
    lefts, rights = required_pairs(M)
    for a in M.nonzero:
        if a not in D.value:
            raise MissingMap(f"no group for object {nm(a)}")
    for al, a in lefts:
        f = D.left_map(al, a)
        if not (f.source.same_presentation(D.value[a])
                and f.target.same_presentation(D.value[t[al][a]])):
            out.append(Violation("left map has wrong endpoints", (nm(al), nm(a))))
        elif not f.is_well_defined():
            out.append(Violation("left map not well defined", (nm(al), nm(a))))
    for a, be in rights:
        f = D.right_map(a, be)
        if not (f.source.same_presentation(D.value[a])
                and f.target.same_presentation(D.value[t[a][be]])):
            out.append(Violation("right map has wrong endpoints", (nm(a), nm(be))))
        elif not f.is_well_defined():
            out.append(Violation("right map not well defined", (nm(a), nm(be))))
    if out:
        return out
    for a in M.nonzero:
        ident = GroupHom.identity(D.value[a])
        if not D.left_map(one, a).equals(ident):
            out.append(Violation("left(1, a) = id", (nm(a),)))
        if not D.right_map(a, one).equals(ident):
            out.append(Violation("right(a, 1) = id", (nm(a),)))
    for a, al, al2 in product(M.nonzero, repeat=3):
        if t[t[al2][al]][a] == z:
            continue
        lhs = D.left_map(al2, t[al][a]) @ D.left_map(al, a)
        if not lhs.equals(D.left_map(t[al2][al], a)):
            out.append(Violation("left(a', a b) . left(a, b) = left(a' a, b)",
                                 (nm(al2), nm(al), nm(a))))
    for a, be, be2 in product(M.nonzero, repeat=3):
        if t[a][t[be][be2]] == z:
            continue
        lhs = D.right_map(t[a][be], be2) @ D.right_map(a, be)
        if not lhs.equals(D.right_map(a, t[be][be2])):
            out.append(Violation("right(a b, b') . right(a, b) = right(a, b b')",
                                 (nm(a), nm(be), nm(be2))))
    for al, a, be in product(M.nonzero, repeat=3):
        if t[t[al][a]][be] == z:
            continue
        lhs = D.left_map(al, t[a][be]) @ D.right_map(a, be)
        rhs = D.right_map(t[al][a], be) @ D.left_map(al, a)
        if not lhs.equals(rhs):
            out.append(Violation("left and right maps commute", (nm(al), nm(a), nm(be))))
    return out


# ---------------------------------------------------------------------------
# constructors


def trivial_Z(M: MonoidWithZero) -> NaturalSystem:
    Z = PresentedAbelianGroup.free(1)
    one = GroupHom.identity(Z)
    lefts, rights = required_pairs(M)
    return NaturalSystem(M, {a: Z for a in M.nonzero}, {p: one for p in lefts},
                         {p: one for p in rights}, label="trivial-Z")


@dataclass(frozen=True)
class ZeroModule:
    """Abelian group with a partial action of the nonzero elements.

    ``action[s]`` is an endomorphism matrix for every nonzero ``s``.
    """

    monoid: MonoidWithZero
    group: PresentedAbelianGroup
    action: Mapping[int, IntMatrix]

    def act(self, s: int) -> GroupHom:
        return GroupHom(self.group, self.group, self.action[s])

    def violations(self) -> list[tuple[int, int]]:
        M = self.monoid
        bad = []
        ident = GroupHom.identity(self.group)
        for s in M.nonzero:
            if s not in self.action:
                raise MissingMap(f"no action for {M.name(s)}")
            if not self.act(s).is_well_defined():
                bad.append((s, s))
        if bad:
            return bad
        if not self.act(M.identity).equals(ident):
            bad.append((M.identity, M.identity))
        for s, t in product(M.nonzero, repeat=2):
            st = M.mul(s, t)
            if st != M.zero and not (self.act(s) @ self.act(t)).equals(self.act(st)):
                bad.append((s, t))
        return bad


def from_zero_module(Z: ZeroModule, label: str = "") -> NaturalSystem:
    """Constant system ``A`` with ``alpha_*`` the action and ``beta^*`` the identity."""
    M = Z.monoid
    bad = Z.violations()
    if bad:
        s, t = bad[0]
        raise BadAction(M.name(s), M.name(t))
    A = Z.group
    one = GroupHom.identity(A)
    lefts, rights = required_pairs(M)
    acts = {s: Z.act(s) for s in M.nonzero}
    return NaturalSystem(M, {a: A for a in M.nonzero},
                         {(al, a): acts[al] for al, a in lefts},
                         {p: one for p in rights}, label=label or "zero-module")


def _endomorphisms(factors: Sequence[int], bound: int | None) -> list[IntMatrix]:
    """All endomorphisms of ``Z/d_1 + ... + Z/d_k`` in reduced form.

    ``d = 0`` stands for ``Z``; entries into a free summand range over
    ``[-bound, bound]``.
    """
    k = len(factors)
    choices = []
    for i, j in product(range(k), repeat=2):
        di, dj = factors[i], factors[j]
        if di == 0:
            if dj:
                choices.append([0])
            elif bound is None:
                raise TooLarge("End(A) is infinite; pass a bound for free summands")
            else:
                choices.append(list(range(-bound, bound + 1)))
        else:
            # images of a generator of order dj must be killed by dj
            step = di // gcd(di, dj) if dj else 1
            choices.append(list(range(0, di, step)))
    out = []
    for entries in product(*choices):
        out.append(IntMatrix([entries[i * k:(i + 1) * k] for i in range(k)], k, k))
    return out


def _reduce(m: IntMatrix, factors: Sequence[int]) -> IntMatrix:
    return IntMatrix([[x % d if d else x for x in m.row(i)] for i, d in enumerate(factors)],
                     m.rows, m.cols)


def enumerate_zero_modules(M: MonoidWithZero, A: PresentedAbelianGroup | Sequence[int],
                           bound: int | None = None,
                           limit: int = 100_000) -> list[ZeroModule]:
    """Every valid 0-module structure on ``A``, in a fixed order.

    ``A`` is replaced by its canonical presentation (invariant factors,
    free summands last) and the modules are built on that presentation.
    Actions are compared as reduced matrices, so the list has no repeats.
    """
    if isinstance(A, PresentedAbelianGroup):
        inv = A.invariants
        factors = list(inv.torsion) + [0] * inv.free_rank
    else:
        factors = [d for d in A if d != 1]
    group = PresentedAbelianGroup.from_invariants(factors)
    k = len(factors)
    ident = IntMatrix.identity(k)
    ends = _endomorphisms(factors, bound)
    if len(ends) > limit:
        raise TooLarge(f"{len(ends)} endomorphisms per element")
    others = [s for s in M.nonzero if s != M.identity]
    t, z = M.table, M.zero

    def mul(x: IntMatrix, y: IntMatrix) -> IntMatrix:
        return _reduce(x @ y, factors)

    assigned: dict[int, IntMatrix] = {M.identity: ident}
    results: list[ZeroModule] = []

    def consistent(s: int) -> bool:
        for p, q in product(assigned, repeat=2):
            if s not in (p, q, t[p][q]):
                continue
            pq = t[p][q]
            if pq != z and pq in assigned and mul(assigned[p], assigned[q]) != assigned[pq]:
                return False
        return True

    def search(i: int):
        if i == len(others):
            results.append(ZeroModule(M, group, dict(sorted(assigned.items()))))
            return
        s = others[i]
        for e in ends:
            assigned[s] = e
            if consistent(s):
                search(i + 1)
            del assigned[s]

    search(0)
    return results


def describe_action(Z: ZeroModule) -> str:
    """``"identity"``, ``"zero"`` or ``""`` for other actions."""
    M = Z.monoid
    ident = GroupHom.identity(Z.group)
    zero = GroupHom.zero(Z.group, Z.group)
    others = [s for s in M.nonzero if s != M.identity]
    if all(Z.act(s).equals(ident) for s in others):
        return "identity"
    if all(Z.act(s).equals(zero) for s in others):
        return "zero"
    return ""


def bar_generators(M: MonoidWithZero, n: int, a: int) -> tuple[tuple[int, ...], ...]:
    """Basis of ``B_n(a)``: the ``(n+2)``-tuples with product ``a``."""
    return factorizations(M, a, n + 2)


def bar_system(M: MonoidWithZero, n: int) -> NaturalSystem:
    """``B_n``: free on factorizations, ``(alpha, beta)`` multiplies the ends."""
    if n < 0:
        raise ValueError("negative degree")
    t = M.table
    gens = {a: bar_generators(M, n, a) for a in M.nonzero}
    index = {a: {g: i for i, g in enumerate(gs)} for a, gs in gens.items()}
    value = {a: PresentedAbelianGroup.free(len(gs)) for a, gs in gens.items()}
    lefts, rights = required_pairs(M)
    left, right = {}, {}
    for al, a in lefts:
        b = t[al][a]
        cols = [[0] * len(gens[b]) for _ in gens[a]]
        for j, g in enumerate(gens[a]):
            cols[j][index[b][(t[al][g[0]],) + g[1:]]] = 1
        left[al, a] = GroupHom(value[a], value[b], IntMatrix.from_columns(cols, len(gens[b])))
    for a, be in rights:
        b = t[a][be]
        cols = [[0] * len(gens[b]) for _ in gens[a]]
        for j, g in enumerate(gens[a]):
            cols[j][index[b][g[:-1] + (t[g[-1]][be],)]] = 1
        right[a, be] = GroupHom(value[a], value[b], IntMatrix.from_columns(cols, len(gens[b])))
    return NaturalSystem(M, value, left, right, label=f"bar:{n}", bar_degree=n)


def direct_sum_systems(*systems: NaturalSystem) -> NaturalSystem:
    M = systems[0].monoid
    value = {a: direct_sum(*(D.value[a] for D in systems)) for a in M.nonzero}
    lefts, rights = required_pairs(M)

    def summed(maps, key, src, dst):
        return GroupHom(value[src], value[dst], block_diag(*(m[key].matrix for m in maps)))

    t = M.table
    left = {(al, a): summed([D.left for D in systems], (al, a), a, t[al][a])
            for al, a in lefts}
    right = {(a, be): summed([D.right for D in systems], (a, be), a, t[a][be])
             for a, be in rights}
    label = " + ".join(D.label for D in systems)
    return NaturalSystem(M, value, left, right, label=label)


def group_token(A: PresentedAbelianGroup) -> str:
    inv = A.invariants
    parts = [f"z{d}" for d in inv.torsion] + ["z"] * inv.free_rank
    return "x".join(parts) or "0"


def zero_module_label(Z: ZeroModule, index: int) -> str:
    """``zero-module:<group>:<identity|zero|enum:i>``."""
    kind = describe_action(Z) or f"enum:{index}"
    return f"zero-module:{group_token(Z.group)}:{kind}"


def default_battery(M: MonoidWithZero) -> list[NaturalSystem]:
    """Trivial Z, every zero-module on Z/2 and Z/3, and B_0, B_1."""
    out = [trivial_Z(M)]
    for m in (2, 3):
        for i, Z in enumerate(enumerate_zero_modules(M, [m])):
            out.append(from_zero_module(Z, label=zero_module_label(Z, i)))
    out += [bar_system(M, 0), bar_system(M, 1)]
    return out
