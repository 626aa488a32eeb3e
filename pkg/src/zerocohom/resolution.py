"""The bar resolution of the trivial system and the Hom complex into ``D``.

``B_n`` is free at every object, so a natural transformation ``B_n -> D`` is
a family of values ``tau_a(g) in D_a`` (one per generator ``g``) subject to
the naturality equations.  :func:`hom_complex` solves those equations
outright; it never assumes that a transformation is determined by its values
on the generators ``[1, a_1, ..., a_n, 1]``.  Comparing the result with the
cochain complex is what :func:`psi_check` is for.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Mapping, Sequence

from .cohomology import cochain_level, coboundary, cohomology_group
from .exactalg import (AbelianInvariants, CompositionNotZero, GroupHom, IntMatrix, Lattice,
                       PresentedAbelianGroup, block_diag, direct_sum, homology,
                       preimage_lattice)
from .facnerve import FacMorphism, all_morphisms, nerve
from .monoid import MonoidWithZero
from .natsys import (NaturalSystem, ZeroModule, bar_generators, bar_system, direct_sum_systems,
                     enumerate_zero_modules, from_zero_module, trivial_Z)


class NotEpi(ValueError):
    def __init__(self, obj: str):
        super().__init__(f"component at {obj} is not surjective")
        self.object = obj


class NoPreimage(RuntimeError):
    pass


class NotNatural(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NatTransformation:
    source: NaturalSystem
    target: NaturalSystem
    components: Mapping[int, GroupHom]

    def naturality_failures(self) -> list[FacMorphism]:
        """Morphisms whose naturality square does not commute."""
        M = self.source.monoid
        bad = []
        for m in all_morphisms(M):
            lhs = self.target.on_morphism(m.alpha, m.a, m.beta) @ self.components[m.a]
            rhs = self.components[m.target] @ self.source.on_morphism(m.alpha, m.a, m.beta)
            if not lhs.equals(rhs):
                bad.append(m)
        return bad

    def is_natural(self) -> bool:
        return not self.naturality_failures()

    def __matmul__(self, other: NatTransformation) -> NatTransformation:
        return NatTransformation(other.source, self.target,
                                 {a: self.components[a] @ other.components[a]
                                  for a in self.components})

    def equals(self, other: NatTransformation) -> bool:
        return all(self.components[a].equals(other.components[a]) for a in self.components)

    def is_objectwise_surjective(self) -> bool:
        return all(c.is_surjective() for c in self.components.values())


def identity_transformation(D: NaturalSystem) -> NatTransformation:
    return NatTransformation(D, D, {a: GroupHom.identity(D.value[a]) for a in D.value})


# ---------------------------------------------------------------------------
# bar complex


@lru_cache(maxsize=None)
def bar(M: MonoidWithZero, n: int) -> NaturalSystem:
    return bar_system(M, n)


@lru_cache(maxsize=None)
def trivial(M: MonoidWithZero) -> NaturalSystem:
    return trivial_Z(M)


def _alternating(i: int) -> int:
    return -1 if i % 2 else 1


def bar_boundary_matrix(M: MonoidWithZero, n: int, a: int,
                        sign: Callable[[int], int] = _alternating) -> IntMatrix:
    """``(d_n)_a``: ``[a_0..a_{n+1}] -> sum_i sign(i) [.., a_i a_{i+1}, ..]``."""
    src = bar_generators(M, n, a)
    tgt = bar_generators(M, n - 1, a)
    pos = {g: i for i, g in enumerate(tgt)}
    t = M.table
    cols = []
    for g in src:
        col = [0] * len(tgt)
        for i in range(n + 1):
            h = g[:i] + (t[g[i]][g[i + 1]],) + g[i + 2:]
            col[pos[h]] += sign(i)
        cols.append(col)
    return IntMatrix.from_columns(cols, len(tgt))


def bar_boundary(M: MonoidWithZero, n: int) -> NatTransformation:
    if n < 1:
        raise ValueError("the bar boundary starts in degree 1")
    S, T = bar(M, n), bar(M, n - 1)
    return NatTransformation(S, T, {a: GroupHom(S.value[a], T.value[a],
                                                bar_boundary_matrix(M, n, a))
                                    for a in M.nonzero})


def augmentation_matrix(M: MonoidWithZero, a: int) -> IntMatrix:
    return IntMatrix([[1] * len(bar_generators(M, 0, a))], 1, len(bar_generators(M, 0, a)))


def augmentation(M: MonoidWithZero) -> NatTransformation:
    """``B_0 -> Z`` sending every generator ``[a_0, a_1]`` to ``[a_0 a_1]``."""
    S, T = bar(M, 0), trivial(M)
    return NatTransformation(S, T, {a: GroupHom(S.value[a], T.value[a], augmentation_matrix(M, a))
                                    for a in M.nonzero})


@dataclass(frozen=True)
class ExactnessFailure:
    object: str
    position: int     # -1 is the augmentation target Z
    reason: str

    def __str__(self) -> str:
        where = "Z" if self.position < 0 else f"B_{self.position}"
        return f"not exact at {where}({self.object}): {self.reason}"


def check_resolution_exact(M: MonoidWithZero, n_max: int,
                           sign: Callable[[int], int] = _alternating) -> ExactnessFailure | None:
    """Exactness of ``B_{n_max}(a) -> ... -> B_0(a) -> Z -> 0`` at every object.

    Checked at ``Z`` and at ``B_0 .. B_{n_max - 1}``; ``sign`` replaces the
    alternating sign in the boundary (mutation tests).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    for a in M.nonzero:
        Z = PresentedAbelianGroup.free(1)
        groups = [PresentedAbelianGroup.free(len(bar_generators(M, k, a)))
                  for k in range(n_max + 1)]
        maps = [GroupHom(groups[0], Z, augmentation_matrix(M, a))]
        maps += [GroupHom(groups[k], groups[k - 1], bar_boundary_matrix(M, k, a, sign))
                 for k in range(1, n_max + 1)]
        zero_out = GroupHom.zero(Z, PresentedAbelianGroup(0))
        chain = [zero_out] + maps
        for pos in range(-1, n_max):
            d_out, d_in = chain[pos + 1], chain[pos + 2]
            try:
                h = homology(d_out, d_in)
            except CompositionNotZero:
                return ExactnessFailure(M.name(a), pos, "boundary composite is not zero")
            if not h.is_zero:
                return ExactnessFailure(M.name(a), pos, f"homology {h}")
    return None


# ---------------------------------------------------------------------------
# Hom complex


@dataclass(frozen=True, eq=False)
class HomGroup:
    """``Hom(B_n, D)`` as a sublattice of the product of the ``D_a^{rank B_n(a)}``.

    ``group`` presents the Hom group on the lattice basis.
    """

    degree: int
    system: NaturalSystem
    slots: tuple[tuple[int, tuple[int, ...]], ...]   # (object, generator) per block
    offsets: tuple[int, ...]
    ambient: PresentedAbelianGroup
    lattice: Lattice
    group: PresentedAbelianGroup

    def slot_index(self) -> dict:
        return {s: i for i, s in enumerate(self.slots)}

    def to_transformation(self, y: Sequence[int]) -> NatTransformation:
        x = self.lattice.basis.apply(y)
        return self.ambient_to_transformation(x)

    def ambient_to_transformation(self, x: Sequence[int]) -> NatTransformation:
        D = self.system
        M = D.monoid
        n = self.degree
        B = bar(M, n)
        idx = self.slot_index()
        comps = {}
        for a in M.nonzero:
            gens = bar_generators(M, n, a)
            cols = []
            for g in gens:
                k = idx[a, g]
                cols.append(list(x[self.offsets[k]:self.offsets[k + 1]]))
            comps[a] = GroupHom(B.value[a], D.value[a],
                                IntMatrix.from_columns(cols, D.value[a].rank))
        return NatTransformation(B, D, comps)

    def ambient_vector(self, tau: NatTransformation) -> list[int]:
        x = []
        for a, g in self.slots:
            j = bar_generators(self.system.monoid, self.degree, a).index(g)
            x.extend(tau.components[a].matrix.column(j))
        return x

    def coords(self, tau: NatTransformation) -> list[int]:
        y = self.lattice.coords(self.ambient_vector(tau))
        if y is None:
            raise NotNatural("transformation violates a naturality equation")
        return y


@lru_cache(maxsize=128)
def hom_group(D: NaturalSystem, n: int) -> HomGroup:
    M = D.monoid
    slots = tuple((a, g) for a in M.nonzero for g in bar_generators(M, n, a))
    offsets = [0]
    for a, _ in slots:
        offsets.append(offsets[-1] + D.value[a].rank)
    idx = {s: i for i, s in enumerate(slots)}
    ambient = direct_sum(*(D.value[a] for a, _ in slots))
    width = ambient.rank
    t = M.table
    rows: list[list[int]] = []
    rel_blocks = []
    for m in all_morphisms(M):
        if m.alpha == M.identity and m.beta == M.identity:
            continue
        Dm = D.on_morphism(m.alpha, m.a, m.beta).matrix
        b = m.target
        rb = D.value[b].rank
        for g in bar_generators(M, n, m.a):
            g2 = (t[m.alpha][g[0]],) + g[1:-1] + (t[g[-1]][m.beta],)
            block = [[0] * width for _ in range(rb)]
            k2 = idx[b, g2]
            for i in range(rb):
                block[i][offsets[k2] + i] += 1
            k1 = idx[m.a, g]
            for i in range(rb):
                for j in range(Dm.cols):
                    block[i][offsets[k1] + j] -= Dm[i, j]
            rows.extend(block)
            rel_blocks.append(D.value[b].relations)
    C = IntMatrix(rows, len(rows), width)
    R = block_diag(*rel_blocks) if rel_blocks else IntMatrix.zeros(0, 0)
    lattice = preimage_lattice(C, R)
    group = PresentedAbelianGroup(lattice.rank, lattice.coords_matrix(ambient.relations))
    return HomGroup(n, D, slots, tuple(offsets), ambient, lattice, group)


@lru_cache(maxsize=128)
def hom_differential(D: NaturalSystem, n: int) -> GroupHom:
    """``Hom(d_{n+1}, D)``: precompose with the bar boundary."""
    M = D.monoid
    H0, H1 = hom_group(D, n), hom_group(D, n + 1)
    cols = []
    for j in range(H0.group.rank):
        y = [0] * H0.group.rank
        y[j] = 1
        tau = H0.to_transformation(y)
        cols.append(H1.coords(tau @ bar_boundary(M, n + 1)))
    return GroupHom(H0.group, H1.group, IntMatrix.from_columns(cols, H1.group.rank))


def hom_complex(M: MonoidWithZero, D: NaturalSystem, n: int) -> tuple[HomGroup, GroupHom]:
    if D.monoid != M:
        raise ValueError("natural system lives on a different monoid")
    return hom_group(D, n), hom_differential(D, n)


def hom_cohomology(M: MonoidWithZero, D: NaturalSystem, n: int) -> AbelianInvariants:
    d_out = hom_complex(M, D, n)[1]
    if n == 0:
        d_in = GroupHom.zero(PresentedAbelianGroup(0), d_out.source)
    else:
        d_in = hom_complex(M, D, n - 1)[1]
    return homology(d_out, d_in)


# ---------------------------------------------------------------------------
# Psi


def psi(M: MonoidWithZero, D: NaturalSystem, n: int, tau: NatTransformation) -> list[int]:
    """Cochain ``(a_1..a_n) -> tau_{a_1..a_n}[1, a_1, ..., a_n, 1]``."""
    level = cochain_level(M, D, n)
    one = M.identity
    f: list[int] = []
    for tup in level.index:
        p = M.prod(tup)
        j = bar_generators(M, n, p).index((one,) + tup + (one,))
        f.extend(tau.components[p].matrix.column(j))
    return f


def psi_inverse(M: MonoidWithZero, D: NaturalSystem, n: int,
                f: Sequence[int]) -> NatTransformation:
    """``phi_a[a_0, .., a_{n+1}] = D(a_0, a_{n+1}) f(a_1, .., a_n)``."""
    level = cochain_level(M, D, n)
    if len(f) != level.rank:
        raise ValueError("cochain has the wrong length")
    B = bar(M, n)
    comps = {}
    for a in M.nonzero:
        cols = []
        for g in bar_generators(M, n, a):
            mid = g[1:-1]
            v = level.value(f, mid)
            cols.append(D.on_morphism(g[0], M.prod(mid), g[-1])(v))
        comps[a] = GroupHom(B.value[a], D.value[a], IntMatrix.from_columns(cols, D.value[a].rank))
    return NatTransformation(B, D, comps)


def psi_matrix(D: NaturalSystem, n: int) -> GroupHom:
    """``Psi^n`` as a map from the Hom group to ``C^n``."""
    M = D.monoid
    H = hom_group(D, n)
    level = cochain_level(M, D, n)
    cols = []
    for j in range(H.group.rank):
        y = [0] * H.group.rank
        y[j] = 1
        cols.append(psi(M, D, n, H.to_transformation(y)))
    return GroupHom(H.group, level.group, IntMatrix.from_columns(cols, level.rank))


def psi_inverse_matrix(D: NaturalSystem, n: int) -> GroupHom:
    M = D.monoid
    H = hom_group(D, n)
    level = cochain_level(M, D, n)
    cols = []
    for j in range(level.rank):
        f = [0] * level.rank
        f[j] = 1
        cols.append(H.coords(psi_inverse(M, D, n, f)))
    return GroupHom(level.group, H.group, IntMatrix.from_columns(cols, H.group.rank))


@dataclass(frozen=True)
class PsiDegreeReport:
    degree: int
    hom_invariants: AbelianInvariants
    cochain_invariants: AbelianInvariants
    well_defined: bool
    left_inverse: bool      # Psi^-1 Psi = id  (injectivity)
    right_inverse: bool     # Psi Psi^-1 = id  (surjectivity)
    chain_map: bool         # Psi^{n+1} d^n = delta^n Psi^n
    hom_cohomology: AbelianInvariants
    cochain_cohomology: AbelianInvariants

    @property
    def ok(self) -> bool:
        return (self.well_defined and self.left_inverse and self.right_inverse
                and self.chain_map and self.hom_invariants == self.cochain_invariants
                and self.hom_cohomology == self.cochain_cohomology)


def psi_check(M: MonoidWithZero, D: NaturalSystem, n_max: int) -> list[PsiDegreeReport]:
    out = []
    for n in range(n_max + 1):
        H = hom_group(D, n)
        level = cochain_level(M, D, n)
        P, Q = psi_matrix(D, n), psi_inverse_matrix(D, n)
        P1 = psi_matrix(D, n + 1)
        chain = (P1 @ hom_differential(D, n)).equals(coboundary(M, D, n).hom @ P)
        out.append(PsiDegreeReport(
            degree=n,
            hom_invariants=H.group.invariants,
            cochain_invariants=level.group.invariants,
            well_defined=P.is_well_defined() and Q.is_well_defined(),
            left_inverse=(Q @ P).equals(GroupHom.identity(H.group)),
            right_inverse=(P @ Q).equals(GroupHom.identity(level.group)),
            chain_map=chain,
            hom_cohomology=hom_cohomology(M, D, n),
            cochain_cohomology=cohomology_group(M, D, n),
        ))
    return out


# ---------------------------------------------------------------------------
# projectivity of B_n, constructively


def _reduced(G: PresentedAbelianGroup, v: Sequence[int]) -> list[int]:
    """Canonical representative when the relations are diagonal."""
    R = G.relations
    out = list(v)
    for j in range(R.cols):
        nz = [i for i in range(R.rows) if R[i, j]]
        if len(nz) != 1:
            return list(v)
        i = nz[0]
        out[i] %= abs(R[i, j])
    return out


def lift_through_epi(mu: NatTransformation, nu: NatTransformation) -> NatTransformation:
    """``tau : B_n -> D`` with ``mu . tau = nu`` for an objectwise epi ``mu : D -> E``.

    For every nerve tuple ``s`` a preimage of ``nu[1, s, 1]`` is chosen (the
    deterministic solution of the integer system) and ``tau`` is its
    extension by the functor action.  Both the factorization and naturality
    are verified before returning.
    """
    D, E = mu.source, mu.target
    B = nu.source
    n = B.bar_degree
    if n is None or nu.target is not E:
        raise ValueError("nu must be a transformation from a bar system to mu's target")
    M = D.monoid
    for a in M.nonzero:
        if not mu.components[a].is_surjective():
            raise NotEpi(M.name(a))
    one = M.identity
    f: list[int] = []
    for tup in nerve(M, n):
        p = M.prod(tup)
        j = bar_generators(M, n, p).index((one,) + tup + (one,))
        e = _reduced(E.value[p], nu.components[p].matrix.column(j))
        pre = mu.components[p].preimage(e)
        if pre is None:
            raise NoPreimage(f"no preimage at {tup}")
        f.extend(_reduced(D.value[p], pre))
    tau = psi_inverse(M, D, n, f)
    if not (mu @ tau).equals(nu):
        raise NoPreimage("lift does not factor nu")
    if not tau.is_natural():
        raise NotNatural("lift is not natural")
    return tau


# ---------------------------------------------------------------------------
# random instances for the lifting check


def _module_maps(F: ZeroModule, E: ZeroModule, bound: int = 3) -> list[IntMatrix]:
    """Equivariant homomorphisms ``F.group -> E.group`` with small entries."""
    M = F.monoid
    r, c = E.group.rank, F.group.rank
    out = []
    for entries in product(range(-bound, bound + 1), repeat=r * c):
        m = IntMatrix([entries[i * c:(i + 1) * c] for i in range(r)], r, c)
        h = GroupHom(F.group, E.group, m)
        if not h.is_well_defined():
            continue
        if all((h @ F.act(s)).equals(E.act(s) @ h) for s in M.nonzero):
            out.append(m)
    return out


def transformation_between_modules(DF: NaturalSystem, DE: NaturalSystem,
                                   matrix: IntMatrix) -> NatTransformation:
    """The constant family ``matrix`` between two zero-module systems."""
    M = DF.monoid
    return NatTransformation(DF, DE, {a: GroupHom(DF.value[a], DE.value[a], matrix)
                                      for a in M.nonzero})


def random_epi(M: MonoidWithZero, rng: random.Random) -> NatTransformation:
    """A random objectwise-surjective ``mu : D -> E`` between zero-module systems.

    ``E`` is a random zero-module on ``Z/2``, ``Z/3``, ``Z/4`` or ``Z``.
    ``D`` is either ``E`` itself or an integer lift of ``E`` (when one
    exists), plus a random extra summand mapped into ``E`` equivariantly.
    """
    groups = [[2], [3], [4], [0]]
    E = rng.choice(enumerate_zero_modules(M, rng.choice(groups), bound=1))
    DE = from_zero_module(E, label="E")
    parts, blocks = [], []
    lifts = []
    if E.group.relations.cols:
        m = E.group.relations[0, 0]
        for L in enumerate_zero_modules(M, [0], bound=1):
            if all((L.action[s][0, 0] - E.action[s][0, 0]) % m == 0 for s in M.nonzero):
                lifts.append(L)
    if lifts and rng.random() < 0.5:
        L = rng.choice(lifts)
        parts.append(from_zero_module(L, label="lift"))
    else:
        parts.append(DE)
    blocks.append(IntMatrix.identity(1))
    F = rng.choice(enumerate_zero_modules(M, rng.choice(groups), bound=1))
    maps = _module_maps(F, E, bound=2)
    parts.append(from_zero_module(F, label="F"))
    blocks.append(rng.choice(maps))
    D = direct_sum_systems(*parts)
    mat = IntMatrix([blocks[0].row(0) + blocks[1].row(0)], 1, 2)
    mu = transformation_between_modules(D, DE, mat)
    return mu


def random_cochain(M: MonoidWithZero, D: NaturalSystem, n: int, rng: random.Random,
                   bound: int = 3) -> list[int]:
    level = cochain_level(M, D, n)
    return [rng.randint(-bound, bound) for _ in range(level.rank)]


@dataclass(frozen=True)
class LiftTrial:
    seed: int
    degree: int
    factors: bool
    natural: bool


def random_lift_trials(M: MonoidWithZero, trials: int, seed: int,
                       degrees: Sequence[int] = (0, 1)) -> list[LiftTrial]:
    """Lift random ``nu : B_n -> E`` through random epis ``D -> E``."""
    out = []
    for k in range(trials):
        rng = random.Random(seed * 100_003 + k)
        n = degrees[k % len(degrees)]
        mu = random_epi(M, rng)
        E = mu.target
        nu = psi_inverse(M, E, n, random_cochain(M, E, n, rng))
        tau = lift_through_epi(mu, nu)
        out.append(LiftTrial(seed, n, (mu @ tau).equals(nu), tau.is_natural()))
    return out
