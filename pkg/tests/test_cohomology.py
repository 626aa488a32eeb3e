import random

import pytest

from oracles import cyclic_closed_form, group_cohomology_trivial_Z
from zerocohom import monoid as mon
from zerocohom.cohomology import (GuardrailExceeded, NotFunctorial, cd_probe, check_dd_zero,
                                  check_guardrail, coboundary_matrix, cochain_level,
                                  cohomology_group, cohomology_groups)
from zerocohom.exactalg import AbelianInvariants, GroupHom, IntMatrix, PresentedAbelianGroup
from zerocohom.natsys import (NaturalSystem, ZeroModule, default_battery,
                              enumerate_zero_modules, from_zero_module, trivial_Z)

BUILTINS = sorted(mon.BUILTIN_MONOIDS)


def inv(free, *torsion):
    return AbelianInvariants(free, tuple(torsion))


def test_level_zero_is_value_at_identity():
    M = mon.example_uvw()
    D = trivial_Z(M)
    L = cochain_level(M, D, 0)
    assert L.index == ((),) and L.rank == 1
    assert all(cochain_level(mon.trivial(), trivial_Z(mon.trivial()), n).rank == 1
               for n in range(4))


def test_delta1_row_example():
    M = mon.example_uvw()
    D = trivial_Z(M)
    d1 = coboundary_matrix(M, D, 1)
    assert d1.shape == (11, 4)
    u, v = M.index("u"), M.index("v")
    row = cochain_level(M, D, 2).position((u, v))
    assert list(d1.row(row)) == [0, 1, 1, -1]


def test_h0_trivial_monoid():
    M = mon.trivial()
    assert cohomology_groups(M, trivial_Z(M), 3) == [inv(1), inv(0), inv(0), inv(0)]


def test_z2_with_zero_values():
    M = mon.z2_with_zero()
    assert cohomology_groups(M, trivial_Z(M), 2) == [inv(1), inv(0), inv(0, 2)]


def klein():
    names = ["1", "a", "b", "c"]
    table = [[i ^ j for j in range(4)] for i in range(4)]
    return mon.adjoin_zero(mon.FiniteMonoid(tuple(names), 0, tuple(map(tuple, table))))


GROUPS = {
    "Z/2": (lambda: mon.adjoin_zero(mon.cyclic_group(2)), list(range(2)),
            lambda a, b: (a + b) % 2),
    "Z/3": (lambda: mon.adjoin_zero(mon.cyclic_group(3)), list(range(3)),
            lambda a, b: (a + b) % 3),
    "Z/4": (lambda: mon.adjoin_zero(mon.cyclic_group(4)), list(range(4)),
            lambda a, b: (a + b) % 4),
    "Z/2xZ/2": (klein, [(x, y) for x in range(2) for y in range(2)],
                lambda p, q: ((p[0] + q[0]) % 2, (p[1] + q[1]) % 2)),
}


@pytest.mark.parametrize("group", sorted(GROUPS))
def test_classical_group_oracle(group):
    build, elements, mul = GROUPS[group]
    M = build()
    ours = cohomology_groups(M, trivial_Z(M), 3)
    oracle = group_cohomology_trivial_Z(elements, mul, 3)
    assert [(h.free_rank, list(h.torsion)) for h in ours] == oracle
    if group.count("Z/") == 1:
        m = len(elements)
        assert oracle == [cyclic_closed_form(m, n) for n in range(4)]


@pytest.mark.parametrize("name", BUILTINS)
def test_dd_zero_on_battery(name):
    M = mon.builtin(name)
    for D in default_battery(M):
        assert check_dd_zero(M, D, 4) is None, D.label


def test_dd_mutation_is_caught():
    M = mon.example_uvw()
    D = trivial_Z(M)

    def corrupted(M_, D_, n):
        return coboundary_matrix(M_, D_, n, middle_sign=lambda i: 1)

    bad = check_dd_zero(M, D, 3, builder=corrupted)
    assert bad is not None and bad.degree >= 1
    assert M.prod(bad.row_tuple) != M.zero


def test_dd_requires_degree():
    M = mon.trivial()
    with pytest.raises(ValueError):
        check_dd_zero(M, trivial_Z(M), 0)


def test_non_functor_rejected():
    M = mon.z2_with_zero()
    D = trivial_Z(M)
    g = M.index("g")
    left = dict(D.left)
    left[g, g] = GroupHom(D.value[g], D.value[M.mul(g, g)], IntMatrix([[3]]))
    with pytest.raises(NotFunctorial):
        cohomology_group(M, NaturalSystem(M, D.value, left, D.right), 1)


@pytest.mark.parametrize("name", BUILTINS)
@pytest.mark.parametrize("seed", range(3))
def test_isomorphism_invariance(name, seed):
    M = mon.builtin(name)
    perm = list(range(M.size))
    random.Random(seed).shuffle(perm)
    P = mon.permuted(M, perm)
    before = sorted(tuple(map(str, cohomology_groups(M, D, 3))) for D in default_battery(M))
    after = sorted(tuple(map(str, cohomology_groups(P, D, 3))) for D in default_battery(P))
    assert before == after


@pytest.mark.parametrize("c_uvw", [(1, 1, 1), (0, 0, 0)])
def test_zero_module_presentation_invariance(c_uvw):
    M = mon.example_uvw()
    scal = dict(zip("1uvw", (1,) + c_uvw))
    plain = ZeroModule(M, PresentedAbelianGroup.cyclic(2),
                       {M.index(k): IntMatrix([[c]]) for k, c in scal.items()})
    # Z/2 again, on generators e1, e2 with 2 e1 = 0 and e2 = e1
    A = PresentedAbelianGroup(2, IntMatrix([[2, -1], [0, 1]]))
    assert A.invariants == inv(0, 2)
    other = ZeroModule(M, A, {M.index(k): IntMatrix([[c, 0], [0, c]]) for k, c in scal.items()})
    h1 = cohomology_groups(M, from_zero_module(plain), 3)
    h2 = cohomology_groups(M, from_zero_module(other), 3)
    assert h1 == h2
    assert h1 == cohomology_groups(M, from_zero_module(plain), 3)


def test_e4_nonzero_h2_for_all_small_modules():
    M = mon.example_uvw()
    for A in ([2], [3], [4], [2, 2]):
        for Z in enumerate_zero_modules(M, A):
            assert not cohomology_group(M, from_zero_module(Z), 2).is_zero


def test_cd_probe_reports():
    for name, k in (("trivial", 0), ("m3", 1), ("free2-len1", 1), ("example-uvw", 2)):
        M = mon.builtin(name)
        rep = cd_probe(M, default_battery(M), 3, name)
        assert rep.top_degree == k
        assert rep.vanishes_above(k)
        text = rep.verdict()
        assert "evidence only" in text
        if k < 3:
            assert f"consistent with c.d. <= {k}" in text
    M = mon.example_uvw()
    text = cd_probe(M, default_battery(M), 3).verdict()
    assert "H^2 nonzero for coefficient zero-module:z2:identity" in text
    with pytest.raises(ValueError):
        cd_probe(M, [], 3)


def test_guardrail():
    big = mon.adjoin_zero(mon.cyclic_group(12))
    with pytest.raises(GuardrailExceeded):
        check_guardrail(big, 2)
    check_guardrail(big, 2, force=True)
    with pytest.raises(GuardrailExceeded):
        check_guardrail(mon.trivial(), 4)
