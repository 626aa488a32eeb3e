from itertools import product

import pytest

from oracles import brute_force_bar_rank
from zerocohom import monoid as mon
from zerocohom.exactalg import GroupHom, IntMatrix, PresentedAbelianGroup
from zerocohom.facnerve import all_morphisms
from zerocohom.natsys import (BadAction, NaturalSystem, TooLarge, ZeroModule, bar_system,
                              check_functoriality, default_battery, describe_action,
                              direct_sum_systems, enumerate_zero_modules, from_zero_module,
                              trivial_Z)

BUILTINS = sorted(mon.BUILTIN_MONOIDS)


def scalar_module(M, m, values):
    A = PresentedAbelianGroup.from_invariants([m])
    return ZeroModule(M, A, {M.index(k): IntMatrix([[x]]) for k, x in values.items()})


@pytest.mark.parametrize("name", BUILTINS)
def test_trivial_and_bar_are_functors(name):
    M = mon.builtin(name)
    assert check_functoriality(trivial_Z(M)) == []
    for n in range(3):
        assert check_functoriality(bar_system(M, n)) == []


def test_broken_left_map_is_reported():
    M = mon.example_uvw()
    D = trivial_Z(M)
    u = M.index("u")
    left = dict(D.left)
    left[u, u] = GroupHom(D.value[u], D.value[M.mul(u, u)], IntMatrix([[2]]))
    bad = check_functoriality(NaturalSystem(M, D.value, left, D.right))
    assert bad
    assert any("left" in v.law and "u" in v.witness for v in bad)


def test_trivial_action_on_Z_is_trivial_system():
    M = mon.example_uvw()
    Z = scalar_module(M, 0, {k: 1 for k in "1uvw"})
    D, T = from_zero_module(Z), trivial_Z(M)
    for m in all_morphisms(M):
        assert D.on_morphism(m.alpha, m.a, m.beta).matrix == \
            T.on_morphism(m.alpha, m.a, m.beta).matrix


def test_bad_action_witness():
    M = mon.example_uvw()
    # u acts by 1, w by 0, but u*u = w
    Z = scalar_module(M, 0, {"1": 1, "u": 1, "v": 0, "w": 0})
    with pytest.raises(BadAction) as exc:
        from_zero_module(Z)
    assert exc.value.witness == ("u", "u")


def test_enumeration_counts():
    M = mon.example_uvw()
    assert len(enumerate_zero_modules(M, [2])) == 2
    assert len(enumerate_zero_modules(mon.trivial(), [2])) == 1
    assert len(enumerate_zero_modules(mon.trivial(), [3, 3])) == 1
    with pytest.raises(TooLarge):
        enumerate_zero_modules(M, [0])


def test_z3_enumeration_brute_force():
    M = mon.example_uvw()
    u, v, w = (M.index(x) for x in "uvw")
    found = 0
    for cu, cv, cw in product(range(3), repeat=3):
        act = {u: cu, v: cv, w: cw}
        ok = all((act[s] * act[t] - act[M.mul(s, t)]) % 3 == 0
                 for s in (u, v, w) for t in (u, v, w) if M.mul(s, t) != M.zero)
        found += ok
    mods = enumerate_zero_modules(M, [3])
    assert len(mods) == found == 3
    for Z in mods:
        assert check_functoriality(from_zero_module(Z)) == []


@pytest.mark.parametrize("name", BUILTINS)
def test_enumerated_modules_are_natural_systems(name):
    M = mon.builtin(name)
    for A in ([2], [3], [4], [2, 2]):
        for Z in enumerate_zero_modules(M, A):
            assert check_functoriality(from_zero_module(Z)) == []


@pytest.mark.parametrize("name", BUILTINS)
def test_bar_ranks(name):
    M = mon.builtin(name)
    for n in range(3):
        B = bar_system(M, n)
        for a in M.nonzero:
            assert B.value[a].rank == brute_force_bar_rank(M.table, M.zero, M.identity, n, a)


def test_direct_sum_is_functor():
    M = mon.example_uvw()
    mods = enumerate_zero_modules(M, [3])
    D = direct_sum_systems(trivial_Z(M), from_zero_module(mods[-1]), bar_system(M, 0))
    assert check_functoriality(D) == []


def test_battery_labels():
    M = mon.example_uvw()
    labels = [D.label for D in default_battery(M)]
    assert labels[0] == "trivial-Z" and labels[-2:] == ["bar:0", "bar:1"]
    assert "zero-module:z2:identity" in labels and "zero-module:z2:zero" in labels
    assert len(labels) == len(set(labels))


def test_describe_action():
    M = mon.z2_with_zero()
    kinds = sorted(describe_action(Z) for Z in enumerate_zero_modules(M, [3]))
    assert kinds == ["", "identity"]
