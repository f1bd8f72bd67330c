import pytest

from obliquity.lattice import all_normal_subgroups
from obliquity.permcore.constructions import cyclic, symmetric
from obliquity.permcore.structure import iso_fingerprint
from obliquity.towers import (TreeCoordinates, branch_bound_report, build_cyclic_tower, build_elemab_tower,
                              build_wreath_tower, just_infinite_evidence, kh_profile, level_stabilizer,
                              ob_profile, product_tower, pullback, rigid_vertex_stabilizer,
                              theorem_c_tower_check)


def index_subgroup(G, idx):
    return next(M for M in all_normal_subgroups(G).members if M.index == idx)


def test_cyclic_levels():
    assert build_cyclic_tower(2, 3).orders() == [2, 4, 8]
    assert build_cyclic_tower(3, 2).orders() == [3, 9]


def test_wreath_levels():
    assert build_wreath_tower(cyclic(2), 3).orders() == [2, 8, 128]
    # |level 2| = |P|^(1 + 3) for P = Sym(3) acting on 3 points
    assert build_wreath_tower(symmetric(3), 2).orders() == [6, 6 ** 4]
    assert build_wreath_tower(symmetric(3), 1).orders() == [6]


def test_pullbacks():
    t = build_cyclic_tower(2, 5)
    assert pullback(t, 2, t.level(2).whole, 4).is_whole()
    S = index_subgroup(t.level(3), 4)
    assert pullback(t, 3, S, 5).index == 4
    assert pullback(t, 2, t.level(2).trivial, 5) == t.composite(2, 5).kernel


def test_stabilizers():
    t = build_wreath_tower(cyclic(2), 3)
    assert level_stabilizer(t, 1).order == 64
    assert level_stabilizer(t, 0).is_whole()
    assert level_stabilizer(t, 3).is_trivial()
    assert rigid_vertex_stabilizer(t, TreeCoordinates(2, (1,), 3)).order == 8
    leaf_parent = rigid_vertex_stabilizer(t, TreeCoordinates(2, (0, 1), 3))
    assert iso_fingerprint(leaf_parent.as_group()) == iso_fingerprint(cyclic(2))
    with pytest.raises(ValueError):
        level_stabilizer(build_cyclic_tower(2, 3), 1)


def test_ob_profiles():
    p = ob_profile(build_cyclic_tower(2, 6), 4)
    assert p.per_level == [2, 4, 4, 4, 4, 4] and p.stabilized and p.stable_value == 4
    for t in (build_cyclic_tower(3, 3), build_wreath_tower(cyclic(2), 3)):
        assert set(ob_profile(t, 1).per_level) == {1}
    assert ob_profile(build_cyclic_tower(3, 4), 3).stable_value == 3


def test_kh_profiles():
    t = build_cyclic_tower(2, 6)
    p = kh_profile(t, 2, index_subgroup(t.level(2), 4))
    assert p.stabilized and p.stable_value == 2
    assert set(kh_profile(t, 2, t.level(2).whole).per_level) == {0}


def test_evidence():
    ev = just_infinite_evidence(build_cyclic_tower(2, 8), 8)
    assert ev.consistent and tuple(ev.stable_values) == (1, 2, 2, 4, 4, 4, 4, 8)
    ev = just_infinite_evidence(build_elemab_tower(2, 4), 2)
    assert not ev.consistent and ev.profiles[1].per_level == [2, 4, 8, 16]
    ev = just_infinite_evidence(build_cyclic_tower(2, 1), 2)
    assert ev.consistent and ev.insufficient_depth and ev.verdict == "insufficient depth"


def test_branch_bound_on_cyclic_tower():
    b = branch_bound_report(build_cyclic_tower(2, 6), 8)
    assert b.c <= 2 and b.values == [1, 2, 2, 4, 4, 4, 4, 8]


def test_truncation_marker():
    t = build_wreath_tower(cyclic(2), 4)
    assert t.orders()[-1] == 32768
    p = ob_profile(t, 2)
    assert p.truncated and p.computed_depth == 3


def test_product_tower():
    t = product_tower(build_cyclic_tower(2, 3), build_cyclic_tower(3, 3))
    assert t.orders() == [6, 36, 216]
    assert ob_profile(t, 6).per_level[-1] >= 6


def test_subgroup_inequalities_on_cyclic_tower():
    r = theorem_c_tower_check(build_cyclic_tower(2, 6), 3)
    assert r.sides_stabilized and r.clause_ii and r.clause_iii_plain and r.clause_iii_star
