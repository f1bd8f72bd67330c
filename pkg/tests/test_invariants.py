from fractions import Fraction

import pytest

from obliquity.invariants import (ABELIAN, ALL_GROUPS, NILPOTENT, EtaBound, bounded_index_intersection,
                                  class_membership, effective_indices, elementary_abelian_class, fitting_subgroup,
                                  klp_obliquity, ob_table, ob_value, oblique_core, oblique_core_star,
                                  p_group_class, phi_height, phi_height_at_most, phi_normal, pro_p_constants,
                                  simple_product_decomposition, trichotomy_check, x_radical, x_residual)
from obliquity.lattice import all_normal_subgroups
from obliquity.permcore.constructions import (alternating, cyclic, dihedral, direct_product, elementary_abelian,
                                              quaternion, symmetric)
from obliquity.permcore.group import ResourceError, generate
from obliquity.towers import theorem_c_check


def normal_of_order(G, k):
    return next(N for N in all_normal_subgroups(G).members if N.order == k)


S3 = symmetric(3)
A3 = normal_of_order(S3, 3)
Q8 = quaternion(8)
Z8 = normal_of_order(Q8, 2)
I8 = Q8.subgroup([Q8.gens[0]])


def test_phi_examples():
    assert phi_normal(S3) == A3
    assert phi_normal(elementary_abelian(2, 2)).is_trivial()
    assert phi_normal(cyclic(12)).order == 2
    assert phi_normal(cyclic(12), method="lattice").order == 2
    assert phi_normal(generate([], degree=1)).is_whole()


def test_phi_height_examples():
    assert phi_height(generate([], degree=1)) == 0
    assert phi_height(S3) == 2
    for k in range(1, 7):
        assert phi_height(cyclic(2 ** k)) == k


def test_decomposition_examples():
    assert sorted(S.order for S in simple_product_decomposition(cyclic(6))) == [2, 3]
    assert sorted(S.order for S in simple_product_decomposition(direct_product(alternating(5), cyclic(2)))) == [2, 60]
    assert simple_product_decomposition(S3) is None
    assert simple_product_decomposition(generate([], degree=1)) == []


def test_residual_examples():
    assert x_residual(S3, ABELIAN) == A3
    assert x_residual(Q8, elementary_abelian_class(2)) == Z8
    assert x_residual(S3, ALL_GROUPS).is_trivial()


@pytest.mark.parametrize("G", [symmetric(4), dihedral(16), quaternion(16), direct_product(S3, cyclic(4))],
                         ids=["S4", "D16", "Q16", "S3xC4"])
def test_residual_pruned_walk_matches_full_scan(G):
    for X in (ABELIAN, NILPOTENT, elementary_abelian_class(2), phi_height_at_most(1), phi_height_at_most(2)):
        assert x_residual(G, X) == x_residual(G, X, use_closure=False)


def test_radical_examples():
    S4 = symmetric(4)
    assert x_radical(S4, NILPOTENT).order == 4
    assert fitting_subgroup(S4).order == 4
    assert x_radical(S3, p_group_class(2)).is_trivial()
    assert x_radical(Q8, NILPOTENT).is_whole()


def test_bounded_index_examples():
    assert bounded_index_intersection(S4 := symmetric(4), 1).is_whole()
    assert bounded_index_intersection(Q8, 2) == Z8
    assert bounded_index_intersection(S3, 6).is_trivial()
    assert effective_indices(S4) == [1, 2, 6, 24]


def test_oblique_core_examples():
    assert oblique_core(S3, S3.whole).is_whole()
    assert oblique_core(S3, A3) == A3
    assert oblique_core(Q8, I8) == Z8
    assert oblique_core_star(S3, S3.whole).is_whole()
    assert oblique_core_star(S3, A3) == A3
    assert oblique_core_star(Q8, I8) == Z8


def test_star_core_agrees_with_survey():
    for G in (symmetric(4), dihedral(12), quaternion(16)):
        for H in all_normal_subgroups(G).members:
            assert oblique_core_star(G, H) == oblique_core_star(G, H, method="survey")
        for c in G.gen_indices:
            H = G.span([c])
            assert oblique_core_star(G, H) == oblique_core_star(G, H, method="survey")


def test_star_core_cap():
    S7 = symmetric(7)
    with pytest.raises(ResourceError):
        oblique_core_star(S7, S7.trivial)


def test_ob_examples():
    for G in (S3, Q8, alternating(5), cyclic(8)):
        assert ob_value(G, 1).value == 1
    assert ob_value(cyclic(8), 4).value == 4
    r = ob_value(Q8, 2)
    assert r.I_n == Z8 and r.core == Z8 and r.value == 4
    assert ob_table(Q8, 3) == [1, 4, 4]


def test_klp_and_pro_p_constants():
    D8 = dihedral(8)
    assert pro_p_constants(D8).c == 1 and pro_p_constants(D8).w == 4
    assert pro_p_constants(cyclic(4)).c == 0
    assert pro_p_constants(elementary_abelian(3, 2)).c == 1
    assert klp_obliquity(D8, 1) == 0
    with pytest.raises(ValueError):
        pro_p_constants(S3)


def test_class_membership_examples():
    assert class_membership(cyclic(8), EtaBound.linear(1), 8)
    assert not class_membership(S3, EtaBound.constant(1), 2)
    for G in (S3, Q8, symmetric(4)):
        assert class_membership(G, EtaBound.constant(G.order), G.order)


def test_trichotomy_examples():
    assert trichotomy_check(S3, S3.whole, S3.trivial, A3).as_tuple() == (False, False, True)
    V = elementary_abelian(2, 2)
    for H in (V.trivial, V.whole):
        assert trichotomy_check(V, V.whole, V.trivial, H).abelian_section
    assert trichotomy_check(Q8, Q8.whole, Q8.trivial, I8).contains_double_core


def test_subgroup_inequalities_examples():
    r = theorem_c_check(Q8, I8, 2)
    assert (r.clause_ii.lhs, r.clause_ii.rhs) == (2, 4) and r.clause_ii.holds
    r = theorem_c_check(S3, S3.whole, 3)
    assert r.h == 1 and r.t == 1 and r.clause_ii.lhs == r.clause_ii.rhs
    r = theorem_c_check(S3, A3, 2)
    assert r.clause_i.lhs == Fraction(ob_value(S3, 4).value, 2)
    assert r.clause_ii.holds and r.clause_iii_plain.holds and r.clause_iii_star.holds
