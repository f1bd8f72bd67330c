import pytest

from obliquity import oracles
from obliquity.lattice import (all_normal_subgroups, all_subgroups, chief_covers, is_subnormal,
                               maximal_normal_subgroups, minimal_normal_subgroups, normal_subgroups_up_to_index,
                               overgroups, subgroups_normalized_by)
from obliquity.permcore.constructions import alternating, cyclic, quaternion, symmetric
from obliquity.permcore.group import ResourceError
from obliquity.permcore.perm import Permutation
from obliquity.verify import _as_sets, _oracle_sets, _table

P = Permutation.from_cycles


def orders(subs):
    return sorted(S.order for S in subs)


def test_normal_lattice_examples():
    assert orders(all_normal_subgroups(symmetric(3)).members) == [1, 3, 6]
    assert orders(all_normal_subgroups(quaternion(8)).members) == [1, 2, 4, 4, 4, 8]
    assert orders(all_normal_subgroups(alternating(5)).members) == [1, 60]


def test_members_sorted_and_bounded():
    lat = all_normal_subgroups(symmetric(4))
    assert orders(lat.members) == [S.order for S in lat.members]
    assert lat.members[0].is_trivial() and lat.members[-1].is_whole()
    assert lat.matrix.shape == (len(lat.members), 24)


def test_maximal_normals():
    assert orders(maximal_normal_subgroups(symmetric(3))) == [3]
    assert orders(maximal_normal_subgroups(quaternion(8))) == [4, 4, 4]
    assert orders(maximal_normal_subgroups(cyclic(7))) == [1]


def test_bounded_index_filter():
    assert orders(normal_subgroups_up_to_index(symmetric(3), 2)) == [3, 6]
    assert orders(normal_subgroups_up_to_index(symmetric(4), 1)) == [24]
    assert orders(normal_subgroups_up_to_index(quaternion(8), 4)) == [2, 4, 4, 4, 8]


def test_invariant_subgroups():
    S3 = symmetric(3)
    A3 = next(N for N in all_normal_subgroups(S3).members if N.order == 3)
    assert orders(subgroups_normalized_by(S3, A3)) == [1, 3, 6]
    assert len(subgroups_normalized_by(S3, S3.trivial)) == len(all_subgroups(S3)) == 6
    Q8 = quaternion(8)
    i = Q8.subgroup([Q8.gens[0]])
    assert orders(subgroups_normalized_by(Q8, i)) == [1, 2, 4, 4, 4, 8]
    with pytest.raises(ResourceError):
        subgroups_normalized_by(symmetric(7), symmetric(7).trivial)


def test_chief_covers_examples():
    C6 = cyclic(6)
    assert sorted((a.order, b.order) for a, b in chief_covers(C6)) == [(2, 1), (3, 1), (6, 2), (6, 3)]
    A5 = alternating(5)
    assert [(a.order, b.order) for a, b in chief_covers(A5)] == [(60, 1)]
    assert sorted((a.order, b.order) for a, b in chief_covers(symmetric(3))) == [(3, 1), (6, 3)]


def test_minimal_normals():
    assert orders(minimal_normal_subgroups(cyclic(6))) == [2, 3]
    assert orders(minimal_normal_subgroups(symmetric(4))) == [4]


def test_subnormal_defect():
    S4 = symmetric(4)
    assert is_subnormal(S4, S4.whole) == 0
    V = next(N for N in all_normal_subgroups(S4).members if N.order == 4)
    assert is_subnormal(S4, V) == 1
    assert is_subnormal(S4, S4.subgroup([P("(0 1)(2 3)", 4)])) == 2
    S3 = symmetric(3)
    assert is_subnormal(S3, S3.subgroup([P("(0 1)", 3)])) is None


def test_overgroups():
    S3 = symmetric(3)
    assert orders(overgroups(S3, S3.trivial)) == [1, 2, 2, 2, 3, 6]
    assert orders(overgroups(S3, S3.whole)) == [6]


@pytest.mark.parametrize("G", [symmetric(4), quaternion(8), cyclic(12)], ids=["S4", "Q8", "C12"])
def test_subgroups_match_oracle(G):
    T = _table(G)
    assert _as_sets(G, all_subgroups(G)) == _oracle_sets(T, oracles.all_subgroups(T))
    assert _as_sets(G, all_normal_subgroups(G).members) == _oracle_sets(T, oracles.normal_subgroups(T))
