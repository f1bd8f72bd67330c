"""Property-based checks over random permutations, random groups and random expressions."""

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from obliquity import oracles
from obliquity.catalog import entries
from obliquity.dsl import Ast, evaluate, parse, print_ast
from obliquity.invariants import (bounded_index_intersection, ob_value, oblique_core, oblique_core_star,
                                  phi_normal, simple_product_decomposition)
from obliquity.lattice import all_normal_subgroups, all_subgroups
from obliquity.permcore.constructions import quotient_map
from obliquity.permcore.group import generate
from obliquity.permcore.perm import Permutation
from obliquity.permcore.structure import conjugacy_classes, iso_fingerprint
from obliquity.verify import _as_sets, _oracle_sets, _table

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def perms(degree):
    return st.permutations(range(degree)).map(lambda p: Permutation(tuple(p)))


@st.composite
def perm_triples(draw):
    d = draw(st.integers(1, 9))
    return draw(perms(d)), draw(perms(d)), draw(perms(d))


@st.composite
def small_groups(draw, max_order=120):
    d = draw(st.integers(2, 6))
    gens = draw(st.lists(perms(d), min_size=1, max_size=3))
    G = generate(gens)
    assume(G.order <= max_order)
    return G


catalog_small = st.sampled_from([e.name for e in entries(48)])


@st.composite
def group_with_subgroup(draw):
    G = evaluate(parse(draw(catalog_small)))
    subs = all_subgroups(G)
    return G, subs[draw(st.integers(0, len(subs) - 1))]


# --- permutations -----------------------------------------------------------


@given(perm_triples())
def test_group_axioms(t):
    a, b, c = t
    e = Permutation.identity(a.degree)
    assert (a * b) * c == a * (b * c)
    assert a * e == a == e * a
    assert a * a.inverse() == e
    assert all((a * b)(i) == b(a(i)) for i in range(a.degree))


@given(perm_triples())
def test_cycle_notation_round_trip(t):
    a = t[0]
    assert Permutation.from_cycles(str(a), a.degree) == a
    assert a ** a.order() == Permutation.identity(a.degree)


# --- groups -----------------------------------------------------------------


@SETTINGS
@given(small_groups(720))
def test_engines_agree(G):
    assert generate(G.gens, "stabchain").order == G.order == len(G.elements_array)


@SETTINGS
@given(small_groups())
def test_class_sizes(G):
    sizes = [c.size for c in conjugacy_classes(G)]
    assert sum(sizes) == G.order and all(G.order % s == 0 for s in sizes)


@SETTINGS
@given(small_groups(), st.data())
def test_quotient_law(G, data):
    lat = all_normal_subgroups(G).members
    N = lat[data.draw(st.integers(0, len(lat) - 1))]
    Q, proj = quotient_map(G, N)
    assert G.order == Q.order * N.order
    assert proj.image_of(N).is_trivial() and proj.image.is_whole()


@SETTINGS
@given(small_groups(60))
def test_normal_lattice_matches_oracle(G):
    T = _table(G)
    assert _as_sets(G, all_normal_subgroups(G).members) == _oracle_sets(T, oracles.normal_subgroups(T))


@SETTINGS
@given(small_groups())
def test_phi_trivial_iff_decomposable(G):
    assert phi_normal(G).is_trivial() == (simple_product_decomposition(G) is not None)


# --- cores and bounded-index intersections ------------------------------------


@SETTINGS
@given(group_with_subgroup())
def test_core_bounds(GH):
    G, H = GH
    star, plain = oblique_core_star(G, H), oblique_core(G, H)
    assert star <= plain <= H


@SETTINGS
@given(group_with_subgroup(), st.data())
def test_cores_are_monotone(GH, data):
    G, H2 = GH
    subs = [S for S in all_subgroups(G) if S <= H2]
    H1 = subs[data.draw(st.integers(0, len(subs) - 1))]
    assert oblique_core(G, H1) <= oblique_core(G, H2)
    assert oblique_core_star(G, H1) <= oblique_core_star(G, H2)


@SETTINGS
@given(catalog_small, st.integers(1, 48), st.integers(1, 48))
def test_bounded_index_antitone(name, m, n):
    G = evaluate(parse(name))
    m, n = min(m, n), max(m, n)
    assert bounded_index_intersection(G, n) <= bounded_index_intersection(G, m)
    assert ob_value(G, m).value <= ob_value(G, n).value
    assert ob_value(G, m, True).value <= ob_value(G, n, True).value


# --- expressions ----------------------------------------------------------------

_leaf = st.one_of(
    st.integers(1, 7).map(lambda n: Ast("cyclic", (n,))),
    st.integers(1, 4).map(lambda n: Ast("sym", (n,))),
    st.integers(1, 5).map(lambda n: Ast("alt", (n,))),
    st.integers(2, 6).map(lambda k: Ast("dihedral", (2 * k,))),
    st.sampled_from([8, 16]).map(lambda n: Ast("quaternion", (n,))),
    st.tuples(st.sampled_from([2, 3]), st.integers(1, 3)).map(lambda a: Ast("elemab", a)),
)
_groups = st.recursive(_leaf, lambda kid: st.tuples(st.sampled_from(["prod", "wr"]), kid, kid).map(
    lambda t: Ast(t[0], (), (t[1], t[2]))), max_leaves=4)
_towers = st.recursive(
    st.one_of(st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, 9)).map(lambda a: Ast("cyclictower", a)),
              st.tuples(_groups, st.integers(1, 5)).map(lambda t: Ast("wreathtower", (t[1],), (t[0],)))),
    lambda kid: st.tuples(kid, kid).map(lambda t: Ast("prodtower", (), t)), max_leaves=3)


@given(st.one_of(_groups, _towers))
def test_parse_print_round_trip(a):
    assert parse(print_ast(a)) == a


@given(st.one_of(_groups, _towers), st.randoms())
def test_whitespace_is_ignored(a, rnd):
    text = print_ast(a)
    # whitespace may sit between tokens, never inside a name or number
    spaced = "".join(ch + " " * rnd.randint(0, 2) if ch in "()," else ch for ch in text)
    assert parse(spaced) == a


@SETTINGS
@given(_leaf, _leaf)
def test_equal_spellings_give_equal_fingerprints(a, b):
    x = Ast("prod", (), (a, b))
    G1 = evaluate(parse(print_ast(x)))
    G2 = evaluate(parse(" " + print_ast(x).replace(",", " , ")))
    assert G1 is G2
    assert iso_fingerprint(G1) == iso_fingerprint(evaluate(Ast("prod", (), (a, b))))
    assert np.array_equal(G1.elements_array, G2.elements_array)
