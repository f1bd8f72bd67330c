"""Property suites over the catalog.

Each ``check_*`` function takes one group (or tower) and returns a list of
failure messages; an empty list means the property held.  ``run_suite``
drives them over catalog entries and records the smallest failing
expression as a reproducer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import oracles
from .catalog import entries
from .invariants import (bounded_index_intersection, effective_indices, ob_value, oblique_core,
                         oblique_core_star, phi_height, phi_height_at_most, phi_normal, phi_normal_of,
                         phi_series, simple_product_decomposition, trichotomy_check, x_residual)
from .lattice import all_normal_subgroups, all_subgroups, subgroups_normalized_by
from .permcore.constructions import cyclic, quotient_map
from .permcore.group import DEFAULT_OBSTAR_CAP, FiniteGroup, Subgroup, lift, restrict
from .permcore.structure import _prime_factors, conjugacy_classes, iso_fingerprint
from .towers import (TreeCoordinates, build_cyclic_tower, build_elemab_tower, build_wreath_tower,
                     just_infinite_evidence, kh_profile, level_stabilizer, ob_profile, pullback,
                     rigid_vertex_stabilizer)

SUITES = ("phi", "lattice-oracles", "quotient-monotone", "trichotomy", "squeeze", "towers")


def _as_sets(G: FiniteGroup, subs) -> set[frozenset]:
    E = G.elements_array
    return {frozenset(map(tuple, E[S.mask].tolist())) for S in subs}


def _oracle_sets(T: oracles.TableGroup, subs) -> set[frozenset]:
    return {T.to_set(S) for S in subs}


def _table(G: FiniteGroup) -> oracles.TableGroup:
    return oracles.TableGroup([g.images for g in G.gens], G.degree)


# ---------------------------------------------------------------------------
# normal Frattini subgroup


def check_phi_monotone(G: FiniteGroup) -> list[str]:
    phi = phi_normal(G)
    bad = [f"Phi(H) not inside Phi(G) for normal H of order {H.order}"
           for H in all_normal_subgroups(G).members if not phi_normal_of(G, H) <= phi]
    if not G.order == 1 and phi != phi_normal(G, method="lattice"):
        bad.append("abelian shortcut and lattice disagree on Phi(G)")
    return bad


def check_phi_reset(G: FiniteGroup) -> list[str]:
    phi = phi_normal(G)
    Q = G if phi.is_trivial() else quotient_map(G, phi)[0]
    return [] if phi_normal(Q).is_trivial() else ["Phi(G/Phi(G)) is not trivial"]


def check_decomposition(G: FiniteGroup) -> list[str]:
    dec = simple_product_decomposition(G)
    trivial = phi_normal(G).is_trivial()
    if trivial != (dec is not None):
        return [f"Phi(G) trivial is {trivial} but decomposition {'found' if dec else 'absent'}"]
    if dec:
        if np.prod([S.order for S in dec], dtype=object) != G.order:
            return ["factor orders do not multiply to |G|"]
        for k, S in enumerate(dec):
            rest = G.trivial
            for j, T in enumerate(dec):
                if j != k:
                    rest = G.normal_join(rest, T)
            if not (S & rest).is_trivial() or not S.is_normal():
                return [f"factor {k} is not a direct factor"]
    return []


def check_height_residual(G: FiniteGroup) -> list[str]:
    series = phi_series(G)
    bad = []
    for n in range(phi_height(G) + 2):
        want = series[min(n, len(series) - 1)]
        if x_residual(G, phi_height_at_most(n)) != want:
            bad.append(f"Phi^{n}(G) differs from the residual of the height<={n} class")
    return bad


# ---------------------------------------------------------------------------
# lattice and oracles


def check_normal_oracle(G: FiniteGroup) -> list[str]:
    T = _table(G)
    if _as_sets(G, all_normal_subgroups(G).members) != _oracle_sets(T, oracles.normal_subgroups(T)):
        return ["normal lattice differs from the union-of-classes oracle"]
    return []


def check_lattice_closed(G: FiniteGroup, seed: int = 0, max_pairs: int = 5000) -> list[str]:
    lat = all_normal_subgroups(G)
    ms = lat.members
    pairs = [(a, b) for a in range(len(ms)) for b in range(a + 1, len(ms))]
    if len(pairs) > max_pairs:
        pairs = random.Random(seed).sample(pairs, max_pairs)
    for a, b in pairs:
        A, B = ms[a], ms[b]
        if (A & B) not in lat or G.normal_join(A, B) not in lat:
            return [f"lattice not closed for members of orders {A.order}, {B.order}"]
    if G.trivial not in lat or G.whole not in lat:
        return ["lattice lacks the trivial group or G"]
    return []


def _sample_subgroups(G: FiniteGroup, seed: int, extra: int = 4) -> list[Subgroup]:
    subs = [G.trivial, G.whole] + [G.span([c.rep]) for c in conjugacy_classes(G)]
    allsubs = all_subgroups(G)
    rng = random.Random(seed)
    subs += rng.sample(allsubs, min(extra, len(allsubs)))
    seen, out = set(), []
    for S in subs:
        if S.key not in seen:
            seen.add(S.key)
            out.append(S)
    return out


def check_invariant_oracle(G: FiniteGroup, seed: int = 0) -> list[str]:
    T = _table(G)
    every = oracles.all_subgroups(T)
    if _as_sets(G, all_subgroups(G)) != _oracle_sets(T, every):
        return ["subgroup survey differs from the oracle"]
    bad = []
    for H in _sample_subgroups(G, seed):
        Hset = frozenset(T.pos[tuple(r)] for r in G.elements_array[H.mask].tolist())
        want = _oracle_sets(T, oracles.normalized_by(T, every, Hset))
        if _as_sets(G, subgroups_normalized_by(G, H)) != want:
            bad.append(f"H-invariant survey wrong for H of order {H.order}")
    return bad


def check_ob_oracle(G: FiniteGroup, star: bool = False) -> list[str]:
    T = _table(G)
    normals = oracles.normal_subgroups(T)
    fam = oracles.all_subgroups(T) if star else None
    bad = []
    for n in range(1, G.order + 1):
        got = ob_value(G, n, star).value
        want = oracles.ob_value(T, n, normals, fam)
        if got != want:
            bad.append(f"ob{'*' if star else ''}({n}) = {got}, oracle says {want}")
    return bad


def check_star_methods(G: FiniteGroup, seed: int = 0) -> list[str]:
    bad = []
    for H in _sample_subgroups(G, seed):
        a = oblique_core_star(G, H, method="orbits")
        if a != oblique_core_star(G, H, method="survey"):
            bad.append(f"Ob* shortcut differs from the survey for H of order {H.order}")
        if not a <= oblique_core(G, H) <= H:
            bad.append("core bounds Ob* <= Ob <= H fail")
    return bad


def _is_prime(n: int) -> bool:
    return n > 1 and _prime_factors(n) == [n]


def check_chief_covers(G: FiniteGroup) -> list[str]:
    lat = all_normal_subgroups(G)
    phis: dict[bytes, Subgroup] = {}
    verdicts: dict[tuple, bool] = {}
    bad = []
    for i, j in lat.cover_edges:
        K1, K2 = lat.members[i], lat.members[j]
        if K1.key not in phis:
            phis[K1.key] = phi_normal_of(G, K1)
        if not phis[K1.key] <= K2:
            bad.append(f"Phi(K1) not inside K2 for cover of orders ({K1.order}, {K2.order})")
        if _is_prime(K1.order // K2.order):
            continue  # a group of prime order is simple
        A = K1.as_group()
        Q = A if K2.is_trivial() else quotient_map(A, restrict(K2, A))[0]
        fp = iso_fingerprint(Q)
        # the verdict is a property of the isomorphism type
        if fp not in verdicts:
            dec = simple_product_decomposition(Q)
            verdicts[fp] = dec is not None and len({iso_fingerprint(S.as_group()) for S in dec}) == 1
        if not verdicts[fp]:
            bad.append(f"cover of orders ({K1.order}, {K2.order}) is not a power of one simple group")
    return bad


# ---------------------------------------------------------------------------
# quotients, subgroups, sections


def check_quotient_monotone(G: FiniteGroup, cap: int = DEFAULT_OBSTAR_CAP) -> list[str]:
    """For every normal N and every n <= |G|: images of I_n, OI_n (and OI*_n) land in the quotient's.

    I_n of G and of G/N only change at indices of normal subgroups of G, so
    checking those n covers every n up to |G|.
    """
    ns = effective_indices(G)
    star = G.order <= cap
    bad = []
    for N in all_normal_subgroups(G).members:
        Q, proj = quotient_map(G, N)
        for n in ns:
            rg, rq = ob_value(G, n), ob_value(Q, n)
            if not proj.image_of(rg.I_n) <= rq.I_n:
                bad.append(f"I_{n} image escapes (|N|={N.order})")
            if not proj.image_of(rg.core) <= rq.core:
                bad.append(f"OI_{n} image escapes (|N|={N.order})")
            if star and not proj.image_of(ob_value(G, n, True).core) <= ob_value(Q, n, True).core:
                bad.append(f"OI*_{n} image escapes (|N|={N.order})")
    return bad


def check_squeeze(G: FiniteGroup, max_index: int = 6, n_max: int = 12) -> list[str]:
    """I_n(G) >= I_n(H) >= I_{t n^h}(G) for subgroups H of small index."""
    bad = []
    normals = all_normal_subgroups(G).members
    for H in all_subgroups(G):
        h = H.index
        if h > max_index:
            continue
        core = max((N for N in normals if N <= H), key=lambda N: N.order)
        t = core.index
        K = H.as_group()
        for n in range(1, n_max + 1):
            IH = lift(H, bounded_index_intersection(K, n))
            big = min(t * n ** h, G.order)
            if not (bounded_index_intersection(G, big) <= IH <= bounded_index_intersection(G, n)):
                bad.append(f"squeeze fails for H of index {h}, n={n}")
    return bad


def check_trichotomy(G: FiniteGroup) -> list[str]:
    """Every normal N <= M and every subgroup H satisfy at least one clause.

    Pairs with abelian M/N satisfy clause (i) for every H at once.
    """
    lat = all_normal_subgroups(G)
    subs = all_subgroups(G)
    inv = G.inverse_index
    bad = []
    for M in lat.members:
        for N in lat.members:
            if not N <= M:
                continue
            g = M.gen_idx
            if all(N.mask[G.mul(G.mul(inv[a], inv[b]), G.mul(a, b))[0]] for a in g for b in g):
                continue
            for H in subs:
                if not trichotomy_check(G, M, N, H).any:
                    bad.append(f"no clause holds for |M|={M.order}, |N|={N.order}, |H|={H.order}")
    return bad


# ---------------------------------------------------------------------------
# towers


def check_cyclic_closed_form(p: int, L: int, n_max: int) -> list[str]:
    t = build_cyclic_tower(p, L)
    bad = []
    for n in range(1, n_max + 1):
        prof = ob_profile(t, n)
        k = 0
        while p ** (k + 1) <= n:
            k += 1
        if not prof.stabilized or prof.stable_value != p ** k:
            bad.append(f"cyclictower({p},{L}) n={n}: {prof.per_level}, expected stable {p ** k}")
        if any(a > b for a, b in zip(prof.per_level, prof.per_level[1:])):
            bad.append(f"cyclictower({p},{L}) n={n}: profile not level-monotone")
    return bad


def check_cyclic_kh(p: int, L: int, ks=range(1, 6)) -> list[str]:
    """For H of index p^k in level k, the kh count is k at every level from k on."""
    t = build_cyclic_tower(p, L)
    bad = []
    for k in ks:
        G = t.level(k)
        H = next(M for M in all_normal_subgroups(G).members if M.index == p ** k)
        prof = kh_profile(t, k, H)
        if not prof.stabilized or prof.stable_value != k or any(v != k for v in prof.per_level):
            bad.append(f"cyclictower({p},{L}) kh for index {p}^{k}: {prof.per_level}")
    return bad


def check_pullback_coherence(t, n_values=(1, 2, 3, 4)) -> list[str]:
    bad = []
    for i in range(1, t.depth + 1):
        for j in range(i, t.depth + 1):
            Gi, Gj = t.level(i), t.level(j)
            if not (Gi.is_exhaustive and Gj.is_exhaustive):
                continue
            for n in n_values:
                P = pullback(t, i, bounded_index_intersection(Gi, n), j)
                if P.index != bounded_index_intersection(Gi, n).index:
                    bad.append(f"pullback {i}->{j} changes the index")
                if not bounded_index_intersection(Gj, n) <= P:
                    bad.append(f"I_{n}(level {j}) not inside the pullback from level {i}")
    return bad


def check_wreath_tower(base: FiniteGroup, L: int) -> list[str]:
    t = build_wreath_tower(base, L)
    m = base.degree
    bad = []
    for k, G in enumerate(t.levels, start=1):
        if G.order != base.order ** ((m ** k - 1) // (m - 1)):
            bad.append(f"level {k} has order {G.order}")
    if L >= 2:
        St1 = level_stabilizer(t, 1)
        acc = t.level(L).trivial
        for a in range(m):
            acc = acc.join(rigid_vertex_stabilizer(t, TreeCoordinates(m, (a,), L)))
        if acc.order != St1.order:
            bad.append("depth-1 rigid stabilisers do not fill the level-1 stabiliser")
        R = rigid_vertex_stabilizer(t, TreeCoordinates(m, (0,), L))
        sub = t.level(L - 1)
        if R.order != sub.order:
            bad.append("rigid stabiliser order differs from the shallower level")
        elif sub.is_exhaustive and t.level(L).is_exhaustive:
            if iso_fingerprint(R.as_group()) != iso_fingerprint(sub):
                bad.append("rigid stabiliser fingerprint differs from the shallower level")
    return bad


def check_tower_monotone(t, n_max: int) -> list[str]:
    bad = []
    for n in range(1, n_max + 1):
        for star in (False, True):
            v = ob_profile(t, n, star).per_level
            if any(a > b for a, b in zip(v, v[1:])):
                bad.append(f"ob{'*' if star else ''}({n}) profile not level-monotone: {v}")
    return bad


def check_elemab_nonexample(p: int = 2, L: int = 4) -> list[str]:
    t = build_elemab_tower(p, L)
    ev = just_infinite_evidence(t, 2)
    vals = ev.profiles[1].per_level
    if ev.consistent or vals != [p ** k for k in range(1, L + 1)]:
        return [f"elemabtower({p},{L}) not flagged: {vals}"]
    return []


# ---------------------------------------------------------------------------
# driver


@dataclass
class SuiteResult:
    suite: str
    checked: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def reproducer(self) -> str | None:
        return self.failures[0][0] if self.failures else None


def _over_catalog(result: SuiteResult, max_order: int, checks: list[Callable], min_order: int = 1,
                  log: Callable[[str], None] | None = None):
    for e in entries(max_order, min_order):
        G = e.group
        for chk in checks:
            msgs = chk(G)
            result.checked += 1
            for m in msgs:
                result.failures.append((e.name, m))
            if msgs and log:
                log(f"FAIL {e.name}: {msgs[0]}")
    # smallest failing expression first
    order = {e.name: (e.order, e.name) for e in entries(max_order, min_order)}
    result.failures.sort(key=lambda f: order.get(f[0], (0, f[0])))


def run_suite(name: str, max_order: int = 200, seed: int = 0,
              log: Callable[[str], None] | None = None) -> SuiteResult:
    if name == "all":
        total = SuiteResult("all")
        for s in SUITES:
            r = run_suite(s, max_order, seed, log)
            total.checked += r.checked
            total.failures += r.failures
        return total
    if name not in SUITES:
        raise KeyError(name)
    r = SuiteResult(name)
    if name == "phi":
        _over_catalog(r, max_order, [check_phi_monotone, check_phi_reset, check_decomposition,
                                     check_height_residual, check_chief_covers], log=log)
    elif name == "lattice-oracles":
        _over_catalog(r, min(max_order, 64), [check_normal_oracle, check_lattice_closed, check_ob_oracle], log=log)
        _over_catalog(r, min(max_order, 48), [lambda G: check_invariant_oracle(G, seed),
                                              lambda G: check_star_methods(G, seed)], log=log)
    elif name == "quotient-monotone":
        _over_catalog(r, max_order, [check_quotient_monotone], log=log)
    elif name == "trichotomy":
        _over_catalog(r, min(max_order, DEFAULT_OBSTAR_CAP), [check_trichotomy], log=log)
    elif name == "squeeze":
        _over_catalog(r, min(max_order, DEFAULT_OBSTAR_CAP), [check_squeeze], log=log)
    elif name == "towers":
        jobs = [
            ("cyclictower(2,8)", lambda: check_cyclic_closed_form(2, 8, 64)),
            ("cyclictower(3,5)", lambda: check_cyclic_closed_form(3, 5, 81)),
            ("cyclictower(2,7)", lambda: check_cyclic_kh(2, 7)),
            ("cyclictower(3,6)", lambda: check_cyclic_kh(3, 6)),
            ("cyclictower(2,5)", lambda: check_pullback_coherence(build_cyclic_tower(2, 5))),
            ("wreathtower(cyclic(2),4)", lambda: check_wreath_tower(cyclic(2), 4)),
            ("wreathtower(cyclic(2),3)", lambda: check_tower_monotone(build_wreath_tower(cyclic(2), 3), 8)),
            ("wreathtower(cyclic(3),2)", lambda: check_wreath_tower(cyclic(3), 2)),
            ("elemabtower(2,4)", lambda: check_elemab_nonexample(2, 4)),
        ]
        for expr, job in jobs:
            msgs = job()
            r.checked += 1
            r.failures += [(expr, m) for m in msgs]
            if msgs and log:
                log(f"FAIL {expr}: {msgs[0]}")
    return r
