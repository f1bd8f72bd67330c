"""Invariants of a single finite group built on its normal lattice.

Covers the normal Frattini subgroup and its height, class residuals and
radicals, bounded-index intersections, oblique cores and the ob-functions,
lower-central obliquity, the p-group constants (c, w) and the three-way
check on normal sections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Callable

import numpy as np

from .lattice import all_normal_subgroups, is_subnormal, minimal_normal_subgroups, subgroups_normalized_by, all_subgroups
from .permcore.constructions import quotient_map
from .permcore.group import DEFAULT_OBSTAR_CAP, FiniteGroup, NotNormalError, ResourceError, Subgroup, lift
from .permcore.structure import (_orbits, _prime_factors, derived_length, is_abelian, iso_fingerprint,
                                 lower_central_series, section_centralizer, element_orders)


# ---------------------------------------------------------------------------
# class predicates


_VERDICTS: dict[tuple, bool] = {}


@dataclass(frozen=True)
class ClassPredicate:
    """A class of finite groups, given by a decision procedure.

    With ``by_fingerprint`` the verdict is memoised on :func:`iso_fingerprint`,
    so groups with equal fingerprints always get equal verdicts.
    """

    name: str
    test: Callable[[FiniteGroup], bool]
    quotient_closed: bool = False
    subgroup_closed: bool = False
    by_fingerprint: bool = True

    def __call__(self, G: FiniteGroup) -> bool:
        if not self.by_fingerprint:
            return bool(self.test(G))
        key = (self.name, iso_fingerprint(G))
        if key not in _VERDICTS:
            _VERDICTS[key] = bool(self.test(G))
        return _VERDICTS[key]


def _is_prime_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _is_simple(G: FiniteGroup) -> bool:
    if G.order == 1:
        return False
    if is_abelian(G):
        return len(_prime_factors(G.order)) == 1 and G.order == _prime_factors(G.order)[0]
    return len(all_normal_subgroups(G)) == 2


ABELIAN = ClassPredicate("abelian", is_abelian, True, True)
NILPOTENT = ClassPredicate("nilpotent", lambda G: lower_central_series(G)[-1].is_trivial(), True, True)
SOLUBLE = ClassPredicate("soluble", lambda G: derived_length(G) >= 0, True, True)
SIMPLE = ClassPredicate("simple", _is_simple)
ALL_GROUPS = ClassPredicate("all", lambda G: True, True, True)


def elementary_abelian_class(p: int) -> ClassPredicate:
    def test(G):
        return is_abelian(G) and bool(np.all(p % element_orders(G) == 0))
    return ClassPredicate(f"elementary-abelian-{p}", test, True, True)


def p_group_class(p: int) -> ClassPredicate:
    return ClassPredicate(f"{p}-group", lambda G: _is_prime_power_of(G.order, p), True, True)


def phi_height_at_most(n: int) -> ClassPredicate:
    # Phi(G/N) is the image of Phi(G), so heights cannot grow in quotients
    return ClassPredicate(f"phi-height<={n}", lambda G: phi_height(G) <= n, quotient_closed=True)


def fingerprint_class(name: str, fingerprints) -> ClassPredicate:
    allowed = frozenset(fingerprints)
    return ClassPredicate(f"fingerprints:{name}", lambda G: iso_fingerprint(G) in allowed)


# ---------------------------------------------------------------------------
# normal Frattini subgroup


def _subgroup_is_abelian(S: Subgroup) -> bool:
    G = S.ambient
    g = S.gen_idx
    if len(g) < 2:
        return True
    a = np.repeat(g, len(g))
    b = np.tile(g, len(g))
    return bool((G.mul(a, b) == G.mul(b, a)).all())


def _abelian_phi(S: Subgroup) -> Subgroup:
    # an abelian group's simple quotients have prime order, so the
    # intersection of their kernels is the set of r-th powers, r = rad|S|
    G = S.ambient
    r = prod(_prime_factors(S.order)) if S.order > 1 else 1
    mask = np.zeros(G.order, dtype=bool)
    mask[G.power_index(r)[S.mask]] = True
    return G.subgroup_from_mask(mask)


def phi_normal(G: FiniteGroup, method: str = "auto") -> Subgroup:
    """Intersection of all maximal normal subgroups (G itself when |G| = 1).

    ``method="lattice"`` always intersects the maximal members of the normal
    lattice; ``"auto"`` takes the power-map shortcut for abelian groups.
    """
    G.require_exhaustive("normal Frattini subgroup")
    if G.order == 1:
        return G.whole
    if method == "auto" and is_abelian(G):
        return _abelian_phi(G.whole)
    if method not in ("auto", "lattice"):
        raise ValueError(f"unknown method {method!r}")
    lat = all_normal_subgroups(G)
    top = lat.position(G.whole)
    rows = [lat.members[j].mask for i, j in lat.cover_edges if i == top]
    return G.subgroup_from_mask(np.logical_and.reduce(rows))


def phi_normal_of(G: FiniteGroup, S: Subgroup) -> Subgroup:
    """Normal Frattini subgroup of S, as a subgroup of G."""
    if S.is_whole():
        return phi_normal(G)
    if S.order == 1:
        return S
    if _subgroup_is_abelian(S):
        return _abelian_phi(S)
    return lift(S, phi_normal(S.as_group()))


def phi_series(G: FiniteGroup) -> list[Subgroup]:
    """G, Phi(G), Phi(Phi(G)), ... down to the trivial subgroup."""
    if "phi_series" not in G.cache:
        series = [G.whole]
        while not series[-1].is_trivial():
            series.append(phi_normal_of(G, series[-1]))
        G.cache["phi_series"] = series
    return G.cache["phi_series"]


def phi_height(G: FiniteGroup) -> int:
    return len(phi_series(G)) - 1


def simple_product_decomposition(G: FiniteGroup) -> list[Subgroup] | None:
    """Simple subgroups whose internal direct product is G, or None.

    Greedy over the minimal normal subgroups: keep each one meeting the
    product so far trivially.
    """
    G.require_exhaustive("direct decomposition")
    if G.order == 1:
        return []
    factors: list[Subgroup] = []
    acc = G.trivial
    for S in minimal_normal_subgroups(G):
        if (S & acc).is_trivial():
            factors.append(S)
            acc = G.normal_join(acc, S)
        if acc.is_whole():
            break
    if not acc.is_whole():
        return None
    if not all(SIMPLE(S.as_group()) for S in factors):
        return None
    return factors


# ---------------------------------------------------------------------------
# residuals and radicals


def x_residual(G: FiniteGroup, X: ClassPredicate, use_closure: bool = True) -> Subgroup:
    """Intersection of the normal N with G/N in X (G when there are none).

    For a quotient-closed X the qualifying N form an up-set, so the walk
    starts at G and only descends through qualifying members.  Otherwise
    members are scanned smallest first, skipping any N that already
    contains the running intersection.
    """
    G.require_exhaustive("class residual")
    lat = all_normal_subgroups(G)

    def qualifies(N: Subgroup) -> bool:
        return X(G if N.is_trivial() else quotient_map(G, N)[0])

    acc = G.whole
    if use_closure and X.quotient_closed:
        if X(G):
            return G.trivial
        below: dict[int, list[int]] = {}
        for i, j in lat.cover_edges:
            below.setdefault(i, []).append(j)
        stack, seen = [lat.position(G.whole)], set()
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            N = lat.members[i]
            if N.is_trivial() or not qualifies(N):
                continue
            acc = acc & N
            stack.extend(below.get(i, []))
        return acc
    for N in lat.members:
        if acc <= N:
            continue
        if qualifies(N):
            acc = acc & N
    return acc


def x_radical(G: FiniteGroup, X: ClassPredicate, cap: int = DEFAULT_OBSTAR_CAP) -> Subgroup:
    """Join of all subnormal subgroups lying in X (survey of every subgroup)."""
    subs = all_subgroups(G, cap)
    acc = G.trivial
    for S in reversed(subs):
        if S <= acc:
            continue
        if is_subnormal(G, S) is not None and X(S.as_group()):
            acc = acc.join(S)
    return acc


def largest_normal_p_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    best = G.trivial
    for N in all_normal_subgroups(G).members:
        if _is_prime_power_of(N.order, p) and N.order > best.order:
            best = N
    return best


def fitting_subgroup(G: FiniteGroup) -> Subgroup:
    """Product of the largest normal p-subgroups over the primes dividing |G|."""
    acc = G.trivial
    for p in _prime_factors(G.order):
        acc = G.normal_join(acc, largest_normal_p_subgroup(G, p))
    return acc


# ---------------------------------------------------------------------------
# bounded-index intersections and oblique cores


def bounded_index_intersection(G: FiniteGroup, n: int) -> Subgroup:
    """Intersection of the normal subgroups of index at most n."""
    if n < 1:
        raise ValueError("n must be positive")
    G.require_exhaustive("bounded-index intersection")
    lat = all_normal_subgroups(G)
    keep = lat.indices <= n
    cache = G.cache.setdefault("bounded_index", {})
    # the result depends only on which members qualify
    k = int(keep.sum())
    if k not in cache:
        cache[k] = G.subgroup_from_mask(lat.matrix[keep].all(axis=0))
    return cache[k]


def effective_indices(G: FiniteGroup) -> list[int]:
    """The distinct indices of normal subgroups; I_n only changes at these n."""
    return sorted(set(all_normal_subgroups(G).indices.tolist()))


def oblique_core(G: FiniteGroup, H: Subgroup) -> Subgroup:
    """H intersected with every normal subgroup not contained in H."""
    G.require_exhaustive("oblique core")
    M = all_normal_subgroups(G).matrix
    outside = (M & ~H.mask).any(axis=1)
    core = H.mask & M[outside].all(axis=0) if outside.any() else H.mask
    return G.subgroup_from_mask(core)


def oblique_core_star(G: FiniteGroup, H: Subgroup, cap: int | None = DEFAULT_OBSTAR_CAP,
                      method: str = "orbits") -> Subgroup:
    """H intersected with every H-invariant subgroup not contained in H.

    The family's minimal members are the subgroups generated by single
    H-conjugacy orbits outside H, which ``method="orbits"`` intersects
    directly.  ``method="survey"`` enumerates the whole family instead.
    """
    G.require_exhaustive("strong oblique core")
    if cap is not None and G.order > cap:
        raise ResourceError(f"strong oblique core needs |G| <= {cap} (got {G.order})")
    if method == "survey":
        core = H.mask.copy()
        for K in subgroups_normalized_by(G, H, cap if cap is not None else G.order):
            if not K <= H:
                core &= K.mask
        return G.subgroup_from_mask(core)
    if method != "orbits":
        raise ValueError(f"unknown method {method!r}")
    labels = _orbits(G, H.gen_idx)
    core = H.mask.copy()
    done = set()
    for x in np.flatnonzero(~H.mask):
        lab = int(labels[x])
        if lab in done:
            continue
        done.add(lab)
        core &= G.span(np.flatnonzero(labels == lab)).mask
    return G.subgroup_from_mask(core)


@dataclass
class ObReport:
    n: int
    I_n: Subgroup
    core: Subgroup
    value: int
    star: bool = False


def ob_value(G: FiniteGroup, n: int, star: bool = False, cap: int | None = DEFAULT_OBSTAR_CAP) -> ObReport:
    """ob_G(n) = |G : Ob_G(I_n(G))|, or the starred variant."""
    I = bounded_index_intersection(G, n)
    cache = G.cache.setdefault("ob_core", {})
    key = (star, I.key)
    if key not in cache:
        cache[key] = oblique_core_star(G, I, cap) if star else oblique_core(G, I)
    core = cache[key]
    return ObReport(n=n, I_n=I, core=core, value=core.index, star=star)


def ob_table(G: FiniteGroup, n_max: int, star: bool = False, cap: int | None = DEFAULT_OBSTAR_CAP) -> list[int]:
    """[ob(1), ..., ob(n_max)]."""
    return [ob_value(G, n, star, cap).value for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# p-groups


def _prime_of_p_group(G: FiniteGroup) -> int:
    ps = _prime_factors(G.order)
    if len(ps) > 1:
        raise ValueError(f"group of order {G.order} is not a p-group")
    return ps[0] if ps else 2


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def klp_obliquity(G: FiniteGroup, i: int) -> int:
    """log_p |gamma_{i+1} : Ob_G(gamma_{i+1})| for a p-group G."""
    if i < 1:
        raise ValueError("i must be positive")
    p = _prime_of_p_group(G)
    lcs = lower_central_series(G)
    gamma = lcs[i] if i < len(lcs) else G.trivial
    return _log(gamma.order // oblique_core(G, gamma).order, p)


def obliquity(G: FiniteGroup) -> int:
    """Maximum of klp_obliquity over the nontrivial terms of the lower central series."""
    lcs = lower_central_series(G)
    return max([klp_obliquity(G, i) for i in range(1, len(lcs) + 1)], default=0)


@dataclass(frozen=True)
class ProPConstants:
    p: int
    c: int
    w: int


def pro_p_constants(G: FiniteGroup) -> ProPConstants:
    """c = max log_p |N : N cap M| over normal N, M with M not inside N; w = largest lower-central step."""
    p = _prime_of_p_group(G)
    A = all_normal_subgroups(G).matrix.astype(np.float32)
    inter = np.rint(A @ A.T).astype(np.int64)
    orders = np.diag(inter)
    # row N, column M
    valid = inter < orders[None, :]
    ratio = np.where(valid, orders[:, None] // np.maximum(inter, 1), 1)
    c = _log(int(ratio.max()), p)
    lcs = lower_central_series(G)
    steps = [a.order // b.order for a, b in zip(lcs, lcs[1:])]
    return ProPConstants(p=p, c=c, w=max(steps, default=1))


# ---------------------------------------------------------------------------
# growth classes


@dataclass
class EtaBound:
    """A bound eta(n): explicit values first, then ``default_rule``."""

    values: dict[int, int] = field(default_factory=dict)
    default_rule: Callable[[int], int] | None = None

    def __call__(self, n: int) -> int:
        if n in self.values:
            v = self.values[n]
        elif self.default_rule is not None:
            v = self.default_rule(n)
        else:
            raise KeyError(f"eta is undefined at n={n}")
        if v <= 0:
            raise ValueError(f"eta({n}) = {v} is not positive")
        return v

    @classmethod
    def linear(cls, k: int) -> EtaBound:
        return cls(default_rule=lambda n: k * n)

    @classmethod
    def constant(cls, c: int) -> EtaBound:
        return cls(default_rule=lambda n: c)


def class_membership(G: FiniteGroup, eta: EtaBound, n_max: int, star: bool = False) -> bool:
    return all(ob_value(G, n, star).value <= eta(n) for n in range(1, n_max + 1))


# ---------------------------------------------------------------------------
# normal sections


@dataclass(frozen=True)
class TrichotomyVerdict:
    abelian_section: bool
    h_contains_section: bool
    contains_double_core: bool

    @property
    def any(self) -> bool:
        return self.abelian_section or self.h_contains_section or self.contains_double_core

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return (self.abelian_section, self.h_contains_section, self.contains_double_core)


def trichotomy_check(G: FiniteGroup, M: Subgroup, N: Subgroup, H: Subgroup) -> TrichotomyVerdict:
    """Evaluate the three alternatives for normal N <= M and a subgroup H.

    (i) M/N is abelian; (ii) H contains M and C_G(M/N); (iii) M contains
    Ob_G(Ob_G(H)).
    """
    if not N <= M:
        raise ValueError("need N <= M")
    if not (M.is_normal() and N.is_normal()):
        raise NotNormalError("M and N must be normal in G")
    g = M.gen_idx
    inv = G.inverse_index
    abelian = True
    for a in g:
        for b in g:
            c = G.mul(G.mul(inv[a], inv[b]), G.mul(a, b))[0]
            if not N.mask[c]:
                abelian = False
                break
        if not abelian:
            break
    contains = M <= H and section_centralizer(G, M, N) <= H
    double = oblique_core(G, oblique_core(G, H)) <= M
    return TrichotomyVerdict(abelian, contains, double)
