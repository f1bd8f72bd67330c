"""Towers of finite groups with surjective connecting maps.

A tower ``G_1 <- G_2 <- ... <- G_L`` stands in for the profinite group that
is its inverse limit.  Everything reported here is per level, together with
the depth it was computed to; a value that agrees on the last ``window``
levels is called stabilised, which is evidence and nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .invariants import bounded_index_intersection, ob_value
from .lattice import all_normal_subgroups, overgroups
from .permcore.constructions import (_shift, cyclic, direct_product, elementary_abelian, is_transitive,
                                     wreath_product)
from .permcore.group import (DEFAULT_EXHAUSTIVE_ORDER, DEFAULT_OBSTAR_CAP, FiniteGroup, ResourceError,
                             Subgroup)
from .permcore.homomorphism import Homomorphism
from .permcore.perm import Permutation
from .permcore.structure import _prime_factors


def _is_prime(p: int) -> bool:
    return p >= 2 and _prime_factors(p) == [p]


@dataclass
class Tower:
    """``levels[k]`` is level k+1; ``maps[k]`` goes from ``levels[k+1]`` onto ``levels[k]``."""

    levels: list[FiniteGroup]
    maps: list[Homomorphism]
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.levels:
            raise ValueError("a tower needs at least one level")
        if len(self.maps) != len(self.levels) - 1:
            raise ValueError("need one connecting map per consecutive pair of levels")
        for k, f in enumerate(self.maps):
            if f.domain is not self.levels[k + 1] or f.codomain is not self.levels[k]:
                raise ValueError(f"map {k} does not connect levels {k + 2} -> {k + 1}")
            if not f.surjective:
                raise ValueError(f"connecting map onto level {k + 1} is not surjective")
            if self.levels[k + 1].order <= self.levels[k].order:
                raise ValueError(f"connecting map onto level {k + 1} has trivial kernel")
        self._composites: dict[tuple[int, int], Homomorphism] = {}

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> FiniteGroup:
        """Level k, counted from 1."""
        if not 1 <= k <= self.depth:
            raise IndexError(f"level {k} outside 1..{self.depth}")
        return self.levels[k - 1]

    def orders(self) -> list[int]:
        return [G.order for G in self.levels]

    def composite(self, i: int, j: int) -> Homomorphism:
        """The map from level j down to level i (i <= j)."""
        if not 1 <= i <= j <= self.depth:
            raise IndexError(f"need 1 <= i <= j <= {self.depth}, got ({i}, {j})")
        if i == j:
            G = self.level(i)
            return Homomorphism(G, G, list(G.gens), trusted=True)
        if (i, j) not in self._composites:
            f = self.maps[j - 2]
            if j - 1 > i:
                f = f.compose(self.composite(i, j - 1))
            self._composites[(i, j)] = f
        return self._composites[(i, j)]


# ---------------------------------------------------------------------------
# builders


def build_cyclic_tower(p: int, L: int) -> Tower:
    """C_p <- C_{p^2} <- ... <- C_{p^L} with reduction maps."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if L < 1:
        raise ValueError("depth must be >= 1")
    levels = [cyclic(p ** k) for k in range(1, L + 1)]
    maps = [Homomorphism(levels[k + 1], levels[k], [levels[k].gens[0]]) for k in range(L - 1)]
    return Tower(levels, maps, kind="cyclic", params={"p": p})


def build_elemab_tower(p: int, L: int) -> Tower:
    """C_p <- C_p^2 <- ... with maps forgetting the last coordinate."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if L < 1:
        raise ValueError("depth must be >= 1")
    levels = [elementary_abelian(p, k) for k in range(1, L + 1)]
    maps = []
    for k in range(L - 1):
        low = levels[k]
        imgs = list(low.gens) + [low.identity()]
        maps.append(Homomorphism(levels[k + 1], low, imgs))
    return Tower(levels, maps, kind="elemab", params={"p": p})


def _truncate(g: Permutation, m: int) -> Permutation:
    # leaf v of the shallower tree has children v*m .. v*m+m-1
    return Permutation(tuple(g(v * m) // m for v in range(g.degree // m)))


def build_wreath_tower(P: FiniteGroup, L: int, *, max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER) -> Tower:
    """Iterated wreath products of P acting on the leaves of the m-ary tree.

    Level k acts on m**k leaves; leaf ``j * m**(k-1) + i`` is leaf i below
    the root's child j.  The connecting maps forget the deepest layer.
    """
    m = P.degree
    if m < 2 or not is_transitive(P):
        raise ValueError("the wreath tower needs a transitive group of degree >= 2")
    if L < 1:
        raise ValueError("depth must be >= 1")
    levels = [P]
    maps = []
    for _ in range(L - 1):
        nxt = wreath_product(levels[-1], P, max_exhaustive=max_exhaustive)
        imgs = [_truncate(g, m) for g in nxt.gens]
        maps.append(Homomorphism(nxt, levels[-1], imgs, trusted=True))
        levels.append(nxt)
    return Tower(levels, maps, kind="wreath", params={"base": P, "arity": m})


def product_tower(t1: Tower, t2: Tower) -> Tower:
    """Levelwise direct products, truncated to the shorter depth."""
    L = min(t1.depth, t2.depth)
    levels = [direct_product(t1.levels[k], t2.levels[k]) for k in range(L)]
    maps = []
    for k in range(L - 1):
        low = levels[k]
        a, b = t1.levels[k], t2.levels[k]
        imgs = [_shift(x, 0, low.degree) for x in t1.maps[k].images]
        imgs += [_shift(x, a.degree, low.degree) for x in t2.maps[k].images]
        maps.append(Homomorphism(levels[k + 1], low, imgs, trusted=True))
    return Tower(levels, maps, kind="product", params={"left": t1.kind, "right": t2.kind})


def custom_tower(levels: list[FiniteGroup], images: list[list[Permutation]]) -> Tower:
    """Tower from explicit groups; ``images[k]`` are the images of level k+2's generators in level k+1."""
    maps = [Homomorphism(levels[k + 1], levels[k], images[k]) for k in range(len(levels) - 1)]
    return Tower(levels, maps, kind="custom")


# ---------------------------------------------------------------------------
# subgroups along the tower


def pullback(t: Tower, i: int, S: Subgroup, j: int) -> Subgroup:
    """Preimage in level j of a subgroup S of level i."""
    if S.ambient is not t.level(i):
        raise ValueError("S must be a subgroup of level i")
    return t.composite(i, j).preimage(S)


def _require_wreath(t: Tower):
    if t.kind != "wreath":
        raise ValueError(f"needs a wreath tower, got kind {t.kind!r}")


def level_stabilizer(t: Tower, k: int, L: int | None = None) -> Subgroup:
    """Elements of level L fixing every vertex of depth k."""
    _require_wreath(t)
    L = t.depth if L is None else L
    if not 0 <= k <= L <= t.depth:
        raise IndexError(f"need 0 <= k <= L <= {t.depth}")
    G = t.level(L)
    if k == 0:
        return G.whole
    if k == L:
        return G.trivial
    return t.composite(k, L).kernel


@dataclass(frozen=True)
class TreeCoordinates:
    """A vertex of the m-ary tree, as the word of child indices from the root."""

    arity: int
    vertex: tuple[int, ...]
    depth: int

    def __post_init__(self):
        if self.arity < 2:
            raise ValueError("arity must be >= 2")
        if len(self.vertex) > self.depth:
            raise ValueError("vertex is deeper than the tree")
        if any(not 0 <= a < self.arity for a in self.vertex):
            raise ValueError("vertex letters must lie in 0..arity-1")

    @property
    def norm(self) -> int:
        return len(self.vertex)

    @property
    def index(self) -> int:
        """Position among the vertices of the same depth."""
        v = 0
        for a in self.vertex:
            v = v * self.arity + a
        return v


def rigid_vertex_stabilizer(t: Tower, v: TreeCoordinates, L: int | None = None) -> Subgroup:
    """Elements of level L supported on the subtree below v."""
    _require_wreath(t)
    L = t.depth if L is None else L
    m = t.params["arity"]
    if v.arity != m:
        raise ValueError(f"vertex arity {v.arity} does not match the tower arity {m}")
    if not v.norm < L <= t.depth:
        raise IndexError(f"need |v| < L <= {t.depth}")
    G = t.level(L)
    sub = t.level(L - v.norm)
    offset = v.index * sub.degree
    return G.subgroup([_shift(g, offset, G.degree) for g in sub.gens])


# ---------------------------------------------------------------------------
# profiles


@dataclass
class Profile:
    quantity: str
    n: object
    per_level: list[int]
    stabilized: bool
    stable_value: int | None
    computed_depth: int
    truncated: bool = False
    window: int = 2
    first_level: int = 1

    def as_dict(self) -> dict:
        return {"quantity": self.quantity, "n": self.n, "levels": list(self.per_level),
                "stabilized": self.stabilized, "stable": self.stable_value,
                "computed_depth": self.computed_depth, "truncated": self.truncated}


def _stabilization(values: list[int], window: int) -> tuple[bool, int | None]:
    if window < 1:
        raise ValueError("window must be >= 1")
    if len(values) >= max(window, 2) and len(set(values[-window:])) == 1:
        return True, values[-1]
    return False, None


def _usable(G: FiniteGroup, max_exhaustive: int, cap: int | None) -> bool:
    if not G.is_exhaustive or G.order > max_exhaustive:
        return False
    return cap is None or G.order <= cap


def ob_profile(t: Tower, n: int, star: bool = False, window: int = 2,
               max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER,
               cap: int | None = DEFAULT_OBSTAR_CAP) -> Profile:
    """ob (or ob*) of each level at n, stopping at the first level beyond the caps."""
    values, truncated = [], False
    for G in t.levels:
        if not _usable(G, max_exhaustive, cap if star else None):
            truncated = True
            break
        values.append(ob_value(G, n, star, cap).value)
    stab, val = _stabilization(values, window)
    return Profile("ob_star" if star else "ob", n, values, stab, val, len(values), truncated, window)


def kh_profile(t: Tower, i: int, H: Subgroup, window: int = 2,
               max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER) -> Profile:
    """Count, at each level j >= i, the normal subgroups not inside the pullback of H."""
    values, truncated = [], False
    for j in range(i, t.depth + 1):
        G = t.level(j)
        if not _usable(G, max_exhaustive, None):
            truncated = True
            break
        P = pullback(t, i, H, j)
        M = all_normal_subgroups(G).matrix
        values.append(int((M & ~P.mask).any(axis=1).sum()))
    stab, val = _stabilization(values, window)
    return Profile("kh_count", f"H@{i}", values, stab, val, i - 1 + len(values), truncated, window, first_level=i)


# ---------------------------------------------------------------------------
# finite-level verdicts


@dataclass
class EvidenceReport:
    profiles: list[Profile]
    consistent: bool
    insufficient_depth: bool
    computed_depth: int
    verdict: str

    @property
    def stable_values(self) -> list[int | None]:
        return [p.stable_value for p in self.profiles]


def just_infinite_evidence(t: Tower, n_max: int, star: bool = False, window: int = 2,
                           max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER) -> EvidenceReport:
    """Do the ob profiles for n <= n_max all stabilise within the computed depth?"""
    profiles = [ob_profile(t, n, star, window, max_exhaustive) for n in range(1, n_max + 1)]
    depth = min(p.computed_depth for p in profiles)
    if depth < 2 or depth < window:
        return EvidenceReport(profiles, True, True, depth, "insufficient depth")
    unstable = [p.n for p in profiles if not p.stabilized]
    if unstable:
        return EvidenceReport(profiles, False, False, depth,
                              f"not consistent with just infinite: no stabilisation at n={unstable[0]}")
    return EvidenceReport(profiles, True, False, depth,
                          f"consistent with just infinite up to n={n_max} (depth {depth})")


@dataclass
class BranchBound:
    values: list[int]
    stabilized: list[bool]
    c: float
    computed_depth: int
    truncated: bool


def branch_bound_report(t: Tower, n_max: int, window: int = 2,
                        max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER) -> BranchBound:
    """ob(n) for n <= n_max at the deepest usable level, and the least c with ob(n) <= c**n there."""
    profiles = [ob_profile(t, n, False, window, max_exhaustive) for n in range(1, n_max + 1)]
    if not profiles or profiles[0].computed_depth == 0:
        raise ResourceError("no tower level is within the exhaustive cap")
    values = [p.per_level[-1] for p in profiles]
    c = max(v ** (1.0 / n) for n, v in enumerate(values, start=1))
    return BranchBound(values, [p.stabilized for p in profiles], c,
                       profiles[0].computed_depth, profiles[0].truncated)


# ---------------------------------------------------------------------------
# subgroup inequalities


@dataclass
class Inequality:
    lhs: Fraction
    rhs: Fraction
    holds: bool

    @classmethod
    def le(cls, lhs, rhs) -> Inequality:
        lhs, rhs = Fraction(lhs), Fraction(rhs)
        return cls(lhs, rhs, lhs <= rhs)


@dataclass
class TheoremCReport:
    n: int
    h: int
    t: int
    clause_i: Inequality
    clause_ii: Inequality
    clause_iii_plain: Inequality
    clause_iii_star: Inequality
    threshold_i: int | None


def normal_core(G: FiniteGroup, H: Subgroup) -> Subgroup:
    """Largest normal subgroup of G inside H."""
    best = G.trivial
    for N in all_normal_subgroups(G).members:
        if N <= H and N.order > best.order:
            best = N
    return best


def _ob(G: FiniteGroup, n: int, star: bool, cap) -> int:
    # I_n is constant once n reaches |G|
    return ob_value(G, min(n, G.order), star, cap).value


def clause_i_threshold(G: FiniteGroup, H: Subgroup) -> int | None:
    """Least n0 with ob_G(hn)/h <= ob_H(n) for every n >= n0.

    Past n = |H| both sides are |H|, so scanning up to |H| settles it.
    """
    K = H.as_group()
    h = H.index
    n0 = None
    for n in range(H.order, 0, -1):
        if Fraction(_ob(G, h * n, False, None), h) <= _ob(K, n, False, None):
            n0 = n
        else:
            break
    return n0


def _clause_iii_products(G: FiniteGroup, n: int, cap) -> tuple[int, int]:
    # independent of H, so shared by every check on G
    memo = G.cache.setdefault("clause_iii", {})
    if (n, cap) not in memo:
        I = bounded_index_intersection(G, n)
        plain, star = 1, 1
        for L in overgroups(G, I, cap if cap is not None else G.order):
            LG = L.as_group()
            plain *= L.index * _ob(LG, n, False, cap)
            star *= L.index * _ob(LG, n, True, cap)
        memo[(n, cap)] = (plain, star)
    return memo[(n, cap)]


def theorem_c_check(G: FiniteGroup, H: Subgroup, n: int, cap: int | None = DEFAULT_OBSTAR_CAP,
                    threshold: bool = True) -> TheoremCReport:
    """Evaluate both sides of the three subgroup inequalities at n.

    (i)   ob_G(hn)/h <= ob_H(n)
    (ii)  ob*_H(n) <= ob*_G(t n^h)/h, with t = |G : core_G(H)|
    (iii) ob*_G(n) <= prod over L >= I_n(G) of |G:L| ob_L(n); reported with
          ob_L and with ob*_L.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if cap is not None and G.order > cap:
        raise ResourceError(f"starred clauses need |G| <= {cap} (got {G.order})")
    K = H.as_group()
    h = H.index
    t = normal_core(G, H).index
    big = min(t * n ** h, G.order)
    c1 = Inequality.le(Fraction(_ob(G, h * n, False, cap), h), _ob(K, n, False, cap))
    c2 = Inequality.le(_ob(K, n, True, cap), Fraction(_ob(G, big, True, cap), h))
    plain, star = _clause_iii_products(G, n, cap)
    lhs3 = _ob(G, n, True, cap)
    return TheoremCReport(n, h, t, c1, c2, Inequality.le(lhs3, plain), Inequality.le(lhs3, star),
                          clause_i_threshold(G, H) if threshold else None)


@dataclass
class TowerTheoremC:
    n: int
    per_level: list[TheoremCReport]
    sides_stabilized: bool
    clause_i: bool
    clause_ii: bool
    clause_iii_plain: bool
    clause_iii_star: bool


def theorem_c_tower_check(t: Tower, n: int, window: int = 2, cap: int | None = DEFAULT_OBSTAR_CAP,
                          max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER) -> TowerTheoremC:
    """Theorem C clauses along a tower, with H the pullback of an index-p subgroup of level 1.

    The clauses are judged on the values of the deepest usable level; the
    report says whether every side had stabilised there.
    """
    G1 = t.level(1)
    p = _prime_factors(G1.order)[0]
    H1 = next(M for M in all_normal_subgroups(G1).members if M.index == p)
    reports = []
    for j in range(2, t.depth + 1):
        G = t.level(j)
        if not _usable(G, max_exhaustive, cap):
            break
        reports.append(theorem_c_check(G, pullback(t, 1, H1, j), n, cap, threshold=False))
    if not reports:
        raise ResourceError("no tower level beyond the first is within the caps")

    def sides(r: TheoremCReport):
        return (r.clause_i.lhs, r.clause_i.rhs, r.clause_ii.lhs, r.clause_ii.rhs,
                r.clause_iii_plain.lhs, r.clause_iii_plain.rhs, r.clause_iii_star.rhs)

    tail = [sides(r) for r in reports[-window:]]
    stab = len(reports) >= window and all(s == tail[0] for s in tail)
    last = reports[-1]
    return TowerTheoremC(n, reports, stab, last.clause_i.holds, last.clause_ii.holds,
                         last.clause_iii_plain.holds, last.clause_iii_star.holds)
