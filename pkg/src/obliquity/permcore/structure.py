"""Classes, commutators, centralisers, normalisers, series and fingerprints."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .group import FiniteGroup, NotNormalError, Subgroup


@dataclass(frozen=True)
class ConjugacyClass:
    rep: int  # element index of the smallest member
    size: int
    mask: np.ndarray


def _orbits(G: FiniteGroup, actors) -> np.ndarray:
    """Orbit label (smallest member) of each element under conjugation by ``actors``."""
    n = G.order
    allx = np.arange(n)
    cols = [G.conj_col(g) for g in actors]
    if not cols:
        return allx
    r = np.tile(allx, len(cols))
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
    _, comp = connected_components(graph, directed=True, connection="weak")
    rep = np.full(comp.max() + 1, n, dtype=np.int64)
    np.minimum.at(rep, comp, allx)
    return rep[comp]


def _classes_from_labels(labels) -> list[ConjugacyClass]:
    reps, counts = np.unique(labels, return_counts=True)
    return [ConjugacyClass(int(r), int(c), labels == r) for r, c in zip(reps, counts)]


def conjugacy_classes(G: FiniteGroup) -> list[ConjugacyClass]:
    """Conjugacy classes ordered by their smallest element."""
    G.require_exhaustive("conjugacy classes")
    if "classes" not in G.cache:
        G.cache["classes"] = _classes_from_labels(_orbits(G, G.gen_indices))
    return G.cache["classes"]


def conjugation_orbits(G: FiniteGroup, H: Subgroup) -> list[ConjugacyClass]:
    """Orbits of G's elements under conjugation by H."""
    G.require_exhaustive("H-orbits")
    return _classes_from_labels(_orbits(G, H.gen_idx))


def normal_closure(G: FiniteGroup, S: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """Smallest subgroup containing S normalised by ``within`` (default G)."""
    actors = G.gen_indices if within is None else within.gen_idx
    cur = S
    while True:
        grown = False
        for w in actors:
            col = G.conj_col(w)
            moved = col[cur.gen_idx]
            missing = moved[~cur.mask[moved]]
            if len(missing):
                cur = G.span(missing, seed=cur)
                grown = True
        if not grown:
            return cur


def element_normal_closure(G: FiniteGroup, x: int) -> Subgroup:
    return normal_closure(G, G.span([x]))


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """[A, B]: the normal closure in <A, B> of the generator commutators."""
    G.require_exhaustive("commutator subgroup")
    inv = G.inverse_index
    comms = []
    for a in A.gen_idx:
        for b in B.gen_idx:
            comms.append(int(G.mul(G.mul(inv[a], inv[b]), G.mul(a, b))[0]))
    C = G.span(comms)
    return normal_closure(G, C, within=A.join(B))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    if "derived" not in G.cache:
        G.cache["derived"] = commutator_subgroup(G, G.whole, G.whole)
    return G.cache["derived"]


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    """gamma_1 = G, gamma_{i+1} = [gamma_i, G], until it stabilises."""
    if "lcs" not in G.cache:
        series = [G.whole]
        while True:
            nxt = commutator_subgroup(G, series[-1], G.whole)
            if nxt == series[-1]:
                break
            series.append(nxt)
        G.cache["lcs"] = series
    return G.cache["lcs"]


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    if "dseries" not in G.cache:
        series = [G.whole]
        while True:
            nxt = commutator_subgroup(G, series[-1], series[-1])
            if nxt == series[-1]:
                break
            series.append(nxt)
        G.cache["dseries"] = series
    return G.cache["dseries"]


def _comm_all(G: FiniteGroup, m: int) -> np.ndarray:
    """index([g, m]) for every g."""
    inv = G.inverse_index
    allg = np.arange(G.order)
    # [g, m] = g^-1 m^-1 g m = g^-1 * (m^-1 g m) = g^-1 * conj_m(g)
    return G.mul(inv[allg], G.conj_col(m))


def section_centralizer(G: FiniteGroup, M: Subgroup, N: Subgroup) -> Subgroup:
    """C_G(M/N) = {g : [g, m] in N for every m in M}."""
    G.require_exhaustive("section centraliser")
    if not N <= M:
        raise ValueError("section needs N <= M")
    if not (M.is_normal() and N.is_normal()):
        raise NotNormalError("section centraliser needs M and N normal in G")
    keep = np.ones(G.order, dtype=bool)
    for m in M.gen_idx:
        keep &= N.mask[_comm_all(G, m)]
    return G.subgroup_from_mask(keep)


def centralizer(G: FiniteGroup, S: Subgroup) -> Subgroup:
    keep = np.ones(G.order, dtype=bool)
    for m in S.gen_idx:
        keep &= G.conj_col(m) == np.arange(G.order)
    # conj_col(m)[x] = m^-1 x m; x commutes with m iff that equals x
    return G.subgroup_from_mask(keep)


def normalizer(G: FiniteGroup, K: Subgroup) -> Subgroup:
    """N_G(K) = {g : K^g = K}."""
    G.require_exhaustive("normaliser")
    keep = np.ones(G.order, dtype=bool)
    inv = G.inverse_index
    allg = np.arange(G.order)
    for k in K.gen_idx:
        # g^-1 k g for all g
        conj = G.mul(G.mul(inv[allg], k), allg)
        keep &= K.mask[conj]
    return G.subgroup_from_mask(keep)


def element_orders(G: FiniteGroup) -> np.ndarray:
    G.require_exhaustive("element orders")
    if "element_orders" not in G.cache:
        E = G.elements_array
        ident = np.arange(G.degree)
        orders = np.zeros(G.order, dtype=np.int64)
        orders[(E == ident).all(axis=1)] = 1
        cur = E.copy()
        k = 1
        while (orders == 0).any():
            cur = np.take_along_axis(E, cur, axis=1)
            k += 1
            hit = (orders == 0) & (cur == ident).all(axis=1)
            orders[hit] = k
        G.cache["element_orders"] = orders
    return G.cache["element_orders"]


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_abelian(G: FiniteGroup) -> bool:
    gens = G.gens
    return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1:])


def abelian_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Elementary divisors (prime powers, sorted) of an abelian group.

    For each prime p the counts ``#{x : x^(p^k) = 1} = p^(s_k)`` pin down the
    partition of exponents.
    """
    if not is_abelian(G):
        raise ValueError("abelian invariants need an abelian group")
    orders = element_orders(G)
    out = []
    for p in _prime_factors(G.order):
        s_prev, k = 0, 1
        parts = []
        while True:
            cnt = int(np.sum((p ** k) % orders == 0))
            s_k = round(np.log(cnt) / np.log(p))
            if s_k == s_prev:
                break
            parts.append(s_k - s_prev)  # number of cyclic factors with exponent >= k
            s_prev, k = s_k, k + 1
        # parts[k-1] = #{i : e_i >= k}; convert to exponents
        for k in range(len(parts)):
            nxt = parts[k + 1] if k + 1 < len(parts) else 0
            out.extend([p ** (k + 1)] * (parts[k] - nxt))
    return tuple(sorted(out))


def abelianization_invariants(G: FiniteGroup) -> tuple[int, ...]:
    from .constructions import quotient_map

    D = derived_subgroup(G)
    if D.is_whole():
        return ()
    if D.is_trivial():
        return abelian_invariants(G)
    Q, _ = quotient_map(G, D)
    return abelian_invariants(Q)


def derived_length(G: FiniteGroup) -> int:
    """Length of the derived series, or -1 when it stalls above 1."""
    series = derived_series(G)
    if not series[-1].is_trivial():
        return -1
    return len(series) - 1


def iso_fingerprint(G: FiniteGroup) -> tuple:
    """(order, class sizes, element-order histogram, abelianisation, derived length).

    Necessary but not sufficient for isomorphism.
    """
    G.require_exhaustive("fingerprint")
    if "fingerprint" not in G.cache:
        sizes = tuple(sorted(c.size for c in conjugacy_classes(G)))
        hist = tuple(sorted(Counter(element_orders(G).tolist()).items()))
        G.cache["fingerprint"] = (G.order, sizes, hist, abelianization_invariants(G), derived_length(G))
    return G.cache["fingerprint"]
