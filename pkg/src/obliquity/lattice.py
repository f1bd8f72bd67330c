"""Normal subgroup lattices, H-invariant subgroup surveys, chief covers, subnormality."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, log2

import numpy as np

from .permcore.group import DEFAULT_OBSTAR_CAP, FiniteGroup, ResourceError, Subgroup
from .permcore.structure import conjugacy_classes, conjugation_orbits, normal_closure


@dataclass
class NormalLattice:
    ambient: FiniteGroup
    members: list[Subgroup]
    # (i, j): members[j] is covered by members[i]
    cover_edges: list[tuple[int, int]] = field(default_factory=list)

    def position(self, S: Subgroup) -> int:
        return self._pos[S.key]

    def __post_init__(self):
        self._pos = {m.key: i for i, m in enumerate(self.members)}

    def __contains__(self, S: Subgroup) -> bool:
        return S.key in self._pos

    def __len__(self):
        return len(self.members)

    @property
    def matrix(self) -> np.ndarray:
        """Boolean (members x elements) matrix of the member masks."""
        if "_matrix" not in self.__dict__:
            self.__dict__["_matrix"] = np.stack([m.mask for m in self.members])
        return self.__dict__["_matrix"]

    @property
    def indices(self) -> np.ndarray:
        return np.array([m.index for m in self.members], dtype=np.int64)


def class_closures(G: FiniteGroup) -> list[Subgroup]:
    """Normal closure of each conjugacy class, in class order."""
    if "class_closures" in G.cache:
        return G.cache["class_closures"]
    classes = conjugacy_classes(G)
    label = np.empty(G.order, dtype=np.int64)
    for k, c in enumerate(classes):
        label[c.mask] = k
    abelian = len(classes) == G.order
    found: dict[int, Subgroup] = {}
    for k, c in enumerate(classes):
        if k in found:
            continue
        powers = G.cyclic_powers(c.rep)
        mask = np.zeros(G.order, dtype=bool)
        mask[powers] = True
        C = Subgroup(G, mask=mask, gen_idx=[c.rep])
        N = C if abelian else normal_closure(G, C)
        # every generator of <x> has the same normal closure as x
        o = len(powers)
        for e in range(1, o):
            if gcd(e, o) == 1:
                found.setdefault(int(label[powers[e]]), N)
        found[k] = N
    G.cache["class_closures"] = [found[k] for k in range(len(classes))]
    return G.cache["class_closures"]


def _minimal(cands: list[Subgroup]) -> list[Subgroup]:
    cands = sorted(cands, key=lambda s: s.order)
    out = []
    for c in cands:
        if not any(m <= c for m in out):
            out.append(c)
    return out


def _bfs(G: FiniteGroup, start: Subgroup, blocks: list[Subgroup], normal: bool = False):
    """All subgroups reachable from ``start`` by joining with ``blocks``.

    Returns (members, covers-upward map).  ``blocks`` are subgroups whose joins
    with any member stay inside the family being enumerated.
    """
    members = {start.key: start}
    order = [start]
    ups: dict[bytes, list[Subgroup]] = {}
    queue = [start]
    while queue:
        N = queue.pop()
        joins = {}
        for B in blocks:
            if N.mask[B.gen_idx].all():
                continue
            J = G.normal_join(N, B) if normal else G.span(B.gen_idx, seed=N)
            known = members.get(J.key)
            if known is None:
                members[J.key] = J
                order.append(J)
                queue.append(J)
                known = J
            joins[known.key] = known
        ups[N.key] = _minimal(list(joins.values()))
    return order, ups


def _sort_members(members: list[Subgroup]) -> list[Subgroup]:
    return sorted(members, key=lambda s: (s.order, s.key))


def all_normal_subgroups(G: FiniteGroup) -> NormalLattice:
    """Every normal subgroup of G, with the cover relation.

    Breadth-first from the trivial subgroup: each step joins a known normal
    subgroup with the normal closure of one conjugacy class.  The covers of N
    are the minimal subgroups among those joins.
    """
    G.require_exhaustive("normal subgroup enumeration")
    if "normal_lattice" in G.cache:
        return G.cache["normal_lattice"]
    blocks = _dedupe(class_closures(G))
    found, ups = _bfs(G, G.trivial, blocks, normal=True)
    members = _sort_members(found)
    lat = NormalLattice(G, members)
    for N in members:
        j = lat.position(N)
        for U in ups[N.key]:
            lat.cover_edges.append((lat.position(U), j))
    lat.cover_edges.sort()
    G.cache["normal_lattice"] = lat
    return lat


def _dedupe(subs: list[Subgroup]) -> list[Subgroup]:
    seen = {}
    for s in subs:
        if not s.is_trivial():
            seen.setdefault(s.key, s)
    return list(seen.values())


def maximal_normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    if G.order == 1:
        raise ValueError("the trivial group has no maximal normal subgroups")
    lat = all_normal_subgroups(G)
    top = lat.position(G.whole)
    return [lat.members[j] for i, j in lat.cover_edges if i == top]


def normal_subgroups_up_to_index(G: FiniteGroup, n: int) -> list[Subgroup]:
    if n < 1:
        raise ValueError("index bound must be positive")
    return [N for N in all_normal_subgroups(G).members if N.index <= n]


def chief_covers(G: FiniteGroup) -> list[tuple[Subgroup, Subgroup]]:
    lat = all_normal_subgroups(G)
    return [(lat.members[i], lat.members[j]) for i, j in lat.cover_edges]


def minimal_normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    lat = all_normal_subgroups(G)
    bottom = lat.position(G.trivial)
    return [lat.members[i] for i, j in lat.cover_edges if j == bottom]


def _orbit_spans(G: FiniteGroup, H: Subgroup) -> list[Subgroup]:
    spans = [G.span(np.flatnonzero(o.mask)) for o in conjugation_orbits(G, H)]
    return _dedupe(spans)


def subgroups_normalized_by(G: FiniteGroup, H: Subgroup, cap: int = DEFAULT_OBSTAR_CAP) -> list[Subgroup]:
    """Every subgroup K of G with H <= N_G(K), sorted by (order, mask)."""
    G.require_exhaustive("subgroup survey")
    if G.order > cap:
        raise ResourceError(f"subgroup survey needs |G| <= {cap} (got {G.order}); lower the scope")
    key = ("invariant_subgroups", H.key)
    if key not in G.cache:
        found, _ = _bfs(G, G.trivial, _orbit_spans(G, H))
        G.cache[key] = _sort_members(found)
    return G.cache[key]


def all_subgroups(G: FiniteGroup, cap: int = DEFAULT_OBSTAR_CAP) -> list[Subgroup]:
    return subgroups_normalized_by(G, G.trivial, cap)


def overgroups(G: FiniteGroup, S: Subgroup, cap: int = DEFAULT_OBSTAR_CAP) -> list[Subgroup]:
    """Every subgroup of G containing S."""
    G.require_exhaustive("overgroup survey")
    if G.order > cap:
        raise ResourceError(f"overgroup survey needs |G| <= {cap} (got {G.order})")
    cyc = _dedupe([G.span([x]) for x in range(G.order) if not S.mask[x]])
    found, _ = _bfs(G, S, cyc)
    return _sort_members(found)


def is_subnormal(G: FiniteGroup, H: Subgroup) -> int | None:
    """Subnormal defect of H in G, or None when H is not subnormal.

    Follows H_0 = G, H_{i+1} = normal closure of H in H_i.
    """
    G.require_exhaustive("subnormality test")
    cur = G.whole
    limit = max(1, int(log2(G.order)) + 1)
    for d in range(limit + 1):
        if cur == H:
            return d
        nxt = normal_closure(G, H, within=cur)
        if nxt == cur:
            return None
        cur = nxt
    return None
