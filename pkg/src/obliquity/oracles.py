"""Slow, independent reference computations in plain Python.

Nothing here touches the numpy element tables: groups are rebuilt from
their generators as sets of image tuples, and subgroups are frozensets of
such tuples.  The verification suites compare the fast code against these.
"""

from __future__ import annotations

from itertools import product as _cartesian


def _mul(a: tuple, b: tuple) -> tuple:
    # a first, then b
    return tuple(b[i] for i in a)


def _inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


class TableGroup:
    """A group as an integer multiplication table, built by closure."""

    def __init__(self, gens, degree: int):
        ident = tuple(range(degree))
        gens = [tuple(g) for g in gens]
        elems = [ident]
        seen = {ident: 0}
        for x in elems:
            for g in gens:
                y = _mul(x, g)
                if y not in seen:
                    seen[y] = len(elems)
                    elems.append(y)
        self.elements = elems
        self.pos = seen
        self.order = len(elems)
        self.table = [[seen[_mul(a, b)] for b in elems] for a in elems]
        self.inv = [seen[_inv(a)] for a in elems]
        self.gens = [seen[g] for g in gens]

    def to_set(self, idx) -> frozenset:
        return frozenset(self.elements[i] for i in idx)

    def closure(self, gens) -> frozenset:
        """Subgroup generated by the element indices ``gens``."""
        gens_all = list(dict.fromkeys(gens))
        cur = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                row = self.table[x]
                for g in gens_all:
                    y = row[g]
                    if y not in cur:
                        cur.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(cur)

    def classes(self) -> list[frozenset]:
        left = set(range(self.order))
        out = []
        while left:
            x = min(left)
            cls = frozenset(self.table[self.table[self.inv[g]][x]][g] for g in range(self.order))
            out.append(cls)
            left -= cls
        return out


def normal_subgroups(T: TableGroup) -> set[frozenset]:
    """Every normal subgroup, as a union of conjugacy classes closed under products.

    Depth-first over the classes: each class is either inside the subgroup or
    excluded; including one forces its closure, which must avoid every
    excluded class.
    """
    classes = T.classes()
    found: set[frozenset] = set()

    def walk(S: frozenset, gens: list, k: int, excluded: list[frozenset]):
        if k == len(classes):
            found.add(S)
            return
        c = classes[k]
        if c <= S:
            walk(S, gens, k + 1, excluded)
            return
        walk(S, gens, k + 1, excluded + [c])
        S2 = T.closure(gens + sorted(c))
        if not any(S2 & e for e in excluded):
            walk(S2, gens + sorted(c), k + 1, excluded)

    walk(frozenset([0]), [], 0, [])
    return found


def all_subgroups(T: TableGroup) -> set[frozenset]:
    """Every subgroup: close the trivial group under adding one element at a time."""
    start = frozenset([0])
    found = {start: []}
    stack = [start]
    while stack:
        S = stack.pop()
        for x in range(T.order):
            if x not in S:
                gens = found[S] + [x]
                S2 = T.closure(gens)
                if S2 not in found:
                    found[S2] = gens
                    stack.append(S2)
    return set(found)


def normalized_by(T: TableGroup, subs, H: frozenset) -> set[frozenset]:
    out = set()
    for K in subs:
        if all(T.table[T.table[T.inv[h]][k]][h] in K for h in H for k in K):
            out.add(K)
    return out


def ob_value(T: TableGroup, n: int, normals=None, invariant_family=None) -> int:
    """|G : Ob(I_n)| from raw element sets.

    With ``invariant_family`` (all subgroups) the starred core is used.
    """
    normals = normal_subgroups(T) if normals is None else normals
    G = frozenset(range(T.order))
    I = G
    for N in normals:
        if T.order // len(N) <= n:
            I = I & N
    if invariant_family is None:
        family = [K for K in normals if not K <= I]
    else:
        family = [K for K in normalized_by(T, invariant_family, I) if not K <= I]
    core = I
    for K in family:
        core = core & K
    return T.order // len(core)


def brute_force_commutator_subgroup(T: TableGroup) -> frozenset:
    comms = {T.table[T.table[T.inv[a]][T.inv[b]]][T.table[a][b]] for a, b in _cartesian(range(T.order), repeat=2)}
    return T.closure(sorted(comms))
