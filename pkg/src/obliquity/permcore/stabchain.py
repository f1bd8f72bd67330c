"""Deterministic Schreier-Sims on permutations stored as plain tuples.

Used for groups too large to enumerate: order, membership, kernels of
homomorphisms (via the graph-of-the-map trick) and preimage lifting.
"""

from __future__ import annotations

from math import prod


def _mul(p, q):
    return tuple(q[i] for i in p)


def _inv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _is_id(p):
    return all(i == j for i, j in enumerate(p))


def _first_moved(p):
    for i, j in enumerate(p):
        if i != j:
            return i
    return None


class StabChain:
    """Base and strong generating set for ``<gens>``.

    ``base_prefix`` forces the leading base points (needed when the caller
    wants the pointwise stabiliser of a fixed point set).
    """

    def __init__(self, gens, degree: int, base_prefix=()):
        self.degree = degree
        self.base: list[int] = list(base_prefix)
        self.strong: list[tuple] = []
        for g in gens:
            g = tuple(g)
            if not _is_id(g) and g not in self.strong:
                self.strong.append(g)
        for g in self.strong:
            self._ensure_moves_base(g)
        self._levels: list[tuple[list, dict]] = []
        self._rebuild_from(0)
        self._schreier_sims()

    def _ensure_moves_base(self, g):
        if all(g[b] == b for b in self.base):
            self.base.append(_first_moved(g))

    def _level_gens(self, i):
        fixed = self.base[:i]
        return [s for s in self.strong if all(s[b] == b for b in fixed)]

    def _orbit(self, i, gens):
        beta = self.base[i]
        trans = {beta: tuple(range(self.degree))}
        queue = [beta]
        for b in queue:
            u = trans[b]
            for s in gens:
                c = s[b]
                if c not in trans:
                    trans[c] = _mul(u, s)
                    queue.append(c)
        return trans

    def _rebuild_from(self, i):
        del self._levels[i:]
        for j in range(i, len(self.base)):
            gens = self._level_gens(j)
            self._levels.append((gens, self._orbit(j, gens)))

    def sift(self, g, start=0, stop=None):
        """Strip ``g`` through levels ``start..stop-1``; return (residue, level reached)."""
        stop = len(self.base) if stop is None else stop
        g = tuple(g)
        for i in range(start, stop):
            b = g[self.base[i]]
            trans = self._levels[i][1]
            if b not in trans:
                return g, i
            g = _mul(g, _inv(trans[b]))
        return g, stop

    def _schreier_sims(self):
        i = len(self.base) - 1
        while i >= 0:
            added = self._check_level(i)
            if added is None:
                i -= 1
            else:
                i = added

    def _check_level(self, i):
        gens, trans = self._levels[i]
        for b, u in list(trans.items()):
            for s in gens:
                h = _mul(_mul(u, s), _inv(trans[s[b]]))
                if _is_id(h):
                    continue
                res, j = self.sift(h, i + 1)
                if j < len(self.base) or not _is_id(res):
                    self.strong.append(res)
                    if j == len(self.base):
                        self.base.append(_first_moved(res))
                    # lower levels gain the new generator too
                    self._rebuild_from(0)
                    return j
        return None

    @property
    def order(self) -> int:
        return prod(len(t) for _, t in self._levels)

    def contains(self, g) -> bool:
        res, j = self.sift(g)
        return j == len(self.base) and _is_id(res)

    def stabilizer_generators(self, k: int) -> list[tuple]:
        """Strong generators of the pointwise stabiliser of ``base[:k]``."""
        return self._level_gens(k)

    def orbit_lengths(self) -> list[int]:
        return [len(t) for _, t in self._levels]
