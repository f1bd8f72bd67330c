"""Finite permutation groups with two engines.

``exhaustive`` groups keep every element as a row of a sorted integer array
(lexicographic order, so index 0 is the identity).  Subgroups of such a group
are boolean masks over those rows, which makes intersection and containment
cheap.  ``stabchain`` groups only carry a Schreier-Sims chain and support
order, membership and homomorphic images.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .perm import DegreeMismatch, Permutation
from .stabchain import StabChain

DEFAULT_EXHAUSTIVE_ORDER = 20_000
DEFAULT_HARD_CAP = 2**31
DEFAULT_OBSTAR_CAP = 2000

_COL_CACHE_LIMIT = 256


class ResourceError(RuntimeError):
    """Raised when a computation would exceed a configured cap."""


class NotNormalError(ValueError):
    pass


_WEIGHTS: dict[int, np.ndarray] = {}


def _weights(degree: int, salt: int = 0) -> np.ndarray:
    key = degree * 7919 + salt
    if key not in _WEIGHTS:
        rng = np.random.default_rng(20240601 + salt)
        _WEIGHTS[key] = rng.integers(1, 2**63, size=degree, dtype=np.uint64) | np.uint64(1)
    return _WEIGHTS[key]


def _row_keys(rows: np.ndarray, salt: int = 0) -> np.ndarray:
    w = _weights(rows.shape[1], salt)
    with np.errstate(over="ignore"):
        return (rows.astype(np.uint64) * w).sum(axis=1, dtype=np.uint64)


def _enumerate(gens: list[np.ndarray], degree: int, expected: int, salt: int) -> np.ndarray | None:
    ident = np.arange(degree, dtype=np.int32)[None, :]
    rows = [ident]
    seen = _row_keys(ident, salt)
    frontier = ident
    total = 1
    while len(frontier) and gens:
        cand = np.concatenate([g[frontier] for g in gens])
        ck = _row_keys(cand, salt)
        ck, first = np.unique(ck, return_index=True)
        fresh = ~np.isin(ck, seen, assume_unique=True)
        frontier = cand[first[fresh]]
        seen = np.concatenate([seen, ck[fresh]])
        rows.append(frontier)
        total += len(frontier)
        if total > expected:
            return None
    elems = np.concatenate(rows)
    if len(elems) != expected:
        return None
    return elems


class FiniteGroup:
    """A permutation group given by generators.

    Build through :func:`generate` (or the constructors in
    ``permcore.constructions``) rather than calling this directly.
    """

    def __init__(self, gens, degree, order, *, chain=None, elements=None):
        self.gens: tuple[Permutation, ...] = tuple(gens)
        self.degree = degree
        self.order = order
        self._chain = chain
        self._E = elements
        self._cols: dict[tuple[str, int], np.ndarray] = {}
        # write-once caches for derived data (lattice, classes, ...)
        self.cache: dict = {}
        if elements is not None:
            self._salt = 0
            self._index_rows()

    def __repr__(self):
        return f"<FiniteGroup order={self.order} degree={self.degree} engine={self.engine}>"

    @property
    def engine(self) -> str:
        return "exhaustive" if self._E is not None else "stabchain"

    @property
    def is_exhaustive(self) -> bool:
        return self._E is not None

    def require_exhaustive(self, what: str = "this operation"):
        if self._E is None:
            raise ResourceError(
                f"{what} needs the exhaustive engine; group order {self.order} is above the exhaustive cap"
            )

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain([g.images for g in self.gens], self.degree)
        return self._chain

    # -- exhaustive element storage -------------------------------------

    def _index_rows(self):
        E = self._E
        keys = _row_keys(E, self._salt)
        order = np.argsort(keys, kind="stable")
        sk = keys[order]
        if len(sk) > 1 and (sk[1:] == sk[:-1]).any():
            self._salt += 1
            return self._index_rows()
        self._sorted_keys = sk
        self._key_pos = order

    @property
    def elements_array(self) -> np.ndarray:
        self.require_exhaustive()
        return self._E

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(v) for v in self._E[i]))

    def elements(self) -> list[Permutation]:
        self.require_exhaustive("element listing")
        return [self.element(i) for i in range(self.order)]

    def lookup_rows(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the given permutation rows, -1 for non-members."""
        rows = np.asarray(rows)
        if rows.ndim == 1:
            rows = rows[None, :]
        if rows.shape[1] != self.degree:
            raise DegreeMismatch(f"rows of degree {rows.shape[1]} vs group degree {self.degree}")
        k = _row_keys(rows, self._salt)
        pos = np.searchsorted(self._sorted_keys, k)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        idx = self._key_pos[pos]
        ok = (self._sorted_keys[pos] == k) & (self._E[idx] == rows).all(axis=1)
        return np.where(ok, idx, -1)

    def index(self, p: Permutation) -> int:
        self.require_exhaustive()
        i = int(self.lookup_rows(np.array(p.images))[0])
        if i < 0:
            raise ValueError(f"{p} is not an element of the group")
        return i

    def is_member(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatch(f"degree {p.degree} vs group degree {self.degree}")
        if self._E is not None:
            return bool(self.lookup_rows(np.array(p.images))[0] >= 0)
        return self.chain.contains(p.images)

    # -- index arithmetic -----------------------------------------------

    def mul(self, a, b) -> np.ndarray:
        """Elementwise product of index arrays (``a`` acts first)."""
        E = self._E
        a = np.atleast_1d(a)
        b = np.atleast_1d(b)
        a, b = np.broadcast_arrays(a, b)
        rows = np.take_along_axis(E[b], E[a], axis=1)
        return self.lookup_rows(rows)

    def power_index(self, r: int) -> np.ndarray:
        """``out[x] = index(x**r)`` for every element x (r >= 0)."""
        E = self._E
        ident = np.broadcast_to(np.arange(self.degree, dtype=E.dtype), E.shape)
        acc, base = ident.copy(), E
        while r:
            if r & 1:
                acc = np.take_along_axis(base, acc, axis=1)
            base = np.take_along_axis(base, base, axis=1)
            r >>= 1
        return self.lookup_rows(acc)

    def cyclic_powers(self, x: int) -> np.ndarray:
        """Indices of x**0, x**1, ... up to the order of x."""
        E = self._E
        row = E[x]
        ident = np.arange(self.degree, dtype=E.dtype)
        rows, cur = [ident], row
        while not np.array_equal(cur, ident):
            rows.append(cur)
            cur = row[cur]
        return self.lookup_rows(np.stack(rows))

    @cached_property
    def inverse_index(self) -> np.ndarray:
        self.require_exhaustive()
        return self.lookup_rows(np.argsort(self._E, axis=1))

    def _cached_col(self, kind, g, build):
        key = (kind, int(g))
        col = self._cols.get(key)
        if col is None:
            col = build()
            if self.order > 4096 and len(self._cols) >= _COL_CACHE_LIMIT:
                self._cols.pop(next(iter(self._cols)))
            self._cols[key] = col
        return col

    def right_col(self, g: int) -> np.ndarray:
        """``col[x] = index(x * g)`` for every element x."""
        E = self._E
        return self._cached_col("r", g, lambda: self.lookup_rows(E[g][E]))

    def left_col(self, g: int) -> np.ndarray:
        """``col[x] = index(g * x)``."""
        E = self._E
        return self._cached_col("l", g, lambda: self.lookup_rows(E[:, E[g]]))

    def conj_col(self, g: int) -> np.ndarray:
        """``col[x] = index(g**-1 * x * g)``."""
        E = self._E
        gi = E[self.inverse_index[g]]
        return self._cached_col("c", g, lambda: self.lookup_rows(E[g][E[:, gi]]))

    @cached_property
    def gen_indices(self) -> list[int]:
        self.require_exhaustive()
        return [self.index(g) for g in self.gens]

    # -- subgroups ------------------------------------------------------

    def close(self, mask: np.ndarray, gens) -> np.ndarray:
        """Close ``mask`` (plus the identity) under right multiplication by ``gens``.

        When ``gens`` generate a group containing the mask this is that group;
        when the mask is a subgroup normalised by ``gens`` it is the product.
        """
        cur = mask.copy()
        cur[0] = True
        gens = [int(g) for g in gens]
        if not gens:
            return cur
        if self.order <= 4096:
            inv = self.inverse_index
            cols = [self.right_col(int(inv[g])) for g in gens]
            count = np.count_nonzero(cur)
            while True:
                for c in cols:
                    cur |= cur[c]
                new_count = np.count_nonzero(cur)
                if new_count == count:
                    return cur
                count = new_count
        frontier = np.flatnonzero(cur)
        while len(frontier):
            hits = np.unique(np.concatenate([self.right_col(g)[frontier] for g in gens]))
            hits = hits[~cur[hits]]
            cur[hits] = True
            frontier = hits
        return cur

    def span(self, gen_idx, seed: Subgroup | None = None) -> Subgroup:
        """Subgroup generated by element indices, keeping a short generating list."""
        if seed is None:
            mask = np.zeros(self.order, dtype=bool)
            mask[0] = True
            kept: list[int] = []
        else:
            mask = seed.mask.copy()
            kept = list(seed.gen_idx)
        for g in gen_idx:
            g = int(g)
            if not mask[g]:
                kept.append(g)
                mask = self.close(mask, kept)
        return Subgroup(self, mask=mask, gen_idx=kept)

    def normal_join(self, N: Subgroup, B: Subgroup) -> Subgroup:
        """<N, B> when B normalises N (so that it equals N B)."""
        new = [g for g in B.gen_idx if not N.mask[g]]
        if not new:
            return N
        return Subgroup(self, mask=self.close(N.mask, new), gen_idx=list(N.gen_idx) + new)

    def subgroup(self, gens) -> Subgroup:
        gens = list(gens)
        for p in gens:
            if p.degree != self.degree:
                raise DegreeMismatch(f"degree {p.degree} vs group degree {self.degree}")
        if self._E is not None:
            idx = []
            for p in gens:
                i = int(self.lookup_rows(np.array(p.images))[0])
                if i < 0:
                    raise ValueError(f"{p} is not an element of the group")
                idx.append(i)
            return self.span(idx)
        for p in gens:
            if not self.chain.contains(p.images):
                raise ValueError(f"{p} is not an element of the group")
        return Subgroup(self, gens=gens)

    def subgroup_from_mask(self, mask: np.ndarray) -> Subgroup:
        return Subgroup(self, mask=np.asarray(mask, dtype=bool))

    @cached_property
    def whole(self) -> Subgroup:
        if self._E is not None:
            return Subgroup(self, mask=np.ones(self.order, dtype=bool), gen_idx=self.gen_indices)
        return Subgroup(self, gens=self.gens)

    @cached_property
    def trivial(self) -> Subgroup:
        if self._E is not None:
            m = np.zeros(self.order, dtype=bool)
            m[0] = True
            return Subgroup(self, mask=m, gen_idx=[])
        return Subgroup(self, gens=[])

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)


class Subgroup:
    """A subgroup of an ambient :class:`FiniteGroup`.

    Exhaustive ambients store a boolean element mask; stabchain ambients store
    generators and build their own chain on demand.
    """

    def __init__(self, ambient: FiniteGroup, *, mask=None, gen_idx=None, gens=None):
        self.ambient = ambient
        self.mask = mask
        self._gen_idx = None if gen_idx is None else [int(g) for g in gen_idx]
        self._gens = None if gens is None else tuple(gens)
        self._group = None
        if mask is not None:
            self.order = int(np.count_nonzero(mask))
        else:
            self.order = StabChain([g.images for g in self._gens], ambient.degree).order if self._gens else 1

    # -- generators -----------------------------------------------------

    @property
    def gen_idx(self) -> list[int]:
        if self._gen_idx is None:
            G = self.ambient
            members = np.flatnonzero(self.mask)
            orders = G.cache.get("element_orders")
            if orders is not None:
                members = members[np.argsort(-orders[members], kind="stable")]
            cur = np.zeros(G.order, dtype=bool)
            cur[0] = True
            kept = []
            count = 1
            for x in members:
                if count == self.order:
                    break
                if not cur[x]:
                    kept.append(int(x))
                    cur = G.close(cur, kept)
                    count = np.count_nonzero(cur)
            self._gen_idx = kept
        return self._gen_idx

    @property
    def gens(self) -> tuple[Permutation, ...]:
        if self._gens is None:
            self._gens = tuple(self.ambient.element(i) for i in self.gen_idx)
        return self._gens

    # -- comparisons ----------------------------------------------------

    @cached_property
    def key(self) -> bytes:
        if self.mask is None:
            raise ResourceError("subgroup keys need an exhaustive ambient")
        return np.packbits(self.mask).tobytes()

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        if not isinstance(other, Subgroup) or other.ambient is not self.ambient:
            return NotImplemented
        if self.mask is not None:
            return self.order == other.order and bool((self.mask == other.mask).all())
        return self.order == other.order and self <= other

    def __le__(self, other: Subgroup) -> bool:
        if self.mask is not None:
            return not bool((self.mask & ~other.mask).any())
        return all(other.contains(g) for g in self.gens)

    def __lt__(self, other: Subgroup) -> bool:
        return self.order < other.order and self <= other

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def __and__(self, other: Subgroup) -> Subgroup:
        self.ambient.require_exhaustive("subgroup intersection")
        return Subgroup(self.ambient, mask=self.mask & other.mask)

    def join(self, other: Subgroup) -> Subgroup:
        if self.mask is not None:
            return self.ambient.span(other.gen_idx, seed=self)
        return Subgroup(self.ambient, gens=self.gens + other.gens)

    def contains(self, p: Permutation) -> bool:
        if self.mask is not None:
            i = int(self.ambient.lookup_rows(np.array(p.images))[0])
            return i >= 0 and bool(self.mask[i])
        if not self._gens:
            return p.is_identity()
        return self.as_group().chain.contains(p.images)

    @property
    def index(self) -> int:
        return self.ambient.order // self.order

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.ambient.order

    def is_normal(self) -> bool:
        G = self.ambient
        if self.mask is not None:
            return all(bool(self.mask[G.conj_col(g)[self.gen_idx]].all()) for g in G.gen_indices)
        return all(self.contains(h.conj(g)) for g in G.gens for h in self.gens)

    def elements_idx(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def as_group(self) -> FiniteGroup:
        """This subgroup as a group in its own right (same degree)."""
        if self._group is None:
            G = self.ambient
            if self.mask is not None:
                self._group = FiniteGroup(self.gens, G.degree, self.order, elements=G._E[self.mask])
            else:
                self._group = generate(self.gens, degree=G.degree)
        return self._group

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.ambient!r}>"


def restrict(sub: Subgroup, K: FiniteGroup) -> Subgroup:
    """View ``sub`` (a subgroup of some exhaustive group, contained in K's elements) inside K."""
    rows = sub.ambient._E[sub.mask]
    idx = K.lookup_rows(rows)
    if (idx < 0).any():
        raise ValueError("subgroup is not contained in the target group")
    mask = np.zeros(K.order, dtype=bool)
    mask[idx] = True
    return Subgroup(K, mask=mask)


def lift(K: Subgroup, S: Subgroup) -> Subgroup:
    """Map a subgroup S of ``K.as_group()`` back into K's ambient group."""
    G = K.ambient
    if S.ambient is not K.as_group():
        raise ValueError("S must be a subgroup of K.as_group()")
    mask = np.zeros(G.order, dtype=bool)
    mask[np.flatnonzero(K.mask)[S.mask]] = True
    gen_idx = np.flatnonzero(K.mask)[S.gen_idx] if S._gen_idx is not None else None
    return Subgroup(G, mask=mask, gen_idx=gen_idx)


def generate(gens, engine: str | None = None, *, degree: int | None = None,
             max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER,
             hard_cap: int = DEFAULT_HARD_CAP) -> FiniteGroup:
    """Group generated by ``gens``.

    ``engine`` may force ``"exhaustive"`` or ``"stabchain"``; by default the
    exhaustive engine is used up to ``max_exhaustive`` elements.
    """
    gens = list(gens)
    degrees = {g.degree for g in gens}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) > 1:
        raise DegreeMismatch(f"generators of mixed degrees {sorted(degrees)}")
    d = degrees.pop() if degrees else 1
    chain = StabChain([g.images for g in gens], d)
    order = chain.order
    if order > hard_cap:
        raise ResourceError(f"group order {order} exceeds the hard cap {hard_cap}")
    if engine not in (None, "exhaustive", "stabchain"):
        raise ValueError(f"unknown engine {engine!r}")
    want_exhaustive = engine == "exhaustive" or (engine is None and order <= max_exhaustive)
    if engine == "exhaustive" and order > max_exhaustive:
        raise ResourceError(f"order {order} above exhaustive cap {max_exhaustive}")
    if not want_exhaustive:
        return FiniteGroup(gens, d, order, chain=chain)
    arrs = [np.array(g.images, dtype=np.int32) for g in gens if not g.is_identity()]
    for salt in range(4):
        E = _enumerate(arrs, d, order, salt)
        if E is not None:
            break
    else:
        raise RuntimeError("element enumeration disagrees with the stabiliser chain order")
    E = E[np.lexsort(E.T[::-1])]
    return FiniteGroup(gens, d, order, chain=chain, elements=E)
