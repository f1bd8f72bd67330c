"""Standard groups and the product/quotient constructions."""

from __future__ import annotations

import warnings

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .group import (DEFAULT_EXHAUSTIVE_ORDER, DEFAULT_HARD_CAP, FiniteGroup, NotNormalError,
                    ResourceError, Subgroup, generate)
from .homomorphism import Homomorphism
from .perm import Permutation

# quotient groups act on cosets; the element array is index x index
_QUOTIENT_CELL_LIMIT = 50_000_000


def cyclic(n: int, **kw) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic order must be >= 1")
    if n == 1:
        return generate([], degree=1, **kw)
    return generate([Permutation(tuple(list(range(1, n)) + [0]))], **kw)


def symmetric(n: int, **kw) -> FiniteGroup:
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n == 1:
        return generate([], degree=1, **kw)
    gens = [Permutation.from_cycles([[0, 1]], n)]
    if n > 2:
        gens.append(Permutation.from_cycles([list(range(n))], n))
    return generate(gens, **kw)


def alternating(n: int, **kw) -> FiniteGroup:
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n < 3:
        return generate([], degree=n, **kw)
    gens = [Permutation.from_cycles([[0, 1, i]], n) for i in range(2, n)]
    return generate(gens, **kw)


def dihedral(order: int, **kw) -> FiniteGroup:
    """Dihedral group of the given order (even, >= 4)."""
    if order < 4 or order % 2:
        raise ValueError("dihedral order must be even and >= 4")
    m = order // 2
    if m == 2:
        return generate([Permutation.from_cycles("(0 1)(2 3)", 4),
                         Permutation.from_cycles("(0 2)(1 3)", 4)], **kw)
    rot = Permutation(tuple((i + 1) % m for i in range(m)))
    ref = Permutation(tuple((-i) % m for i in range(m)))
    return generate([rot, ref], **kw)


def quaternion(order: int, **kw) -> FiniteGroup:
    """Generalised quaternion group of order 2**k >= 8, in its regular representation."""
    if order < 8 or order & (order - 1):
        raise ValueError("quaternion order must be a power of two >= 8")
    h = order // 2

    def mult(x, y):
        i1, j1 = x % h, x // h
        i2, j2 = y % h, y // h
        i = (i1 + (-i2 if j1 else i2)) % h
        j = j1 + j2
        if j == 2:
            i, j = (i + h // 2) % h, 0
        return i + h * j

    a, b = 1, h
    gens = [Permutation(tuple(mult(x, g) for x in range(order))) for g in (a, b)]
    return generate(gens, **kw)


def elementary_abelian(p: int, k: int, **kw) -> FiniteGroup:
    """(C_p)^k as k disjoint p-cycles."""
    if k < 1:
        raise ValueError("rank must be >= 1")
    deg = p * k
    gens = [Permutation.from_cycles([list(range(i * p, (i + 1) * p))], deg) for i in range(k)]
    return generate(gens, **kw)


def _shift(p: Permutation, offset: int, degree: int) -> Permutation:
    img = list(range(degree))
    for i, j in enumerate(p.images):
        img[offset + i] = offset + j
    return Permutation(tuple(img))


def direct_product(A: FiniteGroup, B: FiniteGroup, *, max_exhaustive=DEFAULT_EXHAUSTIVE_ORDER,
                   hard_cap=DEFAULT_HARD_CAP) -> FiniteGroup:
    """A x B acting on the disjoint union of their point sets (A's points first)."""
    if A.order * B.order > hard_cap:
        raise ResourceError(f"product order {A.order * B.order} exceeds the hard cap")
    d = A.degree + B.degree
    gens = [_shift(g, 0, d) for g in A.gens] + [_shift(g, A.degree, d) for g in B.gens]
    P = generate(gens, degree=d, max_exhaustive=max_exhaustive, hard_cap=hard_cap)
    P.cache["factors"] = (A, B)
    return P


def product_embeddings(P: FiniteGroup) -> tuple[Subgroup, Subgroup]:
    """The canonical copies of A and B inside ``P = direct_product(A, B)``."""
    A, B = P.cache["factors"]
    d = P.degree
    left = P.subgroup([_shift(g, 0, d) for g in A.gens])
    right = P.subgroup([_shift(g, A.degree, d) for g in B.gens])
    return left, right


def is_transitive(G: FiniteGroup) -> bool:
    seen = {0}
    queue = [0]
    for x in queue:
        for g in G.gens:
            y = g(x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == G.degree


def wreath_product(base: FiniteGroup, top: FiniteGroup, *, max_exhaustive=DEFAULT_EXHAUSTIVE_ORDER,
                   hard_cap=DEFAULT_HARD_CAP) -> FiniteGroup:
    """Imprimitive wreath product: ``top`` permutes m blocks, each a copy of ``base``'s points.

    Point ``j * b + i`` is point i of block j.  With a transitive top group
    the base generators are only placed in block 0.
    """
    b, m = base.degree, top.degree
    order = base.order ** m * top.order
    if order > hard_cap:
        raise ResourceError(f"wreath product order {order} exceeds the hard cap")
    d = b * m
    transitive = is_transitive(top)
    if not transitive:
        warnings.warn("top group is not transitive; placing base generators in every block", stacklevel=2)
    blocks = [0] if transitive else range(m)
    gens = [_shift(g, j * b, d) for j in blocks for g in base.gens]
    for t in top.gens:
        gens.append(Permutation(tuple(t(j) * b + i for j in range(m) for i in range(b))))
    return generate(gens, degree=d, max_exhaustive=max_exhaustive, hard_cap=hard_cap)


def _coset_labels(G: FiniteGroup, N: Subgroup) -> np.ndarray:
    """Label each element by the smallest element index of its right coset N x."""
    n = G.order
    rows, cols = [], []
    allx = np.arange(n)
    for g in N.gen_idx:
        rows.append(allx)
        cols.append(G.left_col(g))
    if not rows:
        return allx
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
    _, comp = connected_components(graph, directed=True, connection="weak")
    rep = np.full(comp.max() + 1, n, dtype=np.int64)
    np.minimum.at(rep, comp, allx)
    return rep[comp]


def quotient_map(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, Homomorphism]:
    """G/N acting on the right cosets of N, with the projection G -> G/N."""
    G.require_exhaustive("quotient construction")
    if N.ambient is not G:
        raise ValueError("N must be a subgroup of G")
    if not N.is_normal():
        raise NotNormalError("quotient by a non-normal subgroup")
    idx = N.index
    if idx * idx > _QUOTIENT_CELL_LIMIT:
        raise ResourceError(f"quotient of index {idx} is too large to represent")
    labels = _coset_labels(G, N)
    reps = np.unique(labels)
    point = np.full(G.order, -1, dtype=np.int64)
    point[reps] = np.arange(len(reps))
    gens = []
    for g in G.gen_indices:
        img = point[labels[G.right_col(g)[reps]]]
        gens.append(Permutation(tuple(int(v) for v in img)))
    Q = generate(gens, degree=idx, max_exhaustive=max(idx, DEFAULT_EXHAUSTIVE_ORDER))
    proj = Homomorphism(G, Q, gens, trusted=True)
    proj.__dict__["kernel"] = N
    return Q, proj
