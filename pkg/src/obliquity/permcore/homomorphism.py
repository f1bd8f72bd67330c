"""Homomorphisms between permutation groups, defined by generator images."""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .group import FiniteGroup, Subgroup, generate
from .perm import Permutation
from .stabchain import StabChain


class NotAHomomorphism(ValueError):
    pass


class Homomorphism:
    """The map sending ``domain.gens[i]`` to ``images[i]``.

    Well-definedness is checked at construction unless ``trusted`` is set
    (projections and truncations that are homomorphisms by design).
    Exhaustive domains get a full element table; otherwise the graph of the
    map, ``<(g, phi(g))>`` on the disjoint union of the point sets, is used.
    """

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, images, *, trusted: bool = False):
        images = list(images)
        if len(images) != len(domain.gens):
            raise ValueError("need exactly one image per domain generator")
        for p in images:
            if not codomain.is_member(p):
                raise NotAHomomorphism(f"image {p} is not in the codomain")
        self.domain = domain
        self.codomain = codomain
        self.images = images
        self.verified_by_construction = trusted
        if domain.is_exhaustive and codomain.is_exhaustive:
            self._build_table(check=not trusted)
        else:
            self._table = None
            if not trusted and self._graph_chain(0).order != domain.order:
                raise NotAHomomorphism("generator images do not extend to a homomorphism")

    # -- construction helpers -------------------------------------------

    def _build_table(self, check: bool):
        D, C = self.domain, self.codomain
        img_idx = [C.index(p) for p in self.images]
        gen_idx = D.gen_indices
        table = np.full(D.order, -1, dtype=np.int64)
        table[0] = 0
        frontier = np.array([0])
        while len(frontier):
            nxt = []
            for g, ig in zip(gen_idx, img_idx):
                y = D.right_col(g)[frontier]
                fresh = table[y] < 0
                if fresh.any():
                    table[y[fresh]] = C.mul(table[frontier[fresh]], ig)
                    nxt.append(y[fresh])
            frontier = np.unique(np.concatenate(nxt)) if nxt else np.array([], dtype=int)
        if check:
            allx = np.arange(D.order)
            for g, ig in zip(gen_idx, img_idx):
                if not (table[D.right_col(g)] == C.mul(table[allx], ig)).all():
                    raise NotAHomomorphism("generator images do not extend to a homomorphism")
        self._table = table

    def _graph_chain(self, which: int) -> StabChain:
        # which=0: codomain points first (kernel / lifting); which=1: domain points first (evaluation)
        key = f"_graph{which}"
        if key not in self.__dict__:
            d1, d2 = self.domain.degree, self.codomain.degree
            gens = [g.images + tuple(d1 + i for i in h.images) for g, h in zip(self.domain.gens, self.images)]
            prefix = range(d1, d1 + d2) if which == 0 else range(d1)
            self.__dict__[key] = StabChain(gens, d1 + d2, base_prefix=list(prefix))
        return self.__dict__[key]

    # -- evaluation -----------------------------------------------------

    @property
    def table(self) -> np.ndarray:
        """``table[i]`` is the codomain index of the image of domain element i."""
        if self._table is None:
            raise ValueError("element tables need exhaustive domain and codomain")
        return self._table

    def __call__(self, p: Permutation) -> Permutation:
        if self._table is not None:
            return self.codomain.element(int(self._table[self.domain.index(p)]))
        d1 = self.domain.degree
        chain = self._graph_chain(1)
        res, j = chain.sift(p.images + tuple(range(d1, d1 + self.codomain.degree)), 0, d1)
        if j < d1 or any(res[i] != i for i in range(d1)):
            raise ValueError(f"{p} is not in the domain")
        return Permutation(tuple(res[d1 + i] - d1 for i in range(self.codomain.degree))).inverse()

    def lift(self, y: Permutation) -> Permutation:
        """Some preimage of ``y``."""
        if self._table is not None:
            hits = np.flatnonzero(self._table == self.codomain.index(y))
            if not len(hits):
                raise ValueError(f"{y} is not in the image")
            return self.domain.element(int(hits[0]))
        d1, d2 = self.domain.degree, self.codomain.degree
        chain = self._graph_chain(0)
        res, j = chain.sift(tuple(range(d1)) + tuple(d1 + i for i in y.images), 0, d2)
        if j < d2 or any(res[d1 + i] != d1 + i for i in range(d2)):
            raise ValueError(f"{y} is not in the image")
        return Permutation(tuple(res[:d1])).inverse()

    # -- derived subgroups ----------------------------------------------

    @cached_property
    def kernel(self) -> Subgroup:
        D = self.domain
        if self._table is not None:
            return D.subgroup_from_mask(self._table == 0)
        d1, d2 = D.degree, self.codomain.degree
        gens = self._graph_chain(0).stabilizer_generators(d2)
        return D.subgroup([Permutation(tuple(g[:d1])) for g in gens])

    @cached_property
    def image(self) -> Subgroup:
        return self.codomain.subgroup(self.images)

    @property
    def surjective(self) -> bool:
        return self.image.order == self.codomain.order

    def image_of(self, S: Subgroup) -> Subgroup:
        if self._table is not None:
            return self.codomain.span(self._table[S.gen_idx])
        return self.codomain.subgroup([self(g) for g in S.gens])

    def preimage(self, S: Subgroup) -> Subgroup:
        if self._table is not None:
            return self.domain.subgroup_from_mask(S.mask[self._table])
        gens = list(self.kernel.gens) + [self.lift(y) for y in S.gens]
        return self.domain.subgroup(gens)

    def compose(self, after: Homomorphism) -> Homomorphism:
        """``after o self``: apply self, then ``after``."""
        if after.domain is not self.codomain:
            raise ValueError("composition needs matching codomain/domain")
        imgs = [after(p) for p in self.images]
        return Homomorphism(self.domain, after.codomain, imgs,
                            trusted=self.verified_by_construction and after.verified_by_construction)


def identity_map(G: FiniteGroup) -> Homomorphism:
    return Homomorphism(G, G, list(G.gens), trusted=True)


def map_from_images(domain: FiniteGroup, images) -> Homomorphism:
    """Homomorphism onto the group generated by ``images`` (verified)."""
    images = list(images)
    cod = generate(images, degree=images[0].degree if images else 1)
    return Homomorphism(domain, cod, images)
