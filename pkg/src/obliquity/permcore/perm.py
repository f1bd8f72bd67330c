"""Permutations of {0, ..., n-1} stored as image tuples.

Products are read left to right: ``(p * q)(i) == q(p(i))``, so ``p`` acts
first.  Conjugation is ``x ** g == g**-1 * x * g`` and the commutator is
``[a, b] == a**-1 * b**-1 * a * b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) < 1:
            raise ValueError("permutation degree must be >= 1")
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles, degree: int | None = None) -> Permutation:
        """Build from a cycle string ``"(0 1 2)(3 4)"`` or a list of cycles."""
        if isinstance(cycles, str):
            cycles = parse_cycles(cycles)
        top = max((max(c) for c in cycles if c), default=0) + 1
        if degree is None:
            degree = top
        elif top > degree:
            raise ValueError(f"cycle point {top - 1} outside degree {degree}")
        img = list(range(degree))
        seen = set()
        for c in cycles:
            if len(set(c)) != len(c) or seen & set(c):
                raise ValueError(f"cycles are not disjoint: {cycles}")
            seen |= set(c)
            for a, b in zip(c, c[1:] + c[:1]):
                img[a] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.degree != other.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        o = other.images
        return Permutation(tuple(o[i] for i in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self, g: Permutation) -> Permutation:
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation({self}, degree={self.degree})"


def commutator(a: Permutation, b: Permutation) -> Permutation:
    return a.inverse() * b.inverse() * a * b


def parse_cycles(text: str) -> list[list[int]]:
    """Parse cycle notation; ``"()"`` and ``""`` are the identity."""
    stripped = text.strip()
    if stripped in ("", "()"):
        return []
    rest = _CYCLE_RE.sub("", stripped)
    if rest.strip():
        raise ValueError(f"could not parse permutation {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        pts = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
        if pts:
            cycles.append(pts)
    return cycles
