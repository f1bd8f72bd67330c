"""The built-in corpus of small groups used by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .dsl import Ast, evaluate, parse, print_ast
from .permcore.group import FiniteGroup
from .permcore.structure import _prime_factors, is_abelian

CATALOG_MAX_ORDER = 2000

# factors for the pairwise products; their orders are known up front
_PRODUCT_FACTORS = [
    ("cyclic(2)", 2), ("cyclic(3)", 3), ("cyclic(4)", 4), ("elemab(2,2)", 4), ("sym(3)", 6),
    ("dihedral(8)", 8), ("quaternion(8)", 8), ("alt(4)", 12), ("sym(4)", 24), ("alt(5)", 60),
]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    ast: Ast
    order: int
    tags: tuple[str, ...]

    @property
    def group(self) -> FiniteGroup:
        return evaluate(self.ast)


def _tags(G: FiniteGroup) -> tuple[str, ...]:
    from .invariants import NILPOTENT, SIMPLE, SOLUBLE

    tags = []
    ps = _prime_factors(G.order)
    if is_abelian(G):
        tags.append("abelian")
    if len(ps) == 1:
        tags.append("p-group")
    if G.order > 1 and SIMPLE(G):
        tags.append("simple")
    if NILPOTENT(G):
        tags.append("nilpotent")
    if SOLUBLE(G):
        tags.append("soluble")
    return tuple(tags)


def _expressions() -> list[str]:
    out = [f"cyclic({n})" for n in range(1, 65)]
    for p in (2, 3, 5, 7):
        k = 2
        while p ** k <= 64:
            out.append(f"elemab({p},{k})")
            k += 1
    out += [f"dihedral({n})" for n in range(4, 65, 2)]
    out += [f"quaternion({n})" for n in (8, 16, 32)]
    out += [f"sym({n})" for n in range(3, 6)]
    out += [f"alt({n})" for n in range(4, 7)]
    for i, (a, oa) in enumerate(_PRODUCT_FACTORS):
        for b, ob in _PRODUCT_FACTORS[i:]:
            if oa * ob <= CATALOG_MAX_ORDER:
                out.append(f"prod({a},{b})")
    return out


@lru_cache(maxsize=None)
def catalog() -> tuple[CatalogEntry, ...]:
    """Every catalog entry, sorted by (order, name)."""
    entries = []
    for text in _expressions():
        ast = parse(text)
        G = evaluate(ast)
        entries.append(CatalogEntry(print_ast(ast), ast, G.order, _tags(G)))
    entries.sort(key=lambda e: (e.order, e.name))
    return tuple(entries)


def entries(max_order: int = CATALOG_MAX_ORDER, min_order: int = 1) -> list[CatalogEntry]:
    return [e for e in catalog() if min_order <= e.order <= max_order]

