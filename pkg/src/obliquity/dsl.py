"""A small expression language naming groups and towers.

    expr  := group | tower
    group := cyclic(n) | sym(n) | alt(n) | dihedral(order) | quaternion(order)
           | elemab(p, k) | prod(group, group) | wr(group, group)
    tower := cyclictower(p, depth) | wreathtower(group, depth)
           | prodtower(tower, tower) | elemabtower(p, depth)

Whitespace is ignored.  ``print_ast`` gives the canonical spelling, which
``parse`` reads back to an equal tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .permcore import constructions as cons
from .permcore.group import DEFAULT_EXHAUSTIVE_ORDER, FiniteGroup, ResourceError
from .permcore.structure import _prime_factors
from . import towers


class DslSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class DslRangeError(ValueError):
    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class DslEvalError(ValueError):
    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class Ast:
    kind: str
    args: tuple[int, ...] = ()
    children: tuple["Ast", ...] = ()

    @property
    def is_tower(self) -> bool:
        return self.kind in TOWER_KINDS

    def __str__(self):
        return print_ast(self)


# kind -> argument slots: "n" natural, "p" prime, "g" group, "t" tower
SIGNATURES = {
    "cyclic": "n", "sym": "n", "alt": "n", "dihedral": "n", "quaternion": "n",
    "elemab": "pn", "prod": "gg", "wr": "gg",
    "cyclictower": "pn", "wreathtower": "gn", "prodtower": "tt", "elemabtower": "pn",
}
TOWER_KINDS = {"cyclictower", "wreathtower", "prodtower", "elemabtower"}

_TOKEN = re.compile(r"\s*(?:([a-z]+)|(\d+)|([(),]))")


def _is_prime(p: int) -> bool:
    return p >= 2 and _prime_factors(p) == [p]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                start = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise DslSyntaxError(f"unexpected character {text[start]!r}", start)
            kind = "name" if m.group(1) else "int" if m.group(2) else m.group(3)
            self.toks.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.text))

    def expect(self, kind: str, what: str):
        tok = self.peek()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise DslSyntaxError(f"expected {what}, found {found}", tok[2])
        self.i += 1
        return tok

    def node(self, path: str) -> Ast:
        _, name, pos = self.expect("name", "a constructor name")
        if name not in SIGNATURES:
            raise DslSyntaxError(f"unknown constructor {name!r}", pos)
        here = f"{path}/{name}" if path else name
        self.expect("(", "'('")
        args, children = [], []
        for k, slot in enumerate(SIGNATURES[name]):
            if k:
                self.expect(",", "','")
            if slot in "np":
                _, digits, _ = self.expect("int", "an integer")
                args.append(int(digits))
            else:
                child = self.node(f"{here}[{k}]")
                want_tower = slot == "t"
                if child.is_tower != want_tower:
                    raise DslRangeError(f"argument {k} must be a {'tower' if want_tower else 'group'}", here)
                children.append(child)
        self.expect(")", "')'")
        ast = Ast(name, tuple(args), tuple(children))
        _check_ranges(ast, here)
        return ast


def _check_ranges(a: Ast, path: str):
    sig = [s for s in SIGNATURES[a.kind] if s in "np"]
    for slot, v in zip(sig, a.args):
        if v < 1:
            raise DslRangeError(f"{v} must be >= 1", path)
        if slot == "p" and not _is_prime(v):
            raise DslRangeError(f"{v} is not prime", path)
    if a.kind == "dihedral" and (a.args[0] < 4 or a.args[0] % 2):
        raise DslRangeError("dihedral takes an even order >= 4", path)
    if a.kind == "quaternion" and (a.args[0] < 8 or a.args[0] & (a.args[0] - 1)):
        raise DslRangeError("quaternion takes an order 2^k >= 8", path)


def parse(text: str) -> Ast:
    p = _Parser(text)
    ast = p.node("")
    tok = p.peek()
    if tok[0] != "eof":
        raise DslSyntaxError(f"trailing input {tok[1]!r}", tok[2])
    return ast


def print_ast(a: Ast) -> str:
    parts = []
    ints = iter(a.args)
    kids = iter(a.children)
    for slot in SIGNATURES[a.kind]:
        parts.append(str(next(ints)) if slot in "np" else print_ast(next(kids)))
    return f"{a.kind}({','.join(parts)})"


def canonical(text: str) -> str:
    return print_ast(parse(text))


_CACHE: dict[tuple[str, int], object] = {}


def evaluate(a: Ast, max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER, _path: str = "") -> FiniteGroup | towers.Tower:
    """Build the group or tower; equal canonical spellings share one result."""
    key = (print_ast(a), max_exhaustive)
    if key not in _CACHE:
        _CACHE[key] = _build(a, f"{_path}/{a.kind}" if _path else a.kind, max_exhaustive)
    return _CACHE[key]


def _build(a: Ast, path: str, cap: int):
    kw = {"max_exhaustive": cap}
    kids = [evaluate(c, cap, f"{path}[{k}]") for k, c in enumerate(a.children)]
    try:
        k, args = a.kind, a.args
        if k == "cyclic":
            return cons.cyclic(args[0], **kw)
        if k == "sym":
            return cons.symmetric(args[0], **kw)
        if k == "alt":
            return cons.alternating(args[0], **kw)
        if k == "dihedral":
            return cons.dihedral(args[0], **kw)
        if k == "quaternion":
            return cons.quaternion(args[0], **kw)
        if k == "elemab":
            return cons.elementary_abelian(args[0], args[1], **kw)
        if k == "prod":
            return cons.direct_product(kids[0], kids[1], **kw)
        if k == "wr":
            if not cons.is_transitive(kids[1]):
                raise ValueError("the top group of wr(a, b) must act transitively")
            return cons.wreath_product(kids[0], kids[1], **kw)
        if k == "cyclictower":
            return towers.build_cyclic_tower(args[0], args[1])
        if k == "elemabtower":
            return towers.build_elemab_tower(args[0], args[1])
        if k == "wreathtower":
            return towers.build_wreath_tower(kids[0], args[0], **kw)
        if k == "prodtower":
            return towers.product_tower(kids[0], kids[1])
    except ResourceError as e:
        raise ResourceError(f"{path}: {e}") from e
    except ValueError as e:
        raise DslEvalError(str(e), path) from e
    raise DslEvalError(f"no builder for {a.kind!r}", path)
