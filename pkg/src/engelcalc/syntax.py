"""Word grammar: parsing bracket notation into group words and printing back.

Grammar::

    word   := factor+
    factor := atom [ "^" ( "-1" | INT | atom ) ]
    atom   := NAME | "1" | "[" word ("," word)+ "]" | "(" word ")"
    NAME   := letter followed by optional digits

Brackets with more than two entries are left-normed, ``a^b`` is the
conjugate ``b^-1 a b`` and ``1`` is the identity.
"""
from __future__ import annotations

import re
from itertools import groupby
from dataclasses import dataclass
from typing import Mapping, Union

from .words import (IDENTITY, GroupWord, conjugate, gen, invert, left_normed,
                    multiply, power)

DEFAULT_LETTERS = {"x": 1, "y": 2, "z": 3, "w": 4}

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z]\d*)|(?P<int>-?\d+)|(?P<sym>[\[\](),^]))")


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}: {text!r}")


class UnknownGenerator(WordSyntaxError):
    pass


# --- syntax tree ---------------------------------------------------------------

@dataclass(frozen=True)
class Gen:
    index: int


@dataclass(frozen=True)
class Inverse:
    node: "Node"


@dataclass(frozen=True)
class Power:
    node: "Node"
    exponent: int


@dataclass(frozen=True)
class Product:
    nodes: tuple["Node", ...]


@dataclass(frozen=True)
class Conj:
    node: "Node"
    by: "Node"


@dataclass(frozen=True)
class LeftNormed:
    nodes: tuple["Node", ...]


Node = Union[Gen, Inverse, Power, Product, Conj, LeftNormed]


def lower(node: Node) -> GroupWord:
    if isinstance(node, Gen):
        return gen(node.index) if node.index else IDENTITY
    if isinstance(node, Inverse):
        return invert(lower(node.node))
    if isinstance(node, Power):
        return power(lower(node.node), node.exponent)
    if isinstance(node, Product):
        return multiply(*(lower(n) for n in node.nodes))
    if isinstance(node, Conj):
        return conjugate(lower(node.node), lower(node.by))
    return left_normed([lower(n) for n in node.nodes])


# --- alphabets -----------------------------------------------------------------

class Alphabet:
    """Maps generator names to indices and back.

    By default ``x, y, z, w`` are 1..4 and any letter followed by digits
    (``m3``, ``g12``) is the generator with that number.  An explicit name
    list overrides this.
    """

    def __init__(self, names: list[str] | None = None, prefix: str = "x"):
        self.names = list(names) if names else None
        self.prefix = prefix
        if self.names:
            for nm in self.names:
                if not re.fullmatch(r"[A-Za-z]\d*", nm):
                    raise ValueError(f"bad generator name {nm!r}")
            if len(set(self.names)) != len(self.names):
                raise ValueError(f"duplicate generator names: {self.names}")
            self._index = {nm: i + 1 for i, nm in enumerate(self.names)}

    def index(self, name: str) -> int | None:
        if self.names:
            return self._index.get(name)
        if name in DEFAULT_LETTERS:
            return DEFAULT_LETTERS[name]
        if len(name) > 1 and int(name[1:]) > 0:
            return int(name[1:])
        return None

    def name(self, i: int) -> str:
        if self.names:
            if not 1 <= i <= len(self.names):
                raise ValueError(f"generator {i} outside alphabet {self.names}")
            return self.names[i - 1]
        return f"{self.prefix}{i}"


def meridians() -> Alphabet:
    return Alphabet(prefix="m")


# --- parser --------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                start = len(text) - len(text[pos:].lstrip())
                raise WordSyntaxError(f"unexpected character {text[start]!r}", start, text)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self, sym: str | None = None):
        tok = self.peek()
        if sym is not None and tok[1] != sym:
            found = "end of input" if tok[0] is None else repr(tok[1])
            raise WordSyntaxError(f"expected {sym!r}, found {found}", tok[2], self.text)
        self.i += 1
        return tok

    def word(self) -> Node:
        nodes = [self.factor()]
        while self.peek()[0] in ("name", "int") or self.peek()[1] in ("[", "("):
            nodes.append(self.factor())
        return nodes[0] if len(nodes) == 1 else Product(tuple(nodes))

    def factor(self) -> Node:
        node = self.atom()
        if self.peek()[1] == "^":
            self.take("^")
            kind, val, pos = self.peek()
            if kind == "int":
                self.take()
                node = Inverse(node) if int(val) == -1 else Power(node, int(val))
            else:
                node = Conj(node, self.atom())
        return node

    def atom(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "name":
            self.take()
            idx = self.alphabet.index(val)
            if idx is None:
                raise UnknownGenerator(f"unknown generator {val!r}", pos, self.text)
            return Gen(idx)
        if kind == "int":
            if val != "1":
                raise WordSyntaxError(f"unexpected number {val!r}", pos, self.text)
            self.take()
            return Gen(0)
        if val == "(":
            self.take("(")
            node = self.word()
            self.take(")")
            return node
        if val == "[":
            self.take("[")
            entries = [self.word()]
            while self.peek()[1] == ",":
                self.take(",")
                entries.append(self.word())
            self.take("]")
            if len(entries) < 2:
                raise WordSyntaxError("bracket needs at least two entries", pos, self.text)
            return LeftNormed(tuple(entries))
        found = "end of input" if kind is None else repr(val)
        raise WordSyntaxError(f"expected a generator, '[' or '(', found {found}", pos, self.text)


def parse_tree(text: str, alphabet: Alphabet | None = None) -> Node:
    p = _Parser(text, alphabet or Alphabet())
    if not p.tokens:
        raise WordSyntaxError("empty word", 0, text)
    node = p.word()
    if p.i != len(p.tokens):
        kind, val, pos = p.peek()
        raise WordSyntaxError(f"unexpected {val!r}", pos, text)
    return node


def parse_word(text: str, alphabet: Alphabet | None = None) -> GroupWord:
    return lower(parse_tree(text, alphabet))


def format_word(u: GroupWord, alphabet: Alphabet | None = None) -> str:
    """Print ``u`` as space-separated powers, e.g. ``x1^-1 x2 x1``; identity is ``1``."""
    alphabet = alphabet or Alphabet()
    if u.is_identity():
        return "1"
    out = []
    for g, run in groupby(u.letters):
        e = len(list(run)) * (1 if g > 0 else -1)
        nm = alphabet.name(abs(g))
        out.append(nm if e == 1 else f"{nm}^{e}")
    return " ".join(out)


def format_entry(entry: tuple[int, ...], alphabet: Alphabet | None = None) -> str:
    alphabet = alphabet or Alphabet()
    return "".join(alphabet.name(g) for g in entry)
