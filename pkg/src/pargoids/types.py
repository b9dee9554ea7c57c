"""Type terms: the absolutely free algebra of arrow types over ground names.

Equality is structural: no arrow equals a ground, and two arrows are equal
exactly when their components are. Terms are immutable and hashable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InputError

GROUND_RE = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class Ground:
    name: str


@dataclass(frozen=True)
class Arrow:
    antecedent: "TypeTerm"
    consequent: "TypeTerm"


TypeTerm = Ground | Arrow


def type_size(t):
    """Node count: grounds are 1, an arrow is 1 + both components."""
    if isinstance(t, Ground):
        return 1
    return 1 + type_size(t.antecedent) + type_size(t.consequent)


def format_type(t):
    """Right-associative arrow syntax; parentheses only on arrow antecedents."""
    if isinstance(t, Ground):
        return t.name
    left = format_type(t.antecedent)
    if isinstance(t.antecedent, Arrow):
        left = f"({left})"
    return f"{left} -> {format_type(t.consequent)}"


class _TypeScanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def error(self, message):
        raise InputError(message, 1, self.pos + 1)

    def atom(self):
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "(":
            self.pos += 1
            inner = self.arrow()
            self.skip_ws()
            if self.pos >= len(self.text) or self.text[self.pos] != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        m = GROUND_RE.match(self.text, self.pos)
        if not m:
            self.error("expected a ground name or '('")
        self.pos = m.end()
        return Ground(m.group())

    def arrow(self):
        left = self.atom()
        self.skip_ws()
        if self.text.startswith("->", self.pos):
            self.pos += 2
            return Arrow(left, self.arrow())
        return left


def parse_type(s):
    """Inverse of format_type; arrows associate to the right."""
    scanner = _TypeScanner(s)
    term = scanner.arrow()
    scanner.skip_ws()
    if scanner.pos != len(s):
        scanner.error("trailing input after type")
    return term


def subterms(t):
    """All subterms of t, including t itself."""
    out = {t}
    if isinstance(t, Arrow):
        out |= subterms(t.antecedent)
        out |= subterms(t.consequent)
    return out


def strict_closure_check(inhabited):
    """Whether the set is closed under arrow components."""
    pool = set(inhabited)
    return all(
        t.antecedent in pool and t.consequent in pool
        for t in pool
        if isinstance(t, Arrow)
    )


@dataclass(frozen=True)
class Typing:
    """A total type assignment over a carrier.

    types[i] is the type of element i. ground_classes maps each ground
    name introduced by typing construction to the element block it names;
    it is empty for typings loaded from files.
    """

    types: tuple
    ground_classes: dict


def type_to_json(t):
    """JSON encoding: ground as string, arrow as a two-element array."""
    if isinstance(t, Ground):
        return t.name
    return [type_to_json(t.antecedent), type_to_json(t.consequent)]


def type_from_json(doc):
    if isinstance(doc, str):
        if not GROUND_RE.fullmatch(doc):
            raise InputError(f"invalid ground name {doc!r}")
        return Ground(doc)
    if isinstance(doc, list) and len(doc) == 2:
        return Arrow(type_from_json(doc[0]), type_from_json(doc[1]))
    raise InputError(f"invalid type encoding {doc!r}")
