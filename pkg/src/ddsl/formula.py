"""Formula AST, concrete-syntax parser and printer.

Concrete syntax::

    formula := imp
    imp     := or ("->" or)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "D{" agent ("," agent)* "}" unary
             | "[" model "." simplex "]" unary | "(" formula ")"
             | atom | "true" | "false"
    atom    := ident "@" ident

Or, implication, true and false are expanded while parsing, so the AST has
exactly five node types.  The unicode spellings (¬ ∧ ∨ → ⊤ ⊥) are accepted
as aliases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import EmptyGroup, FormulaSyntaxError

BOTTOM_ATOM = "_bot"


class Formula:
    """Common base: structural equality with a cached hash."""

    __match_args__: tuple = ()

    def _key(self):
        return tuple(getattr(self, f) for f in self.__match_args__)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + self._key())
            self.__dict__["_hash"] = h
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __str__(self):
        return to_text(self)

    # operator sugar, handy in tests
    def __and__(self, other):
        return And(self, other)

    def __invert__(self):
        return Not(self)

    def __rshift__(self, other):
        return implies(self, other)


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    name: str
    agent: str

    def __repr__(self):
        return f"Atom({self.name}@{self.agent})"


@dataclass(frozen=True, eq=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Commit(Formula):
    group: tuple
    body: Formula

    def __post_init__(self):
        group = tuple(sorted(set(self.group)))
        if not group:
            raise EmptyGroup("commitment group must be nonempty")
        object.__setattr__(self, "group", group)


@dataclass(frozen=True)
class ActionRef:
    model: str
    simplex: str

    def __str__(self):
        return f"{self.model}.{self.simplex}"


@dataclass(frozen=True, eq=False)
class ActionBox(Formula):
    action: ActionRef
    body: Formula


Box = ActionBox


# -- derived forms ---------------------------------------------------------

def bottom(owner: str = "a") -> Formula:
    p = Atom(BOTTOM_ATOM, owner)
    return And(p, Not(p))


def top(owner: str = "a") -> Formula:
    return Not(bottom(owner))


def implies(x: Formula, y: Formula) -> Formula:
    return Not(And(x, Not(y)))


def disj(x: Formula, y: Formula) -> Formula:
    return Not(And(Not(x), Not(y)))


def iff(x: Formula, y: Formula) -> Formula:
    return And(implies(x, y), implies(y, x))


def diamond(action: ActionRef, body: Formula) -> Formula:
    return Not(ActionBox(action, Not(body)))


def conj(parts: Iterable[Formula], owner: str = "a") -> Formula:
    """Balanced conjunction; the empty conjunction is top(owner)."""
    items = list(parts)
    if not items:
        return top(owner)

    def build(lo, hi):
        if hi - lo == 1:
            return items[lo]
        mid = (lo + hi + 1) // 2
        return And(build(lo, mid), build(mid, hi))

    return build(0, len(items))


def is_bottom(f: Formula) -> bool:
    return (
        isinstance(f, And)
        and isinstance(f.left, Atom)
        and f.left.name == BOTTOM_ATOM
        and isinstance(f.right, Not)
        and f.right.body == f.left
    )


def is_top(f: Formula) -> bool:
    return isinstance(f, Not) and is_bottom(f.body)


# -- traversal -------------------------------------------------------------

def children(f: Formula) -> tuple:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, And):
        return (f.left, f.right)
    return (f.body,)


def subformulas(f: Formula) -> list[Formula]:
    """Pre-order listing of distinct subformulas, the formula itself first."""
    seen = set()
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        out.append(g)
        stack.extend(reversed(children(g)))
    return out


def agents_of(f: Formula) -> set[str]:
    out = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            out.add(g.agent)
        elif isinstance(g, Commit):
            out.update(g.group)
    return out


def actions_of(f: Formula) -> set[ActionRef]:
    return {g.action for g in subformulas(f) if isinstance(g, ActionBox)}


def is_static(f: Formula) -> bool:
    return not any(isinstance(g, ActionBox) for g in subformulas(f))


def depth(f: Formula) -> int:
    kids = children(f)
    return 0 if not kids else 1 + max(depth(k) for k in kids)


def size(f: Formula) -> int:
    return 1 + sum(size(k) for k in children(f))


# -- lexer -----------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_REF_PART = re.compile(r"[A-Za-z0-9_';]+\Z")
_ALIASES = {"¬": "~", "∧": "&", "∨": "|", "→": "->", "⊤": "true", "⊥": "false"}


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _ALIASES:
            alias = _ALIASES[ch]
            kind = "kw" if alias in ("true", "false") else "op"
            toks.append(_Tok(kind, alias, i))
            i += 1
            continue
        if text.startswith("->", i):
            toks.append(_Tok("op", "->", i))
            i += 2
            continue
        if ch in "~&|(){},@":
            toks.append(_Tok("op", ch, i))
            i += 1
            continue
        if ch == "[":
            close = text.find("]", i)
            if close < 0:
                raise FormulaSyntaxError("unterminated action reference", i, text)
            body = text[i + 1 : close].strip()
            model, dot, simplex = body.partition(".")
            if not dot or not _REF_PART.match(model) or not _REF_PART.match(simplex):
                raise FormulaSyntaxError(
                    f"malformed action reference [{body}] (expected [Model.Simplex])", i, text
                )
            toks.append(_Tok("ref", body, i))
            i = close + 1
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group(0)
            kind = "kw" if word in ("true", "false") else "ident"
            toks.append(_Tok(kind, word, i))
            i = m.end()
            continue
        raise FormulaSyntaxError(f"unexpected character {ch!r}", i, text)
    toks.append(_Tok("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, owner: str):
        self.text = text
        self.toks = _lex(text)
        self.i = 0
        self.owner = owner

    def peek(self, offset=0) -> _Tok:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return FormulaSyntaxError(msg, tok.pos, self.text)

    def expect(self, value):
        tok = self.peek()
        if tok.kind != "op" or tok.value != value:
            found = tok.value or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}")
        return self.take()

    def at(self, value) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.value == value

    def parse(self) -> Formula:
        f = self.imp()
        if self.peek().kind != "eof":
            raise self.error(f"unexpected {self.peek().value!r}")
        return f

    def imp(self):
        left = self.disj()
        if self.at("->"):
            self.take()
            left = implies(left, self.disj())
            if self.at("->"):
                raise self.error("'->' is not associative; add parentheses")
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            self.take()
            left = disj(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.value == "~":
            self.take()
            return Not(self.unary())
        if tok.kind == "op" and tok.value == "(":
            self.take()
            f = self.imp()
            self.expect(")")
            return f
        if tok.kind == "ref":
            self.take()
            model, _, simplex = tok.value.partition(".")
            return ActionBox(ActionRef(model, simplex), self.unary())
        if tok.kind == "kw":
            self.take()
            return top(self.owner) if tok.value == "true" else bottom(self.owner)
        if tok.kind == "ident":
            nxt = self.peek(1)
            if tok.value == "D" and nxt.kind == "op" and nxt.value == "{":
                return self.commit()
            self.take()
            self.expect("@")
            agent = self.peek()
            if agent.kind != "ident":
                raise self.error("expected an agent name after '@'")
            self.take()
            return Atom(tok.value, agent.value)
        found = tok.value or "end of input"
        raise self.error(f"expected a formula, found {found!r}")

    def commit(self):
        start = self.take()
        self.expect("{")
        if self.at("}"):
            raise EmptyGroup("empty commitment group D{}", start.pos, self.text)
        group = []
        while True:
            tok = self.peek()
            if tok.kind != "ident":
                raise self.error("expected an agent name in group")
            group.append(self.take().value)
            if self.at(","):
                self.take()
                continue
            self.expect("}")
            break
        return Commit(tuple(group), self.unary())


def _mentioned_agents(text: str) -> set[str]:
    agents = set()
    for tok_i, tok in enumerate(toks := _lex(text)):
        if tok.kind == "op" and tok.value == "@" and toks[tok_i + 1].kind == "ident":
            agents.add(toks[tok_i + 1].value)
    for m in re.finditer(r"D\s*\{([^}]*)\}", text):
        agents.update(a.strip() for a in m.group(1).split(",") if a.strip())
    return agents


def parse(text: str, agents: Iterable[str] | None = None) -> Formula:
    """Parse concrete syntax into an AST.

    ``true``/``false`` use a reserved atom owned by the first agent of
    ``agents`` (or of the agents mentioned in the text when no roster is
    given).
    """
    if agents:
        owner = min(agents)
    else:
        mentioned = _mentioned_agents(text)
        owner = min(mentioned) if mentioned else "a"
    return _Parser(text, owner).parse()


# -- printer ---------------------------------------------------------------

def to_text(f: Formula) -> str:
    if is_bottom(f):
        return "false"
    if is_top(f):
        return "true"
    if isinstance(f, Atom):
        return f"{f.name}@{f.agent}"
    if isinstance(f, Not):
        inner = f.body
        if isinstance(inner, And):
            if isinstance(inner.left, Not) and isinstance(inner.right, Not):
                return f"({to_text(inner.left.body)} | {to_text(inner.right.body)})"
            if isinstance(inner.right, Not):
                return f"({to_text(inner.left)} -> {to_text(inner.right.body)})"
        return "~" + to_text(inner)
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, Commit):
        return "D{" + ",".join(f.group) + "} " + to_text(f.body)
    if isinstance(f, ActionBox):
        return f"[{f.action}] {to_text(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


pretty = to_text
