"""Formula AST for first-order and monadic second-order logic.

Nodes are frozen dataclasses.  Terms are ``Var`` or ``Const``; there are no
function symbols.  ``Top``/``Bottom`` are the truth constants, printed as
``true``/``false``; they only show up in generated formulas (empty
conjunctions, eliminated set atoms).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Union

FORALL = "forall"
EXISTS = "exists"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Const]


class Formula:
    """Base class.  Subclasses provide ``children`` and the free-var sets."""

    __slots__ = ()

    children: tuple = ()

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return frozenset().union(*(c.free_vars for c in self.children))

    @cached_property
    def free_set_vars(self) -> frozenset[str]:
        return frozenset().union(*(c.free_set_vars for c in self.children))

    @property
    def is_sentence(self) -> bool:
        return not self.free_vars and not self.free_set_vars

    def __str__(self):
        return to_text(self)

    # operator sugar for building formulas in code
    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)


def _term_vars(terms: Iterable[Term]) -> frozenset[str]:
    return frozenset(t.name for t in terms if isinstance(t, Var))


@dataclass(frozen=True, eq=True)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, eq=True)
class Pred(Formula):
    name: str
    args: tuple[Term, ...]

    @cached_property
    def free_vars(self):
        return _term_vars(self.args)


@dataclass(frozen=True, eq=True)
class Eq(Formula):
    left: Term
    right: Term

    @cached_property
    def free_vars(self):
        return _term_vars((self.left, self.right))


@dataclass(frozen=True, eq=True)
class SetAtom(Formula):
    var: str
    term: Term

    @cached_property
    def free_vars(self):
        return _term_vars((self.term,))

    @cached_property
    def free_set_vars(self):
        return frozenset((self.var,))


@dataclass(frozen=True, eq=True)
class Not(Formula):
    body: Formula

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=True)
class And(Formula):
    args: tuple[Formula, ...]

    @property
    def children(self):
        return self.args


@dataclass(frozen=True, eq=True)
class Or(Formula):
    args: tuple[Formula, ...]

    @property
    def children(self):
        return self.args


@dataclass(frozen=True, eq=True)
class Implies(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Iff(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class FoQuantifier(Formula):
    kind: str
    var: str
    body: Formula

    @property
    def children(self):
        return (self.body,)

    @cached_property
    def free_vars(self):
        return self.body.free_vars - {self.var}


@dataclass(frozen=True, eq=True)
class SetQuantifier(Formula):
    kind: str
    var: str
    body: Formula

    @property
    def children(self):
        return (self.body,)

    @cached_property
    def free_set_vars(self):
        return self.body.free_set_vars - {self.var}


# ---------------------------------------------------------------- builders

def conj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return Top()
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return Bottom()
    return parts[0] if len(parts) == 1 else Or(parts)


def forall(names: Iterable[str] | str, body: Formula) -> Formula:
    if isinstance(names, str):
        names = [names]
    for name in reversed(list(names)):
        body = FoQuantifier(FORALL, name, body)
    return body


def exists(names: Iterable[str] | str, body: Formula) -> Formula:
    if isinstance(names, str):
        names = [names]
    for name in reversed(list(names)):
        body = FoQuantifier(EXISTS, name, body)
    return body


def atom(name: str, *args: str | Term) -> Pred:
    return Pred(name, tuple(Var(a) if isinstance(a, str) else a for a in args))


def eq(a: str | Term, b: str | Term) -> Eq:
    return Eq(Var(a) if isinstance(a, str) else a, Var(b) if isinstance(b, str) else b)


def neq(a: str | Term, b: str | Term) -> Not:
    return Not(eq(a, b))


def distinct(names: Iterable[str]) -> Formula:
    names = list(names)
    return conj(neq(names[i], names[j])
                for i in range(len(names)) for j in range(i + 1, len(names)))


# ---------------------------------------------------------------- traversal

def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def has_quantifier(f: Formula) -> bool:
    return any(isinstance(n, (FoQuantifier, SetQuantifier)) for n in walk(f))


def has_set_syntax(f: Formula) -> bool:
    return any(isinstance(n, (SetQuantifier, SetAtom)) for n in walk(f))


def predicates_used(f: Formula) -> dict[str, int]:
    out: dict[str, int] = {}
    for n in walk(f):
        if isinstance(n, Pred):
            out.setdefault(n.name, len(n.args))
    return out


def constants_used(f: Formula) -> set[str]:
    out = set()
    for n in walk(f):
        terms = ()
        if isinstance(n, Pred):
            terms = n.args
        elif isinstance(n, Eq):
            terms = (n.left, n.right)
        elif isinstance(n, SetAtom):
            terms = (n.term,)
        out.update(t.name for t in terms if isinstance(t, Const))
    return out


def bound_vars(f: Formula) -> set[str]:
    return {n.var for n in walk(f) if isinstance(n, FoQuantifier)}


def quantifier_rank(f: Formula) -> int:
    """Maximum nesting depth of quantifiers (first-order and set)."""
    if isinstance(f, (FoQuantifier, SetQuantifier)):
        return 1 + quantifier_rank(f.body)
    return max((quantifier_rank(c) for c in f.children), default=0)


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def prefix_blocks(f: Formula) -> tuple[list[tuple[str, str]], Formula]:
    """Split a prenex formula into its quantifier prefix and matrix."""
    prefix = []
    while isinstance(f, FoQuantifier):
        prefix.append((f.kind, f.var))
        f = f.body
    return prefix, f


# ---------------------------------------------------------------- printing
#
# Precedence, loosest first: quantifiers, <->, ->, |, &, ~, atoms.
# Quantifier bodies extend as far right as possible, so a quantifier that is an
# operand of a connective is always parenthesized.

_PREC = {FoQuantifier: 0, SetQuantifier: 0, Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 6)


def _paren(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def to_text(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Pred):
        return f"{f.name}(" + ",".join(t.name for t in f.args) + ")"
    if isinstance(f, Eq):
        return f"{f.left.name} = {f.right.name}"
    if isinstance(f, SetAtom):
        return f"{f.var}({f.term.name})"
    if isinstance(f, Not):
        body = f.body
        if isinstance(body, Eq):
            return f"~({to_text(body)})"
        return "~" + _paren(to_text(body), _prec(body) < 5)
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        p = _prec(f)
        return op.join(_paren(to_text(a), _prec(a) <= p) for a in f.args)
    if isinstance(f, Implies):
        return (_paren(to_text(f.left), _prec(f.left) <= 2) + " -> "
                + _paren(to_text(f.right), _prec(f.right) < 2))
    if isinstance(f, Iff):
        return (_paren(to_text(f.left), _prec(f.left) < 1) + " <-> "
                + _paren(to_text(f.right), _prec(f.right) <= 1))
    if isinstance(f, FoQuantifier):
        names = [f.var]
        body = f.body
        while isinstance(body, FoQuantifier) and body.kind == f.kind:
            names.append(body.var)
            body = body.body
        return f"{f.kind} {','.join(names)}. {to_text(body)}"
    if isinstance(f, SetQuantifier):
        kw = "Forall" if f.kind == FORALL else "Exists"
        return f"{kw} {f.var}. {to_text(f.body)}"
    raise TypeError(f"not a formula: {f!r}")
