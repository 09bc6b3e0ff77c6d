"""Recursive-descent parser for formulas and ``vocab { ... }`` headers.

Grammar::

    formula := quant | iff
    quant   := ("forall"|"exists") var {"," var} "." formula
             | ("Forall"|"Exists") SETVAR "." formula
    iff     := imp {"<->" imp}
    imp     := or ["->" imp]
    or      := and {"|" and}
    and     := un {"&" un}
    un      := "~" un | "(" formula ")" | quant | atom | "true" | "false"
    atom    := NAME "(" term {"," term} ")" | term ("=" | "!=") term
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (
    EXISTS, FORALL, And, Bottom, Const, Eq, Formula, FoQuantifier, Iff,
    Implies, Not, Or, Pred, SetAtom, SetQuantifier, Top, Var,
)
from .vocab import Vocabulary, VocabularyError


class ParseError(ValueError):
    def __init__(self, message: str, offset: int | None = None):
        self.message = message
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'name', 'num', 'op', 'end'
    text: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(<->|->|!=|[()~&|=.,{};/])|([A-Za-z_][A-Za-z0-9_]*)|(\d+))")


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(Token("op", m.group(1), start))
        elif m.group(2):
            tokens.append(Token("name", m.group(2), start))
        else:
            tokens.append(Token("num", m.group(3), start))
        pos = m.end()
    tokens.append(Token("end", "", n))
    return tokens


class _Stream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def peek_at(self, k: int) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.peek.text == text and self.peek.kind in ("op", "name"):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek
        if tok.text != text or tok.kind == "end":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {text!r}, found {found}", tok.pos)
        return self.next()

    def expect_name(self, what: str = "name") -> Token:
        tok = self.peek
        if tok.kind != "name":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {what}, found {found}", tok.pos)
        return self.next()

    def expect_int(self) -> int:
        tok = self.peek
        if tok.kind != "num":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected integer, found {found}", tok.pos)
        self.next()
        return int(tok.text)


_FO_QUANT = {"forall": FORALL, "exists": EXISTS}
_SET_QUANT = {"Forall": FORALL, "Exists": EXISTS}
_KEYWORDS = set(_FO_QUANT) | set(_SET_QUANT) | {"true", "false"}


class _FormulaParser:
    def __init__(self, stream: _Stream, vocab: Vocabulary | None, free_set_vars=()):
        self.s = stream
        self.vocab = vocab
        self.constants = set(vocab.constants) if vocab else set()
        self.set_scope = list(free_set_vars)
        self.inferred: dict[str, int] = {}

    def formula(self) -> Formula:
        tok = self.s.peek
        if tok.kind == "name" and (tok.text in _FO_QUANT or tok.text in _SET_QUANT):
            return self.quant()
        return self.iff()

    def quant(self) -> Formula:
        tok = self.s.next()
        if tok.text in _FO_QUANT:
            names = [self._var_name()]
            while self.s.accept(","):
                names.append(self._var_name())
            self.s.expect(".")
            body = self.formula()
            for name in reversed(names):
                body = FoQuantifier(_FO_QUANT[tok.text], name, body)
            return body
        name_tok = self.s.expect_name("set variable")
        if not name_tok.text[0].isupper():
            raise ParseError("set variables must start with an uppercase letter", name_tok.pos)
        self.s.expect(".")
        self.set_scope.append(name_tok.text)
        try:
            body = self.formula()
        finally:
            self.set_scope.pop()
        return SetQuantifier(_SET_QUANT[tok.text], name_tok.text, body)

    def _var_name(self) -> str:
        tok = self.s.expect_name("variable")
        if tok.text in _KEYWORDS:
            raise ParseError(f"keyword {tok.text!r} used as variable", tok.pos)
        if tok.text in self.constants:
            raise ParseError(f"constant {tok.text!r} cannot be quantified", tok.pos)
        if self.vocab is not None and self.vocab.has_predicate(tok.text):
            raise ParseError(f"predicate {tok.text!r} used as variable", tok.pos)
        return tok.text

    def iff(self) -> Formula:
        left = self.imp()
        while self.s.accept("<->"):
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.or_()
        if self.s.accept("->"):
            return Implies(left, self.imp())
        return left

    def or_(self) -> Formula:
        parts = [self.and_()]
        while self.s.accept("|"):
            parts.append(self.and_())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_(self) -> Formula:
        parts = [self.un()]
        while self.s.accept("&"):
            parts.append(self.un())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def un(self) -> Formula:
        tok = self.s.peek
        if self.s.accept("~"):
            return Not(self.un())
        if self.s.accept("("):
            f = self.formula()
            self.s.expect(")")
            return f
        if tok.kind == "name":
            if tok.text in _FO_QUANT or tok.text in _SET_QUANT:
                return self.quant()
            if tok.text == "true":
                self.s.next()
                return Top()
            if tok.text == "false":
                self.s.next()
                return Bottom()
            return self.atom()
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"expected formula, found {found}", tok.pos)

    def atom(self) -> Formula:
        name_tok = self.s.next()
        name = name_tok.text
        if self.s.peek.text == "(" and self.s.peek.kind == "op":
            self.s.next()
            args = [self.term()]
            while self.s.accept(","):
                args.append(self.term())
            self.s.expect(")")
            if name in self.set_scope:
                if len(args) != 1:
                    raise ParseError(f"set variable {name!r} takes one argument", name_tok.pos)
                return SetAtom(name, args[0])
            return self._pred(name, tuple(args), name_tok.pos)
        left = self._term_from(name_tok)
        if self.s.accept("="):
            return Eq(left, self.term())
        if self.s.accept("!="):
            return Not(Eq(left, self.term()))
        tok = self.s.peek
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"expected '(' or '=', found {found}", tok.pos)

    def _pred(self, name: str, args, pos: int) -> Pred:
        if self.vocab is not None:
            if not self.vocab.has_predicate(name):
                raise ParseError(f"unknown symbol {name!r}", pos)
            arity = self.vocab.arity(name)
        else:
            arity = self.inferred.setdefault(name, len(args))
        if arity != len(args):
            raise ParseError(
                f"arity mismatch for {name!r}: expected {arity}, got {len(args)}", pos)
        return Pred(name, args)

    def term(self):
        return self._term_from(self.s.expect_name("term"))

    def _term_from(self, tok: Token):
        if tok.kind != "name":
            raise ParseError(f"expected term, found {tok.text!r}", tok.pos)
        if tok.text in _KEYWORDS:
            raise ParseError(f"keyword {tok.text!r} used as term", tok.pos)
        if tok.text in self.constants:
            return Const(tok.text)
        if self.vocab is not None and self.vocab.has_predicate(tok.text):
            raise ParseError(f"predicate {tok.text!r} used as term", tok.pos)
        return Var(tok.text)


def parse_formula(text: str, vocab: Vocabulary | None = None,
                  free_set_vars=()) -> Formula:
    """Parse ``text``.  With ``vocab=None`` predicate arities are inferred
    from first use and every term is a variable."""
    stream = _Stream(text)
    p = _FormulaParser(stream, vocab, free_set_vars)
    f = p.formula()
    tok = stream.peek
    if tok.kind != "end":
        raise ParseError(f"unexpected {tok.text!r}", tok.pos)
    return f


def parse_vocab_block(stream: _Stream) -> Vocabulary:
    """Parse ``vocab { E/2; P/1; c }`` from the stream."""
    stream.expect("vocab")
    stream.expect("{")
    preds, consts = [], []
    while not stream.accept("}"):
        tok = stream.expect_name("symbol")
        if stream.accept("/"):
            preds.append((tok.text, stream.expect_int()))
        else:
            consts.append(tok.text)
        if not stream.accept(";") and stream.peek.text != "}":
            raise ParseError("expected ';' or '}'", stream.peek.pos)
    try:
        return Vocabulary(tuple(preds), tuple(consts))
    except VocabularyError as e:
        raise ParseError(str(e)) from None


def parse_vocab(text: str) -> Vocabulary:
    s = _Stream(text)
    v = parse_vocab_block(s)
    if s.peek.kind != "end":
        raise ParseError(f"unexpected {s.peek.text!r}", s.peek.pos)
    return v


def parse_formula_file(text: str, vocab: Vocabulary | None = None
                       ) -> tuple[Vocabulary, Formula]:
    """Parse a formula file: an optional ``vocab { ... }`` header then a formula.

    Without any vocabulary the predicates are inferred from the formula.
    """
    stream = _Stream(text)
    if stream.peek.text == "vocab" and stream.peek_at(1).text == "{":
        declared = parse_vocab_block(stream)
        vocab = declared if vocab is None else vocab.merge(declared)
    p = _FormulaParser(stream, vocab)
    f = p.formula()
    if stream.peek.kind != "end":
        raise ParseError(f"unexpected {stream.peek.text!r}", stream.peek.pos)
    if vocab is None:
        vocab = Vocabulary(tuple(p.inferred.items()), ())
    return vocab, f


def infer_vocabulary(f: Formula) -> Vocabulary:
    from .formula import constants_used, predicates_used
    return Vocabulary(tuple(predicates_used(f).items()), tuple(sorted(constants_used(f))))
