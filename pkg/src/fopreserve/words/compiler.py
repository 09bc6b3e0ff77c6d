"""First-order sentences over words compiled to DFAs.

A formula with variables v1..vk is compiled over the extended alphabet
Sigma x {0,1}^k: symbol ``letter_index * 2**k + bits`` carries a letter and
the set of variables placed on that position.  Automata are only required
to be right on *valid* words, where every variable marks exactly one
position; quantifying a variable intersects with its validity automaton
before projecting it away.  Every step is minimized.
"""

from __future__ import annotations

from typing import Sequence

from ..logic.formula import (
    FORALL, And, Bottom, Const, Eq, Formula, FoQuantifier, Iff,
    Implies, Not, Or, Pred, SetAtom, SetQuantifier, Top,
)
from ..logic.vocab import letter_predicate
from .dfa import (
    Dfa, all_words_dfa, complement, determinize, empty_dfa, intersect, minimize,
    nonempty_dfa, product, union,
)


class CompileError(ValueError):
    pass


class _Compiler:
    def __init__(self, alphabet: Sequence[str]):
        self.letters = tuple(alphabet)
        self.preds = {letter_predicate(a): i for i, a in enumerate(self.letters)}

    def symbols(self, k: int) -> tuple:
        return tuple(range(len(self.letters) << k))

    def _bit(self, scope: list[str], name: str) -> int:
        for i in range(len(scope) - 1, -1, -1):
            if scope[i] == name:
                return i
        raise CompileError(f"free variable {name!r}")

    def _var(self, t, scope):
        if isinstance(t, Const):
            raise CompileError(f"constants are not allowed over words: {t.name!r}")
        return self._bit(scope, t.name)

    def _from_rows(self, k, n, start, acc, rows_fn) -> Dfa:
        syms = self.symbols(k)
        return minimize(Dfa(syms, n, start, acc, [[rows_fn(q, s) for s in syms] for q in range(n)]))

    def letter_atom(self, letter: int, x: int, k: int) -> Dfa:
        # no position marked x carries another letter
        def row(q, s):
            if q == 1:
                return 1
            return 1 if (s >> x & 1) and (s >> k) != letter else 0
        return self._from_rows(k, 2, 0, {0}, row)

    def leq_atom(self, x: int, y: int, k: int) -> Dfa:
        # states: 0 nothing seen, 1 x seen, 2 accepted, 3 rejected
        def row(q, s):
            hx, hy = s >> x & 1, s >> y & 1
            if q == 0:
                if hx and hy:
                    return 2
                if hx:
                    return 1
                return 3 if hy else 0
            if q == 1:
                return 2 if hy else 1
            return q
        return self._from_rows(k, 4, 0, {2}, row)

    def eq_atom(self, x: int, y: int, k: int) -> Dfa:
        def row(q, s):
            if q == 1:
                return 1
            return 0 if (s >> x & 1) == (s >> y & 1) else 1
        return self._from_rows(k, 2, 0, {0}, row)

    def valid(self, x: int, k: int) -> Dfa:
        """Exactly one position marked with variable x."""
        def row(q, s):
            if s >> x & 1:
                return min(q + 1, 2)
            return q
        return self._from_rows(k, 3, 0, {1}, row)

    def project_last(self, D: Dfa, k: int) -> Dfa:
        """Existentially project away variable k-1 (the highest bit)."""
        low = k - 1
        mask = (1 << low) - 1

        def moves(q, s):
            letter, bits = s >> low, s & mask
            base = (letter << k) | bits
            return (D.delta[q][base], D.delta[q][base | (1 << low)])

        out = determinize(self.symbols(low), [D.start], moves, lambda q: q in D.accepting)
        return minimize(out)

    def compile(self, f: Formula, scope: list[str]) -> Dfa:
        k = len(scope)
        if isinstance(f, Top):
            return all_words_dfa(self.symbols(k))
        if isinstance(f, Bottom):
            return empty_dfa(self.symbols(k))
        if isinstance(f, Pred):
            if f.name == "leq":
                if len(f.args) != 2:
                    raise CompileError("leq is binary")
                x, y = (self._var(t, scope) for t in f.args)
                if x == y:
                    return all_words_dfa(self.symbols(k))
                return self.leq_atom(x, y, k)
            if f.name in self.preds:
                if len(f.args) != 1:
                    raise CompileError(f"{f.name} is unary")
                return self.letter_atom(self.preds[f.name], self._var(f.args[0], scope), k)
            raise CompileError(f"unknown symbol {f.name!r} for alphabet {self.letters}")
        if isinstance(f, Eq):
            x, y = self._var(f.left, scope), self._var(f.right, scope)
            if x == y:
                return all_words_dfa(self.symbols(k))
            return self.eq_atom(x, y, k)
        if isinstance(f, Not):
            return minimize(complement(self.compile(f.body, scope)))
        if isinstance(f, And):
            out = self.compile(f.args[0], scope)
            for a in f.args[1:]:
                out = intersect(out, self.compile(a, scope))
            return out
        if isinstance(f, Or):
            out = self.compile(f.args[0], scope)
            for a in f.args[1:]:
                out = union(out, self.compile(a, scope))
            return out
        if isinstance(f, Implies):
            return union(minimize(complement(self.compile(f.left, scope))),
                         self.compile(f.right, scope))
        if isinstance(f, Iff):
            return minimize(product(self.compile(f.left, scope), self.compile(f.right, scope),
                                    lambda a, b: a == b))
        if isinstance(f, FoQuantifier):
            inner = scope + [f.var]
            body = self.compile(f.body, inner)
            if f.kind == FORALL:
                body = minimize(complement(body))
            body = intersect(body, self.valid(k, k + 1))
            out = self.project_last(body, k + 1)
            return minimize(complement(out)) if f.kind == FORALL else out
        if isinstance(f, (SetQuantifier, SetAtom)):
            raise CompileError("set quantifiers are not compiled; evaluate them directly")
        raise TypeError(f"not a formula: {f!r}")


def compile_word_fo(phi: Formula, alphabet: Sequence[str]) -> Dfa:
    """DFA for the nonempty words satisfying the first-order sentence phi.

    The empty word is never accepted: word structures are nonempty.
    """
    if phi.free_vars or phi.free_set_vars:
        raise CompileError("not a sentence")
    comp = _Compiler(alphabet)
    D = comp.compile(phi, [])
    D = Dfa(tuple(alphabet), D.n, D.start, D.accepting, D.delta)
    return intersect(D, nonempty_dfa(tuple(alphabet)))
