"""Relativization of sentences to a tuple of variables, and sentence builders.

``relativize_fo(phi, xs)`` is a quantifier-free formula over ``xs`` and the
constants which holds at a tuple a iff ``phi`` holds in the substructure
induced by a and the constants.  Universal quantifiers are first read as
negated existentials, and each ``exists x. chi`` becomes the disjunction of
``chi`` with x replaced by each available term.  Nothing is simplified, so
double negations survive.

Substitution is done through an environment (bound variable -> output term),
so inner rebindings of a name shadow outer ones and no capture can happen.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .logic.formula import (
    EXISTS, FORALL, And, Bottom, Const, Eq, Formula, FoQuantifier, Iff,
    Implies, Not, Or, Pred, SetAtom, SetQuantifier, Top, Var, conj, constants_used,
    disj, exists, forall, has_set_syntax,
)
from .logic.structure import Structure
from .logic.vocab import Vocabulary


class RelativizeError(ValueError):
    pass


@dataclass(frozen=True)
class RelativizedFormula:
    base: Formula
    vars: tuple[str, ...]
    constants: tuple[str, ...]
    result: Formula

    def __str__(self):
        return str(self.result)


def _terms(vars: Sequence[str], phi: Formula, vocab: Vocabulary | None):
    if not phi.is_sentence:
        raise RelativizeError(
            f"not a sentence: free variables {sorted(phi.free_vars | phi.free_set_vars)}")
    consts = tuple(vocab.constants) if vocab is not None else tuple(sorted(constants_used(phi)))
    vars = tuple(vars)
    if len(set(vars)) != len(vars):
        raise RelativizeError("relativization variables must be distinct")
    clash = set(vars) & set(consts)
    if clash:
        raise RelativizeError(f"variable names clash with constants: {sorted(clash)}")
    if not vars and not consts:
        raise RelativizeError("need at least one variable when there are no constants")
    return vars, consts, [Var(v) for v in vars] + [Const(c) for c in consts]


def _sub(t, env):
    if isinstance(t, Var):
        return env[t.name]
    return t


def _rel(f: Formula, env: dict, senv: dict, terms: list) -> Formula:
    if isinstance(f, Pred):
        return Pred(f.name, tuple(_sub(t, env) for t in f.args))
    if isinstance(f, Eq):
        return Eq(_sub(f.left, env), _sub(f.right, env))
    if isinstance(f, SetAtom):
        return Top() if _sub(f.term, env) in senv[f.var] else Bottom()
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_rel(f.body, env, senv, terms))
    if isinstance(f, And):
        return And(tuple(_rel(a, env, senv, terms) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_rel(a, env, senv, terms) for a in f.args))
    if isinstance(f, Implies):
        return Implies(_rel(f.left, env, senv, terms), _rel(f.right, env, senv, terms))
    if isinstance(f, Iff):
        return Iff(_rel(f.left, env, senv, terms), _rel(f.right, env, senv, terms))
    if isinstance(f, FoQuantifier):
        if f.kind == FORALL:
            return Not(_rel(FoQuantifier(EXISTS, f.var, Not(f.body)), env, senv, terms))
        return disj(_rel(f.body, {**env, f.var: t}, senv, terms) for t in terms)
    if isinstance(f, SetQuantifier):
        if f.kind == FORALL:
            return Not(_rel(SetQuantifier(EXISTS, f.var, Not(f.body)), env, senv, terms))
        disjuncts = []
        for bits in range(1 << len(terms)):
            inside = [t for i, t in enumerate(terms) if bits >> i & 1]
            outside = [t for i, t in enumerate(terms) if not bits >> i & 1]
            # a guess is only realizable if no term inside names the same
            # element as a term outside
            guard = [Not(Eq(a, b)) for a in inside for b in outside]
            body = _rel(f.body, env, {**senv, f.var: frozenset(inside)}, terms)
            disjuncts.append(conj(guard + [body]))
        return disj(disjuncts)
    raise TypeError(f"not a formula: {f!r}")


def relativize_fo(phi: Formula, vars: Sequence[str],
                  vocab: Vocabulary | None = None) -> RelativizedFormula:
    """phi relativized to ``vars``.  The constants are those of ``vocab``, or
    those occurring in phi when no vocabulary is given."""
    if has_set_syntax(phi):
        raise RelativizeError("set quantifiers present: use relativize_mso")
    vars, consts, terms = _terms(vars, phi, vocab)
    return RelativizedFormula(phi, vars, consts, _rel(phi, {}, {}, terms))


def relativize_mso(phi: Formula, vars: Sequence[str],
                   vocab: Vocabulary | None = None) -> RelativizedFormula:
    """MSO version: each ``Exists X`` becomes a disjunction over the subsets Y
    of the available terms, and the set atom X(t) becomes true or false
    according to whether t is in Y."""
    vars, consts, terms = _terms(vars, phi, vocab)
    return RelativizedFormula(phi, vars, consts, _rel(phi, {}, {}, terms))


def psi_vars(B: int, n: int) -> tuple[list[str], list[str]]:
    return [f"x{i}" for i in range(1, B + 1)], [f"y{i}" for i in range(1, n + 1)]


def build_psi(phi: Formula, B: int, n: int, vocab: Vocabulary | None = None) -> Formula:
    """exists x1..xB forall y1..yn. phi relativized to x1..xB,y1..yn."""
    if B < 0 or n < 0:
        raise RelativizeError("B and n must be nonnegative")
    xs, ys = psi_vars(B, n)
    rel = relativize_mso if has_set_syntax(phi) else relativize_fo
    body = rel(phi, xs + ys, vocab).result
    return exists(xs, forall(ys, body))


# ---------------------------------------------------------------- diagrams

def _fresh_prefix(vocab: Vocabulary) -> str:
    taken = set(vocab.predicate_names) | set(vocab.constants)
    for prefix in ("e", "e_", "el", "elem"):
        if not any(name.startswith(prefix) and name[len(prefix):].isdigit() for name in taken):
            return prefix
    raise RelativizeError("no fresh constant prefix available")


def _diagram_facts(M: Structure, names: Sequence, with_constants: bool) -> list[Formula]:
    facts: list[Formula] = []
    n = M.size
    for pred, arity in M.vocab.predicates:
        rel = M.relations[pred]
        for t in itertools.product(range(n), repeat=arity):
            a = Pred(pred, tuple(names[x] for x in t))
            facts.append(a if t in rel else Not(a))
    for i in range(n):
        for j in range(i + 1, n):
            facts.append(Not(Eq(names[i], names[j])))
    if with_constants:
        for c in M.vocab.constants:
            for j in range(n):
                e = Eq(Const(c), names[j])
                facts.append(e if M.constants[c] == j else Not(e))
    return facts


def diagram(M: Structure) -> tuple[Vocabulary, Formula]:
    """Conjunction of the atomic and negated atomic facts of M, naming
    element i by a fresh constant ``e<i>``."""
    prefix = _fresh_prefix(M.vocab)
    new = [f"{prefix}{i}" for i in range(M.size)]
    vocab = M.vocab.with_constants(new)
    return vocab, conj(_diagram_facts(M, [Const(c) for c in new], True))


def pi1_from_forbidden(forbidden: Sequence[Structure]) -> Formula:
    """Universal sentence true in exactly the structures into which no member
    of ``forbidden`` embeds.  Diagram constants become the variables x1, x2, ...
    shared across members."""
    forbidden = list(forbidden)
    if not forbidden:
        return Top()
    for M in forbidden:
        if M.vocab.constants:
            raise RelativizeError("forbidden structures must not have constants")
    width = max(M.size for M in forbidden)
    xs = [f"x{i}" for i in range(1, width + 1)]
    parts = [Not(conj(_diagram_facts(M, [Var(x) for x in xs], False))) for M in forbidden]
    return forall(xs, conj(parts))


def type_formula(preds: Sequence[str], i: int, var: str) -> Formula:
    """The 1-type number i: bit j of i says whether predicate j holds."""
    return conj(Pred(p, (Var(var),)) if i >> j & 1 else Not(Pred(p, (Var(var),)))
                for j, p in enumerate(preds))


def type_cycle_sentence(preds: Sequence[str]) -> Formula:
    """exists x forall y. AND_i (type_i(x) -> ~type_{i+1 mod 2^k}(y))."""
    preds = list(preds)
    if not preds:
        raise RelativizeError("need at least one unary predicate")
    m = 1 << len(preds)
    body = conj(Implies(type_formula(preds, i, "x"), Not(type_formula(preds, (i + 1) % m, "y")))
                for i in range(m))
    return exists("x", forall("y", body))
