"""Brute-force reference implementations used as test oracles.

Written independently of the package's evaluators: plain recursion over
Python sets, no numpy, no caching.  Only the AST classes and the Structure
container are shared.
"""

from __future__ import annotations

import itertools

from fopreserve.logic.formula import (
    And, Bottom, Const, Eq, FoQuantifier, Iff, Implies, Not, Or, Pred, SetAtom,
    SetQuantifier, Top,
)
from fopreserve.logic.structure import Structure


def _term(M, t, env):
    if isinstance(t, Const):
        return M.constants[t.name]
    return env[t.name]


def truth(M: Structure, f, env=None, senv=None, universe=None) -> bool:
    """Truth of f in M, optionally restricted to a sub-universe (the induced
    substructure on ``universe``, without renumbering)."""
    env = dict(env or {})
    senv = dict(senv or {})
    U = sorted(universe) if universe is not None else list(range(M.size))

    def go(f, env, senv):
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Pred):
            return tuple(_term(M, t, env) for t in f.args) in M.relations[f.name]
        if isinstance(f, Eq):
            return _term(M, f.left, env) == _term(M, f.right, env)
        if isinstance(f, SetAtom):
            return _term(M, f.term, env) in senv[f.var]
        if isinstance(f, Not):
            return not go(f.body, env, senv)
        if isinstance(f, And):
            return all(go(a, env, senv) for a in f.args)
        if isinstance(f, Or):
            return any(go(a, env, senv) for a in f.args)
        if isinstance(f, Implies):
            return (not go(f.left, env, senv)) or go(f.right, env, senv)
        if isinstance(f, Iff):
            return go(f.left, env, senv) == go(f.right, env, senv)
        if isinstance(f, FoQuantifier):
            vals = (go(f.body, {**env, f.var: a}, senv) for a in U)
            return any(vals) if f.kind == "exists" else all(vals)
        if isinstance(f, SetQuantifier):
            subsets = (set(c) for r in range(len(U) + 1) for c in itertools.combinations(U, r))
            vals = (go(f.body, env, {**senv, f.var: s}) for s in subsets)
            return any(vals) if f.kind == "exists" else all(vals)
        raise TypeError(f)

    return go(f, env, senv)


def closure_with_constants(M: Structure, S) -> set[int]:
    return set(S) | set(M.constants.values())


def sub_truth(M: Structure, S, f) -> bool:
    """Truth of f in the substructure induced by S plus the constants."""
    return truth(M, f, universe=closure_with_constants(M, S))


def all_structures(vocab, n):
    """Every structure of size n, by brute force over relation subsets."""
    per_pred = []
    for name, arity in vocab.predicates:
        tuples = list(itertools.product(range(n), repeat=arity))
        per_pred.append([(name, frozenset(t for t, b in zip(tuples, bits) if b))
                         for bits in itertools.product((0, 1), repeat=len(tuples))])
    for rels in itertools.product(*per_pred):
        for consts in itertools.product(range(n), repeat=len(vocab.constants)):
            yield Structure(vocab, n, dict(rels), dict(zip(vocab.constants, consts)))


def nonempty_subsets(n):
    for r in range(1, n + 1):
        yield from itertools.combinations(range(n), r)


def is_core(M, C, f) -> bool:
    need = closure_with_constants(M, C)
    rest = [x for x in range(M.size) if x not in need]
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            S = need | set(extra)
            if S and not truth(M, f, universe=S):
                return False
    return True


def embeds(A: Structure, M: Structure) -> bool:
    """Injective map A -> M preserving every relation in both directions."""
    for img in itertools.permutations(range(M.size), A.size):
        ok = True
        for name, arity in A.vocab.predicates:
            for t in itertools.product(range(A.size), repeat=arity):
                if (t in A.relations[name]) != (tuple(img[x] for x in t) in M.relations[name]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def isomorphic(M: Structure, N: Structure) -> bool:
    if M.size != N.size:
        return False
    for p in itertools.permutations(range(M.size)):
        if all({tuple(p[x] for x in t) for t in M.relations[name]} == set(N.relations[name])
               for name, _ in M.vocab.predicates) and all(
                p[M.constants[c]] == N.constants[c] for c in M.vocab.constants):
            return True
    return False


def is_subsequence(u, w) -> bool:
    i = 0
    for a in w:
        if i < len(u) and u[i] == a:
            i += 1
    return i == len(u)


def run_dfa(D, word) -> int:
    q = D.start
    for a in word:
        q = D.delta[q][D.alphabet.index(a)]
    return q


def words(alphabet, max_len, min_len=0):
    for L in range(min_len, max_len + 1):
        for w in itertools.product(alphabet, repeat=L):
            yield "".join(w)


def word_structure(w, alphabet):
    from fopreserve.logic.vocab import word_vocabulary
    n = len(w)
    rels = {"leq": {(i, j) for i in range(n) for j in range(n) if i <= j}}
    for a in alphabet:
        rels["P" + a] = {(i,) for i in range(n) if w[i] == a}
    return Structure(word_vocabulary(alphabet), n, rels)


def recheck(verdict) -> bool:
    """Re-validate a failing verdict with ``truth`` alone.

    Reads only the witness data; none of the package's evaluators or
    substructure code is used.
    """
    ok = all(recheck(p) for p in verdict.parts)
    w = verdict.witness
    if verdict.passed or w is None:
        return ok
    M, phi = w.structure, verdict.formulas.get("phi")
    if w.kind == "ps":
        return ok and truth(M, phi) and not sub_truth(M, w.data["substructure"], phi)
    if w.kind == "psc":
        if not truth(M, phi):
            return False
        certs = {tuple(sorted(c)): set(s) for c, s in w.data["certificates"]}
        for r in range(min(w.data["B"], M.size) + 1):
            for core in itertools.combinations(range(M.size), r):
                sup = certs.get(core)
                if sup is None or not set(core) <= sup or sub_truth(M, sup, phi):
                    return False
        return ok
    if w.kind in ("equiv", "words"):
        return ok and truth(M, phi) != truth(M, verdict.formulas["psi"])
    if w.kind == "kcover":
        if truth(M, phi):
            return False
        consts = set(M.constants.values())
        cover = [set(s) | consts for s in w.data["cover"]]
        k = max(w.data["k"], 1)
        for r in range(1, min(k, M.size) + 1):
            for t in itertools.combinations(range(M.size), r):
                if not any(set(t) <= s for s in cover):
                    return False
        return ok and all(sub_truth(M, s, phi) for s in cover)
    return False
