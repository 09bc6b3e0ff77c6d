"""Reference Tarskian evaluator.

This is the slow, obviously-correct semantics.  The vectorized evaluator in
``batch`` is checked against it, and every counterexample a sweep reports is
re-validated here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .formula import (
    EXISTS, And, Bottom, Const, Eq, Formula, FoQuantifier, Iff, Implies, Not,
    Or, Pred, SetAtom, SetQuantifier, Top,
)
from .structure import Structure


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class Assignment:
    fo: Mapping[str, int] = field(default_factory=dict)
    sets: Mapping[str, frozenset] = field(default_factory=dict)

    def check(self, M: Structure):
        for v, x in self.fo.items():
            if not 0 <= x < M.size:
                raise EvaluationError(f"{v} -> {x} outside universe")
        for v, xs in self.sets.items():
            if any(not 0 <= x < M.size for x in xs):
                raise EvaluationError(f"{v} contains an element outside universe")


def _term(M: Structure, t, env):
    if isinstance(t, Const):
        try:
            return M.constants[t.name]
        except KeyError:
            raise EvaluationError(f"unknown constant {t.name!r}") from None
    try:
        return env[t.name]
    except KeyError:
        raise EvaluationError(f"unbound variable {t.name!r}") from None


def _ev(M: Structure, f: Formula, env: dict, senv: dict, allow_sets: bool) -> bool:
    if isinstance(f, Pred):
        try:
            rel = M.relations[f.name]
        except KeyError:
            raise EvaluationError(f"unknown predicate {f.name!r}") from None
        return tuple(_term(M, t, env) for t in f.args) in rel
    if isinstance(f, Eq):
        return _term(M, f.left, env) == _term(M, f.right, env)
    if isinstance(f, Not):
        return not _ev(M, f.body, env, senv, allow_sets)
    if isinstance(f, And):
        return all(_ev(M, a, env, senv, allow_sets) for a in f.args)
    if isinstance(f, Or):
        return any(_ev(M, a, env, senv, allow_sets) for a in f.args)
    if isinstance(f, Implies):
        return (not _ev(M, f.left, env, senv, allow_sets)) or _ev(M, f.right, env, senv, allow_sets)
    if isinstance(f, Iff):
        return _ev(M, f.left, env, senv, allow_sets) == _ev(M, f.right, env, senv, allow_sets)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, FoQuantifier):
        saved = env.get(f.var, _MISSING)
        want = f.kind == EXISTS
        result = not want
        for x in range(M.size):
            env[f.var] = x
            if _ev(M, f.body, env, senv, allow_sets) == want:
                result = want
                break
        if saved is _MISSING:
            del env[f.var]
        else:
            env[f.var] = saved
        return result
    if not allow_sets:
        raise EvaluationError("set quantifiers and set atoms need eval_mso")
    if isinstance(f, SetAtom):
        try:
            return _term(M, f.term, env) in senv[f.var]
        except KeyError:
            raise EvaluationError(f"unbound set variable {f.var!r}") from None
    if isinstance(f, SetQuantifier):
        saved = senv.get(f.var, _MISSING)
        want = f.kind == EXISTS
        result = not want
        for bits in range(1 << M.size):
            senv[f.var] = frozenset(x for x in range(M.size) if bits >> x & 1)
            if _ev(M, f.body, env, senv, allow_sets) == want:
                result = want
                break
        if saved is _MISSING:
            del senv[f.var]
        else:
            senv[f.var] = saved
        return result
    raise TypeError(f"not a formula: {f!r}")


_MISSING = object()


def _prepare(M, f, sigma):
    if sigma is None:
        sigma = Assignment()
    elif isinstance(sigma, Mapping):
        sigma = Assignment(dict(sigma), {})
    sigma.check(M)
    missing = f.free_vars - set(sigma.fo)
    if missing:
        raise EvaluationError(f"unbound free variable(s) {sorted(missing)}")
    missing = f.free_set_vars - set(sigma.sets)
    if missing:
        raise EvaluationError(f"unbound free set variable(s) {sorted(missing)}")
    return sigma


def eval_fo(M: Structure, f: Formula, sigma: Assignment | Mapping[str, int] | None = None) -> bool:
    sigma = _prepare(M, f, sigma)
    return _ev(M, f, dict(sigma.fo), {}, False)


def eval_mso(M: Structure, f: Formula, sigma: Assignment | Mapping[str, int] | None = None) -> bool:
    sigma = _prepare(M, f, sigma)
    return _ev(M, f, dict(sigma.fo), {k: frozenset(v) for k, v in sigma.sets.items()}, True)
