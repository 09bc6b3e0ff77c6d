"""Vectorized evaluation of a formula over a batch of same-size structures.

A subformula evaluated under a scope of k bound variables yields a boolean
array of shape (batch, d1, ..., dk); di is n for a first-order variable, 2**n
for a set variable, or 1 when the subformula does not depend on it (numpy
broadcasting fills in the rest).  Quantifiers reduce the last axis.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .formula import (
    EXISTS, And, Bottom, Const, Eq, Formula, FoQuantifier, Iff, Implies, Not,
    Or, Pred, SetAtom, SetQuantifier, Top,
)
from .structure import Structure, layout
from .vocab import Vocabulary

# Upper bound on elements in one intermediate array; batches are chunked to it.
CHUNK_ELEMENTS = 1 << 22


class BatchContext:
    def __init__(self, n: int, batch: int, rels: dict, consts: dict):
        self.n = n
        self.batch = batch
        self.rels = rels
        self.consts = consts
        self._members = None

    @classmethod
    def from_indices(cls, vocab: Vocabulary, n: int, indices: np.ndarray) -> "BatchContext":
        lay = layout(vocab, n)
        idx = np.asarray(indices, dtype=np.int64)
        ccount = lay.const_count
        mask, code = np.divmod(idx, ccount)
        rels = {}
        for (name, arity), off in zip(vocab.predicates, lay.offsets):
            shifts = np.arange(off, off + n ** arity, dtype=np.int64)
            bits = (mask[:, None] >> shifts[None, :]) & 1
            rels[name] = bits.astype(bool).reshape((len(idx),) + (n,) * arity)
        consts = {}
        for c in reversed(vocab.constants):
            code, consts[c] = np.divmod(code, n)
        return cls(n, len(idx), rels, consts)

    @classmethod
    def from_structures(cls, structures: Sequence[Structure]) -> "BatchContext":
        n = structures[0].size
        vocab = structures[0].vocab
        rels = {}
        for name, arity in vocab.predicates:
            arr = np.zeros((len(structures),) + (n,) * arity, dtype=bool)
            for b, M in enumerate(structures):
                for t in M.relations[name]:
                    arr[(b,) + t] = True
            rels[name] = arr
        consts = {c: np.array([M.constants[c] for M in structures], dtype=np.int64)
                  for c in vocab.constants}
        return cls(n, len(structures), rels, consts)

    @property
    def members(self) -> np.ndarray:
        if self._members is None:
            s = np.arange(1 << self.n)[:, None]
            self._members = ((s >> np.arange(self.n)[None, :]) & 1).astype(bool)
        return self._members


def _axis_array(values: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = len(values)
    return values.reshape(shape)


class _Evaluator:
    def __init__(self, ctx: BatchContext):
        self.ctx = ctx
        self.arange = np.arange(ctx.n)

    def term(self, t, scope):
        ndim = 1 + len(scope)
        if isinstance(t, Const):
            return _axis_array(self.ctx.consts[t.name], 0, ndim)
        for k in range(len(scope) - 1, -1, -1):
            if scope[k] == ("fo", t.name):
                return _axis_array(self.arange, 1 + k, ndim)
        raise KeyError(f"unbound variable {t.name!r}")

    def ev(self, f: Formula, scope: tuple) -> np.ndarray:
        ndim = 1 + len(scope)
        if isinstance(f, Pred):
            rel = self.ctx.rels[f.name]
            bidx = _axis_array(np.arange(self.ctx.batch), 0, ndim)
            return rel[(bidx,) + tuple(self.term(t, scope) for t in f.args)]
        if isinstance(f, Eq):
            return self.term(f.left, scope) == self.term(f.right, scope)
        if isinstance(f, Not):
            return ~self.ev(f.body, scope)
        if isinstance(f, And):
            out = self.ev(f.args[0], scope)
            for a in f.args[1:]:
                out = out & self.ev(a, scope)
            return out
        if isinstance(f, Or):
            out = self.ev(f.args[0], scope)
            for a in f.args[1:]:
                out = out | self.ev(a, scope)
            return out
        if isinstance(f, Implies):
            return ~self.ev(f.left, scope) | self.ev(f.right, scope)
        if isinstance(f, Iff):
            return self.ev(f.left, scope) == self.ev(f.right, scope)
        if isinstance(f, Top):
            return np.ones((1,) * ndim, dtype=bool)
        if isinstance(f, Bottom):
            return np.zeros((1,) * ndim, dtype=bool)
        if isinstance(f, (FoQuantifier, SetQuantifier)):
            sort = "fo" if isinstance(f, FoQuantifier) else "set"
            body = self.ev(f.body, scope + ((sort, f.var),))
            if body.ndim < ndim + 1:
                body = body.reshape(body.shape + (1,) * (ndim + 1 - body.ndim))
            if body.shape[-1] == 1:
                return body[..., 0]
            if f.kind == EXISTS:
                return body.any(axis=-1)
            return body.all(axis=-1)
        if isinstance(f, SetAtom):
            for k in range(len(scope) - 1, -1, -1):
                if scope[k] == ("set", f.var):
                    sets = _axis_array(np.arange(1 << self.ctx.n), 1 + k, ndim)
                    return self.ctx.members[sets, self.term(f.term, scope)]
            raise KeyError(f"unbound set variable {f.var!r}")
        raise TypeError(f"not a formula: {f!r}")


def _scope_width(f: Formula, n: int) -> int:
    """Largest product of axis sizes along any quantifier path."""
    if isinstance(f, FoQuantifier):
        return n * _scope_width(f.body, n)
    if isinstance(f, SetQuantifier):
        return (1 << n) * _scope_width(f.body, n)
    return max((_scope_width(c, n) for c in f.children), default=1)


def evaluate(ctx: BatchContext, f: Formula, free: Sequence[str] = ()) -> np.ndarray:
    """Truth values of f for every structure in ctx.

    With ``free`` variables the result has shape (batch, n, ..., n), one axis
    per free variable in the given order.
    """
    scope = tuple(("fo", v) for v in free)
    out = _Evaluator(ctx).ev(f, scope)
    return np.broadcast_to(out, (ctx.batch,) + (ctx.n,) * len(free)).copy()


def chunk_size(f: Formula, n: int, free: int = 0) -> int:
    width = _scope_width(f, n) * n ** free
    return max(1, CHUNK_ELEMENTS // max(1, width))


def evaluate_indices(vocab: Vocabulary, n: int, f: Formula, indices: np.ndarray,
                     free: Sequence[str] = ()) -> np.ndarray:
    """Evaluate f over the structures with the given indices, in chunks."""
    indices = np.asarray(indices, dtype=np.int64)
    step = chunk_size(f, n, len(free))
    parts = []
    for start in range(0, len(indices), step):
        ctx = BatchContext.from_indices(vocab, n, indices[start:start + step])
        parts.append(evaluate(ctx, f, free))
    if not parts:
        return np.zeros((0,) + (n,) * len(free), dtype=bool)
    return np.concatenate(parts)


def evaluate_structures(structures: Sequence[Structure], f: Formula,
                        free: Sequence[str] = ()) -> np.ndarray:
    """Evaluate f on a list of structures (grouped by size internally)."""
    out = [None] * len(structures)
    groups: dict[int, list[int]] = {}
    for i, M in enumerate(structures):
        groups.setdefault(M.size, []).append(i)
    for n, members in groups.items():
        step = chunk_size(f, n, len(free))
        for start in range(0, len(members), step):
            part = members[start:start + step]
            ctx = BatchContext.from_structures([structures[i] for i in part])
            vals = evaluate(ctx, f, free)
            for j, i in enumerate(part):
                out[i] = vals[j]
    return out if free else np.array(out, dtype=bool)


def holds(M: Structure, f: Formula) -> bool:
    """Fast truth value of a sentence in a single structure."""
    return bool(evaluate(BatchContext.from_structures([M]), f)[0])
