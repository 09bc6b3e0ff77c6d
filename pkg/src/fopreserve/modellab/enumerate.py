"""Exhaustive enumeration of finite structures by index, and the index
arithmetic for induced substructures and relabelings."""

from __future__ import annotations

import itertools
import os
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from ..logic.formula import Formula
from ..logic.batch import evaluate_indices
from ..logic.structure import Structure, layout, tuple_index
from ..logic.vocab import Vocabulary

DEFAULT_BUDGET = 1 << 28


class BudgetExceeded(RuntimeError):
    pass


def budget() -> int:
    raw = os.environ.get("FOPRESERVE_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise BudgetExceeded(f"FOPRESERVE_BUDGET is not an integer: {raw!r}") from None
    return DEFAULT_BUDGET


def structure_count(vocab: Vocabulary, n: int) -> int:
    return layout(vocab, n).count


def check_budget(vocab: Vocabulary, n: int) -> int:
    count = structure_count(vocab, n)
    limit = budget()
    if count > limit:
        raise BudgetExceeded(
            f"{count} structures of size {n} over {vocab} exceed the budget of {limit}")
    if layout(vocab, n).nbits > 62:
        raise BudgetExceeded("relation bitmap too wide for vectorized enumeration")
    return count


def index_chunks(vocab: Vocabulary, n: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    count = check_budget(vocab, n)
    for start in range(0, count, chunk):
        yield np.arange(start, min(count, start + chunk), dtype=np.int64)


def enum_structures(vocab: Vocabulary, size: int, up_to_iso: bool = False) -> Iterator[Structure]:
    """All structures of exactly ``size`` elements in index order.  With
    ``up_to_iso`` only the least index of each isomorphism class is kept."""
    if size < 1:
        raise ValueError("size must be >= 1")
    for idx in index_chunks(vocab, size):
        if up_to_iso:
            idx = idx[canonical_mask(vocab, size, idx)]
        for i in idx:
            yield Structure.from_index(vocab, size, int(i))


# ---------------------------------------------------------------- relabeling

@lru_cache(maxsize=None)
def _perm_tables(vocab: Vocabulary, n: int, perm: tuple[int, ...]):
    """Byte-wise lookup tables mapping relation bits under a relabeling."""
    lay = layout(vocab, n)
    target = np.zeros(lay.nbits, dtype=np.int64)
    for (name, arity), off in zip(vocab.predicates, lay.offsets):
        for t in itertools.product(range(n), repeat=arity):
            target[off + tuple_index(t, n)] = off + tuple_index(tuple(perm[x] for x in t), n)
    tables = []
    for start in range(0, lay.nbits, 8):
        bits = target[start:start + 8]
        table = np.zeros(256, dtype=np.int64)
        for byte in range(256):
            v = 0
            for j, pos in enumerate(bits):
                if byte >> j & 1:
                    v |= 1 << int(pos)
            table[byte] = v
        tables.append(table)
    return tables


def relabel_indices(vocab: Vocabulary, n: int, indices: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Index of the image of each structure under x -> perm[x]."""
    lay = layout(vocab, n)
    mask, code = np.divmod(np.asarray(indices, dtype=np.int64), lay.const_count)
    new_mask = np.zeros_like(mask)
    for k, table in enumerate(_perm_tables(vocab, n, tuple(perm))):
        new_mask |= table[(mask >> (8 * k)) & 255]
    p = np.asarray(perm, dtype=np.int64)
    new_code = np.zeros_like(code)
    weight = 1
    for _ in vocab.constants:
        code, digit = np.divmod(code, n)
        new_code += p[digit] * weight
        weight *= n
    return new_mask * lay.const_count + new_code


def canonical_mask(vocab: Vocabulary, n: int, indices: np.ndarray) -> np.ndarray:
    """True where the index is the least in its isomorphism class."""
    indices = np.asarray(indices, dtype=np.int64)
    keep = np.ones(len(indices), dtype=bool)
    for perm in itertools.permutations(range(n)):
        keep &= indices <= relabel_indices(vocab, n, indices, perm)
    return keep


# ---------------------------------------------------------------- induced

@lru_cache(maxsize=None)
def _induced_plan(vocab: Vocabulary, n: int, subset: tuple[int, ...]):
    m = len(subset)
    big, small = layout(vocab, n), layout(vocab, m)
    src, dst = [], []
    for (name, arity), boff, soff in zip(vocab.predicates, big.offsets, small.offsets):
        for u in itertools.product(range(m), repeat=arity):
            src.append(boff + tuple_index(tuple(subset[x] for x in u), n))
            dst.append(soff + tuple_index(u, m))
    rank = np.full(n, -1, dtype=np.int64)
    rank[list(subset)] = np.arange(m)
    return np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64), rank, small.const_count


def induced_indices(vocab: Vocabulary, n: int, indices: np.ndarray,
                    subset: Sequence[int]) -> np.ndarray:
    """Index (at size |subset|) of the substructure induced by ``subset``.

    ``subset`` must be sorted and contain every constant's element; entries
    where it does not get -1.
    """
    src, dst, rank, small_ccount = _induced_plan(vocab, n, tuple(subset))
    mask, code = np.divmod(np.asarray(indices, dtype=np.int64), layout(vocab, n).const_count)
    new_mask = np.zeros_like(mask)
    for s, d in zip(src, dst):
        new_mask |= ((mask >> s) & 1) << d
    m = len(subset)
    new_code = np.zeros_like(code)
    ok = np.ones(len(mask), dtype=bool)
    weight = 1
    for _ in vocab.constants:
        code, digit = np.divmod(code, n)
        r = rank[digit]
        ok &= r >= 0
        new_code += np.maximum(r, 0) * weight
        weight *= m
    out = new_mask * small_ccount + new_code
    out[~ok] = -1
    return out


def subsets_mask_list(n: int) -> list[tuple[int, ...]]:
    """Subset s (a bitmask) as a sorted tuple, for s in 0..2**n-1."""
    return [tuple(x for x in range(n) if s >> x & 1) for s in range(1 << n)]


class TruthTables:
    """Cached truth values of one sentence on every structure of each size."""

    def __init__(self, vocab: Vocabulary, phi: Formula):
        self.vocab = vocab
        self.phi = phi
        self._tables: dict[int, np.ndarray] = {}

    def table(self, n: int) -> np.ndarray:
        if n not in self._tables:
            count = check_budget(self.vocab, n)
            self._tables[n] = evaluate_indices(
                self.vocab, n, self.phi, np.arange(count, dtype=np.int64))
        return self._tables[n]

    def chunk(self, n: int, indices: np.ndarray) -> np.ndarray:
        if n in self._tables:
            return self._tables[n][indices]
        return evaluate_indices(self.vocab, n, self.phi, indices)


