"""Bounded semantic checks: PS, PSC(B), equivalence, k-cover preservation,
and the Delta^0_2(k, l) classifier.

Every sweep visits sizes 1..max_size in increasing order and, within a size,
structures in index order, so the reported counterexample is the first one
in that order.  A passing verdict only says nothing was found up to the bound.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..logic.formula import Formula, Not
from ..logic.parser import infer_vocabulary
from ..logic.structure import Structure
from ..logic.vocab import Vocabulary
from ..relativize import build_psi
from .cores import from_mask, popcounts, superset_and, superset_or, to_mask
from .enumerate import TruthTables, index_chunks, induced_indices, subsets_mask_list
from .verdict import FAIL, PASS, Verdict, Witness


def _vocab(vocab: Vocabulary | None, *formulas: Formula) -> Vocabulary:
    if vocab is not None:
        return vocab
    v = infer_vocabulary(formulas[0])
    for f in formulas[1:]:
        v = v.merge(infer_vocabulary(f))
    return v


def _subset_truths(tt: TruthTables, n: int, idx: np.ndarray, own: np.ndarray,
                   vacuous: bool) -> np.ndarray:
    """good[b, S] = truth of the substructure of structure b induced by S.

    Subsets that are not substructures (empty, or missing a constant) get
    ``vacuous``.
    """
    good = np.full((len(idx), 1 << n), vacuous, dtype=bool)
    full = (1 << n) - 1
    good[:, full] = own
    for s, sub in enumerate(subsets_mask_list(n)):
        if s == full or not sub:
            continue
        keys = induced_indices(tt.vocab, n, idx, sub)
        valid = keys >= 0
        if valid.any():
            good[valid, s] = tt.table(len(sub))[keys[valid]]
    return good


def ps_check(phi: Formula, max_size: int, vocab: Vocabulary | None = None,
             threads: int = 1) -> Verdict:
    """Search for a model with a substructure that is not a model.

    Deleting one element at a time suffices: in a smallest counterexample
    the failing substructure can be reached by single deletions, and the
    first failing deletion is itself a counterexample.
    """
    vocab = _vocab(vocab, phi)
    tt = TruthTables(vocab, phi)
    for n in range(1, max_size + 1):
        for idx in index_chunks(vocab, n):
            truth = tt.chunk(n, idx)
            models = idx[truth]
            if n == 1 or len(models) == 0:
                continue
            bad = np.zeros((len(models), n), dtype=bool)
            for e in range(n):
                sub = tuple(x for x in range(n) if x != e)
                keys = induced_indices(vocab, n, models, sub)
                valid = keys >= 0
                bad[valid, e] = ~tt.table(n - 1)[keys[valid]]
            hit = np.flatnonzero(bad.any(axis=1))
            if len(hit):
                b = hit[0]
                e = int(np.flatnonzero(bad[b])[0])
                M = Structure.from_index(vocab, n, int(models[b]))
                sub = frozenset(x for x in range(n) if x != e)
                return Verdict("ps", FAIL, n, Witness("ps", M, {"substructure": sub}),
                               {"phi": phi})
    return Verdict("ps", PASS, max_size, formulas={"phi": phi})


def _psc_certificates(good: np.ndarray, n: int, B: int):
    """For every candidate core of size <= B, a superset whose substructure
    fails the sentence."""
    certs = []
    for r in range(min(B, n) + 1):
        for core in itertools.combinations(range(n), r):
            c = to_mask(core)
            sup = next(s for s in range(1 << n) if s & c == c and not good[s])
            certs.append((core, from_mask(sup)))
    return certs


def psc_check(phi: Formula, B: int, max_size: int, vocab: Vocabulary | None = None,
              threads: int = 1) -> Verdict:
    """Search for a model of size <= max_size without a core of size <= B."""
    vocab = _vocab(vocab, phi)
    tt = TruthTables(vocab, phi)
    for n in range(1, max_size + 1):
        small = popcounts(n) <= B
        for idx in index_chunks(vocab, n):
            truth = tt.chunk(n, idx)
            models = idx[truth]
            if len(models) == 0:
                continue
            good = _subset_truths(tt, n, models, np.ones(len(models), bool), True)
            core = superset_and(good)
            ok = core[:, small].any(axis=1)
            if not ok.all():
                b = int(np.flatnonzero(~ok)[0])
                M = Structure.from_index(vocab, n, int(models[b]))
                certs = _psc_certificates(good[b], n, B)
                return Verdict("psc", FAIL, n,
                               Witness("psc", M, {"B": B, "certificates": certs}),
                               {"phi": phi}, [f"no core of size <= {B}"])
    return Verdict("psc", PASS, max_size, formulas={"phi": phi}, notes=[f"B = {B}"])


def check_equiv_upto(phi: Formula, psi: Formula, max_size: int,
                     vocab: Vocabulary | None = None, threads: int = 1) -> Verdict:
    vocab = _vocab(vocab, phi, psi)
    t1, t2 = TruthTables(vocab, phi), TruthTables(vocab, psi)
    for n in range(1, max_size + 1):
        for idx in index_chunks(vocab, n):
            a, b = t1.chunk(n, idx), t2.chunk(n, idx)
            diff = np.flatnonzero(a != b)
            if len(diff):
                i = int(diff[0])
                M = Structure.from_index(vocab, n, int(idx[i]))
                return Verdict("equiv", FAIL, n,
                               Witness("equiv", M, {"phi holds": bool(a[i]),
                                                    "psi holds": bool(b[i])}),
                               {"phi": phi, "psi": psi})
    return Verdict("equiv", PASS, max_size, formulas={"phi": phi, "psi": psi})


def kcover_preservation_check(phi: Formula, k: int, max_size: int,
                              vocab: Vocabulary | None = None, threads: int = 1) -> Verdict:
    """Search for a non-model M with a k-cover made of models.

    All induced substructures that satisfy phi form a k-cover exactly when
    some k-cover of models exists, so one cover per structure is enough and
    the search over covers is exhaustive.  For k = 0 condition (iii) is
    vacuous, but the members must still cover the universe, which is the
    same as covering every singleton.
    """
    vocab = _vocab(vocab, phi)
    tt = TruthTables(vocab, phi)
    kk = max(k, 1)
    for n in range(1, max_size + 1):
        counts = popcounts(n)
        need = (counts >= 1) & (counts <= kk)
        for idx in index_chunks(vocab, n):
            truth = tt.chunk(n, idx)
            bad = idx[~truth]
            if len(bad) == 0:
                continue
            good = _subset_truths(tt, n, bad, np.zeros(len(bad), bool), False)
            up = superset_or(good)
            covered = up[:, need].all(axis=1)
            if covered.any():
                b = int(np.flatnonzero(covered)[0])
                M = Structure.from_index(vocab, n, int(bad[b]))
                g = good[b]
                maximal = [s for s in range(1 << n) if g[s]
                           and not any(g[s | (1 << x)] for x in range(n) if not s >> x & 1)]
                cover = [from_mask(s) for s in maximal]
                return Verdict("kcover", FAIL, n,
                               Witness("kcover", M, {"k": k, "cover": cover}),
                               {"phi": phi})
    return Verdict("kcover", PASS, max_size, formulas={"phi": phi},
                   notes=[f"k = {k}", "covers: all families of induced substructures"])


def delta_classify(phi: Formula, k: int, l: int, max_size: int,
                   vocab: Vocabulary | None = None, threads: int = 1) -> Verdict:
    """phi in PSC(k), ~phi in PSC(l), and phi equivalent to
    build_psi(phi, k, l), all up to max_size."""
    vocab = _vocab(vocab, phi)
    parts = [psc_check(phi, k, max_size, vocab), psc_check(Not(phi), l, max_size, vocab)]
    if all(p.passed for p in parts):
        parts.append(check_equiv_upto(phi, build_psi(phi, k, l, vocab), max_size, vocab))
    status = PASS if all(p.passed for p in parts) else FAIL
    return Verdict("delta", status, max_size, formulas={"phi": phi}, parts=parts,
                   notes=[f"k = {k}, l = {l}"])
