"""Cores of a model: sets every induced superstructure of which is a model.

Subsets of the universe are bitmasks.  ``good[S]`` is the truth value of the
sentence in the substructure induced by S; subsets that miss a constant (or
are empty) are not substructures and count as vacuously good.  A set C is a
core iff ``good`` holds on every superset of C, which one superset-AND pass
computes for all C at once.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from ..logic.batch import evaluate_structures, evaluate
from ..logic.formula import EXISTS, Formula, FoQuantifier, has_set_syntax
from ..logic.semantics import eval_fo, eval_mso
from ..logic.structure import Structure, induced
from ..relativize import build_psi
from .verdict import CoreReport


class CoreError(ValueError):
    pass


def superset_and(good: np.ndarray) -> np.ndarray:
    """out[..., C] = AND of good[..., S] over all S containing C."""
    out = good.copy()
    m = out.shape[-1]
    n = m.bit_length() - 1
    lead = out.shape[:-1]
    for i in range(n):
        v = out.reshape(lead + (m >> (i + 1), 2, 1 << i))
        v[..., 0, :] &= v[..., 1, :]
    return out


def superset_or(good: np.ndarray) -> np.ndarray:
    """out[..., T] = OR of good[..., S] over all S containing T."""
    out = good.copy()
    m = out.shape[-1]
    n = m.bit_length() - 1
    lead = out.shape[:-1]
    for i in range(n):
        v = out.reshape(lead + (m >> (i + 1), 2, 1 << i))
        v[..., 0, :] |= v[..., 1, :]
    return out


def popcounts(n: int) -> np.ndarray:
    return np.array([bin(s).count("1") for s in range(1 << n)])


def to_mask(S: Iterable[int]) -> int:
    m = 0
    for x in S:
        m |= 1 << x
    return m


def from_mask(m: int) -> tuple[int, ...]:
    return tuple(x for x in range(m.bit_length()) if m >> x & 1)


def _truth(M: Structure, phi: Formula) -> bool:
    return eval_mso(M, phi) if has_set_syntax(phi) else eval_fo(M, phi)


def subset_truths(M: Structure, phi: Formula) -> np.ndarray:
    """good[S] for one structure, as described in the module docstring."""
    n = M.size
    consts = to_mask(M.constant_elements)
    good = np.ones(1 << n, dtype=bool)
    subs, where = [], []
    for s in range(1, 1 << n):
        if s & consts == consts:
            subs.append(induced(M, from_mask(s))[0])
            where.append(s)
    if subs:
        good[where] = evaluate_structures(subs, phi)
    return good


def _check_model(M: Structure, phi: Formula):
    if not _truth(M, phi):
        raise CoreError("cores are only defined for models: the structure does not satisfy the sentence")


def is_core(M: Structure, C: Iterable[int], phi: Formula) -> bool:
    C = set(C)
    if any(not 0 <= x < M.size for x in C):
        raise CoreError("core element out of range")
    _check_model(M, phi)
    good = subset_truths(M, phi)
    c = to_mask(C)
    return bool(all(good[s] for s in range(1 << M.size) if s & c == c))


def core_table(M: Structure, phi: Formula) -> np.ndarray:
    return superset_and(subset_truths(M, phi))


def _minimal(core: np.ndarray, n: int) -> list[tuple[int, ...]]:
    out = []
    for s in range(1 << n):
        if core[s] and not any(core[s & ~(1 << x)] for x in range(n) if s >> x & 1):
            out.append(from_mask(s))
    out.sort(key=lambda c: (len(c), c))
    return out


def minimal_cores(M: Structure, phi: Formula) -> CoreReport:
    _check_model(M, phi)
    core = core_table(M, phi)
    mins = _minimal(core, M.size)
    return CoreReport(M, phi, mins, min(len(c) for c in mins))


def _strip_exists(psi: Formula, B: int) -> tuple[list[str], Formula]:
    xs = []
    body = psi
    for _ in range(B):
        if not (isinstance(body, FoQuantifier) and body.kind == EXISTS):
            raise CoreError(f"psi does not start with {B} existential quantifiers")
        xs.append(body.var)
        body = body.body
    if len(set(xs)) != len(xs):
        raise CoreError("existential prefix repeats a variable")
    return xs, body


def witnesses(M: Structure, psi: Formula, B: int) -> list[tuple[int, ...]]:
    """All B-tuples satisfying the matrix of psi after its first B
    existential quantifiers."""
    xs, body = _strip_exists(psi, B)
    from ..logic.batch import BatchContext
    vals = evaluate(BatchContext.from_structures([M]), body, xs)[0]
    return [tuple(int(i) for i in t) for t in np.argwhere(vals)] if B else (
        [()] if bool(vals) else [])


def witness_core_report(phi: Formula, M: Structure, B: int, n: int | None = None,
                        psi: Formula | None = None) -> CoreReport:
    """Compare the witnesses of an exists^B forall^* sentence with the cores of M.

    psi defaults to build_psi(phi, B, n); pass ``psi`` to study any sentence
    of that shape (e.g. phi itself when it is already prenex).
    """
    if psi is None:
        if n is None:
            raise CoreError("give either n or psi")
        psi = build_psi(phi, B, n, M.vocab)
    _check_model(M, phi)
    if not _truth(M, psi):
        raise CoreError("the structure does not satisfy psi")
    core = core_table(M, phi)
    mins = _minimal(core, M.size)
    wit = witnesses(M, psi, B)
    flag_a = all(core[to_mask(w)] for w in wit)
    wset = set(wit)
    flag_b = True
    for s in range(1 << M.size):
        C = from_mask(s)
        if not core[s] or len(C) > B:
            continue
        for t in itertools.product(C, repeat=B):
            if set(t) == set(C) and t not in wset:
                flag_b = False
                break
        if not flag_b:
            break
    return CoreReport(M, phi, mins, min(len(c) for c in mins), wit, psi, flag_a, flag_b)


def is_k_cover(M: Structure, K: Sequence[Iterable[int]], k: int) -> bool:
    """Conditions of a k-cover for members given as universe subsets of M.

    Every member is a substructure, so it implicitly contains the constants.
    """
    members = []
    for S in K:
        S = set(S)
        if any(not 0 <= x < M.size for x in S):
            raise CoreError("cover member out of range")
        members.append(S | set(M.constant_elements))
    if not members or set().union(*members) != set(range(M.size)):
        return False
    r = min(k, M.size)
    for T in itertools.combinations(range(M.size), r):
        if not any(set(T) <= S for S in members):
            return False
    return True
