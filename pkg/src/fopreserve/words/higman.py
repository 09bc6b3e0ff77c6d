"""Subword-closed languages: closure, finite bases of minimal excluded words,
universal sentences defining them, and the bounded-core normal form over
words."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..logic.batch import evaluate_structures
from ..logic.formula import Bottom, Formula, has_set_syntax
from ..logic.semantics import eval_mso
from ..logic.vocab import word_vocabulary
from ..modellab.verdict import FAIL, PASS, Verdict, Witness
from ..relativize import build_psi, pi1_from_forbidden
from .dfa import Dfa, complement, determinize, dfa_equiv, minimize, superword_dfa, words_upto
from .extraction import word_to_structure


class LanguageError(ValueError):
    pass


def subword_closure(D: Dfa) -> Dfa:
    """DFA for all subsequences of words of L(D): the NFA may skip any letter."""
    k = len(D.alphabet)

    def closure(S: frozenset) -> frozenset:
        seen = set(S)
        stack = list(S)
        while stack:
            q = stack.pop()
            for a in range(k):
                r = D.delta[q][a]
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    out = determinize(D.alphabet, [D.start], lambda q, a: (D.delta[q][a],),
                      lambda q: q in D.accepting, closure)
    return minimize(out)


def is_subword_closed(D: Dfa) -> bool:
    return dfa_equiv(D, subword_closure(D))[0]


def higman_basis(D: Dfa, max_length: int = 64) -> list[str]:
    """The subsequence-minimal words outside L(D), for subword-closed L(D).

    Words are visited by length, then in alphabet order.  A minimal excluded
    word w has every one-letter deletion inside L; in particular w minus its
    last letter is in L, so candidates are members of L extended by a letter.
    The search stops once the words having a basis word as a subsequence are
    exactly the complement.
    """
    if not is_subword_closed(D):
        raise LanguageError("language is not closed under subwords")
    comp = complement(D)
    basis: list[str] = []
    if not D.accepts(()):
        return [""]
    level = [""]
    for length in range(1, max_length + 1):
        if dfa_equiv(superword_dfa(D.alphabet, basis), comp)[0]:
            return basis
        nxt = []
        for u in level:
            for a in D.alphabet:
                w = u + a
                if D.accepts(w):
                    nxt.append(w)
                elif all(D.accepts(w[:i] + w[i + 1:]) for i in range(len(w))):
                    basis.append(w)
        level = nxt
    if dfa_equiv(superword_dfa(D.alphabet, basis), comp)[0]:
        return basis
    raise LanguageError(f"basis search did not finish within length {max_length}")


def pi1_sentence_for_language(D: Dfa) -> Formula:
    """Universal sentence over words forbidding every basis word as a
    subword; it defines L(D) on nonempty words."""
    basis = higman_basis(D)
    if "" in basis:
        return Bottom()
    return pi1_from_forbidden([word_to_structure(w, D.alphabet) for w in basis])


# ---------------------------------------------------------------- word sweeps

def word_truths(phi: Formula, alphabet: Sequence[str], words: Sequence[str]) -> np.ndarray:
    """Truth of phi on each nonempty word."""
    if has_set_syntax(phi):
        return np.array([eval_mso(word_to_structure(w, alphabet), phi) for w in words], dtype=bool)
    return evaluate_structures([word_to_structure(w, alphabet) for w in words], phi)


def nonempty_words(alphabet: Sequence[str], max_len: int) -> list[str]:
    return ["".join(w) for w in words_upto(alphabet, max_len, 1)]


def _psi_agrees(phi_vals, psi, alphabet, words) -> int | None:
    vals = word_truths(psi, alphabet, words)
    diff = np.flatnonzero(vals != phi_vals)
    return int(diff[0]) if len(diff) else None


def verify_words_theorem(phi: Formula, D: Dfa, B: int, max_len: int,
                         smallest: bool = True) -> Verdict:
    """Check phi against build_psi(phi, B, (B+1) * D.n) on all nonempty words
    of length <= max_len, after confirming that D recognizes phi there."""
    alphabet = D.alphabet
    words = nonempty_words(alphabet, max_len)
    phi_vals = word_truths(phi, alphabet, words)
    for w, v in zip(words, phi_vals):
        if D.accepts(w) != bool(v):
            raise LanguageError(f"DFA and sentence disagree on word {w!r}")
    N = (B + 1) * D.n
    vocab = word_vocabulary(alphabet)
    psi = build_psi(phi, B, N, vocab)
    bad = _psi_agrees(phi_vals, psi, alphabet, words)
    notes = [f"B = {B}, states = {D.n}, N = {N}"]
    if bad is not None:
        w = words[bad]
        return Verdict("words", FAIL, max_len,
                       Witness("words", word_to_structure(w, alphabet), {"word": w}),
                       {"phi": phi, "psi": psi}, notes)
    if smallest:
        for k in range(0 if B else 1, N + 1):
            if k == N or _psi_agrees(phi_vals, build_psi(phi, B, k, vocab), alphabet, words) is None:
                notes.append(f"smallest passing k = {k}")
                break
    return Verdict("words", PASS, max_len, formulas={"phi": phi, "psi": psi}, notes=notes)
