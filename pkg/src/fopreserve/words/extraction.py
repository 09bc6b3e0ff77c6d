"""Word structures and extraction of a short subword that keeps a given set
of positions and drives a DFA to the same state.

Positions are 0-based here.  The state sequence ``q`` has q[i] = state
before reading position i, so q[len(w)] is the end state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..logic.structure import Structure
from ..logic.vocab import letter_predicate, word_vocabulary
from .dfa import Dfa


class WordError(ValueError):
    pass


def word_to_structure(word: Sequence[str], alphabet: Sequence[str] | None = None) -> Structure:
    """Universe = positions, leq = the usual order, P<letter> = positions
    carrying that letter."""
    if len(word) == 0:
        raise WordError("the empty word has no structure (universes are nonempty)")
    alphabet = tuple(alphabet) if alphabet is not None else tuple(sorted(set(word)))
    for a in word:
        if a not in alphabet:
            raise WordError(f"letter {a!r} not in alphabet")
    n = len(word)
    rels = {"leq": frozenset((i, j) for i in range(n) for j in range(i, n))}
    for a in alphabet:
        rels[letter_predicate(a)] = frozenset((i,) for i in range(n) if word[i] == a)
    return Structure(word_vocabulary(alphabet), n, rels, {})


def structure_to_word(M: Structure, alphabet: Sequence[str]) -> str:
    order = sorted(M.universe, key=lambda x: sum(1 for y in M.universe if (y, x) in M.relations["leq"]))
    out = []
    for x in order:
        letters = [a for a in alphabet if (x,) in M.relations[letter_predicate(a)]]
        if len(letters) != 1:
            raise WordError("letter predicates do not partition the universe")
        out.append(letters[0])
    return "".join(out)


@dataclass(frozen=True)
class ExtractionTrace:
    input_word: str
    positions_a: tuple[int, ...]
    segments: tuple[tuple[int, ...], ...]
    kept: tuple[int, ...]
    output: str
    output_positions: dict
    state_count: int

    def lines(self) -> list[str]:
        out = [f"input: {self.input_word}",
               "A: {" + ",".join(map(str, self.positions_a)) + "}"]
        for j, seg in enumerate(self.segments):
            out.append(f"segment {j}: T = {{" + ",".join(map(str, seg)) + "}")
        out.append("kept: {" + ",".join(map(str, self.kept)) + "}")
        out.append(f"output: {self.output}")
        out.append(f"length bound: {len(self.output)} <= "
                   f"{(len(self.positions_a) + 1) * self.state_count}")
        return out


def _first_stretch(q: list[int], p: int, s: int) -> list[int]:
    """Selection over positions p..s (inclusive) that drives q[p] to q[s+1].

    Same steps as the classical procedure: i = s takes s; i < s takes the
    last k in [p, s] with q[k] = q[i] and continues after it.
    """
    T = []
    i = p
    while i <= s:
        if i == s:
            T.append(i)
            i += 1
        else:
            k = max(j for j in range(p, s + 1) if q[j] == q[i])
            T.append(k)
            i = k + 1
    return T


def _after_anchor(q: list[int], p: int, s: int) -> list[int]:
    """Selection over positions p..s that drives q[p] to q[s+1], stopping as
    soon as the target state is reached.  At most n - 1 letters."""
    T = []
    i = p
    while i <= s:
        k = max(j for j in range(i, s + 2) if q[j] == q[i])
        if k == s + 1:
            break
        T.append(k)
        i = k + 1
    return T


def extract_subword(D: Dfa, word: Sequence[str], A: Iterable[int]) -> ExtractionTrace:
    """Subword of ``word`` containing the positions A, of length at most
    (|A|+1) * D.n, on which D ends in the same state as on ``word``.

    The stretch before the first position of A uses the classical selection.
    Every position of A is kept, and each stretch after one is selected so
    that it adds at most n - 1 letters; the anchor itself is the n-th.
    """
    word = "".join(word)
    A = tuple(sorted(set(A)))
    for x in A:
        if not 0 <= x < len(word):
            raise WordError(f"position {x} out of range")
    q = D.states_along(word)
    bounds = list(A) + [len(word)]
    segments = [tuple(_first_stretch(q, 0, bounds[0] - 1))]
    for j, a in enumerate(A):
        segments.append(tuple([a] + _after_anchor(q, a + 1, bounds[j + 1] - 1)))
    kept = tuple(x for seg in segments for x in seg)
    output = "".join(word[x] for x in kept)
    return ExtractionTrace(word, A, tuple(segments), kept, output,
                           {x: i for i, x in enumerate(kept)}, D.n)


def is_subsequence(u: Sequence, w: Sequence) -> bool:
    it = iter(w)
    return all(any(a == b for b in it) for a in u)
