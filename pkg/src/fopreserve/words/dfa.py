"""Deterministic finite automata over a finite ordered alphabet."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


class DfaError(ValueError):
    pass


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple
    n: int
    start: int
    accepting: frozenset
    delta: tuple  # delta[state][letter index]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        if self.n < 1:
            raise DfaError("a DFA needs at least one state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise DfaError("repeated letter in alphabet")
        if not 0 <= self.start < self.n:
            raise DfaError("start state out of range")
        if any(not 0 <= q < self.n for q in self.accepting):
            raise DfaError("accepting state out of range")
        if len(self.delta) != self.n or any(len(r) != len(self.alphabet) for r in self.delta):
            raise DfaError("transition table is not total")
        if any(not 0 <= q < self.n for r in self.delta for q in r):
            raise DfaError("transition target out of range")

    @property
    def state_count(self) -> int:
        return self.n

    def letter_index(self, a) -> int:
        try:
            return self.alphabet.index(a)
        except ValueError:
            raise DfaError(f"letter {a!r} not in alphabet") from None

    def step(self, q: int, a) -> int:
        return self.delta[q][self.letter_index(a)]

    def states_along(self, word: Sequence) -> list[int]:
        """States before each letter and after the last one (len(word)+1)."""
        q = self.start
        out = [q]
        for a in word:
            q = self.delta[q][self.letter_index(a)]
            out.append(q)
        return out

    def run(self, word: Sequence) -> tuple[int, bool]:
        q = self.states_along(word)[-1]
        return q, q in self.accepting

    def accepts(self, word: Sequence) -> bool:
        return self.run(word)[1]

    def __str__(self):
        return format_dfa(self)


def dfa_run(D: Dfa, word: Sequence) -> tuple[int, bool]:
    return D.run(word)


# ---------------------------------------------------------------- constructions

def complement(D: Dfa) -> Dfa:
    return Dfa(D.alphabet, D.n, D.start, frozenset(range(D.n)) - D.accepting, D.delta)


def product(D1: Dfa, D2: Dfa, op: Callable[[bool, bool], bool]) -> Dfa:
    """Reachable product automaton accepting where op(acc1, acc2)."""
    if D1.alphabet != D2.alphabet:
        raise DfaError("alphabet mismatch")
    k = len(D1.alphabet)
    index = {(D1.start, D2.start): 0}
    order = [(D1.start, D2.start)]
    delta = []
    i = 0
    while i < len(order):
        p, q = order[i]
        row = []
        for a in range(k):
            nxt = (D1.delta[p][a], D2.delta[q][a])
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            row.append(index[nxt])
        delta.append(row)
        i += 1
    acc = {index[pq] for pq in order if op(pq[0] in D1.accepting, pq[1] in D2.accepting)}
    return Dfa(D1.alphabet, len(order), 0, acc, delta)


def intersect(D1: Dfa, D2: Dfa) -> Dfa:
    return minimize(product(D1, D2, lambda x, y: x and y))


def union(D1: Dfa, D2: Dfa) -> Dfa:
    return minimize(product(D1, D2, lambda x, y: x or y))


def _canonical(alphabet, start, accepting, delta) -> Dfa:
    """Renumber reachable states in BFS order from the start."""
    index = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        for q in delta[order[i]]:
            if q not in index:
                index[q] = len(order)
                order.append(q)
        i += 1
    new_delta = [[index[q] for q in delta[p]] for p in order]
    return Dfa(alphabet, len(order), 0, {index[p] for p in order if p in accepting}, new_delta)


def minimize(D: Dfa) -> Dfa:
    """Hopcroft's partition refinement on the reachable part, then BFS
    renumbering so equal languages give identical automata."""
    D = _canonical(D.alphabet, D.start, D.accepting, D.delta)
    n, k = D.n, len(D.alphabet)
    inv = [[[] for _ in range(n)] for _ in range(k)]
    for p in range(n):
        for a in range(k):
            inv[a][D.delta[p][a]].append(p)
    acc = set(D.accepting)
    rej = set(range(n)) - acc
    partition = [b for b in (acc, rej) if b]
    block_of = [0] * n
    for bi, b in enumerate(partition):
        for q in b:
            block_of[q] = bi
    work = deque(range(len(partition)))
    in_work = set(work)
    while work:
        bi = work.popleft()
        in_work.discard(bi)
        splitter = set(partition[bi])
        for a in range(k):
            pre = set()
            for q in splitter:
                pre.update(inv[a][q])
            touched = {}
            for p in pre:
                touched.setdefault(block_of[p], set()).add(p)
            for bj, inside in touched.items():
                block = partition[bj]
                if len(inside) == len(block):
                    continue
                outside = block - inside
                partition[bj] = inside
                partition.append(outside)
                new = len(partition) - 1
                for q in outside:
                    block_of[q] = new
                if bj in in_work:
                    work.append(new)
                    in_work.add(new)
                else:
                    smaller = bj if len(inside) <= len(outside) else new
                    work.append(smaller)
                    in_work.add(smaller)
    delta = [[block_of[D.delta[next(iter(b))][a]] for a in range(k)] for b in partition]
    accepting = {i for i, b in enumerate(partition) if next(iter(b)) in acc}
    return _canonical(D.alphabet, block_of[D.start], accepting, delta)


def determinize(alphabet: Sequence, starts: Iterable[int],
                moves: Callable[[int, int], Iterable[int]],
                accepting: Callable[[int], bool],
                closure: Callable[[frozenset], frozenset] = lambda s: s) -> Dfa:
    """Subset construction for an NFA given by a move function."""
    k = len(alphabet)
    start = closure(frozenset(starts))
    index = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        S = order[i]
        row = []
        for a in range(k):
            T = set()
            for q in S:
                T.update(moves(q, a))
            T = closure(frozenset(T))
            if T not in index:
                index[T] = len(order)
                order.append(T)
            row.append(index[T])
        delta.append(row)
        i += 1
    acc = {index[S] for S in order if any(accepting(q) for q in S)}
    return Dfa(alphabet, len(order), 0, acc, delta)


def dfa_equiv(D1: Dfa, D2: Dfa) -> tuple[bool, tuple | None]:
    """Language equality; otherwise a shortest (then least by alphabet
    order) word accepted by exactly one of them."""
    if D1.alphabet != D2.alphabet:
        raise DfaError("alphabet mismatch")
    start = (D1.start, D2.start)
    parent = {start: None}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        if (p in D1.accepting) != (q in D2.accepting):
            word = []
            node = (p, q)
            while parent[node] is not None:
                prev, a = parent[node]
                word.append(D1.alphabet[a])
                node = prev
            return False, tuple(reversed(word))
        for a in range(len(D1.alphabet)):
            nxt = (D1.delta[p][a], D2.delta[q][a])
            if nxt not in parent:
                parent[nxt] = ((p, q), a)
                queue.append(nxt)
    return True, None


def is_empty(D: Dfa) -> bool:
    return _canonical(D.alphabet, D.start, D.accepting, D.delta).accepting == frozenset()


# ---------------------------------------------------------------- small languages

def all_words_dfa(alphabet: Sequence) -> Dfa:
    return Dfa(alphabet, 1, 0, {0}, [[0] * len(alphabet)])


def empty_dfa(alphabet: Sequence) -> Dfa:
    return Dfa(alphabet, 1, 0, set(), [[0] * len(alphabet)])


def epsilon_dfa(alphabet: Sequence) -> Dfa:
    return Dfa(alphabet, 2, 0, {0}, [[1] * len(alphabet), [1] * len(alphabet)])


def nonempty_dfa(alphabet: Sequence) -> Dfa:
    return Dfa(alphabet, 2, 0, {1}, [[1] * len(alphabet), [1] * len(alphabet)])


def contains_letter_dfa(alphabet: Sequence, letter) -> Dfa:
    a = list(alphabet).index(letter)
    return Dfa(alphabet, 2, 0, {1},
               [[1 if i == a else 0 for i in range(len(alphabet))], [1] * len(alphabet)])


def at_most_dfa(alphabet: Sequence, letter, count: int) -> Dfa:
    """Words with at most ``count`` occurrences of ``letter``."""
    a = list(alphabet).index(letter)
    dead = count + 1
    delta = [[min(q + 1, dead) if i == a else q for i in range(len(alphabet))]
             for q in range(count + 1)]
    delta.append([dead] * len(alphabet))
    return Dfa(alphabet, count + 2, 0, set(range(count + 1)), delta)


def superword_dfa(alphabet: Sequence, words: Iterable[Sequence]) -> Dfa:
    """Words having at least one of ``words`` as a subsequence."""
    result = empty_dfa(alphabet)
    for w in words:
        w = list(w)
        m = len(w)
        delta = [[i + 1 if i < m and a == w[i] else i for a in alphabet] for i in range(m + 1)]
        result = union(result, Dfa(alphabet, m + 1, 0, {m}, delta))
    return result


def words_upto(alphabet: Sequence, max_len: int, min_len: int = 0):
    for length in range(min_len, max_len + 1):
        for w in itertools.product(alphabet, repeat=length):
            yield w


# ---------------------------------------------------------------- text format

def format_dfa(D: Dfa) -> str:
    parts = [f"states={D.n}", f"start={D.start}",
             "accepting={" + ",".join(str(q) for q in sorted(D.accepting)) + "}"]
    for p in range(D.n):
        for a, letter in enumerate(D.alphabet):
            parts.append(f"{p},{letter}->{D.delta[p][a]}")
    return "dfa over {" + ",".join(D.alphabet) + "} { " + "; ".join(parts) + "; }"


def parse_dfa(text: str) -> Dfa:
    from ..logic.parser import ParseError, _Stream

    s = _Stream(text)
    s.expect("dfa")
    s.expect("over")
    s.expect("{")
    alphabet = []
    while not s.accept("}"):
        tok = s.next()
        if tok.kind not in ("name", "num"):
            raise ParseError(f"expected letter, found {tok.text!r}", tok.pos)
        alphabet.append(tok.text)
        s.accept(",")
    for a in alphabet:
        if len(a) != 1:
            raise ParseError(f"letters must be single characters: {a!r}")
    s.expect("{")
    n = start = None
    accepting: set[int] = set()
    trans: dict[tuple[int, str], int] = {}
    while not s.accept("}"):
        tok = s.peek
        if tok.text in ("states", "start", "accepting"):
            s.next()
            s.expect("=")
            if tok.text == "states":
                n = s.expect_int()
            elif tok.text == "start":
                start = s.expect_int()
            else:
                s.expect("{")
                while not s.accept("}"):
                    accepting.add(s.expect_int())
                    s.accept(",")
        else:
            p = s.expect_int()
            s.expect(",")
            lt = s.next()
            if lt.text not in alphabet:
                raise ParseError(f"letter {lt.text!r} not in alphabet", lt.pos)
            s.expect("->")
            if (p, lt.text) in trans:
                raise ParseError(f"duplicate transition {p},{lt.text}", tok.pos)
            trans[(p, lt.text)] = s.expect_int()
        if not s.accept(";") and s.peek.text != "}":
            raise ParseError("expected ';' or '}'", s.peek.pos)
    if s.peek.kind != "end":
        raise ParseError(f"unexpected {s.peek.text!r}", s.peek.pos)
    if n is None or start is None:
        raise ParseError("states and start are mandatory")
    delta = []
    for p in range(n):
        row = []
        for a in alphabet:
            if (p, a) not in trans:
                raise ParseError(f"missing transition {p},{a} (transitions must be total)")
            row.append(trans[(p, a)])
        delta.append(row)
    if any(p >= n for p, _ in trans):
        raise ParseError("transition from a state out of range")
    try:
        return Dfa(tuple(alphabet), n, start, accepting, delta)
    except DfaError as e:
        raise ParseError(str(e)) from None
