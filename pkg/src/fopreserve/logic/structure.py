"""Finite relational structures over the universe {0..n-1}.

A structure of size n is also addressed by an integer ``index``: the relation
bitmap (predicates in declared order, tuples of each predicate in
lexicographic order, bit i = tuple i) times n**#constants plus the constant
code (constants in declared order, read as base-n digits, first constant most
significant).  Enumeration in index order is the canonical order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .vocab import Vocabulary


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class Layout:
    """Bit layout of relation bitmaps at a fixed universe size."""

    vocab: Vocabulary
    size: int
    offsets: tuple[int, ...]
    nbits: int

    @property
    def const_count(self) -> int:
        return self.size ** len(self.vocab.constants)

    @property
    def count(self) -> int:
        """Number of structures of this size."""
        return (1 << self.nbits) * self.const_count


def layout(vocab: Vocabulary, n: int) -> Layout:
    offsets = []
    total = 0
    for _, arity in vocab.predicates:
        offsets.append(total)
        total += n ** arity
    return Layout(vocab, n, tuple(offsets), total)


def tuple_index(t: tuple[int, ...], n: int) -> int:
    idx = 0
    for x in t:
        idx = idx * n + x
    return idx


def index_tuple(idx: int, n: int, arity: int) -> tuple[int, ...]:
    out = []
    for _ in range(arity):
        idx, r = divmod(idx, n)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True)
class Structure:
    vocab: Vocabulary
    size: int
    relations: Mapping[str, frozenset] = field(default_factory=dict)
    constants: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise StructureError("universe must be nonempty")
        rels = {}
        for name, arity in self.vocab.predicates:
            tuples = frozenset(tuple(t) for t in self.relations.get(name, ()))
            for t in tuples:
                if len(t) != arity:
                    raise StructureError(f"tuple {t} has wrong arity for {name}")
                if any(not 0 <= x < self.size for x in t):
                    raise StructureError(f"element out of range in {name}{t}")
            rels[name] = tuples
        extra = set(self.relations) - set(rels)
        if extra:
            raise StructureError(f"unknown predicate(s) {sorted(extra)}")
        consts = {}
        for c in self.vocab.constants:
            if c not in self.constants:
                raise StructureError(f"missing constant {c!r}")
            v = int(self.constants[c])
            if not 0 <= v < self.size:
                raise StructureError(f"constant {c!r} out of range")
            consts[c] = v
        if set(self.constants) - set(consts):
            raise StructureError("unknown constant(s)")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", consts)

    def __hash__(self):
        return hash((self.vocab, self.size, self.index))

    def __eq__(self, other):
        return (isinstance(other, Structure) and self.vocab == other.vocab
                and self.size == other.size and self.relations == other.relations
                and self.constants == other.constants)

    @property
    def universe(self) -> range:
        return range(self.size)

    def holds(self, name: str, *args: int) -> bool:
        return tuple(args) in self.relations[name]

    @property
    def constant_elements(self) -> frozenset[int]:
        return frozenset(self.constants.values())

    @property
    def mask(self) -> int:
        lay = layout(self.vocab, self.size)
        m = 0
        for (name, _), off in zip(self.vocab.predicates, lay.offsets):
            for t in self.relations[name]:
                m |= 1 << (off + tuple_index(t, self.size))
        return m

    @property
    def const_code(self) -> int:
        code = 0
        for c in self.vocab.constants:
            code = code * self.size + self.constants[c]
        return code

    @property
    def index(self) -> int:
        return self.mask * self.size ** len(self.vocab.constants) + self.const_code

    @classmethod
    def from_index(cls, vocab: Vocabulary, n: int, index: int) -> "Structure":
        lay = layout(vocab, n)
        mask, code = divmod(index, lay.const_count)
        rels = {}
        for (name, arity), off in zip(vocab.predicates, lay.offsets):
            rels[name] = frozenset(
                index_tuple(i, n, arity) for i in range(n ** arity) if mask >> (off + i) & 1)
        consts = {}
        for c in reversed(vocab.constants):
            code, consts[c] = divmod(code, n)
        return cls(vocab, n, rels, consts)

    def __str__(self):
        return format_structure(self)


def induced(M: Structure, S: Iterable[int]) -> tuple[Structure, dict[int, int]]:
    """Substructure induced by S together with the constants.

    Elements are renumbered in increasing order of their old labels; the
    old-to-new map is returned alongside.
    """
    keep = set(S)
    for x in keep:
        if not 0 <= x < M.size:
            raise StructureError(f"element {x} out of range")
    keep |= M.constant_elements
    if not keep:
        raise StructureError("induced substructure would be empty")
    order = sorted(keep)
    ren = {old: new for new, old in enumerate(order)}
    rels = {name: frozenset(tuple(ren[x] for x in t) for t in ts if all(x in ren for x in t))
            for name, ts in M.relations.items()}
    consts = {c: ren[v] for c, v in M.constants.items()}
    return Structure(M.vocab, len(order), rels, consts), ren


def _element_profile(M: Structure, x: int):
    prof = []
    for name, arity in M.vocab.predicates:
        counts = [0] * arity
        diag = 0
        for t in M.relations[name]:
            for j, y in enumerate(t):
                if y == x:
                    counts[j] += 1
            if all(y == x for y in t):
                diag = 1
        prof.append((tuple(counts), diag))
    prof.append(tuple(sorted(c for c, v in M.constants.items() if v == x)))
    return tuple(prof)


def isomorphisms(M: Structure, N: Structure):
    """Yield every isomorphism from M to N as a tuple f with f[x] in N."""
    if M.vocab != N.vocab:
        raise StructureError("vocabulary mismatch")
    if M.size != N.size:
        return
    for name in M.relations:
        if len(M.relations[name]) != len(N.relations[name]):
            return
    pm = [_element_profile(M, x) for x in M.universe]
    pn = [_element_profile(N, x) for x in N.universe]
    if sorted(pm) != sorted(pn):
        return
    candidates = [[y for y in N.universe if pn[y] == pm[x]] for x in M.universe]
    order = sorted(M.universe, key=lambda x: len(candidates[x]))
    f = [-1] * M.size
    used = [False] * N.size

    def consistent(x):
        # check every tuple of M whose elements are all assigned and include x
        for name, ts in M.relations.items():
            nts = N.relations[name]
            for t in ts:
                if x in t and all(f[y] >= 0 for y in t):
                    if tuple(f[y] for y in t) not in nts:
                        return False
        return True

    def rec(k):
        if k == len(order):
            yield tuple(f)
            return
        x = order[k]
        for y in candidates[x]:
            if used[y]:
                continue
            f[x] = y
            used[y] = True
            if consistent(x):
                yield from rec(k + 1)
            f[x] = -1
            used[y] = False

    # tuple counts agree, so an injective map preserving M's tuples is onto N's
    yield from rec(0)


def isomorphic(M: Structure, N: Structure) -> bool:
    return next(isomorphisms(M, N), None) is not None


def relabel(M: Structure, perm: Iterable[int]) -> Structure:
    """Image of M under the bijection x -> perm[x]."""
    p = list(perm)
    rels = {name: frozenset(tuple(p[x] for x in t) for t in ts) for name, ts in M.relations.items()}
    consts = {c: p[v] for c, v in M.constants.items()}
    return Structure(M.vocab, M.size, rels, consts)


def make_structure(vocab: Vocabulary, size: int, relations=None, constants=None) -> Structure:
    rels = {}
    for name, ts in (relations or {}).items():
        arity = vocab.arity(name)
        rels[name] = frozenset((t,) if arity == 1 and isinstance(t, int) else tuple(t) for t in ts)
    return Structure(vocab, size, rels, dict(constants or {}))


# ---------------------------------------------------------------- text format

def format_structure(M: Structure, with_vocab: bool = True) -> str:
    blocks = []
    for name, arity in M.vocab.predicates:
        ts = sorted(M.relations[name])
        if arity == 1:
            items = " ".join(str(t[0]) for t in ts)
        else:
            items = " ".join("(" + ",".join(map(str, t)) + ")" for t in ts)
        blocks.append(f"{name} = {{ {items} }}" if items else f"{name} = {{ }}")
    for c in M.vocab.constants:
        blocks.append(f"{c} = {M.constants[c]}")
    body = "".join(f" {b};" for b in blocks)
    text = f"structure over {M.size} {{{body} }}"
    if with_vocab:
        text = f"{M.vocab}\n{text}"
    return text


def parse_structure(text: str, vocab: Vocabulary | None = None) -> Structure:
    from .parser import ParseError, _Stream, parse_vocab_block

    s = _Stream(text)
    if s.peek.text == "vocab":
        declared = parse_vocab_block(s)
        vocab = declared if vocab is None else vocab.merge(declared)
    s.expect("structure")
    s.expect("over")
    size_tok = s.peek
    n = s.expect_int()
    if n < 1:
        raise ParseError("universe must be nonempty", size_tok.pos)
    s.expect("{")
    rels: dict[str, set] = {}
    consts: dict[str, int] = {}
    arities: dict[str, int] = {}
    while not s.accept("}"):
        name_tok = s.expect_name("symbol")
        name = name_tok.text
        if name in rels or name in consts:
            raise ParseError(f"duplicate block {name!r}", name_tok.pos)
        s.expect("=")
        if s.accept("{"):
            ts = set()
            while not s.accept("}"):
                pos = s.peek.pos
                if s.accept("("):
                    t = [s.expect_int()]
                    while s.accept(","):
                        t.append(s.expect_int())
                    s.expect(")")
                else:
                    t = [s.expect_int()]
                s.accept(",")
                t = tuple(t)
                if any(x >= n for x in t):
                    raise ParseError(f"element out of range in {name}{t}", pos)
                if vocab is not None:
                    if not vocab.has_predicate(name):
                        raise ParseError(f"unknown symbol {name!r}", name_tok.pos)
                    if len(t) != vocab.arity(name):
                        raise ParseError(f"arity mismatch in {name}{t}", pos)
                elif arities.setdefault(name, len(t)) != len(t):
                    raise ParseError(f"arity mismatch in {name}{t}", pos)
                ts.add(t)
            rels[name] = ts
        else:
            pos = s.peek.pos
            v = s.expect_int()
            if v >= n:
                raise ParseError(f"constant {name!r} out of range", pos)
            if vocab is not None and name not in vocab.constants:
                raise ParseError(f"unknown symbol {name!r}", name_tok.pos)
            consts[name] = v
        if not s.accept(";") and s.peek.text != "}":
            raise ParseError("expected ';' or '}'", s.peek.pos)
    if s.peek.kind != "end":
        raise ParseError(f"unexpected {s.peek.text!r}", s.peek.pos)
    if vocab is None:
        for name, ts in rels.items():
            if not ts:
                raise ParseError(f"cannot infer arity of empty relation {name!r}")
        vocab = Vocabulary(tuple(arities.items()), tuple(consts))
    for name in rels:
        if not vocab.has_predicate(name):
            raise ParseError(f"unknown symbol {name!r}")
    for c in vocab.constants:
        if c not in consts:
            raise ParseError(f"missing constant {c!r}")
    return Structure(vocab, n, {k: frozenset(v) for k, v in rels.items()}, consts)


_WS = re.compile(r"\s+")


def normalize_ws(text: str) -> str:
    return _WS.sub(" ", text).strip()
