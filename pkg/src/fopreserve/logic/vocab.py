"""Relational vocabularies: predicate symbols with arities, and constants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping


class VocabularyError(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    """A finite relational vocabulary.

    Predicates keep their declaration order; that order fixes the bit layout
    used by structure enumeration and the order of blocks in printed
    structures.
    """

    predicates: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        names = [p for p, _ in self.predicates]
        seen = set()
        for name in names + list(self.constants):
            if not name:
                raise VocabularyError("empty symbol name")
            if name in seen:
                raise VocabularyError(f"duplicate symbol {name!r}")
            seen.add(name)
        for name, arity in self.predicates:
            if arity < 1:
                raise VocabularyError(f"predicate {name!r} must have arity >= 1")

    @classmethod
    def of(cls, predicates: Mapping[str, int] | Iterable[tuple[str, int]] = (),
           constants: Iterable[str] = ()) -> "Vocabulary":
        if isinstance(predicates, Mapping):
            predicates = predicates.items()
        return cls(tuple((str(p), int(a)) for p, a in predicates), tuple(constants))

    @property
    def predicate_names(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.predicates)

    def arity(self, name: str) -> int:
        for p, a in self.predicates:
            if p == name:
                return a
        raise KeyError(name)

    def has_predicate(self, name: str) -> bool:
        return any(p == name for p, _ in self.predicates)

    def is_purely_relational(self) -> bool:
        return not self.constants

    def is_monadic(self) -> bool:
        return all(a == 1 for _, a in self.predicates)

    def with_constants(self, extra: Iterable[str]) -> "Vocabulary":
        return Vocabulary(self.predicates, self.constants + tuple(extra))

    def merge(self, other: "Vocabulary") -> "Vocabulary":
        preds = list(self.predicates)
        for name, arity in other.predicates:
            if self.has_predicate(name):
                if self.arity(name) != arity:
                    raise VocabularyError(f"arity clash for {name!r}")
            else:
                preds.append((name, arity))
        consts = list(self.constants)
        consts += [c for c in other.constants if c not in consts]
        return Vocabulary(tuple(preds), tuple(consts))

    def __str__(self) -> str:
        items = [f"{p}/{a}" for p, a in self.predicates] + list(self.constants)
        return "vocab { " + "; ".join(items) + " }" if items else "vocab { }"


def word_vocabulary(alphabet: Iterable[str]) -> Vocabulary:
    """The vocabulary of word structures: ``leq/2`` plus ``P<letter>/1``."""
    preds = [("leq", 2)] + [(letter_predicate(a), 1) for a in alphabet]
    return Vocabulary(tuple(preds), ())


def letter_predicate(letter: str) -> str:
    return "P" + letter
