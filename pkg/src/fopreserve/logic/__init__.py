"""Vocabularies, formulas, structures and their semantics."""

from .vocab import Vocabulary, VocabularyError, letter_predicate, word_vocabulary
from .formula import (
    EXISTS, FORALL, And, Bottom, Const, Eq, Formula, FoQuantifier, Iff, Implies,
    Not, Or, Pred, SetAtom, SetQuantifier, Top, Var, atom, conj, disj, distinct,
    eq, exists, forall, neq, quantifier_rank, to_text,
)
from .parser import ParseError, parse_formula, parse_formula_file, parse_vocab
from .structure import (
    Structure, StructureError, format_structure, induced, isomorphic,
    isomorphisms, make_structure, parse_structure, relabel,
)
from .semantics import Assignment, EvaluationError, eval_fo, eval_mso
