"""Automata and subword arguments over finite words."""

from .dfa import (
    Dfa, DfaError, at_most_dfa, contains_letter_dfa, dfa_equiv, dfa_run, format_dfa,
    minimize, parse_dfa,
)
from .compiler import CompileError, compile_word_fo
from .extraction import ExtractionTrace, WordError, extract_subword, word_to_structure
from .higman import (
    LanguageError, higman_basis, is_subword_closed, pi1_sentence_for_language,
    subword_closure, verify_words_theorem,
)
