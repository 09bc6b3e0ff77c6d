"""Finite-model workbench: cores of finite structures, relativization,
bounded preservation checks, and an automata toolkit over words."""

from .logic import (
    Structure, Vocabulary, eval_fo, eval_mso, format_structure, induced, isomorphic,
    parse_formula, parse_formula_file, parse_structure, to_text,
)
from .relativize import (
    build_psi, diagram, pi1_from_forbidden, relativize_fo, relativize_mso,
    type_cycle_sentence,
)
from .modellab import (
    Verdict, check_equiv_upto, delta_classify, enum_structures, is_core, is_k_cover,
    kcover_preservation_check, minimal_cores, ps_check, psc_check, recheck,
    witness_core_report,
)
from .words import (
    Dfa, compile_word_fo, dfa_equiv, dfa_run, extract_subword, higman_basis,
    is_subword_closed, parse_dfa, pi1_sentence_for_language, subword_closure,
    verify_words_theorem, word_to_structure,
)
from .casebook import CaseResult, run_case

__version__ = "0.1.0"

__all__ = [
    "Structure", "Vocabulary", "eval_fo", "eval_mso", "format_structure", "induced",
    "isomorphic", "parse_formula", "parse_formula_file", "parse_structure", "to_text",
    "build_psi", "diagram", "pi1_from_forbidden", "relativize_fo", "relativize_mso",
    "type_cycle_sentence", "Verdict", "check_equiv_upto", "delta_classify",
    "enum_structures", "is_core", "is_k_cover", "kcover_preservation_check",
    "minimal_cores", "ps_check", "psc_check", "recheck", "witness_core_report",
    "Dfa", "compile_word_fo", "dfa_equiv", "dfa_run", "extract_subword", "higman_basis",
    "is_subword_closed", "parse_dfa", "pi1_sentence_for_language", "subword_closure",
    "verify_words_theorem", "word_to_structure", "CaseResult", "run_case",
]
