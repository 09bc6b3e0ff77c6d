"""Command-line front end.

Every verb wraps exactly one library operation (see ``VERBS``).  Reports are
plain text headed by ``VERDICT: PASS|FAIL bound=<n>``; exit status is 0 on
pass or true, 1 on fail or false, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import casebook
from .logic.formula import to_text
from .logic.parser import ParseError, parse_formula, parse_formula_file, parse_vocab
from .logic.semantics import EvaluationError, eval_fo, eval_mso
from .logic.structure import (
    StructureError, format_structure, induced, isomorphic, parse_structure,
)
from .logic.vocab import VocabularyError, word_vocabulary
from .modellab.checks import (
    check_equiv_upto, delta_classify, kcover_preservation_check, ps_check, psc_check,
)
from .modellab.cores import CoreError, is_core, is_k_cover, minimal_cores, witness_core_report
from .modellab.enumerate import BudgetExceeded, enum_structures
from .modellab.verdict import fmt_set
from .relativize import (
    RelativizeError, build_psi, diagram, pi1_from_forbidden, relativize_fo,
    relativize_mso, type_cycle_sentence,
)
from .words.compiler import CompileError, compile_word_fo
from .words.dfa import DfaError, dfa_equiv, dfa_run, format_dfa, parse_dfa
from .words.extraction import WordError, extract_subword, word_to_structure
from .words.higman import (
    LanguageError, higman_basis, is_subword_closed, pi1_sentence_for_language,
    subword_closure, verify_words_theorem,
)

INPUT_ERRORS = (
    OSError, ParseError, StructureError, VocabularyError, EvaluationError, RelativizeError,
    CoreError, BudgetExceeded, DfaError, CompileError, WordError, LanguageError,
    casebook.CaseError,
)


class UsageError(ValueError):
    pass


class InputError(ValueError):
    """A malformed input file; the message names the file."""


# ---------------------------------------------------------------- inputs

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _located(path: str, fn, *args):
    try:
        return fn(_read(path), *args)
    except (ParseError, StructureError, DfaError, VocabularyError) as e:
        raise InputError(f"{path}: {e}") from None


def load_formula(path: str, vocab=None):
    return _located(path, parse_formula_file, vocab)


def load_structure(path: str):
    return _located(path, parse_structure)


def load_dfa(path: str):
    return _located(path, parse_dfa)


def int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def name_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def verdict_line(ok: bool, bound: int) -> str:
    return f"VERDICT: {'PASS' if ok else 'FAIL'} bound={bound}"


def _bool_report(check: str, ok: bool, bound: int, *extra: str) -> tuple[str, bool]:
    lines = [verdict_line(ok, bound), f"check: {check}", *extra,
             f"result: {'true' if ok else 'false'}"]
    return "\n".join(lines) + "\n", ok


def _text_report(check: str, bound: int, *lines: str) -> tuple[str, bool]:
    return "\n".join([verdict_line(True, bound), f"check: {check}", *lines]) + "\n", True


def _assignment(text: str | None) -> dict[str, int]:
    sigma = {}
    for part in name_list(text or ""):
        name, sep, val = part.partition("=")
        if not sep:
            raise UsageError(f"assignment entries look like x=0, got {part!r}")
        try:
            sigma[name.strip()] = int(val)
        except ValueError:
            raise UsageError(f"assignment value must be an integer: {part!r}") from None
    return sigma


# ---------------------------------------------------------------- handlers

def h_parse(a):
    vocab, f = load_formula(a.formula)
    return _text_report("parse", 0, str(vocab), to_text(f))


def h_parse_structure(a):
    M = load_structure(a.structure)
    return _text_report("parse-structure", M.size, format_structure(M))


def _eval(a, fn, check):
    M = load_structure(a.structure)
    _, f = load_formula(a.formula, M.vocab)
    return _bool_report(check, fn(M, f, _assignment(a.assign)), M.size)


def h_eval(a):
    return _eval(a, eval_fo, "eval")


def h_eval_mso(a):
    return _eval(a, eval_mso, "eval-mso")


def h_induced(a):
    M = load_structure(a.structure)
    N, ren = induced(M, int_list(a.elements))
    mapping = " ".join(f"{x}->{y}" for x, y in sorted(ren.items()))
    return _text_report("induced", N.size, f"map: {mapping}", format_structure(N))


def h_iso(a):
    M, N = load_structure(a.structure), load_structure(a.other)
    return _bool_report("iso", isomorphic(M, N), max(M.size, N.size))


def _relativize(a, fn, check):
    vocab, f = load_formula(a.formula)
    r = fn(f, name_list(a.vars), vocab)
    return _text_report(check, 0, f"vars: {','.join(r.vars)}",
                        f"constants: {','.join(r.constants)}", f"result: {to_text(r.result)}")


def h_relativize(a):
    return _relativize(a, relativize_fo, "relativize")


def h_relativize_mso(a):
    return _relativize(a, relativize_mso, "relativize-mso")


def h_psi(a):
    vocab, f = load_formula(a.formula)
    return _text_report("psi", 0, f"psi: {to_text(build_psi(f, a.B, a.n, vocab))}")


def h_diagram(a):
    M = load_structure(a.structure)
    vocab, d = diagram(M)
    return _text_report("diagram", M.size, str(vocab), f"diagram: {to_text(d)}")


def h_forbid(a):
    models = [load_structure(p) for p in a.structure]
    return _text_report("forbid", max(M.size for M in models),
                        f"sentence: {to_text(pi1_from_forbidden(models))}")


def h_type_cycle(a):
    return _text_report("type-cycle", 0,
                        f"sentence: {to_text(type_cycle_sentence(name_list(a.preds)))}")


def h_enum(a):
    vocab = parse_vocab(a.vocab)
    models = list(enum_structures(vocab, a.size, a.up_to_iso))
    lines = [f"count: {len(models)}"] + [format_structure(M, with_vocab=False) for M in models]
    return _text_report("enum", a.size, *lines)


def h_is_core(a):
    M = load_structure(a.structure)
    _, f = load_formula(a.formula, M.vocab)
    C = int_list(a.elements)
    return _bool_report("is-core", is_core(M, C, f), M.size, f"set: {fmt_set(sorted(C))}")


def h_cores(a):
    M = load_structure(a.structure)
    _, f = load_formula(a.formula, M.vocab)
    return minimal_cores(M, f).report(), True


def h_ps_check(a):
    vocab, f = load_formula(a.formula)
    v = ps_check(f, a.max_size, vocab, threads=a.threads)
    return v.report(), v.passed


def h_psc_check(a):
    vocab, f = load_formula(a.formula)
    v = psc_check(f, a.B, a.max_size, vocab, threads=a.threads)
    return v.report(), v.passed


def h_equiv(a):
    vocab, f = load_formula(a.formula)
    vocab2, g = load_formula(a.other)
    v = check_equiv_upto(f, g, a.max_size, vocab.merge(vocab2), threads=a.threads)
    return v.report(), v.passed


def h_is_kcover(a):
    M = load_structure(a.structure)
    members = [int_list(m) for m in a.members.split(";")]
    ok = is_k_cover(M, members, a.k)
    return _bool_report("is-kcover", ok, M.size,
                        "members: " + " ".join(fmt_set(sorted(m)) for m in members))


def h_kcover_check(a):
    vocab, f = load_formula(a.formula)
    v = kcover_preservation_check(f, a.k, a.max_size, vocab, threads=a.threads)
    return v.report(), v.passed


def h_delta(a):
    vocab, f = load_formula(a.formula)
    v = delta_classify(f, a.k, a.l, a.max_size, vocab, threads=a.threads)
    return v.report(), v.passed


def h_witness_report(a):
    M = load_structure(a.structure)
    _, f = load_formula(a.formula, M.vocab)
    psi = load_formula(a.psi, M.vocab)[1] if a.psi else None
    if psi is None and a.n is None:
        raise UsageError("witness-report needs --n or --psi")
    rep = witness_core_report(f, M, a.B, a.n, psi)
    ok = rep.flag_witnesses_are_cores and rep.flag_small_cores_are_witnesses
    return rep.report(), bool(ok)


def h_dfa_run(a):
    D = load_dfa(a.dfa)
    q, ok = dfa_run(D, a.word)
    return _bool_report("dfa-run", ok, len(a.word), f"word: {a.word}", f"end state: {q}")


def h_dfa_equiv(a):
    D1, D2 = load_dfa(a.dfa), load_dfa(a.other)
    same, w = dfa_equiv(D1, D2)
    extra = [] if same else [f"separating word: \"{''.join(w)}\""]
    return _bool_report("dfa-equiv", same, max(D1.n, D2.n), *extra)


def h_word(a):
    alphabet = list(a.alphabet) if a.alphabet else None
    M = word_to_structure(a.word, alphabet)
    return _text_report("word", M.size, format_structure(M))


def h_fo2dfa(a):
    alphabet = list(a.alphabet)
    _, f = load_formula(a.formula, word_vocabulary(alphabet))
    D = compile_word_fo(f, alphabet)
    return _text_report("fo2dfa", D.n, format_dfa(D))


def h_extract(a):
    D = load_dfa(a.dfa)
    t = extract_subword(D, a.word, int_list(a.positions))
    return _text_report("extract", len(a.word), *t.lines())


def h_closure(a):
    D = subword_closure(load_dfa(a.dfa))
    return _text_report("closure", D.n, format_dfa(D))


def h_is_closed(a):
    D = load_dfa(a.dfa)
    return _bool_report("is-closed", is_subword_closed(D), D.n)


def h_higman(a):
    D = load_dfa(a.dfa)
    basis = higman_basis(D, a.max_length)
    return _text_report("higman", max((len(w) for w in basis), default=0),
                        "basis: " + " ".join(f'"{w}"' for w in basis))


def h_pi1(a):
    D = load_dfa(a.dfa)
    return _text_report("pi1", D.n, f"sentence: {to_text(pi1_sentence_for_language(D))}")


def h_words_theorem(a):
    D = load_dfa(a.dfa)
    _, f = load_formula(a.formula, word_vocabulary(D.alphabet))
    v = verify_words_theorem(f, D, a.B, a.max_len)
    return v.report(), v.passed


CASE_FLAGS = {"max_size": int, "B": int, "n": int, "k": int, "r": int, "L": int,
              "max_nodes": int, "samples": int, "seed": int, "path_nodes": int}


def h_case(a):
    params = {k: getattr(a, k) for k in CASE_FLAGS if getattr(a, k, None) is not None}
    res = casebook.run_case(a.name, **params)
    return res.report(), res.passed


# ---------------------------------------------------------------- verb table

def _formula(p):
    p.add_argument("--formula", required=True, help="formula file")


def _structure(p):
    p.add_argument("--structure", required=True, help="structure file")


def _dfa(p):
    p.add_argument("--dfa", required=True, help="DFA file")


def _max_size(p):
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--threads", type=int, default=1, help="parallelism hint")


def _args(*adders, extra: Callable | None = None):
    def add(p):
        for fn in adders:
            fn(p)
        if extra:
            extra(p)
    return add


@dataclass(frozen=True)
class Verb:
    op: Callable
    handler: Callable
    add_args: Callable
    help: str


def _case_args(p):
    p.add_argument("name", choices=sorted(casebook.CASES))
    for flag in CASE_FLAGS:
        p.add_argument("--" + flag.replace("_", "-"), dest=flag, type=int)


VERBS: dict[str, Verb] = {
    "parse": Verb(parse_formula, h_parse, _args(_formula), "parse and print a formula"),
    "parse-structure": Verb(parse_structure, h_parse_structure, _args(_structure),
                            "parse and print a structure"),
    "eval": Verb(eval_fo, h_eval, _args(_structure, _formula, extra=lambda p: p.add_argument(
        "--assign", help="free variables, e.g. x=0,y=1")), "evaluate a first-order formula"),
    "eval-mso": Verb(eval_mso, h_eval_mso, _args(_structure, _formula, extra=lambda p: p.add_argument(
        "--assign", help="free variables, e.g. x=0,y=1")), "evaluate an MSO formula"),
    "induced": Verb(induced, h_induced, _args(_structure, extra=lambda p: p.add_argument(
        "--elements", required=True)), "induced substructure on a set"),
    "iso": Verb(isomorphic, h_iso, _args(_structure, extra=lambda p: p.add_argument(
        "--other", required=True)), "isomorphism test"),
    "relativize": Verb(relativize_fo, h_relativize, _args(_formula, extra=lambda p: p.add_argument(
        "--vars", required=True)), "relativize to variables and constants"),
    "relativize-mso": Verb(relativize_mso, h_relativize_mso, _args(
        _formula, extra=lambda p: p.add_argument("--vars", required=True)), "MSO relativization"),
    "psi": Verb(build_psi, h_psi, _args(_formula, extra=lambda p: (
        p.add_argument("--B", type=int, required=True),
        p.add_argument("--n", type=int, required=True))), "exists^B forall^n relativization"),
    "diagram": Verb(diagram, h_diagram, _args(_structure), "diagram of a structure"),
    "forbid": Verb(pi1_from_forbidden, h_forbid, lambda p: p.add_argument(
        "--structure", action="append", required=True, help="repeatable"),
        "universal sentence forbidding induced copies"),
    "type-cycle": Verb(type_cycle_sentence, h_type_cycle, lambda p: p.add_argument(
        "--preds", required=True), "type-cycle sentence over unary predicates"),
    "enum": Verb(enum_structures, h_enum, lambda p: (
        p.add_argument("--vocab", required=True, help='e.g. "vocab { E/2; c }"'),
        p.add_argument("--size", type=int, required=True),
        p.add_argument("--up-to-iso", action="store_true")), "enumerate structures"),
    "is-core": Verb(is_core, h_is_core, _args(_structure, _formula, extra=lambda p: p.add_argument(
        "--elements", required=True)), "core test"),
    "cores": Verb(minimal_cores, h_cores, _args(_structure, _formula), "minimal cores"),
    "ps-check": Verb(ps_check, h_ps_check, _args(_formula, _max_size), "substructure preservation"),
    "psc-check": Verb(psc_check, h_psc_check, _args(_formula, _max_size, extra=lambda p: p.add_argument(
        "--B", type=int, required=True)), "closure under substructures up to a core of size B"),
    "equiv": Verb(check_equiv_upto, h_equiv, _args(_formula, _max_size, extra=lambda p: p.add_argument(
        "--other", required=True)), "bounded equivalence"),
    "is-kcover": Verb(is_k_cover, h_is_kcover, _args(_structure, extra=lambda p: (
        p.add_argument("--members", required=True, help='e.g. "0,1;1,2"'),
        p.add_argument("--k", type=int, required=True))), "k-cover test"),
    "kcover-check": Verb(kcover_preservation_check, h_kcover_check, _args(
        _formula, _max_size, extra=lambda p: p.add_argument("--k", type=int, required=True)),
        "preservation under k-covers"),
    "delta": Verb(delta_classify, h_delta, _args(_formula, _max_size, extra=lambda p: (
        p.add_argument("--k", type=int, required=True),
        p.add_argument("--l", type=int, required=True))), "Delta(k, l) classifier"),
    "witness-report": Verb(witness_core_report, h_witness_report, _args(
        _structure, _formula, extra=lambda p: (
            p.add_argument("--B", type=int, required=True),
            p.add_argument("--n", type=int),
            p.add_argument("--psi", help="formula file used instead of build_psi"))),
        "witnesses against cores"),
    "dfa-run": Verb(dfa_run, h_dfa_run, _args(_dfa, extra=lambda p: p.add_argument(
        "--word", required=True)), "run a DFA"),
    "dfa-equiv": Verb(dfa_equiv, h_dfa_equiv, _args(_dfa, extra=lambda p: p.add_argument(
        "--other", required=True)), "DFA equivalence"),
    "word": Verb(word_to_structure, h_word, lambda p: (
        p.add_argument("--word", required=True),
        p.add_argument("--alphabet")), "word as a structure"),
    "fo2dfa": Verb(compile_word_fo, h_fo2dfa, _args(_formula, extra=lambda p: p.add_argument(
        "--alphabet", required=True)), "compile a sentence over words"),
    "extract": Verb(extract_subword, h_extract, _args(_dfa, extra=lambda p: (
        p.add_argument("--word", required=True),
        p.add_argument("--positions", default=""))), "short subword keeping positions"),
    "closure": Verb(subword_closure, h_closure, _args(_dfa), "subword closure"),
    "is-closed": Verb(is_subword_closed, h_is_closed, _args(_dfa), "subword-closedness test"),
    "higman": Verb(higman_basis, h_higman, _args(_dfa, extra=lambda p: p.add_argument(
        "--max-length", type=int, default=64)), "minimal excluded words"),
    "pi1": Verb(pi1_sentence_for_language, h_pi1, _args(_dfa), "universal sentence for a language"),
    "words-theorem": Verb(verify_words_theorem, h_words_theorem, _args(
        _formula, _dfa, extra=lambda p: (
            p.add_argument("--B", type=int, required=True),
            p.add_argument("--max-len", type=int, required=True))),
        "bounded normal form over words"),
    "case": Verb(casebook.run_case, h_case, _case_args, "run a casebook entry"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fopreserve",
                                     description="Preservation properties on finite structures.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for name, verb in VERBS.items():
        p = sub.add_parser(name, help=verb.help, description=verb.help)
        verb.add_args(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        text, ok = VERBS[args.verb].handler(args)
    except (UsageError, InputError, *INPUT_ERRORS) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
