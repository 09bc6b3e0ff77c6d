import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from strategies import VOCABS, sentences, structures, vocabs
from fopreserve.logic.batch import holds
from fopreserve.logic.formula import (
    FoQuantifier, SetQuantifier, Top, has_quantifier, prefix_blocks, to_text, walk,
)
from fopreserve.logic.parser import parse_formula
from fopreserve.logic.semantics import eval_fo
from fopreserve.logic.structure import Structure
from fopreserve.logic.vocab import Vocabulary
from fopreserve.modellab.enumerate import enum_structures
from fopreserve.relativize import (
    RelativizeError, build_psi, diagram, pi1_from_forbidden, relativize_fo, relativize_mso,
    type_cycle_sentence,
)
from fopreserve.words.extraction import word_to_structure

E = Vocabulary.of({"E": 2})
PC = Vocabulary.of({"P": 1}, ("c",))


def test_exists_with_constant():
    r = relativize_fo(parse_formula("exists x. P(x)", PC), ["z1"], PC)
    assert to_text(r.result) == "P(z1) | P(c)"
    assert r.vars == ("z1",) and r.constants == ("c",)


def test_quantifier_free_unchanged():
    v = Vocabulary.of({}, ("c",))
    f = parse_formula("c = c", v)
    assert relativize_fo(f, ["z1"], v).result == f


def test_exists_forall_single_var_matches_self_loop():
    phi = parse_formula("exists x. forall y. E(x,y)")
    r = relativize_fo(phi, ["z1"], E).result
    loop = parse_formula("E(z1,z1)")
    for n in (1, 2, 3):
        for M in enum_structures(E, n):
            for a in range(n):
                assert eval_fo(M, r, {"z1": a}) == eval_fo(M, loop, {"z1": a})
                assert eval_fo(M, r, {"z1": a}) == oracle.sub_truth(M, {a}, phi)


def test_no_simplification():
    # forall is rewritten through negations, which stay in the output
    r = relativize_fo(parse_formula("forall x. P(x)", PC), ["z1"], PC)
    assert to_text(r.result) == "~(~P(z1) | ~P(c))"


@pytest.mark.parametrize("text, vars, vocab, msg", [
    ("P(x)", ["z1"], PC, "not a sentence"),
    ("exists x. E(x,x)", [], E, "at least one"),
    ("exists x. E(x,x)", ["z", "z"], E, "distinct"),
    ("exists x. P(x)", ["c"], PC, "clash"),
])
def test_relativize_errors(text, vars, vocab, msg):
    with pytest.raises(RelativizeError, match=msg):
        relativize_fo(parse_formula(text, vocab), vars, vocab)


def test_relativize_fo_rejects_sets():
    with pytest.raises(RelativizeError):
        relativize_fo(parse_formula("Exists X. forall x. X(x)"), ["z1"])


def test_mso_examples():
    f = parse_formula("Exists X. forall x. X(x)")
    r = relativize_mso(f, ["z1"], E).result
    assert not has_quantifier(r)
    for n in (1, 2, 3):
        for M in enum_structures(E, n):
            for a in range(n):
                assert eval_fo(M, r, {"z1": a})
    g = parse_formula("Exists X. exists x. (X(x) & Pa(x))")
    r = relativize_mso(g, ["z1"]).result
    for w in ("a", "b"):
        M = word_to_structure(w, "ab")
        assert eval_fo(M, r, {"z1": 0}) == (w == "a")


def test_mso_on_set_free_matches_fo():
    f = parse_formula("exists x. forall y. E(x,y) | x = y")
    assert relativize_mso(f, ["u", "v"], E) == relativize_fo(f, ["u", "v"], E)


def test_mso_guard_for_shared_elements():
    # z1 and z2 may name the same element; a set cannot both contain and omit it
    f = parse_formula("Exists X. exists x. exists y. (X(x) & ~X(y))")
    r = relativize_mso(f, ["z1", "z2"], E).result
    M = Structure(E, 2, {})
    assert not eval_fo(M, r, {"z1": 1, "z2": 1})
    assert eval_fo(M, r, {"z1": 0, "z2": 1})


def _contract_case(data, mso):
    vocab = data.draw(vocabs())
    phi = data.draw(sentences(vocab, depth=3, mso=mso))
    M = data.draw(structures(vocab, 5))
    k = data.draw(st.integers(0 if vocab.constants else 1, 3))
    a = [data.draw(st.integers(0, M.size - 1)) for _ in range(k)]
    # variable names reuse the formula's own pool to exercise capture
    names = ["x", "y", "z"][:k]
    rel = (relativize_mso if mso else relativize_fo)(phi, names, vocab)
    assert not any(isinstance(g, (FoQuantifier, SetQuantifier)) for g in walk(rel.result))
    assert rel.result.free_vars <= set(names)
    got = eval_fo(M, rel.result, dict(zip(names, a)))
    assert got == oracle.sub_truth(M, set(a), phi)


@settings(max_examples=400, deadline=None)
@given(st.data())
def test_relativization_contract(data):
    _contract_case(data, mso=False)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_relativization_contract_mso(data):
    _contract_case(data, mso=True)


def test_build_psi_shape():
    phi = parse_formula("exists x. forall y. E(x,y)")
    psi = build_psi(phi, 1, 2, E)
    blocks, matrix = prefix_blocks(psi)
    assert blocks == [("exists", "x1"), ("forall", "y1"), ("forall", "y2")]
    assert not has_quantifier(matrix)
    assert to_text(psi).startswith("exists x1. forall y1,y2. ")
    zero = build_psi(phi, 0, 2, E)
    assert prefix_blocks(zero)[0] == [("forall", "y1"), ("forall", "y2")]


def test_build_psi_example_value():
    phi = parse_formula("exists x. forall y. E(x,y)")
    M = Structure(E, 2, {"E": {(0, 0), (0, 1)}})
    assert eval_fo(M, build_psi(phi, 1, 1, E))


def test_build_psi_needs_terms():
    with pytest.raises(RelativizeError):
        build_psi(parse_formula("exists x. E(x,x)"), 0, 0, E)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_monotone_prefix(data):
    vocab = data.draw(vocabs())
    phi = data.draw(sentences(vocab, depth=3))
    M = data.draw(structures(vocab, 5))
    n = data.draw(st.integers(1, 3))
    m = data.draw(st.integers(n, 3))
    if holds(M, build_psi(phi, 0, m, vocab)):
        assert holds(M, build_psi(phi, 0, n, vocab))


# ---------------------------------------------------------------- diagrams

def test_diagram_examples():
    P = Vocabulary.of({"P": 1})
    vocab, d = diagram(Structure(P, 1, {"P": {(0,)}}))
    assert vocab.constants == ("e0",) and to_text(d) == "P(e0)"
    _, d = diagram(Structure(P, 2, {}))
    assert to_text(d) == "~P(e0) & ~P(e1) & ~(e0 = e1)"
    _, d = diagram(Structure(E, 2, {"E": {(0, 1)}}))
    parts = set(to_text(d).split(" & "))
    assert {"E(e0,e1)", "~E(e1,e0)", "~E(e0,e0)", "~E(e1,e1)", "~(e0 = e1)"} == parts


def test_diagram_holds_in_its_structure():
    for M in enum_structures(Vocabulary.of({"E": 2}, ("c",)), 2):
        vocab, d = diagram(M)
        expanded = Structure(vocab, M.size, M.relations,
                             {**M.constants, **{f"e{i}": i for i in range(M.size)}})
        assert eval_fo(expanded, d)


def test_diagram_fresh_prefix():
    v = Vocabulary.of({"E": 2}, ("e0",))
    vocab, _ = diagram(Structure(v, 1, {}, {"e0": 0}))
    assert vocab.constants == ("e0", "e_0")


def test_pi1_examples():
    assert pi1_from_forbidden([]) == Top()
    P = Vocabulary.of({"P": 1})
    s = pi1_from_forbidden([Structure(P, 1, {"P": {(0,)}})])
    ref = parse_formula("forall x. ~P(x)")
    for n in (1, 2, 3):
        for M in enum_structures(P, n):
            assert eval_fo(M, s) == eval_fo(M, ref)
    with pytest.raises(RelativizeError):
        pi1_from_forbidden([Structure(PC, 1, {}, {"c": 0})])


def test_pi1_aaa():
    s = pi1_from_forbidden([word_to_structure("aaa", "ab")])
    assert to_text(s).startswith("forall x1,x2,x3. ")
    for w in oracle.words("ab", 6, 1):
        assert eval_fo(word_to_structure(w, "ab"), s) == (w.count("a") <= 2)


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_pi1_matches_embedding_oracle(data):
    vocab = data.draw(st.sampled_from([v for v in VOCABS if not v.constants]))
    forbidden = data.draw(st.lists(structures(vocab, 3), min_size=1, max_size=3))
    M = data.draw(structures(vocab, 5))
    s = pi1_from_forbidden(forbidden)
    assert holds(M, s) == (not any(oracle.embeds(A, M) for A in forbidden))


# ---------------------------------------------------------------- type cycle

def test_type_cycle_k1():
    P = Vocabulary.of({"P": 1})
    s = type_cycle_sentence(["P"])
    ref = parse_formula("exists x. forall y. (~P(x) -> ~P(y)) & (P(x) -> ~~P(y))")
    for n in range(1, 5):
        for M in enum_structures(P, n):
            assert eval_fo(M, s) == eval_fo(M, ref)
    assert not eval_fo(Structure(P, 2, {"P": {(0,)}}), s)
    assert eval_fo(Structure(P, 1, {"P": {(0,)}}), s)


def test_type_cycle_means_missing_type():
    v = Vocabulary.of({"P": 1, "Q": 1})
    s = type_cycle_sentence(["P", "Q"])
    for n in range(1, 5):
        for M in enum_structures(v, n):
            types = {((x,) in M.relations["P"], (x,) in M.relations["Q"]) for x in range(n)}
            assert eval_fo(M, s) == (len(types) < 4)


def test_type_cycle_errors():
    with pytest.raises(RelativizeError):
        type_cycle_sentence([])


def test_relativized_formula_str():
    r = relativize_fo(parse_formula("exists x. P(x)", PC), ["z"], PC)
    assert str(r) == to_text(r.result)
    assert list(itertools.islice(walk(r.result), 1))
