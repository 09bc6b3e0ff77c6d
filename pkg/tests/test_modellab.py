import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from strategies import sentences, structures, vocabs
from fopreserve.logic.batch import holds
from fopreserve.logic.formula import Not, prefix_blocks, quantifier_rank, to_text
from fopreserve.logic.parser import parse_formula
from fopreserve.logic.semantics import eval_fo
from fopreserve.logic.structure import Structure, induced, isomorphic, relabel
from fopreserve.logic.vocab import Vocabulary
from fopreserve.modellab.cores import (
    CoreError, is_core, is_k_cover, minimal_cores, superset_and, superset_or,
    witness_core_report, witnesses,
)
from fopreserve.modellab.checks import (
    check_equiv_upto, delta_classify, kcover_preservation_check, ps_check, psc_check,
)
from fopreserve.modellab.enumerate import BudgetExceeded, enum_structures, structure_count
from fopreserve.modellab.verdict import recheck
from fopreserve.relativize import build_psi

import numpy as np

E = Vocabulary.of({"E": 2})
P = Vocabulary.of({"P": 1})
LEQ = Vocabulary.of({"leq": 2})
EXA = parse_formula("exists x. forall y. E(x,y)")
LEAST = parse_formula("exists x. forall y. leq(x,y)")


def order(n):
    return Structure(LEQ, n, {"leq": {(i, j) for i in range(n) for j in range(i, n)}})


# ---------------------------------------------------------------- enumeration

def test_enum_counts():
    assert len(list(enum_structures(P, 2))) == 4
    assert len(list(enum_structures(P, 2, up_to_iso=True))) == 3
    assert len(list(enum_structures(E, 1))) == 2


def test_enum_order_is_index_order():
    Ms = list(enum_structures(Vocabulary.of({"E": 2}, ("c",)), 2))
    assert [M.index for M in Ms] == list(range(len(Ms)))
    assert Ms[0].relations["E"] == frozenset() and Ms[0].constants == {"c": 0}
    assert Ms[1].constants == {"c": 1}


def test_enum_matches_oracle():
    for vocab in (E, Vocabulary.of({"P": 1, "Q": 1}, ("c",))):
        for n in (1, 2):
            ours = set(enum_structures(vocab, n))
            ref = set(oracle.all_structures(vocab, n))
            assert ours == ref and len(ours) == structure_count(vocab, n)


@pytest.mark.parametrize("vocab", [E, Vocabulary.of({"E": 2, "P": 1}),
                                   Vocabulary.of({"P": 1, "Q": 1}, ("c",))])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_iso_reduction_against_unpruned(vocab, n):
    reps = [R.index for R in enum_structures(vocab, n, up_to_iso=True)]
    # least index over all relabelings, by brute force
    least = {min(relabel(M, p).index for p in itertools.permutations(range(n)))
             for M in oracle.all_structures(vocab, n)}
    assert reps == sorted(least)


def test_budget(monkeypatch):
    monkeypatch.setenv("FOPRESERVE_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        list(enum_structures(E, 3))
    with pytest.raises(BudgetExceeded):
        ps_check(parse_formula("forall x. E(x,x)"), 3, E)


# ---------------------------------------------------------------- cores

def test_is_core_examples():
    M = Structure(E, 2, {"E": {(0, 0), (0, 1)}})
    assert is_core(M, {0}, EXA)
    assert not is_core(M, {1}, EXA)
    assert is_core(M, {0, 1}, EXA)


def test_is_core_requires_model():
    with pytest.raises(CoreError):
        is_core(Structure(E, 1, {}), set(), EXA)


def test_minimal_cores_examples():
    M = Structure(E, 2, {"E": {(0, 0), (0, 1)}})
    rep = minimal_cores(M, EXA)
    assert rep.minimal_cores == [(0,)] and rep.core_bound == 1
    univ = parse_formula("forall x. ~E(x,x)")
    rep = minimal_cores(Structure(E, 3, {"E": {(0, 1)}}), univ)
    assert rep.minimal_cores == [()] and rep.core_bound == 0


def test_linear_order_cores():
    # every nonempty subset of a finite order has a least element, so even
    # the empty set is a core; in particular every singleton is one
    M = order(3)
    assert all(is_core(M, {x}, LEAST) for x in range(3))
    rep = minimal_cores(M, LEAST)
    assert rep.minimal_cores == [()] and rep.core_bound == 0
    assert oracle.is_core(M, set(), LEAST)


def test_core_report_text():
    M = Structure(E, 2, {"E": {(0, 0), (0, 1)}})
    text = minimal_cores(M, EXA).report()
    assert text.splitlines()[0] == "VERDICT: PASS bound=2"
    assert "minimal cores: {0}" in text and "core bound: 1" in text


def test_superset_transforms():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3, 4):
        good = rng.random((5, 1 << n)) < 0.6
        a, o = superset_and(good), superset_or(good)
        for s in range(1 << n):
            sup = [t for t in range(1 << n) if t & s == s]
            assert (a[:, s] == good[:, sup].all(axis=1)).all()
            assert (o[:, s] == good[:, sup].any(axis=1)).all()


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_core_properties(data):
    vocab = data.draw(vocabs())
    phi = data.draw(sentences(vocab, depth=3))
    M = data.draw(structures(vocab, 4))
    if not holds(M, phi):
        return
    rep = minimal_cores(M, phi)
    n = M.size
    mins = [set(c) for c in rep.minimal_cores]
    for a, b in itertools.combinations(mins, 2):
        assert not a <= b and not b <= a
    assert rep.core_bound == min(len(c) for c in mins)
    for C in mins:
        assert oracle.is_core(M, C, phi)
        for c in C:
            assert not is_core(M, C - {c}, phi)
        rest = [x for x in range(n) if x not in C]
        for r in range(len(rest) + 1):
            for extra in itertools.combinations(rest, r):
                assert is_core(M, C | set(extra), phi)
    # minimal cores are exactly the minimal elements of the oracle's cores
    cores = [set(S) for r in range(n + 1) for S in itertools.combinations(range(n), r)
             if oracle.is_core(M, S, phi)]
    minimal = [C for C in cores if not any(D < C for D in cores)]
    assert sorted(map(sorted, minimal)) == sorted(map(sorted, mins))


# ---------------------------------------------------------------- checks

def _assert_sound(v):
    assert recheck(v)


def test_ps_check_examples():
    assert ps_check(parse_formula("forall x. ~P(x)"), 4, P).passed
    v = ps_check(parse_formula("exists x. P(x)"), 3, P)
    assert not v.passed and v.bound == 2
    assert v.witness.structure == Structure(P, 2, {"P": {(0,)}})
    assert set(v.witness.data["substructure"]) == {1}
    _assert_sound(v)


def test_ps_check_exists_forall():
    v = ps_check(EXA, 2, E)
    assert not v.passed and v.witness.structure.size == 2
    assert v.witness.structure.relations["E"] == {(0, 0), (0, 1)}
    _assert_sound(v)
    # the two-node graph with every edge except the loop at node 0
    two_node = Structure(E, 2, {"E": {(0, 1), (1, 0), (1, 1)}})
    assert eval_fo(two_node, EXA) and not eval_fo(induced(two_node, {0})[0], EXA)


def test_psc_check_examples():
    assert psc_check(EXA, 1, 4, E).passed
    v = psc_check(EXA, 0, 2, E)
    assert not v.passed and v.bound == 2
    _assert_sound(v)
    assert psc_check(parse_formula("exists x. ~(x = x)"), 0, 3).passed


def test_equiv_examples():
    assert check_equiv_upto(EXA, EXA, 3, E).passed
    f = parse_formula("exists x. P(x)")
    assert check_equiv_upto(f, parse_formula("~forall x. ~P(x)"), 4, P).passed


def test_equiv_exists_forall_against_psi():
    # a genuine separator already at size 3: psi(1,1) only looks at pairs
    v = check_equiv_upto(EXA, build_psi(EXA, 1, 1, E), 3, E)
    assert not v.passed and v.bound == 3
    M = v.witness.structure
    assert M.relations["E"] == {(0, 0), (0, 2), (1, 0), (1, 1)}
    assert not oracle.truth(M, EXA) and oracle.truth(M, build_psi(EXA, 1, 1, E))
    _assert_sound(v)
    for n in (1, 2):
        for N in oracle.all_structures(E, n):
            assert oracle.truth(N, EXA) == oracle.truth(N, build_psi(EXA, 1, 1, E))
    v2 = check_equiv_upto(EXA, build_psi(EXA, 1, 2, E), 4, E)
    assert not v2.passed and v2.bound == 4
    _assert_sound(v2)
    assert check_equiv_upto(EXA, build_psi(EXA, 1, 3, E), 4, E).passed


def test_is_k_cover_examples():
    M = Structure(E, 3, {})
    K = [{0, 1}, {1, 2}, {0, 2}]
    assert is_k_cover(M, K, 2)
    assert not is_k_cover(M, K, 3)
    for k in range(4):
        assert is_k_cover(M, [{0, 1, 2}], k)
    assert not is_k_cover(M, [{0, 1}], 1)
    with pytest.raises(CoreError):
        is_k_cover(M, [{5}], 1)


def test_kcover_check_examples():
    f = parse_formula("forall x,y. exists z. (leq(x,z) & leq(y,z))")
    assert kcover_preservation_check(f, 2, 3, LEQ).passed
    v = kcover_preservation_check(parse_formula("forall x,y. x = y"), 1, 3)
    assert not v.passed and v.bound == 2
    assert v.witness.data["cover"] == [(0,), (1,)]
    _assert_sound(v)
    # the pair-distinctness sentence is preserved: covers of models are models
    assert kcover_preservation_check(parse_formula("exists x,y. ~(x = y)"), 1, 3).passed
    assert kcover_preservation_check(parse_formula("forall x. ~P(x)"), 0, 3, P).passed


def test_delta_examples():
    ex = parse_formula("exists x. P(x)")
    v = delta_classify(ex, 1, 0, 4, P)
    assert v.passed and len(v.parts) == 3
    v = delta_classify(ex, 0, 0, 4, P)
    assert not v.passed and not v.parts[0].passed
    _assert_sound(v)
    assert delta_classify(parse_formula("forall x. P(x)"), 0, 1, 4, P).passed


def test_verdict_report_lines():
    v = psc_check(EXA, 1, 4, E)
    lines = v.report().splitlines()
    assert lines[0] == "VERDICT: PASS bound=4" and "PASS up to size 4" in lines
    f = ps_check(EXA, 2, E).report().splitlines()
    assert f[0] == "VERDICT: FAIL bound=2" and "substructure: {1}" in f


# ---------------------------------------------------------------- witness reports

def test_witness_report_examples():
    M = Structure(E, 2, {"E": {(0, 0), (0, 1)}})
    rep = witness_core_report(EXA, M, 1, 1)
    assert rep.witnesses == [(0,)] and rep.minimal_cores == [(0,)]
    assert rep.flag_witnesses_are_cores and rep.flag_small_cores_are_witnesses


def test_witness_report_linear_order():
    M = order(3)
    # phi is itself of the form exists^1 forall^*: one witness, three singleton cores
    rep = witness_core_report(LEAST, M, 1, psi=LEAST)
    assert rep.witnesses == [(0,)]
    assert rep.flag_witnesses_are_cores and not rep.flag_small_cores_are_witnesses
    # the relativized psi(1,2) only inspects triples, where a least element always exists
    rep = witness_core_report(LEAST, M, 1, 2)
    assert rep.witnesses == [(0,), (1,), (2,)]
    assert rep.flag_witnesses_are_cores and rep.flag_small_cores_are_witnesses


def test_witness_report_universal():
    univ = parse_formula("forall x. ~E(x,x)")
    rep = witness_core_report(univ, Structure(E, 2, {"E": {(0, 1)}}), 0, 2)
    assert rep.witnesses == [()] and rep.minimal_cores == [()]
    assert rep.flag_witnesses_are_cores and rep.flag_small_cores_are_witnesses


def test_witness_report_errors():
    with pytest.raises(CoreError):
        witness_core_report(EXA, Structure(E, 1, {}), 1, 1)
    with pytest.raises(CoreError):
        witness_core_report(EXA, Structure(E, 1, {"E": {(0, 0)}}), 1)


@st.composite
def sigma2(draw, max_B=2):
    vocab = draw(vocabs())
    B = draw(st.integers(0, max_B))
    m = draw(st.integers(1, 2))
    from strategies import formulas
    from fopreserve.logic.formula import exists, forall
    from fopreserve.logic.formula import has_quantifier
    xs = [f"x{i}" for i in range(1, B + 1)]
    ys = [f"y{i}" for i in range(1, m + 1)]
    body = draw(formulas(vocab, 2, tuple(xs + ys)).filter(lambda f: not has_quantifier(f)))
    return vocab, B, exists(xs, forall(ys, body))


@settings(max_examples=60, deadline=None)
@given(sigma2(), st.integers(1, 4))
def test_sigma2_witnesses_are_cores(case, n):
    vocab, B, psi = case
    sizes = [m for m in range(1, n + 1) if structure_count(vocab, m) <= 5000]
    for M in (M for m in sizes for M in enum_structures(vocab, m)):
        if not holds(M, psi):
            continue
        for w in witnesses(M, psi, B):
            assert is_core(M, set(w), psi)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_ps_pass_implies_empty_cores(data):
    vocab = data.draw(st.sampled_from([E, P, Vocabulary.of({"P": 1, "Q": 1})]))
    phi = data.draw(sentences(vocab, depth=3))
    if not ps_check(phi, 3, vocab).passed:
        return
    for n in (1, 2, 3):
        for M in enum_structures(vocab, n):
            if holds(M, phi):
                assert minimal_cores(M, phi).minimal_cores == [()]


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_pi2_lemma_at_desk_scale(data):
    from strategies import formulas
    from fopreserve.logic.formula import exists, forall, has_quantifier
    vocab = data.draw(st.sampled_from([E, P, Vocabulary.of({"P": 1, "Q": 1})]))
    n = data.draw(st.integers(1, 2))
    m = data.draw(st.integers(0, 1))
    xs = [f"u{i}" for i in range(n)]
    ys = [f"v{i}" for i in range(m)]
    body = data.draw(formulas(vocab, 2, tuple(xs + ys)).filter(lambda f: not has_quantifier(f)))
    phi = forall(xs, exists(ys, body))
    B = data.draw(st.integers(0, 1))
    s = 3
    if psc_check(phi, B, s, vocab).passed:
        assert check_equiv_upto(phi, build_psi(phi, B, n, vocab), s, vocab).passed


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_monadic_lemma_at_desk_scale(data):
    k = data.draw(st.integers(1, 2))
    vocab = Vocabulary.of({f"P{i}": 1 for i in range(k)})
    phi = data.draw(sentences(vocab, depth=2))
    r = quantifier_rank(phi)
    if r == 0:
        return
    B = data.draw(st.integers(0, 1))
    s = 4
    if psc_check(phi, B, s, vocab).passed:
        psi = build_psi(phi, B, r * 2 ** k, vocab)
        assert check_equiv_upto(phi, psi, s, vocab).passed


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_every_counterexample_rechecks(data):
    vocab = data.draw(st.sampled_from([E, P, Vocabulary.of({"P": 1}, ("c",))]))
    phi = data.draw(sentences(vocab, depth=3))
    psi = data.draw(sentences(vocab, depth=2))
    k = data.draw(st.integers(0, 2))
    for v in (ps_check(phi, 3, vocab), psc_check(phi, k, 3, vocab),
              check_equiv_upto(phi, psi, 3, vocab), kcover_preservation_check(phi, k, 3, vocab),
              delta_classify(phi, k, 1, 3, vocab)):
        assert recheck(v)
        if not v.passed and v.witness is not None:
            assert v.report().splitlines()[0].startswith("VERDICT: FAIL")


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_checks_match_oracle(data):
    vocab = data.draw(st.sampled_from([P, Vocabulary.of({"P": 1}, ("c",)), E]))
    phi = data.draw(sentences(vocab, depth=2))
    s = 3 if vocab != E else 2
    models = [M for n in range(1, s + 1) for M in oracle.all_structures(vocab, n)
              if oracle.truth(M, phi)]
    ps_ref = all(oracle.sub_truth(M, S, phi) for M in models
                 for S in oracle.nonempty_subsets(M.size))
    assert ps_check(phi, s, vocab).passed == ps_ref
    psc_ref = all(any(oracle.is_core(M, C, phi) for r in range(2)
                      for C in itertools.combinations(range(M.size), r)) for M in models)
    assert psc_check(phi, 1, s, vocab).passed == psc_ref


def test_quantifier_prefix_helpers():
    psi = build_psi(EXA, 2, 1, E)
    assert [b[0] for b in prefix_blocks(psi)[0]] == ["exists", "exists", "forall"]
    assert "x2" in to_text(psi)
    assert not holds(Structure(E, 1, {}), Not(Not(EXA)))
    assert isomorphic(order(2), order(2))
