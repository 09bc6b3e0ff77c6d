"""Scripted reproductions of concrete examples and counterexamples.

Each case builds its sentences and structures from the library primitives
and records machine-checkable facts.  Claims that need infinite structures
are carried as analytic notes and never computed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable

from .logic.batch import evaluate_structures, holds
from .logic.formula import (
    Formula, Implies, Not, Top, atom, conj, disj, eq, exists, forall, neq,
)
from .logic.structure import Structure, induced, isomorphic
from .logic.vocab import Vocabulary
from .modellab.checks import check_equiv_upto, ps_check
from .modellab.cores import is_core, minimal_cores, subset_truths, witness_core_report
from .relativize import build_psi, type_cycle_sentence, type_formula


class CaseError(ValueError):
    pass


@dataclass
class Check:
    description: str
    expected: Any
    observed: Any

    @property
    def passed(self) -> bool:
        return self.expected == self.observed


@dataclass
class CaseResult:
    name: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    bound: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, description: str, expected, observed):
        self.checks.append(Check(description, expected, observed))

    def saw(self, size: int):
        self.bound = max(self.bound, size)

    def report(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"VERDICT: {status} bound={self.bound}", f"case: {self.name}"]
        lines += [f"param {k} = {v}" for k, v in self.params.items()]
        for c in self.checks:
            mark = "ok" if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.description}: expected {c.expected}, observed {c.observed}")
        lines += [f"analytic: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- helpers

def at_least(m: int, theta: Callable[[str], Formula], prefix: str = "c") -> Formula:
    """At least m distinct elements satisfy theta, as nested existentials so
    each level only adds one variable."""
    def build(i: int, prev: list[str]) -> Formula:
        if i > m:
            return Top()
        v = f"{prefix}{i}"
        here = [neq(v, p) for p in prev] + [theta(v)]
        rest = build(i + 1, prev + [v])
        return exists(v, conj(here + ([] if i == m else [rest])))
    return Top() if m <= 0 else build(1, [])


GRAPH = Vocabulary.of({"E": 2})


def undirected_graph(n: int, edges) -> Structure:
    rel = set()
    for u, v in edges:
        rel.add((u, v))
        rel.add((v, u))
    return Structure(GRAPH, n, {"E": frozenset(rel)})


def path_union(lengths) -> Structure:
    """Disjoint union of undirected paths with the given node counts."""
    edges, start = [], 0
    for m in lengths:
        edges += [(start + i, start + i + 1) for i in range(m - 1)]
        start += m
    return undirected_graph(start, edges)


def partitions(total: int, largest: int | None = None):
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in partitions(total - first, first):
            yield (first,) + rest


def deg0(x: str) -> Formula:
    return forall("u", Not(atom("E", x, "u")))


def deg_le1(x: str) -> Formula:
    return forall(["u", "v"], Implies(atom("E", x, "u") & atom("E", x, "v"), eq("u", "v")))


def deg1(x: str) -> Formula:
    return conj([exists("u", atom("E", x, "u")), deg_le1(x)])


def degree(G: Structure, x: int) -> int:
    return sum(1 for (a, _) in G.relations["E"] if a == x)


def components(G: Structure) -> int:
    seen, count = set(), 0
    adj = {x: set() for x in G.universe}
    for a, b in G.relations["E"]:
        adj[a].add(b)
        adj[b].add(a)
    for x in G.universe:
        if x in seen:
            continue
        count += 1
        stack = [x]
        seen.add(x)
        while stack:
            y = stack.pop()
            for z in adj[y] - seen:
                seen.add(z)
                stack.append(z)
    return count


def monadic_vocab(k: int) -> Vocabulary:
    return Vocabulary.of({f"P{j}": 1 for j in range(1, k + 1)})


def one_per_type(vocab: Vocabulary, copies: int = 1) -> Structure:
    """Element i*copies + c has 1-type i (bit j of i = predicate j holds)."""
    preds = vocab.predicate_names
    m = 1 << len(preds)
    rels = {p: frozenset((i * copies + c,) for i in range(m) for c in range(copies) if i >> j & 1)
            for j, p in enumerate(preds)}
    return Structure(vocab, m * copies, rels)


# ---------------------------------------------------------------- cases

def case_example3(max_size: int = 5) -> CaseResult:
    res = CaseResult("example3", {"max_size": max_size})
    phi = exists("x", forall("y", atom("E", "x", "y")))
    n = max_size
    M = Structure(GRAPH, n, {"E": frozenset((i, j) for i in range(n) for j in range(i, n))})
    res.saw(n)
    good = subset_truths(M, phi)
    res.check("nonempty induced substructures satisfying phi", 2 ** n - 1,
              int(sum(good[1:])))
    res.check("every singleton is a core", True, all(is_core(M, {x}, phi) for x in range(n)))
    rep = witness_core_report(phi, M, 1, psi=phi)
    res.check("witnesses of phi", [(0,)], rep.witnesses)
    res.check("every witness set is a core", True, rep.flag_witnesses_are_cores)
    res.check("witnesses miss some core (mismatch)", n >= 2, not rep.flag_small_cores_are_witnesses)
    res.check("minimal cores", [()], rep.minimal_cores)
    res.notes.append("over the integers with their order, psi = build_psi(phi, 1, n) holds for "
                     "every n while phi fails (no least element); infinite, not computed")
    return res


def colour_count_sentence(vocab: Vocabulary, r: int) -> Formula:
    """Some 1-type has at most r-1 elements."""
    preds = vocab.predicate_names
    parts = []
    for c in range(1 << len(preds)):
        xs = [f"x{i}" for i in range(1, r)]
        last = f"x{r}"
        body = Implies(conj(neq(last, x) for x in xs), Not(type_formula(preds, c, last)))
        parts.append(exists(xs, forall(last, body)))
    return disj(parts)


def case_monadic_optimality(k: int = 1, r: int = 2, max_size: int | None = None) -> CaseResult:
    n = r * (1 << k)
    if max_size is None:
        max_size = n + 2
    res = CaseResult("monadic_optimality", {"k": k, "r": r, "max_size": max_size})
    vocab = monadic_vocab(k)
    phi = colour_count_sentence(vocab, r)
    M = one_per_type(vocab, r)
    res.saw(max(M.size, max_size))
    res.check("size of the r-per-colour structure", n, M.size)
    res.check("M satisfies phi", False, holds(M, phi))
    res.check(f"M satisfies forall^{n - 1} relativization", True,
              holds(M, build_psi(phi, 0, n - 1, vocab)))
    res.check(f"M satisfies forall^{n} relativization", False,
              holds(M, build_psi(phi, 0, n, vocab)))
    v = check_equiv_upto(phi, build_psi(phi, 0, n, vocab), max_size, vocab)
    res.check(f"phi equivalent to forall^{n} relativization up to size {max_size}", True, v.passed)
    return res


CHI_VOCAB = Vocabulary.of({"leq": 2, "S": 2, "U": 1}, ("a", "b"))


def chi_negation() -> Formula:
    """Models: finite orders from a to b where S only links immediate
    successors, with some element other than b lacking an S-successor."""
    from .logic.formula import Const
    a, b = Const("a"), Const("b")
    leq = lambda s, t: atom("leq", s, t)
    theta = forall(["x", "y", "z"], conj([
        leq("x", "x"),
        leq("x", "y") | leq("y", "x"),
        Implies(leq("x", "y") & leq("y", "x"), eq("x", "y")),
        Implies(leq("x", "y") & leq("y", "z"), leq("x", "z")),
        leq(a, "x"),
        leq("x", b),
        Implies(atom("S", "x", "y"), conj([
            leq("x", "y"), neq("x", "y"),
            Implies(leq("x", "z") & leq("z", "y"), eq("z", "x") | eq("z", "y"))])),
    ]))
    gap = exists("x", neq("x", b) & forall("y", Not(atom("S", "x", "y"))))
    return conj([theta, gap])


def exactly_b_marked(B: int) -> Formula:
    from .logic.formula import Const
    if B == 0:
        return forall("y", Not(atom("U", "y")))
    xs = [f"m{i}" for i in range(1, B + 1)]
    parts = [neq(xs[i], xs[j]) for i in range(B) for j in range(i + 1, B)]
    for x in xs:
        parts += [atom("U", x), neq(x, Const("a")), neq(x, Const("b"))]
    parts.append(forall("y", Implies(atom("U", "y"), disj(eq("y", x) for x in xs))))
    return exists(xs, conj(parts))


def chi_relational_literal() -> Formula:
    """The purely relational chi1 & chi2 & chi3, read literally."""
    leq, S, U = (lambda s, t: atom("leq", s, t)), (lambda s, t: atom("S", s, t)), (lambda s: atom("U", s))
    chi1 = forall(["x", "y", "z"], conj([
        leq("x", "x"), leq("x", "y") | leq("y", "x"),
        Implies(leq("x", "y") & leq("y", "z"), leq("x", "z"))]))
    chi2 = forall(["x", "y"], Implies(S("x", "y"), forall("z", Implies(
        leq("x", "z") & neq("x", "z"), leq("y", "z")))))

    def chi4(x1, x2, z):
        return forall("w", Implies(
            conj([leq(x1, "w"), leq("w", x2), neq("w", x1), neq("w", x2)]),
            conj([U("w"), neq(z, x2), Not(S(z, "w"))])))

    chi3 = exists("z", forall(["p", "q"], Implies(
        conj([Not(U("p")), Not(U("q")), neq("p", "q")]),
        chi4("p", "q", "z") | chi4("q", "p", "z"))))
    return conj([chi1, chi2, chi3])


def chi_structures(B: int, n: int) -> tuple[Structure, Structure]:
    top = B + 2 * n + 3
    size = top + 1
    leq = frozenset((i, j) for i in range(size) for j in range(i, size))
    succ = frozenset((i, i + 1) for i in range(top))
    U = frozenset((i,) for i in range(1, B + 1))
    M = Structure(CHI_VOCAB, size, {"leq": leq, "S": succ, "U": U}, {"a": 0, "b": top})
    broken = frozenset(t for t in succ if t[0] != B + n + 1)
    M1 = Structure(CHI_VOCAB, size, {"leq": leq, "S": broken, "U": U}, {"a": 0, "b": top})
    return M, M1


def _partial_iso(M, N, f: dict) -> bool:
    """f is an isomorphism from M restricted to dom(f) onto N restricted to
    its image (constants must be fixed points of the domain)."""
    if len(set(f.values())) != len(f):
        return False
    for name in M.relations:
        for t in itertools.product(f, repeat=M.vocab.arity(name)):
            if (t in M.relations[name]) != (tuple(f[x] for x in t) in N.relations[name]):
                return False
    return all(f.get(M.constants[c]) == N.constants[c] for c in M.vocab.constants)


def case_finite_failure_chi(B: int = 0, n: int = 1) -> CaseResult:
    res = CaseResult("finite_failure_chi", {"B": B, "n": n})
    phi = conj([chi_negation(), exactly_b_marked(B)])
    M, M1 = chi_structures(B, n)
    res.saw(M.size)
    res.check("universe size", B + 2 * n + 4, M.size)
    res.check("M satisfies phi", False, holds(M, phi))
    res.check("M1 satisfies phi", True, holds(M1, phi))
    same = (M.relations["leq"] == M1.relations["leq"] and M.relations["U"] == M1.relations["U"]
            and M.constants == M1.constants)
    removed = M.relations["S"] - M1.relations["S"]
    res.check("M1 differs from M only by dropping S(B+n+1, y)", True,
              same and M1.relations["S"] <= M.relations["S"]
              and removed == {(B + n + 1, B + n + 2)})
    marked = {x for (x,) in M.relations["U"]}
    res.check("the U-elements form a core of M1", True, is_core(M1, marked, phi))
    res.check("core bound of M1 is at most B", True, minimal_cores(M1, phi).core_bound <= B)
    top = M.size - 1
    abar = sorted(marked)
    transfer = True
    for bbar in itertools.product(range(M.size), repeat=n):
        found = False
        for dbar in itertools.product(range(M1.size), repeat=n):
            f = {0: 0, top: top, **{x: x for x in abar}}
            ok = True
            for x, y in zip(bbar, dbar):
                if f.get(x, y) != y:
                    ok = False
                    break
                f[x] = y
            if not ok or not _partial_iso(M, M1, f):
                continue
            left, _ = induced(M, set(abar) | set(bbar))
            right, _ = induced(M1, set(abar) | set(dbar))
            if isomorphic(left, right):
                found = True
                break
        transfer = transfer and found
    res.check("every n-tuple of M transfers to M1 by an isomorphism fixing a, b and the U-elements",
              True, transfer)
    lit = chi_relational_literal()
    rel_vocab = Vocabulary(CHI_VOCAB.predicates, ())
    red = lambda S: Structure(rel_vocab, S.size, S.relations, {})
    res.notes.append("relational chi1 & chi2 & chi3 read literally: "
                     f"M {holds(red(M), lit)}, M1 {holds(red(M1), lit)}; informational only")
    res.notes.append("the negated chi is preserved under substructures in the finite; "
                     "any exists^B forall^n equivalent would transfer from M1 to M")
    return res


def paths_sentence(B: int) -> Formula:
    """deg-0 count + half the deg-1 count >= B."""
    return disj(conj([at_least(i, deg0, "z"), at_least(2 * (B - i), deg1, "w")])
                for i in range(B + 1))


def case_undirected_paths(B: int = 2, max_nodes: int = 8) -> CaseResult:
    res = CaseResult("undirected_paths", {"B": B, "max_nodes": max_nodes})
    phi = paths_sentence(B)
    graphs = [path_union(p) for total in range(1, max_nodes + 1) for p in partitions(total)]
    res.saw(max_nodes)
    d1_d2 = phi_d2 = cores_ok = True
    truths = evaluate_structures(graphs, phi)
    for G, t in zip(graphs, truths):
        paths = components(G)
        degs = [degree(G, x) for x in G.universe]
        D1 = paths >= B
        D2 = 2 * degs.count(0) + degs.count(1) >= 2 * B
        d1_d2 &= D1 == D2
        phi_d2 &= bool(t) == D2
        if D1:
            # one end point from each of the first B paths
            cores_ok &= is_core(G, _component_starts(G)[:B], phi)
    res.check(f"D1 <-> D2 on {len(graphs)} path unions", True, d1_d2)
    res.check("phi <-> D2", True, phi_d2)
    res.check("one end point of each of B paths is a core", True, cores_ok)
    res.notes.append("no exists^B forall^n sentence is equivalent over path unions (long paths); "
                     "not computed")
    return res


def _component_starts(G: Structure) -> list[int]:
    """The smallest element of each component (an end point of its path)."""
    starts, seen = [], set()
    for x in G.universe:
        if x in seen:
            continue
        starts.append(x)
        stack = [x]
        seen.add(x)
        while stack:
            y = stack.pop()
            for (a, c) in G.relations["E"]:
                if a == y and c not in seen:
                    seen.add(c)
                    stack.append(c)
    return starts


def xi_sentence(B: int) -> Formula:
    return at_least(B, deg0, "z") | at_least(B + 1, deg_le1, "w")


def case_xi_not_psc(B: int = 4, path_nodes: int = 3) -> CaseResult:
    if B < 3:
        raise CaseError("xi_not_psc needs B >= 3")
    res = CaseResult("xi_not_psc", {"B": B, "path_nodes": path_nodes})
    xi = xi_sentence(B)
    M = path_union((path_nodes, path_nodes) + (1,) * (B - 3))
    res.saw(M.size)
    degs = [degree(M, x) for x in M.universe]
    res.check("nodes of degree at most 1", B + 1, sum(1 for d in degs if d <= 1))
    res.check("number of paths is below B", True, components(M) < B)
    res.check("M satisfies xi", True, holds(M, xi))
    rep = minimal_cores(M, xi)
    res.check(f"core bound exceeds {B} (all {2 ** M.size} subsets swept)", True, rep.core_bound > B)
    res.notes.append(f"core bound found: {rep.core_bound}")
    return res


def directed_path(nodes: int) -> Structure:
    return Structure(GRAPH, nodes, {"E": frozenset((i, i + 1) for i in range(nodes - 1))})


def tdeg_le1(x: str) -> Formula:
    adj = lambda s, t: atom("E", s, t) | atom("E", t, s)
    return forall(["u", "v"], Implies(adj(x, "u") & adj(x, "v"), eq("u", "v")))


def case_directed_paths_relativization(B: int = 2, n: int = 2, L: int = 10,
                                       samples: int = 200, seed: int = 0) -> CaseResult:
    if L < B * n:
        raise CaseError("need L >= B * n")
    res = CaseResult("directed_paths_relativization",
                     {"B": B, "n": n, "L": L, "samples": samples, "seed": seed})
    phi = at_least(B, tdeg_le1, "z")
    M = directed_path(2 * L + 1)
    res.saw(M.size)
    abar = [n + 2 * n * i for i in range(B)]
    spaced = all(abar[i + 1] - abar[i] >= 2 * n for i in range(B - 1))
    res.check("points of a are pairwise at distance >= 2n", True, spaced)
    rng = random.Random(seed)
    all_ok = comp_ok = True
    for _ in range(samples):
        bbar = [rng.randrange(M.size) for _ in range(n)]
        sub, _ = induced(M, set(abar) | set(bbar))
        comp_ok &= _undirected_components(sub) >= B
        all_ok &= holds(sub, phi)
    res.check(f"{samples} sampled induced(M, a b) have >= B components", True, comp_ok)
    res.check(f"{samples} sampled induced(M, a b) satisfy phi", True, all_ok)
    res.check("finite path satisfies phi (two end points)", B <= 2, holds(M, phi))
    res.notes.append("on the two-way infinite path every node has total degree 2, so phi fails "
                     "while every such induced substructure satisfies it; not computed")
    return res


def _undirected_components(G: Structure) -> int:
    sym = set(G.relations["E"]) | {(b, a) for a, b in G.relations["E"]}
    return components(Structure(GRAPH, G.size, {"E": frozenset(sym)}))


def case_ea_bound(k: int = 1, max_size: int = 5) -> CaseResult:
    res = CaseResult("ea_bound", {"k": k, "max_size": max_size})
    vocab = monadic_vocab(k)
    phi = type_cycle_sentence(vocab.predicate_names)
    n = 1 << k
    res.saw(max_size)
    res.check(f"ps_check up to size {max_size}", True, ps_check(phi, max_size, vocab).passed)
    res.check(f"phi equivalent to forall^{n} relativization up to size {max_size}", True,
              check_equiv_upto(phi, build_psi(phi, 0, n, vocab), max_size, vocab).passed)
    M = one_per_type(vocab)
    res.check("optimality structure size", n, M.size)
    res.check("optimality structure satisfies phi", False, holds(M, phi))
    res.check(f"optimality structure satisfies forall^{n - 1} relativization", True,
              holds(M, build_psi(phi, 0, n - 1, vocab)))
    return res


CASES = {
    "example3": case_example3,
    "monadic_optimality": case_monadic_optimality,
    "finite_failure_chi": case_finite_failure_chi,
    "undirected_paths": case_undirected_paths,
    "xi_not_psc": case_xi_not_psc,
    "directed_paths_relativization": case_directed_paths_relativization,
    "ea_bound": case_ea_bound,
}


def run_case(name: str, **params) -> CaseResult:
    try:
        fn = CASES[name]
    except KeyError:
        raise CaseError(f"unknown case {name!r}; known: {', '.join(CASES)}") from None
    try:
        return fn(**params)
    except TypeError as e:
        raise CaseError(f"bad parameters for {name}: {e}") from None
