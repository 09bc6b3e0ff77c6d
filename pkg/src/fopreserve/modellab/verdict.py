"""Outcomes of bounded searches and their text reports.

A counterexample carries enough data to be re-checked with the reference
evaluator alone; ``recheck`` does exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..logic.formula import Formula, to_text
from ..logic.semantics import eval_fo, eval_mso
from ..logic.structure import Structure, format_structure, induced

PASS = "PASS"
FAIL = "FAIL"


def fmt_set(s) -> str:
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


def fmt_tuple(t) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


def one_line(M: Structure) -> str:
    return format_structure(M, with_vocab=False)


@dataclass
class Witness:
    """Counterexample data.

    kind is one of: 'ps' (model with a failing substructure), 'psc' (model
    with a refuting superset for every small candidate core), 'equiv' (a
    structure separating two sentences), 'kcover' (a non-model covered by
    models), 'words' (a word separating two sentences).
    """

    kind: str
    structure: Structure
    data: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"witness: {self.kind}", f"size: {self.structure.size}",
               f"structure: {one_line(self.structure)}"]
        for key in sorted(self.data):
            value = self.data[key]
            if key == "certificates":
                for core, sup in value:
                    out.append(f"refuted core {fmt_set(core)} by {fmt_set(sup)}")
            elif key == "cover":
                out.append("cover: " + " ".join(fmt_set(s) for s in value))
            elif isinstance(value, (set, frozenset)):
                out.append(f"{key}: {fmt_set(value)}")
            elif isinstance(value, Formula):
                out.append(f"{key}: {to_text(value)}")
            else:
                out.append(f"{key}: {value}")
        return out


@dataclass
class Verdict:
    check: str
    status: str
    bound: int
    witness: Witness | None = None
    formulas: dict[str, Formula] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    parts: list["Verdict"] = field(default_factory=list)

    def __post_init__(self):
        if self.status == FAIL and self.witness is None and not any(
                p.status == FAIL for p in self.parts):
            raise ValueError("a failing verdict needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def report(self) -> str:
        lines = [f"VERDICT: {self.status} bound={self.bound}", f"check: {self.check}"]
        for name in sorted(self.formulas):
            lines.append(f"{name}: {to_text(self.formulas[name])}")
        if self.passed:
            lines.append(f"PASS up to size {self.bound}")
        if self.witness is not None:
            lines.extend(self.witness.lines())
        for part in self.parts:
            lines.append(f"part {part.check}: {part.status} bound={part.bound}")
            lines.extend("  " + line for line in part.report().splitlines()[1:])
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


@dataclass
class CoreReport:
    model: Structure
    sentence: Formula
    minimal_cores: list[tuple[int, ...]]
    core_bound: int
    witnesses: list[tuple[int, ...]] | None = None
    psi: Formula | None = None
    flag_witnesses_are_cores: bool | None = None
    flag_small_cores_are_witnesses: bool | None = None

    def report(self) -> str:
        ok = all(f is not False for f in (self.flag_witnesses_are_cores,
                                          self.flag_small_cores_are_witnesses))
        status = PASS if ok else FAIL
        lines = [f"VERDICT: {status} bound={self.model.size}", "check: cores",
                 f"sentence: {to_text(self.sentence)}",
                 f"structure: {one_line(self.model)}",
                 "minimal cores: " + " ".join(fmt_set(c) for c in self.minimal_cores),
                 f"core bound: {self.core_bound}"]
        if self.witnesses is not None:
            lines.append(f"psi: {to_text(self.psi)}")
            lines.append("witnesses: " + " ".join(fmt_tuple(w) for w in self.witnesses))
            lines.append(f"flag (a) every witness set is a core: {_yn(self.flag_witnesses_are_cores)}")
            lines.append("flag (b) every small core gives witnesses: "
                         f"{_yn(self.flag_small_cores_are_witnesses)}")
        return "\n".join(lines) + "\n"


def _yn(flag) -> str:
    return "yes" if flag else "no"


# ---------------------------------------------------------------- re-check

def _ev(M, f):
    from ..logic.formula import has_set_syntax
    return eval_mso(M, f) if has_set_syntax(f) else eval_fo(M, f)


def recheck(verdict: Verdict) -> bool:
    """Re-validate a failing verdict using only the reference evaluator.

    Returns True for passing verdicts (nothing to re-check).
    """
    ok = True
    for part in verdict.parts:
        ok = ok and recheck(part)
    w = verdict.witness
    if verdict.passed or w is None:
        return ok
    M = w.structure
    phi = verdict.formulas.get("phi")
    if w.kind == "ps":
        sub, _ = induced(M, w.data["substructure"])
        return ok and _ev(M, phi) and not _ev(sub, phi)
    if w.kind == "psc":
        if not _ev(M, phi):
            return False
        bound = w.data["B"]
        refuted = dict((tuple(c), s) for c, s in w.data["certificates"])
        import itertools
        for r in range(bound + 1):
            for core in itertools.combinations(range(M.size), min(r, M.size)):
                sup = refuted.get(core)
                if sup is None or not set(core) <= set(sup):
                    return False
                sub, _ = induced(M, sup)
                if _ev(sub, phi):
                    return False
        return ok
    if w.kind == "equiv":
        psi = verdict.formulas["psi"]
        return ok and _ev(M, phi) != _ev(M, psi)
    if w.kind == "kcover":
        if _ev(M, phi):
            return False
        cover = [set(s) | set(M.constant_elements) for s in w.data["cover"]]
        from .cores import is_k_cover
        if not is_k_cover(M, cover, max(w.data["k"], 1)):
            return False
        return ok and all(_ev(induced(M, s)[0], phi) for s in cover)
    if w.kind == "words":
        psi = verdict.formulas["psi"]
        return ok and _ev(M, phi) != _ev(M, psi)
    raise ValueError(f"unknown witness kind {w.kind!r}")
