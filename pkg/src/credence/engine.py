"""Forward-chaining evidential reasoning over belief functions.

A consultation starts from observed evidence: each observation becomes a
simple-support mass function on its frame (degree d on the observed
element, 1 - d on the whole frame).  Rules then run in dependency order.
A rule whose antecedent frames all have defined state is evaluated with
fuzzy operators (and = min, or = max, not = 1 - d, elastic at-least /
at-most via order statistics), discounted by its except condition, and
its conclusion clauses are scaled by the resulting degree into a mass
function that Dempster's rule folds into the consequent frame.

Everything computed for one consultation lives in a WorkingMemory: the
combined mass per frame, per-frame trigger records, and per-hypothesis
records of which rules bore on it and with what mass.  Knowledge bases
are never mutated, so retraction is just recomputation: update_evidence
rebuilds the memory from the changed assignment and the results are
identical to a fresh run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernel, lang, model
from .errors import (
    DegeneratePriorError,
    InvalidQueryError,
    TotalConflictError,
    UndefinedEvidenceError,
    UnknownHypothesisError,
)
from .focal import FocalSet, complement


@dataclass(frozen=True)
class BeliefInterval:
    """[belief, plausibility]: what the evidence forces vs what it allows."""

    bel: float
    pl: float

    @property
    def width(self) -> float:
        return self.pl - self.bel

    def __str__(self) -> str:
        return f"[{self.bel:.3f}, {self.pl:.3f}]"


@dataclass(frozen=True)
class Bpa:
    """A basic probability assignment: mass over focal-set codes.

    Masses are positive and sum to 1 (the code of the full frame carries
    any uncommitted remainder).
    """

    frame_id: str
    width: int
    masses: dict[int, float]

    def __post_init__(self) -> None:
        total = math.fsum(self.masses.values())
        if abs(total - 1.0) > 1e-6:
            raise InvalidQueryError(
                f"mass function on {self.frame_id} sums to {total!r}"
            )

    def focal_sets(self) -> list[tuple[FocalSet, float]]:
        return [
            (FocalSet(self.frame_id, code, self.width), m)
            for code, m in self.masses.items()
        ]


def vacuous(frame: model.Frame) -> Bpa:
    sig = frame.signature
    return Bpa(frame.id, sig.width, {sig.full_code: 1.0})


def simple_support(frame: model.Frame, element: str, degree: float) -> Bpa:
    """Mass `degree` on the observed element, remainder on the frame."""
    sig = frame.signature
    code = 1 << sig.bit_of(element)
    if degree <= 0.0:
        return vacuous(frame)
    if degree >= 1.0:
        return Bpa(frame.id, sig.width, {code: 1.0})
    return Bpa(
        frame.id, sig.width, {code: degree, sig.full_code: 1.0 - degree}
    )


def combine(a: Bpa, b: Bpa, tol: float = 1e-12) -> Bpa:
    """Dempster's rule.  Raises TotalConflictError when the two mass
    functions are contradictory (normalizing constant vanishes)."""
    if a.frame_id != b.frame_id:
        raise InvalidQueryError(
            f"cannot combine mass functions on {a.frame_id} and {b.frame_id}"
        )
    masses, conflict = kernel.combine_masses(a.masses, b.masses, tol, a.width)
    if masses is None:
        raise TotalConflictError(
            f"total conflict on frame {a.frame_id} "
            f"(conflict mass {conflict!r})"
        )
    return Bpa(a.frame_id, a.width, masses)


def bel(bpa: Bpa, focal: FocalSet) -> float:
    if focal.frame_id != bpa.frame_id:
        raise InvalidQueryError(
            f"focal set on {focal.frame_id} queried against {bpa.frame_id}"
        )
    return kernel.bel_of(bpa.masses, focal.code, bpa.width)


def pl(bpa: Bpa, focal: FocalSet) -> float:
    return 1.0 - bel(bpa, complement(focal))


def interval(bpa: Bpa, focal: FocalSet) -> BeliefInterval:
    return BeliefInterval(bel(bpa, focal), pl(bpa, focal))


@dataclass(frozen=True)
class Bca:
    """Point-probability redistribution of a mass function: each focal
    set's mass is split over its elements in proportion to their priors."""

    frame_id: str
    certainties: dict[str, float]


def bca(bpa: Bpa, frame: model.Frame) -> Bca:
    sig = frame.signature
    out = {el: 0.0 for el in frame.elements}
    for code, m in bpa.masses.items():
        focal = FocalSet(frame.id, code, sig.width)
        p_focal = frame.prior_of(focal)
        if p_focal <= 0.0:
            raise DegeneratePriorError(frame.id, sig.decode(focal)[0])
        for el in sig.decode(focal):
            p_el = frame.prior[sig.bit_of(el)]
            out[el] += m * p_el / p_focal
    return Bca(frame.id, out)


# --------------------------------------------------------------------------
# Antecedent evaluation

def _kth_largest(values: list[float], k: int) -> float:
    return sorted(values, reverse=True)[k - 1]


def eval_antecedent(
    expr: lang.AntecedentExpr, state: dict[str, Bpa], kb: model.KnowledgeBase
) -> float:
    """Degree of belief in an antecedent under the current frame state.
    Raises UndefinedEvidenceError when an atom's frame has no state."""
    if isinstance(expr, lang.Atom):
        bpa = state.get(expr.frame_id)
        if bpa is None:
            raise UndefinedEvidenceError(expr.frame_id)
        sig = kb.frames[expr.frame_id].signature
        focal = FocalSet(expr.frame_id, 1 << sig.bit_of(expr.value), sig.width)
        return bel(bpa, focal)
    if isinstance(expr, lang.Not):
        return 1.0 - eval_antecedent(expr.item, state, kb)
    if isinstance(expr, lang.And):
        return min(eval_antecedent(e, state, kb) for e in expr.items)
    if isinstance(expr, lang.Or):
        return max(eval_antecedent(e, state, kb) for e in expr.items)
    if isinstance(expr, lang.AtLeast):
        degrees = [eval_antecedent(e, state, kb) for e in expr.items]
        return _kth_largest(degrees, expr.n)
    if isinstance(expr, lang.AtMost):
        degrees = [eval_antecedent(e, state, kb) for e in expr.items]
        if expr.n >= len(degrees):
            return 1.0
        return 1.0 - _kth_largest(degrees, expr.n + 1)
    raise TypeError(f"not an antecedent expression: {expr!r}")


@dataclass(frozen=True)
class RuleActivation:
    """Antecedent degrees for one rule under one frame state."""

    base: float  # degree of the if condition
    defeat: float  # degree of the except condition (0 when absent/unknown)

    @property
    def then_degree(self) -> float:
        return min(self.base, 1.0 - self.defeat)

    @property
    def else_degree(self) -> float:
        return 1.0 - self.base


def effective_degree(
    rule: model.Rule, state: dict[str, Bpa], kb: model.KnowledgeBase
) -> RuleActivation:
    base = eval_antecedent(rule.if_expr, state, kb)
    defeat = 0.0
    if rule.except_expr is not None:
        if model.atom_frames(rule.except_expr) <= state.keys():
            defeat = eval_antecedent(rule.except_expr, state, kb)
    return RuleActivation(base, defeat)


def rule_bpa(
    rule: model.Rule, activation: RuleActivation, kb: model.KnowledgeBase
) -> Bpa | None:
    """The mass function a rule contributes, or None when every clause
    scales to nothing and the rule has no effect."""
    sig = kb.frames[rule.consequent].signature
    acc: dict[int, float] = {}
    total = 0.0
    for clauses, degree in (
        (rule.then_clauses, activation.then_degree),
        (rule.else_clauses, activation.else_degree),
    ):
        for clause in clauses:
            m = clause.prob * degree
            if m > 0.0:
                acc[clause.target.code] = acc.get(clause.target.code, 0.0) + m
                total += m
    if total <= 0.0:
        return None
    if total < 1.0:
        acc[sig.full_code] = acc.get(sig.full_code, 0.0) + (1.0 - total)
    return Bpa(rule.consequent, sig.width, acc)


# --------------------------------------------------------------------------
# Working memory and the chaining loop

@dataclass(frozen=True)
class Observation:
    """One line of grounds for a rule firing, possibly a nested group."""

    text: str
    degree: float | None
    children: tuple[Observation, ...] = ()


def observations_of(
    expr: lang.AntecedentExpr, state: dict[str, Bpa], kb: model.KnowledgeBase
) -> tuple[Observation, ...]:
    """Flatten an antecedent into display observations with their degrees,
    as seen by the rule at firing time."""
    if isinstance(expr, lang.Atom):
        frame = kb.frames[expr.frame_id]
        degree = eval_antecedent(expr, state, kb)
        return (Observation(f"{frame.name} is {expr.value}", degree),)
    if isinstance(expr, lang.Not) and isinstance(expr.item, lang.Atom):
        frame = kb.frames[expr.item.frame_id]
        degree = eval_antecedent(expr, state, kb)
        return (
            Observation(f"{frame.name} is not {expr.item.value}", degree),
        )
    if isinstance(expr, lang.And):
        out: list[Observation] = []
        for item in expr.items:
            out.extend(observations_of(item, state, kb))
        return tuple(out)
    if isinstance(expr, lang.Or):
        children = []
        for item in expr.items:
            children.extend(observations_of(item, state, kb))
        degree = eval_antecedent(expr, state, kb)
        return (
            Observation(
                "at least one of the following:", degree, tuple(children)
            ),
        )
    if isinstance(expr, lang.AtLeast):
        children = []
        for item in expr.items:
            children.extend(observations_of(item, state, kb))
        degree = eval_antecedent(expr, state, kb)
        return (
            Observation(
                f"At least {expr.n} of the following:",
                degree,
                tuple(children),
            ),
        )
    if isinstance(expr, lang.AtMost):
        children = []
        for item in expr.items:
            children.extend(observations_of(item, state, kb))
        degree = eval_antecedent(expr, state, kb)
        return (
            Observation(
                f"At most {expr.n} of the following:",
                degree,
                tuple(children),
            ),
        )
    if isinstance(expr, lang.Not):
        inner = observations_of(expr.item, state, kb)
        degree = eval_antecedent(expr, state, kb)
        return (Observation("none of the following:", degree, inner),)
    raise TypeError(f"not an antecedent expression: {expr!r}")


@dataclass(frozen=True)
class TriggerRecord:
    """A rule firing as seen by its consequent frame."""

    rule_id: str
    bpa: Bpa
    antecedent_degree: float
    clause: str  # "then" or "else"


@dataclass(frozen=True)
class TriggeredRule:
    """A rule firing as seen by one hypothesis it plays a role for:
    only the mass aimed by the role's clause side, plus the grounds."""

    rule_id: str
    hypothesis: str
    effect: str
    clause: str  # which side of the rule this role rides on
    masses: tuple[tuple[int, float], ...]
    inferred_degree: float
    observations: tuple[Observation, ...]


@dataclass(frozen=True)
class EngineSettings:
    threshold: float = 0.0  # fire only when clause mass exceeds this
    tol: float = 1e-12  # conflict tolerance for Dempster's rule


@dataclass(frozen=True)
class WorkingMemory:
    """Everything one consultation computed; the KB itself stays pristine."""

    kb: model.KnowledgeBase
    settings: EngineSettings
    evidence: lang.EvidenceAssignment
    state: dict[str, Bpa]  # defined frames only
    records: dict[str, tuple[TriggerRecord, ...]]  # frame id -> firings
    triggered: dict[str, tuple[TriggeredRule, ...]]  # hypothesis -> firings

    def bpa_of(self, frame_id: str) -> Bpa:
        bpa = self.state.get(frame_id)
        if bpa is None:
            if frame_id not in self.kb.frames:
                raise InvalidQueryError(f"unknown frame {frame_id!r}")
            raise UndefinedEvidenceError(frame_id)
        return bpa

    def interval_of(self, hypothesis: str) -> BeliefInterval:
        hyp = self.kb.hypotheses.get(hypothesis)
        if hyp is None:
            raise UnknownHypothesisError(hypothesis)
        bpa = self.state.get(hyp.frame_id)
        if bpa is None:
            return BeliefInterval(0.0, 1.0)
        return interval(bpa, hyp.focal)

    def triggered_for(self, hypothesis: str) -> tuple[TriggeredRule, ...]:
        if hypothesis not in self.kb.hypotheses:
            raise UnknownHypothesisError(hypothesis)
        return self.triggered.get(hypothesis, ())


def forward_chain(
    kb: model.KnowledgeBase,
    evidence: lang.EvidenceAssignment,
    settings: EngineSettings | None = None,
) -> WorkingMemory:
    """Run every applicable rule once, in frame dependency order."""
    settings = settings or EngineSettings()
    model.validate_evidence(evidence, kb)

    state: dict[str, Bpa] = {}
    by_frame: dict[str, list[lang.EvidenceEntry]] = {}
    for entry in evidence.entries:
        by_frame.setdefault(entry.frame_id, []).append(entry)
    for frame_id, entries in by_frame.items():
        frame = kb.frames[frame_id]
        bpa = simple_support(frame, entries[0].element, entries[0].degree)
        for entry in entries[1:]:
            bpa = combine(
                bpa,
                simple_support(frame, entry.element, entry.degree),
                settings.tol,
            )
        state[frame_id] = bpa

    records: dict[str, list[TriggerRecord]] = {}
    triggered: dict[str, list[TriggeredRule]] = {}
    for rule_id in kb.rule_order:
        rule = kb.rules[rule_id]
        if not model.atom_frames(rule.if_expr) <= state.keys():
            continue  # antecedent frames carry no state: rule is silent
        activation = effective_degree(rule, state, kb)
        contribution = rule_bpa(rule, activation, kb)
        if contribution is None:
            continue
        sig = kb.frames[rule.consequent].signature
        clause_mass = sum(
            m
            for code, m in contribution.masses.items()
            if code != sig.full_code
        )
        if not clause_mass > settings.threshold:
            continue

        clause = "then" if activation.then_degree > 0.0 and any(
            c.prob * activation.then_degree > 0.0 for c in rule.then_clauses
        ) else "else"
        records.setdefault(rule.consequent, []).append(
            TriggerRecord(rule_id, contribution, activation.base, clause)
        )
        prior = state.get(rule.consequent)
        try:
            state[rule.consequent] = (
                contribution
                if prior is None
                else combine(prior, contribution, settings.tol)
            )
        except TotalConflictError as exc:
            raise TotalConflictError(str(exc), rule_id=rule_id) from None

        grounds = observations_of(rule.if_expr, state, kb)
        for role, clauses, degree, side in (
            (
                rule.t_role,
                rule.then_clauses,
                activation.then_degree,
                "then",
            ),
            (
                rule.nil_role,
                rule.else_clauses,
                activation.else_degree,
                "else",
            ),
        ):
            if role is None:
                continue
            portion = tuple(
                (c.target.code, c.prob * degree)
                for c in clauses
                if c.prob * degree > 0.0
            )
            if not portion:
                continue
            triggered.setdefault(role.hypothesis, []).append(
                TriggeredRule(
                    rule_id,
                    role.hypothesis,
                    role.effect,
                    side,
                    portion,
                    sum(m for _, m in portion),
                    grounds,
                )
            )

    return WorkingMemory(
        kb,
        settings,
        evidence,
        state,
        {f: tuple(r) for f, r in records.items()},
        {h: tuple(t) for h, t in triggered.items()},
    )


def update_evidence(
    wm: WorkingMemory,
    changes: list[tuple[str, str, float | None]],
) -> WorkingMemory:
    """Set or retract observations and rebuild the memory.  A degree of
    None removes the observation; results match a fresh consultation on
    the final assignment exactly."""
    assignment = wm.evidence
    for frame_id, element, degree in changes:
        assignment = assignment.with_change(frame_id, element, degree)
    return forward_chain(wm.kb, assignment, wm.settings)


def rank_diagnoses(
    wm: WorkingMemory, frame_id: str
) -> list[tuple[model.Hypothesis, BeliefInterval]]:
    """The frame's hypotheses that earned belief, strongest first: belief
    descending, then plausibility descending, then hypothesis name."""
    if frame_id not in wm.kb.frames:
        raise InvalidQueryError(f"unknown frame {frame_id!r}")
    ranked = []
    for hyp in wm.kb.hypotheses_in(frame_id):
        iv = wm.interval_of(hyp.name)
        if iv.bel > 0.0:
            ranked.append((hyp, iv))
    ranked.sort(key=lambda pair: (-pair[1].bel, -pair[1].pl, pair[0].name))
    return ranked


def all_diagnoses(
    wm: WorkingMemory,
) -> list[tuple[model.Hypothesis, BeliefInterval]]:
    """rank_diagnoses over every consultation frame, declaration order."""
    out = []
    for frame_id in wm.kb.consultation_frames:
        out.extend(rank_diagnoses(wm, frame_id))
    return out


def diagnose(
    kb: model.KnowledgeBase,
    evidence: lang.EvidenceAssignment,
    settings: EngineSettings | None = None,
) -> tuple[WorkingMemory, list[tuple[model.Hypothesis, BeliefInterval]]]:
    wm = forward_chain(kb, evidence, settings)
    return wm, all_diagnoses(wm)
