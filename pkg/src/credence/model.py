"""Wired knowledge bases: frames, hypotheses, rules, and their indexes.

The parser (lang.py) produces declarations that still hold names.  wire()
resolves every name, turns set expressions into focal sets, checks the
hypothesis taxonomy, orders rules along the frame dependency graph, and
returns an immutable KnowledgeBase.  All per-consultation state (observed
evidence, combined belief, trigger records) lives in the engine's working
memory, never on these objects, so one KnowledgeBase can serve any number
of concurrent sessions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import lang
from .errors import (
    CircularDefinitionError,
    CredenceError,
    DanglingReferenceError,
    DependencyCycleError,
    FrameMismatchError,
    InvalidRuleError,
    KBParseError,
    UnknownElementError,
)
from .focal import FocalSet, FrameSignature, complement, intersect, is_empty, is_subset


@dataclass(frozen=True)
class Frame:
    """A frame of discernment: a set of mutually exclusive, exhaustive
    elements plus prior probabilities over them."""

    id: str
    name: str
    elements: tuple[str, ...]
    prior: tuple[float, ...]
    signature: FrameSignature = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.prior) != len(self.elements):
            raise CredenceError(
                f"frame {self.id}: {len(self.prior)} priors for "
                f"{len(self.elements)} elements"
            )
        if abs(sum(self.prior) - 1.0) > 1e-9:
            raise CredenceError(
                f"frame {self.id}: prior sums to {sum(self.prior)!r}"
            )
        object.__setattr__(
            self, "signature", FrameSignature(self.id, self.elements)
        )

    def prior_of(self, focal: FocalSet) -> float:
        """Total prior probability of the elements in `focal`."""
        self.signature  # noqa: B018  - frames always carry one
        return sum(
            p
            for el, p in zip(self.elements, self.prior)
            if focal.code >> self.signature.bit_of(el) & 1
        )


@dataclass(frozen=True)
class RoleDescriptor:
    """How a rule's firing bears on one hypothesis."""

    effect: str  # supportive | confirming | adversary | disconfirming
    hypothesis: str


@dataclass(frozen=True)
class ResolvedClause:
    """A consequent clause: mass lands on `target` with probability `prob`."""

    target: FocalSet
    prob: float
    text: str  # set expression as written, for display


@dataclass(frozen=True)
class Rule:
    id: str
    consequent: str  # frame id receiving the conclusion
    if_expr: lang.AntecedentExpr
    except_expr: lang.AntecedentExpr | None
    then_clauses: tuple[ResolvedClause, ...]
    else_clauses: tuple[ResolvedClause, ...]
    t_role: RoleDescriptor | None
    nil_role: RoleDescriptor | None

    def roles(self) -> tuple[RoleDescriptor, ...]:
        return tuple(r for r in (self.t_role, self.nil_role) if r is not None)


@dataclass(frozen=True)
class Hypothesis:
    """A named focal set with a place in the superclass taxonomy.

    b_rules lists, in declaration order, every rule whose t-role or
    nil-role names this hypothesis; explanations start from it.
    """

    name: str
    text: str
    frame_id: str
    focal: FocalSet
    superclass: str | None
    subclasses: tuple[str, ...]
    b_rules: tuple[str, ...]


@dataclass(frozen=True)
class KnowledgeBase:
    id: str
    frames: dict[str, Frame]
    hypotheses: dict[str, Hypothesis]
    rules: dict[str, Rule]
    rule_order: tuple[str, ...]  # forward-chaining order
    evidence_frames: tuple[str, ...]  # no rule concludes on these
    inferred_frames: tuple[str, ...]  # some rule concludes on these
    consultation_frames: tuple[str, ...]  # carry hypotheses, feed no rule

    def frame_of(self, frame_id: str, context: str = "") -> Frame:
        frame = self.frames.get(frame_id)
        if frame is None:
            raise DanglingReferenceError(frame_id, context or "frame lookup")
        return frame

    def hypotheses_in(self, frame_id: str) -> list[Hypothesis]:
        return [h for h in self.hypotheses.values() if h.frame_id == frame_id]

    def diagnostic_hypotheses(self) -> list[Hypothesis]:
        """Hypotheses shown in a consultation, declaration order."""
        frames = set(self.consultation_frames)
        return [h for h in self.hypotheses.values() if h.frame_id in frames]


def atom_frames(expr: lang.AntecedentExpr) -> set[str]:
    """Every frame id an antecedent expression reads."""
    if isinstance(expr, lang.Atom):
        return {expr.frame_id}
    if isinstance(expr, lang.Not):
        return atom_frames(expr.item)
    if isinstance(expr, (lang.And, lang.Or, lang.AtLeast, lang.AtMost)):
        out: set[str] = set()
        for item in expr.items:
            out |= atom_frames(item)
        return out
    raise TypeError(f"not an antecedent expression: {expr!r}")


class _SetResolver:
    """Resolves set expressions to focal sets inside one frame, following
    hypothesis names recursively with cycle detection."""

    def __init__(
        self,
        frames: dict[str, Frame],
        hyp_decls: dict[str, lang.HypothesisDecl],
    ):
        self.frames = frames
        self.hyp_decls = hyp_decls
        self.resolved: dict[str, FocalSet] = {}
        self.in_progress: list[str] = []

    def hypothesis_focal(self, name: str) -> FocalSet:
        if name in self.resolved:
            return self.resolved[name]
        if name in self.in_progress:
            cycle = self.in_progress[self.in_progress.index(name):] + [name]
            raise CircularDefinitionError(
                "hypothesis definitions form a cycle: " + " -> ".join(cycle)
            )
        decl = self.hyp_decls[name]
        frame = self.frames.get(decl.frame_id)
        if frame is None:
            raise DanglingReferenceError(decl.frame_id, f"hypothesis {name}")
        self.in_progress.append(name)
        try:
            focal = self.resolve(decl.members, frame, f"hypothesis {name}")
        finally:
            self.in_progress.pop()
        self.resolved[name] = focal
        return focal

    def resolve(
        self, expr: lang.SetExpr, frame: Frame, context: str
    ) -> FocalSet:
        if isinstance(expr, lang.SetAtom):
            sig = frame.signature
            if expr.name in frame.elements:
                return FocalSet(frame.id, 1 << sig.bit_of(expr.name), sig.width)
            decl = self.hyp_decls.get(expr.name)
            if decl is not None:
                if decl.frame_id != frame.id:
                    raise FrameMismatchError(
                        f"{context}: hypothesis {expr.name} is in frame "
                        f"{decl.frame_id}, not {frame.id}"
                    )
                return self.hypothesis_focal(expr.name)
            raise UnknownElementError(frame.id, expr.name)
        if isinstance(expr, lang.SetOr):
            out = frame.signature.empty_set()
            for item in expr.items:
                out = out | self.resolve(item, frame, context)
            return out
        if isinstance(expr, lang.SetNot):
            return ~self.resolve(expr.item, frame, context)
        raise TypeError(f"not a set expression: {expr!r}")


def _check_antecedent(
    expr: lang.AntecedentExpr, frames: dict[str, Frame], context: str
) -> None:
    if isinstance(expr, lang.Atom):
        frame = frames.get(expr.frame_id)
        if frame is None:
            raise DanglingReferenceError(expr.frame_id, context)
        if expr.value not in frame.elements:
            raise UnknownElementError(expr.frame_id, expr.value)
        return
    if isinstance(expr, lang.Not):
        _check_antecedent(expr.item, frames, context)
        return
    if isinstance(expr, (lang.And, lang.Or, lang.AtLeast, lang.AtMost)):
        if isinstance(expr, (lang.AtLeast, lang.AtMost)):
            if not 1 <= expr.n <= len(expr.items):
                raise InvalidRuleError(
                    f"{context}: count {expr.n} out of range for "
                    f"{len(expr.items)} operands"
                )
        for item in expr.items:
            _check_antecedent(item, frames, context)
        return
    raise TypeError(f"not an antecedent expression: {expr!r}")


def _toposort_frames(
    frames: dict[str, Frame], edges: dict[str, set[str]]
) -> list[str]:
    """Kahn's algorithm over frame ids; stable in declaration order."""
    order = list(frames)
    indeg = {f: 0 for f in order}
    for src in edges:
        for dst in edges[src]:
            indeg[dst] += 1
    ready = [f for f in order if indeg[f] == 0]
    out: list[str] = []
    while ready:
        cur = ready.pop(0)
        out.append(cur)
        for dst in order:
            if dst in edges.get(cur, ()):
                indeg[dst] -= 1
                if indeg[dst] == 0:
                    ready.append(dst)
        ready.sort(key=order.index)
    if len(out) != len(order):
        stuck = [f for f in order if f not in out]
        raise DependencyCycleError(stuck)
    return out


def wire(
    declarations: list[lang.Declaration], kb_id: str = "kb"
) -> KnowledgeBase:
    """Resolve declarations into an immutable, validated KnowledgeBase."""
    frame_decls: dict[str, lang.FrameDecl] = {}
    hyp_decls: dict[str, lang.HypothesisDecl] = {}
    rule_decls: dict[str, lang.RuleDecl] = {}
    for decl in declarations:
        if isinstance(decl, lang.FrameDecl):
            bucket: dict = frame_decls
        elif isinstance(decl, lang.HypothesisDecl):
            bucket = hyp_decls
        elif isinstance(decl, lang.RuleDecl):
            bucket = rule_decls
        else:
            raise TypeError(f"not a declaration: {decl!r}")
        if decl.id in bucket:
            raise CredenceError(f"duplicate id {decl.id!r}")
        bucket[decl.id] = decl

    frames: dict[str, Frame] = {}
    for fd in frame_decls.values():
        prior = fd.prior
        if prior is None:
            prior = tuple(1.0 / len(fd.elements) for _ in fd.elements)
        frames[fd.id] = Frame(fd.id, fd.name, fd.elements, prior)

    resolver = _SetResolver(frames, hyp_decls)
    focals = {name: resolver.hypothesis_focal(name) for name in hyp_decls}

    # taxonomy: parents exist, stay in frame, contain their children
    children: dict[str, list[str]] = {name: [] for name in hyp_decls}
    for name, hd in hyp_decls.items():
        if hd.parent is None:
            continue
        parent = hyp_decls.get(hd.parent)
        if parent is None:
            raise DanglingReferenceError(hd.parent, f"hypothesis {name} parent")
        if parent.frame_id != hd.frame_id:
            raise FrameMismatchError(
                f"hypothesis {name} (frame {hd.frame_id}) cannot have parent "
                f"{hd.parent} in frame {parent.frame_id}"
            )
        if not is_subset(focals[name], focals[hd.parent]):
            raise CredenceError(
                f"hypothesis {name} is not contained in its parent {hd.parent}"
            )
        children[hd.parent].append(name)
    for name, hd in hyp_decls.items():
        seen = [name]
        cur = hd.parent
        while cur is not None:
            if cur in seen:
                raise CircularDefinitionError(
                    "parent links form a cycle: " + " -> ".join(seen + [cur])
                )
            seen.append(cur)
            cur = hyp_decls[cur].parent

    rules: dict[str, Rule] = {}
    b_rules: dict[str, list[str]] = {name: [] for name in hyp_decls}
    for rd in rule_decls.values():
        ctx = f"rule {rd.id}"
        frame = frames.get(rd.consequent)
        if frame is None:
            raise DanglingReferenceError(rd.consequent, f"{ctx} consequent")
        _check_antecedent(rd.if_expr, frames, f"{ctx} if")
        if rd.except_expr is not None:
            _check_antecedent(rd.except_expr, frames, f"{ctx} except")
        if not rd.then_clauses:
            raise InvalidRuleError(f"{ctx}: no then clauses")

        def resolve_clauses(
            clauses: tuple[lang.Clause, ...], label: str
        ) -> tuple[ResolvedClause, ...]:
            out = []
            total = 0.0
            for c in clauses:
                if not 0.0 < c.prob <= 1.0:
                    raise InvalidRuleError(
                        f"{ctx}: {label} probability {c.prob!r} not in (0, 1]"
                    )
                total += c.prob
                target = resolver.resolve(c.target, frame, f"{ctx} {label}")
                if not target:
                    raise InvalidRuleError(
                        f"{ctx}: {label} clause targets the empty set"
                    )
                out.append(
                    ResolvedClause(target, c.prob, lang.set_expr_text(c.target))
                )
            if total > 1.0 + 1e-9:
                raise InvalidRuleError(
                    f"{ctx}: {label} probabilities sum to {total!r} > 1"
                )
            return tuple(out)

        then_clauses = resolve_clauses(rd.then_clauses, "then")
        else_clauses = resolve_clauses(rd.else_clauses, "else")

        def resolve_role(role: lang.Role | None) -> RoleDescriptor | None:
            if role is None:
                return None
            if role.hypothesis not in hyp_decls:
                raise DanglingReferenceError(role.hypothesis, f"{ctx} role")
            if role.effect not in lang.ROLE_EFFECTS:
                raise InvalidRuleError(
                    f"{ctx}: unknown role effect {role.effect!r}"
                )
            return RoleDescriptor(role.effect, role.hypothesis)

        t_role = resolve_role(rd.t_role)
        nil_role = resolve_role(rd.nil_role)
        rules[rd.id] = Rule(
            rd.id,
            rd.consequent,
            rd.if_expr,
            rd.except_expr,
            then_clauses,
            else_clauses,
            t_role,
            nil_role,
        )
        for role in rules[rd.id].roles():
            b_rules[role.hypothesis].append(rd.id)

    hypotheses: dict[str, Hypothesis] = {}
    for name, hd in hyp_decls.items():
        hypotheses[name] = Hypothesis(
            name,
            hd.text,
            hd.frame_id,
            focals[name],
            hd.parent,
            tuple(children[name]),
            tuple(b_rules[name]),
        )

    # frame dependency graph: antecedent frames feed consequent frames
    edges: dict[str, set[str]] = {}
    consequent_frames = set()
    antecedent_frames: set[str] = set()
    for rule in rules.values():
        consequent_frames.add(rule.consequent)
        sources = atom_frames(rule.if_expr)
        if rule.except_expr is not None:
            sources |= atom_frames(rule.except_expr)
        antecedent_frames |= sources
        for src in sources:
            if src == rule.consequent:
                raise DependencyCycleError([src, src])
            edges.setdefault(src, set()).add(rule.consequent)
    frame_order = _toposort_frames(frames, edges)
    frame_rank = {f: i for i, f in enumerate(frame_order)}
    decl_rank = {rid: i for i, rid in enumerate(rules)}
    rule_order = tuple(
        sorted(rules, key=lambda r: (frame_rank[rules[r].consequent], decl_rank[r]))
    )

    evidence = tuple(f for f in frames if f not in consequent_frames)
    inferred = tuple(f for f in frames if f in consequent_frames)
    consultation = tuple(
        f
        for f in frames
        if f not in antecedent_frames
        and any(h.frame_id == f for h in hypotheses.values())
    )
    return KnowledgeBase(
        kb_id,
        frames,
        hypotheses,
        rules,
        rule_order,
        evidence,
        inferred,
        consultation,
    )


def role_consistency_check(kb: KnowledgeBase) -> list[str]:
    """Warnings for rule roles that cannot mean what they claim: a role on a
    hypothesis in some other frame, or an effect pointing away from every
    clause the rule can conclude."""
    warnings: list[str] = []
    for rid in kb.rule_order:
        rule = kb.rules[rid]
        for role in rule.roles():
            hyp = kb.hypotheses[role.hypothesis]
            if hyp.frame_id != rule.consequent:
                warnings.append(
                    f"rule {rid}: role names {hyp.name} in frame "
                    f"{hyp.frame_id} but the rule concludes on "
                    f"{rule.consequent}"
                )
                continue
            clauses = rule.then_clauses + rule.else_clauses
            aim = hyp.focal
            if role.effect in ("adversary", "disconfirming"):
                aim = complement(hyp.focal)
            if all(
                is_empty(intersect(c.target, aim)) for c in clauses
            ):
                warnings.append(
                    f"rule {rid}: {role.effect} role on {hyp.name} but no "
                    f"clause overlaps the "
                    + (
                        "hypothesis"
                        if aim.code == hyp.focal.code
                        else "hypothesis complement"
                    )
                )
    return warnings


def load_kb(path: str | Path) -> KnowledgeBase:
    """Parse and wire a .gkb file, raising KBParseError on bad syntax."""
    path = Path(path)
    result = lang.parse_kb(path.read_text(), str(path))
    if result.diagnostics:
        raise KBParseError(result.diagnostics)
    return wire(result.declarations, kb_id=path.stem)


def load_evidence(
    path: str | Path, kb: KnowledgeBase
) -> lang.EvidenceAssignment:
    """Parse a .gev file and check every observation against the KB."""
    path = Path(path)
    result = lang.parse_evidence(path.read_text(), str(path))
    if result.diagnostics:
        raise KBParseError(result.diagnostics)
    validate_evidence(result.assignment, kb)
    return result.assignment


def validate_evidence(
    assignment: lang.EvidenceAssignment, kb: KnowledgeBase
) -> None:
    for entry in assignment.entries:
        frame = kb.frames.get(entry.frame_id)
        if frame is None:
            raise DanglingReferenceError(
                entry.frame_id, f"evidence for {entry.element}"
            )
        if entry.element not in frame.elements:
            raise UnknownElementError(entry.frame_id, entry.element)
