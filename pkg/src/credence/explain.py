"""Explanations: why a hypothesis earned its belief interval.

An explanation for a hypothesis lists only the rules recorded in its
triggering history, that is the rules whose declared role names the
hypothesis, each with the observations that fired it.  The hypothesis
taxonomy supplies the rest: the final item points at the superclass's
belief interval, and the dialogue offers to explain that hypothesis
next.  Tracing every rule that touched the frame would bury the user;
the role filter keeps each step short and the superclass chain keeps
the whole story reachable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import BeliefInterval, Observation, WorkingMemory
from .errors import NoParentError, UnknownHypothesisError


@dataclass(frozen=True)
class RuleContribution:
    """One rule firing that bore on the explained hypothesis."""

    rule_id: str
    role_effect: str  # supportive | confirming | adversary | disconfirming
    clause: str  # "then" or "else": which side carried the mass
    inferred_degree: float
    observations: tuple[Observation, ...]


@dataclass(frozen=True)
class ParentLink:
    hypothesis: str
    text: str
    interval: BeliefInterval


@dataclass(frozen=True)
class ExplanationNode:
    hypothesis: str
    text: str
    interval: BeliefInterval
    contributions: tuple[RuleContribution, ...]
    parent: ParentLink | None


def explain(wm: WorkingMemory, hypothesis: str) -> ExplanationNode:
    """Build the explanation for one hypothesis from its triggering
    history, strongest contribution first."""
    hyp = wm.kb.hypotheses.get(hypothesis)
    if hyp is None:
        raise UnknownHypothesisError(hypothesis)
    contributions = [
        RuleContribution(
            t.rule_id, t.effect, t.clause, t.inferred_degree, t.observations
        )
        for t in wm.triggered_for(hypothesis)
    ]
    contributions.sort(key=lambda c: (-c.inferred_degree, c.rule_id))

    parent = None
    if hyp.superclass is not None:
        sup = wm.kb.hypotheses[hyp.superclass]
        parent = ParentLink(sup.name, sup.text, wm.interval_of(sup.name))
    return ExplanationNode(
        hyp.name,
        hyp.text,
        wm.interval_of(hyp.name),
        tuple(contributions),
        parent,
    )


def expand(wm: WorkingMemory, node: ExplanationNode) -> ExplanationNode:
    """The dialogue's recursion step: explain the superclass."""
    if node.parent is None:
        raise NoParentError(
            f"hypothesis {node.hypothesis} has no superclass to explain"
        )
    return explain(wm, node.parent.hypothesis)


def explain_chain(
    wm: WorkingMemory, hypothesis: str, depth: int = 0
) -> list[ExplanationNode]:
    """The node plus up to `depth` superclass expansions (0 = just the
    node, large depth stops at the taxonomy root)."""
    nodes = [explain(wm, hypothesis)]
    while depth > 0 and nodes[-1].parent is not None:
        nodes.append(expand(wm, nodes[-1]))
        depth -= 1
    return nodes


# --------------------------------------------------------------------------
# Text rendering

_DEGREE_COLUMN = 41  # left margin of the "with degree of belief" lines


def _observation_lines(obs: Observation, indent: int) -> list[str]:
    pad = " " * indent
    if not obs.children:
        lines = [f"{pad}{obs.text}"]
        if obs.degree is not None:
            lines.append(
                " " * _DEGREE_COLUMN
                + f"with degree of belief = {obs.degree:.3f},"
            )
        return lines
    lines = [f"{pad}({obs.text}"]
    for child in obs.children:
        lines.extend(_observation_lines(child, indent + 2))
    lines.append(f"{pad})")
    return lines


def render_text(node: ExplanationNode) -> str:
    """The consultation dialogue's explanation block.  The last line is
    the further-explanation prompt (no trailing newline) when the
    hypothesis has a superclass."""
    out = [
        f"The belief interval of {node.text} is {node.interval}",
        "is based on",
    ]
    items: list[list[str]] = []
    for c in node.contributions:
        lines = [f"({len(items) + 1}) {c.rule_id} and the observations that"]
        for obs in c.observations:
            lines.extend(_observation_lines(obs, 4))
        # a categorical firing needs no restatement of its conclusion
        if round(c.inferred_degree, 3) < 1.0:
            lines.append(
                f"    infers that the degree of belief in {node.text} "
                f"is {c.inferred_degree:.3f},"
            )
        items.append(lines)
    if node.parent is not None:
        items.append(
            [
                f"({len(items) + 1}) the belief interval of "
                f"{node.parent.text} is {node.parent.interval}."
            ]
        )
    if not items:
        out.append("    no recorded rule contributions.")
    for i, lines in enumerate(items):
        if i:
            out.append("and")
        out.extend(lines)
    last = out[-1]
    if last.endswith(","):
        out[-1] = last[:-1] + "."
    if node.parent is not None:
        out.append("")
        out.append(
            f"Do you want a further explanation of {node.parent.text}? "
            f"(y or n)"
        )
    return "\n".join(out)


# --------------------------------------------------------------------------
# Structured form (service payloads, golden fixtures)

def observation_to_dict(obs: Observation) -> dict:
    return {
        "text": obs.text,
        "degree": obs.degree,
        "children": [observation_to_dict(c) for c in obs.children],
    }


def node_to_dict(node: ExplanationNode) -> dict:
    return {
        "hypothesis": node.hypothesis,
        "text": node.text,
        "interval": {"bel": node.interval.bel, "pl": node.interval.pl},
        "contributions": [
            {
                "rule": c.rule_id,
                "effect": c.role_effect,
                "clause": c.clause,
                "inferred_degree": c.inferred_degree,
                "observations": [
                    observation_to_dict(o) for o in c.observations
                ],
            }
            for c in node.contributions
        ],
        "parent": (
            None
            if node.parent is None
            else {
                "hypothesis": node.parent.hypothesis,
                "text": node.parent.text,
                "interval": {
                    "bel": node.parent.interval.bel,
                    "pl": node.parent.interval.pl,
                },
            }
        ),
    }
