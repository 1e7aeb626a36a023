"""Explanation trees and their dialogue rendering."""

import pytest

import credence
from credence import EvidenceAssignment, EvidenceEntry, lang, wire
from credence.engine import forward_chain
from credence.errors import NoParentError, UnknownHypothesisError
from credence.explain import (
    expand,
    explain,
    explain_chain,
    node_to_dict,
    render_text,
)

DEG = " " * 41


def wire_text(text: str):
    result = lang.parse_kb(text)
    assert result.ok, [str(d) for d in result.diagnostics]
    return wire(result.declarations)


def ev(*entries) -> EvidenceAssignment:
    return EvidenceAssignment(
        tuple(EvidenceEntry(f, e, d) for f, e, d in entries)
    )


# -- node structure


def test_node_fields(e4_memory):
    node = explain(e4_memory, "Ne")
    assert node.hypothesis == "Ne"
    assert node.text == "seronegative rheumatoid arthritis"
    assert node.interval.bel == pytest.approx(0.56, abs=1e-9)
    assert node.interval.pl == pytest.approx(1.0)
    (c,) = node.contributions
    assert c.rule_id == "R1"
    assert c.role_effect == "supportive"
    assert c.clause == "then"
    assert c.inferred_degree == pytest.approx(1.0)
    (obs,) = c.observations
    assert obs.text == "latex agglutination test is negative"
    assert obs.degree == pytest.approx(1.0)
    assert obs.children == ()
    assert node.parent is not None
    assert node.parent.hypothesis == "Rh"
    assert node.parent.text == "rheumatoid arthritis"
    assert node.parent.interval.bel == pytest.approx(0.56, abs=1e-9)


def test_grouped_observations(e4_memory):
    node = explain(e4_memory, "Rh")
    (c,) = node.contributions
    assert c.rule_id == "R4"
    assert c.inferred_degree == pytest.approx(0.56, abs=1e-9)
    (group,) = c.observations
    assert group.text == "At least 5 of the following:"
    assert len(group.children) == 5
    degrees = [child.degree for child in group.children]
    assert degrees == [
        pytest.approx(1.0),
        pytest.approx(0.7),
        pytest.approx(1.0),
        pytest.approx(1.0),
        pytest.approx(1.0),
    ]


def test_root_has_no_parent_and_no_contributions(e4_memory):
    node = explain(e4_memory, "Poly")
    assert node.parent is None
    assert node.contributions == ()
    assert node.interval == credence.BeliefInterval(1.0, 1.0)


def test_unknown_hypothesis(e4_memory):
    with pytest.raises(UnknownHypothesisError):
        explain(e4_memory, "Ghost")


# -- ordering and filtering


ORDERING_KB = """gertis-kb 1
frame E1 "first sign" { elements: present, absent ; }
frame E2 "second sign" { elements: present, absent ; }
frame E3 "third sign" { elements: present, absent ; }
frame F "dx" { elements: a, b ; }
hypothesis H "the a case" in F = a ;
hypothesis K "the b case" in F = b ;
rule RA { consequent: F ; if: (E1) ; then: a : 0.4 ; t-role: supportive H ; }
rule RB { consequent: F ; if: (E2) ; then: a : 0.9 ; t-role: supportive H ; }
rule RC { consequent: F ; if: (E3) ; then: a : 0.4 ; t-role: supportive H ; }
rule RK { consequent: F ; if: (E1) ; then: b : 0.2 ; t-role: supportive K ; }
"""


def test_contributions_mass_descending_then_rule_id():
    kb = wire_text(ORDERING_KB)
    wm = forward_chain(
        kb,
        ev(
            ("E1", "present", 1.0),
            ("E2", "present", 1.0),
            ("E3", "present", 1.0),
        ),
    )
    node = explain(wm, "H")
    assert [c.rule_id for c in node.contributions] == ["RB", "RA", "RC"]


def test_only_rules_naming_the_hypothesis_appear():
    kb = wire_text(ORDERING_KB)
    wm = forward_chain(
        kb, ev(("E1", "present", 1.0), ("E2", "present", 1.0))
    )
    assert {c.rule_id for c in explain(wm, "H").contributions} == {
        "RA",
        "RB",
    }
    assert {c.rule_id for c in explain(wm, "K").contributions} == {"RK"}


def test_else_side_roles_attach_to_else_clause(sample_kb):
    wm = forward_chain(
        sample_kb,
        ev(("RE000020", "present", 0.6), ("RE000021", "present", 0.4)),
    )
    node = explain(wm, "Ot")
    (c,) = node.contributions
    assert c.rule_id == "R3"
    assert c.clause == "else"
    assert c.inferred_degree == pytest.approx(0.2 * 0.4)
    rh = explain(wm, "Rh")
    r3 = next(c for c in rh.contributions if c.rule_id == "R3")
    assert r3.clause == "then"
    assert r3.inferred_degree == pytest.approx(0.6 * 0.6)


# -- taxonomy walking


def test_expand_moves_to_superclass(e4_memory):
    ne = explain(e4_memory, "Ne")
    rh = expand(e4_memory, ne)
    assert rh.hypothesis == "Rh"
    assert rh == explain(e4_memory, "Rh")


def test_expand_at_root_raises(e4_memory):
    with pytest.raises(NoParentError):
        expand(e4_memory, explain(e4_memory, "Poly"))


def test_chain_depth(e4_memory):
    assert [n.hypothesis for n in explain_chain(e4_memory, "Ne")] == ["Ne"]
    assert [n.hypothesis for n in explain_chain(e4_memory, "Ne", 1)] == [
        "Ne",
        "Rh",
    ]
    assert [n.hypothesis for n in explain_chain(e4_memory, "Ne", 99)] == [
        "Ne",
        "Rh",
        "Poly",
    ]


# -- text rendering


def test_render_leaf_contribution(e4_memory):
    expected = "\n".join(
        [
            "The belief interval of seronegative rheumatoid arthritis"
            " is [0.560, 1.000]",
            "is based on",
            "(1) R1 and the observations that",
            "    latex agglutination test is negative",
            DEG + "with degree of belief = 1.000,",
            "and",
            "(2) the belief interval of rheumatoid arthritis"
            " is [0.560, 1.000].",
            "",
            "Do you want a further explanation of rheumatoid arthritis?"
            " (y or n)",
        ]
    )
    assert render_text(explain(e4_memory, "Ne")) == expected


def test_render_grouped_contribution(e4_memory):
    expected = "\n".join(
        [
            "The belief interval of rheumatoid arthritis is [0.560, 1.000]",
            "is based on",
            "(1) R4 and the observations that",
            "    (At least 5 of the following:",
            "      subcutaneous nodules over bone prominences is present",
            DEG + "with degree of belief = 1.000,",
            "      X-ray changes typical of rheumatoid arthritis is present",
            DEG + "with degree of belief = 0.700,",
            "      positive rheumatoid factor is present",
            DEG + "with degree of belief = 1.000,",
            "      poor mucin precipitate from synovial fluid is present",
            DEG + "with degree of belief = 1.000,",
            "      characteristic histologic changes in synovial membrane"
            " is present",
            DEG + "with degree of belief = 1.000,",
            "    )",
            "    infers that the degree of belief in rheumatoid arthritis"
            " is 0.560,",
            "and",
            "(2) the belief interval of unspecified polyarthritis"
            " is [1.000, 1.000].",
            "",
            "Do you want a further explanation of unspecified polyarthritis?"
            " (y or n)",
        ]
    )
    assert render_text(explain(e4_memory, "Rh")) == expected


def test_render_root_without_contributions(e4_memory):
    expected = "\n".join(
        [
            "The belief interval of unspecified polyarthritis"
            " is [1.000, 1.000]",
            "is based on",
            "    no recorded rule contributions.",
        ]
    )
    assert render_text(explain(e4_memory, "Poly")) == expected


def test_render_ends_items_with_period():
    kb = wire_text(ORDERING_KB)
    wm = forward_chain(kb, ev(("E1", "present", 1.0)))
    text = render_text(explain(wm, "H"))
    body = text.split("\n\nDo you want")[0]
    assert body.endswith(".")
    assert "is 0.400." in body  # comma promoted on the final line


# -- structured form


def test_node_to_dict_shape(e4_memory):
    d = node_to_dict(explain(e4_memory, "Ne"))
    assert d["hypothesis"] == "Ne"
    assert d["interval"] == {
        "bel": pytest.approx(0.56, abs=1e-9),
        "pl": pytest.approx(1.0),
    }
    (c,) = d["contributions"]
    assert c["rule"] == "R1"
    assert c["effect"] == "supportive"
    assert c["clause"] == "then"
    (obs,) = c["observations"]
    assert obs["text"] == "latex agglutination test is negative"
    assert obs["children"] == []
    assert d["parent"]["hypothesis"] == "Rh"


def test_node_to_dict_root_parent_is_null(e4_memory):
    assert node_to_dict(explain(e4_memory, "Poly"))["parent"] is None


def test_node_to_dict_nested_observations(e4_memory):
    d = node_to_dict(explain(e4_memory, "Rh"))
    (group,) = d["contributions"][0]["observations"]
    assert group["degree"] == pytest.approx(0.7)  # the order statistic
    assert len(group["children"]) == 5
    assert group["children"][1]["degree"] == pytest.approx(0.7)
