"""KB language: parsing, diagnostics, and the serialize round trip."""

import json
from pathlib import Path

import pytest

from credence import lang

FIXTURES = Path(__file__).resolve().parent / "fixtures"
KB_DIR = Path(__file__).resolve().parent.parent / "kb"

MINIMAL = """gertis-kb 1

frame F "a frame" { elements: a, b, c ; prior: 0.5, 0.25, 0.25 ; }
frame G "signal" { elements: present, absent ; }

hypothesis H "h text" in F = (or a b) ;
hypothesis Root "root" in F = (or H c) ;

rule R1 {
  consequent: F ;
  if: (and (G) (not (G absent))) ;
  except: (G absent) ;
  then: H : 0.7, c : 0.2 ;
  else: (not H) : 0.1 ;
  t-role: supportive H ;
  nil-role: adversary Root ;
}
"""


def test_minimal_kb_parses_clean():
    result = lang.parse_kb(MINIMAL, "minimal.gkb")
    assert result.ok, [str(d) for d in result.diagnostics]
    frame, g, hyp, root, rule = result.declarations
    assert frame.elements == ("a", "b", "c")
    assert frame.prior == (0.5, 0.25, 0.25)
    assert g.prior is None
    assert hyp.members == lang.SetOr((lang.SetAtom("a"), lang.SetAtom("b")))
    assert root.parent is None
    assert rule.if_expr == lang.And(
        (lang.Atom("G", "present"), lang.Not(lang.Atom("G", "absent")))
    )
    assert rule.then_clauses[0].prob == 0.7
    assert rule.t_role == lang.Role("supportive", "H")
    assert rule.nil_role == lang.Role("adversary", "Root")


def test_atom_value_defaults_to_present():
    result = lang.parse_kb(MINIMAL)
    rule = result.declarations[-1]
    atom = rule.if_expr.items[0]
    assert atom == lang.Atom("G", "present")


def test_spans_are_one_based():
    result = lang.parse_kb(MINIMAL, "minimal.gkb")
    frame = result.declarations[0]
    assert frame.span.line == 3
    assert frame.span.column == 1
    assert frame.span.file == "minimal.gkb"


def test_round_trip_is_structurally_exact():
    first = lang.parse_kb(MINIMAL)
    assert first.ok
    text = lang.serialize_kb(first.declarations)
    second = lang.parse_kb(text)
    assert second.ok, [str(d) for d in second.diagnostics]
    assert second.declarations == first.declarations


def test_round_trip_sample_kb():
    source = (KB_DIR / "polyarthritis.gkb").read_text()
    first = lang.parse_kb(source)
    assert first.ok
    second = lang.parse_kb(lang.serialize_kb(first.declarations))
    assert second.declarations == first.declarations


def test_probabilities_survive_reserialization_bit_exactly():
    text = "gertis-kb 1\nframe F \"f\" { elements: a, b ; prior: 0.1, 0.9 ; }\n"
    decls = lang.parse_kb(text).declarations
    twice = lang.parse_kb(lang.serialize_kb(decls)).declarations
    assert twice[0].prior == decls[0].prior  # == is bitwise on floats


def test_recovery_reports_multiple_errors():
    bad = """gertis-kb 1

frame F { elements: a ; }
frame G "g" { elements: b, ; }
hypothesis H "h" in F = a ;
"""
    result = lang.parse_kb(bad)
    assert len(result.diagnostics) >= 2
    # the well-formed trailing declaration still lands
    assert any(
        isinstance(d, lang.HypothesisDecl) for d in result.declarations
    )


def test_comments_and_blank_lines_ignored():
    text = "gertis-kb 1\n# comment\n\nframe F \"f\" { elements: a ; } # tail\n"
    result = lang.parse_kb(text)
    assert result.ok
    assert result.declarations[0].id == "F"


@pytest.mark.parametrize(
    "name", sorted(json.loads((FIXTURES / "malformed" / "manifest.json").read_text()))
)
def test_malformed_inputs_diagnose_at_expected_position(name):
    manifest = json.loads((FIXTURES / "malformed" / "manifest.json").read_text())
    expected = manifest[name]
    source = (FIXTURES / "malformed" / name).read_text()
    result = lang.parse_kb(source, name)
    assert result.diagnostics, f"{name}: expected a diagnostic"
    hits = [
        d
        for d in result.diagnostics
        if d.span.line == expected["line"]
        and d.span.column == expected["column"]
        and expected["contains"] in d.message
    ]
    assert hits, (
        f"{name}: wanted {expected} in "
        f"{[(d.span.line, d.span.column, d.message) for d in result.diagnostics]}"
    )


def test_parse_determinism():
    a = lang.parse_kb(MINIMAL)
    b = lang.parse_kb(MINIMAL)
    assert a.declarations == b.declarations
    assert [str(d) for d in a.diagnostics] == [str(d) for d in b.diagnostics]


# -- evidence files


def test_evidence_basics():
    text = "# record\nG present 0.75\nF a\n"
    result = lang.parse_evidence(text, "ev")
    assert result.ok
    assert result.assignment.as_dict() == {
        ("G", "present"): 0.75,
        ("F", "a"): 1.0,
    }


def test_evidence_degree_range_checked():
    result = lang.parse_evidence("G present 1.5\n")
    assert not result.ok
    assert "out of range" in result.diagnostics[0].message


def test_evidence_duplicate_rejected():
    result = lang.parse_evidence("G present 0.5\nG present 0.7\n")
    assert len(result.diagnostics) == 1
    assert "duplicate" in result.diagnostics[0].message
    assert result.assignment.as_dict() == {("G", "present"): 0.5}


def test_evidence_malformed_line():
    result = lang.parse_evidence("justoneword\n")
    assert not result.ok
    assert result.diagnostics[0].span.line == 1


def test_assignment_with_change():
    base = lang.parse_evidence("G present 0.5\n").assignment
    changed = base.with_change("G", "present", 0.9)
    assert changed.as_dict() == {("G", "present"): 0.9}
    removed = changed.with_change("G", "present", None)
    assert removed.as_dict() == {}
    added = removed.with_change("F", "a", 1.0)
    assert added.as_dict() == {("F", "a"): 1.0}
