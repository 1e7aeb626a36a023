"""HTTP consultation service endpoints."""

import time

import pytest
from fastapi.testclient import TestClient

from credence import lang, wire
from credence.service import create_app

from conftest import FIXTURES


R1_ENTRIES = [{"frame": "RE000042", "element": "negative", "degree": 1.0}]

E4_ENTRIES = [
    {"frame": "RE000042", "element": "negative", "degree": 1.0},
    {"frame": "RE000011", "element": "present", "degree": 1.0},
    {"frame": "RE000012", "element": "present", "degree": 0.7},
    {"frame": "RE000013", "element": "present", "degree": 1.0},
    {"frame": "RE000014", "element": "present", "degree": 1.0},
    {"frame": "RE000015", "element": "present", "degree": 1.0},
]


@pytest.fixture(scope="module")
def latex_client(latex_kb):
    with TestClient(create_app(latex_kb)) as client:
        yield client


@pytest.fixture(scope="module")
def poly_client(sample_kb):
    with TestClient(create_app(sample_kb)) as client:
        yield client


def new_session(client) -> str:
    response = client.post("/sessions")
    assert response.status_code == 201
    return response.json()["session_id"]


# -- session lifecycle


def test_create_session(latex_client):
    response = latex_client.post("/sessions")
    assert response.status_code == 201
    body = response.json()
    assert body["kb_id"] == "latex_screen"
    assert len(body["session_id"]) == 32


def test_sessions_are_independent(latex_client):
    first, second = new_session(latex_client), new_session(latex_client)
    latex_client.put(
        f"/sessions/{first}/evidence", json={"entries": R1_ENTRIES}
    )
    response = latex_client.get(f"/sessions/{second}/diagnoses")
    assert response.json() == {"diagnoses": []}


def test_unknown_session_404(latex_client):
    for method, url, kwargs in (
        ("get", "/sessions/deadbeef/diagnoses", {}),
        ("put", "/sessions/deadbeef/evidence", {"json": {"entries": []}}),
        ("get", "/sessions/deadbeef/explanations/SN", {}),
        ("post", "/sessions/deadbeef/whatif", {"json": {"entries": []}}),
    ):
        response = getattr(latex_client, method)(url, **kwargs)
        assert response.status_code == 404, url


def test_sessions_expire_after_idle_ttl(latex_kb):
    with TestClient(create_app(latex_kb, session_ttl=0.0)) as client:
        sid = new_session(client)
        time.sleep(0.01)
        assert client.get(f"/sessions/{sid}/diagnoses").status_code == 404


def test_fresh_session_has_no_diagnoses(latex_client):
    sid = new_session(latex_client)
    assert latex_client.get(f"/sessions/{sid}/diagnoses").json() == {
        "diagnoses": []
    }


# -- evidence and diagnoses


def test_single_rule_kb_reaches_full_belief(latex_client):
    sid = new_session(latex_client)
    response = latex_client.put(
        f"/sessions/{sid}/evidence", json={"entries": R1_ENTRIES}
    )
    assert response.status_code == 200
    rows = response.json()["diagnoses"]
    by_name = {r["hypothesis"]: r for r in rows}
    assert by_name["SN"]["interval"] == {"bel": 1.0, "pl": 1.0}
    assert by_name["SN"]["text"] == "seronegative rheumatoid arthritis"


def test_degree_defaults_to_one(latex_client):
    sid = new_session(latex_client)
    response = latex_client.put(
        f"/sessions/{sid}/evidence",
        json={"entries": [{"frame": "RE000042", "element": "negative"}]},
    )
    rows = response.json()["diagnoses"]
    assert {r["hypothesis"] for r in rows} == {"All", "SN"}


def test_put_replaces_rather_than_merges(poly_client):
    sid = new_session(poly_client)
    poly_client.put(f"/sessions/{sid}/evidence", json={"entries": E4_ENTRIES})
    response = poly_client.put(
        f"/sessions/{sid}/evidence",
        json={
            "entries": [
                {"frame": "RE000022", "element": "present", "degree": 1.0}
            ]
        },
    )
    rows = response.json()["diagnoses"]
    by_name = {r["hypothesis"]: r for r in rows}
    # only the chained inflammation path remains
    assert by_name["Rh"]["interval"]["bel"] == pytest.approx(0.36)
    assert "Ne" not in by_name


def test_diagnoses_match_put_result(poly_client):
    sid = new_session(poly_client)
    put_rows = poly_client.put(
        f"/sessions/{sid}/evidence", json={"entries": E4_ENTRIES}
    ).json()["diagnoses"]
    get_rows = poly_client.get(f"/sessions/{sid}/diagnoses").json()[
        "diagnoses"
    ]
    assert put_rows == get_rows
    assert [r["hypothesis"] for r in get_rows] == ["Poly", "Ne", "Rh"]
    assert get_rows[1]["interval"]["bel"] == pytest.approx(0.56, abs=1e-9)


# -- evidence validation


def test_invalid_evidence_reports_each_entry(latex_client):
    sid = new_session(latex_client)
    response = latex_client.put(
        f"/sessions/{sid}/evidence",
        json={
            "entries": [
                {"frame": "RE000042", "element": "negative"},
                {"frame": "NOPE", "element": "x"},
                {"frame": "RE000042", "element": "sideways"},
                {"frame": "RE000042", "element": "negative", "degree": 1.5},
            ]
        },
    )
    assert response.status_code == 422
    problems = response.json()["detail"]
    assert [p["index"] for p in problems] == [1, 2, 3]
    assert "unknown frame 'NOPE'" in problems[0]["error"]
    assert "no element 'sideways'" in problems[1]["error"]
    assert "degree 1.5 not in [0, 1]" in problems[2]["error"]


def test_invalid_evidence_leaves_session_untouched(latex_client):
    sid = new_session(latex_client)
    latex_client.put(f"/sessions/{sid}/evidence", json={"entries": R1_ENTRIES})
    latex_client.put(
        f"/sessions/{sid}/evidence",
        json={"entries": [{"frame": "NOPE", "element": "x"}]},
    )
    rows = latex_client.get(f"/sessions/{sid}/diagnoses").json()["diagnoses"]
    assert {r["hypothesis"] for r in rows} == {"All", "SN"}


def test_total_conflict_names_the_rule():
    text = (FIXTURES / "latex_screen.gkb").read_text()
    text += """
rule R2 {
  consequent: DX000001 ;
  if: (RE000042 negative) ;
  then: (not SN) : 1.0 ;
}
"""
    result = lang.parse_kb(text)
    assert result.ok
    kb = wire(result.declarations, kb_id="conflict")
    with TestClient(create_app(kb)) as client:
        sid = new_session(client)
        response = client.put(
            f"/sessions/{sid}/evidence", json={"entries": R1_ENTRIES}
        )
        assert response.status_code == 409
        assert response.json()["detail"]["rule"] == "R2"


# -- explanations


def test_explanation_chain_depth(poly_client):
    sid = new_session(poly_client)
    poly_client.put(f"/sessions/{sid}/evidence", json={"entries": E4_ENTRIES})
    response = poly_client.get(f"/sessions/{sid}/explanations/Ne?depth=1")
    assert response.status_code == 200
    nodes = response.json()["nodes"]
    assert [n["hypothesis"] for n in nodes] == ["Ne", "Rh"]
    assert nodes[0]["contributions"][0]["rule"] == "R1"
    assert nodes[0]["interval"]["bel"] == pytest.approx(0.56, abs=1e-9)
    assert nodes[1]["contributions"][0]["rule"] == "R4"

    default_depth = poly_client.get(f"/sessions/{sid}/explanations/Ne")
    assert [n["hypothesis"] for n in default_depth.json()["nodes"]] == ["Ne"]


def test_unknown_hypothesis_404(poly_client):
    sid = new_session(poly_client)
    response = poly_client.get(f"/sessions/{sid}/explanations/Ghost")
    assert response.status_code == 404


# -- whatif


def test_whatif_does_not_mutate_the_session(poly_client):
    sid = new_session(poly_client)
    poly_client.put(f"/sessions/{sid}/evidence", json={"entries": E4_ENTRIES})
    before = poly_client.get(f"/sessions/{sid}/diagnoses").json()

    response = poly_client.post(
        f"/sessions/{sid}/whatif",
        json={
            "entries": [
                {"frame": "RE000007", "element": "present", "degree": 1.0}
            ]
        },
    )
    assert response.status_code == 200
    tentative = response.json()["diagnoses"]
    assert {r["hypothesis"] for r in tentative} == {"Poly", "Rh"}

    after = poly_client.get(f"/sessions/{sid}/diagnoses").json()
    assert after == before


def test_whatif_same_evidence_has_zero_deltas(poly_client):
    sid = new_session(poly_client)
    poly_client.put(f"/sessions/{sid}/evidence", json={"entries": E4_ENTRIES})
    response = poly_client.post(
        f"/sessions/{sid}/whatif", json={"entries": E4_ENTRIES}
    )
    deltas = response.json()["deltas"]
    assert len(deltas) == len(
        poly_client.get("/kb/hypotheses").json()["hypotheses"]
    )
    for d in deltas:
        assert d["bel_delta"] == pytest.approx(0.0, abs=1e-12)
        assert d["pl_delta"] == pytest.approx(0.0, abs=1e-12)
        assert d["before"] == d["after"]


def test_whatif_reports_interval_movement(latex_client):
    sid = new_session(latex_client)
    response = latex_client.post(
        f"/sessions/{sid}/whatif", json={"entries": R1_ENTRIES}
    )
    deltas = {d["hypothesis"]: d for d in response.json()["deltas"]}
    sn = deltas["SN"]
    assert sn["before"] == {"bel": 0.0, "pl": 1.0}
    assert sn["after"] == {"bel": 1.0, "pl": 1.0}
    assert sn["bel_delta"] == pytest.approx(1.0)
    assert sn["pl_delta"] == pytest.approx(0.0)
    assert deltas["All"]["bel_delta"] == pytest.approx(1.0)


def test_whatif_validates_entries(latex_client):
    sid = new_session(latex_client)
    response = latex_client.post(
        f"/sessions/{sid}/whatif",
        json={"entries": [{"frame": "NOPE", "element": "x"}]},
    )
    assert response.status_code == 422


# -- KB browsing


def test_kb_frames_shape(poly_client):
    body = poly_client.get("/kb/frames").json()
    assert body["kb_id"] == "polyarthritis"
    frames = {f["id"]: f for f in body["frames"]}
    assert len(frames) == 12
    pd = frames["PD000001"]
    assert pd["consultation"] is True
    assert pd["inferred"] is True  # rules conclude into it
    assert len(pd["elements"]) == 19
    assert sum(pd["prior"]) == pytest.approx(1.0)
    infl = frames["IN000001"]
    assert infl["inferred"] is True
    assert infl["consultation"] is False
    latex = frames["RE000042"]
    assert latex["elements"] == ["positive", "negative"]
    assert latex["inferred"] is False
    assert latex["consultation"] is False


def test_kb_hypotheses_shape(poly_client):
    body = poly_client.get("/kb/hypotheses").json()
    by_name = {h["name"]: h for h in body["hypotheses"]}
    ne = by_name["Ne"]
    assert ne["frame"] == "PD000001"
    assert ne["members"]["code"] == 240
    assert ne["members"]["elements"] == ["ne_1", "ne_2", "ne_3", "ne_4"]
    assert ne["parent"] == "Rh"
    assert ne["subclasses"] == ["Ne1", "Ne2", "Ne3", "Ne4"]
    assert ne["b_rules"] == ["R1"]
    assert by_name["Poly"]["parent"] is None


def test_kb_rule_detail(poly_client):
    body = poly_client.get("/kb/rules/R3").json()
    assert body["consequent"] == "PD000001"
    assert body["if"] == "(RE000020)"
    assert body["except"] == "(RE000021)"
    (then_clause,) = body["then"]
    assert then_clause["prob"] == pytest.approx(0.6)
    assert then_clause["target"]["code"] == 2047
    (else_clause,) = body["else"]
    assert else_clause["prob"] == pytest.approx(0.2)
    assert body["t_role"] == {"effect": "supportive", "hypothesis": "Rh"}
    assert body["nil_role"] == {"effect": "supportive", "hypothesis": "Ot"}


def test_kb_rule_without_else_side(poly_client):
    body = poly_client.get("/kb/rules/R4").json()
    assert body["nil_role"] is None
    assert body["except"] is None
    assert body["else"] == []
    assert body["if"].startswith("(min 5 ")
    assert body["t_role"] == {"effect": "supportive", "hypothesis": "Rh"}


def test_unknown_rule_404(poly_client):
    assert poly_client.get("/kb/rules/R99").status_code == 404
