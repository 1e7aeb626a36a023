"""HTTP consultation service.

Each session owns a working memory over the shared, immutable KB.
Evidence updates are full replacements (the client owns the evidence
panel), whatif runs the same computation against a throwaway copy and
reports interval deltas without touching the session, and explanation
endpoints return the structured form of the dialogue.  Sessions live in
memory and expire after an idle TTL; mutations on one session are
serialized by a per-session lock while distinct sessions run freely in
parallel.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import engine, model
from .explain import explain_chain, node_to_dict
from .errors import TotalConflictError, UnknownHypothesisError
from .focal import FocalSet
from .lang import EvidenceAssignment, EvidenceEntry, antecedent_text

DEFAULT_TTL_SECONDS = 1800.0


class EvidenceItem(BaseModel):
    frame: str
    element: str
    degree: float = Field(default=1.0)


class EvidenceBody(BaseModel):
    entries: list[EvidenceItem] = Field(default_factory=list)


@dataclass
class _Session:
    wm: engine.WorkingMemory
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)


def _interval_json(iv: engine.BeliefInterval) -> dict:
    return {"bel": iv.bel, "pl": iv.pl}


def _rows_json(wm: engine.WorkingMemory) -> list[dict]:
    return [
        {
            "hypothesis": hyp.name,
            "text": hyp.text,
            "interval": _interval_json(iv),
        }
        for hyp, iv in engine.all_diagnoses(wm)
    ]


def _focal_json(focal: FocalSet, frame: model.Frame) -> dict:
    return {
        "code": focal.code,
        "elements": sorted(frame.signature.decode(focal)),
    }


def create_app(
    kb: model.KnowledgeBase,
    settings: engine.EngineSettings | None = None,
    session_ttl: float = DEFAULT_TTL_SECONDS,
) -> FastAPI:
    settings = settings or engine.EngineSettings()
    app = FastAPI(title="credence consultation service")
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()
    empty_wm = engine.forward_chain(kb, EvidenceAssignment(), settings)

    def purge_expired(now: float) -> None:
        dead = [
            sid
            for sid, s in sessions.items()
            if now - s.last_used > session_ttl
        ]
        for sid in dead:
            del sessions[sid]

    def get_session(session_id: str) -> _Session:
        now = time.monotonic()
        with registry_lock:
            purge_expired(now)
            session = sessions.get(session_id)
            if session is None:
                raise HTTPException(404, f"no session {session_id}")
            session.last_used = now
            return session

    def validated_assignment(body: EvidenceBody) -> EvidenceAssignment:
        problems = []
        entries = []
        for i, item in enumerate(body.entries):
            frame = kb.frames.get(item.frame)
            if frame is None:
                problems.append(
                    {"index": i, "error": f"unknown frame {item.frame!r}"}
                )
                continue
            if item.element not in frame.elements:
                problems.append(
                    {
                        "index": i,
                        "error": (
                            f"frame {item.frame} has no element "
                            f"{item.element!r}"
                        ),
                    }
                )
                continue
            if not 0.0 <= item.degree <= 1.0:
                problems.append(
                    {
                        "index": i,
                        "error": f"degree {item.degree!r} not in [0, 1]",
                    }
                )
                continue
            entries.append(
                EvidenceEntry(item.frame, item.element, item.degree)
            )
        if problems:
            raise HTTPException(422, problems)
        return EvidenceAssignment(tuple(entries))

    def chain(assignment: EvidenceAssignment) -> engine.WorkingMemory:
        try:
            return engine.forward_chain(kb, assignment, settings)
        except TotalConflictError as exc:
            raise HTTPException(
                409, {"error": str(exc), "rule": exc.rule_id}
            ) from None

    @app.post("/sessions", status_code=201)
    def create_session() -> dict:
        session_id = secrets.token_hex(16)
        with registry_lock:
            purge_expired(time.monotonic())
            sessions[session_id] = _Session(empty_wm)
        return {"session_id": session_id, "kb_id": kb.id}

    @app.put("/sessions/{session_id}/evidence")
    def put_evidence(session_id: str, body: EvidenceBody) -> dict:
        session = get_session(session_id)
        assignment = validated_assignment(body)
        with session.lock:
            session.wm = chain(assignment)
            return {"diagnoses": _rows_json(session.wm)}

    @app.get("/sessions/{session_id}/diagnoses")
    def get_diagnoses(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return {"diagnoses": _rows_json(session.wm)}

    @app.get("/sessions/{session_id}/explanations/{hypothesis}")
    def get_explanation(
        session_id: str, hypothesis: str, depth: int = 0
    ) -> dict:
        session = get_session(session_id)
        with session.lock:
            try:
                nodes = explain_chain(session.wm, hypothesis, depth)
            except UnknownHypothesisError as exc:
                raise HTTPException(404, str(exc)) from None
            return {"nodes": [node_to_dict(n) for n in nodes]}

    @app.post("/sessions/{session_id}/whatif")
    def whatif(session_id: str, body: EvidenceBody) -> dict:
        session = get_session(session_id)
        assignment = validated_assignment(body)
        tentative = chain(assignment)
        with session.lock:
            current = session.wm
        deltas = []
        for hyp in kb.hypotheses.values():
            before = current.interval_of(hyp.name)
            after = tentative.interval_of(hyp.name)
            deltas.append(
                {
                    "hypothesis": hyp.name,
                    "text": hyp.text,
                    "before": _interval_json(before),
                    "after": _interval_json(after),
                    "bel_delta": after.bel - before.bel,
                    "pl_delta": after.pl - before.pl,
                }
            )
        return {"diagnoses": _rows_json(tentative), "deltas": deltas}

    @app.get("/kb/frames")
    def kb_frames() -> dict:
        inferred = set(kb.inferred_frames)
        consultation = set(kb.consultation_frames)
        return {
            "kb_id": kb.id,
            "frames": [
                {
                    "id": f.id,
                    "name": f.name,
                    "elements": list(f.elements),
                    "prior": list(f.prior),
                    "inferred": f.id in inferred,
                    "consultation": f.id in consultation,
                }
                for f in kb.frames.values()
            ],
        }

    @app.get("/kb/hypotheses")
    def kb_hypotheses() -> dict:
        return {
            "hypotheses": [
                {
                    "name": h.name,
                    "text": h.text,
                    "frame": h.frame_id,
                    "members": _focal_json(h.focal, kb.frames[h.frame_id]),
                    "parent": h.superclass,
                    "subclasses": list(h.subclasses),
                    "b_rules": list(h.b_rules),
                }
                for h in kb.hypotheses.values()
            ]
        }

    @app.get("/kb/rules/{rule_id}")
    def kb_rule(rule_id: str) -> dict:
        rule = kb.rules.get(rule_id)
        if rule is None:
            raise HTTPException(404, f"no rule {rule_id}")
        frame = kb.frames[rule.consequent]

        def clauses_json(clauses: tuple[model.ResolvedClause, ...]) -> list:
            return [
                {
                    "target": _focal_json(c.target, frame),
                    "prob": c.prob,
                    "text": c.text,
                }
                for c in clauses
            ]

        def role_json(role: model.RoleDescriptor | None) -> dict | None:
            if role is None:
                return None
            return {"effect": role.effect, "hypothesis": role.hypothesis}

        return {
            "id": rule.id,
            "consequent": rule.consequent,
            "if": antecedent_text(rule.if_expr),
            "except": (
                None
                if rule.except_expr is None
                else antecedent_text(rule.except_expr)
            ),
            "then": clauses_json(rule.then_clauses),
            "else": clauses_json(rule.else_clauses),
            "t_role": role_json(rule.t_role),
            "nil_role": role_json(rule.nil_role),
        }

    return app
