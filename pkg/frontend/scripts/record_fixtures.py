"""Record real service exchanges for the console's test stub.

Drives the consultation service in-process with a deterministic session
id and writes every request/response pair to tests/fixtures/recorded.json.
The vitest suite replays these through a fetch stub, so the UI tests
assert against genuine service output without a live server.

Run from this directory (the engine package must be installed):

    python scripts/record_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path
from unittest.mock import patch

from fastapi.testclient import TestClient

from credence import load_kb
from credence.service import create_app

HERE = Path(__file__).resolve().parent.parent
KB_PATH = HERE.parent / "tests" / "fixtures" / "latex_screen.gkb"
OUT_PATH = HERE / "tests" / "fixtures" / "recorded.json"

SESSION_ID = "f" * 32

R1_ENTRY = {"frame": "RE000042", "element": "negative", "degree": 1.0}
BAD_ENTRY = {"frame": "RE000042", "element": "sideways", "degree": 1.0}


def main() -> None:
    app = create_app(load_kb(KB_PATH))
    client = TestClient(app)
    recorded: list[dict] = []

    def exchange(method: str, path: str, body: dict | None = None) -> None:
        kwargs = {} if body is None else {"json": body}
        response = client.request(method, path, **kwargs)
        recorded.append(
            {
                "method": method,
                "path": path,
                "body": body,
                "status": response.status_code,
                "response": response.json(),
            }
        )

    with patch("secrets.token_hex", return_value=SESSION_ID):
        exchange("POST", "/sessions")

    # The console's happy path, in the order its tests replay it.
    exchange("GET", "/kb/frames")
    exchange("GET", f"/sessions/{SESSION_ID}/diagnoses")
    exchange(
        "PUT",
        f"/sessions/{SESSION_ID}/evidence",
        {"entries": [R1_ENTRY]},
    )
    exchange("GET", f"/sessions/{SESSION_ID}/explanations/SN?depth=0")
    exchange("GET", f"/sessions/{SESSION_ID}/explanations/All?depth=0")
    exchange(
        "POST",
        f"/sessions/{SESSION_ID}/whatif",
        {"entries": [R1_ENTRY]},
    )
    # Committing a previewed what-if replays the same evidence.
    exchange(
        "PUT",
        f"/sessions/{SESSION_ID}/evidence",
        {"entries": [R1_ENTRY]},
    )
    exchange("GET", f"/sessions/{SESSION_ID}/diagnoses")

    # Previews and error paths.
    exchange("POST", f"/sessions/{SESSION_ID}/whatif", {"entries": []})
    exchange(
        "POST",
        f"/sessions/{SESSION_ID}/whatif",
        {"entries": [BAD_ENTRY]},
    )
    exchange(
        "PUT",
        f"/sessions/{SESSION_ID}/evidence",
        {"entries": [BAD_ENTRY]},
    )
    exchange(
        "PUT",
        f"/sessions/{SESSION_ID}/evidence",
        {"entries": [R1_ENTRY, BAD_ENTRY]},
    )
    exchange("GET", f"/sessions/{SESSION_ID}/explanations/Ghost?depth=0")
    exchange(
        "PUT",
        f"/sessions/{SESSION_ID}/evidence",
        {"entries": [dict(R1_ENTRY, degree=0.0)]},
    )
    exchange("PUT", f"/sessions/{SESSION_ID}/evidence", {"entries": []})

    OUT_PATH.write_text(json.dumps(recorded, indent=2) + "\n")
    print(f"recorded {len(recorded)} exchanges -> {OUT_PATH}")


if __name__ == "__main__":
    main()
