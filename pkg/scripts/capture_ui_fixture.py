#!/usr/bin/env python3
"""Capture wire-message fixtures for the UI contract tests.

Runs real sessions through the service layer and dumps every streamed
message to frontend/tests/fixtures/. Regenerate after protocol changes:

    python3 scripts/capture_ui_fixture.py
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from focustrainer.service import create_app

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

BASE_CONFIG = {
    "child_name": "Mia", "age": 9, "child_id": "fixture", "session_id": 1,
    "seed": 7, "degree_of_distraction": 0,
    "trial_duration_ms": 8000, "break_duration_ms": 1000,
}


def capture_plain_session(client: TestClient) -> list[dict]:
    token = client.post("/sessions", json=BASE_CONFIG).json()["token"]
    messages = []
    with client.websocket_connect(f"/sessions/{token}/stream") as ws:
        ws.send_json({"type": "start"})
        answered = False
        while True:
            message = ws.receive_json()
            messages.append(message)
            if message["type"] == "task" and not answered:
                answered = True
                ws.send_json({"type": "keypress"})
                ws.send_json({"type": "answer", "body": {"value": "correct"}})
            if message["type"] == "session_end":
                return messages


def capture_toggle_roundtrip(client: TestClient) -> list[dict]:
    config = {**BASE_CONFIG, "trial_duration_ms": 30_000, "seed": 11}
    token = client.post("/sessions", json=config).json()["token"]
    messages = []
    with client.websocket_connect(f"/sessions/{token}/stream") as ws:
        ws.send_json({"type": "start"})
        toggled_back = False
        while True:
            message = ws.receive_json()
            messages.append(message)
            if message["type"] == "phase" and message["body"]["phase"] == "trial" \
                    and message["body"]["index"] == 1:
                ws.send_json({"type": "attention_toggle", "body": {"attentive": False}})
            if message["type"] == "feedback" \
                    and message["body"]["class"] == "criticize" and not toggled_back:
                toggled_back = True
                ws.send_json({"type": "attention_toggle", "body": {"attentive": True}})
            if message["type"] == "session_end":
                return messages


def main() -> int:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(data_dir=Path(tmp), time_scale=200.0)
        with TestClient(app) as client:
            plain = capture_plain_session(client)
            toggled = capture_toggle_roundtrip(client)

    classes = [m["body"]["class"] for m in toggled if m["type"] == "feedback"]
    assert "criticize" in classes and "praise_after_reattention" in classes, classes
    assert classes.index("criticize") < classes.index("praise_after_reattention")

    (FIXTURE_DIR / "session.json").write_text(json.dumps(plain, indent=1) + "\n")
    (FIXTURE_DIR / "toggle_roundtrip.json").write_text(json.dumps(toggled, indent=1) + "\n")
    print(f"wrote {len(plain)} + {len(toggled)} messages to {FIXTURE_DIR}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
