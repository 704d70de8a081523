import time

import pytest
from fastapi.testclient import TestClient

from focustrainer.eventlog import build_report, read_log
from focustrainer.service import create_app

BASE_CONFIG = {
    "child_name": "Mia", "age": 9, "child_id": "kid1", "session_id": 1,
    "seed": 7, "degree_of_distraction": 0,
    "trial_duration_ms": 5000, "break_duration_ms": 1000,
}


@pytest.fixture
def client(tmp_path):
    app = create_app(data_dir=tmp_path / "data", time_scale=400.0,
                     disconnect_grace_s=0.25)
    with TestClient(app) as test_client:
        test_client.data_dir = tmp_path / "data"
        yield test_client


def create_session(client, **overrides):
    response = client.post("/sessions", json={**BASE_CONFIG, **overrides})
    assert response.status_code == 200, response.text
    return response.json()["token"]


def wait_for_state(client, token, state, timeout=10.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        current = client.get(f"/sessions/{token}").json()["state"]
        if current == state:
            return
        time.sleep(0.01)
    raise AssertionError(f"session never reached {state}")


def collect_stream(ws):
    messages = []
    while True:
        message = ws.receive_json()
        messages.append(message)
        if message["type"] == "session_end":
            return messages


class TestLifecycle:
    def test_create_returns_created_handle(self, client):
        response = client.post("/sessions", json=BASE_CONFIG)
        assert response.status_code == 200
        body = response.json()
        assert body["state"] == "Created" and body["token"]

    def test_invalid_config_names_fields(self, client):
        response = client.post("/sessions", json={**BASE_CONFIG, "age": 25})
        assert response.status_code == 422
        assert "age" in response.json()["errors"]

    def test_duplicate_child_sessions_get_distinct_handles(self, client):
        first = create_session(client)
        second = create_session(client)
        assert first != second

    def test_report_not_ready_while_created_or_running(self, client):
        token = create_session(client)
        assert client.get(f"/sessions/{token}/report").status_code == 409
        client.post(f"/sessions/{token}/start")
        assert client.get(f"/sessions/{token}/report").status_code == 409

    def test_wrong_state_transitions_rejected(self, client):
        token = create_session(client)
        assert client.post(f"/sessions/{token}/abort").status_code == 409
        assert client.post(f"/sessions/{token}/start").status_code == 200
        assert client.post(f"/sessions/{token}/start").status_code == 409

    def test_unknown_token_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.post("/sessions/nope/start").status_code == 404

    def test_health(self, client):
        assert client.get("/health").json()["status"] == "ok"


class TestFullSession:
    def test_runs_to_finished_and_streams_mirror_of_log(self, client):
        token = create_session(client)
        client.post(f"/sessions/{token}/start")
        wait_for_state(client, token, "Finished")

        with client.websocket_connect(f"/sessions/{token}/stream") as ws:
            messages = collect_stream(ws)

        phases = [m["body"]["phase"] for m in messages if m["type"] == "phase"]
        assert phases == ["intro", "trial", "break", "trial", "goodbye"]
        assert messages[-1]["body"]["state"] == "Finished"

        # mirror property: the points stream reconstructs the log's balances
        log_file = next((client.data_dir / "kid1").glob("*.log"))
        records = read_log(log_file)
        logged = [r.payload["balance"] for r in records
                  if r.kind.value == "PointsUpdate"]
        streamed = [m["body"]["balance"] for m in messages if m["type"] == "points"]
        assert streamed == logged

        report = client.get(f"/sessions/{token}/report")
        assert report.status_code == 200
        assert report.json() == build_report(records).to_dict()

    def test_session_end_carries_final_points(self, client):
        token = create_session(client)
        client.post(f"/sessions/{token}/start")
        wait_for_state(client, token, "Finished")
        with client.websocket_connect(f"/sessions/{token}/stream") as ws:
            messages = collect_stream(ws)
        points = [m["body"]["balance"] for m in messages if m["type"] == "points"]
        assert messages[-1]["body"]["final_points"] == (points[-1] if points else 0)


class TestInteraction:
    def test_toggle_off_then_on_shows_criticize_then_reattention(self, client):
        token = create_session(client, trial_duration_ms=30_000, seed=11)
        with client.websocket_connect(f"/sessions/{token}/stream") as ws:
            ws.send_json({"type": "start"})
            saw_criticize = False
            captions = []
            while True:
                message = ws.receive_json()
                if message["type"] == "phase" and message["body"]["phase"] == "trial" \
                        and message["body"]["index"] == 1:
                    ws.send_json({"type": "attention_toggle",
                                  "body": {"attentive": False}})
                if message["type"] == "feedback":
                    captions.append(message["body"]["class"])
                    if message["body"]["class"] == "criticize" and not saw_criticize:
                        saw_criticize = True
                        ws.send_json({"type": "attention_toggle",
                                      "body": {"attentive": True}})
                if message["type"] == "session_end":
                    break
        assert "criticize" in captions
        assert "praise_after_reattention" in captions
        assert captions.index("criticize") < captions.index("praise_after_reattention")

    def test_offscreen_gaze_samples_trigger_criticism(self, client):
        token = create_session(client, trial_duration_ms=30_000,
                               monitor={"hysteresis_ms": 500})
        client.post(f"/sessions/{token}/start")
        classes = []
        with client.websocket_connect(f"/sessions/{token}/stream") as ws:
            for _ in range(220):
                ws.send_json({"type": "attention_sample",
                              "body": {"face_present": True, "yaw": 60.0, "pitch": 0.0}})
                time.sleep(0.002)
            while True:
                message = ws.receive_json()
                if message["type"] == "feedback":
                    classes.append(message["body"]["class"])
                if message["type"] == "session_end":
                    break
        assert "criticize" in classes

    def test_answers_flow_through_engine(self, client):
        token = create_session(client, trial_duration_ms=20_000)
        results = []
        with client.websocket_connect(f"/sessions/{token}/stream") as ws:
            ws.send_json({"type": "start"})
            answered = False
            while True:
                message = ws.receive_json()
                if message["type"] == "task" and not answered:
                    answered = True
                    ws.send_json({"type": "keypress"})
                    ws.send_json({"type": "answer", "body": {"value": "correct"}})
                if message["type"] == "answer_result":
                    results.append(message["body"])
                if message["type"] == "session_end":
                    break
        assert results and results[0]["correct"] is True
        assert results[0]["sound"] == "positive"

    def test_unknown_message_type_gets_error_not_crash(self, client):
        token = create_session(client)
        with client.websocket_connect(f"/sessions/{token}/stream") as ws:
            ws.send_json({"type": "start"})
            ws.send_json({"type": "teleport", "body": {}})
            while True:
                message = ws.receive_json()
                if message["type"] == "error":
                    assert "teleport" in message["body"]["message"]
                    break
        assert client.get(f"/sessions/{token}").status_code == 200


class TestAbort:
    def test_abort_yields_partial_report(self, client):
        token = create_session(client, trial_duration_ms=600_000)
        client.post(f"/sessions/{token}/start")
        time.sleep(0.05)
        response = client.post(f"/sessions/{token}/abort")
        assert response.status_code == 200
        assert response.json()["state"] == "Aborted"
        report = client.get(f"/sessions/{token}/report")
        assert report.status_code == 200
        assert report.json()["complete"] is False

    def test_disconnect_pauses_then_auto_aborts(self, client):
        token = create_session(client, trial_duration_ms=600_000)
        with client.websocket_connect(f"/sessions/{token}/stream") as ws:
            ws.send_json({"type": "start"})
            ws.receive_json()
        wait_for_state(client, token, "Aborted", timeout=15.0)

    def test_report_disabled_by_config(self, client):
        token = create_session(client, report_enabled=False)
        client.post(f"/sessions/{token}/start")
        wait_for_state(client, token, "Finished")
        assert client.get(f"/sessions/{token}/report").status_code == 403


class TestIsolation:
    def test_streams_do_not_cross_sessions(self, client):
        token_a = create_session(client, child_id="kidA")
        token_b = create_session(client, child_id="kidB", seed=99)
        client.post(f"/sessions/{token_a}/start")
        client.post(f"/sessions/{token_b}/start")
        wait_for_state(client, token_a, "Finished")
        wait_for_state(client, token_b, "Finished")
        with client.websocket_connect(f"/sessions/{token_a}/stream") as ws:
            messages = collect_stream(ws)
        assert all(m["session"] == token_a for m in messages)

    def test_resume_by_last_seq(self, client):
        token = create_session(client)
        client.post(f"/sessions/{token}/start")
        wait_for_state(client, token, "Finished")
        with client.websocket_connect(f"/sessions/{token}/stream") as ws:
            messages = collect_stream(ws)
        cut = messages[len(messages) // 2]
        with client.websocket_connect(
                f"/sessions/{token}/stream?since_seq={cut['seq']}") as ws:
            resumed = collect_stream(ws)
        assert all(m["seq"] > cut["seq"] for m in resumed)
        assert resumed[-1]["type"] == "session_end"
