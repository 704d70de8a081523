"""Append-only session log and clinician report.

One JSON object per line, schema-versioned, UTF-8. The log is the unit of
determinism: two runs with the same configuration and inputs must produce
byte-identical files, and a closed log is sufficient to rebuild the
report and to replay-verify the feedback rules.

Gaze samples are down-sampled to 4 Hz by the session runner before they
reach the log (full rate behind a config flag); reports contain only
aggregates, never raw gaze.
"""

from __future__ import annotations

import enum
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

from .errors import LogCorruptionError, ValidationError

SCHEMA_VERSION = 1


class RecordKind(enum.Enum):
    CONFIG_SNAPSHOT = "ConfigSnapshot"
    PHASE_START = "PhaseStart"
    GAZE_SAMPLE = "GazeSample"
    ATTENTION_EVENT = "AttentionEvent"
    KEYPRESS = "Keypress"
    TASK_PRESENTED = "TaskPresented"
    ANSWER_SUBMITTED = "AnswerSubmitted"
    ANSWER_RESULT = "AnswerResult"
    FEEDBACK = "Feedback"
    DISTRACTION = "Distraction"
    POINTS_UPDATE = "PointsUpdate"
    WARNING = "Warning"


@dataclass(frozen=True)
class EventLogRecord:
    seq: int
    t: int
    kind: RecordKind
    payload: dict

    def to_json_line(self) -> str:
        doc = {"seq": self.seq, "t": self.t, "kind": self.kind.value, "payload": self.payload}
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_line(cls, line: str) -> "EventLogRecord":
        try:
            doc = json.loads(line)
            return cls(seq=doc["seq"], t=doc["t"], kind=RecordKind(doc["kind"]),
                       payload=doc["payload"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise LogCorruptionError(f"unparseable log line: {exc}") from exc


class EventLog:
    """Validating appender. Refuses sequence gaps, time regressions, and a
    first record that is not a ConfigSnapshot; flushes per record when
    backed by a file."""

    def __init__(self, sink: IO[str] | None = None):
        self._sink = sink
        self.records: list[EventLogRecord] = []

    def append(self, record: EventLogRecord) -> EventLogRecord:
        expected_seq = len(self.records)
        if record.seq != expected_seq:
            raise LogCorruptionError(f"seq {record.seq} != expected {expected_seq}")
        if not self.records and record.kind is not RecordKind.CONFIG_SNAPSHOT:
            raise LogCorruptionError("first record must be a ConfigSnapshot")
        if self.records and record.t < self.records[-1].t:
            raise LogCorruptionError(
                f"time regression: {record.t} after {self.records[-1].t}")
        self.records.append(record)
        if self._sink is not None:
            self._sink.write(record.to_json_line() + "\n")
            self._sink.flush()
        return record

    def add(self, t: int, kind: RecordKind, payload: dict) -> EventLogRecord:
        return self.append(EventLogRecord(seq=len(self.records), t=t, kind=kind,
                                          payload=payload))


def read_log(source: str | Path | IO[str] | Iterable[str]) -> list[EventLogRecord]:
    """Parse and re-validate a line-delimited log; raises LogCorruptionError
    on any sequencing or format violation."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    elif isinstance(source, io.TextIOBase):
        lines = source.read().splitlines()
    else:
        lines = [line.rstrip("\n") for line in source]
    log = EventLog()
    for line in lines:
        if line.strip():
            log.append(EventLogRecord.from_json_line(line))
    return log.records


def log_path(data_dir: str | Path, child_id: str, session_id: int, seed: int) -> Path:
    return Path(data_dir) / child_id / f"{session_id}-{seed}.log"


@dataclass
class MinuteEntry:
    minute: int
    points: int
    attention: str


@dataclass
class SessionReport:
    child_id: str
    session_id: int
    final_points: int
    feedback_counts: dict[str, int]
    attention_ratio: float | None
    longest_attentive_streak_ms: int
    tasks_attempted: int
    tasks_correct: int
    timeline: list[MinuteEntry]
    complete: bool
    phases_seen: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "child_id": self.child_id,
            "session_id": self.session_id,
            "final_points": self.final_points,
            "feedback_counts": dict(sorted(self.feedback_counts.items())),
            "attention_ratio": self.attention_ratio,
            "longest_attentive_streak_ms": self.longest_attentive_streak_ms,
            "tasks_attempted": self.tasks_attempted,
            "tasks_correct": self.tasks_correct,
            "timeline": [
                {"minute": e.minute, "points": e.points, "attention": e.attention}
                for e in self.timeline
            ],
            "complete": self.complete,
            "phases_seen": self.phases_seen,
        }

    def to_text(self) -> str:
        ratio = "n/a" if self.attention_ratio is None else f"{self.attention_ratio:.1%}"
        lines = [
            f"Session report for child {self.child_id}, session {self.session_id}"
            + ("" if self.complete else " (PARTIAL)"),
            f"  final points:            {self.final_points}",
            f"  attention ratio:         {ratio}",
            f"  longest attentive span:  {self.longest_attentive_streak_ms / 1000:.0f} s",
            f"  tasks attempted/correct: {self.tasks_attempted}/{self.tasks_correct}",
            "  feedback:",
        ]
        for name, count in sorted(self.feedback_counts.items()):
            lines.append(f"    {name}: {count}")
        return "\n".join(lines) + "\n"


def _attention_intervals(records: list[EventLogRecord], end_t: int) -> list[tuple[int, int, str]]:
    """Reconstruct (start, end, state) spans from the logged transitions.
    Transition payloads carry the debounced start time of each state."""
    events = [(r.payload["t"], r.payload["state"]) for r in records
              if r.kind is RecordKind.ATTENTION_EVENT]
    if not events or events[0][0] > 0:
        events.insert(0, (0, "Attentive"))
    spans = []
    for i, (start, state) in enumerate(events):
        stop = events[i + 1][0] if i + 1 < len(events) else end_t
        if stop > start:
            spans.append((start, min(stop, end_t), state))
    return spans


def _overlap(a_start: int, a_end: int, b_start: int, b_end: int) -> int:
    return max(0, min(a_end, b_end) - max(a_start, b_start))


def build_report(records: list[EventLogRecord], allow_partial: bool = False) -> SessionReport:
    """Aggregate a session log into a clinician report. Pure function of
    the log. Aggregates are computed over trial phases only."""
    if not records or records[0].kind is not RecordKind.CONFIG_SNAPSHOT:
        raise LogCorruptionError("log has no ConfigSnapshot")
    snapshot = records[0].payload
    config = snapshot["config"]
    phases_seen = [r.payload["phase"] for r in records if r.kind is RecordKind.PHASE_START]
    complete = "goodbye" in phases_seen
    if not complete and not allow_partial:
        raise ValidationError({"log": "incomplete log; goodbye phase missing "
                                      "(pass allow_partial for aborted sessions)"})

    planned_end = snapshot["script"]["end"]
    observed_end = records[-1].t
    end_t = planned_end if complete else min(planned_end, observed_end)

    trial_windows = []
    for phase in snapshot["script"]["phases"]:
        if phase["phase"] == "trial":
            start = phase["start"]
            stop = min(start + phase["duration_ms"], end_t)
            if stop > start:
                trial_windows.append((start, stop))
    total_trial_ms = sum(stop - start for start, stop in trial_windows)

    spans = _attention_intervals(records, end_t)
    attentive_ms = sum(
        _overlap(s, e, ws, we)
        for s, e, state in spans if state == "Attentive"
        for ws, we in trial_windows
    )
    longest = 0
    for s, e, state in spans:
        if state != "Attentive":
            continue
        in_trial = sum(_overlap(s, e, ws, we) for ws, we in trial_windows)
        longest = max(longest, in_trial)

    ratio = attentive_ms / total_trial_ms if total_trial_ms > 0 else None

    counts: Counter[str] = Counter()
    final_points = 0
    for record in records:
        if record.kind is RecordKind.FEEDBACK:
            counts[record.payload["class"]] += 1
        elif record.kind is RecordKind.POINTS_UPDATE:
            final_points = record.payload["balance"]

    attempted_ids = {r.payload["task_id"] for r in records
                     if r.kind is RecordKind.ANSWER_SUBMITTED}
    correct = sum(1 for r in records
                  if r.kind is RecordKind.ANSWER_RESULT and r.payload["result"] == "Correct")

    timeline = _minute_timeline(records, spans, end_t)

    return SessionReport(
        child_id=config["child_id"],
        session_id=config["session_id"],
        final_points=final_points,
        feedback_counts=dict(counts),
        attention_ratio=ratio,
        longest_attentive_streak_ms=longest,
        tasks_attempted=len(attempted_ids),
        tasks_correct=correct,
        timeline=timeline,
        complete=complete,
        phases_seen=phases_seen,
    )


def _minute_timeline(records: list[EventLogRecord],
                     spans: list[tuple[int, int, str]], end_t: int) -> list[MinuteEntry]:
    points_changes = [(r.t, r.payload["balance"]) for r in records
                      if r.kind is RecordKind.POINTS_UPDATE]
    entries = []
    for minute in range(1, end_t // 60_000 + 1):
        at = minute * 60_000
        balance = 0
        for t, value in points_changes:
            if t <= at:
                balance = value
            else:
                break
        state = "Attentive"
        for start, stop, span_state in spans:
            if start <= at:
                state = span_state
            else:
                break
        entries.append(MinuteEntry(minute=minute, points=balance, attention=state))
    return entries


def reconcile_points(records: list[EventLogRecord]) -> int:
    """Replay PointsUpdate deltas through the configured floor rule;
    equals the report's final_points for a consistent log."""
    floor = records[0].payload["policy"].get("floor_at_zero", True)
    balance = 0
    for record in records:
        if record.kind is RecordKind.POINTS_UPDATE:
            balance += record.payload["delta"]
            if floor and balance < 0:
                balance = 0
    return balance
