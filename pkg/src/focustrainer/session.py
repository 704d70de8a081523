"""Session planning and the deterministic event loop.

A session is Intro, Trial 1, Break, Trial 2 (with scheduled agent
distractions), Goodbye. All timing runs on a logical millisecond clock
with a fixed tick interval; external inputs (gaze samples or pre-debounced
attention events, keypresses, answers) are merged with scripted events and
ticks into one total order, so a session is a pure function of
(configuration, input stream) and two runs produce byte-identical logs.

Tie order at one instant: scripted events, then attention, then
keypresses/answers, then the tick.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .engine import (
    FeedbackAction,
    FirstKeypress,
    PolicyParams,
    RctEngine,
    TaskExplained,
    Tick,
)
from .errors import RejectedInputError, SessionStateError, ValidationError
from .eventlog import SCHEMA_VERSION, EventLog, EventLogRecord, RecordKind
from .monitor import (
    AttentionEvent,
    AttentionMonitor,
    AttentionState,
    GazeSample,
    ScreenGeometry,
)
from .phrases import DEFAULT_PHRASES
from .rng import RandomStreams
from .tasks import TaskGenerator, TaskSession, band_for_age

INTRO_DURATION_MS = 15_000
GOODBYE_DURATION_MS = 10_000
DEFAULT_TRIAL_MS = 300_000
DEFAULT_BREAK_MS = 60_000
DEFAULT_TICK_MS = 250

DISTRACTION_MARGIN_MS = 30_000      # distractions keep clear of trial edges
DISTRACTION_MIN_GAP_MS = 60_000
CRITICISM_SUPPRESSION_MS = 5_000    # agent provoked the look-away; do not punish it
DEGREE_TO_DISTRACTIONS = {0: 0, 1: 1, 2: 2, 3: 4}

_CHILD_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

_MONITOR_FIELDS = {"hysteresis_ms", "noface_grace_ms"}
_POLICY_FIELDS = set(PolicyParams().__dict__)
_SCREEN_FIELDS = {"yaw_min", "yaw_max", "pitch_min", "pitch_max", "keyboard_pitch_min"}


@dataclass
class SessionConfig:
    """Clinician-set parameters driving all adaptation."""

    child_name: str
    age: int
    child_id: str
    session_id: int
    seed: int
    degree_of_distraction: int = 2
    trial_duration_ms: int = DEFAULT_TRIAL_MS
    break_duration_ms: int = DEFAULT_BREAK_MS
    tick_interval_ms: int = DEFAULT_TICK_MS
    policy: dict = field(default_factory=dict)
    monitor: dict = field(default_factory=dict)
    screen: dict = field(default_factory=dict)
    phrases: dict | None = None
    report_enabled: bool = True
    log_full_gaze: bool = False

    def validate(self) -> None:
        problems: dict[str, str] = {}
        if not isinstance(self.child_name, str) or not self.child_name.strip():
            problems["child_name"] = "must be a non-empty string"
        if not isinstance(self.age, int) or not 6 <= self.age <= 17:
            problems["age"] = "must be an integer in 6..17"
        if not isinstance(self.child_id, str) or not _CHILD_ID_RE.match(self.child_id or ""):
            problems["child_id"] = "must match [A-Za-z0-9][A-Za-z0-9._-]*"
        if not isinstance(self.session_id, int) or self.session_id < 1:
            problems["session_id"] = "must be an integer >= 1"
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            problems["seed"] = "must be an unsigned 64-bit integer"
        if self.degree_of_distraction not in DEGREE_TO_DISTRACTIONS:
            problems["degree_of_distraction"] = "must be an integer in 0..3"
        for name in ("trial_duration_ms", "break_duration_ms", "tick_interval_ms"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                problems[name] = "must be a positive integer"
        for name, allowed in (("policy", _POLICY_FIELDS), ("monitor", _MONITOR_FIELDS),
                              ("screen", _SCREEN_FIELDS)):
            unknown = set(getattr(self, name) or {}) - allowed
            if unknown:
                problems[name] = f"unknown fields: {', '.join(sorted(unknown))}"
        if problems:
            raise ValidationError(problems)
        self.resolved_policy()

    def resolved_policy(self) -> PolicyParams:
        params = PolicyParams().replace(**(self.policy or {}))
        return params

    def merged_phrases(self) -> dict[str, list[str]]:
        merged = {key: list(values) for key, values in DEFAULT_PHRASES.items()}
        for key, values in (self.phrases or {}).items():
            merged[key] = list(values)
        return merged

    def to_dict(self) -> dict:
        return {
            "child_name": self.child_name,
            "age": self.age,
            "child_id": self.child_id,
            "session_id": self.session_id,
            "seed": self.seed,
            "degree_of_distraction": self.degree_of_distraction,
            "trial_duration_ms": self.trial_duration_ms,
            "break_duration_ms": self.break_duration_ms,
            "tick_interval_ms": self.tick_interval_ms,
            "policy": dict(self.policy or {}),
            "monitor": dict(self.monitor or {}),
            "screen": dict(self.screen or {}),
            "phrases": self.phrases,
            "report_enabled": self.report_enabled,
            "log_full_gaze": self.log_full_gaze,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SessionConfig":
        if not isinstance(doc, dict):
            raise ValidationError({"config": "must be an object"})
        known = {f for f in cls.__dataclass_fields__}  # noqa: C416
        unknown = set(doc) - known
        missing = {"child_name", "age", "child_id", "session_id", "seed"} - set(doc)
        problems = {}
        if unknown:
            problems["config"] = f"unknown fields: {', '.join(sorted(unknown))}"
        for name in sorted(missing):
            problems[name] = "required"
        if problems:
            raise ValidationError(problems)
        config = cls(**doc)
        config.validate()
        return config


def fade_params(base: PolicyParams, session_id: int) -> PolicyParams:
    """Feedback fading across sessions: the praise interval grows 25% of
    the base per session, capped at two minutes. Session 1 is the base."""
    if session_id < 1:
        raise ValidationError({"session_id": "must be >= 1"})
    interval = min(base.praise_interval_ms * (session_id + 3) // 4, 120_000)
    return replace(base, praise_interval_ms=interval)


@dataclass(frozen=True)
class DistractionEvent:
    t: int          # offset within the trial
    phrase: str


@dataclass
class Phase:
    name: str       # intro | trial | break | goodbye
    index: int      # trial number, 0 otherwise
    start: int
    duration_ms: int
    utterances: list[str] = field(default_factory=list)
    distractions: list[DistractionEvent] = field(default_factory=list)

    @property
    def end(self) -> int:
        return self.start + self.duration_ms

    def contains(self, t: int) -> bool:
        return self.start <= t < self.end


@dataclass
class SessionScript:
    phases: list[Phase]

    @property
    def end(self) -> int:
        return self.phases[-1].end

    def validate(self) -> None:
        if not self.phases:
            raise ValidationError({"script": "must contain at least one phase"})
        cursor = 0
        for phase in self.phases:
            if phase.start != cursor:
                raise ValidationError(
                    {"script": f"phase {phase.name} starts at {phase.start}, expected {cursor}"})
            if phase.duration_ms <= 0:
                raise ValidationError({"script": f"phase {phase.name} has no duration"})
            for d in phase.distractions:
                if not DISTRACTION_MARGIN_MS <= d.t <= phase.duration_ms - DISTRACTION_MARGIN_MS:
                    raise ValidationError({"script": "distraction outside allowed window"})
            cursor = phase.end

    def phase_at(self, t: int) -> Phase | None:
        for phase in self.phases:
            if phase.contains(t):
                return phase
        return None

    def to_payload(self) -> dict:
        return {
            "end": self.end,
            "phases": [
                {
                    "phase": p.name,
                    "index": p.index,
                    "start": p.start,
                    "duration_ms": p.duration_ms,
                    "utterances": list(p.utterances),
                    "distractions": [{"t": d.t, "phrase": d.phrase} for d in p.distractions],
                }
                for p in self.phases
            ],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "SessionScript":
        phases = [
            Phase(
                name=p["phase"], index=p["index"], start=p["start"],
                duration_ms=p["duration_ms"], utterances=list(p["utterances"]),
                distractions=[DistractionEvent(t=d["t"], phrase=d["phrase"])
                              for d in p["distractions"]],
            )
            for p in payload["phases"]
        ]
        script = cls(phases=phases)
        script.validate()
        return script


def _draw_distraction_times(rng, count: int, trial_ms: int) -> list[int]:
    """Sample ``count`` times in [margin, trial-margin] with pairwise gaps
    of at least the minimum, uniformly over the feasible set: draw offsets
    into the slack, sort, then re-add the mandatory gaps."""
    if count == 0:
        return []
    window = trial_ms - 2 * DISTRACTION_MARGIN_MS
    slack = window - (count - 1) * DISTRACTION_MIN_GAP_MS
    if slack < 0:
        raise ValidationError({
            "degree_of_distraction": f"{count} distractions do not fit a "
                                     f"{trial_ms} ms trial"})
    offsets = sorted(rng.random() * slack for _ in range(count))
    return [DISTRACTION_MARGIN_MS + int(round(offset)) + i * DISTRACTION_MIN_GAP_MS
            for i, offset in enumerate(offsets)]


def _substitute(utterances: list[str], child_name: str) -> list[str]:
    return [u.replace("<NAME>", child_name) for u in utterances]


def plan_session(config: SessionConfig) -> SessionScript:
    """Build the standard two-trial script. Trial 1 is clean; trial 2
    carries the distractions the configured degree asks for."""
    config.validate()
    streams = RandomStreams(config.seed)
    inventories = config.merged_phrases()

    count = DEGREE_TO_DISTRACTIONS[config.degree_of_distraction]
    times = _draw_distraction_times(streams.stream("distraction-times"), count,
                                    config.trial_duration_ms)
    phrase_rng = streams.stream("distraction-phrases")
    pool = inventories["distraction"]
    distractions = [
        DistractionEvent(t=t, phrase=pool[phrase_rng.randrange(len(pool))])
        for t in times
    ]

    name = config.child_name
    cursor = 0
    phases = []
    for phase_name, index, duration, utter_key, events in (
        ("intro", 0, INTRO_DURATION_MS, "intro", []),
        ("trial", 1, config.trial_duration_ms, None, []),
        ("break", 0, config.break_duration_ms, "break", []),
        ("trial", 2, config.trial_duration_ms, None, distractions),
        ("goodbye", 0, GOODBYE_DURATION_MS, "goodbye", []),
    ):
        utterances = _substitute(inventories[utter_key], name) if utter_key else []
        phases.append(Phase(name=phase_name, index=index, start=cursor,
                            duration_ms=duration, utterances=utterances,
                            distractions=list(events)))
        cursor += duration
    script = SessionScript(phases=phases)
    script.validate()
    return script


# -- external inputs ---------------------------------------------------------

RANK_SCRIPTED = 0
RANK_ATTENTION = 1
RANK_KEYPRESS = 2
RANK_TICK = 3


@dataclass(frozen=True)
class GazeInput:
    t: int
    face_present: bool
    yaw: float
    pitch: float


@dataclass(frozen=True)
class AttentionInput:
    """A pre-debounced transition (external detector or manual toggle).
    ``event_t`` backdates when the state began to hold; defaults to ``t``."""

    t: int
    state: AttentionState
    event_t: int | None = None


@dataclass(frozen=True)
class KeypressInput:
    t: int


@dataclass(frozen=True)
class AnswerInput:
    t: int
    value: int | str    # "correct" submits the active task's exact answer


ExternalInput = GazeInput | AttentionInput | KeypressInput | AnswerInput


def _input_rank(item: ExternalInput) -> int:
    if isinstance(item, (GazeInput, AttentionInput)):
        return RANK_ATTENTION
    return RANK_KEYPRESS


class SessionRunner:
    """Single-writer event loop for one session.

    The runner owns the scripted timeline (phase starts, distractions,
    ticks) and interleaves external inputs submitted in non-decreasing
    order. Everything it does is appended to the event log.
    """

    def __init__(self, config: SessionConfig, script: SessionScript | None = None,
                 sink=None):
        config.validate()
        self.config = config
        self.script = script if script is not None else plan_session(config)
        self.script.validate()
        self.policy = fade_params(config.resolved_policy(), config.session_id)
        streams = RandomStreams(config.seed)
        self.engine = RctEngine(
            self.policy, config.child_name,
            short_praise_rng=streams.stream("short-praise"),
            phrase_rng=streams.stream("phrases"),
            phrases=config.merged_phrases(),
        )
        self.engine.active = False      # intro comes first
        self.monitor = AttentionMonitor(**{
            "hysteresis_ms": config.monitor.get("hysteresis_ms", 1000),
            "noface_grace_ms": config.monitor.get("noface_grace_ms", 2000),
        })
        self.screen = ScreenGeometry(**(config.screen or {}))
        self.tasks = TaskSession(TaskGenerator(band_for_age(config.age),
                                               streams.stream("tasks")))
        self.log = EventLog(sink)

        self._timeline = self._build_timeline()
        self._pointer = 0
        self._frontier: tuple[int, int] = (0, -1)
        self._phase: Phase | None = None
        self._keypress_seen = False
        self._last_gaze_log_t: int | None = None
        self._started = False
        self._finished = False
        self._aborted = False

    # -- timeline -------------------------------------------------------------

    def _build_timeline(self) -> list[tuple[int, int, int, tuple]]:
        items: list[tuple] = []
        for phase in self.script.phases:
            items.append((phase.start, RANK_SCRIPTED, ("phase", phase)))
            if phase.name == "trial" and phase.index == 1:
                items.append((phase.start, RANK_SCRIPTED, ("task_explained",)))
            for d in phase.distractions:
                items.append((phase.start + d.t, RANK_SCRIPTED, ("distraction", d, phase)))
        tick = self.config.tick_interval_ms
        items.extend((t, RANK_TICK, ("tick",))
                     for t in range(0, self.script.end + 1, tick))
        return sorted(
            ((t, rank, order, payload) for order, (t, rank, payload) in enumerate(items)),
            key=lambda item: (item[0], item[1], item[2]),
        )

    @property
    def now(self) -> int:
        return self._frontier[0]

    @property
    def finished(self) -> bool:
        return self._finished

    @property
    def aborted(self) -> bool:
        return self._aborted

    @property
    def closed(self) -> bool:
        return self._finished or self._aborted

    def in_trial(self, t: int) -> bool:
        return self._phase is not None and self._phase.name == "trial" \
            and self._phase.contains(t)

    def live_stamp(self, rank: int) -> int:
        """Logical time at which a freshly arrived external input can still
        be admitted: just past the frontier when ticks at the current
        instant (or same-instant later-ranked inputs) were already run."""
        t, processed_rank = self._frontier
        if processed_rank >= rank:
            return min(t + 1, self.script.end)
        return t

    # -- lifecycle ------------------------------------------------------------

    def begin(self) -> list[EventLogRecord]:
        if self._started:
            raise SessionStateError("session already started")
        self._started = True
        first = len(self.log.records)
        self.log.add(0, RecordKind.CONFIG_SNAPSHOT, {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "policy": dict(self.policy.__dict__),
            "script": self.script.to_payload(),
        })
        self._drain_until(0, RANK_ATTENTION)
        # The session starts with the child present and attentive.
        self.log.add(0, RecordKind.ATTENTION_EVENT, {"t": 0, "state": "Attentive"})
        return self.log.records[first:]

    def finish(self) -> list[EventLogRecord]:
        self._require_open()
        first = len(self.log.records)
        self._drain_until(self.script.end, RANK_TICK + 1)
        self._frontier = (self.script.end, RANK_TICK)
        self._finished = True
        return self.log.records[first:]

    def abort(self, t: int | None = None) -> list[EventLogRecord]:
        self._require_open()
        at = max(self.now if t is None else t, self.now)
        first = len(self.log.records)
        self._drain_until(at, RANK_TICK + 1)
        self._frontier = (at, RANK_TICK)
        self.log.add(at, RecordKind.WARNING, {"reason": "aborted"})
        self._aborted = True
        return self.log.records[first:]

    def advance_to(self, t: int) -> list[EventLogRecord]:
        """Process scripted events and ticks up to and including logical
        time ``t``; marks the session finished at the script's end."""
        self._require_open()
        target = min(t, self.script.end)
        first = len(self.log.records)
        self._drain_until(target, RANK_TICK + 1)
        self._frontier = max(self._frontier, (target, RANK_TICK))
        if target >= self.script.end:
            self._finished = True
        return self.log.records[first:]

    def _require_open(self) -> None:
        if not self._started:
            raise SessionStateError("session not started")
        if self.closed:
            raise SessionStateError("session already closed")

    # -- internal event execution ----------------------------------------------

    def _drain_until(self, t: int, rank: int) -> None:
        while self._pointer < len(self._timeline):
            it, irank, _, payload = self._timeline[self._pointer]
            if (it, irank) >= (t, rank):
                break
            self._pointer += 1
            self._frontier = (it, irank)
            self._execute(it, payload)

    def _execute(self, t: int, payload: tuple) -> None:
        kind = payload[0]
        if kind == "phase":
            phase: Phase = payload[1]
            self._phase = phase
            self.log.add(t, RecordKind.PHASE_START, {
                "phase": phase.name, "index": phase.index,
                "duration_ms": phase.duration_ms,
                "utterances": list(phase.utterances),
            })
            if phase.name == "trial":
                self.engine.begin_trial(t)
                task = self.tasks.present()
                self.log.add(t, RecordKind.TASK_PRESENTED, task.to_payload())
            else:
                self.engine.end_trial()
        elif kind == "task_explained":
            self._step_engine(TaskExplained(t))
        elif kind == "distraction":
            event: DistractionEvent = payload[1]
            phase: Phase = payload[2]
            self.log.add(t, RecordKind.DISTRACTION, {
                "phrase": event.phrase, "expression": "MakingFaces",
                "trial": phase.index, "offset_ms": event.t,
            })
            self.engine.suppress_criticism(t, t + CRITICISM_SUPPRESSION_MS)
        elif kind == "tick":
            if self.in_trial(t):
                self._step_engine(Tick(t))

    def _step_engine(self, event, delivered_t: int | None = None) -> None:
        before = self.engine.balance
        actions = self.engine.step(event, delivered_t)
        balance = before
        for action in actions:
            self.log.add(action.t, RecordKind.FEEDBACK, action.to_payload())
            balance += action.point_delta
            if self.engine.ledger.floor_at_zero and balance < 0:
                balance = 0
            self.log.add(action.t, RecordKind.POINTS_UPDATE, {
                "balance": balance, "delta": action.point_delta,
                "class": action.feedback_class.value,
            })

    # -- external inputs ---------------------------------------------------------

    def _admit(self, t: int, rank: int, what: str) -> bool:
        """Order-check an external input and advance the scripted timeline
        to its slot. Late or out-of-range inputs are logged and dropped."""
        self._require_open()
        if t > self.script.end:
            self.log.add(self.now, RecordKind.WARNING,
                         {"reason": "input_after_session_end", "input": what, "input_t": t})
            return False
        if (t, rank) < self._frontier:
            self.log.add(self._frontier[0], RecordKind.WARNING,
                         {"reason": "out_of_order_input", "input": what, "input_t": t})
            return False
        self._drain_until(t, rank)
        self._frontier = (t, rank)
        return True

    def submit_gaze(self, gaze: GazeInput) -> list[EventLogRecord]:
        first = len(self.log.records)
        if not self._admit(gaze.t, RANK_ATTENTION, "gaze"):
            return self.log.records[first:]
        sample = GazeSample(t=gaze.t, face_present=gaze.face_present,
                            gaze_yaw=gaze.yaw, gaze_pitch=gaze.pitch)
        try:
            sample.validate()
        except ValidationError as exc:
            self.log.add(gaze.t, RecordKind.WARNING,
                         {"reason": "rejected_input", "detail": str(exc)})
            return self.log.records[first:]
        if (self.config.log_full_gaze or self._last_gaze_log_t is None
                or gaze.t - self._last_gaze_log_t >= 250):
            self.log.add(gaze.t, RecordKind.GAZE_SAMPLE, {
                "face": gaze.face_present, "yaw": gaze.yaw, "pitch": gaze.pitch,
            })
            self._last_gaze_log_t = gaze.t
        event = self.monitor.step_sample(sample, self.screen)
        if event is not None:
            self._apply_attention(event, delivered_t=gaze.t)
        return self.log.records[first:]

    def submit_attention(self, inp: AttentionInput) -> list[EventLogRecord]:
        first = len(self.log.records)
        if not self._admit(inp.t, RANK_ATTENTION, "attention"):
            return self.log.records[first:]
        if inp.state is self.monitor.current:
            return self.log.records[first:]     # no transition, drop quietly
        self.monitor.force_state(inp.state)
        event_t = inp.event_t if inp.event_t is not None else inp.t
        self._apply_attention(AttentionEvent(t=event_t, state=inp.state),
                              delivered_t=inp.t)
        return self.log.records[first:]

    def _apply_attention(self, event: AttentionEvent, delivered_t: int) -> None:
        self.log.add(delivered_t, RecordKind.ATTENTION_EVENT,
                     {"t": event.t, "state": event.state.value})
        self._step_engine(event, delivered_t=delivered_t)

    def submit_keypress(self, inp: KeypressInput) -> list[EventLogRecord]:
        first = len(self.log.records)
        if not self._admit(inp.t, RANK_KEYPRESS, "keypress"):
            return self.log.records[first:]
        if self._keypress_seen or not self.in_trial(inp.t):
            return self.log.records[first:]
        self._keypress_seen = True
        self.log.add(inp.t, RecordKind.KEYPRESS, {"first": True})
        self._step_engine(FirstKeypress(inp.t))
        return self.log.records[first:]

    def submit_answer(self, inp: AnswerInput) -> list[EventLogRecord]:
        first = len(self.log.records)
        if not self._admit(inp.t, RANK_KEYPRESS, "answer"):
            return self.log.records[first:]
        if not self.in_trial(inp.t):
            self.log.add(inp.t, RecordKind.WARNING,
                         {"reason": "answer_outside_trial", "input_t": inp.t})
            return self.log.records[first:]
        value = inp.value
        if value == "correct":
            value = self.tasks.present().answer
        if isinstance(value, bool) or not isinstance(value, int):
            self.log.add(inp.t, RecordKind.WARNING,
                         {"reason": "rejected_input", "detail": "answer must be an integer"})
            return self.log.records[first:]
        task, result = self.tasks.submit(value)
        self.log.add(inp.t, RecordKind.ANSWER_SUBMITTED,
                     {"task_id": task.id, "value": value})
        self.log.add(inp.t, RecordKind.ANSWER_RESULT, {
            "task_id": task.id, "result": result.value, "sound": result.sound_cue,
        })
        if self.tasks.current is None or self.tasks.current.id != task.id:
            new_task = self.tasks.present()
            self.log.add(inp.t, RecordKind.TASK_PRESENTED, new_task.to_payload())
        return self.log.records[first:]


def run_session(config: SessionConfig, script: SessionScript | None = None,
                inputs: list[ExternalInput] = (), sink=None) -> list[EventLogRecord]:
    """Run a whole session in batch: merge the inputs with the scripted
    timeline in total order and return the complete log."""
    runner = SessionRunner(config, script, sink=sink)
    runner.begin()
    ordered = sorted(
        ((item.t, _input_rank(item), i, item) for i, item in enumerate(inputs)),
        key=lambda entry: entry[:3],
    )
    for _, _, _, item in ordered:
        if isinstance(item, GazeInput):
            runner.submit_gaze(item)
        elif isinstance(item, AttentionInput):
            runner.submit_attention(item)
        elif isinstance(item, KeypressInput):
            runner.submit_keypress(item)
        elif isinstance(item, AnswerInput):
            runner.submit_answer(item)
        else:
            raise RejectedInputError(f"unknown input {type(item).__name__}")
    runner.finish()
    return runner.log.records


# -- replay verification -------------------------------------------------------

_REPLAY_KINDS = {
    RecordKind.CONFIG_SNAPSHOT,
    RecordKind.PHASE_START,
    RecordKind.ATTENTION_EVENT,
    RecordKind.KEYPRESS,
    RecordKind.TASK_PRESENTED,
    RecordKind.ANSWER_SUBMITTED,
    RecordKind.ANSWER_RESULT,
    RecordKind.FEEDBACK,
    RecordKind.DISTRACTION,
    RecordKind.POINTS_UPDATE,
}


def inputs_from_records(records: list[EventLogRecord]) -> list[ExternalInput]:
    inputs: list[ExternalInput] = []
    for record in records:
        if record.kind is RecordKind.ATTENTION_EVENT:
            inputs.append(AttentionInput(
                t=record.t, state=AttentionState(record.payload["state"]),
                event_t=record.payload["t"]))
        elif record.kind is RecordKind.KEYPRESS:
            inputs.append(KeypressInput(t=record.t))
        elif record.kind is RecordKind.ANSWER_SUBMITTED:
            inputs.append(AnswerInput(t=record.t, value=record.payload["value"]))
    return inputs


def replay_verify(records: list[EventLogRecord]) -> tuple[bool, int | None]:
    """Re-run the engine on a log's recorded inputs and compare every
    engine-relevant record. Returns (ok, first divergent seq)."""
    if not records or records[0].kind is not RecordKind.CONFIG_SNAPSHOT:
        raise ValidationError({"log": "missing ConfigSnapshot"})
    snapshot = records[0].payload
    config = SessionConfig.from_dict(snapshot["config"])
    script = SessionScript.from_payload(snapshot["script"])
    inputs = inputs_from_records(records)
    abort_t = next((r.t for r in records
                    if r.kind is RecordKind.WARNING and r.payload.get("reason") == "aborted"),
                   None)

    if abort_t is None:
        replayed = run_session(config, script, inputs)
    else:
        runner = SessionRunner(config, script)
        runner.begin()
        ordered = sorted(((i.t, _input_rank(i), n, i) for n, i in enumerate(inputs)),
                         key=lambda entry: entry[:3])
        for _, _, _, item in ordered:
            if isinstance(item, AttentionInput):
                runner.submit_attention(item)
            elif isinstance(item, KeypressInput):
                runner.submit_keypress(item)
            elif isinstance(item, AnswerInput):
                runner.submit_answer(item)
        runner.abort(abort_t)
        replayed = runner.log.records

    original = [r for r in records if r.kind in _REPLAY_KINDS]
    fresh = [r for r in replayed if r.kind in _REPLAY_KINDS]
    for i, orig in enumerate(original):
        if i >= len(fresh):
            return False, orig.seq
        got = fresh[i]
        if (orig.t, orig.kind, orig.payload) != (got.t, got.kind, got.payload):
            return False, orig.seq
    if len(fresh) > len(original):
        return False, records[-1].seq + 1
    return True, None
