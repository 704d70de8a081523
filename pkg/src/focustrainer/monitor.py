"""Attention monitoring: gaze classification and debounced state transitions.

Raw gaze observations are noisy (detectors flicker, faces vanish when a
child looks down at the keyboard), so this module converts a stream of
``GazeSample`` into a sparse stream of ``AttentionEvent`` using a
geometric on-screen/keyboard cone plus a dwell-time debounce. Real
detectors plug in by producing ``GazeSample`` streams, or by bypassing the
classifier entirely with pre-debounced events.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import RejectedInputError, ValidationError


class RawAttention(enum.Enum):
    ON_TASK = "OnTask"
    OFF_TASK = "OffTask"
    NO_FACE = "NoFace"


class AttentionState(enum.Enum):
    ATTENTIVE = "Attentive"
    INATTENTIVE = "Inattentive"


@dataclass(frozen=True)
class GazeSample:
    """One gaze observation, timestamped in ms since session start."""

    t: int
    face_present: bool
    gaze_yaw: float
    gaze_pitch: float

    def validate(self) -> None:
        problems = {}
        for name in ("gaze_yaw", "gaze_pitch"):
            v = getattr(self, name)
            if not math.isfinite(v):
                problems[name] = "must be finite"
            elif not -90.0 <= v <= 90.0:
                problems[name] = "must be within [-90, 90] degrees"
        if self.t < 0:
            problems["t"] = "must be >= 0"
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class ScreenGeometry:
    """On-screen gaze cone plus the keyboard band below it.

    Looking at the keyboard counts as on-task: the child is working, not
    distracted, even though the face detector often loses the face there.
    """

    yaw_min: float = -20.0
    yaw_max: float = 20.0
    pitch_min: float = -15.0
    pitch_max: float = 15.0
    keyboard_pitch_min: float = -40.0

    def __post_init__(self):
        problems = {}
        if not self.yaw_min < self.yaw_max:
            problems["yaw_min"] = "yaw_min must be < yaw_max"
        if not self.pitch_min < self.pitch_max:
            problems["pitch_min"] = "pitch_min must be < pitch_max"
        if not self.keyboard_pitch_min <= self.pitch_min:
            problems["keyboard_pitch_min"] = "must be <= pitch_min"
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class AttentionEvent:
    """A debounced transition. ``t`` is when the new state began to hold."""

    t: int
    state: AttentionState


def classify_gaze(sample: GazeSample, screen: ScreenGeometry) -> RawAttention:
    """Classify one gaze sample. Total and pure: every sample maps to
    exactly one of OnTask, OffTask, NoFace."""
    if not sample.face_present:
        return RawAttention.NO_FACE
    yaw_ok = screen.yaw_min <= sample.gaze_yaw <= screen.yaw_max
    on_screen = yaw_ok and screen.pitch_min <= sample.gaze_pitch <= screen.pitch_max
    on_keyboard = yaw_ok and screen.keyboard_pitch_min <= sample.gaze_pitch < screen.pitch_min
    if on_screen or on_keyboard:
        return RawAttention.ON_TASK
    return RawAttention.OFF_TASK


DEFAULT_HYSTERESIS_MS = 1000
DEFAULT_NOFACE_GRACE_MS = 2000


@dataclass
class AttentionMonitor:
    """Debounces raw attention into alternating Attentive/Inattentive events.

    A candidate state must persist ``hysteresis_ms`` before it is emitted;
    the emitted event is backdated to when the candidate began. NoFace is
    treated as absence of evidence for the first ``noface_grace_ms``
    (the previous raw evidence keeps holding) and only then starts an
    Inattentive candidate of its own.

    The session starts with the child present, so ``current`` begins
    Attentive; the first event a monitor can emit is Inattentive.
    """

    hysteresis_ms: int = DEFAULT_HYSTERESIS_MS
    noface_grace_ms: int = DEFAULT_NOFACE_GRACE_MS
    current: AttentionState = AttentionState.ATTENTIVE
    candidate: AttentionState | None = field(default=None, repr=False)
    candidate_since: int = field(default=0, repr=False)
    _noface_since: int | None = field(default=None, repr=False)
    _last_target: AttentionState = field(default=AttentionState.ATTENTIVE, repr=False)
    _last_t: int = field(default=-1, repr=False)

    def __post_init__(self):
        if self.hysteresis_ms <= 0:
            raise ValidationError({"hysteresis_ms": "must be > 0"})
        if self.noface_grace_ms <= 0:
            raise ValidationError({"noface_grace_ms": "must be > 0"})

    def step(self, raw: RawAttention, t: int) -> AttentionEvent | None:
        """Advance the debouncer with one raw observation at time ``t``.

        Returns the emitted transition, if any. ``t`` must be
        non-decreasing across calls.
        """
        if t < self._last_t:
            raise RejectedInputError(f"non-monotonic sample time {t} after {self._last_t}")
        self._last_t = t

        fresh_candidate_start = t
        if raw is RawAttention.NO_FACE:
            if self._noface_since is None:
                self._noface_since = t
            if t - self._noface_since >= self.noface_grace_ms:
                target = AttentionState.INATTENTIVE
                # Evidence began when the grace expired, not at this sample.
                if self._last_target is not AttentionState.INATTENTIVE:
                    fresh_candidate_start = self._noface_since + self.noface_grace_ms
            else:
                target = self._last_target
        else:
            self._noface_since = None
            if raw is RawAttention.ON_TASK:
                target = AttentionState.ATTENTIVE
            else:
                target = AttentionState.INATTENTIVE

        self._last_target = target

        if target is self.current:
            self.candidate = None
            return None

        if self.candidate is not target:
            self.candidate = target
            self.candidate_since = fresh_candidate_start
        if t - self.candidate_since >= self.hysteresis_ms:
            event = AttentionEvent(t=self.candidate_since, state=target)
            self.current = target
            self.candidate = None
            return event
        return None

    def step_sample(self, sample: GazeSample, screen: ScreenGeometry) -> AttentionEvent | None:
        return self.step(classify_gaze(sample, screen), sample.t)

    def force_state(self, state: AttentionState) -> None:
        """Synchronize with an externally debounced transition (manual
        toggle or upstream detector); clears any pending candidate."""
        self.current = state
        self.candidate = None
        self._last_target = state
        self._noface_since = None
