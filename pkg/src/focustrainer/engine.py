"""Response-cost token feedback engine.

A deterministic state machine that consumes attention transitions, task
events and clock ticks, and emits timed praise/criticism with point
awards and deductions. Six feedback classes are supported:

* ``PraiseImmediateStart``: the child began typing quickly after the task
  was explained (+1, once per session).
* ``Praise`` / ``ShortPraise``: periodic reward for sustained attention
  (+1); the short form is mixed in with a configurable ratio.
* ``PraiseAfterReattention``: the child re-concentrated after being
  criticized (+1, closes the inattention episode).
* ``Criticize``: sustained inattention (-1, opens an episode).
* ``CriticizeAgain``: still inattentive 30 s after the last deduction (-1).

All timing is in logical milliseconds; all randomness comes from named
streams, so identical inputs plus an identical seed yield an identical
action sequence.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from .errors import ConfigurationError, RejectedInputError, ValidationError
from .monitor import AttentionEvent, AttentionState
from .phrases import DEFAULT_PHRASES

RECRITICIZE_INTERVAL_MS = 30_000


class FeedbackClass(enum.Enum):
    PRAISE_IMMEDIATE_START = "praise_immediate_start"
    PRAISE = "praise"
    SHORT_PRAISE = "short_praise"
    PRAISE_AFTER_REATTENTION = "praise_after_reattention"
    CRITICIZE = "criticize"
    CRITICIZE_AGAIN = "criticize_again"

    @property
    def is_praise(self) -> bool:
        return self not in (FeedbackClass.CRITICIZE, FeedbackClass.CRITICIZE_AGAIN)

    @property
    def point_delta(self) -> int:
        return 1 if self.is_praise else -1


class Expression(enum.Enum):
    SLIGHTLY_HAPPY = "SlightlyHappy"
    HAPPY = "Happy"
    DISAPPOINTED = "Disappointed"
    MAKING_FACES = "MakingFaces"


@dataclass(frozen=True)
class FeedbackAction:
    t: int
    feedback_class: FeedbackClass
    point_delta: int
    phrase: str
    expression: Expression

    def to_payload(self) -> dict:
        return {
            "class": self.feedback_class.value,
            "point_delta": self.point_delta,
            "phrase": self.phrase,
            "expression": self.expression.value,
        }


# Engine inputs besides AttentionEvent.


@dataclass(frozen=True)
class TaskExplained:
    t: int


@dataclass(frozen=True)
class FirstKeypress:
    t: int


@dataclass(frozen=True)
class Tick:
    t: int


EngineInput = AttentionEvent | TaskExplained | FirstKeypress | Tick


@dataclass
class PolicyParams:
    """Tunable feedback policy. ``recriticize_interval_ms`` is the one
    clinically fixed constant (a repeat deduction after 30 further seconds
    of inattention); the rest are session-level tunables."""

    praise_interval_ms: int = 45_000
    short_praise_ratio: float = 0.5
    start_window_ms: int = 10_000
    criticize_grace_ms: int = 2_000
    recriticize_interval_ms: int = RECRITICIZE_INTERVAL_MS
    floor_at_zero: bool = True

    def validate(self) -> None:
        problems = {}
        for name in ("praise_interval_ms", "start_window_ms", "criticize_grace_ms",
                     "recriticize_interval_ms"):
            if getattr(self, name) <= 0:
                problems[name] = "must be > 0"
        if not 0.0 <= self.short_praise_ratio <= 1.0:
            problems["short_praise_ratio"] = "must be within [0, 1]"
        if problems:
            raise ValidationError(problems)

    def replace(self, **overrides) -> "PolicyParams":
        merged = {**self.__dict__, **overrides}
        params = PolicyParams(**merged)
        params.validate()
        return params


@dataclass
class LedgerEntry:
    t: int
    delta: int
    feedback_class: FeedbackClass


@dataclass
class TokenLedger:
    """Point balance with full history. With ``floor_at_zero`` the balance
    never drops below zero but the attempted delta is still recorded."""

    floor_at_zero: bool = True
    balance: int = 0
    history: list[LedgerEntry] = field(default_factory=list)

    def apply(self, t: int, feedback_class: FeedbackClass, delta: int) -> int:
        if delta not in (1, -1):
            raise ValidationError({"delta": "must be +1 or -1"})
        self.history.append(LedgerEntry(t, delta, feedback_class))
        self.balance += delta
        if self.floor_at_zero and self.balance < 0:
            self.balance = 0
        return self.balance


class PhraseSelector:
    """Uniform phrase choice per feedback class, never repeating the
    previous template of a class when more than one is available."""

    def __init__(self, inventories: dict[str, list[str]], rng: random.Random):
        self._inventories = inventories
        self._rng = rng
        self._last_index: dict[str, int] = {}

    def select(self, key: str, child_name: str) -> str:
        inventory = self._inventories.get(key) or []
        if not inventory:
            raise ConfigurationError(f"empty phrase inventory for {key!r}")
        if len(inventory) == 1:
            index = 0
        else:
            choices = [i for i in range(len(inventory)) if i != self._last_index.get(key)]
            index = choices[self._rng.randrange(len(choices))]
        self._last_index[key] = index
        return inventory[index].replace("<NAME>", child_name)


def select_phrase(feedback_class: FeedbackClass, child_name: str,
                  selector: PhraseSelector) -> str:
    return selector.select(feedback_class.value, child_name)


class RctEngine:
    """The feedback state machine. One instance per session, fed a totally
    ordered input stream; shares nothing with other instances."""

    def __init__(self, params: PolicyParams, child_name: str,
                 short_praise_rng: random.Random, phrase_rng: random.Random,
                 phrases: dict[str, list[str]] | None = None):
        params.validate()
        self.params = params
        self.child_name = child_name
        self.ledger = TokenLedger(floor_at_zero=params.floor_at_zero)
        self._short_praise_rng = short_praise_rng
        self._phrases = PhraseSelector(phrases or DEFAULT_PHRASES, phrase_rng)

        self.attention = AttentionState.ATTENTIVE
        self.attention_since = 0
        self.criticized = False          # inside an episode that drew a Criticize
        self.last_criticism_t = 0
        self.last_periodic_praise_t = 0
        self.start_praised = False
        self.task_explained_t: int | None = None
        self.active = True               # orchestrator gates this per trial phase
        self._suppress_after_t: int | None = None
        self._suppress_until_t: int | None = None
        self._now = 0

    @property
    def balance(self) -> int:
        return self.ledger.balance

    # -- orchestration hooks ------------------------------------------------

    def begin_trial(self, t: int) -> None:
        """Open a trial phase: feedback becomes active, the periodic praise
        clock restarts, and inattention dwell from outside the trial does
        not count against the child."""
        self.active = True
        self.criticized = False
        self.last_periodic_praise_t = t
        self.attention_since = max(self.attention_since, t)

    def end_trial(self) -> None:
        self.active = False
        self.criticized = False

    def suppress_criticism(self, after_t: int, until_t: int) -> None:
        """No deductions with timestamp in (after_t, until_t]; used when the
        agent itself provoked the look-away."""
        self._suppress_after_t = after_t
        self._suppress_until_t = until_t

    def _criticism_suppressed(self, t: int) -> bool:
        if self._suppress_until_t is None:
            return False
        return self._suppress_after_t < t <= self._suppress_until_t

    # -- stepping -----------------------------------------------------------

    def step(self, event: EngineInput, delivered_t: int | None = None) -> list[FeedbackAction]:
        """Process one input; returns the feedback actions it triggered.

        Inputs must arrive in non-decreasing delivery order. Attention
        events are backdated to when the state began to hold, so their
        delivery time defaults to ``max(event.t, now)``.
        """
        if isinstance(event, AttentionEvent):
            t = delivered_t if delivered_t is not None else max(event.t, self._now)
        elif isinstance(event, (TaskExplained, FirstKeypress, Tick)):
            t = delivered_t if delivered_t is not None else event.t
        else:
            raise RejectedInputError(f"unknown engine input {type(event).__name__}")
        if t < self._now:
            raise RejectedInputError(f"out-of-order input at t={t} after t={self._now}")
        self._now = t

        actions: list[FeedbackAction] = []
        if isinstance(event, AttentionEvent):
            self._on_attention(event, actions)
        elif isinstance(event, TaskExplained):
            self.task_explained_t = event.t
        elif isinstance(event, FirstKeypress):
            self._on_keypress(event, actions)
        else:
            self._on_tick(event, actions)
        return actions

    def _emit(self, t: int, feedback_class: FeedbackClass,
              actions: list[FeedbackAction]) -> None:
        phrase = select_phrase(feedback_class, self.child_name, self._phrases)
        expression = Expression.HAPPY if feedback_class.is_praise else Expression.DISAPPOINTED
        action = FeedbackAction(t=t, feedback_class=feedback_class,
                                point_delta=feedback_class.point_delta,
                                phrase=phrase, expression=expression)
        self.ledger.apply(t, feedback_class, action.point_delta)
        actions.append(action)

    def _on_attention(self, event: AttentionEvent, actions: list[FeedbackAction]) -> None:
        previous = self.attention
        self.attention = event.state
        if event.state is not previous:
            self.attention_since = event.t
        if (event.state is AttentionState.ATTENTIVE and self.criticized and self.active):
            # Rule (e): positive confirmation for the behavior change.
            self._emit(self._now, FeedbackClass.PRAISE_AFTER_REATTENTION, actions)
            self.criticized = False
            self.last_periodic_praise_t = self._now
        elif event.state is AttentionState.ATTENTIVE:
            self.criticized = False

    def _on_keypress(self, event: FirstKeypress, actions: list[FeedbackAction]) -> None:
        if self.start_praised or not self.active or self.task_explained_t is None:
            return
        if event.t - self.task_explained_t <= self.params.start_window_ms:
            # Rule (a): reward getting to work quickly, once per session.
            self._emit(event.t, FeedbackClass.PRAISE_IMMEDIATE_START, actions)
            self.start_praised = True

    def _on_tick(self, tick: Tick, actions: list[FeedbackAction]) -> None:
        if not self.active:
            return
        t = tick.t
        if self.attention is AttentionState.ATTENTIVE:
            # Rule (b): periodic praise for continuous attention.
            reference = max(self.attention_since, self.last_periodic_praise_t)
            if t - reference >= self.params.praise_interval_ms:
                if self._short_praise_rng.random() < self.params.short_praise_ratio:
                    self._emit(t, FeedbackClass.SHORT_PRAISE, actions)
                else:
                    self._emit(t, FeedbackClass.PRAISE, actions)
                self.last_periodic_praise_t = t
        else:
            if self._criticism_suppressed(t):
                return
            if not self.criticized:
                # Rule (c): deduction after sustained inattention.
                if t - self.attention_since >= self.params.criticize_grace_ms:
                    self._emit(t, FeedbackClass.CRITICIZE, actions)
                    self.criticized = True
                    self.last_criticism_t = t
            elif t - self.last_criticism_t >= self.params.recriticize_interval_ms:
                # Rule (d): repeat deduction, at most every 30 s.
                self._emit(t, FeedbackClass.CRITICIZE_AGAIN, actions)
                self.last_criticism_t = t
