"""Age-adapted arithmetic task generation.

Tasks are deliberately monotonous single-expression arithmetic: the point
of the training is concentration, not math instruction. Problems are
retained until solved correctly; difficulty moves between tiers inside a
band based on answer streaks (5 consecutive correct moves up, 3
consecutive wrong moves down).

The band table is configuration data. For division the declared range
constrains the divisor and the quotient; the dividend is their product,
so every division task divides exactly.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from .errors import ValidationError

STREAK_UP = 5
STREAK_DOWN = 3


class Operator(enum.Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"


class AnswerResult(enum.Enum):
    CORRECT = "Correct"
    INCORRECT = "Incorrect"

    @property
    def sound_cue(self) -> str:
        return "positive" if self is AnswerResult.CORRECT else "negative"


@dataclass(frozen=True)
class TaskItem:
    id: int
    lhs: int
    rhs: int
    operator: Operator
    answer: int
    difficulty_tier: int

    def render(self) -> str:
        return f"{self.lhs} {self.operator.value} {self.rhs}"

    def to_payload(self) -> dict:
        return {"id": self.id, "lhs": self.lhs, "operator": self.operator.value,
                "rhs": self.rhs, "tier": self.difficulty_tier}


@dataclass(frozen=True)
class AgeBand:
    """Operators and operand ranges for an age span, one dict per tier
    mapping operator -> inclusive (lo, hi) interval."""

    min_age: int
    max_age: int
    tiers: tuple[dict[Operator, tuple[int, int]], ...]

    def tier_range(self) -> tuple[int, int]:
        return 1, len(self.tiers)

    def tier_table(self, tier: int) -> dict[Operator, tuple[int, int]]:
        lo, hi = self.tier_range()
        return self.tiers[max(lo, min(hi, tier)) - 1]


# Default progression, roughly tracking primary-school curricula: sums
# first, times tables from 9, two-digit products and exact division for
# the oldest band.
DEFAULT_BANDS: tuple[AgeBand, ...] = (
    AgeBand(6, 8, (
        {Operator.ADD: (0, 20), Operator.SUB: (0, 20)},
        {Operator.ADD: (0, 50), Operator.SUB: (0, 50)},
        {Operator.ADD: (0, 100), Operator.SUB: (0, 100)},
    )),
    AgeBand(9, 11, (
        {Operator.ADD: (0, 50), Operator.SUB: (0, 50), Operator.MUL: (2, 10)},
        {Operator.ADD: (0, 100), Operator.SUB: (0, 100), Operator.MUL: (2, 10)},
        {Operator.ADD: (0, 100), Operator.SUB: (0, 100), Operator.MUL: (2, 12)},
    )),
    AgeBand(12, 17, (
        {Operator.ADD: (0, 100), Operator.SUB: (0, 100),
         Operator.MUL: (2, 10), Operator.DIV: (2, 10)},
        {Operator.ADD: (0, 200), Operator.SUB: (0, 200),
         Operator.MUL: (2, 12), Operator.DIV: (2, 12)},
        {Operator.ADD: (0, 500), Operator.SUB: (0, 500),
         Operator.MUL: (10, 99), Operator.DIV: (2, 19)},
    )),
)


def band_for_age(age: int, bands: tuple[AgeBand, ...] = DEFAULT_BANDS) -> AgeBand:
    for band in bands:
        if band.min_age <= age <= band.max_age:
            return band
    raise ValidationError({"age": f"no band covers age {age}"})


def validate_bands(bands: tuple[AgeBand, ...]) -> None:
    """Bands must partition ages 6..17 with non-empty ranges."""
    covered = sorted(age for band in bands for age in range(band.min_age, band.max_age + 1))
    if covered != list(range(6, 18)):
        raise ValidationError({"bands": "bands must partition ages 6..17 exactly"})
    for band in bands:
        if not band.tiers:
            raise ValidationError({"bands": f"band {band.min_age}-{band.max_age} has no tiers"})
        for tier in band.tiers:
            for op, (lo, hi) in tier.items():
                if lo > hi:
                    raise ValidationError({"bands": f"empty range for {op.value}"})
                if op is Operator.DIV and lo < 1:
                    raise ValidationError({"bands": "division range must start >= 1"})


class TaskGenerator:
    """Deterministic task source: output is a pure function of
    (rng stream state, call sequence)."""

    def __init__(self, band: AgeBand, rng: random.Random, start_tier: int = 1):
        self.band = band
        self.rng = rng
        lo, hi = band.tier_range()
        self.current_tier = max(lo, min(hi, start_tier))
        self.next_id = 1
        self.streak_correct = 0
        self.streak_wrong = 0

    def next_task(self) -> TaskItem:
        table = self.band.tier_table(self.current_tier)
        operators = sorted(table, key=lambda op: op.value)
        op = operators[self.rng.randrange(len(operators))]
        lo, hi = table[op]
        if op is Operator.DIV:
            divisor = self.rng.randint(max(lo, 1), hi)
            quotient = self.rng.randint(lo, hi)
            lhs, rhs, answer = divisor * quotient, divisor, quotient
        elif op is Operator.SUB:
            a, b = self.rng.randint(lo, hi), self.rng.randint(lo, hi)
            lhs, rhs = max(a, b), min(a, b)   # keep results non-negative
            answer = lhs - rhs
        elif op is Operator.MUL:
            lhs, rhs = self.rng.randint(lo, hi), self.rng.randint(lo, hi)
            answer = lhs * rhs
        else:
            lhs, rhs = self.rng.randint(lo, hi), self.rng.randint(lo, hi)
            answer = lhs + rhs
        task = TaskItem(id=self.next_id, lhs=lhs, rhs=rhs, operator=op,
                        answer=answer, difficulty_tier=self.current_tier)
        self.next_id += 1
        return task

    def adapt(self, result: AnswerResult) -> None:
        lo, hi = self.band.tier_range()
        if result is AnswerResult.CORRECT:
            self.streak_correct += 1
            self.streak_wrong = 0
            if self.streak_correct >= STREAK_UP:
                self.current_tier = min(hi, self.current_tier + 1)
                self.streak_correct = self.streak_wrong = 0
        else:
            self.streak_wrong += 1
            self.streak_correct = 0
            if self.streak_wrong >= STREAK_DOWN:
                self.current_tier = max(lo, self.current_tier - 1)
                self.streak_correct = self.streak_wrong = 0


def check_answer(task: TaskItem, submitted: int) -> AnswerResult:
    """Exact-match answer check. The caller keeps the task active until a
    Correct result; each result carries a sound cue tag."""
    if isinstance(submitted, bool) or not isinstance(submitted, int):
        raise ValidationError({"submitted": "must be an integer"})
    return AnswerResult.CORRECT if submitted == task.answer else AnswerResult.INCORRECT


@dataclass
class TaskSession:
    """Retained-until-correct task flow around a generator."""

    generator: TaskGenerator
    current: TaskItem | None = None
    solved: int = 0
    attempted_ids: set[int] = field(default_factory=set)

    def present(self) -> TaskItem:
        if self.current is None:
            self.current = self.generator.next_task()
        return self.current

    def submit(self, submitted: int) -> tuple[TaskItem, AnswerResult]:
        task = self.present()
        result = check_answer(task, submitted)
        self.attempted_ids.add(task.id)
        self.generator.adapt(result)
        if result is AnswerResult.CORRECT:
            self.solved += 1
            self.current = None
        return task, result
