"""Scripted input trace files.

Line-oriented, comma-separated, ``#`` comments. Two attention formats are
accepted, and two extra kinds drive the task panel in simulations:

    t_ms,face_present,yaw_deg,pitch_deg      raw gaze sample
    t_ms,Attentive|Inattentive               pre-debounced transition
    t_ms,keypress                            keyboard activity
    t_ms,answer,<int or "correct">           answer submission

``correct`` submits the exact answer of the task active at that moment.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .errors import ValidationError
from .monitor import AttentionState
from .session import AnswerInput, AttentionInput, ExternalInput, GazeInput, KeypressInput

_BOOL_WORDS = {"true": True, "1": True, "yes": True,
               "false": False, "0": False, "no": False}


def _parse_bool(token: str, line_no: int) -> bool:
    try:
        return _BOOL_WORDS[token.strip().lower()]
    except KeyError:
        raise ValidationError({f"line{line_no}": f"not a boolean: {token!r}"}) from None


def parse_trace_line(line: str, line_no: int) -> ExternalInput | None:
    body = line.split("#", 1)[0].strip()
    if not body:
        return None
    fields = [field.strip() for field in body.split(",")]
    try:
        t = int(fields[0])
    except ValueError:
        raise ValidationError({f"line{line_no}": f"bad timestamp: {fields[0]!r}"}) from None

    if len(fields) == 4:
        try:
            return GazeInput(t=t, face_present=_parse_bool(fields[1], line_no),
                             yaw=float(fields[2]), pitch=float(fields[3]))
        except ValueError:
            raise ValidationError({f"line{line_no}": "bad gaze angles"}) from None
    if len(fields) == 2 and fields[1].lower() in ("attentive", "inattentive"):
        return AttentionInput(t=t, state=AttentionState(fields[1].capitalize()))
    if len(fields) == 2 and fields[1].lower() == "keypress":
        return KeypressInput(t=t)
    if len(fields) == 3 and fields[1].lower() == "answer":
        token = fields[2]
        if token.lower() == "correct":
            return AnswerInput(t=t, value="correct")
        try:
            return AnswerInput(t=t, value=int(token))
        except ValueError:
            raise ValidationError({f"line{line_no}": f"bad answer: {token!r}"}) from None
    raise ValidationError({f"line{line_no}": f"unrecognized trace line: {body!r}"})


def parse_trace(lines: Iterable[str]) -> list[ExternalInput]:
    inputs = []
    for line_no, line in enumerate(lines, start=1):
        item = parse_trace_line(line, line_no)
        if item is not None:
            inputs.append(item)
    return inputs


def load_trace(path: str | Path) -> list[ExternalInput]:
    return parse_trace(Path(path).read_text(encoding="utf-8").splitlines())
