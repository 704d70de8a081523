// Pure view-state reducer. The whole UI is a fold over the ordered server
// message stream: replaying a captured stream reproduces the final view
// state. No engine decisions happen here; scoring and feedback all
// originate server-side.

import type { ExpressionName, FeedbackClassName, ServerMessage } from "./protocol.js";

export interface CaptionEntry {
  t: number;
  text: string;
  kind: FeedbackClassName | "distraction" | "phase";
}

export interface UiState {
  phase: { name: string; index: number } | null;
  banner: string;
  task: { id: number; rendering: string } | null;
  points: number;
  pointsDelta: number | null;
  expression: ExpressionName;
  expressionSetAt: number;
  caption: string;
  captions: CaptionEntry[];
  lastAnswerCorrect: boolean | null;
  soundsEnabled: boolean;
  lastSeq: number;
  ended: { state: "Finished" | "Aborted"; finalPoints: number } | null;
}

export type Effect =
  | { kind: "sound"; cue: "positive" | "negative" }
  | { kind: "clear-answer" };

export function initialState(soundsEnabled = true): UiState {
  return {
    phase: null,
    banner: "",
    task: null,
    points: 0,
    pointsDelta: null,
    expression: "SlightlyHappy",
    expressionSetAt: 0,
    caption: "",
    captions: [],
    lastAnswerCorrect: null,
    soundsEnabled,
    lastSeq: -1,
    ended: null,
  };
}

const EXPRESSION_DECAY_MS = 3000;

/** The expression to draw now: feedback faces fall back to the slightly
 * happy default after a few seconds. */
export function effectiveExpression(state: UiState, msSinceSet: number): ExpressionName {
  if (state.expression === "SlightlyHappy") return state.expression;
  return msSinceSet >= EXPRESSION_DECAY_MS ? "SlightlyHappy" : state.expression;
}

export interface Applied {
  state: UiState;
  effects: Effect[];
}

export function applyMessage(state: UiState, message: ServerMessage): Applied {
  if (message.type === "error") {
    console.warn("service error:", message.body.message);
    return { state, effects: [] };
  }
  if (message.seq <= state.lastSeq) {
    console.warn("dropped stale message", message.seq, message.type);
    return { state, effects: [] };
  }
  const next: UiState = { ...state, lastSeq: message.seq, pointsDelta: null };
  const effects: Effect[] = [];

  switch (message.type) {
    case "phase": {
      next.phase = { name: message.body.phase, index: message.body.index };
      next.banner = bannerFor(message.body.phase, message.body.index);
      if (message.body.utterances.length > 0) {
        next.caption = message.body.utterances.join(" ");
        next.captions = [...state.captions,
          { t: message.t, text: next.caption, kind: "phase" }];
      }
      break;
    }
    case "task": {
      next.task = { id: message.body.id, rendering: message.body.rendering };
      break;
    }
    case "answer_result": {
      next.lastAnswerCorrect = message.body.correct;
      effects.push({ kind: "sound", cue: message.body.sound });
      if (message.body.correct) effects.push({ kind: "clear-answer" });
      break;
    }
    case "feedback": {
      next.caption = message.body.phrase;
      next.expression = message.body.expression;
      next.expressionSetAt = message.t;
      next.captions = [...state.captions,
        { t: message.t, text: message.body.phrase, kind: message.body.class }];
      break;
    }
    case "points": {
      next.pointsDelta = message.body.balance - state.points;
      next.points = message.body.balance;
      break;
    }
    case "distraction": {
      next.caption = message.body.phrase;
      next.expression = message.body.expression;
      next.expressionSetAt = message.t;
      next.captions = [...state.captions,
        { t: message.t, text: message.body.phrase, kind: "distraction" }];
      break;
    }
    case "agent_expression": {
      next.expression = message.body.expression;
      next.expressionSetAt = message.t;
      break;
    }
    case "session_end": {
      next.ended = { state: message.body.state, finalPoints: message.body.final_points };
      next.banner = message.body.state === "Finished" ? "All done!" : "Session stopped";
      break;
    }
  }
  return { state: next, effects };
}

export function replay(messages: ServerMessage[], soundsEnabled = true): Applied {
  let state = initialState(soundsEnabled);
  const effects: Effect[] = [];
  for (const message of messages) {
    const applied = applyMessage(state, message);
    state = applied.state;
    effects.push(...applied.effects);
  }
  return { state, effects };
}

function bannerFor(phase: string, index: number): string {
  switch (phase) {
    case "intro":
      return "Welcome!";
    case "trial":
      return `Task time ${index} - stay focused`;
    case "break":
      return "Short break";
    case "goodbye":
      return "See you next time";
    default:
      return phase;
  }
}
