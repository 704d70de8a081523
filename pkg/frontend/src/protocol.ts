// Wire protocol types, mirroring the session service. Every server message
// carries the session token, the logical timestamp and a seq for resuming.

export type ExpressionName =
  | "SlightlyHappy"
  | "Happy"
  | "Disappointed"
  | "MakingFaces";

export type FeedbackClassName =
  | "praise_immediate_start"
  | "praise"
  | "short_praise"
  | "praise_after_reattention"
  | "criticize"
  | "criticize_again";

interface Envelope {
  session: string;
  t: number;
  seq: number;
}

export type ServerMessage =
  | (Envelope & {
      type: "phase";
      body: { phase: string; index: number; duration_ms: number; utterances: string[] };
    })
  | (Envelope & {
      type: "task";
      body: { id: number; rendering: string; lhs: number; operator: string; rhs: number };
    })
  | (Envelope & {
      type: "answer_result";
      body: { task_id: number; correct: boolean; sound: "positive" | "negative" };
    })
  | (Envelope & {
      type: "feedback";
      body: {
        class: FeedbackClassName;
        point_delta: number;
        phrase: string;
        expression: ExpressionName;
      };
    })
  | (Envelope & { type: "points"; body: { balance: number } })
  | (Envelope & {
      type: "distraction";
      body: { phrase: string; expression: ExpressionName };
    })
  | (Envelope & { type: "agent_expression"; body: { expression: ExpressionName } })
  | (Envelope & {
      type: "session_end";
      body: { state: "Finished" | "Aborted"; final_points: number };
    })
  | { type: "error"; body: { message: string } };

export type ClientMessage =
  | { type: "start" }
  | { type: "abort" }
  | { type: "keypress" }
  | { type: "answer"; body: { value: number } }
  | { type: "attention_toggle"; body: { attentive: boolean } }
  | {
      type: "attention_sample";
      body: { face_present: boolean; yaw: number; pitch: number };
    };

export interface SessionConfigDoc {
  child_name: string;
  age: number;
  child_id: string;
  session_id: number;
  seed: number;
  degree_of_distraction: number;
  trial_duration_ms?: number;
  break_duration_ms?: number;
}

export interface SessionReportDoc {
  child_id: string;
  session_id: number;
  final_points: number;
  feedback_counts: Record<string, number>;
  attention_ratio: number | null;
  longest_attentive_streak_ms: number;
  tasks_attempted: number;
  tasks_correct: number;
  timeline: { minute: number; points: number; attention: string }[];
  complete: boolean;
  phases_seen: string[];
}
