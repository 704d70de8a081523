// Clinician panel: the session configuration form (the five per-child
// fields plus seed and durations), start/abort controls, live status, and
// the report view.

import { ServiceClient } from "./client.js";
import type { SessionConfigDoc, SessionReportDoc } from "./protocol.js";
import type { UiState } from "./state.js";

export interface ClinicianCallbacks {
  onCreated(token: string): void;
  onStart(): void;
  onAbort(): void;
}

const FIELDS: Array<{ name: keyof SessionConfigDoc; label: string; value: string;
                      parse?: (raw: string) => number }> = [
  { name: "child_name", label: "name of the child", value: "Mia" },
  { name: "age", label: "age (6-17)", value: "8", parse: Number },
  { name: "child_id", label: "child ID", value: "child-001" },
  { name: "session_id", label: "session ID", value: "1", parse: Number },
  { name: "degree_of_distraction", label: "degree of distraction (0-3)", value: "2",
    parse: Number },
  { name: "seed", label: "seed", value: "42", parse: Number },
  { name: "trial_duration_ms", label: "trial duration (ms)", value: "300000", parse: Number },
  { name: "break_duration_ms", label: "break duration (ms)", value: "60000", parse: Number },
];

export class ClinicianView {
  private root: HTMLElement;
  private token: string | null = null;

  constructor(root: HTMLElement, private readonly client: ServiceClient,
              private readonly callbacks: ClinicianCallbacks) {
    this.root = root;
    const rows = FIELDS.map(
      (f) => `
        <label class="config-row">
          <span>${f.label}</span>
          <input name="${f.name}" value="${f.value}"/>
          <span class="field-error" data-error="${f.name}"></span>
        </label>`,
    ).join("");
    this.root.innerHTML = `
      <form id="config-form">${rows}
        <button type="submit" id="create-btn">create session</button>
      </form>
      <div class="controls">
        <button id="start-btn" disabled>start</button>
        <button id="abort-btn" disabled>abort</button>
        <span id="status">no session</span>
      </div>
      <div id="live-status"></div>
      <div id="report"></div>
    `;
    this.element<HTMLFormElement>("config-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.create();
    });
    this.element<HTMLButtonElement>("start-btn").addEventListener("click", () => {
      if (this.token) {
        void this.client.start(this.token);
        this.callbacks.onStart();
      }
    });
    this.element<HTMLButtonElement>("abort-btn").addEventListener("click", () => {
      if (this.token) {
        void this.client.abort(this.token);
        this.callbacks.onAbort();
      }
    });
  }

  private element<T extends HTMLElement>(id: string): T {
    return this.root.querySelector(`#${id}`) as T;
  }

  private readConfig(): SessionConfigDoc {
    const form = this.element<HTMLFormElement>("config-form");
    const doc: Record<string, unknown> = {};
    for (const field of FIELDS) {
      const raw = (form.elements.namedItem(field.name) as HTMLInputElement).value;
      doc[field.name] = field.parse ? field.parse(raw) : raw;
    }
    return doc as unknown as SessionConfigDoc;
  }

  private async create(): Promise<void> {
    this.root.querySelectorAll(".field-error").forEach((el) => (el.textContent = ""));
    const result = await this.client.createSession(this.readConfig());
    if (result.errors) {
      for (const [field, message] of Object.entries(result.errors)) {
        const slot = this.root.querySelector(`[data-error="${field}"]`);
        if (slot) slot.textContent = message;
      }
      this.element<HTMLSpanElement>("status").textContent = "configuration rejected";
      return;
    }
    this.token = result.token ?? null;
    this.element<HTMLSpanElement>("status").textContent = `created ${this.token}`;
    this.element<HTMLButtonElement>("start-btn").disabled = false;
    this.element<HTMLButtonElement>("abort-btn").disabled = false;
    if (this.token) this.callbacks.onCreated(this.token);
  }

  renderLive(state: UiState): void {
    const phase = state.phase ? `${state.phase.name} ${state.phase.index || ""}` : "-";
    this.element<HTMLDivElement>("live-status").innerHTML = `
      <dl class="live">
        <dt>phase</dt><dd>${phase}</dd>
        <dt>points</dt><dd>${state.points}</dd>
        <dt>last feedback</dt><dd>${latestFeedback(state)}</dd>
        <dt>state</dt><dd>${state.ended ? state.ended.state : "Running"}</dd>
      </dl>`;
    if (state.ended && this.token) {
      void this.showReport(this.token);
    }
  }

  private async showReport(token: string): Promise<void> {
    const report = await this.client.report(token);
    if (report) this.element<HTMLDivElement>("report").innerHTML = renderReport(report);
  }
}

function latestFeedback(state: UiState): string {
  for (let i = state.captions.length - 1; i >= 0; i -= 1) {
    const entry = state.captions[i];
    if (entry.kind !== "phase") return `${entry.kind}: ${entry.text}`;
  }
  return "-";
}

export function renderReport(report: SessionReportDoc): string {
  const ratio = report.attention_ratio === null
    ? "n/a" : `${(report.attention_ratio * 100).toFixed(1)}%`;
  const counts = Object.entries(report.feedback_counts)
    .map(([name, count]) => `<li>${name}: ${count}</li>`).join("");
  return `
    <h3>Session report ${report.complete ? "" : "(partial)"}</h3>
    <ul>
      <li>final points: ${report.final_points}</li>
      <li>attention ratio: ${ratio}</li>
      <li>longest attentive span: ${Math.round(report.longest_attentive_streak_ms / 1000)} s</li>
      <li>tasks: ${report.tasks_correct}/${report.tasks_attempted} correct</li>
    </ul>
    <ul class="counts">${counts}</ul>`;
}
