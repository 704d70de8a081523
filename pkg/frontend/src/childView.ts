// Child view: task panel on the left, agent on the right (smaller and
// visually subordinate to the task), points shown over the task panel.

import { avatarSvg } from "./avatar.js";
import type { ClientMessage } from "./protocol.js";
import { playCue } from "./sounds.js";
import { effectiveExpression, type Effect, type UiState } from "./state.js";

export interface ChildViewCallbacks {
  send(message: ClientMessage): void;
}

export class ChildView {
  private root: HTMLElement;
  private expressionTimer: number | undefined;
  private expressionSetWall = 0;

  constructor(root: HTMLElement, private readonly callbacks: ChildViewCallbacks) {
    this.root = root;
    this.root.innerHTML = `
      <div class="child-layout">
        <section class="task-panel">
          <div class="points" id="points">0</div>
          <div class="banner" id="banner"></div>
          <div class="task" id="task"></div>
          <form id="answer-form" autocomplete="off">
            <input id="answer-input" inputmode="numeric" placeholder="?" aria-label="answer"/>
            <button type="submit">OK</button>
            <span class="field-error" id="answer-error"></span>
          </form>
        </section>
        <aside class="agent-panel">
          <div id="avatar">${avatarSvg("SlightlyHappy")}</div>
          <div class="caption" id="caption"></div>
        </aside>
      </div>
      <div class="offline-banner hidden" id="offline">connection lost - inputs disabled</div>
    `;
    const form = this.element<HTMLFormElement>("answer-form");
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.submitAnswer();
    });
    const input = this.element<HTMLInputElement>("answer-input");
    input.addEventListener("keydown", () => this.callbacks.send({ type: "keypress" }));
  }

  private element<T extends HTMLElement>(id: string): T {
    return this.root.querySelector(`#${id}`) as T;
  }

  private submitAnswer(): void {
    const input = this.element<HTMLInputElement>("answer-input");
    const error = this.element<HTMLSpanElement>("answer-error");
    const raw = input.value.trim();
    if (raw === "") return;                       // empty submit is a no-op
    if (!/^-?\d+$/.test(raw)) {
      error.textContent = "numbers only";
      return;
    }
    error.textContent = "";
    this.callbacks.send({ type: "answer", body: { value: parseInt(raw, 10) } });
  }

  render(state: UiState, effects: Effect[]): void {
    this.element<HTMLDivElement>("points").textContent = String(state.points);
    if (state.pointsDelta) {
      const points = this.element<HTMLDivElement>("points");
      points.classList.remove("bump-up", "bump-down");
      void points.offsetWidth;                    // restart the animation
      points.classList.add(state.pointsDelta > 0 ? "bump-up" : "bump-down");
    }
    this.element<HTMLDivElement>("banner").textContent = state.banner;
    const inTrial = state.phase?.name === "trial" && !state.ended;
    this.element<HTMLDivElement>("task").textContent =
      inTrial && state.task ? `${state.task.rendering} =` : "";
    this.element<HTMLDivElement>("caption").textContent = state.caption;
    this.setExpression(state);

    for (const effect of effects) {
      if (effect.kind === "sound") {
        playCue(effect.cue, state.soundsEnabled);
      } else if (effect.kind === "clear-answer") {
        this.element<HTMLInputElement>("answer-input").value = "";
      }
    }
  }

  private setExpression(state: UiState): void {
    const avatar = this.element<HTMLDivElement>("avatar");
    avatar.innerHTML = avatarSvg(effectiveExpression(state, 0));
    this.expressionSetWall = performance.now();
    if (this.expressionTimer !== undefined) clearTimeout(this.expressionTimer);
    if (state.expression !== "SlightlyHappy") {
      this.expressionTimer = window.setTimeout(() => {
        avatar.innerHTML = avatarSvg(
          effectiveExpression(state, performance.now() - this.expressionSetWall));
      }, 3000);
    }
  }

  setConnected(connected: boolean): void {
    this.element<HTMLDivElement>("offline").classList.toggle("hidden", connected);
    const input = this.element<HTMLInputElement>("answer-input");
    input.disabled = !connected;
  }
}
