// Camera-free attention inputs for testing and demos: a manual
// attentive/inattentive toggle and a gaze slider that synthesizes samples
// at 4 Hz. Real gaze detectors connect server-side instead.

import type { ClientMessage } from "./protocol.js";

const SAMPLE_INTERVAL_MS = 250;

export class AttentionInputPanel {
  private timer: number | undefined;
  private root: HTMLElement;

  constructor(root: HTMLElement, private readonly send: (m: ClientMessage) => void) {
    this.root = root;
    this.root.innerHTML = `
      <fieldset class="attention-input">
        <legend>attention input (demo)</legend>
        <label><input type="checkbox" id="att-toggle" checked/> attentive</label>
        <label>gaze yaw
          <input type="range" id="att-slider" min="-60" max="60" value="0" step="1"/>
        </label>
        <label><input type="checkbox" id="att-stream"/> stream slider at 4 Hz</label>
      </fieldset>
    `;
    const toggle = this.root.querySelector("#att-toggle") as HTMLInputElement;
    toggle.addEventListener("change", () => {
      this.send({ type: "attention_toggle", body: { attentive: toggle.checked } });
    });
    const streaming = this.root.querySelector("#att-stream") as HTMLInputElement;
    streaming.addEventListener("change", () => {
      if (streaming.checked) {
        this.startStreaming();
      } else {
        this.stopStreaming();
      }
    });
  }

  private startStreaming(): void {
    const slider = this.root.querySelector("#att-slider") as HTMLInputElement;
    this.timer = window.setInterval(() => {
      this.send({
        type: "attention_sample",
        body: { face_present: true, yaw: Number(slider.value), pitch: 0 },
      });
    }, SAMPLE_INTERVAL_MS);
  }

  private stopStreaming(): void {
    if (this.timer !== undefined) {
      clearInterval(this.timer);
      this.timer = undefined;
    }
  }

  setConnected(connected: boolean): void {
    this.root.querySelectorAll("input").forEach((el) => {
      (el as HTMLInputElement).disabled = !connected;
    });
    if (!connected) this.stopStreaming();
  }
}
