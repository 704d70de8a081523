import { ServiceClient, SessionStream } from "./client.js";
import { ChildView } from "./childView.js";
import { ClinicianView } from "./clinicianView.js";
import { AttentionInputPanel } from "./attentionInput.js";
import type { ServerMessage } from "./protocol.js";
import { applyMessage, initialState, type UiState } from "./state.js";

function boot(): void {
  const client = new ServiceClient("");
  let state: UiState = initialState();
  let stream: SessionStream | null = null;

  const send = (message: Parameters<SessionStream["send"]>[0]) => stream?.send(message);

  const childView = new ChildView(
    document.getElementById("child-root") as HTMLElement, { send });
  const attentionPanel = new AttentionInputPanel(
    document.getElementById("attention-root") as HTMLElement, send);

  const clinicianView = new ClinicianView(
    document.getElementById("clinician-root") as HTMLElement, client, {
      onCreated(token: string) {
        stream?.close();
        state = initialState();
        stream = new SessionStream(client, token, {
          onMessage(message: ServerMessage) {
            const applied = applyMessage(state, message);
            state = applied.state;
            childView.render(state, applied.effects);
            clinicianView.renderLive(state);
          },
          onStatus(connected: boolean) {
            childView.setConnected(connected);
            attentionPanel.setConnected(connected);
          },
        });
        stream.connect();
      },
      onStart() {},
      onAbort() {},
    });

  childView.setConnected(false);
  attentionPanel.setConnected(false);
}

document.addEventListener("DOMContentLoaded", boot);
