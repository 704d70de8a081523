// Service client: request/response for lifecycle and reports, one
// websocket per running session for the live stream. Reconnection resumes
// from the last seen seq.

import type { ClientMessage, ServerMessage, SessionConfigDoc, SessionReportDoc } from "./protocol.js";

export interface CreateResult {
  token?: string;
  state?: string;
  errors?: Record<string, string>;
}

export class ServiceClient {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(config: SessionConfigDoc): Promise<CreateResult> {
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(config),
    });
    return response.json();
  }

  async start(token: string): Promise<Response> {
    return fetch(this.url(`/sessions/${token}/start`), { method: "POST" });
  }

  async abort(token: string): Promise<Response> {
    return fetch(this.url(`/sessions/${token}/abort`), { method: "POST" });
  }

  async report(token: string): Promise<SessionReportDoc | null> {
    const response = await fetch(this.url(`/sessions/${token}/report`));
    return response.ok ? response.json() : null;
  }

  streamUrl(token: string, sinceSeq: number): string {
    const base = this.baseUrl || window.location.origin;
    const ws = base.replace(/^http/, "ws");
    return `${ws}/sessions/${token}/stream?since_seq=${sinceSeq}`;
  }
}

export interface StreamHandlers {
  onMessage(message: ServerMessage): void;
  onStatus(connected: boolean): void;
}

/** Websocket wrapper that tracks the last seq and resumes after drops. */
export class SessionStream {
  private socket: WebSocket | null = null;
  private lastSeq = -1;
  private closed = false;

  constructor(
    private readonly client: ServiceClient,
    private readonly token: string,
    private readonly handlers: StreamHandlers,
  ) {}

  connect(): void {
    this.socket = new WebSocket(this.client.streamUrl(this.token, this.lastSeq));
    this.socket.onopen = () => this.handlers.onStatus(true);
    this.socket.onmessage = (event) => {
      const message = JSON.parse(event.data) as ServerMessage;
      if (message.type !== "error" && typeof message.seq === "number") {
        this.lastSeq = Math.max(this.lastSeq, message.seq);
      }
      this.handlers.onMessage(message);
    };
    this.socket.onclose = () => {
      this.handlers.onStatus(false);
      if (!this.closed) {
        setTimeout(() => this.connect(), 1000);
      }
    };
  }

  send(message: ClientMessage): void {
    if (this.socket && this.socket.readyState === WebSocket.OPEN) {
      this.socket.send(JSON.stringify(message));
    }
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
  }
}
