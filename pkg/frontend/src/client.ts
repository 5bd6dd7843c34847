/** Thin client for the session service: HTTP calls plus the event stream. */

import type { ModelDocument, StepRecord, TraceHeader } from "./types.js";

export interface CreateSessionOptions {
  worldId?: number;
  seed?: number;
  mode?: "human" | "agent";
}

export interface StepResponse {
  t: number;
  lamps: [number, number, number, number, number];
  move?: number;
}

/** Minimal WebSocket surface so tests can inject a Node implementation. */
export interface SocketLike {
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export class SessionClient {
  constructor(
    readonly baseUrl: string,
    private readonly socketFactory?: SocketFactory,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw new Error(`${init?.method ?? "GET"} ${path}: HTTP ${response.status}`);
    }
    return response;
  }

  async createSession(options: CreateSessionOptions = {}): Promise<string> {
    const response = await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        world_id: options.worldId ?? 2,
        seed: options.seed ?? 0,
        mode: options.mode ?? "human",
      }),
    });
    const body = (await response.json()) as { id: string };
    return body.id;
  }

  /** Exactly one world step; human sessions must pass a move 0..7. */
  async postStep(sessionId: string, move?: number): Promise<StepResponse> {
    const response = await this.request(`/sessions/${sessionId}/steps`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(move === undefined ? {} : { move }),
    });
    return (await response.json()) as StepResponse;
  }

  async getTrace(sessionId: string): Promise<string> {
    return (await this.request(`/sessions/${sessionId}/trace`)).text();
  }

  async getModel(sessionId: string): Promise<ModelDocument> {
    const response = await this.request(`/sessions/${sessionId}/model`);
    return (await response.json()) as ModelDocument;
  }

  /**
   * Subscribe to the push channel.  Messages are trace-format StepRecord
   * lines (empty keepalives are dropped); returns an unsubscribe handle.
   */
  openEvents(
    sessionId: string,
    onRecord: (record: StepRecord) => void,
    onStatus?: (status: "connected" | "disconnected") => void,
  ): () => void {
    const wsUrl =
      this.baseUrl.replace(/^http/, "ws") + `/sessions/${sessionId}/events`;
    const factory: SocketFactory =
      this.socketFactory ?? ((url) => new WebSocket(url) as unknown as SocketLike);
    const socket = factory(wsUrl);
    socket.onopen = () => onStatus?.("connected");
    socket.onclose = () => onStatus?.("disconnected");
    socket.onerror = () => onStatus?.("disconnected");
    socket.onmessage = (event) => {
      const text = typeof event.data === "string" ? event.data : String(event.data);
      if (text.length === 0) {
        return; // heartbeat
      }
      onRecord(JSON.parse(text) as StepRecord);
    };
    return () => socket.close();
  }
}

/** Parse the canonical JSONL trace format into header + records. */
export function parseTraceText(text: string): {
  header: TraceHeader;
  records: StepRecord[];
} {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty trace");
  }
  const header = JSON.parse(lines[0]) as TraceHeader;
  const records = lines.slice(1).map((line) => JSON.parse(line) as StepRecord);
  return { header, records };
}
