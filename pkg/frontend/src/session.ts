// Connection-and-data state for the dashboard, independent of the DOM and
// of any concrete socket.  The page feeds inbound lines in and hands us a
// transmit function; tests drive the same surface directly.
//
// Invariants kept here:
//   - user actions map 1:1 onto wire lines and are dropped when not live
//   - the frame ring holds at most `capacity` frames (30 s at 20 Hz)
//   - the chart sees only frames with strictly increasing t, which also
//     makes reconnect replays idempotent
//   - STREAM ON is re-sent on every (re)connect
//   - malformed inbound lines are logged, never thrown

import {
  getStatusLine,
  parseInbound,
  pressLine,
  releaseLine,
  setLoadLine,
  setRpmLine,
  streamLine,
} from "./protocol.js";
import type { StatusReport, TelemetryFrame } from "./protocol.js";

export type ConnectionState = "disconnected" | "connecting" | "live";

export interface SessionEvents {
  onFrames?: () => void;
  onStatus?: (status: StatusReport) => void;
  onToast?: (message: string) => void;
  onState?: (state: ConnectionState) => void;
  onLog?: (line: string) => void;
}

export const FRAME_CAPACITY = 600;

export class UiSession {
  private readonly ring: TelemetryFrame[] = [];
  private currentState: ConnectionState = "disconnected";
  private lastStatus: StatusReport | null = null;
  private lastT = -Infinity;

  constructor(
    private readonly transmit: (line: string) => void,
    private readonly events: SessionEvents = {},
    private readonly capacity: number = FRAME_CAPACITY,
  ) {}

  get state(): ConnectionState {
    return this.currentState;
  }

  get frames(): readonly TelemetryFrame[] {
    return this.ring;
  }

  get status(): StatusReport | null {
    return this.lastStatus;
  }

  get canSend(): boolean {
    return this.currentState === "live";
  }

  connecting(): void {
    this.setState("connecting");
  }

  connected(): void {
    this.setState("live");
    this.transmit(streamLine(true));
  }

  disconnected(): void {
    this.setState("disconnected");
  }

  press(bendDeg: number): boolean {
    return this.send(pressLine(bendDeg));
  }

  release(): boolean {
    return this.send(releaseLine());
  }

  setRpm(rpm: number): boolean {
    return this.send(setRpmLine(rpm));
  }

  setLoad(torqueNm: number): boolean {
    return this.send(setLoadLine(torqueNm));
  }

  requestStatus(): boolean {
    return this.send(getStatusLine());
  }

  ingest(raw: string): void {
    const msg = parseInbound(raw);
    switch (msg.kind) {
      case "frame":
        if (msg.frame.t > this.lastT) {
          this.lastT = msg.frame.t;
          this.ring.push(msg.frame);
          if (this.ring.length > this.capacity) {
            this.ring.splice(0, this.ring.length - this.capacity);
          }
          this.events.onFrames?.();
        }
        break;
      case "status":
        this.lastStatus = msg.status;
        this.events.onStatus?.(msg.status);
        break;
      case "err":
        this.events.onToast?.(msg.message);
        break;
      case "ok":
      case "pong":
        break;
      case "other":
        if (msg.line.trim() !== "") {
          this.events.onLog?.(msg.line);
        }
        break;
    }
  }

  private send(line: string): boolean {
    if (this.currentState !== "live") {
      return false;
    }
    this.transmit(line);
    return true;
  }

  private setState(next: ConnectionState): void {
    if (this.currentState !== next) {
      this.currentState = next;
      this.events.onState?.(next);
    }
  }
}
