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
import { getStatusLine, parseInbound, pressLine, releaseLine, setLoadLine, setRpmLine, streamLine, } from "./protocol.js";
export const FRAME_CAPACITY = 600;
export class UiSession {
    constructor(transmit, events = {}, capacity = FRAME_CAPACITY) {
        this.transmit = transmit;
        this.events = events;
        this.capacity = capacity;
        this.ring = [];
        this.currentState = "disconnected";
        this.lastStatus = null;
        this.lastT = -Infinity;
    }
    get state() {
        return this.currentState;
    }
    get frames() {
        return this.ring;
    }
    get status() {
        return this.lastStatus;
    }
    get canSend() {
        return this.currentState === "live";
    }
    connecting() {
        this.setState("connecting");
    }
    connected() {
        this.setState("live");
        this.transmit(streamLine(true));
    }
    disconnected() {
        this.setState("disconnected");
    }
    press(bendDeg) {
        return this.send(pressLine(bendDeg));
    }
    release() {
        return this.send(releaseLine());
    }
    setRpm(rpm) {
        return this.send(setRpmLine(rpm));
    }
    setLoad(torqueNm) {
        return this.send(setLoadLine(torqueNm));
    }
    requestStatus() {
        return this.send(getStatusLine());
    }
    ingest(raw) {
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
    send(line) {
        if (this.currentState !== "live") {
            return false;
        }
        this.transmit(line);
        return true;
    }
    setState(next) {
        if (this.currentState !== next) {
            this.currentState = next;
            this.events.onState?.(next);
        }
    }
}
