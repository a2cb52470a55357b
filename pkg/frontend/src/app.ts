// Page wiring: owns the WebSocket, the reconnect loop, and the DOM, and
// delegates all protocol and buffering decisions to UiSession.

import { drawChart } from "./chart.js";
import type { ChartSeries } from "./chart.js";
import type { StatusReport } from "./protocol.js";
import { UiSession } from "./session.js";

const SERIES: readonly ChartSeries[] = [
  { label: "rpm", color: "#4cc38a", pick: (f) => f.rpm },
  { label: "duty %", color: "#e5c07b", pick: (f) => f.duty * 100 },
  { label: "pos mm", color: "#61afef", pick: (f) => f.pos },
];

const RETRY_MS_MIN = 500;
const RETRY_MS_MAX = 5000;
const TOAST_MS = 3000;
const STATUS_POLL_MS = 1000;
const REDRAW_MS = 100;

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function start(): void {
  const connBadge = byId<HTMLSpanElement>("conn");
  const controls = byId<HTMLFieldSetElement>("controls");
  const canvas = byId<HTMLCanvasElement>("chart");
  const pressBtn = byId<HTMLButtonElement>("press-btn");
  const bendSlider = byId<HTMLInputElement>("bend");
  const bendValue = byId<HTMLSpanElement>("bend-value");
  const spInput = byId<HTMLInputElement>("sp");
  const spApply = byId<HTMLButtonElement>("sp-apply");
  const loadInput = byId<HTMLInputElement>("load");
  const loadApply = byId<HTMLButtonElement>("load-apply");
  const toast = byId<HTMLDivElement>("toast");
  const statusCells = {
    t: byId<HTMLElement>("st-t"),
    rpm: byId<HTMLElement>("st-rpm"),
    sp: byId<HTMLElement>("st-sp"),
    duty: byId<HTMLElement>("st-duty"),
    adc: byId<HTMLElement>("st-adc"),
    pressed: byId<HTMLElement>("st-pressed"),
    pos: byId<HTMLElement>("st-pos"),
    dir: byId<HTMLElement>("st-dir"),
  };

  let toastTimer: ReturnType<typeof setTimeout> | null = null;
  function showToast(message: string): void {
    toast.textContent = message;
    toast.classList.add("show");
    if (toastTimer !== null) {
      clearTimeout(toastTimer);
    }
    toastTimer = setTimeout(() => toast.classList.remove("show"), TOAST_MS);
  }

  function showStatus(s: StatusReport): void {
    statusCells.t.textContent = s.t.toFixed(3) + " s";
    statusCells.rpm.textContent = s.rpm.toFixed(2);
    statusCells.sp.textContent = s.sp.toFixed(2);
    statusCells.duty.textContent = s.duty.toFixed(3);
    statusCells.adc.textContent = String(s.adc);
    statusCells.pressed.textContent = s.pressed ? "yes" : "no";
    statusCells.pos.textContent = s.pos.toFixed(2) + " mm";
    statusCells.dir.textContent = s.dir;
  }

  let ws: WebSocket | null = null;
  const session = new UiSession(
    (line) => ws?.send(line),
    {
      onStatus: showStatus,
      onToast: (message) => showToast("bench error: " + message),
      onState: (state) => {
        connBadge.textContent = state;
        connBadge.className = "badge " + state;
        controls.disabled = state !== "live";
      },
      onLog: (line) => console.log("bench:", line),
    },
  );

  let retryMs = RETRY_MS_MIN;
  function connect(): void {
    session.connecting();
    ws = new WebSocket(`ws://${location.host}/ws`);
    ws.onopen = () => {
      retryMs = RETRY_MS_MIN;
      session.connected();
    };
    ws.onmessage = (ev) => {
      for (const line of String(ev.data).split("\n")) {
        if (line !== "") {
          session.ingest(line);
        }
      }
    };
    ws.onclose = () => {
      session.disconnected();
      setTimeout(connect, retryMs);
      retryMs = Math.min(retryMs * 2, RETRY_MS_MAX);
    };
    ws.onerror = () => ws?.close();
  }

  bendValue.textContent = bendSlider.value;
  bendSlider.addEventListener("input", () => {
    bendValue.textContent = bendSlider.value;
  });

  let held = false;
  pressBtn.addEventListener("pointerdown", (ev) => {
    ev.preventDefault();
    pressBtn.setPointerCapture(ev.pointerId);
    if (!held && session.press(Number(bendSlider.value))) {
      held = true;
      pressBtn.classList.add("held");
    }
  });
  const endPress = (): void => {
    if (held) {
      held = false;
      pressBtn.classList.remove("held");
      session.release();
    }
  };
  pressBtn.addEventListener("pointerup", endPress);
  pressBtn.addEventListener("pointercancel", endPress);

  function applyNumber(input: HTMLInputElement, what: string, send: (v: number) => boolean): void {
    const value = Number(input.value);
    if (input.value.trim() === "" || !Number.isFinite(value)) {
      showToast(`${what} must be a number`);
      return;
    }
    try {
      send(value);
    } catch (err) {
      showToast(String(err instanceof Error ? err.message : err));
    }
  }
  spApply.addEventListener("click", () => applyNumber(spInput, "setpoint", (v) => session.setRpm(v)));
  loadApply.addEventListener("click", () => applyNumber(loadInput, "load", (v) => session.setLoad(v)));

  setInterval(() => {
    if (session.canSend) {
      session.requestStatus();
    }
  }, STATUS_POLL_MS);
  setInterval(() => drawChart(canvas, session.frames, SERIES), REDRAW_MS);

  controls.disabled = true;
  connect();
}

if (typeof document !== "undefined") {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", start);
  } else {
    start();
  }
}
