import { expect, test } from "vitest";

import {
  getStatusLine,
  parseInbound,
  pingLine,
  pressLine,
  releaseLine,
  setLoadLine,
  setRpmLine,
  streamLine,
} from "../src/protocol.js";

test("commands render to canonical wire lines", () => {
  expect(pingLine()).toBe("PING\n");
  expect(pressLine(45)).toBe("PRESS 45\n");
  expect(pressLine(0)).toBe("PRESS 0\n");
  expect(pressLine(180)).toBe("PRESS 180\n");
  expect(pressLine(45.5)).toBe("PRESS 45.5\n");
  expect(releaseLine()).toBe("RELEASE\n");
  expect(setRpmLine(60)).toBe("SET RPM 60\n");
  expect(setRpmLine(-30)).toBe("SET RPM -30\n");
  expect(setRpmLine(0)).toBe("SET RPM 0\n");
  expect(setLoadLine(0.05)).toBe("SET LOAD 0.05\n");
  expect(getStatusLine()).toBe("GET STATUS\n");
  expect(streamLine(true)).toBe("STREAM ON\n");
  expect(streamLine(false)).toBe("STREAM OFF\n");
});

test("out-of-range or non-finite arguments are rejected before the wire", () => {
  expect(() => pressLine(-1)).toThrow(RangeError);
  expect(() => pressLine(180.1)).toThrow(RangeError);
  expect(() => pressLine(NaN)).toThrow(RangeError);
  expect(() => pressLine(Infinity)).toThrow(RangeError);
  expect(() => setRpmLine(NaN)).toThrow(RangeError);
  expect(() => setRpmLine(-Infinity)).toThrow(RangeError);
  expect(() => setLoadLine(NaN)).toThrow(RangeError);
});

test("telemetry frames parse field for field", () => {
  const msg = parseInbound("T 1.250 60.00 0.836 700 10500 1.52");
  expect(msg.kind).toBe("frame");
  if (msg.kind === "frame") {
    expect(msg.frame).toEqual({
      t: 1.25,
      rpm: 60,
      duty: 0.836,
      adc: 700,
      counts: 10500,
      pos: 1.52,
    });
  }
  const idle = parseInbound("T 0.000 0.00 0.000 355 0 0.00");
  expect(idle.kind).toBe("frame");
  if (idle.kind === "frame") {
    expect(idle.frame.t).toBe(0);
    expect(idle.frame.adc).toBe(355);
  }
});

test("malformed frames fall through to other instead of throwing", () => {
  const bad = [
    "T 1 2 3",
    "T 1 2 3 4 5 6 7",
    "T x 2 3 4 5 6",
    "T 1 2 3 4 5 nan",
    "T 1 2 3 4 5 inf",
    "T 1 2 3 4 5 0x10",
    "T 1 2 3 4 5 6_0",
    "T  1 2 3 4 5 6",
  ];
  for (const line of bad) {
    expect(parseInbound(line).kind).toBe("other");
  }
});

test("status lines parse into a typed report", () => {
  const msg = parseInbound(
    "STATUS t=1.250 rpm=60.00 sp=60.00 duty=0.836 adc=700 pressed=1 pos=1.52 dir=CW",
  );
  expect(msg.kind).toBe("status");
  if (msg.kind === "status") {
    expect(msg.status).toEqual({
      t: 1.25,
      rpm: 60,
      sp: 60,
      duty: 0.836,
      adc: 700,
      pressed: true,
      pos: 1.52,
      dir: "CW",
    });
  }
  const zero = parseInbound(
    "STATUS t=0.000 rpm=0.00 sp=0.00 duty=0.000 adc=0 pressed=0 pos=0.00 dir=STOP",
  );
  expect(zero.kind).toBe("status");
  if (zero.kind === "status") {
    expect(zero.status.pressed).toBe(false);
    expect(zero.status.dir).toBe("STOP");
  }
});

test("malformed status lines fall through to other", () => {
  const bad = [
    "STATUS t=1 rpm=0 sp=0 duty=0 adc=0 pressed=0 pos=0 dir=UP",
    "STATUS t=1 rpm=0 sp=0 duty=0 adc=0 pressed=2 pos=0 dir=CW",
    "STATUS t=1 rpm=0 sp=0 duty=0 adc=0 pressed=0 pos=0",
    "STATUS t=1 t=2 sp=0 duty=0 adc=0 pressed=0 pos=0 dir=CW",
    "STATUS t=x rpm=0 sp=0 duty=0 adc=0 pressed=0 pos=0 dir=CW",
    "STATUS =1 rpm=0 sp=0 duty=0 adc=0 pressed=0 pos=0 dir=CW",
  ];
  for (const line of bad) {
    expect(parseInbound(line).kind).toBe("other");
  }
});

test("replies and errors classify, carriage returns are tolerated", () => {
  expect(parseInbound("PONG").kind).toBe("pong");
  expect(parseInbound("PONG\r").kind).toBe("pong");
  expect(parseInbound("OK").kind).toBe("ok");
  const err = parseInbound("ERR bad-arg: PRESS angle out of range");
  expect(err.kind).toBe("err");
  if (err.kind === "err") {
    expect(err.message).toBe("bad-arg: PRESS angle out of range");
  }
  expect(parseInbound("").kind).toBe("other");
  expect(parseInbound("pong").kind).toBe("other");
  expect(parseInbound("STATUSX t=1").kind).toBe("other");
  expect(parseInbound("t 1 2 3 4 5 6").kind).toBe("other");
});

// deterministic PRNG so the garbage corpus is reproducible
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

test("arbitrary input never throws and always classifies", () => {
  const rng = mulberry32(0xbeef);
  const kinds = new Set(["frame", "status", "err", "ok", "pong", "other"]);
  const pieces = ["T", "STATUS", "ERR", "OK", "PONG", "t=", "dir=CW", "1.5", "nan", "=", " "];
  for (let i = 0; i < 5000; i++) {
    let line = "";
    const mode = rng();
    if (mode < 0.4) {
      const n = Math.floor(rng() * 8);
      for (let j = 0; j < n; j++) {
        line += pieces[Math.floor(rng() * pieces.length)];
        if (rng() < 0.7) line += " ";
      }
    } else {
      const n = Math.floor(rng() * 40);
      for (let j = 0; j < n; j++) {
        line += String.fromCharCode(Math.floor(rng() * 256));
      }
    }
    const msg = parseInbound(line);
    expect(kinds.has(msg.kind)).toBe(true);
  }
});
