// Wire codec for the bench line protocol: render outgoing command lines,
// classify and parse incoming lines.  Parsing is defensive: anything that
// does not match a known shape comes back as kind "other" instead of
// throwing, so a noisy stream can never take the UI down.
const NUMBER = /^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$/;
function parseNumber(token) {
    if (!NUMBER.test(token)) {
        return null;
    }
    const value = Number(token);
    return Number.isFinite(value) ? value : null;
}
function formatNumber(value, what) {
    if (!Number.isFinite(value)) {
        throw new RangeError(`${what} must be finite, got ${value}`);
    }
    return String(value);
}
export function pingLine() {
    return "PING\n";
}
export function pressLine(bendDeg) {
    if (!Number.isFinite(bendDeg) || bendDeg < 0 || bendDeg > 180) {
        throw new RangeError(`bend must be in [0, 180] degrees, got ${bendDeg}`);
    }
    return `PRESS ${formatNumber(bendDeg, "bend")}\n`;
}
export function releaseLine() {
    return "RELEASE\n";
}
export function setRpmLine(rpm) {
    return `SET RPM ${formatNumber(rpm, "setpoint")}\n`;
}
export function setLoadLine(torqueNm) {
    return `SET LOAD ${formatNumber(torqueNm, "load")}\n`;
}
export function getStatusLine() {
    return "GET STATUS\n";
}
export function streamLine(on) {
    return on ? "STREAM ON\n" : "STREAM OFF\n";
}
function parseFrame(line) {
    const tokens = line.split(" ");
    if (tokens.length !== 7) {
        return { kind: "other", line };
    }
    const values = [];
    for (const token of tokens.slice(1)) {
        const value = parseNumber(token);
        if (value === null) {
            return { kind: "other", line };
        }
        values.push(value);
    }
    const [t, rpm, duty, adc, counts, pos] = values;
    return { kind: "frame", frame: { t, rpm, duty, adc, counts, pos } };
}
const STATUS_KEYS = ["t", "rpm", "sp", "duty", "adc", "pressed", "pos", "dir"];
function parseStatus(line) {
    const tokens = line.split(" ");
    if (tokens.length !== STATUS_KEYS.length + 1) {
        return { kind: "other", line };
    }
    const fields = new Map();
    for (const token of tokens.slice(1)) {
        const eq = token.indexOf("=");
        if (eq <= 0) {
            return { kind: "other", line };
        }
        fields.set(token.slice(0, eq), token.slice(eq + 1));
    }
    for (const key of STATUS_KEYS) {
        if (!fields.has(key)) {
            return { kind: "other", line };
        }
    }
    const numeric = {};
    for (const key of ["t", "rpm", "sp", "duty", "adc", "pos"]) {
        const value = parseNumber(fields.get(key));
        if (value === null) {
            return { kind: "other", line };
        }
        numeric[key] = value;
    }
    const pressedRaw = fields.get("pressed");
    if (pressedRaw !== "0" && pressedRaw !== "1") {
        return { kind: "other", line };
    }
    const dir = fields.get("dir");
    if (dir !== "CW" && dir !== "CCW" && dir !== "STOP") {
        return { kind: "other", line };
    }
    return {
        kind: "status",
        status: {
            t: numeric.t,
            rpm: numeric.rpm,
            sp: numeric.sp,
            duty: numeric.duty,
            adc: numeric.adc,
            pressed: pressedRaw === "1",
            pos: numeric.pos,
            dir,
        },
    };
}
export function parseInbound(raw) {
    const line = raw.endsWith("\r") ? raw.slice(0, -1) : raw;
    if (line === "PONG") {
        return { kind: "pong" };
    }
    if (line === "OK") {
        return { kind: "ok" };
    }
    if (line.startsWith("ERR ")) {
        return { kind: "err", message: line.slice(4) };
    }
    if (line.startsWith("T ")) {
        return parseFrame(line);
    }
    if (line.startsWith("STATUS ")) {
        return parseStatus(line);
    }
    return { kind: "other", line };
}
