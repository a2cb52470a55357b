"""End-to-end acceptance suite.

Each test exercises one headline requirement through the public
interfaces and records a one-line verdict that is printed after the
pytest summary.  Unit tests cover the fine-grained contracts; these
tests pin the bench-level behaviors with their stated tolerances.
"""

import random
import time

import pytest

from simbench.cli import main
from simbench.config import SimConfig
from simbench.encoder import TWO_PI, DecoderState, EncoderSpec, encoder_emit, quad_decode
from simbench.errors import BadArg, SimError, UnknownCommand
from simbench.firmware import ControlLaw
from simbench.hbridge import BridgeInputs, DriveMode, bridge_resolve
from simbench.plant import PlantParams, PlantState, LoadSpec, plant_step, steady_state_speed
from simbench.protocol import (
    GetStatus,
    Ping,
    Press,
    Release,
    SetLoad,
    SetRpm,
    Stream,
    parse_command,
    render_command,
)
from simbench.scope import Recorder, TraceConfig, export_csv, import_csv, logic_level
from simbench.simcore import Bench, parse_scenario, run_scenario

from _helpers import closed_loop

SPEC = EncoderSpec()


def _sweep_counts(theta_end: float, samples: int) -> int:
    """Decode a uniformly sampled analytic ramp from 0 to theta_end."""
    state = DecoderState.from_sample(encoder_emit(0.0, SPEC))
    for k in range(1, samples + 1):
        state, _ = quad_decode(state, encoder_emit(theta_end * k / samples, SPEC))
    return state.total_counts


def _trajectory_counts(revs_out: float, duration: float, sample_hz: float) -> int:
    """Decode a constant-speed trajectory sampled on a fixed time grid."""
    omega = revs_out * SPEC.gear_ratio * TWO_PI / duration
    state = DecoderState.from_sample(encoder_emit(0.0, SPEC))
    n = round(duration * sample_hz)
    for k in range(1, n + 1):
        state, _ = quad_decode(state, encoder_emit(omega * k / sample_hz, SPEC))
    return state.total_counts


def test_count_math(verdict):
    start = time.perf_counter()
    motor = _sweep_counts(TWO_PI, 64 * 8)
    output = _sweep_counts(TWO_PI * SPEC.gear_ratio, 8400 * 4)
    traj_out = _trajectory_counts(1.0, 1.0, 20_000.0)
    traj_motor = _sweep_counts(TWO_PI, 1_000)
    elapsed = time.perf_counter() - start
    ok = (
        motor == 64
        and output == 8400
        and abs(traj_out - 8400) <= 1
        and abs(traj_motor - 64) <= 1
        and elapsed < 1.0
    )
    verdict("count math: 64 per motor rev, 8400 per output rev", ok)


def _phase_run(rpm_out: float, duration: float = 0.1):
    """Mean A-rising to next-B-rising offset (cycles) plus decoder deltas."""
    omega = rpm_out * SPEC.gear_ratio * TWO_PI / 60.0
    f_cycle = abs(omega) / TWO_PI * SPEC.lines_per_rev
    per_cycle = 400
    dt = 1.0 / (f_cycle * per_cycle)
    n = int(duration / dt)
    state = DecoderState.from_sample(encoder_emit(0.0, SPEC))
    prev = state.prev
    a_rise, b_rise, deltas = [], [], []
    for k in range(1, n + 1):
        q = encoder_emit(omega * k * dt, SPEC)
        if q.a and not prev.a:
            a_rise.append(k)
        if q.b and not prev.b:
            b_rise.append(k)
        state, d = quad_decode(state, q)
        if d:
            deltas.append(d)
        prev = q
    offsets = []
    j = 0
    for ka in a_rise:
        while j < len(b_rise) and b_rise[j] <= ka:
            j += 1
        if j == len(b_rise):
            break
        offsets.append((b_rise[j] - ka) / per_cycle)
    mean = sum(offsets) / len(offsets)
    return mean, deltas, state.invalid_transitions


def test_quadrature_phase_and_direction(verdict):
    fwd_mean, fwd_deltas, fwd_invalid = _phase_run(30.0)
    rev_mean, rev_deltas, rev_invalid = _phase_run(-30.0)
    ok = (
        abs(fwd_mean - 0.25) <= 0.02
        and abs(rev_mean - 0.75) <= 0.02
        and len(fwd_deltas) > 300
        and all(d == 1 for d in fwd_deltas)
        and all(d == -1 for d in rev_deltas)
        and fwd_invalid == 0
        and rev_invalid == 0
    )
    verdict("quadrature: 25% phase offset, direction from edge order", ok)


def _edges_per_second(f_rev: float, tmp_path) -> int:
    """Rising edges of enc_a over a 1 s window of an exported, re-read CSV."""
    cfg = TraceConfig(signals=("enc_a", "enc_b"), duration=1.0)
    rec = Recorder(cfg)
    omega = f_rev * TWO_PI
    for k in range(cfg.rows):
        q = encoder_emit(omega * k / cfg.sample_hz, SPEC)
        rec.sample(k / cfg.sample_hz, {"enc_a": logic_level(q.a), "enc_b": logic_level(q.b)})
    path = tmp_path / f"enc_{f_rev}.csv"
    export_csv(rec.trace(), path)
    col = import_csv(path).column("enc_a")
    return sum(1 for lo, hi in zip(col, col[1:]) if lo < 2.5 <= hi)


def test_frequency_speed_law(verdict, tmp_path):
    ok = True
    for f_rev in (65.625, 26.25, 10.0):
        measured = _edges_per_second(f_rev, tmp_path)
        ok = ok and abs(measured - 16.0 * f_rev) <= 1.0
    verdict("frequency law: channel frequency = 16 x rev rate", ok)


def test_hbridge_truth_table(verdict):
    table = [
        (True, False, 1.0, DriveMode.DRIVE, 12.0),
        (True, False, 0.5, DriveMode.DRIVE, 6.0),
        (True, False, 0.0, DriveMode.COAST, 0.0),
        (False, True, 1.0, DriveMode.DRIVE, -12.0),
        (False, True, 0.5, DriveMode.DRIVE, -6.0),
        (False, True, 0.0, DriveMode.COAST, 0.0),
        (True, True, 0.7, DriveMode.BRAKE, 0.0),
        (False, False, 0.7, DriveMode.BRAKE, 0.0),
    ]
    ok = True
    for in1, in2, duty, mode, v_eff in table:
        drive = bridge_resolve(BridgeInputs(in1=in1, in2=in2, ena_duty=duty))
        ok = ok and drive.mode is mode and drive.v_eff == pytest.approx(v_eff)
    rng = random.Random(8181)
    for _ in range(10_000):
        in1, in2 = rng.random() < 0.5, rng.random() < 0.5
        duty, vs = rng.random(), rng.uniform(1.0, 48.0)
        a = bridge_resolve(BridgeInputs(in1=in1, in2=in2, ena_duty=duty, v_supply=vs))
        b = bridge_resolve(BridgeInputs(in1=in2, in2=in1, ena_duty=duty, v_supply=vs))
        ok = ok and a.mode is b.mode and abs(a.v_eff + b.v_eff) < 1e-12 and abs(a.v_eff) <= vs
    verdict("h-bridge: truth table and drive properties", ok)


def test_on_off_cycle(verdict):
    cfg = SimConfig(control=ControlLaw.BANG)
    sc = parse_scenario("DURATION 4.5\nAT 1 PRESS 45\nAT 4 RELEASE\n")
    traces = TraceConfig(signals=("pressed_5v", "rpm"), duration=4.5, sample_hz=1000.0)
    result = run_scenario(cfg, sc, traces)
    pressed = result.trace.column("pressed_5v")

    before = all(pressed[k] == 0.0 for k in range(0, 1000))
    during = all(pressed[k] == 5.0 for k in range(1001, 4000))

    est = []
    for frame in result.telemetry:
        parts = frame.decode("ascii").split()
        est.append((float(parts[1]), float(parts[2])))
    spins = all(rpm > 0.0 for t, rpm in est if 1.5 + 1e-9 < t < 4.0 - 1e-9)
    stop_by = 4.0 + 5.0 * PlantParams().tau_mech
    stopped = all(rpm < 1.0 for t, rpm in est if t >= stop_by)
    ok = before and during and spins and stopped and result.status.rpm < 1.0
    verdict("on/off cycle: press spins the motor, release stops it", ok)


def test_speed_hold_and_load_step(verdict):
    start = time.perf_counter()
    samples = closed_loop(4.5, 60.0, load_at=2.5, tau=0.05)
    elapsed = time.perf_counter() - start
    band = 60.0 * 0.02

    def rpm_true(state):
        return state.omega_m / SPEC.gear_ratio * 60.0 / TWO_PI

    duty_ok = all(0.0 <= duty <= 1.0 for _, _, duty, _ in samples)
    settled = [s for s in samples if 2.0 <= s[0] < 2.5]
    resettled = [s for s in samples if 4.0 <= s[0] <= 4.5]
    hold = all(abs(est - 60.0) <= band and abs(rpm_true(st) - 60.0) <= band
               for _, est, _, st in settled)
    reject = all(abs(est - 60.0) <= band and abs(rpm_true(st) - 60.0) <= band
                 for _, est, _, st in resettled)
    ok = duty_ok and hold and reject and settled and resettled and elapsed < 5.0
    verdict("speed hold: 60 RPM settles in 2 s, load step rejected in 1.5 s", bool(ok))


def test_plant_steady_state_oracle(verdict):
    rng = random.Random(20240820)
    ok = True
    for _ in range(100):
        r = rng.uniform(0.5, 10.0)
        k = rng.uniform(0.005, 0.05)
        j = rng.uniform(1e-7, 1e-5)
        b = rng.uniform(1e-7, 1e-5)
        gear = rng.uniform(50.0, 200.0)
        eff = rng.uniform(0.7, 1.0)
        tau = j * r / (k * k)
        alpha = rng.uniform(1.0 / 200.0, 1.0 / 40.0)
        p = PlantParams(
            r_armature=r, l_armature=alpha * r * tau, k_e=k, k_t=k,
            j_rotor=j, b_visc=b, gear_ratio=gear, gear_eff=eff,
            v_supply=24.0, stroke_max=1e9,
        )
        v = rng.choice((-1.0, 1.0)) * rng.uniform(3.0, 24.0)
        tau_ext = rng.uniform(0.0, 0.3) * k * abs(v) / r * gear * eff
        dt = p.dt_max / 2.0
        steps = round(12.0 * tau / dt)
        # start mid-stroke so neither end stop interferes with the sweep
        state = PlantState.at_rest(pos=5e8)
        for _ in range(steps):
            state = plant_step(state, p, v, LoadSpec(tau_ext), dt)
        expect = steady_state_speed(p, v, tau_ext)
        ok = ok and abs(state.omega_m - expect) <= 1e-3 * max(1.0, abs(expect))
    verdict("plant oracle: steady state matches the closed form", ok)


def _random_line(rng: random.Random):
    templates = (
        "PING", "RELEASE", "GET STATUS", "STREAM ON", "STREAM OFF",
        "PRESS {v}", "SET RPM {v}", "SET LOAD {v}",
    )
    numbers = ("45", "-3.5", "1e2", "0.0", "200", "-1", "nan", "inf",
               "0x10", "", "60_0", "12.", ".5", "+7", "1e", "--2")
    r = rng.random()
    if r < 0.35:
        line = rng.choice(templates).format(v=rng.choice(numbers))
    elif r < 0.55:
        line = rng.choice(templates).format(v=rng.choice(numbers))
        k = rng.randrange(max(1, len(line)))
        line = line[:k] + rng.choice("pP sS\t~#") + line[k:]
    elif r < 0.75:
        words = ["PING", "PRESS", "SET", "RPM", "LOAD", "GET", "STATUS",
                 "STREAM", "ON", "OFF", "RELEASE", "45", "foo"]
        line = " ".join(rng.choice(words) for _ in range(rng.randrange(0, 4)))
    elif r < 0.95:
        alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 .+-_"
        line = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 20)))
    else:
        return bytes(rng.randrange(0, 256) for _ in range(rng.randrange(0, 12))) + b"\n"
    return (line + "\n").encode("utf-8")


def test_protocol_fuzz(verdict):
    variants = [Ping(), Release(), GetStatus(), Stream(True), Stream(False),
                Press(45.0), Press(0.0), SetRpm(-12.5), SetLoad(0.01)]
    round_trip = all(parse_command(render_command(c)) == c for c in variants)

    rng = random.Random(99)
    bench = Bench(SimConfig())
    replies = 0
    total = 100_000
    ok = True
    for _ in range(total):
        line = _random_line(rng)
        snap = (bench.bend, bench.extra_load, bench.fw.setpoint_rpm)
        try:
            cmd = parse_command(line)
        except (UnknownCommand, BadArg):
            replies += 1
            ok = ok and snap == (bench.bend, bench.extra_load, bench.fw.setpoint_rpm)
            continue
        try:
            reply = bench.apply(cmd)
        except SimError:
            replies += 1
            ok = ok and snap == (bench.bend, bench.extra_load, bench.fw.setpoint_rpm)
            continue
        replies += 1
        ok = ok and reply.endswith(b"\n")
        if isinstance(cmd, Press):
            ok = ok and bench.bend == cmd.bend
        elif isinstance(cmd, Release):
            ok = ok and bench.bend == 0.0
        elif isinstance(cmd, SetRpm):
            ok = ok and bench.fw.setpoint_rpm == cmd.rpm
        elif isinstance(cmd, SetLoad):
            ok = ok and bench.extra_load == cmd.tau
        else:
            ok = ok and snap == (bench.bend, bench.extra_load, bench.fw.setpoint_rpm)
    ok = ok and replies == total and round_trip
    verdict("protocol: fuzz-safe, exactly one reply per line", ok)


def test_determinism(verdict, tmp_path, capsys):
    scenario = tmp_path / "seq.scn"
    scenario.write_text(
        "DURATION 1\n"
        "AT 0 SET RPM 60\n"
        "AT 0.2 PRESS 40\n"
        "AT 0.5 SET LOAD 0.02\n"
        "AT 0.8 RELEASE\n"
    )
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        rc = main(["run", "--scenario", str(scenario), "--out", str(out)])
        status = capsys.readouterr().out
        assert rc == 0
        outputs.append(
            (
                (out / "trace.csv").read_bytes(),
                (out / "telemetry.log").read_bytes(),
                status,
            )
        )
    ok = outputs[0] == outputs[1] and len(outputs[0][0]) > 10_000
    verdict("determinism: identical runs produce identical bytes", ok)
