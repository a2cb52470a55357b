"""Network front end: stream-socket control port plus the UI gateway.

A single asyncio task owns the Bench and steps it (realtime-paced or
free-running per config).  Every inbound line from every transport goes
through one ordered queue into that task, so command effects and replies
are serialized; telemetry fan-out is non-blocking and a slow client loses
frames rather than stalling the simulation.  The gateway serves the
dashboard statically and speaks the identical line protocol over a
WebSocket at /ws.
"""

from __future__ import annotations

import asyncio
import contextlib
import errno
import signal
import socket
from pathlib import Path
from typing import Optional, Union

import uvicorn
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .config import MODE_REALTIME, SimConfig
from .errors import BadArg, PortInUse, SimError, UnknownCommand
from .protocol import ERR_BAD_ARG, ERR_UNKNOWN, Stream, format_telemetry, parse_command
from .scope import Recorder, TraceConfig, export_csv
from .simcore import Bench, scope_decimation

_FRAME_BACKLOG = 256      # frames a slow client may queue before dropping
_CHUNK_SIM_S = 0.01       # realtime pacing granularity
_SERVE_TRACE_SIGNALS = ("rpm", "duty", "v_bridge", "flex_node", "pressed_5v", "pos")
_SERVE_TRACE_S = 30.0     # captured from startup, flushed on shutdown


class _Client:
    """One connected peer: an outbox plus its streaming flag."""

    def __init__(self, name: str):
        self.name = name
        self.streaming = False
        self.outbox: asyncio.Queue[bytes] = asyncio.Queue()
        self.dropped_frames = 0

    def send_reply(self, data: bytes) -> None:
        self.outbox.put_nowait(data)

    def send_frame(self, data: bytes) -> None:
        if self.outbox.qsize() >= _FRAME_BACKLOG:
            self.dropped_frames += 1
            return
        self.outbox.put_nowait(data)


def _bind(host: str, port: int, what: str) -> socket.socket:
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        if exc.errno == errno.EADDRINUSE:
            raise PortInUse(f"{what} port {port} is already in use") from exc
        raise
    sock.listen(128)
    return sock


class BenchServer:
    """Owns the bench, the control listener, and the UI gateway."""

    def __init__(
        self,
        cfg: SimConfig,
        host: str = "127.0.0.1",
        out_dir: Union[str, Path, None] = None,
    ):
        self.cfg = cfg
        self.host = host
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.bench = Bench(cfg)
        self.queue: asyncio.Queue[tuple[bytes, _Client]] = asyncio.Queue()
        self.clients: set[_Client] = set()
        trace_cfg = TraceConfig(
            signals=_SERVE_TRACE_SIGNALS,
            duration=_SERVE_TRACE_S,
            sample_hz=cfg.scope_slow_hz,
        )
        self.recorder = Recorder(trace_cfg)
        self._decim = scope_decimation(cfg, trace_cfg)
        self.tcp_port = 0
        self.http_port = 0
        self._tcp_server: Optional[asyncio.AbstractServer] = None
        self._uvicorn: Optional[uvicorn.Server] = None
        self._tasks: list[asyncio.Task] = []

    # -- lifecycle -----------------------------------------------------

    async def start(self) -> None:
        tcp_sock = _bind(self.host, self.cfg.port, "control")
        try:
            http_sock = _bind(self.host, self.cfg.http_port, "gateway")
        except PortInUse:
            tcp_sock.close()
            raise
        self.tcp_port = tcp_sock.getsockname()[1]
        self.http_port = http_sock.getsockname()[1]

        self._tcp_server = await asyncio.start_server(
            self._handle_tcp, sock=tcp_sock, limit=8192
        )
        uv_cfg = uvicorn.Config(
            self._build_app(), log_level="warning", lifespan="off", ws_ping_interval=None
        )
        self._uvicorn = uvicorn.Server(uv_cfg)
        self._tasks.append(asyncio.create_task(self._uvicorn.serve(sockets=[http_sock])))
        while not self._uvicorn.started and not self._tasks[-1].done():
            await asyncio.sleep(0.005)
        if self._tasks[-1].done():
            raise self._tasks[-1].exception() or RuntimeError("gateway failed to start")
        self._tasks.append(asyncio.create_task(self._sim_loop()))

    async def stop(self) -> None:
        if self._tcp_server is not None:
            self._tcp_server.close()
            await self._tcp_server.wait_closed()
        if self._uvicorn is not None:
            self._uvicorn.should_exit = True
        for task in self._tasks:
            task.cancel()
        for task in self._tasks:
            with contextlib.suppress(asyncio.CancelledError, Exception):
                await task
        self.flush_trace()

    def flush_trace(self) -> None:
        if self.out_dir is None:
            return
        trace = self.recorder.trace()
        if not trace.t:
            return
        self.out_dir.mkdir(parents=True, exist_ok=True)
        export_csv(trace, self.out_dir / "serve_trace.csv")

    # -- simulation task ----------------------------------------------

    def _drain_commands(self) -> None:
        while not self.queue.empty():
            line, client = self.queue.get_nowait()
            try:
                cmd = parse_command(line)
            except UnknownCommand:
                client.send_reply(ERR_UNKNOWN)
                continue
            except BadArg:
                client.send_reply(ERR_BAD_ARG)
                continue
            if isinstance(cmd, Stream):
                client.streaming = cmd.on
                client.send_reply(b"OK\n")
                continue
            try:
                reply = self.bench.apply(cmd)
            except SimError:
                reply = ERR_BAD_ARG
            client.send_reply(reply)

    def _step_once(self) -> None:
        bench = self.bench
        n = bench.step_index
        if n % bench.steps_per_tick == 0:
            bench.fw_tick()
        if n % self._decim == 0:
            self.recorder.sample((n // self._decim) / self.recorder.cfg.sample_hz, bench.probe())
        if n % bench.steps_per_frame == 0:
            frame = format_telemetry(bench.telemetry())
            for client in self.clients:
                if client.streaming:
                    client.send_frame(frame)
        bench.plant_advance()

    async def _sim_loop(self) -> None:
        loop = asyncio.get_running_loop()
        chunk = max(1, round(_CHUNK_SIM_S / self.cfg.dt_plant))
        realtime = self.cfg.mode == MODE_REALTIME
        started = loop.time()
        simulated = 0.0
        while True:
            self._drain_commands()
            for _ in range(chunk):
                self._step_once()
            simulated += chunk * self.cfg.dt_plant
            if realtime:
                delay = started + simulated - loop.time()
                if delay > 0:
                    await asyncio.sleep(delay)
                else:
                    await asyncio.sleep(0)
            else:
                await asyncio.sleep(0)

    # -- transports ----------------------------------------------------

    async def _writer_pump(self, client: _Client, writer: asyncio.StreamWriter) -> None:
        while True:
            data = await client.outbox.get()
            writer.write(data)
            await writer.drain()

    async def _handle_tcp(
        self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter
    ) -> None:
        peer = writer.get_extra_info("peername")
        client = _Client(name=f"tcp:{peer}")
        self.clients.add(client)
        pump = asyncio.create_task(self._writer_pump(client, writer))
        try:
            while True:
                try:
                    line = await reader.readline()
                except (ValueError, ConnectionError):
                    break
                if not line:
                    break
                if not line.endswith(b"\n"):
                    break  # EOF hit mid-line; nothing valid to answer
                await self.queue.put((line, client))
        finally:
            self.clients.discard(client)
            pump.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await pump
            writer.close()
            with contextlib.suppress(Exception):
                await writer.wait_closed()

    def _build_app(self) -> FastAPI:
        app = FastAPI()
        server = self

        @app.websocket("/ws")
        async def ws_endpoint(ws: WebSocket) -> None:
            await ws.accept()
            client = _Client(name="ws")
            server.clients.add(client)

            async def pump() -> None:
                while True:
                    data = await client.outbox.get()
                    await ws.send_text(data.decode("ascii"))

            sender = asyncio.create_task(pump())
            try:
                while True:
                    text = await ws.receive_text()
                    for part in text.split("\n"):
                        if part:
                            await server.queue.put((part.encode() + b"\n", client))
            except WebSocketDisconnect:
                pass
            finally:
                server.clients.discard(client)
                sender.cancel()
                with contextlib.suppress(asyncio.CancelledError):
                    await sender

        static_dir = Path(__file__).with_name("static")
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")
        return app


async def serve(
    cfg: SimConfig,
    host: str = "127.0.0.1",
    out_dir: Union[str, Path, None] = None,
) -> None:
    """Run the bench until interrupted; flushes the scope trace on exit."""
    server = BenchServer(cfg, host=host, out_dir=out_dir)
    await server.start()
    stop = asyncio.Event()
    loop = asyncio.get_running_loop()
    for sig in (signal.SIGINT, signal.SIGTERM):
        with contextlib.suppress(NotImplementedError, RuntimeError, ValueError):
            loop.add_signal_handler(sig, stop.set)
    print(f"simbench serving: control on {host}:{server.tcp_port}, "
          f"ui on http://{host}:{server.http_port}/", flush=True)
    try:
        await stop.wait()
    finally:
        await server.stop()
