"""HTTP + JSON console API over a live runtime.

Endpoints (all JSON; schemas mirror the runtime snapshot and audit types
field for field):

    GET  /state                   runtime snapshot
    GET  /procedure               steps, lifecycle, compiled paths
    GET  /audit?since=SEQ         audit records after SEQ
    POST /approvals/{approval_id} body {"decision": "approved"|"rejected"}
    GET  /events?since=SEQ        server-sent events, one per audit record

Anything else serves static console files from ``ui_dir`` when configured.
The runtime is driven by a background replay thread that pauses at every
gated step until an approval arrives through POST; identical inputs plus
identical decisions reproduce the headless audit log byte for byte.
"""
from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .config import Scenario
from .errors import ExpiredApprovalError, UnknownApprovalError
from .gate import Verdict
from .perception import TelemetryFrame
from .procedures import Lifecycle
from .runtime import RunMode, Runtime

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".map": "application/json",
}


class ConsoleServer:
    """Owns the runtime, the replay thread, and the HTTP server."""

    def __init__(
        self,
        scenario: Scenario,
        frames: list[TelemetryFrame],
        port: int = 8787,
        audit_sink=None,
        ui_dir: Path | None = None,
        step_interval_s: float = 0.0,
    ) -> None:
        self.runtime = Runtime(scenario, audit_sink=audit_sink)
        self.frames = frames
        self.ui_dir = ui_dir
        self.step_interval_s = step_interval_s
        self._stop = threading.Event()
        self._driver: threading.Thread | None = None
        handler = _make_handler(self)
        self.httpd = ThreadingHTTPServer(("127.0.0.1", port), handler)
        self.httpd.daemon_threads = True

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    def start(self) -> None:
        self._driver = threading.Thread(target=self._drive, daemon=True)
        self._driver.start()

    def serve_forever(self) -> None:
        self.start()
        try:
            self.httpd.serve_forever(poll_interval=0.1)
        finally:
            self.stop()

    def stop(self) -> None:
        self._stop.set()
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._driver is not None:
            self._driver.join(timeout=5.0)

    # -- replay driver -----------------------------------------------------

    def _drive(self) -> None:
        runtime = self.runtime
        batch = max(1, runtime.scenario.replay_frames_per_step)
        position = 0

        def feed() -> None:
            nonlocal position
            if position < len(self.frames):
                runtime.tick(self.frames[position:position + batch])
                position += batch

        while (
            not self._stop.is_set()
            and runtime.mode is RunMode.IDLE
            and position < len(self.frames)
        ):
            feed()
            if self.step_interval_s:
                time.sleep(self.step_interval_s)

        while not self._stop.is_set() and runtime.mode is RunMode.EVENT_ACTIVE:
            feed()
            assessment = runtime.evaluate_current_step()
            step = runtime.steps[runtime.cursor]
            if assessment.decision.verdict is Verdict.ALLOW:
                if step.lifecycle is Lifecycle.EXECUTED:
                    runtime.advance()
                else:
                    runtime.skip_step(reason="allow verdict, manual execution required")
            else:
                while (
                    not self._stop.is_set()
                    and any(
                        t.step_id == step.id
                        for t in runtime.pending_approvals.values()
                    )
                ):
                    time.sleep(0.02)
                if self._stop.is_set():
                    return
                if step.lifecycle is Lifecycle.EXECUTED:
                    runtime.advance()
                else:
                    runtime.skip_step(reason="approval rejected")
            if self.step_interval_s:
                time.sleep(self.step_interval_s)


def _make_handler(server: ConsoleServer):
    runtime = server.runtime

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, payload, status: int = 200) -> None:
            body = json.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self) -> None:
            url = urlparse(self.path)
            if url.path == "/state":
                self._send_json(runtime.snapshot())
            elif url.path == "/procedure":
                self._send_json(runtime.procedure_view())
            elif url.path == "/audit":
                since = int(parse_qs(url.query).get("since", ["0"])[0])
                self._send_json(
                    {"records": [r.to_dict() for r in runtime.audit.records(since)]}
                )
            elif url.path == "/events":
                self._stream_events(url)
            else:
                self._serve_static(url.path)

        def do_POST(self) -> None:
            url = urlparse(self.path)
            if not url.path.startswith("/approvals/"):
                self._send_json({"error": "not-found"}, status=404)
                return
            approval_id = url.path[len("/approvals/"):]
            length = int(self.headers.get("Content-Length", "0"))
            try:
                body = json.loads(self.rfile.read(length) or b"{}")
                decision = body["decision"]
            except (json.JSONDecodeError, KeyError):
                self._send_json({"error": "bad-request"}, status=400)
                return
            try:
                runtime.submit_approval(approval_id, decision)
            except UnknownApprovalError:
                self._send_json(
                    {"error": "unknown-approval", "approval_id": approval_id}, status=404
                )
            except ExpiredApprovalError:
                self._send_json(
                    {"error": "expired-approval", "approval_id": approval_id}, status=410
                )
            except ValueError:
                self._send_json({"error": "bad-request"}, status=400)
            else:
                self._send_json({"ok": True, "approval_id": approval_id})

        def _stream_events(self, url) -> None:
            since = int(parse_qs(url.query).get("since", ["0"])[0])
            last_id = self.headers.get("Last-Event-ID")
            if last_id is not None:
                since = max(since, int(last_id))
            self.send_response(200)
            self.send_header("Content-Type", "text/event-stream")
            self.send_header("Cache-Control", "no-cache")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            try:
                while not server._stop.is_set():
                    for record in runtime.audit.records(since):
                        payload = f"id: {record.seq}\ndata: {record.to_json()}\n\n"
                        self.wfile.write(payload.encode())
                        since = record.seq
                    self.wfile.flush()
                    time.sleep(0.05)
            except (BrokenPipeError, ConnectionResetError):
                pass

        def _serve_static(self, path: str) -> None:
            if server.ui_dir is None:
                self._send_json({"error": "not-found"}, status=404)
                return
            rel = path.lstrip("/") or "index.html"
            target = (server.ui_dir / rel).resolve()
            if not str(target).startswith(str(server.ui_dir.resolve())) or not target.is_file():
                self._send_json({"error": "not-found"}, status=404)
                return
            body = target.read_bytes()
            self.send_response(200)
            self.send_header(
                "Content-Type",
                _CONTENT_TYPES.get(target.suffix, "application/octet-stream"),
            )
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler
