from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest


class _FakeServer:
    """Tiny JSON HTTP server for exercising the remote adapters."""

    def __init__(self, handler_factory):
        self.requests: list[dict] = []
        self.dim = 16
        self.fail = False
        server_ref = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                body = json.loads(self.rfile.read(length) or b"{}")
                server_ref.requests.append(body)
                if server_ref.fail:
                    self.send_response(500)
                    self.end_headers()
                    return
                status, payload = handler_factory(server_ref, body)
                data = json.dumps(payload).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def do_GET(self):
                data = b'{"object":"list","data":[]}'
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.url = f"http://127.0.0.1:{self._httpd.server_port}"
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()

    def close(self):
        self._httpd.shutdown()
        self._httpd.server_close()


@pytest.fixture
def embedding_server():
    def handle(server, body):
        text = body.get("input", "")
        vec = [float((hash_stable(text) + i) % 7 + 1) for i in range(server.dim)]
        return 200, {"embedding": vec}

    server = _FakeServer(handle)
    try:
        yield server
    finally:
        server.close()


@pytest.fixture
def completion_server():
    def handle(server, body):
        return 200, {"choices": [{"text": f"echo:{len(body.get('prompt', ''))}"}]}

    server = _FakeServer(handle)
    try:
        yield server
    finally:
        server.close()


def hash_stable(text: str) -> int:
    acc = 0
    for ch in text:
        acc = (acc * 31 + ord(ch)) % 1_000_003
    return acc


# -- acceptance criterion reporting -------------------------------------------

def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\n[ACCEPTANCE {status}] {name}", flush=True)
