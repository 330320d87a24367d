"""Shared fixture: the service running on a real local port."""

import socket
import threading
import time

import httpx
import pytest
import uvicorn

from pairforge_shim import EchoBackend, ShimConfig, create_app


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="session")
def server_url():
    """Run the app under uvicorn in a thread and wait until it answers."""
    port = _free_port()
    app = create_app(EchoBackend(), ShimConfig(max_input_chars=200))
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    url = f"http://127.0.0.1:{port}"
    deadline = time.monotonic() + 10
    while time.monotonic() < deadline:
        try:
            if httpx.get(f"{url}/health", timeout=1).status_code == 200:
                break
        except httpx.HTTPError:
            time.sleep(0.05)
    else:
        raise RuntimeError("shim server did not start")
    yield url
    server.should_exit = True
    thread.join(timeout=5)
