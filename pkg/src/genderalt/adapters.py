"""Line-delimited JSON transports for plugging in external models.

Two transports, one request per record:

* subprocess pipe: the command is spawned once; each request is one JSON
  line on stdin, each response one JSON line on stdout.
* HTTP: each request is POSTed to the endpoint as a JSON body.

The detector, transformer and aligner wire formats are defined by their
callers (see pipeline); this module only moves JSON objects around.
"""

from __future__ import annotations

import json
import subprocess
import urllib.request
from typing import Sequence


class AdapterError(RuntimeError):
    """Transport-level failure talking to an external model."""


class JsonAdapter:
    def request(self, payload: dict) -> dict:
        raise NotImplementedError

    def close(self) -> None:
        pass


class SubprocessAdapter(JsonAdapter):
    """Speak line-delimited JSON with a long-running child process."""

    def __init__(self, command: Sequence[str]):
        self.command = list(command)
        self._proc: subprocess.Popen | None = None

    def _ensure_started(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        return self._proc

    def request(self, payload: dict) -> dict:
        proc = self._ensure_started()
        try:
            proc.stdin.write(json.dumps(payload, ensure_ascii=False) + "\n")
            proc.stdin.flush()
            line = proc.stdout.readline()
        except (BrokenPipeError, OSError) as exc:
            raise AdapterError(f"adapter process pipe failed: {exc}") from exc
        if not line:
            raise AdapterError("adapter process closed its output")
        try:
            return json.loads(line)
        except json.JSONDecodeError as exc:
            raise AdapterError(f"adapter returned malformed JSON: {line!r}") from exc

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            self._proc.stdin.close()
            self._proc.wait(timeout=10)
        self._proc = None


class HttpAdapter(JsonAdapter):
    """POST one JSON body per request to a fixed endpoint."""

    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url
        self.timeout = timeout

    def request(self, payload: dict) -> dict:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        req = urllib.request.Request(
            self.url, data=body, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return json.loads(resp.read().decode("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise AdapterError(f"HTTP adapter request failed: {exc}") from exc
