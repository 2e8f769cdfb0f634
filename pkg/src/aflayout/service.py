"""HTTP/JSON service exposing the layout pipeline.

Endpoints: GET /api/health, GET /api/instances, GET /api/instances/{id},
POST /api/layout.  Request handling is stateless; the instance directory
is rescanned per request.  Bodies above 5 MB are refused, and exact mode
is refused above a configurable instance size so interactive requests
stay fast.  Errors are JSON objects with machine-readable codes.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any

from .af import ParseError, parse_af, parse_extension
from .annotate import RedSelectionError
from .api import ExactInfeasibleError, SolveRequest, execute
from .bench import SUFFIX_FORMAT
from .heuristic import NonConflictFreeError

MAX_REQUEST_BYTES = 5 * 1024 * 1024
_DRAIN_CEILING = 64 * 1024 * 1024  # read-and-discard limit for oversize bodies
DEFAULT_EXACT_SIZE_CAP = 150

_REQUEST_KEYS = {
    "af", "format", "extension", "semantics", "mode", "rec",
    "timeout_ms", "strategy", "seed", "name",
}


def request_from_json(data: Any) -> SolveRequest:
    """Build a SolveRequest from a decoded JSON body; strict about keys."""
    if not isinstance(data, dict):
        raise ValueError("request body must be a JSON object")
    unknown = sorted(set(data) - _REQUEST_KEYS)
    if unknown:
        raise ValueError(f"unknown request fields {unknown}")
    if "af" not in data or not isinstance(data["af"], str):
        raise ValueError("request must carry an 'af' text field")
    extension = data.get("extension")
    if extension is not None:
        if not isinstance(extension, list) or not all(isinstance(a, str) for a in extension):
            raise ValueError("'extension' must be a list of argument ids")
        extension = tuple(extension)
    return SolveRequest(
        af_text=data["af"],
        format=data.get("format", "apx"),
        extension=extension,
        semantics=data.get("semantics"),
        mode=data.get("mode", "heuristic"),
        rec=bool(data.get("rec", True)),
        timeout_ms=data.get("timeout_ms"),
        strategy=data.get("strategy", "A"),
        seed=data.get("seed"),
        name=data.get("name", "af"),
    )


def _instance_files(instance_dir: str | None) -> dict[str, tuple[Path, str]]:
    files: dict[str, tuple[Path, str]] = {}
    if instance_dir is None:
        return files
    root = Path(instance_dir)
    if not root.is_dir():
        return files
    for path in sorted(root.iterdir()):
        fmt = SUFFIX_FORMAT.get(path.suffix)
        if fmt is not None:
            files[path.stem] = (path, fmt)
    return files


class _Handler(BaseHTTPRequestHandler):
    server_version = "aflayout"
    protocol_version = "HTTP/1.1"

    def log_message(self, format: str, *args: Any) -> None:  # noqa: A002 - stdlib signature
        pass

    # -- plumbing ----------------------------------------------------------

    def _send_json(self, status: int, obj: Any) -> None:
        body = (json.dumps(obj, indent=2) + "\n").encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, code: str, message: str) -> None:
        self._send_json(status, {"error": {"code": code, "message": message}})

    # -- routes ------------------------------------------------------------

    def do_GET(self) -> None:  # noqa: N802 - stdlib naming
        if self.path == "/api/health":
            self._send_json(200, {"status": "ok"})
            return
        if self.path == "/api/instances":
            entries = []
            for name, (path, fmt) in _instance_files(self.server.instance_dir).items():
                try:
                    af = parse_af(path.read_text(), fmt)
                except (OSError, ParseError):
                    continue
                entries.append({
                    "id": name,
                    "format": fmt,
                    "arguments": len(af.arguments),
                    "attacks": len(af.attacks),
                    "has_extension": path.with_suffix(".ext").exists(),
                })
            self._send_json(200, {"instances": entries})
            return
        if self.path.startswith("/api/instances/"):
            name = self.path[len("/api/instances/"):]
            files = _instance_files(self.server.instance_dir)
            if name not in files:
                self._send_error_json(404, "NOT_FOUND", f"unknown instance {name!r}")
                return
            path, fmt = files[name]
            try:
                af_text = path.read_text()
            except OSError as exc:
                self._send_error_json(500, "INTERNAL", str(exc))
                return
            extension: list[str] | None = None
            ext_path = path.with_suffix(".ext")
            if ext_path.exists():
                af = parse_af(af_text, fmt)
                extension = sorted(parse_extension(ext_path.read_text(), af))
            self._send_json(200, {
                "id": name, "format": fmt, "af": af_text, "extension": extension,
            })
            return
        self._send_error_json(404, "NOT_FOUND", f"no route for {self.path}")

    def do_POST(self) -> None:  # noqa: N802 - stdlib naming
        if self.path != "/api/layout":
            self._send_error_json(404, "NOT_FOUND", f"no route for {self.path}")
            return
        try:
            length = int(self.headers.get("Content-Length") or 0)
        except ValueError:
            self._send_error_json(400, "PARSE_ERROR", "bad Content-Length")
            return
        if length > MAX_REQUEST_BYTES:
            # drain moderate oversends so clients see the 413 instead of a
            # reset pipe; hard-close on absurd lengths
            if length <= _DRAIN_CEILING:
                remaining = length
                while remaining > 0:
                    chunk = self.rfile.read(min(remaining, 1 << 20))
                    if not chunk:
                        break
                    remaining -= len(chunk)
            self.close_connection = True
            self._send_error_json(413, "PAYLOAD_TOO_LARGE",
                                  f"request exceeds {MAX_REQUEST_BYTES} bytes")
            return
        body = self.rfile.read(length)
        try:
            data = json.loads(body)
            request = request_from_json(data)
            af = parse_af(request.af_text, request.format)
        except (json.JSONDecodeError, ValueError) as exc:
            self._send_error_json(400, "PARSE_ERROR", str(exc))
            return
        size = len(af.arguments) + len(af.attacks)
        if request.mode != "heuristic" and size > self.server.exact_size_cap:
            self._send_error_json(
                422, "EXACT_TOO_LARGE",
                f"exact mode refused: instance size {size} exceeds "
                f"{self.server.exact_size_cap}")
            return
        try:
            outcome = execute(request)
        except NonConflictFreeError as exc:
            self._send_error_json(422, "NOT_CONFLICT_FREE", str(exc))
            return
        except ExactInfeasibleError as exc:
            self._send_error_json(422, "EXACT_INFEASIBLE", str(exc))
            return
        except (ParseError, RedSelectionError, ValueError) as exc:
            self._send_error_json(400, "PARSE_ERROR", str(exc))
            return
        self._send_json(200, outcome.payload)


class LayoutServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], instance_dir: str | None,
                 exact_size_cap: int) -> None:
        super().__init__(address, _Handler)
        self.instance_dir = instance_dir
        self.exact_size_cap = exact_size_cap


def make_server(port: int = 8080, instance_dir: str | None = None,
                exact_size_cap: int = DEFAULT_EXACT_SIZE_CAP,
                host: str = "127.0.0.1") -> LayoutServer:
    """Bind and return the server without starting it; port 0 picks a free port."""
    return LayoutServer((host, port), instance_dir, exact_size_cap)


def serve_forever(port: int = 8080, instance_dir: str | None = None,
                  exact_size_cap: int = DEFAULT_EXACT_SIZE_CAP,
                  host: str = "127.0.0.1") -> None:
    server = make_server(port, instance_dir, exact_size_cap, host)
    address = f"http://{host}:{server.server_address[1]}"
    print(f"serving on {address} (instances: {instance_dir or 'none'})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
