"""Dev server for the console: static files plus an API pass-through.

Serves this directory (index.html and dist/) and forwards /sessions and
/kb requests to a running consultation service, so the page and the API
share one origin and the browser needs no cross-origin setup.

    credence --kb ../kb/polyarthritis.gkb --serve 127.0.0.1:8000
    python3 scripts/serve_console.py --service http://127.0.0.1:8000

then open http://127.0.0.1:8080/.
"""

from __future__ import annotations

import argparse
import urllib.error
import urllib.request
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
API_PREFIXES = ("/sessions", "/kb")


class ConsoleHandler(SimpleHTTPRequestHandler):
    service_base = "http://127.0.0.1:8000"

    def do_GET(self) -> None:
        if self.is_api():
            self.forward("GET")
        else:
            super().do_GET()

    def do_POST(self) -> None:
        self.forward("POST")

    def do_PUT(self) -> None:
        self.forward("PUT")

    def is_api(self) -> bool:
        return self.path.startswith(API_PREFIXES)

    def forward(self, method: str) -> None:
        if not self.is_api():
            self.send_error(404)
            return
        length = int(self.headers.get("content-length") or 0)
        body = self.rfile.read(length) if length else None
        request = urllib.request.Request(
            self.service_base + self.path, data=body, method=method
        )
        if body is not None:
            request.add_header(
                "content-type",
                self.headers.get("content-type", "application/json"),
            )
        try:
            response = urllib.request.urlopen(request)
        except urllib.error.HTTPError as error:
            response = error
        except urllib.error.URLError as error:
            self.send_error(502, explain=f"service unreachable: {error.reason}")
            return
        payload = response.read()
        self.send_response(response.status)
        self.send_header(
            "content-type",
            response.headers.get("content-type", "application/json"),
        )
        self.send_header("content-length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--service", default="http://127.0.0.1:8000")
    args = parser.parse_args()

    ConsoleHandler.service_base = args.service.rstrip("/")
    handler = partial(ConsoleHandler, directory=str(ROOT))
    server = ThreadingHTTPServer(("127.0.0.1", args.port), handler)
    print(f"console at http://127.0.0.1:{args.port}/ -> {args.service}")
    server.serve_forever()


if __name__ == "__main__":
    main()
