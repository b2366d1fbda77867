"""Serve the embedding file protocol with the built-in stub provider.

Usage: python -m kpgen.stub_server REQUEST_FILE RESPONSE_FILE [DIMENSION]

Reference server-side implementation of the protocol; handy as a
--provider command ("python -m kpgen.stub_server {request} {response}")
and as the subprocess target in provider tests.
"""

import sys

from kpgen.extractors.embedding import StubProvider, serve_request


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) not in (2, 3):
        print(__doc__, file=sys.stderr)
        return 1
    dimension = int(argv[2]) if len(argv) == 3 else 64
    serve_request(StubProvider(dimension), argv[0], argv[1])
    return 0


if __name__ == "__main__":
    sys.exit(main())
