"""graph6 text format.

Header is one byte ``n + 63`` for n <= 62, or ``~`` followed by three
6-bit bytes for 63 <= n <= 258047.  The body packs the upper triangle in
column-major order (0,1),(0,2),(1,2),(0,3),... six bits per byte, each
byte offset by 63.  sparse6 and digraph6 inputs are rejected.
"""

from __future__ import annotations

from typing import Iterable, Iterator, TextIO

from .errors import InvalidArgument, ParseError
from .graph import Graph

MAX_N = 258047


def _encode_n(n: int) -> str:
    if n < 0 or n > MAX_N:
        raise InvalidArgument(f"graph6 supports 0 <= n <= {MAX_N}, got {n}")
    if n <= 62:
        return chr(n + 63)
    return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))


def emit_graph6(g: Graph) -> str:
    n = g.n
    out = [_encode_n(n)]
    acc = 0
    nbits = 0
    for j in range(1, n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = 0
                nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise ParseError("empty graph6 string", 0)
    if s[0] == ":":
        raise ParseError("sparse6 input is not supported", 0)
    if s[0] == "&":
        raise ParseError("digraph6 input is not supported", 0)
    for k, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"byte {ord(ch)} outside 63..126", k)
    if s[0] == "~":
        if len(s) >= 2 and s[1] == "~":
            raise ParseError("graph6 with n > 258047 is not supported", 1)
        if len(s) < 4:
            raise ParseError("truncated long-form header", len(s))
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        start = 4
    else:
        n = ord(s[0]) - 63
        start = 1
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = s[start:]
    if len(body) != need:
        raise ParseError(f"expected {need} body bytes for n={n}, got {len(body)}",
                         start + min(len(body), need))
    rows = [0] * n
    k = 0
    i, j = 0, 1
    for b in body:
        val = ord(b) - 63
        for shift in range(5, -1, -1):
            if k >= nbits:
                break
            if val >> shift & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
            i += 1
            if i == j:
                i = 0
                j += 1
    return Graph(n, tuple(rows))


def graph6_roundtrip(g: Graph) -> Graph:
    return parse_graph6(emit_graph6(g))


def read_graph6_lines(stream: TextIO) -> Iterator[Graph]:
    for line in stream:
        line = line.strip()
        if line:
            yield parse_graph6(line)


def write_graph6_lines(graphs: Iterable[Graph], stream: TextIO) -> None:
    for g in graphs:
        stream.write(emit_graph6(g) + "\n")
