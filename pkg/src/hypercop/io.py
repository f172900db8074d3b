"""Edge-list and DIMACS readers/writers."""

from __future__ import annotations

from pathlib import Path

from .core import Graph, GraphError


class ParseError(GraphError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def _build(pairs: list[tuple[int, int, int]], labels: list[int]) -> Graph:
    index = {lab: i for i, lab in enumerate(labels)}
    seen: set[tuple[int, int]] = set()
    edges = []
    for line, a, b in pairs:
        if a == b:
            raise ParseError(line, f"self-loop at {a}")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise ParseError(line, f"duplicate edge {a} {b}")
        seen.add(key)
        edges.append((index[a], index[b]))
    return Graph(len(labels), edges, labels=labels)


def parse_edgelist(text: str) -> Graph:
    pairs = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(no, f"expected two nonnegative integer labels, got {raw.strip()!r}")
        pairs.append((no, int(parts[0]), int(parts[1])))
    if not pairs:
        raise ParseError(0, "no edges")
    labels = sorted({x for _, a, b in pairs for x in (a, b)})
    return _build(pairs, labels)


def parse_dimacs(text: str) -> Graph:
    header = None
    pairs = []
    for no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if header is not None:
                raise ParseError(no, "second problem line")
            if len(parts) != 4 or parts[1] != "edge" or not parts[2].isdigit() or not parts[3].isdigit():
                raise ParseError(no, "expected 'p edge N M'")
            header = (int(parts[2]), int(parts[3]))
        elif parts[0] == "e":
            if header is None:
                raise ParseError(no, "edge before problem line")
            if len(parts) != 3 or not parts[1].isdigit() or not parts[2].isdigit():
                raise ParseError(no, "expected 'e U V'")
            a, b = int(parts[1]), int(parts[2])
            if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                raise ParseError(no, f"vertex out of range 1..{header[0]}")
            pairs.append((no, a, b))
        else:
            raise ParseError(no, f"unknown line type {parts[0]!r}")
    if header is None:
        raise ParseError(0, "missing problem line")
    if len(pairs) != header[1]:
        raise ParseError(0, f"header announces {header[1]} edges, found {len(pairs)}")
    return _build(pairs, list(range(1, header[0] + 1)))


def parse_graph(source, fmt: str = "edgelist") -> Graph:
    """Parse a path or raw text in ``edgelist`` or ``dimacs`` format."""
    text = Path(source).read_text() if isinstance(source, Path) else source
    if fmt == "edgelist":
        return parse_edgelist(text)
    if fmt == "dimacs":
        return parse_dimacs(text)
    raise ValueError(f"unknown format {fmt!r}")


def emit_edgelist(g: Graph) -> str:
    """Edge list in vertex ids; marked vertices are listed as comments."""
    lines = [f"# {name}={v}" for name, v in sorted(g.marks.items())]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def emit_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.edge_count}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"
