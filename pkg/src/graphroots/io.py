"""Graph file codecs: edge-list text, JSON interchange and DOT export.

Edge-list text::

    p <n> <m>
    e <u> <v>
    ...

Vertices without edges are declared with ``v <name>`` lines; ``#`` starts a
comment.  The JSON document is ``{"vertices": [...], "edges": [[u, v], ...]}``
with an optional ``"labels"`` object mapping vertex name to a role record.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path

from .graph import Graph

__all__ = [
    "FormatError",
    "to_edgelist",
    "from_edgelist",
    "to_json",
    "from_json",
    "to_dot",
    "read_graph",
    "write_graph",
    "convert",
    "dumps",
    "FORMATS",
]

FORMATS = ("edgelist", "json", "dot")


class FormatError(ValueError):
    """Malformed graph file; the message carries the line or field."""


def to_edgelist(g: Graph) -> str:
    edges = g.edges()
    lines = [f"p {g.n} {len(edges)}"]
    isolated = [v for v in g.vertices if g.degree(v) == 0]
    lines += [f"v {v}" for v in isolated]
    lines += [f"e {u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> Graph:
    header = None
    vertices, edges = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        tag = tokens[0]
        if tag == "p":
            if header is not None:
                raise FormatError(f"line {lineno}: duplicate header")
            if len(tokens) != 3 or not all(t.isdigit() for t in tokens[1:]):
                raise FormatError(f"line {lineno}: malformed header {line!r}, expected 'p <n> <m>'")
            header = (int(tokens[1]), int(tokens[2]))
        elif header is None:
            raise FormatError(f"line {lineno}: expected header 'p <n> <m>' before {tag!r}")
        elif tag == "e":
            if len(tokens) != 3:
                raise FormatError(f"line {lineno}: expected 'e <u> <v>', got {line!r}")
            if tokens[1] == tokens[2]:
                raise FormatError(f"line {lineno}: self-loop at {tokens[1]!r}")
            edges.append((tokens[1], tokens[2]))
        elif tag == "v":
            if len(tokens) != 2:
                raise FormatError(f"line {lineno}: expected 'v <name>', got {line!r}")
            vertices.append(tokens[1])
        else:
            raise FormatError(f"line {lineno}: unknown record type {tag!r}")
    if header is None:
        raise FormatError("missing header 'p <n> <m>'")
    g = Graph(vertices, edges)
    if g.n != header[0] or g.m != header[1]:
        raise FormatError(
            f"header declares {header[0]} vertices / {header[1]} edges, "
            f"found {g.n} / {g.m}"
        )
    return g


def to_json(g: Graph, labels: dict | None = None) -> str:
    doc = {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges()]}
    if labels:
        doc["labels"] = {v: labels[v] for v in g.vertices if v in labels}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def from_json(text: str, with_labels: bool = False):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object")
    for key in ("vertices", "edges"):
        if not isinstance(doc.get(key), list):
            raise FormatError(f"field {key!r} missing or not an array")
    for k, e in enumerate(doc["edges"]):
        if not (isinstance(e, list) and len(e) == 2):
            raise FormatError(f"edges[{k}]: expected a pair of vertex names")
    try:
        g = Graph(doc["vertices"], doc["edges"])
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    if len(set(map(str, doc["vertices"]))) != len(doc["vertices"]):
        raise FormatError("field 'vertices' has duplicates")
    if g.n != len(doc["vertices"]):
        raise FormatError("edges mention vertices missing from 'vertices'")
    if with_labels:
        return g, doc.get("labels") or {}
    return g


_ROLE_COLORS = {
    "block": "lightblue",
    "clause": "orange",
    "link_v": "palegreen",
    "link_w": "pink",
}


def to_dot(g: Graph, labels: dict | None = None, name: str = "G") -> str:
    """Graphviz ``graph`` document; labeled vertices are colored by role."""
    lines = [f"graph {name} {{", "  node [style=filled, fillcolor=white];"]
    for v in g.vertices:
        attrs = ""
        if labels and v in labels:
            role = labels[v].get("role", "")
            color = _ROLE_COLORS.get(role, "gray")
            attrs = f' [fillcolor={color}, role="{role}"]'
        lines.append(f'  "{v}"{attrs};')
    for u, v in g.edges():
        lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _guess_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix in (".dot", ".gv"):
        return "dot"
    return "edgelist"


def read_graph(path, fmt: str | None = None, with_labels: bool = False):
    fmt = fmt or _guess_format(path)
    text = Path(path).read_text()
    if fmt == "json":
        return from_json(text, with_labels=with_labels)
    if fmt == "edgelist":
        g = from_edgelist(text)
        return (g, {}) if with_labels else g
    raise FormatError(f"cannot read format {fmt!r} (DOT is export-only)")


def dumps(g: Graph, fmt: str, labels: dict | None = None) -> str:
    if fmt == "json":
        return to_json(g, labels)
    if fmt == "edgelist":
        if labels:
            warnings.warn("edge-list format drops vertex labels", stacklevel=2)
        return to_edgelist(g)
    if fmt == "dot":
        return to_dot(g, labels)
    raise FormatError(f"unknown format {fmt!r}")


def write_graph(g: Graph, path, fmt: str | None = None, labels: dict | None = None) -> None:
    Path(path).write_text(dumps(g, fmt or _guess_format(path), labels))


def convert(in_path, out_path, in_format: str | None = None, out_format: str | None = None) -> None:
    g, labels = read_graph(in_path, in_format, with_labels=True)
    write_graph(g, out_path, out_format, labels)
