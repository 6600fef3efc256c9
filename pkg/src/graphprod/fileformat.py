"""Reader for graph definition files.

::

    # right-angled Coxeter group on a square
    vertices:
      a = cyclic:2
      b = cyclic:2
      c = cyclic:2
      d = cyclic:2
    edges:
      a - b
      b - c
      c - d
      d - a
    elements:
      x = a b c d

``#`` starts a comment.  Errors carry 1-based line and column numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .errors import DomainError
from .graph import DefiningGraph
from .groups import VertexGroupSpec, parse_spec
from .words import GraphProduct, NormalForm

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
SECTIONS = ("vertices", "edges", "elements")


class GraphFileError(DomainError):
    def __init__(self, message: str, line: int, column: int, source: str = "<input>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


@dataclass
class GraphDefinition:
    graph: DefiningGraph
    elements: Dict[str, str] = field(default_factory=dict)
    source: str = "<input>"

    def element(self, engine: GraphProduct, text: str) -> NormalForm:
        """Parse ``text`` as a word, or look it up as a named element."""
        t = text.strip()
        if t in self.elements:
            return engine.parse(self.elements[t])
        return engine.parse(t)


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_graph_text(text: str, source: str = "<input>") -> GraphDefinition:
    section: Optional[str] = None
    seen_sections = set()
    vertices: List[str] = []
    groups: Dict[str, VertexGroupSpec] = {}
    vertex_pos: Dict[str, Tuple[int, int]] = {}
    edges: List[Tuple[str, str]] = []
    edge_pos: Dict[frozenset, Tuple[int, int]] = {}
    elements: Dict[str, str] = {}
    element_pos: Dict[str, Tuple[int, int]] = {}

    def fail(msg, ln, col):
        raise GraphFileError(msg, ln, col, source)

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        col0 = indent + 1
        if body.endswith(":") and body[:-1].strip() in SECTIONS:
            name = body[:-1].strip()
            if name in seen_sections:
                fail(f"section '{name}:' appears twice", ln, col0)
            if name == "edges" and "vertices" not in seen_sections:
                fail("'edges:' must come after 'vertices:'", ln, col0)
            section = name
            seen_sections.add(name)
            continue
        if body.endswith(":"):
            fail(f"unknown section '{body}' (expected one of {', '.join(s + ':' for s in SECTIONS)})", ln, col0)
        if section is None:
            fail("content before any section header", ln, col0)
        if section in ("vertices", "elements"):
            if "=" not in body:
                fail("expected 'name = ...'", ln, col0)
            lhs, rhs = body.split("=", 1)
            name = lhs.strip()
            rhs_col = line.index("=") + 2 + (len(rhs) - len(rhs.lstrip()))
            if not _NAME.fullmatch(name):
                fail(f"invalid name {name!r}", ln, col0)
            if section == "vertices":
                if name in groups:
                    first = vertex_pos[name]
                    fail(f"duplicate vertex {name!r} (first declared at line {first[0]})", ln, col0)
                try:
                    spec = parse_spec(rhs)
                except DomainError as exc:
                    fail(str(exc), ln, rhs_col)
                vertices.append(name)
                groups[name] = spec
                vertex_pos[name] = (ln, col0)
            else:
                if name in elements:
                    fail(f"duplicate element {name!r}", ln, col0)
                elements[name] = rhs.strip()
                element_pos[name] = (ln, rhs_col)
            continue
        # edges
        m = re.fullmatch(r"(\S+)\s*-\s*(\S+)", body)
        if not m:
            fail("expected an edge 'u - v'", ln, col0)
        u, v = m.group(1), m.group(2)
        ucol, vcol = col0, indent + m.start(2) + 1
        for name, col in ((u, ucol), (v, vcol)):
            if name not in groups:
                fail(f"edge mentions unknown vertex {name!r}", ln, col)
        if u == v:
            fail(f"self-loop at {u!r}: the defining graph must be simplicial", ln, ucol)
        key = frozenset((u, v))
        if key in edge_pos:
            fail(f"repeated edge {u} - {v} (first at line {edge_pos[key][0]}): "
                 "the defining graph must be simplicial", ln, ucol)
        edge_pos[key] = (ln, ucol)
        edges.append((u, v))
    if "vertices" not in seen_sections or not vertices:
        fail("no vertices declared", max(1, len(text.splitlines())), 1)
    graph = DefiningGraph(vertices, edges, groups)
    defn = GraphDefinition(graph, elements, source)
    if elements:
        engine = GraphProduct(graph)
        for name, word in elements.items():
            try:
                engine.parse(word)
            except DomainError as exc:
                fail(f"element {name!r}: {exc}", *element_pos[name])
    return defn


def load_graph(path: Union[str, Path]) -> GraphDefinition:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise GraphFileError(f"not UTF-8 text ({exc.reason})", 1, 1, str(p)) from None
    return parse_graph_text(text, str(p))


def dump_graph(graph: DefiningGraph, elements: Optional[Dict[str, str]] = None) -> str:
    lines = ["vertices:"]
    for v, g in zip(graph.vertices, graph.groups):
        lines.append(f"  {v} = {g.describe()}")
    lines.append("edges:")
    for u, v in graph.edge_list():
        lines.append(f"  {u} - {v}")
    if elements:
        lines.append("elements:")
        for k, w in elements.items():
            lines.append(f"  {k} = {w}")
    return "\n".join(lines) + "\n"
