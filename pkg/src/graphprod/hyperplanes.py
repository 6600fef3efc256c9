"""Finite balls of the syllable graph and their hyperplanes.

Hyperplanes are computed as equivalence classes of edges: two edges in one
vertex-group coset are equivalent, and opposite edges of a commuting square
are equivalent.  Only balls are ever materialised, so queries are trusted
when both points sit well inside the ball.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .errors import ResourceError
from .words import IDENTITY, GraphProduct, NormalForm

Edge = Tuple[NormalForm, NormalForm]

DEFAULT_BUDGET = 200_000


def _key(x: NormalForm):
    return (len(x), x)


def edge(x: NormalForm, y: NormalForm) -> Edge:
    return (x, y) if _key(x) <= _key(y) else (y, x)


@dataclass
class SylBall:
    engine: GraphProduct
    center: NormalForm
    radius: int
    cap: int
    dist: Dict[NormalForm, int]
    capped: bool = False
    _edges: Optional[List[Edge]] = field(default=None, repr=False)

    @property
    def vertices(self) -> List[NormalForm]:
        return sorted(self.dist, key=lambda x: (self.dist[x], x))

    def __len__(self):
        return len(self.dist)

    def __contains__(self, x):
        return x in self.dist

    def sphere(self, r: int) -> List[NormalForm]:
        return [x for x in self.vertices if self.dist[x] == r]

    def within(self, r: int) -> List[NormalForm]:
        return [x for x in self.vertices if self.dist[x] <= r]

    @property
    def edges(self) -> List[Edge]:
        if self._edges is None:
            E = self.engine
            steps = E.syllables_of(E.graph.full, self.cap)
            found = set()
            for x in self.dist:
                for s in steps:
                    y = E.multiply(x, (s,))
                    if y in self.dist:
                        found.add(edge(x, y))
            self._edges = sorted(found, key=lambda e: (_key(e[0]), _key(e[1])))
        return self._edges

    def neighbours(self) -> Dict[NormalForm, List[NormalForm]]:
        nb: Dict[NormalForm, List[NormalForm]] = {x: [] for x in self.dist}
        for x, y in self.edges:
            nb[x].append(y)
            nb[y].append(x)
        return nb

    def label(self, e: Edge) -> int:
        return self.engine.between(*e)[0][0]


def enumerate_ball(engine: GraphProduct, center: NormalForm = IDENTITY, radius: int = 2,
                   cap: int = 2, budget: int = DEFAULT_BUDGET) -> SylBall:
    """Breadth-first ball of the syllable graph around ``center``."""
    steps = engine.syllables_of(engine.graph.full, cap)
    capped = any(not engine.groups[v].is_finite for v, _ in steps)
    dist = {center: 0}
    frontier = [center]
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for s in steps:
                y = engine.multiply(x, (s,))
                if y not in dist:
                    dist[y] = r
                    nxt.append(y)
                    if len(dist) > budget:
                        raise ResourceError(f"ball exceeded {budget} elements at radius {r}", partial=len(dist))
        frontier = nxt
    return SylBall(engine, center, radius, cap, dist, capped)


@dataclass(frozen=True)
class Hyperplane:
    id: Edge
    label: int
    dual_edges: FrozenSet[Edge]


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if (_key(ra[0]), _key(ra[1])) < (_key(rb[0]), _key(rb[1])):
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def hyperplanes(ball: SylBall) -> List[Hyperplane]:
    E = ball.engine
    graph = E.graph
    edges = ball.edges
    uf = _UnionFind(edges)
    label = {e: ball.label(e) for e in edges}
    # triangle rule: all edges inside one coset x<G_v> are equivalent
    by_coset: Dict[Tuple[NormalForm, int], Edge] = {}
    for e in edges:
        v = label[e]
        x = e[0]
        key = (E.multiply(x, E.invert(E.suffix_in(x, 1 << v))), v)
        first = by_coset.setdefault(key, e)
        if first is not e:
            uf.union(first, e)
    # square rule: (x, xs) ~ (xt, xts) for commuting labels
    steps = E.syllables_of(graph.full, ball.cap)
    for e in edges:
        x, y = e
        v = label[e]
        s = E.between(x, y)
        for t in steps:
            w = t[0]
            if not graph.adjacent(v, w):
                continue
            xt = E.multiply(x, (t,))
            if xt not in ball.dist:
                continue
            xts = E.multiply(xt, s)
            if xts in ball.dist:
                uf.union(e, edge(xt, xts))
    classes: Dict[Edge, List[Edge]] = {}
    for e in edges:
        classes.setdefault(uf.find(e), []).append(e)
    out = [Hyperplane(root, label[root], frozenset(members)) for root, members in classes.items()]
    out.sort(key=lambda h: (_key(h.id[0]), _key(h.id[1])))
    return out


def hyperplane_of(hyps: Iterable[Hyperplane], e: Edge) -> Hyperplane:
    e = edge(*e)
    for h in hyps:
        if e in h.dual_edges:
            return h
    raise KeyError("edge is not in the ball")


def separates(h: Hyperplane, ball: SylBall, x: NormalForm, y: NormalForm,
              margin: Optional[int] = None) -> Optional[bool]:
    """Whether ``h`` separates ``x`` from ``y`` inside the ball.

    Returns ``None`` when either point lies outside the trusted interior
    (distance at most ``radius // 2`` from the center by default).
    """
    if x == y:
        return False
    limit = ball.radius // 2 if margin is None else ball.radius - margin
    if ball.dist.get(x, limit + 1) > limit or ball.dist.get(y, limit + 1) > limit:
        return None
    nb = ball.neighbours()
    seen = {x}
    queue = deque([x])
    cut = h.dual_edges
    while queue:
        p = queue.popleft()
        for q in nb[p]:
            if q not in seen and edge(p, q) not in cut:
                if q == y:
                    return False
                seen.add(q)
                queue.append(q)
    return True


def sides(h: Hyperplane, ball: SylBall) -> Dict[NormalForm, int]:
    """Component index of every ball vertex once the dual edges of ``h`` are cut."""
    nb = ball.neighbours()
    cut = h.dual_edges
    comp: Dict[NormalForm, int] = {}
    label = 0
    for start in ball.vertices:
        if start in comp:
            continue
        comp[start] = label
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for q in nb[p]:
                if q not in comp and edge(p, q) not in cut:
                    comp[q] = label
                    queue.append(q)
        label += 1
    return comp


_PALETTE = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta",
            "cyan4", "gold3", "gray40", "navy", "olivedrab", "deeppink", "teal"]


def ball_to_dot(ball: SylBall, hyps: Optional[List[Hyperplane]] = None, name: str = "ball",
                extra_edges: Iterable[Edge] = ()) -> str:
    E = ball.engine
    ids = {x: f"n{i}" for i, x in enumerate(ball.vertices)}
    lines = [f"graph {name} {{", "  node [shape=circle, fontsize=10];"]
    for x in ball.vertices:
        lines.append(f'  {ids[x]} [label="{E.format(x) or "e"}"];')
    colour = {}
    if hyps is not None:
        for i, h in enumerate(hyps):
            for e in h.dual_edges:
                colour[e] = _PALETTE[i % len(_PALETTE)]
    for e in ball.edges:
        attrs = f' [color="{colour[e]}"]' if e in colour else ""
        lines.append(f"  {ids[e[0]]} -- {ids[e[1]]}{attrs};")
    for x, y in extra_edges:
        if x in ids and y in ids:
            lines.append(f'  {ids[x]} -- {ids[y]} [style=dashed, color="gray60"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
