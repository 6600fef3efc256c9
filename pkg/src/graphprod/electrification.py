"""The minsquare electrification of a graph product of finite groups.

The electrified graph has an edge between ``g`` and ``h`` whenever
``g^-1 h`` lies in a vertex group or in the subgroup of a minsquare
subgraph.  Distances are only ever computed inside a finite syllable ball,
so they are upper bounds for the true electrified distance; from the
center of the ball they never exceed the syllable distance.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import DomainError
from .graph import DefiningGraph, Verdict, bits
from .hyperplanes import DEFAULT_BUDGET, Edge, SylBall, ball_to_dot, edge, enumerate_ball
from .words import IDENTITY, GraphProduct, NormalForm


def _require_finite(graph: DefiningGraph) -> None:
    inf = graph.infinite_mask()
    if inf:
        raise DomainError("electrification needs finite vertex groups; infinite: "
                          + ",".join(graph.vertices[i] for i in bits(inf)))


def classify_boundedness(graph: DefiningGraph) -> Verdict:
    """Decide whether the electrification has bounded diameter.

    The witness names the pieces of the decomposition: the whole vertex set
    for the complete and minsquare cases, and (minsquare side, complete side)
    for a join.
    """
    _require_finite(graph)
    full = graph.full
    if graph.is_complete(full):
        return Verdict(True, "complete", (graph.label(full),))
    mins = graph.minsquare_masks()
    if full in mins:
        return Verdict(True, "minsquare", (graph.label(full),))
    split = graph.minsquare_join_split()
    if split is not None:
        core, clique = split
        if clique and core in mins:
            return Verdict(True, "join of minsquare and complete",
                           (graph.label(core), graph.label(clique)))
    if not mins:
        a, b = _non_adjacent_pair(graph)
        return Verdict(False, "no minsquare subgraph and not complete", (a, b))
    return Verdict(False, "not a join of a minsquare graph and a complete graph",
                   tuple(graph.label(m) for m in mins))


def _non_adjacent_pair(graph: DefiningGraph) -> Tuple[str, str]:
    n = len(graph.vertices)
    for i in range(n):
        for j in range(i + 1, n):
            if not graph.adjacent(i, j):
                return graph.vertices[i], graph.vertices[j]
    raise AssertionError("complete graph has no non-adjacent pair")


def classify_quasiline(graph: DefiningGraph) -> Verdict:
    """Quasi-line exactly when the group is infinite and virtually cyclic.

    A finite group has a bounded electrification, so it is reported as not a
    quasi-line even though it is virtually cyclic.
    """
    _require_finite(graph)
    vc = graph.is_virtually_cyclic()
    if not vc.holds:
        return Verdict(False, "not virtually cyclic", vc.witness)
    if vc.reason == "finite":
        return Verdict(False, "finite group, bounded electrification")
    return Verdict(True, vc.reason, vc.witness)


@dataclass
class ElectrifiedBall:
    """A syllable ball with the electrified edges added."""

    ball: SylBall
    minsquares: Tuple[int, ...]
    extra_edges: List[Edge]
    _adj: Optional[Dict[NormalForm, List[NormalForm]]] = field(default=None, repr=False)
    finite_only: bool = True

    @property
    def engine(self) -> GraphProduct:
        return self.ball.engine

    @property
    def vertices(self) -> List[NormalForm]:
        return self.ball.vertices

    @property
    def edges(self) -> List[Edge]:
        return sorted(set(self.ball.edges) | set(self.extra_edges))

    def neighbours(self) -> Dict[NormalForm, List[NormalForm]]:
        if self._adj is None:
            nb = self.ball.neighbours()
            for x, y in self.extra_edges:
                nb[x].append(y)
                nb[y].append(x)
            self._adj = nb
        return self._adj

    def distances_from(self, x: NormalForm) -> Dict[NormalForm, int]:
        nb = self.neighbours()
        dist = {x: 0}
        queue = deque([x])
        while queue:
            p = queue.popleft()
            for q in nb[p]:
                if q not in dist:
                    dist[q] = dist[p] + 1
                    queue.append(q)
        return dist

    def distance(self, x: NormalForm, y: NormalForm) -> int:
        return self.distances_from(x)[y]


def electrified_ball(engine: GraphProduct, radius: int, center: NormalForm = IDENTITY,
                     budget: int = DEFAULT_BUDGET) -> ElectrifiedBall:
    graph = engine.graph
    _require_finite(graph)
    ball = enumerate_ball(engine, center, radius, cap=2, budget=budget)
    mins = tuple(graph.minsquare_masks())
    syl = set(ball.edges)
    extra = set()
    pts = ball.vertices
    if mins:
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                supp = engine.support(engine.between(x, y))
                if any(supp & ~m == 0 for m in mins):
                    e = edge(x, y)
                    if e not in syl:
                        extra.add(e)
    return ElectrifiedBall(ball, mins, sorted(extra))


def d_electrified(engine: GraphProduct, x: NormalForm, y: NormalForm,
                  slack: int = 0) -> int:
    """Electrified distance computed in the syllable ball around ``x`` reaching ``y``.

    Electrification is left-invariant, so this is the distance from the
    identity to ``x^-1 y`` inside a ball of radius ``d_syl(x, y) + slack``.
    """
    g = engine.between(x, y)
    if g == IDENTITY:
        return 0
    eb = electrified_ball(engine, engine.syllable_length(g) + slack)
    return eb.distance(IDENTITY, g)


def electrified_growth(graph: DefiningGraph, radius: int, engine: Optional[GraphProduct] = None,
                       budget: int = DEFAULT_BUDGET, warn: bool = True) -> List[int]:
    """Largest electrified distance from the identity inside each syllable ball ``B_1..B_radius``.

    A bounded electrification makes this sequence stabilise; a growing one
    keeps increasing.  If the sequence disagrees with ``classify_boundedness``
    a ``RuntimeWarning`` is issued; the verdict is never changed.
    """
    engine = engine or GraphProduct(graph)
    eb = electrified_ball(engine, radius, budget=budget)
    dist = eb.distances_from(IDENTITY)
    seq = []
    for r in range(1, radius + 1):
        seq.append(max(dist[x] for x in eb.ball.within(r)))
    if warn:
        verdict = classify_boundedness(graph)
        trend = growth_trend(seq)
        if verdict.holds and trend == "increasing" and radius > len(graph.vertices) + 1:
            warnings.warn(f"electrified balls still growing at radius {radius} "
                          f"but the verdict is bounded ({verdict.reason})", RuntimeWarning)
        if not verdict.holds and trend == "stable":
            warnings.warn(f"electrified balls stabilised at {seq[-1]} but the verdict is "
                          f"unbounded; the ball may be too small", RuntimeWarning)
    return seq


def growth_trend(seq: List[int]) -> str:
    if len(seq) < 2:
        return "short"
    if seq[-1] > seq[-2]:
        return "increasing"
    return "stable"


def electrified_dot(eb: ElectrifiedBall, name: str = "electrified") -> str:
    return ball_to_dot(eb.ball, None, name=name, extra_edges=eb.extra_edges)
