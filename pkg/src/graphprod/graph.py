"""Defining graphs and the purely graph-theoretic side of the library.

Subgraphs are always full (induced) subgraphs, so a subgraph is determined
by its vertex set.  Internally a vertex set is an ``int`` bitmask over the
declaration order; the public helpers accept names or masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import DomainError
from .groups import Cyclic, InfiniteCyclic, VertexGroupSpec

SubgraphLike = Union[int, Iterable[str]]


def bits(mask: int) -> List[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Verdict:
    holds: bool
    reason: str
    witness: Tuple = ()


class DefiningGraph:
    """A finite simplicial graph with a vertex group attached to each vertex."""

    def __init__(self, vertices: Sequence[str], edges: Iterable[Tuple[str, str]],
                 groups: Dict[str, VertexGroupSpec]):
        vertices = list(vertices)
        if len(set(vertices)) != len(vertices):
            raise DomainError("duplicate vertex name")
        if len(vertices) > 60:
            raise DomainError("at most 60 vertices are supported")
        self.vertices: Tuple[str, ...] = tuple(vertices)
        self.index: Dict[str, int] = {v: i for i, v in enumerate(vertices)}
        adj = [0] * len(vertices)
        seen = set()
        for u, v in edges:
            if u not in self.index or v not in self.index:
                raise DomainError(f"edge {u}-{v} mentions an unknown vertex")
            if u == v:
                raise DomainError(f"self-loop at {u}")
            key = frozenset((u, v))
            if key in seen:
                raise DomainError(f"repeated edge {u}-{v}")
            seen.add(key)
            i, j = self.index[u], self.index[v]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self.adj: Tuple[int, ...] = tuple(adj)
        missing = [v for v in vertices if v not in groups]
        if missing:
            raise DomainError(f"no vertex group for {missing}")
        extra = [v for v in groups if v not in self.index]
        if extra:
            raise DomainError(f"vertex group given for unknown vertex {extra}")
        self.groups: Tuple[VertexGroupSpec, ...] = tuple(groups[v] for v in vertices)
        self.full: int = (1 << len(vertices)) - 1
        self._squares = None

    # -- conversions -----------------------------------------------------
    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"DefiningGraph({list(self.vertices)}, edges={self.edge_list()})"

    def mask(self, lam: SubgraphLike) -> int:
        if isinstance(lam, int):
            if lam & ~self.full:
                raise DomainError("subgraph mask has bits outside the graph")
            return lam
        if isinstance(lam, str):
            lam = [lam]
        m = 0
        for v in lam:
            if v not in self.index:
                raise DomainError(f"unknown vertex {v!r}")
            m |= 1 << self.index[v]
        return m

    def names(self, mask: int) -> FrozenSet[str]:
        return frozenset(self.vertices[i] for i in bits(mask))

    def label(self, mask: int) -> str:
        return "{" + ",".join(self.vertices[i] for i in bits(mask)) + "}"

    def edge_list(self) -> List[Tuple[str, str]]:
        out = []
        for i, j in combinations(range(len(self.vertices)), 2):
            if self.adj[i] >> j & 1:
                out.append((self.vertices[i], self.vertices[j]))
        return out

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    # -- star, link, joins -----------------------------------------------
    def link_mask(self, m: int) -> int:
        out = self.full & ~m
        for i in bits(m):
            out &= self.adj[i]
        return out

    def star_mask(self, m: int) -> int:
        return m | self.link_mask(m)

    def link(self, lam: SubgraphLike) -> FrozenSet[str]:
        return self.names(self.link_mask(self.mask(lam)))

    def star(self, lam: SubgraphLike) -> FrozenSet[str]:
        return self.names(self.star_mask(self.mask(lam)))

    def join_parts_mask(self, m: int) -> List[int]:
        """Connected components of the complement graph restricted to ``m``."""
        if not m:
            raise DomainError("join decomposition of the empty subgraph")
        parts = []
        rest = m
        while rest:
            low = rest & -rest
            comp, frontier = low, low
            while frontier:
                i = bits(frontier & -frontier)[0]
                frontier &= frontier - 1
                new = (m & ~self.adj[i] & ~(1 << i)) & ~comp
                comp |= new
                frontier |= new
            parts.append(comp)
            rest &= ~comp
        return parts

    def join_decomposition(self, lam: SubgraphLike) -> List[FrozenSet[str]]:
        return [self.names(p) for p in self.join_parts_mask(self.mask(lam))]

    def is_join(self, m: int) -> bool:
        return len(self.join_parts_mask(m)) > 1

    def is_complete(self, m: int) -> bool:
        return all((self.adj[i] | (1 << i)) & m == m for i in bits(m))

    # -- squares and minsquare subgraphs -------------------------------------
    def induced_squares(self) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
        """Induced 4-cycles as pairs of diagonals, each listed once."""
        if self._squares is None:
            found = set()
            n = len(self.vertices)
            for a, c in combinations(range(n), 2):
                if self.adjacent(a, c):
                    continue
                common = bits(self.adj[a] & self.adj[c])
                for b, d in combinations(common, 2):
                    if not self.adjacent(b, d):
                        found.add(tuple(sorted([(a, c), (b, d)])))
            self._squares = sorted(found)
        return list(self._squares)

    def square_mask(self, sq) -> int:
        (a, c), (b, d) = sq
        return (1 << a) | (1 << b) | (1 << c) | (1 << d)

    def is_square_complete(self, m: int) -> bool:
        for sq in self.induced_squares():
            shares = any(m >> p & 1 and m >> q & 1 for p, q in sq)
            if shares and self.square_mask(sq) & ~m:
                return False
        return True

    def square_closure(self, m: int) -> int:
        squares = self.induced_squares()
        changed = True
        while changed:
            changed = False
            for sq in squares:
                if any(m >> p & 1 and m >> q & 1 for p, q in sq):
                    sm = self.square_mask(sq)
                    if sm & ~m:
                        m |= sm
                        changed = True
        return m

    def minsquare_masks(self) -> List[int]:
        closures = sorted({self.square_closure(self.square_mask(sq)) for sq in self.induced_squares()})
        minimal = [c for c in closures if not any(o != c and o & c == o for o in closures)]
        return sorted(minimal, key=lambda c: (popcount(c), c))

    def minsquare_subgraphs(self) -> List[FrozenSet[str]]:
        return [self.names(m) for m in self.minsquare_masks()]

    def contains_square(self, m: int) -> bool:
        return any(self.square_mask(sq) & ~m == 0 for sq in self.induced_squares())

    def minsquare_join_split(self) -> Optional[Tuple[int, int]]:
        """Split a join with a proper minsquare subgraph as (minsquare side, complete side).

        Returns ``None`` unless the graph is a join containing a proper
        minsquare subgraph.  Vertices forming singleton join factors are
        adjacent to everything else, so they never lie in an induced square
        and they make up the complete factor.
        """
        parts = self.join_parts_mask(self.full)
        mins = self.minsquare_masks()
        if len(parts) < 2 or not any(m != self.full for m in mins):
            return None
        complete = 0
        for p in parts:
            if popcount(p) == 1:
                complete |= p
        return self.full & ~complete, complete

    # -- classifiers ---------------------------------------------------------
    def infinite_mask(self) -> int:
        m = 0
        for i, g in enumerate(self.groups):
            if not g.is_finite:
                m |= 1 << i
        return m

    def meier_hyperbolic(self) -> Verdict:
        inf = self.infinite_mask()
        for i in bits(inf):
            nbrs = self.adj[i] & inf
            if nbrs:
                j = bits(nbrs)[0]
                return Verdict(False, "edge between infinite vertices",
                               (self.vertices[i], self.vertices[j]))
        for i in bits(inf):
            lk = self.adj[i]
            for p, q in combinations(bits(lk), 2):
                if not self.adjacent(p, q):
                    return Verdict(False, "infinite vertex with incomplete link",
                                   (self.vertices[i], self.vertices[p], self.vertices[q]))
        fin = self.full & ~inf
        for sq in self.induced_squares():
            if self.square_mask(sq) & ~fin == 0:
                (a, c), (b, d) = sq
                return Verdict(False, "induced square of finite vertices",
                               tuple(self.vertices[k] for k in (a, b, c, d)))
        return Verdict(True, "hyperbolic")

    def is_virtually_cyclic(self) -> Verdict:
        inf = self.infinite_mask()
        if inf == 0 and self.is_complete(self.full):
            return Verdict(True, "finite")
        parts = self.join_parts_mask(self.full)
        cores = [p for p in parts if popcount(p) > 1 or p & inf]
        if len(cores) != 1:
            return Verdict(False, "no two-ended core")
        core = cores[0]
        rest = self.full & ~core
        if rest & inf:
            return Verdict(False, "infinite vertex outside the core")
        if core & inf:
            if popcount(core) == 1:
                return Verdict(True, "infinite cyclic vertex", (self.label(core), self.label(rest)))
            return Verdict(False, "infinite vertex in a non-join factor")
        members = bits(core)
        if len(members) == 2 and all(self.groups[i].order == 2 for i in members):
            return Verdict(True, "infinite dihedral", (self.label(core), self.label(rest)))
        return Verdict(False, "core is not infinite dihedral")


def from_edges(vertices: Sequence[str], edges: Iterable[Tuple[str, str]],
               group: Union[VertexGroupSpec, Dict[str, VertexGroupSpec], None] = None) -> DefiningGraph:
    if group is None:
        group = Cyclic(2)
    if isinstance(group, VertexGroupSpec):
        groups = {v: group for v in vertices}
    else:
        groups = dict(group)
    return DefiningGraph(vertices, edges, groups)


def cycle(n: int, group=None, names: Optional[Sequence[str]] = None) -> DefiningGraph:
    names = list(names or "abcdefghijklmnopqrstuvwxyz"[:n])
    return from_edges(names, [(names[i], names[(i + 1) % n]) for i in range(n)], group)


def path(n: int, group=None, names: Optional[Sequence[str]] = None) -> DefiningGraph:
    names = list(names or "abcdefghijklmnopqrstuvwxyz"[:n])
    return from_edges(names, [(names[i], names[i + 1]) for i in range(n - 1)], group)


def complete(n: int, group=None, names: Optional[Sequence[str]] = None) -> DefiningGraph:
    names = list(names or "abcdefghijklmnopqrstuvwxyz"[:n])
    return from_edges(names, list(combinations(names, 2)), group)


def discrete(n: int, group=None, names: Optional[Sequence[str]] = None) -> DefiningGraph:
    names = list(names or "abcdefghijklmnopqrstuvwxyz"[:n])
    return from_edges(names, [], group)


def join(g1: DefiningGraph, g2: DefiningGraph) -> DefiningGraph:
    clash = set(g1.vertices) & set(g2.vertices)
    if clash:
        raise DomainError(f"vertex names shared by both join factors: {sorted(clash)}")
    edges = g1.edge_list() + g2.edge_list()
    edges += [(u, v) for u in g1.vertices for v in g2.vertices]
    groups = dict(zip(g1.vertices, g1.groups))
    groups.update(zip(g2.vertices, g2.groups))
    return DefiningGraph(list(g1.vertices) + list(g2.vertices), edges, groups)


def single(name: str = "a", group: Optional[VertexGroupSpec] = None) -> DefiningGraph:
    return DefiningGraph([name], [], {name: group or InfiniteCyclic()})
