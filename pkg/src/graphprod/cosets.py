"""Cosets of graphical subgroups, gates, subgraph metrics and the relations
between parallelism classes.

A coset ``g<L>`` is stored with the representative whose ``L``-suffix is
trivial, and a parallelism class ``[gL]`` with the representative whose
``st(L)``-suffix is trivial.  Both choices make equality a plain comparison
of normal forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import DomainError, OracleDisagreement, ResourceError
from .graph import bits, popcount
from .words import IDENTITY, GraphProduct, NormalForm

EQUAL = "equal"
NESTED = "nested"          # first is properly nested in second
CONTAINS = "contains"      # second is properly nested in first
ORTHOGONAL = "orthogonal"
TRANSVERSE = "transverse"

GUARD_LIMIT = 10


@dataclass(frozen=True, order=True)
class Coset:
    rep: NormalForm
    lam: int


@dataclass(frozen=True, order=True)
class DomainClass:
    rep: NormalForm
    lam: int


@dataclass(frozen=True)
class RelProjection:
    source: DomainClass
    target: DomainClass
    anchor: NormalForm
    samples: FrozenSet[NormalForm]
    claimed_diam: int = 2


class CosetGeometry:
    """Coset-level geometry over a :class:`GraphProduct`.

    ``guard`` turns on the exhaustive cross-check of the double coset test
    for elements of at most ``GUARD_LIMIT`` syllables.
    """

    def __init__(self, engine: GraphProduct, guard: bool = True, cap: int = 2):
        self.engine = engine
        self.graph = engine.graph
        self.guard = guard
        self.cap = cap
        self._dsub: Dict[Tuple[int, NormalForm], int] = {}
        self._dsub_oracle: Dict[Tuple[int, NormalForm], int] = {}
        self._star: Dict[int, int] = {}
        self._subballs: Dict[Tuple[int, int], List[NormalForm]] = {}
        self._double: Dict[Tuple[NormalForm, int, int], Optional[NormalForm]] = {}
        self.unguarded = 0

    # -- helpers ---------------------------------------------------------------
    def star(self, lam: int) -> int:
        s = self._star.get(lam)
        if s is None:
            s = self._star[lam] = self.graph.star_mask(lam)
        return s

    def coset(self, g: NormalForm, lam: int) -> Coset:
        E = self.engine
        return Coset(E.multiply(g, E.invert(E.suffix_in(g, lam))), lam)

    def domain(self, g: NormalForm, lam: int) -> DomainClass:
        if not lam:
            raise DomainError("the empty subgraph does not index a domain")
        E = self.engine
        return DomainClass(E.multiply(g, E.invert(E.suffix_in(g, self.star(lam)))), lam)

    def in_coset(self, g: NormalForm, lam: int, x: NormalForm) -> bool:
        return self.engine.support(self.engine.between(g, x)) & ~lam == 0

    # -- gates and metrics -----------------------------------------------------
    def gate(self, g: NormalForm, lam: int, x: NormalForm) -> NormalForm:
        E = self.engine
        return E.multiply(g, E.prefix_in(E.between(g, x), lam))

    def project(self, dom: DomainClass, x: NormalForm) -> NormalForm:
        return self.gate(dom.rep, dom.lam, x)

    def d_subgraph(self, lam: int, x: NormalForm, y: NormalForm) -> int:
        E = self.engine
        g = E.between(x, y)
        if E.support(g) & ~lam:
            raise DomainError("support of x^-1 y is not contained in the subgraph")
        return self._d_sub(lam, g)

    def _d_sub(self, lam: int, g: NormalForm) -> int:
        if not g:
            return 0
        E = self.engine
        if popcount(lam) == 1:
            return E.word_length(g)
        if E.support(g) != lam:
            return 1
        key = (lam, g)
        hit = self._dsub.get(key)
        if hit is not None:
            return hit
        best = None
        for v in bits(lam):
            p = E.prefix_in(g, lam & ~(1 << v))
            if not p:
                continue
            cand = 1 + self._d_sub(lam, E.between(p, g))
            if best is None or cand < best:
                best = cand
                if best == 2:
                    break
        self._dsub[key] = best
        return best

    def d_subgraph_exhaustive(self, lam: int, x: NormalForm, y: NormalForm) -> int:
        """Minimal factorisation length found by scanning every prefix split."""
        E = self.engine
        g = E.between(x, y)
        if E.support(g) & ~lam:
            raise DomainError("support of x^-1 y is not contained in the subgraph")
        return self._d_sub_oracle(lam, g)

    def _d_sub_oracle(self, lam: int, g: NormalForm) -> int:
        E = self.engine
        if not g:
            return 0
        if popcount(lam) == 1:
            return E.word_length(g)
        if E.support(g) != lam:
            return 1
        key = (lam, g)
        hit = self._dsub_oracle.get(key)
        if hit is None:
            hit = 1 + min(self._d_sub_oracle(lam, s) for p, s in E.prefix_splits(g)
                          if p and E.support(p) != lam)
            self._dsub_oracle[key] = hit
        return hit

    def subgraph_geodesic(self, lam: int, x: NormalForm, y: NormalForm, rng=None) -> List[NormalForm]:
        """Vertices of a geodesic of the subgraph metric from ``x`` to ``y``.

        Each step strips a maximal prefix supported off one vertex, choosing
        among the optimal vertices at random when ``rng`` is given.
        """
        E = self.engine
        g = E.between(x, y)
        if E.support(g) & ~lam:
            raise DomainError("support of x^-1 y is not contained in the subgraph")
        path = [x]
        cur = x
        if popcount(lam) == 1:
            for v, p in g:
                for step in self.engine.groups[v].geodesic_steps(p):
                    cur = E.multiply(cur, ((v, step),))
                    path.append(cur)
            return path
        while g:
            if E.support(g) != lam:
                cur = E.multiply(cur, g)
                path.append(cur)
                break
            need = self._d_sub(lam, g) - 1
            options = []
            for v in bits(lam):
                p = E.prefix_in(g, lam & ~(1 << v))
                if p and self._d_sub(lam, E.between(p, g)) == need:
                    options.append(p)
            p = options[0] if rng is None else rng.choice(options)
            cur = E.multiply(cur, p)
            path.append(cur)
            g = E.between(p, g)
        return path

    def d_domain(self, dom: DomainClass, x: NormalForm, y: NormalForm) -> int:
        return self.d_subgraph(dom.lam, self.project(dom, x), self.project(dom, y))

    # -- parallelism and relations ---------------------------------------------
    def parallel(self, g: NormalForm, h: NormalForm, lam: int) -> bool:
        return self.engine.support(self.engine.between(g, h)) & ~self.star(lam) == 0

    def common_representative(self, g: NormalForm, lam: int, h: NormalForm, om: int) -> Optional[NormalForm]:
        """Some ``k`` with ``[kL] = [gL]`` and ``[kO] = [hO]``, or ``None``."""
        E = self.engine
        u = E.between(g, h)
        sl, so = self.star(lam), self.star(om)
        key = (u, sl, so)
        if key in self._double:
            k = self._double[key]
        else:
            p = E.prefix_in(u, sl)
            rest = E.between(p, u)
            k = p if E.support(rest) & ~so == 0 else None
            if self.guard:
                if len(u) <= GUARD_LIMIT:
                    oracle = any(E.support(a) & ~sl == 0 and E.support(b) & ~so == 0
                                 for a, b in E.prefix_splits(u))
                    if oracle != (k is not None):
                        raise OracleDisagreement(
                            f"double coset test disagrees with split enumeration on {E.format(u)!r}")
                else:
                    self.unguarded += 1
            self._double[key] = k
        return None if k is None else E.multiply(g, k)

    def common_representative_exists(self, g, lam, h, om) -> bool:
        return self.common_representative(g, lam, h, om) is not None

    def relate(self, d1: DomainClass, d2: DomainClass) -> str:
        if d1 == d2:
            return EQUAL
        l1, l2 = d1.lam, d2.lam
        nest12 = l1 & ~l2 == 0
        nest21 = l2 & ~l1 == 0
        orth = l1 & ~self.graph.link_mask(l2) == 0
        if not (nest12 or nest21 or orth):
            return TRANSVERSE
        if not self.common_representative_exists(d1.rep, l1, d2.rep, l2):
            return TRANSVERSE
        if nest12 and nest21:
            # same subgraph with a common representative means the same class
            raise AssertionError("distinct canonical classes share a representative")
        if nest12:
            return NESTED
        if nest21:
            return CONTAINS
        return ORTHOGONAL

    # -- relative projections ----------------------------------------------------
    def subgroup_ball(self, lam: int, radius: int) -> List[NormalForm]:
        key = (lam, radius)
        out = self._subballs.get(key)
        if out is None:
            E = self.engine
            steps = E.syllables_of(lam, self.cap)
            seen = {IDENTITY}
            frontier = [IDENTITY]
            for _ in range(radius):
                nxt = []
                for x in frontier:
                    for s in steps:
                        y = E.multiply(x, (s,))
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
                frontier = nxt
            out = self._subballs[key] = sorted(seen, key=lambda w: (len(w), w))
        return out

    def rel_projection(self, source: DomainClass, target: DomainClass, sample_radius: int = 1) -> RelProjection:
        rel = self.relate(source, target)
        if rel not in (TRANSVERSE, NESTED):
            raise DomainError(f"relative projection undefined for relation {rel}")
        E = self.engine
        g = source.rep
        anchor = self.project(target, g)
        samples = {anchor}
        for s in self.subgroup_ball(self.star(source.lam), sample_radius):
            samples.add(self.project(target, E.multiply(g, s)))
        return RelProjection(source, target, anchor, frozenset(samples))

    def rho_point_near(self, rho: RelProjection, x: NormalForm) -> NormalForm:
        """A point of the relative projection chosen using ``x``.

        The source's star coset element closest to ``x`` is projected; its
        image belongs to the relative projection by definition.
        """
        src = rho.source
        near = self.gate(src.rep, self.star(src.lam), x)
        return self.project(rho.target, near)

    def distance_to_rho(self, rho: RelProjection, x: NormalForm) -> int:
        tgt = rho.target
        px = self.project(tgt, x)
        pts = set(rho.samples)
        pts.add(self.rho_point_near(rho, x))
        return min(self.d_subgraph(tgt.lam, px, q) for q in pts)

    def rho_diameter(self, rho: RelProjection) -> int:
        pts = sorted(rho.samples)
        lam = rho.target.lam
        return max((self.d_subgraph(lam, p, q) for i, p in enumerate(pts) for q in pts[i + 1:]), default=0)

    # -- containers, mutual representatives, partial realisation -----------------
    def container_candidate(self, g: NormalForm, lam: int, h: NormalForm, om: int) -> DomainClass:
        big, small = self.domain(g, lam), self.domain(h, om)
        if self.relate(small, big) != NESTED:
            raise DomainError("container needs the second domain properly nested in the first")
        inner = self.graph.link_mask(om) & lam
        if not inner:
            raise DomainError("no domain nested in the first is orthogonal to the second")
        a = self.common_representative(g, lam, h, om)
        return self.domain(a, inner)

    def mutual_representative(self, domains: Sequence[DomainClass]) -> NormalForm:
        if not domains:
            return IDENTITY
        E = self.engine
        g = domains[0].rep
        for d in domains[1:]:
            u = E.between(g, d.rep)
            g = E.multiply(g, self.domain(u, d.lam).rep)
        for d in domains:
            if self.domain(g, d.lam) != d:
                raise DomainError("domains admit no common representative")
        return g

    def partial_realize(self, domains: Sequence[DomainClass], points: Sequence[NormalForm]) -> NormalForm:
        if len(domains) != len(points):
            raise DomainError("one point per domain is required")
        for i in range(len(domains)):
            for j in range(i + 1, len(domains)):
                if self.relate(domains[i], domains[j]) != ORTHOGONAL:
                    raise DomainError("partial realisation needs pairwise orthogonal domains")
        E = self.engine
        g = self.mutual_representative(domains)
        x = g
        for d, p in zip(domains, points):
            x = E.multiply(x, E.between(g, self.gate(g, d.lam, p)))
        return x

    def format_domain(self, d: DomainClass) -> str:
        rep = self.engine.format(d.rep) or "e"
        return f"[{rep} {self.graph.label(d.lam)}]"
