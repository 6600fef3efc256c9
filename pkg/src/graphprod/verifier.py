"""Desk-scale verification of the hierarchy axioms on finite balls.

Every check takes a graph and a :class:`VerifierConfig` and returns a
:class:`CheckReport`.  The checks never prove anything about the whole
group; they enumerate a ball-restricted universe of points and domains,
recorded in the report so that a failure can be replayed from the config.

Relative projections are infinite sets and are sampled.  Where a check
needs the distance to a relative projection, the sampled distance is an
upper bound for the true one, so a passing inequality is never spurious.
"""

from __future__ import annotations

import itertools
import random
import time
from collections import deque
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .cosets import (CONTAINS, EQUAL, NESTED, ORTHOGONAL, TRANSVERSE, CosetGeometry,
                     DomainClass, RelProjection)
from .errors import DomainError
from .graph import DefiningGraph, bits, popcount
from .hyperplanes import DEFAULT_BUDGET, edge, enumerate_ball, hyperplanes, sides
from .words import IDENTITY, GraphProduct, NormalForm

SLIM_CONSTANT = 3.5
BGI_RADIUS = 2
CONSISTENCY_BOUND = 2
LARGE_LINK_GAP = 18


def hierarchy_constant(graph: DefiningGraph) -> int:
    return max(18, len(graph))


def uniqueness_bound(n_vertices: int, r: int) -> int:
    return (2 ** n_vertices * r + 2) ** n_vertices


@dataclass(frozen=True)
class VerifierConfig:
    radius: int = 3
    cap: int = 2
    E: Optional[int] = None
    domain_radius: int = 1
    sample_radius: int = 1
    rho_tolerance: int = 2
    max_pairs: int = 4000
    triangles: int = 2000
    seed: int = 0
    budget: int = DEFAULT_BUDGET

    def constant(self, graph: DefiningGraph) -> int:
        return self.E if self.E is not None else hierarchy_constant(graph)


@dataclass
class CheckReport:
    name: str
    universe: Dict[str, object]
    violations: List[Dict[str, object]] = field(default_factory=list)
    elapsed: float = 0.0
    checked: int = 0
    notes: List[str] = field(default_factory=list)
    vacuous: bool = False

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = " (vacuous)" if self.vacuous else ""
        return (f"{status} {self.name}: {self.checked} instances, {len(self.violations)} violations, "
                f"{self.elapsed:.2f}s{extra}")

    def to_dict(self) -> Dict[str, object]:
        out = asdict(self)
        out["passed"] = self.passed
        return out


MAX_WITNESSES = 25


class _Recorder:
    """Collects violations, keeping a bounded number of witnesses."""

    def __init__(self, report: CheckReport):
        self.report = report
        self.total = 0

    def add(self, **witness):
        self.total += 1
        if len(self.report.violations) < MAX_WITNESSES:
            self.report.violations.append(witness)

    def finish(self, start: float):
        r = self.report
        r.violations.sort(key=lambda w: repr(sorted(w.items())))
        if self.total > len(r.violations):
            r.notes.append(f"{self.total} violations in total, first {len(r.violations)} kept")
        r.elapsed = time.perf_counter() - start
        return r


class VerifierContext:
    """Ball, domain universe and caches shared by the checks of one run."""

    def __init__(self, graph: DefiningGraph, config: VerifierConfig,
                 geometry: Optional[CosetGeometry] = None):
        self.graph = graph
        self.config = config
        if geometry is None:
            geometry = CosetGeometry(GraphProduct(graph), cap=config.cap)
        self.geo = geometry
        self.engine = geometry.engine
        self.ball = enumerate_ball(self.engine, IDENTITY, config.radius, config.cap, config.budget)
        self.points: List[NormalForm] = self.ball.vertices
        self._domains: Optional[List[DomainClass]] = None
        self._rel: Dict[Tuple[DomainClass, DomainClass], str] = {}
        self._rho: Dict[Tuple[DomainClass, DomainClass], RelProjection] = {}
        self._proj: Dict[Tuple[DomainClass, NormalForm], NormalForm] = {}

    # -- formatting ------------------------------------------------------------
    def fmt(self, x: NormalForm) -> str:
        return self.engine.format(x) or "e"

    def fmt_dom(self, d: DomainClass) -> str:
        return self.geo.format_domain(d)

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.config.seed}:{salt}")

    # -- universes -------------------------------------------------------------
    @property
    def subgraphs(self) -> List[int]:
        return sorted(range(1, self.graph.full + 1), key=lambda m: (popcount(m), m))

    @property
    def domains(self) -> List[DomainClass]:
        if self._domains is None:
            reps = self.ball.within(self.config.domain_radius)
            found = {self.geo.domain(g, lam) for lam in self.subgraphs for g in reps}
            self._domains = sorted(found, key=lambda d: (popcount(d.lam), d.lam, len(d.rep), d.rep))
        return self._domains

    def pairs(self, salt: str, points: Optional[Sequence[NormalForm]] = None,
              limit: Optional[int] = None) -> List[Tuple[NormalForm, NormalForm]]:
        """Unordered pairs of points: all of them when few, else every pair
        through the identity plus a seeded sample."""
        pts = list(self.points if points is None else points)
        limit = self.config.max_pairs if limit is None else limit
        total = len(pts) * (len(pts) - 1) // 2
        if total <= limit:
            return list(itertools.combinations(pts, 2))
        base = [(IDENTITY, y) for y in pts if y != IDENTITY] if IDENTITY in pts else []
        chosen = set(base)
        rng = self.rng(salt)
        while len(chosen) < max(limit, len(base)):
            x, y = rng.sample(pts, 2)
            chosen.add((x, y))
        return sorted(chosen, key=lambda p: (len(p[0]), p[0], len(p[1]), p[1]))

    def describe(self, **extra) -> Dict[str, object]:
        out = {"radius": self.config.radius, "cap": self.config.cap, "points": len(self.points),
               "domain_radius": self.config.domain_radius, "domains": len(self.domains),
               "seed": self.config.seed}
        out.update(extra)
        return out

    # -- cached geometry -------------------------------------------------------
    def relate(self, a: DomainClass, b: DomainClass) -> str:
        key = (a, b)
        rel = self._rel.get(key)
        if rel is None:
            rel = self._rel[key] = self.geo.relate(a, b)
        return rel

    def rho(self, source: DomainClass, target: DomainClass) -> RelProjection:
        key = (source, target)
        r = self._rho.get(key)
        if r is None:
            r = self._rho[key] = self.geo.rel_projection(source, target, self.config.sample_radius)
        return r

    def project(self, d: DomainClass, x: NormalForm) -> NormalForm:
        key = (d, x)
        p = self._proj.get(key)
        if p is None:
            p = self._proj[key] = self.geo.project(d, x)
        return p

    def dist(self, d: DomainClass, x: NormalForm, y: NormalForm) -> int:
        return self.geo.d_subgraph(d.lam, self.project(d, x), self.project(d, y))

    def dist_to_rho(self, rho: RelProjection, x: NormalForm, bound: Optional[int] = None) -> int:
        """Sampled distance from the projection of ``x`` to ``rho``, stopping
        early once it is known to be at most ``bound``."""
        lam = rho.target.lam
        px = self.project(rho.target, x)
        best = None
        for q in itertools.chain((self.geo.rho_point_near(rho, x),), sorted(rho.samples)):
            d = self.geo.d_subgraph(lam, px, q)
            if best is None or d < best:
                best = d
                if bound is not None and best <= bound:
                    break
        return best


_CONTEXTS: Dict[Tuple, VerifierContext] = {}


def context(graph: DefiningGraph, config: Optional[VerifierConfig] = None,
            geometry: Optional[CosetGeometry] = None) -> VerifierContext:
    config = config or VerifierConfig()
    key = (id(graph), config, id(geometry))
    ctx = _CONTEXTS.get(key)
    if ctx is None or ctx.graph is not graph:
        if len(_CONTEXTS) > 8:
            _CONTEXTS.clear()
        ctx = _CONTEXTS[key] = VerifierContext(graph, config, geometry)
    return ctx


def _start(name: str, ctx: VerifierContext, **universe):
    report = CheckReport(name, ctx.describe(**universe))
    return report, _Recorder(report), time.perf_counter()


# ---------------------------------------------------------------------------
# projections and relative projections
# ---------------------------------------------------------------------------

def check_projection_axiom(graph, config=None, geometry=None) -> CheckReport:
    ctx = context(graph, config, geometry)
    E = ctx.engine
    pairs = ctx.pairs("projection")
    report, rec, t0 = _start("projection_axiom", ctx, pairs=len(pairs))
    for d in ctx.domains:
        for x, y in pairs:
            dw = E.d_word(x, y)
            dd = ctx.dist(d, x, y)
            report.checked += 1
            # one-vertex domains carry the vertex group's word metric, so only d_word bounds them
            if dd > dw or (popcount(d.lam) > 1 and dd > E.d_syl(x, y)):
                rec.add(domain=ctx.fmt_dom(d), x=ctx.fmt(x), y=ctx.fmt(y), d_domain=dd, d_word=dw)
    return rec.finish(t0)


def check_relative_projection_diameter(graph, config=None, geometry=None) -> CheckReport:
    ctx = context(graph, config, geometry)
    report, rec, t0 = _start("relative_projection_diameter", ctx,
                             sample_radius=ctx.config.sample_radius)
    bound = ctx.config.rho_tolerance
    for src in ctx.domains:
        for tgt in ctx.domains:
            rel = ctx.relate(src, tgt)
            if rel not in (TRANSVERSE, NESTED):
                continue
            rho = ctx.rho(src, tgt)
            diam = ctx.geo.rho_diameter(rho)
            report.checked += 1
            if diam > bound:
                rec.add(source=ctx.fmt_dom(src), target=ctx.fmt_dom(tgt), relation=rel, diameter=diam,
                        samples=[ctx.fmt(s) for s in sorted(rho.samples)])
    return rec.finish(t0)


def check_consistency(graph, config=None, geometry=None) -> CheckReport:
    """Transverse pairs obey the min-inequality; nested triples share a point."""
    ctx = context(graph, config, geometry)
    geo = ctx.geo
    doms = ctx.domains
    report, rec, t0 = _start("consistency", ctx)
    bound = CONSISTENCY_BOUND
    pairs = far_first = 0
    for i, a in enumerate(doms):
        for b in doms[i + 1:]:
            if ctx.relate(a, b) != TRANSVERSE:
                continue
            pairs += 1
            rho_ab, rho_ba = ctx.rho(a, b), ctx.rho(b, a)
            for x in ctx.points:
                report.checked += 1
                d1 = ctx.dist_to_rho(rho_ab, x, bound)
                if d1 <= bound:
                    continue
                d2 = ctx.dist_to_rho(rho_ba, x, bound)
                far_first += 1
                if d2 > bound:
                    rec.add(first=ctx.fmt_dom(a), second=ctx.fmt_dom(b), x=ctx.fmt(x),
                            d_second_to_rho=d1, d_first_to_rho=d2)
    # nested triples: [kP] nested in [gL], and [gL] nested in or transverse to [hO]
    triples = 0
    for k in doms:
        for g in doms:
            if ctx.relate(k, g) != NESTED:
                continue
            for h in doms:
                rel = ctx.relate(g, h)
                if rel == NESTED or (rel == TRANSVERSE and ctx.relate(h, k) != ORTHOGONAL):
                    if ctx.relate(k, h) not in (NESTED, TRANSVERSE):
                        rec.add(clause="nested triple", inner=ctx.fmt_dom(k), middle=ctx.fmt_dom(g),
                                other=ctx.fmt_dom(h), relation=ctx.relate(k, h))
                        continue
                    triples += 1
                    a = geo.common_representative(k.rep, k.lam, g.rep, g.lam)
                    ok = (a is not None and geo.parallel(a, k.rep, k.lam) and geo.parallel(a, g.rep, g.lam))
                    if ok:
                        # a lies in both star cosets, so its projection is in both sets
                        r1, r2 = ctx.rho(k, h), ctx.rho(g, h)
                        d = ctx.dist_to_rho(r1, a, 0) + ctx.dist_to_rho(r2, a, 0)
                        ok = d == 0
                    if not ok:
                        rec.add(clause="nested triple", inner=ctx.fmt_dom(k), middle=ctx.fmt_dom(g),
                                other=ctx.fmt_dom(h))
    report.universe.update(transverse_pairs=pairs, nested_triples=triples, far_from_first=far_first)
    return rec.finish(t0)


def _coset_graph(ctx: VerifierContext, d: DomainClass) -> Tuple[List[NormalForm], Dict[NormalForm, List[NormalForm]]]:
    """Projections of the ball onto a domain, joined when they differ by a
    proper-support element (or a generator, for a single vertex)."""
    E = ctx.engine
    verts = sorted({ctx.project(d, x) for x in ctx.points}, key=lambda z: (len(z), z))
    nb: Dict[NormalForm, List[NormalForm]] = {v: [] for v in verts}
    single = popcount(d.lam) == 1
    for i, p in enumerate(verts):
        for q in verts[i + 1:]:
            u = E.between(p, q)
            if single:
                adjacent = E.word_length(u) == 1
            else:
                adjacent = E.support(u) != d.lam
            if adjacent:
                nb[p].append(q)
                nb[q].append(p)
    return verts, nb


def _bfs(nb: Dict[NormalForm, List[NormalForm]], start: NormalForm, banned=frozenset()) -> Dict[NormalForm, int]:
    if start in banned:
        return {}
    dist = {start: 0}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for q in nb[p]:
            if q not in dist and q not in banned:
                dist[q] = dist[p] + 1
                queue.append(q)
    return dist


def check_bounded_geodesic_image(graph, config=None, geometry=None) -> CheckReport:
    """Geodesics of the outer domain must pass near the relative projection.

    Geodesics are searched in the ball-restricted coset graph; a geodesic
    avoiding the closed 2-neighbourhood exists iff removing that
    neighbourhood leaves the endpoints at their true distance.
    """
    ctx = context(graph, config, geometry)
    geo = ctx.geo
    pairs = ctx.pairs("bgi")
    report, rec, t0 = _start("bounded_geodesic_image", ctx, pairs=len(pairs))
    nested = 0
    for outer in ctx.domains:
        if popcount(outer.lam) < 2:
            continue
        inners = [d for d in ctx.domains if ctx.relate(d, outer) == NESTED]
        if not inners:
            continue
        verts, nb = _coset_graph(ctx, outer)
        for inner in inners:
            nested += 1
            rho = ctx.rho(inner, outer)
            near = frozenset(v for v in verts if ctx.dist_to_rho(rho, v, BGI_RADIUS) <= BGI_RADIUS)
            seen = set()
            cache: Dict[NormalForm, Dict[NormalForm, int]] = {}
            for x, y in pairs:
                if ctx.project(inner, x) == ctx.project(inner, y):
                    continue
                a, b = ctx.project(outer, x), ctx.project(outer, y)
                if (a, b) in seen:
                    continue
                seen.add((a, b))
                report.checked += 1
                if a in near or b in near:
                    continue
                report.universe["searched"] = report.universe.get("searched", 0) + 1
                true = geo.d_subgraph(outer.lam, a, b)
                if a not in cache:
                    cache[a] = _bfs(nb, a, near)
                if cache[a].get(b) == true:
                    rec.add(outer=ctx.fmt_dom(outer), inner=ctx.fmt_dom(inner), x=ctx.fmt(x), y=ctx.fmt(y),
                            start=ctx.fmt(a), end=ctx.fmt(b), distance=true)
    report.universe["nested_pairs"] = nested
    report.vacuous = report.checked == 0
    return rec.finish(t0)


def check_large_links(graph, config=None, geometry=None) -> CheckReport:
    ctx = context(graph, config, geometry)
    geo, E = ctx.geo, ctx.engine
    Econst = ctx.config.constant(graph)
    pairs = ctx.pairs("links")
    report, rec, t0 = _start("large_links", ctx, pairs=len(pairs), E=Econst)
    gaps = 0
    for outer in ctx.domains:
        inners = [d for d in ctx.domains if ctx.relate(d, outer) == NESTED]
        done = set()
        for x, y in pairs:
            a, b = ctx.project(outer, x), ctx.project(outer, y)
            if (a, b) in done:
                continue
            done.add((a, b))
            path = geo.subgraph_geodesic(outer.lam, a, b)
            n = len(path) - 1
            links = {geo.domain(p, E.support(E.between(p, q))) for p, q in zip(path, path[1:])}
            report.checked += 1
            if len(links) > Econst * n + Econst:
                rec.add(domain=ctx.fmt_dom(outer), x=ctx.fmt(x), y=ctx.fmt(y), links=len(links), distance=n)
            for d in inners:
                if ctx.dist(d, x, y) > LARGE_LINK_GAP:
                    gaps += 1
                    if not any(ctx.relate(d, t) in (EQUAL, NESTED) for t in links):
                        rec.add(domain=ctx.fmt_dom(outer), nested=ctx.fmt_dom(d), x=ctx.fmt(x), y=ctx.fmt(y))
    report.universe["gap_instances"] = gaps
    if gaps == 0:
        report.notes.append(f"no nested domain had a gap above {LARGE_LINK_GAP}; the nesting clause holds vacuously")
    return rec.finish(t0)


# ---------------------------------------------------------------------------
# partial realisation, uniqueness, complexity
# ---------------------------------------------------------------------------

def _orthogonal_families(ctx: VerifierContext, max_size: int = 3) -> List[Tuple[DomainClass, ...]]:
    doms = ctx.domains
    out = [(d,) for d in doms]
    frontier = out
    for _ in range(max_size - 1):
        nxt = []
        for fam in frontier:
            last = doms.index(fam[-1])
            for d in doms[last + 1:]:
                if all(ctx.relate(f, d) == ORTHOGONAL for f in fam):
                    nxt.append(fam + (d,))
        out.extend(nxt)
        frontier = nxt
    return out


def check_partial_realization(graph, config=None, geometry=None) -> CheckReport:
    ctx = context(graph, config, geometry)
    geo = ctx.geo
    families = _orthogonal_families(ctx)
    rng = ctx.rng("realize")
    if len(families) > 400:
        families = [families[i] for i in sorted(rng.sample(range(len(families)), 400))]
    report, rec, t0 = _start("partial_realization", ctx, families=len(families))
    tol = ctx.config.rho_tolerance
    for fam in families:
        pts = [ctx.project(d, rng.choice(ctx.points)) for d in fam]
        x = geo.partial_realize(fam, pts)
        for d, p in zip(fam, pts):
            report.checked += 1
            if ctx.dist(d, x, p) != 0:
                rec.add(bullet=1, family=[ctx.fmt_dom(f) for f in fam], domain=ctx.fmt_dom(d),
                        point=ctx.fmt(p), x=ctx.fmt(x))
            for other in ctx.domains:
                rel = ctx.relate(d, other)
                if rel not in (NESTED, TRANSVERSE):
                    continue
                rho = ctx.rho(d, other)
                report.checked += 1
                gap = ctx.dist_to_rho(rho, x, 0)
                anchor = geo.d_subgraph(other.lam, ctx.project(other, x), rho.anchor)
                if gap != 0 or anchor > tol:
                    rec.add(bullet=2, family=[ctx.fmt_dom(f) for f in fam], domain=ctx.fmt_dom(d),
                            other=ctx.fmt_dom(other), x=ctx.fmt(x), gap=gap, anchor_distance=anchor)
    return rec.finish(t0)


def check_mutual_representation(graph, config=None, geometry=None) -> CheckReport:
    ctx = context(graph, config, geometry)
    geo = ctx.geo
    fams = [f for f in _orthogonal_families(ctx) if len(f) > 1]
    chains = []
    for a in ctx.domains:
        for b in ctx.domains:
            if ctx.relate(a, b) == NESTED:
                chains.append((a, b))
                chains.extend((a, b, c) for c in ctx.domains if ctx.relate(b, c) == NESTED)
    report, rec, t0 = _start("mutual_representation", ctx, families=len(fams), chains=len(chains))
    for fam in fams + chains:
        report.checked += 1
        try:
            g = geo.mutual_representative(fam)
        except DomainError as exc:
            rec.add(family=[ctx.fmt_dom(d) for d in fam], error=str(exc))
            continue
        if any(geo.domain(g, d.lam) != d for d in fam):
            rec.add(family=[ctx.fmt_dom(d) for d in fam], representative=ctx.fmt(g))
    return rec.finish(t0)


def check_promoting_orthogonality(graph, config=None, geometry=None) -> CheckReport:
    ctx = context(graph, config, geometry)
    geo = ctx.geo
    reps = ctx.ball.within(ctx.config.domain_radius)
    report, rec, t0 = _start("promoting_orthogonality", ctx)
    for target in ctx.domains:
        for g in reps:
            orth = [lam for lam in ctx.subgraphs if ctx.relate(geo.domain(g, lam), target) == ORTHOGONAL]
            for l1, l2 in itertools.combinations(orth, 2):
                report.checked += 1
                union = geo.domain(g, l1 | l2)
                if ctx.relate(union, target) != ORTHOGONAL:
                    rec.add(rep=ctx.fmt(g), first=graph.label(l1), second=graph.label(l2),
                            target=ctx.fmt_dom(target), relation=ctx.relate(union, target))
    return rec.finish(t0)


def check_big_gates(graph, config=None, geometry=None) -> CheckReport:
    """A projected coset of sampled diameter above 2 forces nesting."""
    ctx = context(graph, config, geometry)
    geo, E = ctx.geo, ctx.engine
    report, rec, t0 = _start("big_gates", ctx, sample_radius=ctx.config.sample_radius)
    big = 0
    for d in ctx.domains:
        for other in ctx.domains:
            imgs = sorted({ctx.project(d, E.multiply(other.rep, s))
                           for s in geo.subgroup_ball(other.lam, ctx.config.sample_radius)})
            diam = max((geo.d_subgraph(d.lam, p, q) for p, q in itertools.combinations(imgs, 2)), default=0)
            report.checked += 1
            if diam > 2:
                big += 1
                if ctx.relate(d, other) not in (EQUAL, NESTED):
                    rec.add(domain=ctx.fmt_dom(d), coset=ctx.fmt_dom(other), diameter=diam,
                            relation=ctx.relate(d, other))
    report.universe["big_projections"] = big
    return rec.finish(t0)


def check_uniqueness(graph, config=None, geometry=None) -> CheckReport:
    ctx = context(graph, config, geometry)
    E = ctx.engine
    nv = len(graph)
    pairs = ctx.pairs("uniqueness")
    report, rec, t0 = _start("uniqueness", ctx, pairs=len(pairs))
    tightest = None
    for x, y in pairs:
        r = max(ctx.dist(d, x, y) for d in ctx.domains)
        dw = E.d_word(x, y)
        bound = uniqueness_bound(nv, r)
        report.checked += 1
        if dw > bound:
            rec.add(x=ctx.fmt(x), y=ctx.fmt(y), r=r, d_word=dw, bound=bound)
        if x != y:
            ratio = dw / bound
            if tightest is None or ratio > tightest[0]:
                tightest = (ratio, ctx.fmt(x), ctx.fmt(y), r, dw)
    if tightest:
        report.notes.append("tightest pair {1} / {2}: r={3}, word distance {4}, ratio {0:.3g}".format(*tightest))
    return rec.finish(t0)


def _longest_chain(ctx: VerifierContext) -> Tuple[int, List[DomainClass]]:
    doms = ctx.domains
    # nesting strictly grows the subgraph, so sorting by size is a topological order
    best: Dict[DomainClass, Tuple[int, List[DomainClass]]] = {}
    for d in doms:
        top = (1, [d])
        for c in doms:
            if c in best and ctx.relate(c, d) == NESTED and best[c][0] + 1 > top[0]:
                top = (best[c][0] + 1, best[c][1] + [d])
        best[d] = top
    return max(best.values(), key=lambda t: t[0])


def check_finite_complexity_and_containers(graph, config=None, geometry=None) -> CheckReport:
    ctx = context(graph, config, geometry)
    geo = ctx.geo
    report, rec, t0 = _start("finite_complexity_and_containers", ctx)
    length, chain = _longest_chain(ctx)
    report.checked += 1
    report.notes.append(f"longest nesting chain has {length} domains (bound {len(graph)})")
    if length > len(graph):
        rec.add(chain=[ctx.fmt_dom(d) for d in chain], length=length)
    containers = 0
    for big in ctx.domains:
        below = [d for d in ctx.domains if ctx.relate(d, big) == NESTED]
        for small in below:
            witnesses = [w for w in below if ctx.relate(w, small) == ORTHOGONAL]
            if not witnesses:
                continue
            containers += 1
            report.checked += 1
            c = geo.container_candidate(big.rep, big.lam, small.rep, small.lam)
            if ctx.relate(c, big) != NESTED or ctx.relate(c, small) != ORTHOGONAL:
                rec.add(outer=ctx.fmt_dom(big), inner=ctx.fmt_dom(small), container=ctx.fmt_dom(c),
                        issue="container not nested in outer or not orthogonal to inner")
            for w in witnesses:
                if ctx.relate(w, c) not in (EQUAL, NESTED):
                    rec.add(outer=ctx.fmt_dom(big), inner=ctx.fmt_dom(small), container=ctx.fmt_dom(c),
                            witness=ctx.fmt_dom(w))
    report.universe["container_instances"] = containers
    return rec.finish(t0)


# ---------------------------------------------------------------------------
# hyperbolicity of the subgraph metric
# ---------------------------------------------------------------------------

def slim_subgraphs(graph: DefiningGraph) -> List[int]:
    return [m for m in range(1, graph.full + 1) if popcount(m) >= 2 and not graph.is_join(m)]


def _subgroup_points(ctx: VerifierContext, lam: int) -> List[NormalForm]:
    E = ctx.engine
    return [x for x in ctx.points if E.support(x) & ~lam == 0]


def check_hyperbolicity_slim(graph, config=None, geometry=None) -> CheckReport:
    """Sampled geodesic triangles of each non-join subgraph metric.

    Vertex-to-vertex distances are integers, so a side vertex within 3 of
    the other two sides puts every point of the side within 7/2.
    """
    ctx = context(graph, config, geometry)
    geo = ctx.geo
    lams = slim_subgraphs(graph)
    rng = ctx.rng("slim")
    per = -(-ctx.config.triangles // len(lams)) if lams else 0
    report, rec, t0 = _start("hyperbolicity_slim", ctx, subgraphs=len(lams), triangles_per_subgraph=per)
    limit = int(SLIM_CONSTANT)
    worst = 0
    for lam in lams:
        pts = _subgroup_points(ctx, lam)
        if len(pts) < 2:
            continue
        for _ in range(per):
            a, b, c = (rng.choice(pts) for _ in range(3))
            sides = [geo.subgraph_geodesic(lam, a, b, rng), geo.subgraph_geodesic(lam, b, c, rng),
                     geo.subgraph_geodesic(lam, c, a, rng)]
            report.checked += 1
            for i, side in enumerate(sides):
                others = sides[(i + 1) % 3] + sides[(i + 2) % 3]
                for u in side:
                    best = None
                    for w in others:
                        d = geo.d_subgraph(lam, u, w)
                        if best is None or d < best:
                            best = d
                            if best <= limit:
                                break
                    worst = max(worst, best)
                    if best > limit:
                        rec.add(subgraph=graph.label(lam), triangle=[ctx.fmt(a), ctx.fmt(b), ctx.fmt(c)],
                                side=i, point=ctx.fmt(u), distance=best)
    report.notes.append(f"largest side-to-sides distance seen: {worst}")
    report.vacuous = report.checked == 0
    if report.vacuous:
        report.notes.append("no subgraph with at least two vertices fails to split as a join")
    return rec.finish(t0)


def _subgroup_window(ctx: VerifierContext, lam: int, max_points: int, max_radius: int) -> List[NormalForm]:
    """The largest subgroup ball of at most ``max_points`` elements."""
    best = ctx.geo.subgroup_ball(lam, 0)
    for r in range(1, max_radius + 1):
        ball = ctx.geo.subgroup_ball(lam, r)
        if len(ball) > max_points:
            break
        best = ball
        if len(ball) == len(ctx.geo.subgroup_ball(lam, r - 1)):
            break
    return best


def check_bottleneck(graph, config=None, geometry=None, max_points: int = 250) -> CheckReport:
    """Removing the 7/2-ball around a geodesic midpoint must disconnect the ends.

    Runs on a window of the subgroup itself, grown as far as ``max_points``
    allows, since the midpoint ball swallows the ends of any geodesic
    shorter than 8.
    """
    ctx = context(graph, config, geometry)
    geo, E = ctx.geo, ctx.engine
    lams = slim_subgraphs(graph)
    rng = ctx.rng("bottleneck")
    report, rec, t0 = _start("bottleneck", ctx, subgraphs=len(lams), window_points=max_points)
    shortest = 2 * int(SLIM_CONSTANT) + 2
    for lam in lams:
        pts = _subgroup_window(ctx, lam, max_points, 4 * ctx.config.radius)
        nb = {p: [] for p in pts}
        for p, q in itertools.combinations(pts, 2):
            if E.support(E.between(p, q)) != lam:
                nb[p].append(q)
                nb[q].append(p)
        far = [(IDENTITY, y) for y in pts if geo.d_subgraph(lam, IDENTITY, y) >= shortest]
        pairs = far + ctx.pairs(f"bottleneck{lam}", pts, limit=max(1, ctx.config.max_pairs // max(1, len(lams))))
        for x, y in pairs:
            path = geo.subgraph_geodesic(lam, x, y, rng)
            n = len(path) - 1
            if n < shortest:
                continue
            # midpoint is a vertex for even n and an edge midpoint for odd n
            mids = [path[n // 2]] if n % 2 == 0 else [path[n // 2], path[n // 2 + 1]]
            radius = int(SLIM_CONSTANT) if n % 2 == 0 else int(SLIM_CONSTANT - 0.5)
            banned = frozenset(p for p in pts if min(geo.d_subgraph(lam, p, m) for m in mids) <= radius)
            report.checked += 1
            if y in _bfs(nb, x, banned):
                rec.add(subgraph=graph.label(lam), x=ctx.fmt(x), y=ctx.fmt(y), length=n)
    if report.checked == 0:
        report.vacuous = True
        report.notes.append("no geodesic in the windows is long enough for the midpoint ball to miss its ends")
    return rec.finish(t0)


# ---------------------------------------------------------------------------
# diameter classification and equivariance
# ---------------------------------------------------------------------------

def power_witness(engine: GraphProduct, lam: int) -> NormalForm:
    """One generator per vertex of the subgraph, in declaration order."""
    return engine.element((v, engine.groups[v].generator_power(1)) for v in bits(lam))


def check_diameter_classification(graph, config=None, geometry=None, growth_window: int = 16) -> CheckReport:
    ctx = context(graph, config, geometry)
    geo, E = ctx.geo, ctx.engine
    R = ctx.config.radius
    report, rec, t0 = _start("diameter_classification", ctx, growth_window=growth_window)
    for lam in range(1, graph.full + 1):
        if popcount(lam) < 2:
            continue
        label = graph.label(lam)
        report.checked += 1
        if graph.is_join(lam):
            pts = _subgroup_points(ctx, lam)
            diam = max((geo.d_subgraph(lam, p, q) for p, q in ctx.pairs(f"diam{lam}", pts)), default=0)
            report.notes.append(f"{label}: join, measured diameter {diam}")
            if diam > 2:
                rec.add(subgraph=label, kind="join", diameter=diam)
            continue
        k = popcount(lam)
        step = power_witness(E, lam)
        seq, power, n = [], IDENTITY, 0
        while k * (n + 1) <= max(R, growth_window):
            n += 1
            power = E.multiply(power, step)
            seq.append(geo.d_subgraph(lam, IDENTITY, power))
        inside = seq[:R // k]
        report.notes.append(f"{label}: witness {ctx.fmt(step)}, d(e, power^n) in ball {inside}, "
                            f"up to syllable length {k * len(seq)}: {seq}")
        if any(b <= a for a, b in zip(inside, inside[1:])):
            rec.add(subgraph=label, kind="non-join", witness=ctx.fmt(step), sequence=inside)
        if len(seq) > 1 and seq[-1] <= 2:
            report.notes.append(f"{label}: no growth beyond 2 within the growth window")
    return rec.finish(t0)


def check_equivariance(graph, config=None, geometry=None) -> CheckReport:
    ctx = context(graph, config, geometry)
    geo, E = ctx.geo, ctx.engine
    rng = ctx.rng("equivariance")
    movers = ctx.ball.within(min(2, ctx.config.radius))
    xs = ctx.points if len(ctx.points) <= 40 else rng.sample(ctx.points, 40)
    report, rec, t0 = _start("equivariance", ctx, translations=len(movers), points=len(xs))
    tol = ctx.config.rho_tolerance
    doms = ctx.domains
    for a in movers:
        for d in doms:
            moved = geo.domain(E.multiply(a, d.rep), d.lam)
            for x in xs:
                report.checked += 1
                ax = E.multiply(a, x)
                lhs = geo.gate(E.multiply(a, d.rep), d.lam, ax)
                rhs = E.multiply(a, geo.gate(d.rep, d.lam, x))
                if lhs != rhs:
                    rec.add(level="coset", translation=ctx.fmt(a), domain=ctx.fmt_dom(d), x=ctx.fmt(x))
                    continue
                # the canonical coset of the moved class is parallel; transfer by gating
                dist = geo.d_subgraph(d.lam, geo.project(moved, rhs), geo.project(moved, ax))
                if dist > tol:
                    rec.add(level="class", translation=ctx.fmt(a), domain=ctx.fmt_dom(d), x=ctx.fmt(x),
                            distance=dist)
        for d1, d2 in itertools.islice(itertools.combinations(doms, 2), 300):
            m1 = geo.domain(E.multiply(a, d1.rep), d1.lam)
            m2 = geo.domain(E.multiply(a, d2.rep), d2.lam)
            report.checked += 1
            rel = ctx.relate(d1, d2)
            if geo.relate(m1, m2) != rel:
                rec.add(level="relation", translation=ctx.fmt(a), first=ctx.fmt_dom(d1), second=ctx.fmt_dom(d2))
                continue
            if rel in (NESTED, TRANSVERSE):
                rho = ctx.rho(d1, d2)
                moved_rho = geo.rel_projection(m1, m2, ctx.config.sample_radius)
                shifted = geo.project(m2, E.multiply(a, rho.anchor))
                gap = min(geo.d_subgraph(d2.lam, shifted, q) for q in moved_rho.samples)
                if gap > tol:
                    rec.add(level="relative projection", translation=ctx.fmt(a), source=ctx.fmt_dom(d1),
                            target=ctx.fmt_dom(d2), gap=gap)
    return rec.finish(t0)


# ---------------------------------------------------------------------------
# hyperplanes of the ball
# ---------------------------------------------------------------------------

def _syllable_path(E: GraphProduct, x: NormalForm, y: NormalForm) -> List[NormalForm]:
    path = [x]
    for syl in E.between(x, y):
        path.append(E.multiply(path[-1], (syl,)))
    return path


def check_hyperplanes(graph, config=None, geometry=None) -> CheckReport:
    """Geodesic crossing, crossing labels, gates and parallel cosets on the ball."""
    ctx = context(graph, config, geometry)
    E, geo, ball = ctx.engine, ctx.geo, ctx.ball
    hyps = hyperplanes(ball)
    owner = {e: h for h in hyps for e in h.dual_edges}
    half = ball.radius // 2
    inner = ball.within(half)
    rng = ctx.rng("hyperplanes")
    report, rec, t0 = _start("hyperplanes", ctx, hyperplanes=len(hyps), interior=len(inner))
    # geodesics cross each hyperplane once; longer paths cross one twice
    nb = ball.neighbours()
    for x, y in ctx.pairs("hyp-geo", inner):
        path = _syllable_path(E, x, y)
        # capped balls lack edges for payloads beyond the cap
        if any(p not in ball for p in path) or any(edge(p, q) not in owner for p, q in zip(path, path[1:])):
            continue
        report.checked += 1
        crossed = [owner[edge(p, q)].id for p, q in zip(path, path[1:])]
        if len(set(crossed)) != len(crossed):
            rec.add(kind="geodesic crosses twice", x=ctx.fmt(x), y=ctx.fmt(y))
    for _ in range(min(500, ctx.config.max_pairs)):
        x = rng.choice(inner)
        walk = [x]
        for _ in range(rng.randint(2, max(2, ball.radius))):
            walk.append(rng.choice(nb[walk[-1]]))
        if len(walk) - 1 > E.d_syl(walk[0], walk[-1]):
            report.checked += 1
            crossed = [owner[edge(p, q)].id for p, q in zip(walk, walk[1:])]
            if len(set(crossed)) == len(crossed):
                rec.add(kind="non-geodesic path crosses each hyperplane once", walk=[ctx.fmt(w) for w in walk])
    # crossing hyperplanes carry adjacent labels: all four sides realised
    comp = {h.id: sides(h, ball) for h in hyps}
    for h1, h2 in itertools.combinations(hyps, 2):
        quads = {(comp[h1.id][z] == comp[h1.id][IDENTITY], comp[h2.id][z] == comp[h2.id][IDENTITY])
                 for z in inner}
        if len(quads) == 4:
            report.checked += 1
            if not graph.adjacent(h1.label, h2.label):
                rec.add(kind="crossing hyperplanes with non-adjacent labels",
                        first=[ctx.fmt(v) for v in h1.id], second=[ctx.fmt(v) for v in h2.id])
    # gate interface and parallel cosets
    for lam in range(1, graph.full + 1):
        for g in ball.within(1):
            coset = [z for z in inner if geo.in_coset(g, lam, z)]
            for x in inner:
                gx = geo.gate(g, lam, x)
                if gx not in ball or ball.dist[gx] > half or gx == x:
                    continue
                for h in hyps:
                    c = comp[h.id]
                    if c[x] != c[gx]:
                        report.checked += 1
                        bad = [z for z in coset if c[z] == c[x]]
                        if bad:
                            rec.add(kind="gate hyperplane misses coset point", subgraph=graph.label(lam),
                                    coset=ctx.fmt(g), x=ctx.fmt(x), point=ctx.fmt(bad[0]))
            for s in E.syllables_of(graph.link_mask(lam), ctx.config.cap):
                hg = E.multiply(g, (s,))
                for z in coset:
                    for t in E.syllables_of(lam, ctx.config.cap):
                        zt = E.multiply(z, (t,))
                        e1 = edge(z, zt)
                        other = edge(E.multiply(hg, E.between(g, z)), E.multiply(hg, E.between(g, zt)))
                        if e1 in owner and other in owner:
                            report.checked += 1
                            if owner[e1] is not owner[other]:
                                rec.add(kind="parallel cosets crossed by different hyperplanes",
                                        subgraph=graph.label(lam), edge=[ctx.fmt(v) for v in e1])
    return rec.finish(t0)


# ---------------------------------------------------------------------------
# distance formula
# ---------------------------------------------------------------------------

def threshold(value: int, sigma: int) -> int:
    return value if value >= sigma else 0


@dataclass
class DistanceFit:
    K: float
    L: float
    sigma: int
    pairs: int
    worst_ratio: float
    active_pairs: int


def fit_distance_formula(graph, config=None, sigma: int = 37, geometry=None) -> Tuple[float, float, CheckReport]:
    """Extremal (K, L) with d_word <= K*S + L and S <= K*d_word + L on the ball,
    where S is the thresholded sum of domain distances."""
    ctx = context(graph, config, geometry)
    E = ctx.engine
    Econst = ctx.config.constant(graph)
    if sigma < 2 * Econst + 1:
        raise DomainError(f"sigma must be at least 2E+1 = {2 * Econst + 1}")
    pairs = ctx.pairs("distance-formula")
    report, rec, t0 = _start("distance_formula", ctx, pairs=len(pairs), sigma=sigma)
    data = []
    for x, y in pairs:
        s = sum(threshold(ctx.dist(d, x, y), sigma) for d in ctx.domains)
        data.append((E.d_word(x, y), s))
    report.checked = len(data)
    active = sum(1 for _, s in data if s > 0)
    best = None
    candidates = {1.0} | {dw / s for dw, s in data if s > 0} | {s / dw for dw, s in data if dw > 0 and s > 0}
    for K in sorted(k for k in candidates if k >= 1):
        L = max((max(dw - K * s, s - K * dw, 0) for dw, s in data), default=0)
        if best is None or L < best[1]:
            best = (K, L)
    K, L = best if best else (1.0, 0.0)
    for dw, s in data:
        if dw > K * s + L or s > K * dw + L:
            rec.add(d_word=dw, thresholded_sum=s)
    worst = max((dw / (K * s + L) for dw, s in data if K * s + L > 0), default=0.0)
    report.universe.update(K=K, L=L, worst_ratio=round(worst, 4), active_pairs=active)
    report.notes.append(f"fit K={K:g}, L={L:g}, worst ratio {worst:.3f}")
    if active == 0:
        report.notes.append(f"every domain distance on the ball is below sigma={sigma}; "
                            "the fit reduces to the additive constant")
    rec.finish(t0)
    return K, L, report


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

SUITES: Dict[str, Callable[..., CheckReport]] = {
    "projection": check_projection_axiom,
    "rho-diameter": check_relative_projection_diameter,
    "consistency": check_consistency,
    "bgi": check_bounded_geodesic_image,
    "large-links": check_large_links,
    "partial-realization": check_partial_realization,
    "mutual-representation": check_mutual_representation,
    "promoting-orthogonality": check_promoting_orthogonality,
    "big-gates": check_big_gates,
    "uniqueness": check_uniqueness,
    "complexity": check_finite_complexity_and_containers,
    "slim": check_hyperbolicity_slim,
    "bottleneck": check_bottleneck,
    "diameter": check_diameter_classification,
    "equivariance": check_equivariance,
    "hyperplanes": check_hyperplanes,
}


def _run_one(graph, name, config, sigma, geometry=None) -> CheckReport:
    if name == "distance-formula":
        return fit_distance_formula(graph, config, sigma or 37, geometry)[2]
    return SUITES[name](graph, config, geometry)


def run_suite(graph: DefiningGraph, names: Iterable[str], config: Optional[VerifierConfig] = None,
              sigma: Optional[int] = None, geometry: Optional[CosetGeometry] = None,
              jobs: int = 1) -> List[CheckReport]:
    """Run the named checks and return their reports in the order requested.

    With ``jobs > 1`` the checks run in a process pool; a custom
    ``geometry`` forces sequential execution since it may not pickle.
    """
    config = config or VerifierConfig()
    names = list(names)
    for name in names:
        if name != "distance-formula" and name not in SUITES:
            raise DomainError(f"unknown suite {name!r}")
    if jobs <= 1 or geometry is not None or len(names) < 2:
        return [_run_one(graph, n, config, sigma, geometry) for n in names]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_run_one, graph, n, config, sigma) for n in names]
        return [f.result() for f in futures]
