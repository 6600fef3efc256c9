"""Abstract proto-hierarchy structures, container completion and combination.

A :class:`ProtoStructure` is purely combinatorial: named domains, a relation
for every ordered pair, and relative projections recorded as opaque point
set identifiers with a declared diameter.  Metric axioms are out of scope
here; the graph-product instance is checked metrically by the verifier.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .cosets import CONTAINS, EQUAL, NESTED, ORTHOGONAL, TRANSVERSE, CosetGeometry
from .errors import DomainError
from .verifier import CheckReport, VerifierConfig, _Recorder, context

RELATIONS = (EQUAL, NESTED, CONTAINS, ORTHOGONAL, TRANSVERSE)
_FLIP = {EQUAL: EQUAL, NESTED: CONTAINS, CONTAINS: NESTED,
         ORTHOGONAL: ORTHOGONAL, TRANSVERSE: TRANSVERSE}
_CODE = {EQUAL: "=", NESTED: "<", CONTAINS: ">", ORTHOGONAL: "|", TRANSVERSE: "~"}
_UNCODE = {v: k for k, v in _CODE.items()}


@dataclass(frozen=True)
class Projection:
    id: str
    diam: float


@dataclass(frozen=True)
class ContainerDomain:
    base: str
    family: FrozenSet[str]

    @property
    def name(self) -> str:
        return container_name(self.base, self.family)


def container_name(base: str, family: Iterable[str]) -> str:
    return f"D[{base}|{','.join(sorted(family))}]"


@dataclass
class ProtoStructure:
    """Finite proto-hierarchy data.

    ``relation[(a, b)] == NESTED`` means ``a`` is properly nested in ``b``.
    ``rel_proj[(a, b)]`` is the relative projection of ``a`` into ``b``'s
    space.  ``containers`` is filled in by :func:`complete`.
    """

    domains: List[str]
    relation: Dict[Tuple[str, str], str]
    rel_proj: Dict[Tuple[str, str], Projection]
    E: int
    diam_flags: Dict[str, str] = field(default_factory=dict)
    containers: Dict[str, ContainerDomain] = field(default_factory=dict)
    minimal: FrozenSet[str] = frozenset()
    projection_bound: Optional[float] = None
    rank_bound: Optional[int] = None
    # set by complete(), which may add no containers at all
    is_completed: bool = False

    def rel(self, a: str, b: str) -> str:
        return self.relation[(a, b)]

    def nested(self, a: str, b: str) -> bool:
        """``a`` nested in ``b``, equality allowed."""
        r = self.relation[(a, b)]
        return r == NESTED or r == EQUAL

    def orth(self, a: str, b: str) -> bool:
        return self.relation[(a, b)] == ORTHOGONAL

    @property
    def completed(self) -> bool:
        return self.is_completed

    def maximum(self) -> Optional[str]:
        tops = [d for d in self.domains if all(self.nested(o, d) for o in self.domains)]
        return tops[0] if len(tops) == 1 else None

    def copy(self) -> "ProtoStructure":
        return ProtoStructure(list(self.domains), dict(self.relation), dict(self.rel_proj), self.E,
                              dict(self.diam_flags), dict(self.containers), self.minimal,
                              self.projection_bound, self.rank_bound, self.is_completed)

    # -- serialisation ---------------------------------------------------------
    def to_dict(self) -> Dict[str, object]:
        return {
            "E": self.E,
            "domains": list(self.domains),
            "relation": ["".join(_CODE[self.relation[(a, b)]] for b in self.domains) for a in self.domains],
            "projections": [{"source": a, "target": b, "id": p.id, "diam": p.diam}
                            for (a, b), p in sorted(self.rel_proj.items())],
            "diam_flags": dict(self.diam_flags),
            "containers": {n: {"base": c.base, "family": sorted(c.family)}
                           for n, c in sorted(self.containers.items())},
            "minimal": sorted(self.minimal),
            "projection_bound": self.projection_bound,
            "rank_bound": self.rank_bound,
            "completed": self.is_completed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "ProtoStructure":
        try:
            domains = [str(d) for d in data["domains"]]
            rows = data["relation"]
            if len(rows) != len(domains) or any(len(r) != len(domains) for r in rows):
                raise DomainError("relation matrix shape does not match the domain list")
            relation = {}
            for a, row in zip(domains, rows):
                for b, c in zip(domains, row):
                    if c not in _UNCODE:
                        raise DomainError(f"unknown relation code {c!r} for ({a}, {b})")
                    relation[(a, b)] = _UNCODE[c]
            rel_proj = {(p["source"], p["target"]): Projection(str(p["id"]), float(p["diam"]))
                        for p in data.get("projections", [])}
            containers = {n: ContainerDomain(c["base"], frozenset(c["family"]))
                          for n, c in data.get("containers", {}).items()}
            return cls(domains, relation, rel_proj, int(data["E"]), dict(data.get("diam_flags", {})),
                       containers, frozenset(data.get("minimal", [])), data.get("projection_bound"),
                       data.get("rank_bound"), bool(data.get("completed", bool(containers))))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed proto-structure document: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "ProtoStructure":
        return cls.from_dict(json.loads(text))


def build(domains: Sequence[str], E: int, nest: Iterable[Tuple[str, str]] = (),
          orth: Iterable[Tuple[str, str]] = (), projections: Optional[Mapping[Tuple[str, str], Projection]] = None,
          diam_flags: Optional[Mapping[str, str]] = None, closure: bool = True,
          minimal: Iterable[str] = ()) -> ProtoStructure:
    """Assemble a structure from proper nesting pairs ``(small, big)`` and orthogonal pairs.

    Nesting is transitively closed when ``closure`` is set.  Every pair that
    is neither nested nor orthogonal becomes transverse, and relative
    projections not supplied get a default identifier of diameter ``E``.
    """
    domains = list(domains)
    up: Dict[str, Set[str]] = {d: set() for d in domains}
    for a, b in nest:
        up[a].add(b)
    if closure:
        changed = True
        while changed:
            changed = False
            for a in domains:
                extra = set().union(*(up[b] for b in up[a])) - up[a] if up[a] else set()
                if extra:
                    up[a] |= extra
                    changed = True
    o = set()
    for a, b in orth:
        o.add((a, b))
        o.add((b, a))
    relation = {}
    for a in domains:
        for b in domains:
            if a == b:
                r = EQUAL
            elif (a, b) in o:
                r = ORTHOGONAL
            elif b in up[a]:
                r = NESTED
            elif a in up[b]:
                r = CONTAINS
            else:
                r = TRANSVERSE
            relation[(a, b)] = r
    rel_proj = dict(projections or {})
    for a in domains:
        for b in domains:
            if relation[(a, b)] in (NESTED, TRANSVERSE) and (a, b) not in rel_proj:
                rel_proj[(a, b)] = Projection(f"rho({a}->{b})", E)
    return ProtoStructure(domains, relation, rel_proj, E, dict(diam_flags or {}), minimal=frozenset(minimal))


# -- combinatorial helpers ------------------------------------------------------

def longest_chain(ps: ProtoStructure, members: Optional[Sequence[str]] = None) -> List[str]:
    """A longest strictly nested chain, smallest first."""
    members = list(ps.domains if members is None else members)
    below = {a: [b for b in members if ps.rel(b, a) == NESTED] for a in members}
    best: Dict[str, List[str]] = {}

    def visit(a):
        if a not in best:
            chains = [visit(b) for b in below[a]]
            longest = max(chains, key=len, default=[])
            best[a] = longest + [a]
        return best[a]

    out: List[str] = []
    for a in members:
        c = visit(a)
        if len(c) > len(out):
            out = c
    return out


def orthogonal_families(ps: ProtoStructure, members: Sequence[str],
                        max_size: Optional[int] = None) -> List[Tuple[str, ...]]:
    """Every nonempty pairwise orthogonal subset of ``members``."""
    members = list(members)
    out: List[Tuple[str, ...]] = []

    def grow(current, start):
        if current:
            out.append(tuple(current))
        if max_size is not None and len(current) >= max_size:
            return
        for i in range(start, len(members)):
            m = members[i]
            if all(ps.orth(m, c) for c in current):
                current.append(m)
                grow(current, i + 1)
                current.pop()

    grow([], 0)
    return out


def max_orthogonal_family(ps: ProtoStructure) -> Tuple[str, ...]:
    best: Tuple[str, ...] = ()
    doms = list(ps.domains)

    def grow(current, cands):
        nonlocal best
        if len(current) > len(best):
            best = tuple(current)
        if len(current) + len(cands) <= len(best):
            return
        for i, m in enumerate(cands):
            grow(current + [m], [c for c in cands[i + 1:] if ps.orth(m, c)])

    grow([], doms)
    return best


# -- validation -------------------------------------------------------------------

def validate(ps: ProtoStructure) -> CheckReport:
    """Check the relational axioms of a proto-hierarchy structure.

    For a structure produced by :func:`complete`, the finite-rank check is
    replaced by the completed chain bound and projections may reach
    ``projection_bound``.
    """
    start = time.perf_counter()
    report = CheckReport("proto-validate", {"domains": len(ps.domains), "E": ps.E,
                                            "completed": ps.completed})
    rec = _Recorder(report)
    doms = ps.domains
    if len(set(doms)) != len(doms):
        rec.add(kind="duplicate domain names")
    for a in doms:
        for b in doms:
            report.checked += 1
            r = ps.relation.get((a, b))
            if r not in RELATIONS:
                rec.add(kind="relation undefined", pair=[a, b], value=r)
                continue
            if (a == b) != (r == EQUAL):
                rec.add(kind="equal relation off the diagonal" if a != b else "diagonal not equal", pair=[a, b])
            back = ps.relation.get((b, a))
            if back is not None and back != _FLIP[r]:
                if ORTHOGONAL in (r, back) and ({r, back} & {NESTED, CONTAINS}):
                    rec.add(kind="orthogonal and nested on the same pair", pair=[a, b], relations=[r, back])
                else:
                    rec.add(kind="relation not symmetric", pair=[a, b], relations=[r, back])
    if report.violations:
        return rec.finish(start)
    # nesting is a partial order with a unique maximum
    for a in doms:
        for b in doms:
            if ps.rel(a, b) != NESTED:
                continue
            for c in doms:
                report.checked += 1
                if ps.rel(b, c) == NESTED and ps.rel(a, c) != NESTED:
                    rec.add(kind="nesting not transitive", chain=[a, b, c], relation=ps.rel(a, c))
                if ps.rel(b, c) == ORTHOGONAL and ps.rel(a, c) != ORTHOGONAL:
                    rec.add(kind="orthogonality not inherited by nested domain", nested=[a, b], orthogonal=c,
                            relation=ps.rel(a, c))
    if doms and ps.maximum() is None:
        rec.add(kind="no unique nesting-maximal domain")
    # relative projections exactly where required
    bound = ps.projection_bound if ps.projection_bound is not None else ps.E
    for a in doms:
        for b in doms:
            report.checked += 1
            needs = ps.rel(a, b) in (NESTED, TRANSVERSE)
            p = ps.rel_proj.get((a, b))
            if needs and p is None:
                rec.add(kind="relative projection missing", pair=[a, b], relation=ps.rel(a, b))
            elif not needs and p is not None:
                rec.add(kind="relative projection defined for non-transverse, non-nested pair",
                        pair=[a, b], relation=ps.rel(a, b))
            elif p is not None and p.diam > bound:
                rec.add(kind="relative projection too large", pair=[a, b], diam=p.diam, bound=bound)
    for d, flag in ps.diam_flags.items():
        if d not in doms:
            rec.add(kind="diameter flag for unknown domain", domain=d)
        elif not (flag in ("unbounded", "point") or flag.startswith("bounded")):
            rec.add(kind="unknown diameter flag", domain=d, flag=flag)
    chain = longest_chain(ps)
    if ps.completed:
        base_E = ps.E
        limit = base_E ** 3 + base_E ** 2 + base_E
        report.notes.append(f"completed structure: chain bound {limit}, finite rank not required")
    else:
        limit = ps.E
        rank = ps.rank_bound if ps.rank_bound is not None else ps.E
        fam = max_orthogonal_family(ps)
        report.universe["max_orthogonal_family"] = len(fam)
        if len(fam) > rank:
            rec.add(kind="finite rank exceeded", family=list(fam), bound=rank)
    report.universe["longest_chain"] = len(chain)
    if len(chain) > limit:
        rec.add(kind="nesting chain too long", chain=chain, bound=limit)
    return rec.finish(start)


def check_container_axiom(ps: ProtoStructure) -> CheckReport:
    """Exhaustive container check: for ``U`` nested in ``W`` with something
    nested in ``W`` and orthogonal to ``U``, some domain properly nested in
    ``W`` contains all such domains."""
    start = time.perf_counter()
    report = CheckReport("proto-containers", {"domains": len(ps.domains)})
    rec = _Recorder(report)
    doms = ps.domains
    below = {w: [q for q in doms if ps.nested(q, w)] for w in doms}
    for w in doms:
        proper = [q for q in below[w] if q != w]
        for u in below[w]:
            need = [q for q in below[w] if ps.orth(q, u)]
            if not need:
                continue
            report.checked += 1
            if not any(all(ps.nested(q, c) for q in need) for c in proper):
                rec.add(kind="no container", base=w, domain=u, orthogonal=need[:10])
    return rec.finish(start)


# -- completion ---------------------------------------------------------------------

def container_pairs(ps: ProtoStructure) -> List[ContainerDomain]:
    out = []
    for w in ps.domains:
        below = [v for v in ps.domains if ps.rel(v, w) == NESTED]
        inside = below + [w]
        for fam in orthogonal_families(ps, below, max_size=ps.E):
            if any(all(ps.orth(q, v) for v in fam) for q in inside):
                out.append(ContainerDomain(w, frozenset(fam)))
    return out


def complete(ps: ProtoStructure, literal: bool = False) -> ProtoStructure:
    """Add a point domain for every container pair, with the induced relations.

    Two containers ``D[W|V]`` and ``D[T|R]`` are orthogonal when ``W`` and
    ``T`` are, and also when one base is nested in a member of the other's
    family, mirroring the rule between containers and ordinary domains.
    Without the second clause orthogonality is not inherited by nested
    domains; ``literal=True`` keeps only the first clause.

    Raises :class:`DomainError` if ``ps`` fails :func:`validate` or is
    already completed.
    """
    if ps.completed:
        raise DomainError("structure is already completed")
    pre = validate(ps)
    if not pre.passed:
        raise DomainError(f"structure fails validation: {pre.violations[0]}")
    E = ps.E
    pairs = container_pairs(ps)
    S = list(ps.domains)
    D = {c.name: c for c in pairs}
    names = S + [c.name for c in pairs]
    rel = dict(ps.relation)

    def nest_sd(q, c):  # q in S nested in container c
        return ps.nested(q, c.base) and all(ps.orth(q, v) for v in c.family)

    def orth_sd(q, c):
        return ps.orth(c.base, q) or any(ps.nested(q, v) for v in c.family)

    for c in pairs:
        n = c.name
        for q in S:
            if nest_sd(q, c):
                r = NESTED
            elif ps.nested(c.base, q):
                r = CONTAINS
            elif orth_sd(q, c):
                r = ORTHOGONAL
            else:
                r = TRANSVERSE
            rel[(q, n)] = r
            rel[(n, q)] = _FLIP[r]
        for c2 in pairs:
            n2 = c2.name
            if n == n2:
                rel[(n, n)] = EQUAL
                continue
            if _dd_nested(ps, c, c2):
                r = NESTED
            elif _dd_nested(ps, c2, c):
                r = CONTAINS
            elif ps.orth(c.base, c2.base) or (not literal and (
                    any(ps.nested(c.base, v) for v in c2.family)
                    or any(ps.nested(c2.base, v) for v in c.family))):
                r = ORTHOGONAL
            else:
                r = TRANSVERSE
            rel[(n, n2)] = r
    rel_proj = dict(ps.rel_proj)
    for c in pairs:
        n = c.name
        for q in names:
            if q == n:
                continue
            if rel[(q, n)] in (NESTED, TRANSVERSE):
                rel_proj[(q, n)] = Projection(f"point({n})", 0)
            if q in D or rel[(n, q)] not in (NESTED, TRANSVERSE):
                continue
            members = sorted(v for v in c.family if ps.rel(v, q) in (NESTED, TRANSVERSE))
            if members:
                parts = [ps.rel_proj[(v, q)] for v in members]
                if len(parts) == 1:
                    rel_proj[(n, q)] = parts[0]
                else:
                    diam = 2 * max(p.diam for p in parts) + 2 * E
                    rel_proj[(n, q)] = Projection("union(" + ",".join(p.id for p in parts) + ")", diam)
            else:
                if ps.rel(c.base, q) != TRANSVERSE:
                    raise AssertionError(f"container {n} transverse to {q} without a transverse base")
                rel_proj[(n, q)] = ps.rel_proj[(c.base, q)]
    flags = dict(ps.diam_flags)
    for c in pairs:
        flags[c.name] = "point"
    return ProtoStructure(names, rel, rel_proj, E, flags, D, ps.minimal, projection_bound=4 * E,
                          is_completed=True)


def _dd_nested(ps: ProtoStructure, c: ContainerDomain, c2: ContainerDomain) -> bool:
    if not ps.nested(c.base, c2.base):
        return False
    return all(ps.orth(r, c.base) or any(ps.nested(r, v) for v in c.family) for r in c2.family)


def check_completed_complexity(ps: ProtoStructure) -> CheckReport:
    """Longest nesting chains of a completed structure against the cubic bound."""
    start = time.perf_counter()
    E = ps.E
    report = CheckReport("proto-complexity", {"domains": len(ps.domains), "containers": len(ps.containers),
                                               "E": E})
    rec = _Recorder(report)
    if not ps.completed:
        report.notes.append("no container domains; bound holds trivially if the structure validates")
    by_base: Dict[str, List[str]] = {}
    for n, c in ps.containers.items():
        by_base.setdefault(c.base, []).append(n)
    worst_common = 0
    for base, members in sorted(by_base.items()):
        report.checked += 1
        chain = longest_chain(ps, members)
        worst_common = max(worst_common, len(chain))
        if len(chain) > E * E + E:
            rec.add(kind="common-base chain too long", base=base, chain=chain, bound=E * E + E)
    d_chain = longest_chain(ps, list(ps.containers))
    report.checked += 1
    if len(d_chain) > E ** 3 + E ** 2:
        rec.add(kind="container chain too long", chain=d_chain, bound=E ** 3 + E ** 2)
    chain = longest_chain(ps)
    report.checked += 1
    if len(chain) > E ** 3 + E ** 2 + E:
        rec.add(kind="chain too long", chain=chain, bound=E ** 3 + E ** 2 + E)
    report.universe.update(longest_common_base_chain=worst_common, longest_container_chain=len(d_chain),
                           longest_chain=len(chain))
    return rec.finish(start)


# -- combination --------------------------------------------------------------------

def _leaf_name(v: str, w: str) -> str:
    return f"{v}/{w}"


def combine(rel: ProtoStructure, leaves: Mapping[str, ProtoStructure]) -> ProtoStructure:
    """Replace each designated minimal domain ``V`` of ``rel`` by the structure ``leaves[V]``.

    Leaf domains are renamed ``V/name``.  The hierarchy constant becomes
    ``E0^2 + E0`` where ``E0`` is the largest input constant.
    """
    if set(leaves) != set(rel.minimal):
        raise DomainError(f"leaf keys {sorted(leaves)} do not match the designated minimal domains "
                          f"{sorted(rel.minimal)}")
    for v in rel.minimal:
        if v not in rel.domains:
            raise DomainError(f"designated domain {v} is not a domain")
        if any(rel.rel(u, v) == NESTED for u in rel.domains):
            raise DomainError(f"designated domain {v} is not nesting-minimal")
    E0 = max([rel.E] + [leaf.E for leaf in leaves.values()])
    E1 = E0 * E0 + E0
    upper = [d for d in rel.domains if d not in rel.minimal]
    owner: Dict[str, Tuple[str, str]] = {}
    names = list(upper)
    for v in sorted(leaves):
        for w in leaves[v].domains:
            n = _leaf_name(v, w)
            owner[n] = (v, w)
            names.append(n)
    relation: Dict[Tuple[str, str], str] = {}
    for a in names:
        for b in names:
            relation[(a, b)] = _combined_relation(rel, leaves, owner, a, b)
    rel_proj: Dict[Tuple[str, str], Projection] = {}
    for a in names:
        for b in names:
            r = relation[(a, b)]
            if r not in (NESTED, TRANSVERSE):
                continue
            rel_proj[(a, b)] = _combined_projection(rel, leaves, owner, a, b, E0)
    flags = {d: rel.diam_flags[d] for d in upper if d in rel.diam_flags}
    for n, (v, w) in owner.items():
        if w in leaves[v].diam_flags:
            flags[n] = leaves[v].diam_flags[w]
    return ProtoStructure(names, relation, rel_proj, E1, flags, rank_bound=4 * E1 * E1 + 2 * E1)


def point_structure(name: str = "pt", E: int = 1) -> ProtoStructure:
    """The structure of a single point domain, as for a finite vertex group."""
    return ProtoStructure([name], {(name, name): EQUAL}, {}, E, {name: "point"})


def _combined_relation(rel, leaves, owner, a, b) -> str:
    if a == b:
        return EQUAL
    la, lb = owner.get(a), owner.get(b)
    if la is None and lb is None:
        return rel.rel(a, b)
    if la is not None and lb is not None:
        (va, wa), (vb, wb) = la, lb
        if va == vb:
            return leaves[va].rel(wa, wb)
        return ORTHOGONAL if rel.orth(va, vb) else TRANSVERSE
    if la is not None:
        va, _ = la
        r = rel.rel(va, b)
        if r == NESTED:
            return NESTED
        return ORTHOGONAL if r == ORTHOGONAL else TRANSVERSE
    return _FLIP[_combined_relation(rel, leaves, owner, b, a)]


def _combined_projection(rel, leaves, owner, a, b, E0) -> Projection:
    la, lb = owner.get(a), owner.get(b)
    if la is None and lb is None:
        return rel.rel_proj[(a, b)]
    if la is not None and lb is not None and la[0] == lb[0]:
        return leaves[la[0]].rel_proj[(la[1], lb[1])]
    if lb is None:
        # leaf domain into an upper domain: use its parent's projection
        return rel.rel_proj[(la[0], b)]
    vb, wb = lb
    src = a if la is None else la[0]
    base = rel.rel_proj[(src, vb)]
    return Projection(f"pi[{b}]({base.id})", base.diam * E0 + E0)


# -- sources of structures ------------------------------------------------------------

def from_coset_geometry(graph, config: Optional[VerifierConfig] = None,
                        geometry: Optional[CosetGeometry] = None) -> ProtoStructure:
    """The ball-restricted hierarchy of a graph product as an abstract structure.

    Domains are the parallelism classes enumerated by the verifier; relative
    projection diameters are the sampled diameters and the constant is the
    hierarchy constant of the graph.
    """
    config = config or VerifierConfig(radius=1, domain_radius=1)
    ctx = context(graph, config, geometry)
    doms = ctx.domains
    names = [ctx.fmt_dom(d) for d in doms]
    relation = {}
    rel_proj = {}
    for i, d1 in enumerate(doms):
        for j, d2 in enumerate(doms):
            r = ctx.relate(d1, d2)
            relation[(names[i], names[j])] = r
            if r in (NESTED, TRANSVERSE):
                rho = ctx.rho(d1, d2)
                rel_proj[(names[i], names[j])] = Projection(
                    f"rho({names[i]}->{names[j]})", ctx.geo.rho_diameter(rho))
    flags = {}
    for n, d in zip(names, doms):
        if bin(d.lam).count("1") == 1:
            finite = graph.groups[d.lam.bit_length() - 1].is_finite
            flags[n] = "bounded" if finite else "unbounded"
        else:
            flags[n] = "bounded" if graph.is_join(d.lam) else "unbounded"
    minimal = frozenset(n for n, d in zip(names, doms) if bin(d.lam).count("1") == 1)
    return ProtoStructure(names, relation, rel_proj, config.constant(graph), flags, minimal=minimal)


def random_almost_structure(rng: random.Random, max_domains: int = 20, max_E: int = 4,
                            attempts: int = 200) -> ProtoStructure:
    """A random structure passing :func:`validate` with ``E <= max_E``.

    Nesting comes from a layered random DAG under a single root; orthogonal
    pairs are drawn among incomparable domains and closed downwards, and a
    draw is kept only if no domain ends up orthogonal to something it is
    comparable with and the rank stays within ``max_E``.
    """
    for _ in range(attempts):
        n = rng.randint(2, max_domains)
        depth = rng.randint(2, max_E)
        level = [0] + [rng.randint(1, depth - 1) for _ in range(n - 1)]
        names = [f"U{i}" for i in range(n)]
        parents: Dict[int, Set[int]] = {0: set()}
        for i in range(1, n):
            cands = [j for j in range(n) if level[j] < level[i] and (j < i or level[j] == 0)]
            k = rng.randint(1, min(2, len(cands)))
            parents[i] = set(rng.sample(cands, k))
        up: Dict[int, Set[int]] = {}

        def ancestors(i):
            if i not in up:
                s = set()
                for p in parents[i]:
                    s.add(p)
                    s |= ancestors(p)
                up[i] = s
            return up[i]

        for i in range(n):
            ancestors(i)
        down = {i: {j for j in range(n) if i in up[j]} | {i} for i in range(n)}
        comparable = lambda a, b: a == b or a in up[b] or b in up[a]
        orth: Set[Tuple[int, int]] = set()
        for _ in range(rng.randint(0, n)):
            a, b = rng.sample(range(n), 2)
            if comparable(a, b):
                continue
            new = {(x, y) for x in down[a] for y in down[b]}
            if any(comparable(x, y) for x, y in new):
                continue
            for x, y in new:
                orth.add((x, y))
                orth.add((y, x))
        nest = [(names[i], names[p]) for i in range(n) for p in up[i]]
        opairs = [(names[a], names[b]) for a, b in orth if a < b]
        E = rng.randint(depth, max_E)
        ps = build(names, E, nest, opairs, closure=False)
        for key in list(ps.rel_proj):
            ps.rel_proj[key] = Projection(ps.rel_proj[key].id, rng.randint(0, E))
        if validate(ps).passed:
            return ps
    raise DomainError("could not draw a valid random structure")
