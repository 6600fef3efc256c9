"""Normal forms and prefix machinery for graph products.

An element is a tuple of syllables ``(vertex_index, payload)``.  The tuple is
always reduced and canonical: among all reduced spellings of the element it
is the lexicographically least sequence of vertex indices, which is what one
gets by repeatedly pulling to the front the smallest-index syllable that
commutes past everything before it.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

from .errors import DomainError, ResourceError
from .graph import DefiningGraph, bits

Syllable = Tuple[int, int]
NormalForm = Tuple[Syllable, ...]

IDENTITY: NormalForm = ()
PREFIX_IDEAL_LIMIT = 16

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+)|\[(\d+)\])?$")


class GraphProduct:
    """Arithmetic in the graph product over a :class:`DefiningGraph`."""

    def __init__(self, graph: DefiningGraph, cache_size: int = 1 << 18):
        self.graph = graph
        self.adj = graph.adj
        self.groups = graph.groups
        self._ident = tuple(g.identity for g in graph.groups)
        self.reduce = lru_cache(maxsize=cache_size)(self._reduce)
        self.multiply = lru_cache(maxsize=cache_size)(self._multiply)
        self.invert = lru_cache(maxsize=cache_size)(self._invert)
        self.prefix_in = lru_cache(maxsize=cache_size)(self._prefix_in)

    # -- core arithmetic ---------------------------------------------------
    def _append(self, word: List[Syllable], syl: Syllable) -> None:
        v, p = syl
        if p == self._ident[v]:
            return
        adj = self.adj
        for j in range(len(word) - 1, -1, -1):
            u, q = word[j]
            if u == v:
                r = self.groups[v].compose(q, p)
                if r == self._ident[v]:
                    del word[j]
                else:
                    word[j] = (v, r)
                return
            if not adj[u] >> v & 1:
                break
        word.append(syl)

    def _canonical(self, word: Sequence[Syllable]) -> NormalForm:
        adj = self.adj
        rest = list(word)
        out = []
        while rest:
            blocked = 0
            best = -1
            for i, (v, _) in enumerate(rest):
                if adj[v] & blocked == blocked and (best < 0 or v < rest[best][0]):
                    best = i
                blocked |= 1 << v
            out.append(rest.pop(best))
        return tuple(out)

    def _reduce(self, raw: Tuple[Syllable, ...]) -> NormalForm:
        word: List[Syllable] = []
        n = len(self.groups)
        for syl in raw:
            if not 0 <= syl[0] < n:
                raise DomainError(f"syllable {syl} names a vertex outside the graph")
            self._append(word, syl)
        return self._canonical(word)

    def _multiply(self, x: NormalForm, y: NormalForm) -> NormalForm:
        if not x:
            return y
        if not y:
            return x
        word = list(x)
        for syl in y:
            self._append(word, syl)
        return self._canonical(word)

    def _invert(self, x: NormalForm) -> NormalForm:
        return self._canonical([(v, self.groups[v].inverse(p)) for v, p in reversed(x)])

    def mul(self, *elements: NormalForm) -> NormalForm:
        out = IDENTITY
        for e in elements:
            out = self.multiply(out, e)
        return out

    def between(self, x: NormalForm, y: NormalForm) -> NormalForm:
        """The element ``x^-1 y``."""
        return self.multiply(self.invert(x), y)

    # -- lengths and support -------------------------------------------------
    @staticmethod
    def support(x: NormalForm) -> int:
        m = 0
        for v, _ in x:
            m |= 1 << v
        return m

    @staticmethod
    def syllable_length(x: NormalForm) -> int:
        return len(x)

    def word_length(self, x: NormalForm) -> int:
        return sum(self.groups[v].word_length(p) for v, p in x)

    def d_syl(self, x: NormalForm, y: NormalForm) -> int:
        return len(self.between(x, y))

    def d_word(self, x: NormalForm, y: NormalForm) -> int:
        return self.word_length(self.between(x, y))

    # -- prefixes and suffixes -----------------------------------------------
    def _prefix_in(self, x: NormalForm, lam: int) -> NormalForm:
        adj = self.adj
        blocked = 0
        taken = []
        for v, p in x:
            if lam >> v & 1 and adj[v] & blocked == blocked:
                taken.append((v, p))
            else:
                blocked |= 1 << v
        if len(taken) == len(x):
            return x
        return self.reduce(tuple(taken))

    def suffix_in(self, x: NormalForm, lam: int) -> NormalForm:
        return self.invert(self.prefix_in(self.invert(x), lam))

    def prefix_ideals(self, x: NormalForm, limit: int = PREFIX_IDEAL_LIMIT) -> List[NormalForm]:
        """All prefixes of ``x``, one per order ideal of its dependence order."""
        return [p for p, _ in self.prefix_splits(x, limit)]

    def prefix_splits(self, x: NormalForm, limit: int = PREFIX_IDEAL_LIMIT) -> List[Tuple[NormalForm, NormalForm]]:
        """Pairs ``(p, s)`` with ``x = p s`` and syllable lengths adding up."""
        n = len(x)
        if n > limit:
            raise ResourceError(f"prefix enumeration limited to {limit} syllables, element has {n}")
        adj = self.adj
        below = [0] * n
        for j in range(n):
            vj = x[j][0]
            for i in range(j):
                vi = x[i][0]
                if vi == vj or not adj[vi] >> vj & 1:
                    below[j] |= 1 << i
        seen = {0}
        stack = [0]
        while stack:
            ideal = stack.pop()
            for j in range(n):
                if not ideal >> j & 1 and below[j] & ideal == below[j]:
                    nxt = ideal | 1 << j
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
        out = []
        for ideal in sorted(seen, key=lambda m: (bin(m).count("1"), m)):
            pre = tuple(x[i] for i in range(n) if ideal >> i & 1)
            suf = tuple(x[i] for i in range(n) if not ideal >> i & 1)
            out.append((self._canonical(pre), self._canonical(suf)))
        return out

    # -- text ------------------------------------------------------------------
    def generator(self, name: str, k: int = 1) -> NormalForm:
        v = self.graph.index.get(name)
        if v is None:
            raise DomainError(f"unknown vertex {name!r}")
        return self.reduce(((v, self.groups[v].generator_power(k)),))

    def parse(self, text: str) -> NormalForm:
        """Parse whitespace separated tokens ``a``, ``a^k`` or ``a[i]``."""
        raw = []
        for tok in text.replace("*", " ").split():
            if tok in ("e", "1") and "e" not in self.graph.index:
                continue
            m = _TOKEN.match(tok)
            if not m:
                raise DomainError(f"cannot parse word token {tok!r}")
            name, power, index = m.groups()
            v = self.graph.index.get(name)
            if v is None:
                raise DomainError(f"unknown vertex {name!r} in word")
            group = self.groups[v]
            if index is not None:
                if group.kind != "table":
                    raise DomainError(f"element index syntax needs a table group at {name!r}")
                i = int(index)
                if not 0 <= i < group.order:
                    raise DomainError(f"table element {i} out of range at {name!r}")
                raw.append((v, i))
            else:
                raw.append((v, group.generator_power(1 if power is None else int(power))))
        return self.reduce(tuple(raw))

    def format(self, x: NormalForm) -> str:
        names = self.graph.vertices
        return " ".join(self.groups[v].format_payload(names[v], p) for v, p in x)

    def syllables_of(self, mask: int, cap: int) -> List[Syllable]:
        return [(v, p) for v in bits(mask) for p in self.groups[v].enumerate_nonidentity(cap)]

    def element(self, syllables: Iterable[Syllable]) -> NormalForm:
        return self.reduce(tuple(syllables))
