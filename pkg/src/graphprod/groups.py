"""Vertex group backends.

Every backend encodes its elements as plain Python integers so that
syllables can be stored as ``(vertex_index, payload)`` tuples, hashed and
sorted cheaply.  Three kinds are supported: finite cyclic groups, the
infinite cyclic group and groups given by an explicit multiplication table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import DomainError


class VertexGroupSpec:
    """Common interface of the vertex group backends."""

    kind: str = "abstract"
    identity: int = 0

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    @property
    def is_hyperbolic(self) -> bool:
        # finite groups and Z are hyperbolic; tables are finite
        return True

    @property
    def order(self) -> Optional[int]:
        raise NotImplementedError

    def compose(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inverse(self, a: int) -> int:
        raise NotImplementedError

    def word_length(self, a: int) -> int:
        raise NotImplementedError

    def enumerate_nonidentity(self, cap: int) -> List[int]:
        raise NotImplementedError

    def generator_power(self, k: int) -> int:
        raise NotImplementedError

    def generators(self) -> List[int]:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def geodesic_steps(self, a: int) -> List[int]:
        """Generator payloads whose product, left to right, is ``a`` with minimal length."""
        raise NotImplementedError

    def format_payload(self, name: str, a: int) -> str:
        return name if a == 1 else f"{name}^{a}"


@dataclass(frozen=True)
class Cyclic(VertexGroupSpec):
    n: int
    kind: str = field(default="cyclic", init=False)

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"cyclic group order must be at least 2, got {self.n}")

    @property
    def order(self) -> int:
        return self.n

    def compose(self, a, b):
        return (a + b) % self.n

    def inverse(self, a):
        return (-a) % self.n

    def word_length(self, a):
        a %= self.n
        return min(a, self.n - a)

    def enumerate_nonidentity(self, cap):
        return list(range(1, self.n))

    def generator_power(self, k):
        return k % self.n

    def generators(self):
        return [1]

    def describe(self):
        return f"cyclic:{self.n}"

    def geodesic_steps(self, a):
        a %= self.n
        if a <= self.n - a:
            return [1] * a
        return [self.n - 1] * (self.n - a)


@dataclass(frozen=True)
class InfiniteCyclic(VertexGroupSpec):
    kind: str = field(default="int", init=False)

    @property
    def order(self):
        return None

    def compose(self, a, b):
        return a + b

    def inverse(self, a):
        return -a

    def word_length(self, a):
        return abs(a)

    def enumerate_nonidentity(self, cap):
        if cap < 1:
            raise DomainError("payload cap must be at least 1")
        return [k for k in range(-cap, cap + 1) if k]

    def generator_power(self, k):
        return k

    def generators(self):
        return [1]

    def describe(self):
        return "int"

    def geodesic_steps(self, a):
        return [1 if a > 0 else -1] * abs(a)


class TableGroup(VertexGroupSpec):
    """A finite group given by its Cayley table and a generating subset.

    The table is validated on construction: closure, a two-sided identity,
    inverses and associativity are all checked, and the generators must
    generate the whole group.
    """

    kind = "table"

    def __init__(self, table: Sequence[Sequence[int]], gens: Sequence[int]):
        n = len(table)
        if n == 0:
            raise DomainError("empty multiplication table")
        rows = tuple(tuple(int(v) for v in row) for row in table)
        for row in rows:
            if len(row) != n or any(not 0 <= v < n for v in row):
                raise DomainError("multiplication table is not square or has entries out of range")
        ident = None
        for e in range(n):
            if all(rows[e][x] == x and rows[x][e] == x for x in range(n)):
                ident = e
                break
        if ident is None:
            raise DomainError("multiplication table has no identity")
        inv = [None] * n
        for x in range(n):
            for y in range(n):
                if rows[x][y] == ident and rows[y][x] == ident:
                    inv[x] = y
                    break
            if inv[x] is None:
                raise DomainError(f"element {x} has no inverse")
        for x in range(n):
            for y in range(n):
                xy = rows[x][y]
                for z in range(n):
                    if rows[xy][z] != rows[x][rows[y][z]]:
                        raise DomainError(f"table is not associative at ({x},{y},{z})")
        gens = [int(g) for g in gens]
        if not gens or any(not 0 <= g < n for g in gens):
            raise DomainError("generator subset is empty or out of range")
        dist = {ident: 0}
        queue = deque([ident])
        steps = set(gens) | {inv[g] for g in gens}
        while queue:
            x = queue.popleft()
            for s in steps:
                y = rows[x][s]
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        if len(dist) != n:
            raise DomainError("generators do not generate the table group")
        self.table = rows
        self.gens = tuple(gens)
        self.identity = ident
        self._inv = tuple(inv)
        self._dist = tuple(dist[x] for x in range(n))
        # parent pointers along a breadth-first tree, for geodesic spellings
        parent = {ident: None}
        queue = deque([ident])
        order = sorted(steps)
        while queue:
            x = queue.popleft()
            for s in order:
                y = rows[x][s]
                if y not in parent:
                    parent[y] = (x, s)
                    queue.append(y)
        self._parent = parent

    def __eq__(self, other):
        return isinstance(other, TableGroup) and self.table == other.table and self.gens == other.gens

    def __hash__(self):
        return hash((self.table, self.gens))

    def __repr__(self):
        return f"TableGroup(order={len(self.table)}, gens={list(self.gens)})"

    @property
    def order(self):
        return len(self.table)

    def compose(self, a, b):
        return self.table[a][b]

    def inverse(self, a):
        return self._inv[a]

    def word_length(self, a):
        return self._dist[a]

    def enumerate_nonidentity(self, cap):
        return [x for x in range(len(self.table)) if x != self.identity]

    def generator_power(self, k):
        g = self.gens[0]
        if k < 0:
            g, k = self._inv[g], -k
        x = self.identity
        for _ in range(k):
            x = self.table[x][g]
        return x

    def generators(self):
        return list(self.gens)

    def describe(self):
        rows = " / ".join(" ".join(str(v) for v in row) for row in self.table)
        return "table{" + rows + " ; gens " + " ".join(str(g) for g in self.gens) + "}"

    def format_payload(self, name, a):
        return f"{name}[{a}]"

    def geodesic_steps(self, a):
        out = []
        while self._parent[a] is not None:
            a, s = self._parent[a]
            out.append(s)
        return out[::-1]


def parse_spec(text: str) -> VertexGroupSpec:
    """Parse ``cyclic:n``, ``int`` or ``table{r0 / r1 / ... ; gens g1 g2}``."""
    t = text.strip()
    if t == "int":
        return InfiniteCyclic()
    if t.startswith("cyclic:"):
        try:
            n = int(t[len("cyclic:"):])
        except ValueError:
            raise DomainError(f"bad cyclic order in {t!r}") from None
        return Cyclic(n)
    if t.startswith("table{") and t.endswith("}"):
        body = t[len("table{"):-1]
        if ";" in body:
            rows_text, gens_text = body.split(";", 1)
            gens_text = gens_text.strip()
            if gens_text.startswith("gens"):
                gens_text = gens_text[4:]
            gens = [int(g) for g in gens_text.split()]
        else:
            rows_text, gens = body, None
        try:
            rows = [[int(v) for v in r.split()] for r in rows_text.split("/") if r.strip()]
        except ValueError:
            raise DomainError(f"non-integer entry in table {t!r}") from None
        if gens is None:
            gens = list(range(len(rows)))
        return TableGroup(rows, gens)
    raise DomainError(f"unknown vertex group spec {t!r}")


def cyclic_table(n: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
