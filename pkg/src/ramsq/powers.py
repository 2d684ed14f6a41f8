"""Uncoloured graphs, graph powers, and small exact invariants.

Provides the target graphs P_n^2 and C_n^2, the k-th power operator, exact
chromatic number / smallest-colour-class statistics and independence number
for small orders (these serve as test oracles, not production paths), the
classical lower-bound formula from chromatic data, and a graph6 codec.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .bitset import bit, bits, full_mask, lowest_bit, popcount
from .errors import ResourceLimitError

EXACT_LIMIT = 24


class SimpleGraph:
    """Loop-free symmetric graph; adjacency stored as one bitmask per vertex."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: list[int] | None = None):
        if n < 1:
            raise ValueError(f"graph order must be >= 1, got {n}")
        self.n = n
        self.adj = list(adj) if adj is not None else [0] * n

    @classmethod
    def from_edges(cls, n: int, edges) -> "SimpleGraph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise IndexError(f"self-loop at {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"vertex out of range in ({u},{v})")
        self.adj[u] |= bit(v)
        self.adj[v] |= bit(u)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def min_degree(self) -> int:
        return min(self.degree(v) for v in range(self.n))

    def edges(self):
        for u in range(self.n):
            high = self.adj[u] >> (u + 1)
            v = u + 1
            while high:
                low = high & -high
                yield (u, v + low.bit_length() - 1)
                high ^= low

    def edge_count(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def copy(self) -> "SimpleGraph":
        return SimpleGraph(self.n, self.adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.adj)))

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.edge_count()})"


# -- generators ------------------------------------------------------------

def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    return SimpleGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> SimpleGraph:
    g = SimpleGraph(n)
    allb = full_mask(n)
    for v in range(n):
        g.adj[v] = allb ^ bit(v)
    return g


def bfs_distances(g: SimpleGraph, src: int) -> list[int]:
    """Hop distances from src; -1 where unreachable."""
    dist = [-1] * g.n
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for w in bits(g.adj[u]):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def graph_power(g: SimpleGraph, k: int) -> SimpleGraph:
    """Join vertices at hop distance between 1 and k."""
    if k < 1:
        raise ValueError(f"power k must be >= 1, got {k}")
    out = SimpleGraph(g.n)
    for v in range(g.n):
        dist = bfs_distances(g, v)
        row = 0
        for w in range(g.n):
            if w != v and 0 < dist[w] <= k:
                row |= bit(w)
        out.adj[v] = row
    return out


def square_path(n: int) -> SimpleGraph:
    """P_n^2: indices joined when they differ by 1 or 2."""
    g = SimpleGraph(n)
    for i in range(n - 1):
        g.add_edge(i, i + 1)
        if i + 2 < n:
            g.add_edge(i, i + 2)
    return g


def square_cycle(n: int) -> SimpleGraph:
    """C_n^2: indices joined when they differ by 1 or 2 cyclically."""
    if n < 3:
        raise ValueError(f"square cycle needs n >= 3, got {n}")
    g = SimpleGraph(n)
    for i in range(n):
        for d in (1, 2):
            j = (i + d) % n
            if i != j and not g.has_edge(i, j):
                g.add_edge(i, j)
    return g


# -- exact invariants -------------------------------------------------------

def _first_proper_colouring(g: SimpleGraph, q: int, order: list[int]) -> list[int] | None:
    """One proper q-colouring (first-use symmetry breaking), or None."""
    n = g.n
    colour = [-1] * n

    def rec(i: int, used: int) -> bool:
        if i == n:
            return True
        v = order[i]
        forbidden = 0
        for w in bits(g.adj[v]):
            if colour[w] >= 0:
                forbidden |= bit(colour[w])
        limit = min(q, used + 1)
        for c in range(limit):
            if forbidden >> c & 1:
                continue
            colour[v] = c
            if rec(i + 1, max(used, c + 1)):
                return True
            colour[v] = -1
        return False

    if rec(0, 0):
        return colour
    return None


def _colouring_order(g: SimpleGraph) -> list[int]:
    # degeneracy-ish order, highest degree first, keeps backtracking shallow
    return sorted(range(g.n), key=lambda v: (-g.degree(v), v))


def chromatic_number(g: SimpleGraph, limit: int = EXACT_LIMIT) -> int:
    if g.n > limit:
        raise ResourceLimitError(f"chromatic number limited to {limit} vertices, got {g.n}")
    if g.edge_count() == 0:
        return 1
    order = _colouring_order(g)
    q = 2
    while _first_proper_colouring(g, q, order) is None:
        q += 1
    return q


def exact_colouring_stats(g: SimpleGraph, limit: int = EXACT_LIMIT) -> tuple[int, int]:
    """(chromatic number, minimum smallest-class size over optimal colourings).

    Exhaustive over colourings up to colour relabelling; the minimum class
    size is relabelling-invariant so this loses nothing.  Isolated vertices
    are stripped first: they can always be stacked on a largest class.
    """
    if g.n > limit:
        raise ResourceLimitError(f"colouring stats limited to {limit} vertices, got {g.n}")
    chi = chromatic_number(g, limit)
    if chi == 1:
        return 1, g.n
    isolated = [v for v in range(g.n) if g.adj[v] == 0]
    if isolated:
        keep = full_mask(g.n) & ~sum(bit(v) for v in isolated)
        core = _induced_simple(g, keep)
        return chi, exact_colouring_stats(core, limit)[1]
    if chi == 2:
        # per bipartite component, pile the larger side together
        sigma = 0
        seen = 0
        for v in range(g.n):
            if seen >> v & 1:
                continue
            side = {v: 0}
            q = deque([v])
            comp_bit = bit(v)
            counts = [1, 0]
            while q:
                u = q.popleft()
                for w in bits(g.adj[u]):
                    if w not in side:
                        side[w] = side[u] ^ 1
                        counts[side[w]] += 1
                        comp_bit |= bit(w)
                        q.append(w)
            seen |= comp_bit
            sigma += min(counts)
        return 2, sigma

    order = _colouring_order(g)
    n = g.n
    colour = [-1] * n
    sizes = [0] * chi
    best = n + 1

    def rec(i: int, used: int) -> None:
        nonlocal best
        if best == 1:
            return
        if i == n:
            if used == chi:
                best = min(best, min(sizes))
            return
        v = order[i]
        forbidden = 0
        for w in bits(g.adj[v]):
            if colour[w] >= 0:
                forbidden |= bit(colour[w])
        limit_c = min(chi, used + 1)
        for c in range(limit_c):
            if forbidden >> c & 1:
                continue
            colour[v] = c
            sizes[c] += 1
            rec(i + 1, max(used, c + 1))
            sizes[c] -= 1
            colour[v] = -1

    rec(0, 0)
    return chi, best


def independence_number(g: SimpleGraph, limit: int = EXACT_LIMIT) -> int:
    if g.n > limit:
        raise ResourceLimitError(f"independence number limited to {limit} vertices, got {g.n}")
    best = 0

    def rec(cand: int, size: int) -> None:
        nonlocal best
        if size + popcount(cand) <= best:
            return
        if not cand:
            best = max(best, size)
            return
        v = lowest_bit(cand)
        rec(cand & ~bit(v) & ~g.adj[v], size + 1)
        rec(cand & ~bit(v), size)

    rec(full_mask(g.n), 0)
    return best


def _induced_simple(g: SimpleGraph, subset: int) -> SimpleGraph:
    old = list(bits(subset))
    pos = {o: i for i, o in enumerate(old)}
    out = SimpleGraph(len(old))
    for i, o in enumerate(old):
        row = 0
        for w in bits(g.adj[o] & subset):
            row |= bit(pos[w])
        out.adj[i] = row
    return out


# -- lower-bound formula -----------------------------------------------------

@dataclass(frozen=True)
class BurrParameters:
    chi: int     # chromatic number of the avoided graph H
    v: int       # order of the sought graph G
    sigma: int   # minimum smallest-colour-class size over optimal colourings of H

    def __post_init__(self):
        if self.chi < 1 or self.sigma < 1 or self.v < self.sigma:
            raise ValueError(f"invalid parameters {self}")


def burr_lower_bound(p: BurrParameters) -> int:
    """(chi-1)(v-1) + sigma."""
    return (p.chi - 1) * (p.v - 1) + p.sigma


# -- graph6 codec -------------------------------------------------------------

def graph6_encode(g: SimpleGraph) -> str:
    n = g.n
    if n <= 62:
        head = chr(n + 63)
    elif n <= 258047:
        head = chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    else:
        raise ValueError("graph too large for this graph6 writer")
    bits_out = []
    for j in range(1, n):
        for i in range(j):
            bits_out.append(1 if g.has_edge(i, j) else 0)
    while len(bits_out) % 6:
        bits_out.append(0)
    chars = []
    for k in range(0, len(bits_out), 6):
        val = 0
        for b in bits_out[k:k + 6]:
            val = val << 1 | b
        chars.append(chr(val + 63))
    return head + "".join(chars)


def graph6_decode(text: str) -> SimpleGraph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise ValueError("empty graph6 string")
    if ord(s[0]) == 126:
        if len(s) < 4:
            raise ValueError("truncated graph6 order")
        n = 0
        for ch in s[1:4]:
            n = n << 6 | (ord(ch) - 63)
        body = s[4:]
    else:
        n = ord(s[0]) - 63
        body = s[1:]
    if n < 1:
        raise ValueError(f"bad graph6 order {n}")
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) < need:
        raise ValueError("truncated graph6 body")
    g = SimpleGraph(n)
    idx = 0
    for j in range(1, n):
        for i in range(j):
            ch = ord(body[idx // 6]) - 63
            if ch >> (5 - idx % 6) & 1:
                g.add_edge(i, j)
            idx += 1
    return g
