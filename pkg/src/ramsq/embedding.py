"""Homomorphisms from bounded-bandwidth 3-coloured hosts into a reduced
graph carrying a triangle-connected triangle factor.

The host is cut into alternating chunks and fragments along its bandwidth
order.  Each chunk is assigned a factor triangle uniformly at random and
mapped onto it by colour label; each fragment walks, in bandwidth-length
intervals, along a fixed minimum-length triangle walk between the two
assigned triangles, so that every host edge lands on a coloured edge of the
reduced graph.  Chunk loads concentrate by a standard Hoeffding bound.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .bitset import bit, bits, popcount
from .core import Colour, ColouredGraph
from .errors import PreconditionError
from .powers import SimpleGraph
from .triangles import triangle_components

Triangle = tuple[int, int, int]


@dataclass
class TriangleWalk:
    """Triangles from one factor triangle to the next, consecutive ones
    sharing two vertices, each with a label assignment {0,1,2} -> vertex."""

    triangles: list[Triangle]
    labels: list[tuple[int, int, int]]     # labels[i][j] = vertex with label j

    def __len__(self) -> int:
        return len(self.triangles)


@dataclass
class TctfWithWalks:
    colour: Colour
    triangles: list[Triangle]
    walks: list[TriangleWalk]              # walks[i]: triangles[i] -> triangles[i+1]
    base_labels: list[tuple[int, int, int]]  # labelling of each factor triangle

    @property
    def k(self) -> int:
        return len(self.triangles)

    def max_walk_steps(self) -> int:
        return max((len(w) - 1 for w in self.walks), default=0)


def _adjacent_triangles(tri: Triangle, all_tris: list[Triangle]) -> list[Triangle]:
    s = set(tri)
    return [t for t in all_tris if len(s & set(t)) == 2]


def _all_colour_triangles(g: ColouredGraph, colour: Colour) -> list[Triangle]:
    out = []
    for u in range(g.n):
        row_u = g.colour_adj(u, colour)
        for v in bits(row_u >> (u + 1) << (u + 1)):
            common = (row_u & g.colour_adj(v, colour)) >> (v + 1)
            w = v + 1
            while common:
                low = common & -common
                out.append((u, v, w + low.bit_length() - 1))
                common ^= low
    return out


def _triangle_neighbours(g: ColouredGraph, colour: Colour, tri: Triangle) -> list[Triangle]:
    """Colour triangles sharing exactly two vertices with ``tri``, in index order."""
    a, b, c = tri
    out = []
    for (u, v), other in (((a, b), c), ((a, c), b), ((b, c), a)):
        common = g.colour_adj(u, colour) & g.colour_adj(v, colour) & ~bit(other)
        for w in bits(common):
            out.append(tuple(sorted((u, v, w))))
    return out


def _bfs_walk(g: ColouredGraph, colour: Colour, start: Triangle, goal: Triangle) -> list[Triangle] | None:
    """Minimum-length walk in the triangle-adjacency graph (share 2 vertices)."""
    if start == goal:
        return [start]
    prev: dict[Triangle, Triangle] = {start: start}
    q = deque([start])
    while q:
        cur = q.popleft()
        for nxt in _triangle_neighbours(g, colour, cur):
            if nxt in prev:
                continue
            prev[nxt] = cur
            if nxt == goal:
                path = [nxt]
                while path[-1] != start:
                    path.append(prev[path[-1]])
                return path[::-1]
            q.append(nxt)
    return None


def _propagate_labels(walk: list[Triangle], start_labels: tuple[int, int, int]) -> list[tuple[int, int, int]]:
    """Keep the labels of the two shared vertices, give the missing label to
    the new vertex."""
    labels = [start_labels]
    for prev_t, cur_t in zip(walk, walk[1:]):
        prev_l = labels[-1]
        shared = set(prev_t) & set(cur_t)
        new_vertex = next(v for v in cur_t if v not in shared)
        cur_l = [-1, -1, -1]
        for j in range(3):
            if prev_l[j] in shared:
                cur_l[j] = prev_l[j]
        missing = cur_l.index(-1)
        cur_l[missing] = new_vertex
        labels.append(tuple(cur_l))
    return labels


def triangle_walks(g: ColouredGraph, colour: Colour, triangles: list[Triangle]) -> TctfWithWalks:
    """Minimum-length walks between consecutive factor triangles, with label
    bookkeeping: the first triangle is labelled in sorted order, each walk
    propagates labels forward, and each factor triangle inherits the
    labelling the previous walk arrives with."""
    tris = [tuple(sorted(t)) for t in triangles]
    if not tris:
        raise PreconditionError("need at least one triangle")
    lab = triangle_components(g, colour)
    comp_ids = set()
    for (u, v, w) in tris:
        for a, b in ((u, v), (u, w), (v, w)):
            if g.edge_state(a, b).colour is not colour:
                raise PreconditionError(f"pair ({a},{b}) is not {colour}")
        comp_ids.add(lab.component_of(u, v))
    if len(comp_ids) != 1:
        raise PreconditionError(f"triangles span {len(comp_ids)} triangle components")

    walks: list[TriangleWalk] = []
    base_labels: list[tuple[int, int, int]] = [tris[0]]
    for i in range(len(tris) - 1):
        path = _bfs_walk(g, colour, tris[i], tris[i + 1])
        if path is None:  # pragma: no cover - same component implies a walk
            raise PreconditionError(f"no triangle walk from {tris[i]} to {tris[i + 1]}")
        labels = _propagate_labels(path, base_labels[-1])
        walks.append(TriangleWalk(path, labels))
        base_labels.append(labels[-1])
    return TctfWithWalks(colour, tris, walks, base_labels)


# -- hosts ---------------------------------------------------------------------------

@dataclass
class BandwidthHost:
    """Host graph in bandwidth order with a proper 3-colouring.

    ``ordering`` permutes supplied vertices into the bandwidth order;
    internally vertices are kept in that order.
    """

    graph: SimpleGraph
    colouring: list[int]
    ordering: list[int] | None = None
    bandwidth: int = field(init=False)
    class_bound: int = field(init=False)

    def __post_init__(self):
        if self.ordering is not None:
            perm = [0] * self.graph.n
            for new_pos, v in enumerate(self.ordering):
                perm[v] = new_pos
            g2 = SimpleGraph(self.graph.n)
            for (u, v) in self.graph.edges():
                g2.add_edge(perm[u], perm[v])
            self.graph = g2
            self.colouring = [self.colouring[self.ordering[i]] for i in range(g2.n)]
            self.ordering = None
        if len(self.colouring) != self.graph.n:
            raise PreconditionError("colouring length must match the order")
        if any(c not in (0, 1, 2) for c in self.colouring):
            raise PreconditionError("colour classes must be 0, 1, 2")
        for (u, v) in self.graph.edges():
            if self.colouring[u] == self.colouring[v]:
                raise PreconditionError(f"colouring not proper on edge ({u},{v})")
        self.bandwidth = max((v - u for (u, v) in self.graph.edges()), default=0)
        counts = [self.colouring.count(c) for c in (0, 1, 2)]
        self.class_bound = max(counts)

    @property
    def n(self) -> int:
        return self.graph.n


def square_path_host(m: int) -> BandwidthHost:
    from .powers import square_path
    return BandwidthHost(square_path(m), [i % 3 for i in range(m)])


def random_bandwidth_host(m: int, b: int, density: float, seed: int) -> BandwidthHost:
    """Random host with spans at most b, proper under the mod-3 colouring
    (only spans not divisible by 3 are eligible)."""
    if b < 1:
        raise PreconditionError("bandwidth must be >= 1")
    rng = random.Random(seed)
    g = SimpleGraph(m)
    for u in range(m):
        for v in range(u + 1, min(m, u + b + 1)):
            if (v - u) % 3 and rng.random() < density:
                g.add_edge(u, v)
    return BandwidthHost(g, [i % 3 for i in range(m)])


# -- the homomorphism ------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingParams:
    rho: float                  # chunk length fraction of the colour-class bound
    beta: float                 # bandwidth fraction cap
    gamma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.beta <= self.rho < 1:
            raise PreconditionError(f"need 0 < beta <= rho < 1, got {self}")


@dataclass
class Homomorphism:
    image: list[int]                       # host vertex -> reduced-graph vertex
    load: dict[int, int]
    chunk_load: dict[int, int]             # load from chunk vertices only
    fragment_total: int
    chunk_assignment: list[int]            # chunk index -> factor triangle index

    def max_load(self) -> int:
        return max(self.load.values(), default=0)


def _composite_walk(tw: TctfWithWalks, a: int, b: int) -> tuple[list[Triangle], list[tuple[int, int, int]]]:
    """Fixed walk from factor triangle a to b: the stored consecutive walks
    concatenated (reversed when b < a); labels stay consistent because each
    factor triangle keeps the labelling its incoming walk delivers."""
    if a == b:
        return [tw.triangles[a]], [tw.base_labels[a]]
    tris: list[Triangle] = []
    labels: list[tuple[int, int, int]] = []
    if a < b:
        span = range(a, b)
        for i in span:
            w = tw.walks[i]
            start = 0 if not tris else 1
            tris.extend(w.triangles[start:])
            labels.extend(w.labels[start:])
    else:
        for i in range(a - 1, b - 1, -1):
            w = tw.walks[i]
            rev_t = w.triangles[::-1]
            rev_l = w.labels[::-1]
            start = 0 if not tris else 1
            tris.extend(rev_t[start:])
            labels.extend(rev_l[start:])
    return tris, labels


def _layout(m: int, chunk_len: int, fragment_len: int) -> list[tuple[str, int, int]]:
    """Alternating (kind, start, end) segments; only the trailing segment may
    be short."""
    segments = []
    pos = 0
    while pos < m:
        end = min(m, pos + chunk_len)
        segments.append(("chunk", pos, end))
        pos = end
        if pos >= m:
            break
        if fragment_len:
            end = min(m, pos + fragment_len)
            segments.append(("fragment", pos, end))
            pos = end
    return segments


def build_homomorphism(
    g: ColouredGraph,
    tw: TctfWithWalks,
    host: BandwidthHost,
    params: EmbeddingParams,
) -> Homomorphism:
    """Map the host into the reduced graph along the factor.

    Chunks of length rho * n (n being the largest host colour class) get
    independent uniform factor triangles from a generator seeded with
    ``params.seed``; a fragment long enough for the longest composite walk
    times the bandwidth separates consecutive chunks and advances one walk
    triangle per bandwidth-length interval, repeating the terminal
    triangle's labelling once the walk is exhausted.
    """
    n = host.class_bound
    m = host.n
    k = tw.k
    if host.bandwidth > params.beta * n + 1e-9:
        raise PreconditionError(
            f"host bandwidth {host.bandwidth} exceeds beta*n = {params.beta * n:.2f}")
    chunk_len = max(1, int(params.rho * n))
    b = max(1, host.bandwidth)
    max_steps = 0
    if k > 1:
        max_steps = max(len(_composite_walk(tw, a, c)[0]) - 1
                        for a in range(k) for c in range(k) if a != c)
    fragment_len = max_steps * b
    if k > 1 and fragment_len == 0:  # pragma: no cover - max_steps >= 1 when k > 1
        raise PreconditionError("fragment length zero with several triangles")

    segments = _layout(m, chunk_len, fragment_len)
    chunk_ids = [i for i, s in enumerate(segments) if s[0] == "chunk"]
    rng = random.Random(params.seed)
    assignment = [rng.randrange(k) for _ in chunk_ids]

    image = [-1] * m
    chunk_of_segment: dict[int, int] = {s: ci for ci, s in enumerate(chunk_ids)}
    for si, (kind, start, end) in enumerate(segments):
        if kind == "chunk":
            tri_idx = assignment[chunk_of_segment[si]]
            labels = tw.base_labels[tri_idx]
            for v in range(start, end):
                image[v] = labels[host.colouring[v]]
        else:
            a = assignment[chunk_of_segment[si - 1]]
            c = assignment[chunk_of_segment[si + 1]] if si + 1 < len(segments) else a
            walk_tris, walk_labels = _composite_walk(tw, a, c)
            last = len(walk_tris) - 1
            for v in range(start, end):
                interval = (v - start) // b + 1
                pos = min(interval, last)
                image[v] = walk_labels[pos][host.colouring[v]]

    load: dict[int, int] = {}
    chunk_load: dict[int, int] = {}
    fragment_total = 0
    for si, (kind, start, end) in enumerate(segments):
        for v in range(start, end):
            load[image[v]] = load.get(image[v], 0) + 1
            if kind == "chunk":
                chunk_load[image[v]] = chunk_load.get(image[v], 0) + 1
            else:
                fragment_total += 1
    return Homomorphism(image, load, chunk_load, fragment_total, assignment)


@dataclass
class HomReport:
    edge_ok: bool
    bad_edges: list[tuple[int, int]]
    load_ok: bool
    max_load: int
    overloaded: list[int]

    @property
    def passed(self) -> bool:
        return self.edge_ok and self.load_ok


def validate_homomorphism(
    g: ColouredGraph,
    colour: Colour,
    host: BandwidthHost,
    hm: Homomorphism,
    capacity: float | dict[int, float] | None = None,
) -> HomReport:
    """Check every host edge lands on a colour edge of the reduced graph
    (never on a single vertex), and per-target loads against ``capacity``."""
    edges_arr = np.array(list(host.graph.edges()), dtype=np.int64)
    bad: list[tuple[int, int]] = []
    if len(edges_arr):
        img = np.array(hm.image, dtype=np.int64)
        a = img[edges_arr[:, 0]]
        c = img[edges_arr[:, 1]]
        adj = np.zeros((g.n, g.n), dtype=bool)
        for u in range(g.n):
            for v in bits(g.colour_adj(u, colour)):
                adj[u, v] = True
        ok = (a != c) & adj[a, c]
        bad = [tuple(map(int, e)) for e in edges_arr[~ok][:8]]
    load_ok = True
    overloaded: list[int] = []
    if capacity is not None:
        for u, ld in hm.load.items():
            cap = capacity[u] if isinstance(capacity, dict) else capacity
            if ld > cap + 1e-9:
                load_ok = False
                overloaded.append(u)
    return HomReport(not bad, bad, load_ok, hm.max_load(), overloaded)


def load_concentration_check(
    g: ColouredGraph,
    tw: TctfWithWalks,
    host: BandwidthHost,
    params: EmbeddingParams,
    trials: int,
    s: float | None = None,
) -> dict:
    """Empirical chunk-load concentration over seeds, reported next to the
    Hoeffding bound exp(-s^2 / (6 rho n^2)); statistics only, no pass/fail.

    The exceedance counted per (trial, factor vertex) is a chunk load above
    n/k + s, matching the per-vertex tail the bound controls.  The actual
    chunk count and length give a second, tighter exponent alongside.
    """
    if trials < 1:
        raise PreconditionError("need at least one trial")
    n = host.class_bound
    k = tw.k
    if s is None:
        s = n / (10 * k)
    targets = sorted({v for t in tw.triangles for v in t})
    exceed = 0
    samples = 0
    max_loads = []
    fragment_total = None
    chunk_len = max(1, int(params.rho * n))
    num_chunks = None
    for i in range(trials):
        p_i = EmbeddingParams(params.rho, params.beta, params.gamma, params.seed + i)
        hm = build_homomorphism(g, tw, host, p_i)
        fragment_total = hm.fragment_total
        num_chunks = len(hm.chunk_assignment)
        max_loads.append(hm.max_load())
        for u in targets:
            samples += 1
            if hm.chunk_load.get(u, 0) > n / k + s:
                exceed += 1
    bound_formula = math.exp(-s * s / (6 * params.rho * n * n))
    bound_actual = math.exp(-s * s / (2 * max(1, num_chunks) * chunk_len * chunk_len))
    frac = exceed / samples if samples else 0.0
    return {
        "trials": trials,
        "s": s,
        "targets": len(targets),
        "exceed_fraction": frac,
        "hoeffding_bound": bound_formula,
        "hoeffding_bound_actual_params": bound_actual,
        "max_load_per_trial": max_loads,
        "fragment_total": fragment_total,
        "num_chunks": num_chunks,
        "chunk_len": chunk_len,
    }
