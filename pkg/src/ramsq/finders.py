"""Constructive matching / factor / decomposition procedures.

The case-driven procedures here mirror asymptotic arguments whose slack can
vanish at desk scale; each one validates what it built and raises
IncompleteAnalysis rather than return an unverified object.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

from .bitset import bit, bits, full_mask, lowest_bit, mask_of, popcount, to_list
from .core import BLUE, RED, Colour, ColouredGraph, is_r_colour_pair, r_colour_bad_vertices
from .errors import (
    IncompleteAnalysis,
    InternalInvariantError,
    PreconditionError,
    ResourceLimitError,
)
from .powers import SimpleGraph
from .triangles import (
    TriangleFactor,
    cliques_triangle_connected,
    max_triangle_packing,
    triangle_components,
    validate_triangle_factor,
)

EXACT_MATCHING_LIMIT = 16


@dataclass
class Matching:
    """Vertex-disjoint edges of one colour (or of an uncoloured graph).

    ``connected`` means all edges lie in one connected component of the
    colour subgraph, verified by BFS.  ``guarantee`` carries the size bound
    (in vertices) the producing procedure promised.
    """

    colour: Colour | None
    edges: list[tuple[int, int]] = field(default_factory=list)
    connected: bool | None = None
    guarantee: float | None = None
    branch: str | None = None
    exact: bool = True           # False when only maximality is promised

    @property
    def vertex_count(self) -> int:
        return 2 * len(self.edges)

    def vertex_mask(self) -> int:
        m = 0
        for u, v in self.edges:
            m |= bit(u) | bit(v)
        return m

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class ScaledParams:
    t: float
    eps: float

    def __post_init__(self):
        if self.t <= 0 or not 0 < self.eps < 1:
            raise PreconditionError(f"need t > 0 and 0 < eps < 1, got {self}")


# -- generic matching machinery -------------------------------------------------

def bipartite_max_matching(n_left: int, adj: list[list[int]], n_right: int) -> list[int]:
    """Augmenting-path maximum matching; returns per-left partner or -1."""
    match_l = [-1] * n_left
    match_r = [-1] * n_right

    def augment(u: int, seen: list[bool]) -> bool:
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                if match_r[w] < 0 or augment(match_r[w], seen):
                    match_l[u] = w
                    match_r[w] = u
                    return True
        return False

    for u in range(n_left):
        augment(u, [False] * n_right)
    return match_l


def _bipartition(h: SimpleGraph) -> list[int] | None:
    side = [-1] * h.n
    for s in range(h.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in bits(h.adj[u]):
                if side[w] < 0:
                    side[w] = side[u] ^ 1
                    stack.append(w)
                elif side[w] == side[u]:
                    return None
    return side


def _exact_general_matching(h: SimpleGraph) -> list[tuple[int, int]]:
    """Maximum matching by subset DP; exponential, capped by the caller."""
    @functools.lru_cache(maxsize=None)
    def dp(mask: int) -> int:
        if not mask:
            return 0
        v = lowest_bit(mask)
        rest = mask & ~bit(v)
        best = dp(rest)
        for u in bits(h.adj[v] & rest):
            best = max(best, 1 + dp(rest & ~bit(u)))
        return best

    edges = []
    mask = full_mask(h.n)
    while mask:
        v = lowest_bit(mask)
        rest = mask & ~bit(v)
        if dp(mask) == dp(rest):
            mask = rest
            continue
        for u in bits(h.adj[v] & rest):
            if 1 + dp(rest & ~bit(u)) == dp(mask):
                edges.append((v, u) if v < u else (u, v))
                mask = rest & ~bit(u)
                break
    dp.cache_clear()
    return sorted(edges)


def max_matching(h: SimpleGraph) -> Matching:
    """Maximum matching: augmenting paths on bipartite graphs, exact subset
    search up to 16 vertices otherwise, greedy plus local exchange beyond
    (flagged as maximal-only)."""
    side = _bipartition(h)
    if side is not None:
        left = [v for v in range(h.n) if side[v] == 0]
        right = [v for v in range(h.n) if side[v] == 1]
        rpos = {v: i for i, v in enumerate(right)}
        adj = [[rpos[w] for w in bits(h.adj[v])] for v in left]
        match_l = bipartite_max_matching(len(left), adj, len(right))
        edges = sorted(
            (min(left[i], right[j]), max(left[i], right[j]))
            for i, j in enumerate(match_l) if j >= 0
        )
        return Matching(None, edges, exact=True, branch="bipartite")
    if h.n <= EXACT_MATCHING_LIMIT:
        return Matching(None, _exact_general_matching(h), exact=True, branch="exact")
    g = ColouredGraph(h.n)
    for v in range(h.n):
        g._adj[RED][v] = h.adj[v]
    edges = _maximal_colour_matching(g, RED, full_mask(h.n))
    return Matching(None, edges, exact=False, branch="maximal-only")


def _greedy_colour_matching(g: ColouredGraph, colour: Colour, within: int,
                            max_edges: int | None = None) -> list[tuple[int, int]]:
    """Lowest-index greedy matching on colour edges inside ``within``."""
    live = within
    edges = []
    u = lowest_bit(live)
    while u >= 0:
        row = g.colour_adj(u, colour) & live & ~bit(u)
        if row:
            v = lowest_bit(row)
            edges.append((u, v))
            live &= ~(bit(u) | bit(v))
            if max_edges is not None and len(edges) >= max_edges:
                return edges
        else:
            live &= ~bit(u)
        u = lowest_bit(live)
    return edges


def _maximal_colour_matching(g: ColouredGraph, colour: Colour, within: int) -> list[tuple[int, int]]:
    """Greedy matching improved by the local exchange step: an edge both of
    whose endpoints have two outside colour-neighbours is split in two."""
    edges = _greedy_colour_matching(g, colour, within)
    improved = True
    while improved:
        improved = False
        covered = mask_of(v for e in edges for v in e)
        outside = within & ~covered
        for i, (x, y) in enumerate(edges):
            nx = g.colour_adj(x, colour) & outside
            ny = g.colour_adj(y, colour) & outside
            if nx and ny and popcount(nx | ny) >= 2:
                xp = lowest_bit(nx)
                yp_row = ny & ~bit(xp)
                if not yp_row:
                    continue
                yp = lowest_bit(yp_row)
                del edges[i]
                edges.append((min(x, xp), max(x, xp)))
                edges.append((min(y, yp), max(y, yp)))
                edges.sort()
                improved = True
                break
    return edges


def colour_components(g: ColouredGraph, colour: Colour, within: int | None = None) -> list[int]:
    """Connected components of the colour subgraph, as masks, largest first
    (ties to the smallest minimum index).  Isolated vertices count as
    singleton components."""
    pool = g.vertices if within is None else within
    comps = []
    left = pool
    while left:
        s = lowest_bit(left)
        comp = bit(s)
        frontier = comp
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.colour_adj(v, colour) & pool & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        left &= ~comp
    comps.sort(key=lambda m: (-popcount(m), lowest_bit(m)))
    return comps


def validate_matching(g: ColouredGraph, m: Matching) -> None:
    """Independent checks: disjointness, colour, and the connectivity flag."""
    seen = 0
    for u, v in m.edges:
        e = bit(u) | bit(v)
        assert popcount(e) == 2 and not (e & seen), f"edge ({u},{v}) is degenerate or reuses a vertex"
        seen |= e
        if m.colour is not None:
            assert g.edge_state(u, v).colour is m.colour, f"edge ({u},{v}) is not {m.colour}"
    if m.connected and m.colour is not None and m.edges:
        comps = colour_components(g, m.colour)
        holder = next(c for c in comps if c >> m.edges[0][0] & 1)
        assert seen & ~holder == 0, "matching spans several colour components"
    if m.guarantee is not None:
        assert m.vertex_count >= m.guarantee - 1e-9, \
            f"matching covers {m.vertex_count} < promised {m.guarantee}"


def _check_degree_slack(g: ColouredGraph, slack: float) -> None:
    """Minimum-degree hypothesis: every vertex misses at most ``slack`` of
    the other vertices (degree at least |G| - 1 - slack)."""
    md = g.min_degree()
    if md < g.n - 1 - slack - 1e-9:
        raise PreconditionError(
            f"min degree {md} misses more than {slack:.3f} vertices of {g.n - 1}")


# -- the matching dichotomy -------------------------------------------------------

def red_matching_or_blue_connected_matching(g: ColouredGraph, p: ScaledParams) -> Matching:
    """Either a red matching on 2(1+eps)t vertices or a blue connected
    matching on min(|G|-(1+2eps)t, 2|G|-4(1+2eps)t) vertices.

    Follows the maximal-matching argument: take a maximal red matching M
    with the local exchange property, greedily match its low-red-degree
    endpoints S into Y = V minus M in blue, and when S runs out first keep
    extending inside Y, whose edges are all non-red by maximality.  Raises
    IncompleteAnalysis if the built object misses its bound (possible at
    desk scale), never returns an unverified one.
    """
    t, eps = p.t, p.eps
    n = g.n
    if n < 2 * (1 + 3 * eps) * t - 1e-9:
        raise PreconditionError(f"order {n} below 2(1+3eps)t = {2 * (1 + 3 * eps) * t:.3f}")
    _check_degree_slack(g, eps * t)

    red_target = 2 * (1 + eps) * t
    blue_target = min(n - (1 + 2 * eps) * t, 2 * n - 4 * (1 + 2 * eps) * t)

    m_edges = _maximal_colour_matching(g, RED, g.vertices)
    if 2 * len(m_edges) >= red_target - 1e-9:
        m = Matching(RED, sorted(m_edges), guarantee=red_target, branch="red-matching")
        validate_matching(g, m)
        return m

    covered = mask_of(v for e in m_edges for v in e)
    y_mask = g.vertices & ~covered
    s_verts = [v for e in m_edges for v in e
               if popcount(g.colour_adj(v, RED) & y_mask) <= 1]

    used = 0
    blue_edges = []
    exhausted_s = True
    for s in sorted(s_verts):
        row = g.colour_adj(s, BLUE) & y_mask & ~used
        if row:
            w = lowest_bit(row)
            blue_edges.append((min(s, w), max(s, w)))
            used |= bit(s) | bit(w)
        else:
            exhausted_s = False
    if exhausted_s:
        blue_edges.extend(_greedy_colour_matching(g, BLUE, y_mask & ~used))

    m = Matching(BLUE, sorted(blue_edges), connected=True,
                 guarantee=blue_target, branch="blue-connected-matching")
    if m.vertex_count < blue_target - 1e-9:
        raise IncompleteAnalysis(
            f"blue matching covers {m.vertex_count} < bound {blue_target:.3f}",
            attempts=["red-matching", "blue-connected-matching"])
    validate_matching(g, m)
    return m


# -- degree-2/3 triangle factor ----------------------------------------------------

def corradi_hajnal_factor(h: SimpleGraph, limit: int = 24) -> TriangleFactor:
    """Triangle factor covering all but at most two vertices of a graph with
    minimum degree strictly above 2|H|/3, by exact packing search.

    Also asserts that the whole edge set is one triangle component (under
    that degree bound every three vertices share a common neighbour, so
    adjacent edges are triangle connected and components coincide with
    connected components).
    """
    n = h.n
    if h.min_degree() * 3 <= 2 * n:
        raise PreconditionError(
            f"min degree {h.min_degree()} not strictly above 2|H|/3 = {2 * n / 3:.3f}")
    if n > limit:
        raise ResourceLimitError(f"exact search limited to {limit} vertices, got {n}")
    tris = []
    for u in range(n):
        for v in bits(h.adj[u] >> (u + 1) << (u + 1)):
            common = (h.adj[u] & h.adj[v]) >> (v + 1)
            w = v + 1
            while common:
                low = common & -common
                tris.append((u, v, w + low.bit_length() - 1))
                common ^= low
    packing = max_triangle_packing(tris, full_mask(n), limit=limit)
    if 3 * len(packing) < n - 2:
        raise InternalInvariantError(
            f"packing covers {3 * len(packing)} < |H|-2 = {n - 2}")  # pragma: no cover
    from .core import coloured_from_simple
    lab = triangle_components(coloured_from_simple(h, RED), RED)
    if lab.count != 1 or len(lab.edge_list) != h.edge_count():
        raise InternalInvariantError("edge set is not one triangle component")  # pragma: no cover
    return TriangleFactor(None, packing, None)


# -- tripartite factors --------------------------------------------------------------

def tripartite_perfect_tctf(g: ColouredGraph, colour: Colour, x: int, y: int, z: int) -> TriangleFactor:
    """Perfect triangle factor of a colour on a balanced tripartition where
    every vertex sees at least 3n/4 of each other part in that colour.

    Two rounds of augmenting-path perfect matchings: one between the first
    two parts, then one between its edges and the third part in the support
    graph whose pairs are colour triangles.  Any two colour edges of such a
    tripartite graph are triangle connected: two edges at a common vertex
    share a third-part neighbour, and every triangle meets all three
    crossing pair classes.
    """
    if x & y or x & z or y & z:
        raise PreconditionError("parts must be disjoint")
    xs, ys, zs = to_list(x), to_list(y), to_list(z)
    n = len(xs)
    if not (len(ys) == len(zs) == n) or n == 0:
        raise PreconditionError("parts must be non-empty and of equal size")
    threshold = 3 * n / 4
    for part, others in ((xs, (y, z)), (ys, (x, z)), (zs, (x, y))):
        for v in part:
            for o in others:
                if popcount(g.colour_adj(v, colour) & o) < threshold - 1e-9:
                    raise PreconditionError(
                        f"vertex {v} has fewer than 3n/4 = {threshold:.2f} {colour} neighbours in a part")

    ypos = {v: i for i, v in enumerate(ys)}
    adj_xy = [[ypos[w] for w in bits(g.colour_adj(u, colour) & y)] for u in xs]
    match_xy = bipartite_max_matching(n, adj_xy, n)
    if any(j < 0 for j in match_xy):
        raise InternalInvariantError("no perfect matching between the first two parts")  # pragma: no cover
    pairs = [(xs[i], ys[match_xy[i]]) for i in range(n)]

    zpos = {v: i for i, v in enumerate(zs)}
    adj_mz = [
        [zpos[w] for w in bits(g.colour_adj(u, colour) & g.colour_adj(v, colour) & z)]
        for (u, v) in pairs
    ]
    match_mz = bipartite_max_matching(n, adj_mz, n)
    if any(j < 0 for j in match_mz):
        raise InternalInvariantError("no perfect matching onto the third part")  # pragma: no cover
    triangles = sorted(tuple(sorted((u, v, zs[match_mz[i]]))) for i, (u, v) in enumerate(pairs))
    return TriangleFactor(colour, triangles, None)


def pruned_tripartite_tctf(g: ColouredGraph, colour: Colour, x: int, y: int, z: int,
                           r: int, k: int) -> TriangleFactor:
    """At least n-2r disjoint colour triangles on a balanced tripartition
    whose pairs are r-``colour`` and where adjacency misses at most k
    vertices per opposite part: prune each part to the n-2r lowest-index
    vertices with at most r wrong pairs toward each other part, then find a
    perfect factor there."""
    xs, ys, zs = to_list(x), to_list(y), to_list(z)
    n = len(xs)
    if not (len(ys) == len(zs) == n):
        raise PreconditionError("parts must be of equal size")
    if 6 * r + 4 * k >= n:
        raise PreconditionError(f"need 6r+4k < n, got 6*{r}+4*{k} >= {n}")
    for a, b in ((x, y), (y, z), (x, z)):
        if not is_r_colour_pair(g, a, b, r, colour):
            raise PreconditionError(f"a part pair is not {r}-{colour}")
    for part, others in ((xs, (y, z)), (ys, (x, z)), (zs, (x, y))):
        for v in part:
            for o in others:
                present = g.colour_adj(v, RED) | g.colour_adj(v, BLUE)
                if popcount(o & ~present & ~bit(v)) > k:
                    raise PreconditionError(f"vertex {v} misses more than {k} vertices of a part")

    def prune(part_mask: int, o1: int, o2: int) -> int:
        bad = 0
        for o in (o1, o2):
            b_side, _ = r_colour_bad_vertices(g, part_mask, o, r, colour)
            bad |= b_side
        keep = [v for v in bits(part_mask & ~bad)]
        if len(keep) < n - 2 * r:
            raise PreconditionError("more than 2r vertices fail the wrong-pair budget")
        return mask_of(keep[: n - 2 * r])

    xp = prune(x, y, z)
    yp = prune(y, x, z)
    zp = prune(z, x, y)
    return tripartite_perfect_tctf(g, colour, xp, yp, zp)


# -- clique decomposition --------------------------------------------------------------

@dataclass
class CliqueDecomposition:
    cliques: list[tuple[int, Colour]]       # (vertex mask, colour)
    bin: int                                 # leftover vertex mask
    m: int

    def covered(self) -> int:
        c = 0
        for mask, _ in self.cliques:
            c |= mask
        return c


def _lex_smallest_clique(rows: list[int], live: int, m: int) -> list[int] | None:
    """Lexicographically least m-clique in the graph given by bitmask rows,
    restricted to ``live``; depth-first in index order, first hit wins."""
    found: list[int] | None = None

    def rec(chosen: list[int], cand: int) -> bool:
        nonlocal found
        if len(chosen) == m:
            found = list(chosen)
            return True
        if len(chosen) + popcount(cand) < m:
            return False
        for v in bits(cand):
            chosen.append(v)
            if rec(chosen, cand & rows[v] & ~((bit(v) << 1) - 1)):
                return True
            chosen.pop()
        return False

    rec([], live)
    return found


def group_cliques(g: ColouredGraph, cliques: list[tuple[int, Colour]]) -> list[int]:
    """Group ids for same-colour cliques, two cliques joined when they are
    triangle connected through their own span (pairwise test, transitive
    closure)."""
    k = len(cliques)
    parent = list(range(k))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        mi, ci = cliques[i]
        for j in range(i + 1, k):
            mj, cj = cliques[j]
            if ci is not cj or find(i) == find(j):
                continue
            if popcount(mi) >= 2 and popcount(mj) >= 2:
                joined = cliques_triangle_connected(g, ci, mi, mj)
            else:
                continue
            if joined:
                parent[find(i)] = find(j)
    roots: dict[int, int] = {}
    return [roots.setdefault(find(i), len(roots)) for i in range(k)]


def greedy_clique_partition(g: ColouredGraph, m: int,
                            stray_threshold: float | None = None) -> CliqueDecomposition:
    """Repeatedly extract the lexicographically least monochromatic clique
    of size m (either colour) until none exists; leftovers form the bin.

    Afterwards, any clique vertex sending more than ``stray_threshold``
    same-colour edges toward same-colour cliques in other triangle-connected
    groups moves to the bin (default threshold 20t/sqrt(m) with t = |G|/9,
    which only bites when overridden at desk scale); cliques reduced below
    two vertices dissolve.
    """
    if m < 2:
        raise PreconditionError(f"clique size must be >= 2, got {m}")
    if stray_threshold is None:
        stray_threshold = 20 * (g.n / 9) / (m ** 0.5)
    live = g.vertices
    cliques: list[tuple[int, Colour]] = []
    while True:
        best: tuple[list[int], Colour] | None = None
        for colour in (RED, BLUE):
            c = _lex_smallest_clique(g._adj[colour], live, m)
            if c is not None and (best is None or c < best[0]):
                best = (c, colour)
        if best is None:
            break
        cliques.append((mask_of(best[0]), best[1]))
        live &= ~mask_of(best[0])
    bin_mask = live

    if cliques:
        groups = group_cliques(g, cliques)
        foreign: dict[Colour, list[int]] = {}
        for colour in (RED, BLUE):
            foreign[colour] = []
        # per group and colour, mask of vertices in same-colour cliques outside it
        by_colour_total = {c: 0 for c in (RED, BLUE)}
        for mask, c in cliques:
            by_colour_total[c] |= mask
        moved = 0
        new_cliques = []
        for idx, (mask, c) in enumerate(cliques):
            same_other = 0
            for jdx, (m2, c2) in enumerate(cliques):
                if c2 is c and groups[jdx] != groups[idx]:
                    same_other |= m2
            keep = mask
            for v in bits(mask):
                if popcount(g.colour_adj(v, c) & same_other) > stray_threshold:
                    keep &= ~bit(v)
                    moved |= bit(v)
            if popcount(keep) >= 2:
                new_cliques.append((keep, c))
            else:
                moved |= keep
        cliques = new_cliques
        bin_mask |= moved
    return CliqueDecomposition(cliques, bin_mask, m)


# -- real-sequence bipartition ----------------------------------------------------------

def subset_sum_in_range(b: list[float], lo: float, hi: float) -> list[int] | None:
    """Indices of a subset with sum in [lo, hi], or None; depth-first with
    suffix-sum pruning, deterministic."""
    k = len(b)
    suffix = [0.0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] + b[i]

    def rec(i: int, s: float, chosen: list[int]) -> list[int] | None:
        if lo - 1e-12 <= s <= hi + 1e-12:
            return list(chosen)
        if i == k or s > hi or s + suffix[i] < lo - 1e-12:
            return None
        chosen.append(i)
        res = rec(i + 1, s + b[i], chosen)
        if res is not None:
            return res
        chosen.pop()
        return rec(i + 1, s, chosen)

    return rec(0, 0.0, [])


def balanced_real_partition(b: list[float]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split indices of a non-increasing positive sequence into (A, B) with
    sum(B) between sum(A) and twice sum(A).

    Equivalent to finding A with sum in [S/3, S/2].  Tries the lighter-side
    greedy, then the capped greedy (add while the sum stays at most S/2)
    with single-item-exclusion repairs, then an exhaustive search for up to
    24 items.  A failure past all of that is reported loudly.
    """
    k = len(b)
    if k < 2:
        raise PreconditionError("need at least two values")
    if any(x <= 0 for x in b):
        raise PreconditionError("values must be positive")
    if any(b[i] < b[i + 1] for i in range(k - 1)):
        raise PreconditionError("values must be non-increasing")
    s = sum(b)
    if s - b[0] < b[0] - 1e-12:
        raise PreconditionError("sum of the tail must be at least the largest value")
    lo, hi = s / 3, s / 2

    def ok(idx: list[int]) -> bool:
        a = sum(b[i] for i in idx)
        return lo - 1e-12 <= a <= hi + 1e-12

    def result(idx: list[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        a_set = set(idx)
        return tuple(sorted(a_set)), tuple(i for i in range(k) if i not in a_set)

    # lighter-side greedy: larger items first, always to the lighter side
    side_a: list[int] = []
    sum_a = sum_b = 0.0
    for i in range(k):
        if sum_a <= sum_b:
            side_a.append(i)
            sum_a += b[i]
        else:
            sum_b += b[i]
    light = side_a if sum_a <= sum_b else [i for i in range(k) if i not in set(side_a)]
    if ok(light):
        return result(light)

    def capped(skip: int | None) -> list[int]:
        out, tot = [], 0.0
        for i in range(k):
            if i == skip:
                continue
            if tot + b[i] <= hi + 1e-12:
                out.append(i)
                tot += b[i]
        return out

    for skip in [None] + list(range(k)):
        cand = capped(skip)
        if ok(cand):
            return result(cand)

    if k <= 24:
        found = subset_sum_in_range(b, lo, hi)
        if found is not None:
            return result(found)
    raise InternalInvariantError(
        f"no balanced split found for {k} values (sum {s:.4f})")


# -- connected matching / TCTF dichotomy ---------------------------------------------

def _extend_edges_to_triangles(g: ColouredGraph, colour: Colour,
                               edges: list[tuple[int, int]], pool: int,
                               want: int | None = None) -> list[tuple[int, int, int]]:
    """Greedily extend matching edges to disjoint colour triangles using
    pool vertices; edges with no available apex are skipped."""
    used = 0
    out = []
    for (u, v) in edges:
        cand = g.colour_adj(u, colour) & g.colour_adj(v, colour) & pool & ~used
        if not cand:
            continue
        w = lowest_bit(cand)
        out.append(tuple(sorted((u, v, w))))
        used |= bit(w)
        if want is not None and len(out) >= want:
            break
    return out


def _greedy_tripartite_triangles(g: ColouredGraph, colour: Colour,
                                 a: int, b: int, c: int,
                                 want: int | None = None) -> list[tuple[int, int, int]]:
    """Greedy disjoint colour triangles taking one vertex per part."""
    out = []
    live_a, live_b, live_c = a, b, c
    for w in to_list(c):
        if want is not None and len(out) >= want:
            break
        if not live_a or not live_b:
            break
        row_a = g.colour_adj(w, colour) & live_a
        done = False
        for u in bits(row_a):
            row_b = g.colour_adj(w, colour) & g.colour_adj(u, colour) & live_b
            if row_b:
                v = lowest_bit(row_b)
                out.append(tuple(sorted((u, v, w))))
                live_a &= ~bit(u)
                live_b &= ~bit(v)
                live_c &= ~bit(w)
                done = True
                break
        if not done:
            continue
    return out


def _accumulate_components(comps: list[int], lo: float, skip: int = 0) -> int | None:
    """Union of consecutive components (after ``skip`` largest) first
    exceeding ``lo`` vertices."""
    acc = 0
    for comp in comps[skip:]:
        acc |= comp
        if popcount(acc) > lo:
            return acc
    return None


def connected_matching_or_tctf(g: ColouredGraph, p: ScaledParams):
    """Either a red connected matching on 2(1+eps)t vertices or a blue
    triangle-connected triangle factor on 3(1+eps)t vertices.

    Dispatches on the red component structure: one dominant component, one
    large component, two covering components, or only small components
    (split further by whether the two largest exceed set thresholds).  Every
    candidate object is validated independently -- disjointness, colours,
    size, single blue triangle component -- before being returned; if no
    case closes at this scale an IncompleteAnalysis error reports the
    attempts.  The fired case is recorded on the returned object.
    """
    t, eps = p.t, p.eps
    n = g.n
    if n < (5 + 100 * eps) * t - 1e-9:
        raise PreconditionError(f"order {n} below (5+100eps)t = {(5 + 100 * eps) * t:.3f}")
    _check_degree_slack(g, eps * t)

    m_target = 2 * (1 + eps) * t
    f_target = 3 * (1 + eps) * t
    tri_target = math.ceil(f_target / 3 - 1e-9)
    attempts: list[str] = []
    comps = colour_components(g, RED)

    def red_matching_within(comp: int) -> list[tuple[int, int]]:
        size = popcount(comp)
        if size <= EXACT_MATCHING_LIMIT:
            sub, old = g.induced(comp)
            sg = SimpleGraph(sub.n, sub._adj[RED])
            return sorted((min(old[u], old[v]), max(old[u], old[v]))
                          for (u, v) in _exact_general_matching(sg))
        return _maximal_colour_matching(g, RED, comp)

    attempts.append("red-connected-matching")
    per_comp_matchings: dict[int, list[tuple[int, int]]] = {}
    for i, comp in enumerate(comps):
        if popcount(comp) < m_target:
            break
        m_edges = red_matching_within(comp)
        per_comp_matchings[i] = m_edges
        if 2 * len(m_edges) >= m_target - 1e-9:
            m = Matching(RED, m_edges, connected=True, guarantee=m_target,
                         branch="red-connected-matching")
            validate_matching(g, m)
            return m

    blue_lab_cache: list = []

    def finish_blue(triangles: list[tuple[int, int, int]], case: str) -> TriangleFactor | None:
        if 3 * len(triangles) < f_target - 1e-9:
            return None
        tf = TriangleFactor(BLUE, sorted(triangles), None)
        try:
            if not blue_lab_cache:
                blue_lab_cache.append(triangle_components(g, BLUE))
            validate_triangle_factor(g, tf, labelling=blue_lab_cache[0])
        except AssertionError:
            return None
        tf.case = case
        return tf

    a1 = comps[0] if comps else 0
    a2 = comps[1] if len(comps) > 1 else 0
    s1, s2 = popcount(a1), popcount(a2)

    sub_params = ScaledParams(t, eps)

    # Case 1: dominant red component
    if s1 >= (4 + 5 * eps) * t - 1e-9:
        attempts.append("case1")
        m_edges = per_comp_matchings.get(0, red_matching_within(a1))
        pool1 = a1 & ~mask_of(v for e in m_edges for v in e)
        p_edges = _greedy_colour_matching(g, BLUE, pool1)
        outside = g.vertices & ~mask_of(v for e in (m_edges + p_edges) for v in e)
        tris = _extend_edges_to_triangles(g, BLUE, p_edges, outside, want=tri_target)
        res = finish_blue(tris, "case1")
        if res is not None:
            return res

    # Case 2: one large red component
    if 3 * (1 + 2 * eps) * t - 1e-9 <= s1:
        attempts.append("case2")
        sub, old = g.induced(a1)
        try:
            inner = red_matching_or_blue_connected_matching(sub, sub_params)
        except (PreconditionError, IncompleteAnalysis):
            inner = None
        if inner is not None:
            mapped = sorted((min(old[u], old[v]), max(old[u], old[v])) for (u, v) in inner.edges)
            if inner.colour is RED and 2 * len(mapped) >= m_target - 1e-9:
                m = Matching(RED, mapped, connected=True, guarantee=m_target, branch="case2")
                validate_matching(g, m)
                return m
            if inner.colour is BLUE:
                outside = g.vertices & ~a1
                tris = _extend_edges_to_triangles(g, BLUE, mapped, outside, want=tri_target)
                res = finish_blue(tris, "case2")
                if res is not None:
                    return res

    # Case 3: two red components covering most of the graph
    if s1 + s2 >= (5 + 12 * eps) * t - 1e-9 and s2 > 0:
        attempts.append("case3")
        parts = []
        for comp in (a1, a2):
            sub, old = g.induced(comp)
            try:
                inner = red_matching_or_blue_connected_matching(sub, sub_params)
            except (PreconditionError, IncompleteAnalysis):
                parts = None
                break
            mapped = sorted((min(old[u], old[v]), max(old[u], old[v])) for (u, v) in inner.edges)
            if inner.colour is RED and 2 * len(mapped) >= m_target - 1e-9:
                m = Matching(RED, mapped, connected=True, guarantee=m_target, branch="case3")
                validate_matching(g, m)
                return m
            if inner.colour is not BLUE:
                parts = None
                break
            parts.append(mapped)
        if parts is not None:
            size_cap = [min(2 * popcount(c) - 4 * (1 + 2 * eps) * t, 2 * t) for c in (a1, a2)]
            trimmed = [parts[i][: max(0, int(size_cap[i] // 2))] for i in range(2)]
            y_pools = [
                (a2 & ~mask_of(v for e in trimmed[1] for v in e)),
                (a1 & ~mask_of(v for e in trimmed[0] for v in e)),
            ]
            tris = _extend_edges_to_triangles(g, BLUE, trimmed[0], y_pools[0])
            used = mask_of(v for tr in tris for v in tr)
            tris += _extend_edges_to_triangles(g, BLUE, trimmed[1], y_pools[1] & ~used)
            res = finish_blue(tris, "case3")
            if res is not None:
                return res

    # Case 4: only smallish red components
    attempts.append("case4")
    w_mask = g.vertices & ~(a1 | a2)

    def blue_matching_in(comp: int, cap_vertices: float) -> list[tuple[int, int]]:
        cap_edges = max(0, int(cap_vertices // 2))
        return _greedy_colour_matching(g, BLUE, comp, max_edges=cap_edges) if cap_edges else []

    if s2 > 2 * (1 + 20 * eps) * t:
        m1 = blue_matching_in(a1, 2 * s1 - 4 * (1 + 2 * eps) * t)
        m2 = blue_matching_in(a2, 2 * s2 - 4 * (1 + 2 * eps) * t)
        pool2 = a2 & ~mask_of(v for e in m2 for v in e)
        pool1 = a1 & ~mask_of(v for e in m1 for v in e)
        tris = _extend_edges_to_triangles(g, BLUE, m1, pool2)
        used = mask_of(v for tr in tris for v in tr)
        tris += _extend_edges_to_triangles(g, BLUE, m2, pool1 & ~used)
        used = mask_of(v for tr in tris for v in tr)
        u1, u2 = a1 & ~used, a2 & ~used
        tris += _greedy_tripartite_triangles(g, BLUE, u1, u2, w_mask & ~used)
        res = finish_blue(tris, "case4A")
        if res is not None:
            return res

    if s1 > 2 * (1 + 3 * eps) * t:
        m1 = blue_matching_in(a1, 2 * s1 - 4 * (1 + 2 * eps) * t)
        u2 = _accumulate_components(comps, (1 + 3 * eps) * t, skip=1)
        if u2 is not None:
            tris = _extend_edges_to_triangles(g, BLUE, m1, u2)
            used = mask_of(v for tr in tris for v in tr)
            u1 = a1 & ~mask_of(v for e in m1 for v in e)
            rest_u2 = u2 & ~used
            w2 = g.vertices & ~(a1 | u2)
            tris += _greedy_tripartite_triangles(g, BLUE, u1 & ~used, w2 & ~used, rest_u2)
            res = finish_blue(tris, "case4B")
            if res is not None:
                return res

    u1 = _accumulate_components(comps, (1 + 3 * eps) * t)
    if u1 is not None:
        skip_count = 0
        acc = 0
        for idx, comp in enumerate(comps):
            acc |= comp
            if popcount(acc) > (1 + 3 * eps) * t:
                skip_count = idx + 1
                break
        u2 = _accumulate_components(comps, (1 + 3 * eps) * t, skip=skip_count)
        if u2 is not None:
            w2 = g.vertices & ~(u1 | u2)
            groups = sorted((u1, u2, w2), key=popcount)
            small_a, small_b, large = groups[0], groups[1], groups[2]
            m_ab = []
            live_b = small_b
            for u in bits(small_a):
                row = g.colour_adj(u, BLUE) & live_b
                if row:
                    v = lowest_bit(row)
                    m_ab.append((min(u, v), max(u, v)))
                    live_b &= ~bit(v)
            tris = _extend_edges_to_triangles(g, BLUE, m_ab, large)
            res = finish_blue(tris, "case4C")
            if res is not None:
                return res

    raise IncompleteAnalysis(
        f"no case produced a valid object at t={t}, eps={eps}", attempts=attempts)


def tctf_from_dense_red_pair(g: ColouredGraph, x: int, y: int, p: ScaledParams) -> TriangleFactor:
    """Monochromatic triangle-connected factor on 3(1+eps)t vertices from a
    mostly-red pair (X, Y): restrict Y to its vertices nearly fully red to
    X, run the dichotomy there, and thread a returned red connected matching
    through X to triangles."""
    t, eps = p.t, p.eps
    if x & y:
        raise PreconditionError("X and Y must be disjoint")
    if popcount(x) < (1 + 5 * eps) * t - 1e-9:
        raise PreconditionError("X below (1+5eps)t")
    if popcount(y) < (5 + 200 * eps) * t - 1e-9:
        raise PreconditionError("Y below (5+200eps)t")
    if not is_r_colour_pair(g, x, y, eps * t, RED):
        raise PreconditionError("(X, Y) is not (eps*t)-red")
    _check_degree_slack(g, eps * t)

    size_x = popcount(x)
    y_prime = 0
    for v in bits(y):
        if popcount(g.colour_adj(v, RED) & x) >= size_x - eps * t - 1e-9:
            y_prime |= bit(v)
    if popcount(y_prime) < (5 + 100 * eps) * t - 1e-9:
        raise IncompleteAnalysis("pruned Y too small for the dichotomy")

    sub, old = g.induced(y_prime)
    inner = connected_matching_or_tctf(sub, p)
    if isinstance(inner, TriangleFactor):
        tris = sorted(tuple(sorted((old[a], old[b], old[c]))) for (a, b, c) in inner.triangles)
        tf = TriangleFactor(BLUE, tris, None)
        validate_triangle_factor(g, tf)
        tf.case = "blue-tctf"
        return tf
    mapped = sorted((min(old[u], old[v]), max(old[u], old[v])) for (u, v) in inner.edges)
    tris = _extend_edges_to_triangles(g, RED, mapped, x)
    tf = TriangleFactor(RED, sorted(tris), None)
    if 3 * len(tf.triangles) < 3 * (1 + eps) * t - 1e-9:
        raise IncompleteAnalysis("red matching could not be threaded through X")
    validate_triangle_factor(g, tf)
    tf.case = "red-matching-through-x"
    return tf
