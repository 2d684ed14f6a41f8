"""Monochromatic triangle components and triangle factors.

Two edges of one colour are triangle connected when a chain of edges joins
them in which consecutive edges lie in a common monochromatic triangle;
the equivalence classes are the triangle components of that colour.
Connection is always evaluated in the whole graph, never restricted to a
subset (the chain may pass through any vertices).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bitset import bit, bits, lowest_bit, popcount, to_list
from .core import BLUE, RED, Colour, ColouredGraph
from .errors import PreconditionError, ResourceLimitError

EXACT_PACKING_LIMIT = 30


class _DSU:
    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


class TriangleComponentLabelling:
    """Partition of the colour-c edges into triangle components.

    ``edge_index`` maps each canonical (u < v) colour-c pair to a dense id;
    ``component`` gives, per edge id, a component id in 0..count-1.
    """

    def __init__(self, colour: Colour, edge_list: list[tuple[int, int]], comp_of_edge: list[int]):
        self.colour = colour
        self.edge_list = edge_list
        self.edge_index = {e: i for i, e in enumerate(edge_list)}
        self.component = comp_of_edge
        self.count = max(comp_of_edge) + 1 if comp_of_edge else 0

    def component_of(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        try:
            return self.component[self.edge_index[(u, v)]]
        except KeyError:
            raise PreconditionError(f"pair ({u},{v}) is not a {self.colour} edge") from None

    def edges_of(self, comp: int) -> list[tuple[int, int]]:
        return [e for e, c in zip(self.edge_list, self.component) if c == comp]

    def edge_partition(self) -> list[frozenset[tuple[int, int]]]:
        groups: dict[int, set] = {}
        for e, c in zip(self.edge_list, self.component):
            groups.setdefault(c, set()).add(e)
        return [frozenset(s) for s in groups.values()]

    def support(self, comp: int) -> int:
        m = 0
        for (u, v), c in zip(self.edge_list, self.component):
            if c == comp:
                m |= bit(u) | bit(v)
        return m

    def tallies(self) -> list[dict]:
        """Per component: id, edge count, vertex count."""
        edges: dict[int, int] = {}
        verts: dict[int, int] = {}
        for (u, v), c in zip(self.edge_list, self.component):
            edges[c] = edges.get(c, 0) + 1
            verts[c] = verts.get(c, 0) | bit(u) | bit(v)
        return [
            {"component": c, "edges": edges[c], "vertices": popcount(verts[c])}
            for c in sorted(edges)
        ]


def triangle_components(g: ColouredGraph, colour: Colour) -> TriangleComponentLabelling:
    """Union-find over colour edges; every monochromatic triangle unions its three edges."""
    edge_list = list(g.edges(colour))
    index = {e: i for i, e in enumerate(edge_list)}
    dsu = _DSU(len(edge_list))
    for (u, v) in edge_list:
        common_above = g.colour_adj(u, colour) & g.colour_adj(v, colour)
        common_above >>= v + 1
        w = v + 1
        uv = index[(u, v)]
        while common_above:
            low = common_above & -common_above
            t = w + low.bit_length() - 1
            dsu.union(uv, index[(u, t)])
            dsu.union(uv, index[(v, t)])
            common_above ^= low
    roots: dict[int, int] = {}
    comp = []
    for i in range(len(edge_list)):
        r = dsu.find(i)
        comp.append(roots.setdefault(r, len(roots)))
    return TriangleComponentLabelling(colour, edge_list, comp)


def are_triangle_connected(
    g: ColouredGraph,
    colour: Colour,
    e: tuple[int, int],
    f: tuple[int, int],
    labelling: TriangleComponentLabelling | None = None,
) -> bool:
    lab = labelling if labelling is not None else triangle_components(g, colour)
    return lab.component_of(*e) == lab.component_of(*f)


# -- clique-to-clique connection ---------------------------------------------

def _check_clique(g: ColouredGraph, colour: Colour, c_mask: int, name: str) -> None:
    vs = to_list(c_mask)
    if len(vs) < 2:
        raise PreconditionError(f"{name} must have at least 2 vertices")
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            if not g.colour_adj(u, colour) >> v & 1:
                raise PreconditionError(f"{name} is not a {colour} clique: pair ({u},{v})")


def crossing_p4_exists(g: ColouredGraph, colour: Colour, c1: int, c2: int) -> bool:
    """A colour path on 4 vertices alternating between the two sets.

    Equivalent to some crossing edge both of whose endpoints have a second
    crossing neighbour.
    """
    for u in bits(c1):
        row = g.colour_adj(u, colour) & c2
        if not row:
            continue
        deg_u = popcount(row)
        for v in bits(row):
            if deg_u >= 2 and popcount(g.colour_adj(v, colour) & c1) >= 2:
                return True
    return False


def cliques_triangle_connected(g: ColouredGraph, colour: Colour, c1: int, c2: int) -> bool:
    """Whether two disjoint monochromatic cliques are triangle connected
    through their own span.

    Evaluated on the subgraph induced by the two cliques: an edge of one
    shares a triangle component with an edge of the other there exactly when
    a crossing colour path on 4 vertices exists.  Both tests run and must
    agree.  For connection through the rest of the graph use
    :func:`are_triangle_connected` on representative edges.
    """
    if c1 & c2:
        raise PreconditionError("cliques must be disjoint")
    _check_clique(g, colour, c1, "first clique")
    _check_clique(g, colour, c2, "second clique")

    by_p4 = crossing_p4_exists(g, colour, c1, c2)

    sub, old = g.induced(c1 | c2)
    lab = triangle_components(sub, colour)
    pos = {o: i for i, o in enumerate(old)}
    u1, v1 = to_list(c1)[:2]
    u2, v2 = to_list(c2)[:2]
    by_components = lab.component_of(pos[u1], pos[v1]) == lab.component_of(pos[u2], pos[v2])

    if by_p4 != by_components:  # pragma: no cover - the two criteria coincide
        raise AssertionError("crossing-P4 and component tests disagree")
    return by_p4


# -- triangle factors ----------------------------------------------------------

@dataclass
class TriangleFactor:
    """Vertex-disjoint triangles, optionally all inside one triangle component."""

    colour: Colour | None
    triangles: list[tuple[int, int, int]] = field(default_factory=list)
    component: int | None = None

    @property
    def vertex_count(self) -> int:
        return 3 * len(self.triangles)

    def vertex_mask(self) -> int:
        m = 0
        for t in self.triangles:
            for v in t:
                m |= bit(v)
        return m

    def __len__(self) -> int:
        return len(self.triangles)


def _component_triangles(
    g: ColouredGraph,
    colour: Colour,
    lab: TriangleComponentLabelling,
    component: int,
) -> list[tuple[int, int, int]]:
    """All colour triangles whose edges map to ``component``, lexicographic."""
    out = []
    for (u, v) in lab.edge_list:
        if lab.component_of(u, v) != component:
            continue
        common_above = (g.colour_adj(u, colour) & g.colour_adj(v, colour)) >> (v + 1)
        w = v + 1
        while common_above:
            low = common_above & -common_above
            out.append((u, v, w + low.bit_length() - 1))
            common_above ^= low
    out.sort()
    return out


def greedy_tctf(
    g: ColouredGraph,
    colour: Colour,
    component: int,
    forbidden: int = 0,
    labelling: TriangleComponentLabelling | None = None,
) -> TriangleFactor:
    """Maximal-by-inclusion factor inside one component, lowest-index scan."""
    lab = labelling if labelling is not None else triangle_components(g, colour)
    if not 0 <= component < lab.count:
        raise PreconditionError(f"unknown component {component}")
    used = forbidden
    picked = []
    for u, v, w in _component_triangles(g, colour, lab, component):
        if (bit(u) | bit(v) | bit(w)) & used:
            continue
        picked.append((u, v, w))
        used |= bit(u) | bit(v) | bit(w)
    return TriangleFactor(colour, picked, component)


def max_triangle_packing(
    triangles: list[tuple[int, int, int]],
    vertex_pool: int,
    limit: int = EXACT_PACKING_LIMIT,
) -> list[tuple[int, int, int]]:
    """Maximum vertex-disjoint sub-collection, by branch and bound.

    Branches on the lowest live vertex: either some triangle covers it or it
    goes unused.  Bound: remaining live vertices / 3.
    """
    if popcount(vertex_pool) > limit:
        raise ResourceLimitError(
            f"exact packing limited to {limit} vertices, got {popcount(vertex_pool)}")
    tri_masks = [(t, bit(t[0]) | bit(t[1]) | bit(t[2])) for t in sorted(triangles)]
    by_vertex: dict[int, list[int]] = {}
    for i, (t, _) in enumerate(tri_masks):
        for v in t:
            by_vertex.setdefault(v, []).append(i)
    best: list[tuple[int, int, int]] = []

    def rec(live: int, chosen: list[tuple[int, int, int]]) -> None:
        nonlocal best
        if len(chosen) + popcount(live) // 3 <= len(best):
            return
        v = lowest_bit(live)
        while v >= 0:
            if v in by_vertex and any(tri_masks[i][1] & live == tri_masks[i][1] for i in by_vertex[v]):
                break
            # v cannot be covered any more; drop it
            live &= ~bit(v)
            if len(chosen) + popcount(live) // 3 <= len(best):
                return
            v = lowest_bit(live)
        if v < 0:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        for i in by_vertex[v]:
            t, m = tri_masks[i]
            if m & live == m:
                chosen.append(t)
                rec(live & ~m, chosen)
                chosen.pop()
        rec(live & ~bit(v), chosen)

    rec(vertex_pool, [])
    return sorted(best)


def max_triangle_factor_exact(
    g: ColouredGraph,
    colour: Colour,
    component: int,
    labelling: TriangleComponentLabelling | None = None,
    limit: int = EXACT_PACKING_LIMIT,
) -> TriangleFactor:
    lab = labelling if labelling is not None else triangle_components(g, colour)
    if not 0 <= component < lab.count:
        raise PreconditionError(f"unknown component {component}")
    support = lab.support(component)
    tris = _component_triangles(g, colour, lab, component)
    best = max_triangle_packing(tris, support, limit)
    return TriangleFactor(colour, best, component)


def greedy_triangle_packing(g: ColouredGraph, colour: Colour, within: int) -> list[tuple[int, int, int]]:
    """Greedy vertex-disjoint colour triangles inside ``within`` (no component constraint)."""
    live = within
    picked = []
    u = lowest_bit(live)
    while u >= 0:
        found = False
        row_u = g.colour_adj(u, colour) & live
        for v in bits(row_u):
            if v <= u:
                continue
            common = g.colour_adj(v, colour) & row_u
            common >>= v + 1
            if common:
                w = v + 1 + lowest_bit(common)
                picked.append((u, v, w))
                live &= ~(bit(u) | bit(v) | bit(w))
                found = True
                break
        if not found:
            live &= ~bit(u)
        u = lowest_bit(live)
    return picked


def validate_triangle_factor(
    g: ColouredGraph,
    tf: TriangleFactor,
    labelling: TriangleComponentLabelling | None = None,
    require_component: bool = True,
) -> None:
    """Independent check: disjointness, colour, and the single-component claim.

    Raises AssertionError on any violation; used by tests and by procedures
    that promise validated outputs.
    """
    seen = 0
    for (u, v, w) in tf.triangles:
        m = bit(u) | bit(v) | bit(w)
        assert popcount(m) == 3, f"degenerate triple {(u, v, w)}"
        assert not (m & seen), f"triangle {(u, v, w)} reuses a vertex"
        seen |= m
        if tf.colour is not None:
            for a, b in ((u, v), (u, w), (v, w)):
                assert g.edge_state(a, b).colour is tf.colour, \
                    f"pair ({a},{b}) is not {tf.colour}"
    if require_component and tf.colour is not None and tf.triangles:
        lab = labelling if labelling is not None else triangle_components(g, tf.colour)
        comps = {lab.component_of(u, v) for (u, v, _w) in tf.triangles}
        comps |= {lab.component_of(u, w) for (u, _v, w) in tf.triangles}
        comps |= {lab.component_of(v, w) for (_u, v, w) in tf.triangles}
        assert len(comps) == 1, f"factor spans components {sorted(comps)}"
        if tf.component is not None:
            assert comps == {tf.component}, \
                f"factor claims component {tf.component}, lies in {comps}"
