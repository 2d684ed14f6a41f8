"""Exact monochromatic containment and small-order avoidance search.

Everything here is exhaustive with pruning; outcomes over a budget are
reported as unknown, never guessed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .bitset import bit, bits, full_mask, popcount
from .core import BLUE, RED, Colour, ColouredGraph, EdgeState
from .errors import PreconditionError
from .powers import SimpleGraph, square_path

ORDER_CAP = 10

_K3 = SimpleGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)])


@dataclass
class SearchBudget:
    max_nodes: int | None = None
    max_seconds: float | None = None
    fanout: int = 1              # accepted for interface parity; search runs sequentially

    def tracker(self) -> "_Tracker":
        return _Tracker(self)


class _Tracker:
    __slots__ = ("budget", "nodes", "deadline")

    def __init__(self, budget: SearchBudget | None):
        self.budget = budget
        self.nodes = 0
        self.deadline = (
            time.perf_counter() + budget.max_seconds
            if budget is not None and budget.max_seconds is not None else None
        )

    def tick(self) -> bool:
        """Count a node; True while within budget."""
        self.nodes += 1
        if self.budget is not None and self.budget.max_nodes is not None \
                and self.nodes > self.budget.max_nodes:
            return False
        if self.deadline is not None and self.nodes % 256 == 0 \
                and time.perf_counter() > self.deadline:
            return False
        return True


def _embedding_order(h: SimpleGraph) -> list[int]:
    """Vertex order maximising back-degree (connected extension where possible)."""
    order = [max(range(h.n), key=lambda v: (h.degree(v), -v))]
    placed = bit(order[0])
    while len(order) < h.n:
        best = max(
            (v for v in range(h.n) if not placed >> v & 1),
            key=lambda v: (popcount(h.adj[v] & placed), h.degree(v), -v),
        )
        order.append(best)
        placed |= bit(best)
    return order


def _is_square_path(h: SimpleGraph) -> bool:
    return h.n >= 3 and h == square_path(h.n)


def _find_mono_embedding(
    g: ColouredGraph,
    colour: Colour,
    h: SimpleGraph,
    budget: SearchBudget | None = None,
    forced_pair: tuple[int, int] | None = None,
) -> list[int] | bool | None:
    """An embedding of h into the colour subgraph: image list, False, or
    None when the budget ran out.

    ``forced_pair`` restricts the image of the first mapped edge to the
    given pair (either orientation); the avoidance search uses it to probe
    copies through a newly coloured pair.
    """
    if h.n > g.n:
        return False
    if h.edge_count() == 0:
        return list(range(h.n))
    path_mode = forced_pair is None and _is_square_path(h)
    order = list(range(h.n)) if path_mode else _embedding_order(h)
    pos_in_order = {v: i for i, v in enumerate(order)}
    back_masks = []
    for i, v in enumerate(order):
        back = 0
        for w in bits(h.adj[v]):
            if pos_in_order[w] < i:
                back |= bit(pos_in_order[w])
        back_masks.append(back)
    degs = [h.degree(v) for v in order]
    cdeg = [g.colour_degree(v, colour) for v in range(g.n)]
    tracker = budget.tracker() if budget is not None else None
    image = [-1] * h.n
    used = 0
    out_of_budget = False

    def rec(i: int) -> bool:
        nonlocal used, out_of_budget
        if tracker is not None and not tracker.tick():
            out_of_budget = True
            return False
        if i == h.n:
            return True
        cand = full_mask(g.n) & ~used
        for j in bits(back_masks[i]):
            cand &= g.colour_adj(image[j], colour)
        if forced_pair is not None:
            pair_mask = bit(forced_pair[0]) | bit(forced_pair[1])
            if i == 0:
                cand &= pair_mask
            elif i == 1:
                cand &= pair_mask
        for v in bits(cand):
            if cdeg[v] < degs[i]:
                continue
            if path_mode and i == h.n - 1 and v < image[0]:
                continue  # reversal symmetry: keep image[0] <= image[last]
            image[i] = v
            used |= bit(v)
            if rec(i + 1):
                return True
            used &= ~bit(v)
            image[i] = -1
            if out_of_budget:
                return False
        return False

    found = rec(0)
    if found:
        inv = [0] * h.n
        for i, v in enumerate(order):
            inv[v] = image[i]
        return inv
    if out_of_budget:
        return None
    return False


def contains_mono_subgraph(
    g: ColouredGraph,
    colour: Colour,
    h: SimpleGraph,
    budget: SearchBudget | None = None,
) -> bool | None:
    """Whether a copy of ``h`` sits inside the colour subgraph.

    Backtracking over an order in which each new vertex has mapped
    neighbours; candidate sets are bitmask intersections of the images'
    colour neighbourhoods.  Square paths use their natural order, where
    each new vertex must be adjacent to the previous two, and skip the
    reversal symmetry.  Returns None when the budget runs out.
    """
    res = _find_mono_embedding(g, colour, h, budget)
    if res is None:
        return None
    return bool(res)


@dataclass
class LongestPathResult:
    length: int          # largest l with the square of an l-vertex path found
    exact: bool          # False when the budget stopped the upper search


def longest_mono_square_path(
    g: ColouredGraph,
    colour: Colour,
    budget: SearchBudget | None = None,
) -> LongestPathResult:
    """Largest l such that P_l^2 embeds in the colour subgraph.

    A greedy two-predecessor extension from every colour edge seeds the
    lower bound; iterative deepening with the exact embedder settles it.
    """
    n = g.n
    best = 1
    for (u, v) in g.edges(colour):
        path_len = 2
        a, b = u, v
        used = bit(u) | bit(v)
        while True:
            common = g.colour_adj(a, colour) & g.colour_adj(b, colour) & ~used
            if not common:
                break
            w = (common & -common).bit_length() - 1
            used |= bit(w)
            a, b = b, w
            path_len += 1
        best = max(best, path_len)
        if best == n:
            break
    while best < n:
        found = contains_mono_subgraph(g, colour, square_path(best + 1), budget)
        if found is None:
            return LongestPathResult(best, False)
        if not found:
            break
        best += 1
    return LongestPathResult(best, True)


# -- avoidance search -----------------------------------------------------------

@dataclass
class SearchOutcome:
    kind: str                               # "witness" | "exhausted" | "unknown"
    witness: ColouredGraph | None = None
    nodes: int = 0

    @property
    def is_witness(self) -> bool:
        return self.kind == "witness"


def _edge_order(n: int) -> list[tuple[int, int]]:
    """Pairs grouped by their larger endpoint: (0,1),(0,2),(1,2),(0,3)..."""
    return [(i, k) for k in range(1, n) for i in range(k)]


def _prefix_is_canonical(g: ColouredGraph, k: int, edges: list[tuple[int, int]], upto: int) -> bool:
    """No transposition of {0..k} lexicographically lowers the coloured prefix.

    The graph on {0..k} is completely coloured here, so every compared pair
    is defined under the permutation.  Keeping only prefixes that are
    lexicographically minimal under transpositions preserves the
    lexicographically least colouring of every isomorphism class.
    """
    word = [0 if g.edge_state(u, v) is EdgeState.RED else 1 for (u, v) in edges[:upto]]
    for a in range(k + 1):
        for b in range(a + 1, k + 1):
            for idx, (u, v) in enumerate(edges[:upto]):
                pu = b if u == a else a if u == b else u
                pv = b if v == a else a if v == b else v
                perm_bit = 0 if g.edge_state(pu, pv) is EdgeState.RED else 1
                if perm_bit != word[idx]:
                    if perm_bit < word[idx]:
                        return False
                    break
    return True


def search_avoiding_colouring(
    n: int,
    h: SimpleGraph,
    budget: SearchBudget | None = None,
    prune_canonical: bool = True,
    prune_containment: bool = True,
    order_cap: int = ORDER_CAP,
) -> SearchOutcome:
    """Depth-first over 2-colourings of the complete graph on n vertices,
    looking for one with no monochromatic copy of ``h`` in either colour.

    Colours are assigned in a fixed edge order.  With containment pruning a
    branch dies as soon as a copy of ``h`` through the newly coloured pair
    appears (common-neighbour test for triangles, embedding probe
    otherwise, full re-search when a vertex's row completes); canonical
    pruning drops prefixes a vertex transposition would lower.  Every leaf
    is checked independently in both colours before being returned, so
    pruning affects speed, never correctness.
    """
    if n < 1:
        raise PreconditionError("order must be >= 1")
    if n > order_cap:
        return SearchOutcome("unknown")
    if h.n <= 1:
        return SearchOutcome("exhausted")  # a single vertex is always present
    edges = _edge_order(n)
    g = ColouredGraph(n)
    tracker = (budget if budget is not None else SearchBudget()).tracker()
    row_ends = {k * (k + 1) // 2: k for k in range(1, n)}
    is_triangle = h == _K3

    def mono_through(idx: int, colour: Colour) -> bool:
        u, v = edges[idx]
        if is_triangle:
            return bool(g.colour_adj(u, colour) & g.colour_adj(v, colour))
        return bool(_find_mono_embedding(g, colour, h, None, forced_pair=(u, v)))

    def clean(colour: Colour) -> bool:
        return not _find_mono_embedding(g, colour, h)

    out_of_budget = False

    def rec(idx: int) -> ColouredGraph | None:
        nonlocal out_of_budget
        if not tracker.tick():
            out_of_budget = True
            return None
        if idx == len(edges):
            if clean(RED) and clean(BLUE):
                return g.copy()
            return None
        u, v = edges[idx]
        for colour in (RED, BLUE):
            g.set_edge(u, v, colour)
            if prune_containment and mono_through(idx, colour):
                continue
            if idx + 1 in row_ends:
                if prune_containment and not is_triangle and not (clean(RED) and clean(BLUE)):
                    continue
                if prune_canonical and not _prefix_is_canonical(g, row_ends[idx + 1], edges, idx + 1):
                    continue
            res = rec(idx + 1)
            if res is not None or out_of_budget:
                return res
        g.set_edge(u, v, EdgeState.ABSENT)
        return None

    witness = rec(0)
    if out_of_budget:
        return SearchOutcome("unknown", nodes=tracker.nodes)
    if witness is None:
        return SearchOutcome("exhausted", nodes=tracker.nodes)
    for colour in (RED, BLUE):
        if contains_mono_subgraph(witness, colour, h):
            raise AssertionError("witness failed re-validation")  # pragma: no cover
    return SearchOutcome("witness", witness, tracker.nodes)


@dataclass
class RamseyReport:
    h: SimpleGraph
    claimed: int
    below: SearchOutcome
    at: SearchOutcome

    @property
    def confirmed(self) -> bool | None:
        """True when refuting-colouring exists below and none at the claim;
        None when either side ran out of budget."""
        if self.below.kind == "unknown" or self.at.kind == "unknown":
            return None
        return self.below.is_witness and self.at.kind == "exhausted"


def verify_small_ramsey(h: SimpleGraph, claimed: int, budget: SearchBudget | None = None) -> RamseyReport:
    """Witness expected one below the claimed value, exhaustion expected at it."""
    if claimed < 2:
        raise PreconditionError("claimed Ramsey value must be >= 2")
    below = search_avoiding_colouring(claimed - 1, h, budget)
    at = search_avoiding_colouring(claimed, h, budget)
    return RamseyReport(h, claimed, below, at)
