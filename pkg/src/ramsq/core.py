"""Two-edge-coloured (near-)complete graphs.

A :class:`ColouredGraph` stores, per colour, one adjacency bitmask row per
vertex.  A pair of vertices is red, blue, or absent; absent is a first-class
state because minimum-degree hypotheses distinguish a missing pair from a
pair of either colour.  Vertex identity is the integer index and every
set-valued answer is an int bitmask (see :mod:`ramsq.bitset`).

The on-disk text format (``.cgr``) is::

    cgr <n>
    <row 0: states of pairs (0,1)..(0,n-1), chars R/B/.>
    ...
    <row n-2: state of pair (n-2,n-1)>
    # anything from the first '#' line onward is ignored

"""

from __future__ import annotations

import enum
import os
from collections.abc import Iterator

from .bitset import bit, bits, full_mask, popcount
from .errors import PreconditionError


class Colour(enum.Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def other(self) -> "Colour":
        return Colour.BLUE if self is Colour.RED else Colour.RED

    def __str__(self) -> str:  # for CLI/report output
        return self.value


class EdgeState(enum.Enum):
    RED = "R"
    BLUE = "B"
    ABSENT = "."

    @classmethod
    def of(cls, colour: Colour) -> "EdgeState":
        return cls.RED if colour is Colour.RED else cls.BLUE

    @property
    def colour(self) -> Colour | None:
        if self is EdgeState.RED:
            return Colour.RED
        if self is EdgeState.BLUE:
            return Colour.BLUE
        return None


RED = Colour.RED
BLUE = Colour.BLUE


class ColouredGraph:
    """Symmetric pair->state map over n vertices, plus per-colour bitset rows.

    Mutable while being built, then treated as an immutable value; nothing
    here locks.
    """

    __slots__ = ("n", "_adj")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"graph order must be >= 1, got {n}")
        self.n = n
        # _adj[colour][v] = bitmask of colour-neighbours of v
        self._adj = {RED: [0] * n, BLUE: [0] * n}

    @classmethod
    def new_complete(cls, n: int, default: Colour) -> "ColouredGraph":
        """Complete graph with every pair carrying ``default``."""
        g = cls(n)
        rows = g._adj[default]
        all_bits = full_mask(n)
        for v in range(n):
            rows[v] = all_bits ^ bit(v)
        return g

    # -- basic queries ----------------------------------------------------

    def _check_pair(self, u: int, v: int) -> None:
        if u == v:
            raise IndexError(f"self-pair ({u},{v})")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"vertex out of range in pair ({u},{v}), n={self.n}")

    def set_edge(self, u: int, v: int, state: EdgeState | Colour) -> None:
        if isinstance(state, Colour):
            state = EdgeState.of(state)
        self._check_pair(u, v)
        for c in (RED, BLUE):
            self._adj[c][u] &= ~bit(v)
            self._adj[c][v] &= ~bit(u)
        col = state.colour
        if col is not None:
            self._adj[col][u] |= bit(v)
            self._adj[col][v] |= bit(u)

    def edge_state(self, u: int, v: int) -> EdgeState:
        self._check_pair(u, v)
        if self._adj[RED][u] >> v & 1:
            return EdgeState.RED
        if self._adj[BLUE][u] >> v & 1:
            return EdgeState.BLUE
        return EdgeState.ABSENT

    def colour_adj(self, v: int, colour: Colour) -> int:
        """Bitmask of the colour-``colour`` neighbours of ``v``."""
        return self._adj[colour][v]

    def colour_neighbourhood(self, v: int, colour: Colour, within: int | None = None) -> int:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range, n={self.n}")
        nb = self._adj[colour][v]
        if within is not None:
            nb &= within
        return nb

    def colour_degree(self, v: int, colour: Colour, within: int | None = None) -> int:
        return popcount(self.colour_neighbourhood(v, colour, within))

    def degree(self, v: int) -> int:
        """Number of present (non-absent) pairs at v."""
        return popcount(self._adj[RED][v] | self._adj[BLUE][v])

    def min_degree(self) -> int:
        return min(self.degree(v) for v in range(self.n))

    @property
    def vertices(self) -> int:
        return full_mask(self.n)

    def edges(self, colour: Colour | None = None) -> Iterator[tuple[int, int]]:
        """Canonical (u < v) pairs; of one colour, or all present pairs."""
        if colour is None:
            rows = [self._adj[RED][v] | self._adj[BLUE][v] for v in range(self.n)]
        else:
            rows = self._adj[colour]
        for u in range(self.n):
            high = rows[u] >> (u + 1)
            v = u + 1
            while high:
                low = high & -high
                yield (u, v + low.bit_length() - 1)
                high ^= low
        return

    def edge_count(self, colour: Colour | None = None) -> int:
        if colour is None:
            return sum(self.degree(v) for v in range(self.n)) // 2
        return sum(popcount(r) for r in self._adj[colour]) // 2

    def copy(self) -> "ColouredGraph":
        g = ColouredGraph(self.n)
        g._adj = {RED: list(self._adj[RED]), BLUE: list(self._adj[BLUE])}
        return g

    def induced(self, subset: int) -> tuple["ColouredGraph", list[int]]:
        """Induced subgraph on the bitmask ``subset``.

        Returns the subgraph plus the list mapping new indices to old.
        """
        old = list(bits(subset))
        if not old:
            raise ValueError("induced subgraph on the empty set")
        g = ColouredGraph(len(old))
        pos = {o: i for i, o in enumerate(old)}
        for c in (RED, BLUE):
            for i, o in enumerate(old):
                row = self._adj[c][o] & subset
                new_row = 0
                for w in bits(row):
                    new_row |= bit(pos[w])
                g._adj[c][i] = new_row
        return g, old

    def relabelled(self, perm: list[int]) -> "ColouredGraph":
        """Image under the permutation v -> perm[v]."""
        g = ColouredGraph(self.n)
        for c in (RED, BLUE):
            for v in range(self.n):
                row = 0
                for w in bits(self._adj[c][v]):
                    row |= bit(perm[w])
                g._adj[c][perm[v]] = row
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColouredGraph):
            return NotImplemented
        return self.n == other.n and self._adj[RED] == other._adj[RED] and self._adj[BLUE] == other._adj[BLUE]

    def __hash__(self) -> int:
        return hash((self.n, tuple(self._adj[RED]), tuple(self._adj[BLUE])))

    def __repr__(self) -> str:
        return (f"ColouredGraph(n={self.n}, red={self.edge_count(RED)}, "
                f"blue={self.edge_count(BLUE)})")


# -- r-blue / r-red pairs -------------------------------------------------

def is_r_colour_pair(g: ColouredGraph, a: int, b: int, r: float, colour: Colour) -> bool:
    """All but at most r vertices of each side are r-``colour`` to the other.

    A vertex v is r-``colour`` to a set S when at most r of its pairs into S
    are not of that colour (absent pairs count as wrong).
    """
    if a & b:
        raise PreconditionError("r-colour pair requires disjoint sets")
    if r < 0:
        raise PreconditionError(f"budget r must be >= 0, got {r}")
    for side, opp in ((a, b), (b, a)):
        opp_size = popcount(opp)
        bad = 0
        for v in bits(side):
            wrong = opp_size - popcount(g.colour_adj(v, colour) & opp)
            if wrong > r:
                bad += 1
                if bad > r:
                    return False
    return True


def is_r_blue_pair(g: ColouredGraph, a: int, b: int, r: float) -> bool:
    return is_r_colour_pair(g, a, b, r, BLUE)


def is_r_red_pair(g: ColouredGraph, a: int, b: int, r: float) -> bool:
    return is_r_colour_pair(g, a, b, r, RED)


def r_colour_bad_vertices(g: ColouredGraph, a: int, b: int, r: float, colour: Colour) -> tuple[int, int]:
    """Masks of the vertices on each side with more than r wrong pairs."""
    out = []
    for side, opp in ((a, b), (b, a)):
        opp_size = popcount(opp)
        bad = 0
        for v in bits(side):
            wrong = opp_size - popcount(g.colour_adj(v, colour) & opp)
            if wrong > r:
                bad |= bit(v)
        out.append(bad)
    return out[0], out[1]


# -- cgr text format ------------------------------------------------------

def to_cgr(g: ColouredGraph) -> str:
    lines = [f"cgr {g.n}"]
    for u in range(g.n - 1):
        lines.append("".join(g.edge_state(u, v).value for v in range(u + 1, g.n)))
    return "\n".join(lines) + "\n"


def from_cgr(text: str) -> ColouredGraph:
    lines = []
    for raw in text.splitlines():
        if raw.startswith("#"):
            break
        lines.append(raw)
    if not lines or not lines[0].startswith("cgr "):
        raise ValueError("not a cgr file: missing 'cgr <n>' header")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise ValueError("bad cgr header") from exc
    if n < 1:
        raise ValueError(f"bad cgr order {n}")
    g = ColouredGraph(n)
    rows = lines[1:]
    if len(rows) < n - 1:
        raise ValueError(f"cgr file truncated: expected {n - 1} rows, got {len(rows)}")
    for u in range(n - 1):
        row = rows[u].strip()
        if len(row) != n - 1 - u:
            raise ValueError(f"cgr row {u} has length {len(row)}, expected {n - 1 - u}")
        for k, ch in enumerate(row):
            try:
                state = EdgeState(ch)
            except ValueError as exc:
                raise ValueError(f"bad cgr state {ch!r} in row {u}") from exc
            if state is not EdgeState.ABSENT:
                g.set_edge(u, u + 1 + k, state)
    return g


def write_cgr(g: ColouredGraph, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(to_cgr(g))


def read_cgr(path: str | os.PathLike) -> ColouredGraph:
    with open(path) as fh:
        return from_cgr(fh.read())


def coloured_from_simple(sg, colour: Colour = RED) -> ColouredGraph:
    """Uncoloured graph -> all listed edges ``colour``, absent otherwise."""
    g = ColouredGraph(sg.n)
    for v in range(sg.n):
        g._adj[colour][v] = sg.adj[v]
    return g


def coloured_from_graph6(text: str) -> ColouredGraph:
    """graph6 import for oracle interop: listed edges red, absent otherwise."""
    from .powers import graph6_decode
    return coloured_from_simple(graph6_decode(text), RED)
