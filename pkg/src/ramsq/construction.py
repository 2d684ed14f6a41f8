"""The extremal 2-colouring and its machine-checkable certificate.

The colouring lives on parts X1, X2, Y1, Y2 (size 2n-1 each, or 2n in the
``plus2`` variant), a small part Z of size n-1, and one hub vertex z:

- within each X_i all pairs are blue, within each Y_i all pairs are red;
- (X1,X2), (X1,Z), (X2,Z), (X1,Y2), (X2,Y1) are red;
- (Y1,Y2), (Y1,Z), (Y2,Z), (X1,Y1), (X2,Y2) are blue;
- z is blue to X1 and X2 and red to Y1 and Y2;
- pairs inside Z and from z to Z may be coloured arbitrarily (a rule picks
  them deterministically).

The certificate that no monochromatic square path of order 3n (3n+2 on the
plus2 variant) or square cycle of order 3n fits is a census of the triangle
components of each colour, with one hitting set per component whose removal
leaves an independent or triangle-free remainder, bounding any triangle
packing below n.  The verifier refuses structurally unexpected input and
never accepts unsoundly.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from .bitset import bit, bits, full_mask as full_mask_cache, mask_of, popcount, to_list
from .core import BLUE, RED, Colour, ColouredGraph, EdgeState
from .errors import BoundNotApplicable, CertificateRefused
from .triangles import triangle_components


class Variant(enum.Enum):
    BASE = "base"
    PLUS2 = "plus2"


class Target(enum.Enum):
    """Monochromatic subgraph certified absent."""

    P3N = "p3n"      # square path on 3n vertices (base variant)
    P3N2 = "p3n2"    # square path on 3n+2 vertices (plus2 variant)
    C3N = "c3n"      # square cycle on 3n vertices (base variant)


@dataclass(frozen=True)
class InteriorRule:
    """Deterministic rule for the pairs inside Z and from z to Z."""

    kind: str                 # "all-red" | "all-blue" | "seed"
    seed: int | None = None

    @classmethod
    def parse(cls, spec: "InteriorRule | str") -> "InteriorRule":
        if isinstance(spec, InteriorRule):
            return spec
        if spec in ("all-red", "all-blue"):
            return cls(spec)
        if spec.startswith("seed:"):
            return cls("seed", int(spec.split(":", 1)[1]))
        raise ValueError(f"unknown interior rule {spec!r}")

    def __str__(self) -> str:
        return self.kind if self.seed is None else f"seed:{self.seed}"


@dataclass(frozen=True)
class ConstructionPartition:
    n: int
    variant: Variant
    interior: InteriorRule
    X1: int
    X2: int
    Y1: int
    Y2: int
    Z: int
    z: int

    @property
    def order(self) -> int:
        return popcount(self.X1 | self.X2 | self.Y1 | self.Y2 | self.Z) + 1

    def interior_mask(self) -> int:
        return self.Z | bit(self.z)

    def part_name(self, v: int) -> str:
        for name in ("X1", "X2", "Y1", "Y2", "Z"):
            if getattr(self, name) >> v & 1:
                return name
        if v == self.z:
            return "z"
        raise IndexError(f"vertex {v} not in partition")


def _part_size(n: int, variant: Variant) -> int:
    return 2 * n - 1 if variant is Variant.BASE else 2 * n


def build_construction(
    n: int,
    variant: Variant | str = Variant.BASE,
    interior: InteriorRule | str = "all-red",
) -> tuple[ColouredGraph, ConstructionPartition]:
    """The extremal colouring on 9n-4 (base) or 9n (plus2) vertices.

    Layout: X1, X2, Y1, Y2, Z consecutively, hub z last.
    """
    if n < 2:
        raise ValueError(f"construction needs n >= 2, got {n}")
    variant = Variant(variant) if not isinstance(variant, Variant) else variant
    rule = InteriorRule.parse(interior)
    a = _part_size(n, variant)
    zs = n - 1
    order = 4 * a + zs + 1
    lo = [i * a for i in range(4)] + [4 * a]
    X1 = mask_of(range(lo[0], lo[0] + a))
    X2 = mask_of(range(lo[1], lo[1] + a))
    Y1 = mask_of(range(lo[2], lo[2] + a))
    Y2 = mask_of(range(lo[3], lo[3] + a))
    Z = mask_of(range(lo[4], lo[4] + zs))
    z = order - 1
    part = ConstructionPartition(n, variant, rule, X1, X2, Y1, Y2, Z, z)

    g = ColouredGraph(order)
    blue_within = (X1, X2)
    red_within = (Y1, Y2)
    red_between = ((X1, X2), (X1, Z), (X2, Z), (X1, Y2), (X2, Y1))
    blue_between = ((Y1, Y2), (Y1, Z), (Y2, Z), (X1, Y1), (X2, Y2))
    for m in blue_within:
        _fill_within(g, m, BLUE)
    for m in red_within:
        _fill_within(g, m, RED)
    for a_m, b_m in red_between:
        _fill_between(g, a_m, b_m, RED)
    for a_m, b_m in blue_between:
        _fill_between(g, a_m, b_m, BLUE)
    for v in bits(X1 | X2):
        g.set_edge(z, v, BLUE)
    for v in bits(Y1 | Y2):
        g.set_edge(z, v, RED)
    _fill_interior(g, part)
    return g, part


def _fill_within(g: ColouredGraph, m: int, colour: Colour) -> None:
    rows = g._adj[colour]
    for u in bits(m):
        rows[u] |= m & ~bit(u)


def _fill_between(g: ColouredGraph, a: int, b: int, colour: Colour) -> None:
    rows = g._adj[colour]
    for u in bits(a):
        rows[u] |= b
    for v in bits(b):
        rows[v] |= a


def _fill_interior(g: ColouredGraph, part: ConstructionPartition) -> None:
    rule = part.interior
    inner = to_list(part.interior_mask())
    if rule.kind == "seed":
        rng = random.Random(rule.seed)
    for i, u in enumerate(inner):
        for v in inner[i + 1:]:
            if rule.kind == "all-red":
                c = RED
            elif rule.kind == "all-blue":
                c = BLUE
            else:
                c = RED if rng.random() < 0.5 else BLUE
            g.set_edge(u, v, c)


# -- structural validation ----------------------------------------------------

def expected_state(part: ConstructionPartition, u: int, v: int) -> EdgeState | None:
    """Template colour of a pair; None for the free interior pairs."""
    interior = part.interior_mask()
    pu, pv = bit(u), bit(v)
    if (pu | pv) & interior == (pu | pv):
        return None
    def in_part(m: int) -> bool:
        return bool((pu | pv) & m == (pu | pv))
    def between(a: int, b: int) -> bool:
        return bool((pu & a and pv & b) or (pu & b and pv & a))
    if in_part(part.X1) or in_part(part.X2):
        return EdgeState.BLUE
    if in_part(part.Y1) or in_part(part.Y2):
        return EdgeState.RED
    for a, b in ((part.X1, part.X2), (part.X1, part.Z), (part.X2, part.Z),
                 (part.X1, part.Y2), (part.X2, part.Y1)):
        if between(a, b):
            return EdgeState.RED
    for a, b in ((part.Y1, part.Y2), (part.Y1, part.Z), (part.Y2, part.Z),
                 (part.X1, part.Y1), (part.X2, part.Y2)):
        if between(a, b):
            return EdgeState.BLUE
    zb = bit(part.z)
    if (pu | pv) & zb:
        other = pv if pu & zb else pu
        if other & (part.X1 | part.X2):
            return EdgeState.BLUE
        if other & (part.Y1 | part.Y2):
            return EdgeState.RED
    raise AssertionError(f"pair ({u},{v}) escaped the template")


def _template_rows(part: ConstructionPartition) -> tuple[list[int], list[int]]:
    """Per-vertex expected red and blue row masks over the non-free pairs."""
    n = part.order
    red = [0] * n
    blue = [0] * n
    zb = bit(part.z)
    spec = {
        "X1": (part.X1, part.X2 | part.Z | part.Y2, part.X1 | part.Y1 | zb),
        "X2": (part.X2, part.X1 | part.Z | part.Y1, part.X2 | part.Y2 | zb),
        "Y1": (part.Y1, part.Y1 | part.X2 | zb, part.Y2 | part.Z | part.X1),
        "Y2": (part.Y2, part.Y2 | part.X1 | zb, part.Y1 | part.Z | part.X2),
        "Z": (part.Z, part.X1 | part.X2, part.Y1 | part.Y2),
    }
    for _, (members, red_to, blue_to) in spec.items():
        for u in bits(members):
            red[u] = red_to & ~bit(u)
            blue[u] = blue_to & ~bit(u)
    red[part.z] = part.Y1 | part.Y2
    blue[part.z] = part.X1 | part.X2
    return red, blue


def validate_structure(g: ColouredGraph, part: ConstructionPartition) -> None:
    """Refuse unless the graph matches the template outside the free interior."""
    n, variant = part.n, part.variant
    a = _part_size(n, variant)
    sizes = [popcount(part.X1), popcount(part.X2), popcount(part.Y1), popcount(part.Y2)]
    if sizes != [a] * 4 or popcount(part.Z) != n - 1:
        raise CertificateRefused(f"part sizes {sizes}+{popcount(part.Z)} do not fit n={n} {variant.value}")
    whole = part.X1 | part.X2 | part.Y1 | part.Y2 | part.Z | bit(part.z)
    if popcount(whole) != part.order or g.n != part.order:
        raise CertificateRefused("partition does not cover the vertex set exactly")
    interior = part.interior_mask()
    exp_red, exp_blue = _template_rows(part)
    for u in range(g.n):
        defined = full_mask_cache(g.n) & ~bit(u)
        if interior >> u & 1:
            defined &= ~interior
        for colour, expected in ((RED, exp_red[u]), (BLUE, exp_blue[u])):
            got = g.colour_adj(u, colour) & defined
            if got != expected:
                v = ((got ^ expected) & -(got ^ expected)).bit_length() - 1
                want = expected_state(part, u, v)
                raise CertificateRefused(
                    f"pair ({u},{v}) [{part.part_name(u)}-{part.part_name(v)}] "
                    f"is {g.edge_state(u, v).value}, template requires {want.value}")


def derive_partition(
    g: ColouredGraph,
    n: int,
    interior: InteriorRule | str | None = None,
) -> ConstructionPartition:
    """Partition for a graph laid out canonically (as build_construction emits).

    The variant is inferred from the order; the interior rule tag is
    cosmetic here since certification reads interior pairs off the graph.
    """
    if g.n == 9 * n - 4:
        variant = Variant.BASE
    elif g.n == 9 * n:
        variant = Variant.PLUS2
    else:
        raise CertificateRefused(f"order {g.n} is neither 9n-4 nor 9n for n={n}")
    rule = InteriorRule.parse(interior) if interior else InteriorRule("all-red")
    a = _part_size(n, variant)
    return ConstructionPartition(
        n, variant, rule,
        X1=mask_of(range(0, a)),
        X2=mask_of(range(a, 2 * a)),
        Y1=mask_of(range(2 * a, 3 * a)),
        Y2=mask_of(range(3 * a, 4 * a)),
        Z=mask_of(range(4 * a, 4 * a + n - 1)),
        z=g.n - 1,
    )


# -- triangle-component census -------------------------------------------------

@dataclass
class CensusComponent:
    """One expected triangle component of the construction."""

    colour: Colour
    kind: str                    # "side1" | "side2" | "core" | "singleton"
    support: int                 # vertices incident to its edges
    hitting_set: int             # the set S used by the packing bound
    remainder: str               # "independent" | "triangle-free" | "empty"
    edges: frozenset = field(repr=False, default=frozenset())


def _interior_red_like(g: ColouredGraph, part: ConstructionPartition, colour: Colour):
    """Interior colour-c edges split into Z-internal, hub-in-triangle, hub-single."""
    z = part.z
    z_internal = []
    for u in bits(part.Z):
        row = g.colour_adj(u, colour) & part.Z
        for v in bits(row):
            if v > u:
                z_internal.append((u, v))
    hub_joined, hub_single = [], []
    for w in bits(g.colour_adj(z, colour) & part.Z):
        common = g.colour_adj(z, colour) & g.colour_adj(w, colour)
        e = (min(z, w), max(z, w))
        if common:
            hub_joined.append(e)
        else:
            hub_single.append(e)
    return z_internal, hub_joined, hub_single


def expected_census(
    g: ColouredGraph,
    part: ConstructionPartition,
    colour: Colour,
    with_edges: bool = True,
) -> list[CensusComponent]:
    """The predicted triangle components of ``colour`` for this construction.

    For red: (i) pairs inside Y1 plus (Y1, X2+z); (ii) the Y2 mirror;
    (iii) the crossing pairs (X1,X2,Z) plus the red interior pairs that
    join them (all red pairs inside Z, and red hub-to-Z pairs lying in a
    red triangle); plus one singleton per red hub-to-Z pair in no red
    triangle.  Blue is the mirror image with X and Y exchanged.
    """
    zb = bit(part.z)
    if colour is RED:
        side_sets = ((part.Y1, part.X2), (part.Y2, part.X1))
        core_parts = (part.X1, part.X2)
    else:
        side_sets = ((part.X1, part.Y1), (part.X2, part.Y2))
        core_parts = (part.Y1, part.Y2)

    comps: list[CensusComponent] = []
    for idx, (inner, outer) in enumerate(side_sets):
        edges: set[tuple[int, int]] = set()
        if with_edges:
            vs = to_list(inner)
            for i, u in enumerate(vs):
                for v in vs[i + 1:]:
                    edges.add((u, v))
            for u in bits(inner):
                for v in bits(outer | zb):
                    edges.add((min(u, v), max(u, v)))
        comps.append(CensusComponent(
            colour, f"side{idx + 1}",
            support=inner | outer | zb,
            hitting_set=inner,
            remainder="independent",
            edges=frozenset(edges),
        ))

    z_internal, hub_joined, hub_single = _interior_red_like(g, part, colour)
    core_edges: set[tuple[int, int]] = set()
    if with_edges:
        p1, p2 = core_parts
        for u in bits(p1):
            for v in bits(p2 | part.Z):
                core_edges.add((min(u, v), max(u, v)))
        for u in bits(p2):
            for v in bits(part.Z):
                core_edges.add((min(u, v), max(u, v)))
        core_edges.update(z_internal)
        core_edges.update(hub_joined)
    support = core_parts[0] | core_parts[1] | part.Z
    if hub_joined:
        support |= zb
    comps.append(CensusComponent(
        colour, "core",
        support=support,
        hitting_set=part.Z,
        remainder="triangle-free",
        edges=frozenset(core_edges),
    ))
    for e in hub_single:
        comps.append(CensusComponent(
            colour, "singleton",
            support=bit(e[0]) | bit(e[1]),
            hitting_set=0,
            remainder="empty",
            edges=frozenset([e]),
        ))
    return comps


def expected_red_census(
    n: int,
    variant: Variant | str = Variant.BASE,
    interior: InteriorRule | str = "all-red",
) -> list[CensusComponent]:
    g, part = build_construction(n, variant, interior)
    return expected_census(g, part, RED)


def census_matches(g: ColouredGraph, part: ConstructionPartition, colour: Colour) -> bool:
    """Predicted census equals the union-find labelling, as edge partitions."""
    predicted = {c.edges for c in expected_census(g, part, colour)}
    actual = set(triangle_components(g, colour).edge_partition())
    return predicted == actual


# -- hitting-set bounds and the certificate -------------------------------------

def hitting_set_triangle_bound(g: ColouredGraph, colour: Colour, support: int, s_mask: int) -> int:
    """Packing bound from a hitting set S within a component's support.

    If support minus S spans no colour edge, every triangle uses two S
    vertices: bound floor(|S|/2).  If it spans no colour triangle, every
    triangle uses one: bound |S|.  Otherwise the rule does not apply.
    """
    if s_mask & ~support:
        raise BoundNotApplicable("hitting set must lie inside the component support")
    rest = support & ~s_mask
    has_edge = False
    has_triangle = False
    for u in bits(rest):
        row = g.colour_adj(u, colour) & rest
        high = row >> (u + 1)
        if high:
            has_edge = True
            v = u + 1
            while high:
                low = high & -high
                w = v + low.bit_length() - 1
                if g.colour_adj(u, colour) & g.colour_adj(w, colour) & rest:
                    has_triangle = True
                    break
                high ^= low
        if has_triangle:
            break
    if not has_edge:
        return popcount(s_mask) // 2
    if not has_triangle:
        return popcount(s_mask)
    raise BoundNotApplicable("remainder contains a colour triangle")


def bound_for_component(g: ColouredGraph, comp: CensusComponent) -> int:
    if comp.remainder == "empty":
        return 0
    return hitting_set_triangle_bound(g, comp.colour, comp.support, comp.hitting_set)


@dataclass
class ComponentCertificate:
    colour: Colour
    kind: str
    support_size: int
    hitting_set_size: int
    remainder: str
    packing_bound: int
    refutation: str              # "packing" | "independence"

    def describe(self) -> str:
        if self.refutation == "packing":
            return (f"{self.colour} {self.kind}: hitting set of {self.hitting_set_size} "
                    f"leaves {self.remainder} remainder, at most "
                    f"{self.packing_bound} disjoint triangles")
        return (f"{self.colour} {self.kind}: removing the {self.hitting_set_size}-vertex "
                f"hitting set from any copy leaves an edge inside an independent remainder")


@dataclass
class PackingCertificate:
    n: int
    target: Target
    accepted: bool
    components: list[ComponentCertificate]
    reduction_checked: bool      # target has n disjoint triangles in one component

    def summary(self) -> str:
        head = f"target {self.target.value} at n={self.n}: " + ("ACCEPTED" if self.accepted else "refused")
        return "\n".join([head] + ["  " + c.describe() for c in self.components])


def target_order_and_alpha(target: Target, n: int) -> tuple[int, int]:
    """(vertex count, independence number) of the certified-absent graph.

    An independent set in a square path picks indices pairwise more than 2
    apart, giving ceil(m/3); cyclically, floor(m/3).
    """
    if target is Target.P3N:
        m = 3 * n
        return m, (m + 2) // 3
    if target is Target.P3N2:
        m = 3 * n + 2
        return m, (m + 2) // 3
    return 3 * n, n


_REDUCTION_CACHE: dict[tuple[Target, int], bool] = {}


def _reduction_fact(target: Target, k: int) -> bool:
    """For small k: the target on 3k(+2) vertices holds k disjoint triangles
    inside a single triangle component of itself."""
    key = (target, k)
    if key in _REDUCTION_CACHE:
        return _REDUCTION_CACHE[key]
    from .core import coloured_from_simple
    from .powers import square_cycle, square_path
    if target is Target.C3N:
        h = square_cycle(3 * k)
    elif target is Target.P3N:
        h = square_path(3 * k)
    else:
        h = square_path(3 * k + 2)
    ch = coloured_from_simple(h, RED)
    lab = triangle_components(ch, RED)
    ok = lab.count == 1 and len(lab.edge_list) == h.edge_count()
    disjoint = all(
        h.has_edge(3 * i, 3 * i + 1) and h.has_edge(3 * i, 3 * i + 2) and h.has_edge(3 * i + 1, 3 * i + 2)
        for i in range(k)
    )
    _REDUCTION_CACHE[key] = ok and disjoint
    return _REDUCTION_CACHE[key]


def certify_no_mono_square(
    g: ColouredGraph,
    part: ConstructionPartition,
    target: Target | str,
) -> PackingCertificate:
    """Certificate that no monochromatic copy of the target exists.

    A monochromatic square path or cycle is triangle connected and contains
    one vertex-disjoint triangle per three vertices, so a copy of the target
    would put n disjoint triangles and all of its vertices inside a single
    triangle component.  Each census component refutes that either by a
    packing bound below n or, where the remainder after the hitting set is
    independent, because the target keeps an edge on any vertex set larger
    than its independence number.

    Raises CertificateRefused on structural mismatch; never accepts
    unsoundly.
    """
    target = Target(target) if not isinstance(target, Target) else target
    n = part.n
    if target in (Target.P3N, Target.C3N) and part.variant is not Variant.BASE:
        raise CertificateRefused(f"target {target.value} is certified on the base variant only")
    if target is Target.P3N2 and part.variant is not Variant.PLUS2:
        raise CertificateRefused("target p3n2 is certified on the plus2 variant only")
    validate_structure(g, part)

    order, alpha = target_order_and_alpha(target, n)
    reduction_checked = _reduction_fact(target, min(n, 7))

    comps: list[ComponentCertificate] = []
    accepted = True
    for colour in (RED, BLUE):
        for comp in expected_census(g, part, colour, with_edges=False):
            bound = bound_for_component(g, comp)
            if bound < n:
                refutation = "packing"
            elif comp.remainder == "independent" and order - popcount(comp.hitting_set) > alpha:
                refutation = "independence"
            else:  # pragma: no cover - construction components always refute
                refutation = "none"
                accepted = False
            comps.append(ComponentCertificate(
                colour, comp.kind, popcount(comp.support), popcount(comp.hitting_set),
                comp.remainder, bound, refutation))
    return PackingCertificate(n, target, accepted, comps, reduction_checked)
