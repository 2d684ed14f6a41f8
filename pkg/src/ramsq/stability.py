"""Recovery and validation of the 6-class near-extremal structure.

A 2-coloured near-complete graph on about 9t vertices that has no
monochromatic triangle-connected triangle factor on a bit more than 3t
vertices splits into classes B1, B2, R1, R2, Z, T: the four big classes are
internally monochromatic, the eight cross pairs against Z and across
colours are fully monochromatic in a fixed pattern, (B1,B2) is almost red,
(R1,R2) almost blue, and T is small.  ``validate_extremal_partition``
checks exactly that; ``recover_partition`` tries to exhibit either the big
factor or the partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bitset import bit, bits, full_mask, lowest_bit, mask_of, popcount
from .core import BLUE, RED, Colour, ColouredGraph
from .errors import PreconditionError
from .finders import greedy_clique_partition, group_cliques
from .triangles import (
    TriangleFactor,
    greedy_triangle_packing,
    triangle_components,
    validate_triangle_factor,
)


@dataclass(frozen=True)
class StabilityParams:
    t: float
    eps: float
    h: float
    lam: float

    def __post_init__(self):
        if self.t <= 0 or min(self.eps, self.h, self.lam) <= 0:
            raise PreconditionError(f"parameters must be positive, got {self}")


@dataclass
class ExtremalPartition:
    B1: int
    B2: int
    R1: int
    R2: int
    Z: int
    T: int

    def classes(self) -> dict[str, int]:
        return {"B1": self.B1, "B2": self.B2, "R1": self.R1, "R2": self.R2,
                "Z": self.Z, "T": self.T}

    def class_of(self, v: int) -> str | None:
        for name, m in self.classes().items():
            if m >> v & 1:
                return name
        return None

    def union(self) -> int:
        u = 0
        for m in self.classes().values():
            u |= m
        return u


class EdgeTagSet:
    """Set of vertex pairs (used for the wildcard 'purple' tags)."""

    def __init__(self, n: int, pairs=()):
        self.n = n
        self.rows = [0] * n
        for u, v in pairs:
            self.add(u, v)

    def add(self, u: int, v: int) -> None:
        self.rows[u] |= bit(v)
        self.rows[v] |= bit(u)

    def has(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def pairs(self):
        for u in range(self.n):
            for v in bits(self.rows[u] >> (u + 1) << (u + 1)):
                yield (u, v)


@dataclass
class ConditionReport:
    name: str
    passed: bool
    detail: str
    witnesses: list = field(default_factory=list)


@dataclass
class VertexPartitionReport:
    conditions: list[ConditionReport]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failures(self) -> list[ConditionReport]:
        return [c for c in self.conditions if not c.passed]

    def summary(self) -> str:
        lines = []
        for c in self.conditions:
            mark = "pass" if c.passed else "FAIL"
            lines.append(f"  ({c.name}) {mark}: {c.detail}")
        return "\n".join(lines)


_WITNESS_CAP = 8


def _pair_colour_violations(g: ColouredGraph, a: int, b: int, want: Colour,
                            purple: EdgeTagSet | None) -> list[tuple[int, int]]:
    out = []
    for u in bits(a):
        wrong = g.colour_adj(u, want.other) & b
        for v in bits(wrong):
            if purple is not None and purple.has(u, v):
                continue
            out.append((min(u, v), max(u, v)))
    return out


def _within_colour_violations(g: ColouredGraph, m: int, want: Colour,
                              purple: EdgeTagSet | None) -> list[tuple[int, int]]:
    out = []
    for u in bits(m):
        wrong = g.colour_adj(u, want.other) & m
        for v in bits(wrong):
            if v > u and not (purple is not None and purple.has(u, v)):
                out.append((u, v))
    return out


def _r_pair_bad(g: ColouredGraph, a: int, b: int, r: float, want: Colour,
                purple: EdgeTagSet | None) -> list[int]:
    """Vertices violating the r-``want`` budget (purple counts as matching)."""
    bad = []
    for side, opp in ((a, b), (b, a)):
        opp_size = popcount(opp)
        for v in bits(side):
            ok_mask = g.colour_adj(v, want) & opp
            if purple is not None:
                ok_mask |= purple.rows[v] & opp
            if opp_size - popcount(ok_mask) > r:
                bad.append(v)
    return bad


def validate_extremal_partition(
    g: ColouredGraph,
    part: ExtremalPartition,
    p: StabilityParams,
    purple: EdgeTagSet | None = None,
) -> VertexPartitionReport:
    """Check the six-class conclusion; every condition is evaluated and
    failures carry explicit witnesses.  Absent pairs never violate the
    monochromatic-pair conditions (they are not edges); purple-tagged pairs
    match any required colour.  Enlarging h or lam never turns a pass into
    a fail."""
    t, h, lam = p.t, p.h, p.lam
    conds: list[ConditionReport] = []
    if part.union() != full_mask(g.n) or sum(popcount(m) for m in part.classes().values()) != g.n:
        raise PreconditionError("classes must partition the vertex set")

    sizes = {k: popcount(m) for k, m in part.classes().items()}
    lo, hi = (2 - h) * t, (2 + h) * t
    bad = [k for k in ("B1", "B2", "R1", "R2") if not lo - 1e-9 <= sizes[k] <= hi + 1e-9]
    conds.append(ConditionReport(
        "a", not bad,
        f"B/R class sizes {[sizes[k] for k in ('B1', 'B2', 'R1', 'R2')]} vs [{lo:.2f}, {hi:.2f}]",
        bad))

    z_ok = (1 - h) * t - 1e-9 <= sizes["Z"] <= (1 + h) * t + 1e-9
    conds.append(ConditionReport(
        "b", z_ok, f"|Z| = {sizes['Z']} vs [{(1 - h) * t:.2f}, {(1 + h) * t:.2f}]",
        [] if z_ok else [sizes["Z"]]))

    interior_bad: list = []
    for name, want in (("B1", BLUE), ("B2", BLUE), ("R1", RED), ("R2", RED)):
        vio = _within_colour_violations(g, getattr(part, name), want, purple)
        interior_bad += [(name, e) for e in vio[:_WITNESS_CAP]]
    conds.append(ConditionReport(
        "c", not interior_bad,
        "class interiors monochromatic" if not interior_bad
        else f"{len(interior_bad)}+ wrong-colour pairs inside classes",
        interior_bad[:_WITNESS_CAP]))

    cross = [("B1", "R1", BLUE), ("B2", "R2", BLUE), ("R1", "Z", BLUE), ("R2", "Z", BLUE),
             ("B1", "R2", RED), ("B2", "R1", RED), ("B1", "Z", RED), ("B2", "Z", RED)]
    cross_bad: list = []
    for an, bn, want in cross:
        vio = _pair_colour_violations(g, getattr(part, an), getattr(part, bn), want, purple)
        cross_bad += [((an, bn), e) for e in vio[:_WITNESS_CAP]]
    conds.append(ConditionReport(
        "d", not cross_bad,
        "eight cross pairs monochromatic" if not cross_bad
        else f"{len(cross_bad)}+ wrong-colour cross pairs",
        cross_bad[:_WITNESS_CAP]))

    bad_bb = _r_pair_bad(g, part.B1, part.B2, lam * t, RED, purple)
    bad_rr = _r_pair_bad(g, part.R1, part.R2, lam * t, BLUE, purple)
    e_ok = len(bad_bb) <= lam * t + 1e-9 and len(bad_rr) <= lam * t + 1e-9
    conds.append(ConditionReport(
        "e", e_ok,
        f"(B1,B2) {len(bad_bb)} red-budget violators, (R1,R2) {len(bad_rr)} "
        f"blue-budget violators vs {lam * t:.2f}",
        (bad_bb + bad_rr)[:_WITNESS_CAP]))

    f_ok = sizes["T"] <= h * t + 1e-9
    conds.append(ConditionReport(
        "f", f_ok, f"|T| = {sizes['T']} vs {h * t:.2f}", [] if f_ok else [sizes["T"]]))
    return VertexPartitionReport(conds)


def validate_vertex_partition(
    g: ColouredGraph,
    x1: int, x2: int, y1: int, y2: int, z: int, r: int,
    alpha: float,
    scale: float | None = None,
) -> VertexPartitionReport:
    """Per-vertex degree-budget form of the structure: sizes (a)-(c) and,
    with budget alpha * scale, wrong-colour degree caps (d)-(g).

    ``scale`` defaults to |G|/9.  Every violating vertex is listed.
    """
    n_scale = scale if scale is not None else g.n / 9
    budget = alpha * n_scale
    conds: list[ConditionReport] = []
    whole = x1 | x2 | y1 | y2 | z | r
    if whole != full_mask(g.n) or sum(map(popcount, (x1, x2, y1, y2, z, r))) != g.n:
        raise PreconditionError("classes must partition the vertex set")

    sizes = [popcount(m) for m in (x1, x2, y1, y2)]
    lo, hi = (2 - alpha) * n_scale, (2 + alpha) * n_scale
    ok = all(lo - 1e-9 <= s <= hi + 1e-9 for s in sizes)
    conds.append(ConditionReport("a", ok, f"X/Y sizes {sizes} vs [{lo:.2f}, {hi:.2f}]"))
    zs = popcount(z)
    ok = (1 - alpha) * n_scale - 1e-9 <= zs <= (1 + alpha) * n_scale + 1e-9
    conds.append(ConditionReport("b", ok, f"|Z| = {zs}"))
    rs = popcount(r)
    ok = rs <= budget + 1e-9 or rs <= alpha * n_scale + 1e-9
    conds.append(ConditionReport("c", ok, f"|R| = {rs} vs {alpha * n_scale:.2f}"))

    def degree_check(name: str, pairs: list[tuple[int, int]], wrong: Colour) -> None:
        violators = []
        for a, b in pairs:
            for u in bits(a):
                if popcount(g.colour_adj(u, wrong) & b) > budget + 1e-9:
                    violators.append(u)
            for u in bits(b):
                if popcount(g.colour_adj(u, wrong) & a) > budget + 1e-9:
                    violators.append(u)
        conds.append(ConditionReport(
            name, not violators,
            f"{len(violators)} vertices over the {wrong} budget {budget:.2f}",
            sorted(set(violators))[:_WITNESS_CAP]))

    degree_check("d", [(x1, y1), (x2, y2), (y1, y2), (y1, z), (y2, z)], RED)
    degree_check("e", [(x1, y2), (x2, y1), (x1, x2), (x1, z), (x2, z)], BLUE)

    own = []
    for m in (x1, x2):
        for u in bits(m):
            if popcount(g.colour_adj(u, RED) & m) > budget + 1e-9:
                own.append(u)
    conds.append(ConditionReport("f", not own, f"{len(own)} X vertices over own-part red budget",
                                 own[:_WITNESS_CAP]))
    own = []
    for m in (y1, y2):
        for u in bits(m):
            if popcount(g.colour_adj(u, BLUE) & m) > budget + 1e-9:
                own.append(u)
    conds.append(ConditionReport("g", not own, f"{len(own)} Y vertices over own-part blue budget",
                                 own[:_WITNESS_CAP]))
    return VertexPartitionReport(conds)


# -- recovery -----------------------------------------------------------------------

@dataclass
class RecoveryOutcome:
    kind: str                                  # "factor" | "partition"
    factor: TriangleFactor | None = None
    partition: ExtremalPartition | None = None
    report: VertexPartitionReport | None = None
    resolved_purple: Colour | None = None

    @property
    def is_factor(self) -> bool:
        return self.kind == "factor"


# expected colour from a class towards each core, per the partition lemma
_TEMPLATES: dict[str, dict[str, Colour]] = {
    "B1": {"B1": BLUE, "B2": RED, "R1": BLUE, "R2": RED, "Z": RED},
    "B2": {"B1": RED, "B2": BLUE, "R1": RED, "R2": BLUE, "Z": RED},
    "R1": {"B1": BLUE, "B2": RED, "R1": RED, "R2": BLUE, "Z": BLUE},
    "R2": {"B1": RED, "B2": BLUE, "R1": BLUE, "R2": RED, "Z": BLUE},
    "Z": {"B1": RED, "B2": RED, "R1": BLUE, "R2": BLUE},
}

_REFINE_THRESHOLD = 0.75


def _refine_classes(g: ColouredGraph, cores: dict[str, int]) -> dict[str, int]:
    """Reassign every vertex to the class whose expected colour pattern its
    edges match best; vertices matching nothing well land in T.

    The clique decomposition leaves part-boundary dust (leftover vertices
    swallowed by a mixed clique or dropped to the bin); one template vote
    against the recovered cores puts the dust back.  The vote is computed
    against the pre-refinement cores only, so it is order-independent.
    """
    out = {name: 0 for name in ("B1", "B2", "R1", "R2", "Z", "T")}
    for v in range(g.n):
        vb = bit(v)
        best_name, best_score = None, -1.0
        for name, template in _TEMPLATES.items():
            match = 0
            total = 0
            for core_name, want in template.items():
                core = cores.get(core_name, 0) & ~vb
                size = popcount(core)
                if not size:
                    continue
                total += size
                match += popcount(g.colour_adj(v, want) & core)
            if total == 0:
                continue
            score = match / total
            if score > best_score + 1e-12:
                best_name, best_score = name, score
        if best_name is None or best_score < _REFINE_THRESHOLD:
            out["T"] |= vb
        else:
            out[best_name] |= vb
    return out


def _blue_link_fraction(g: ColouredGraph, a: int, b: int) -> float:
    if not a or not b:
        return 0.0
    blue = sum(popcount(g.colour_adj(u, BLUE) & b) for u in bits(a))
    return blue / (popcount(a) * popcount(b))


def recover_partition(
    g: ColouredGraph,
    p: StabilityParams,
    m: int,
    stray_threshold: float | None = None,
    purple: EdgeTagSet | None = None,
) -> RecoveryOutcome:
    """Either a monochromatic triangle-connected factor on 3(1+eps)t
    vertices or the validated 6-class partition.

    Pipeline: decompose into monochromatic cliques of size m; group
    same-colour cliques that are triangle connected through their span;
    rank blue groups B1 >= B2 >= ... and red groups R1 >= R2 >= ... by
    covered vertices (ties to the lowest vertex index); try a greedy factor
    inside each group first and return it when it reaches 3(1+eps)t
    vertices in a single triangle component; otherwise emit B1, B2, R1, R2,
    Z = everything ranked third or lower, T = the bin, orient the R classes
    so that (B1,R1) is the blue-linked pairing, refine all classes by a
    template vote, and attach the validation report.

    Purple-tagged pairs are resolved to each colour in turn and the better
    outcome kept (a factor beats a partition; between partitions, fewer
    failed conditions wins).
    """
    if purple is not None and any(True for _ in purple.pairs()):
        outcomes = []
        for colour in (RED, BLUE):
            resolved = g.copy()
            for (u, v) in purple.pairs():
                resolved.set_edge(u, v, colour)
            out = recover_partition(resolved, p, m, stray_threshold, purple=None)
            if out.kind == "partition":
                out.report = validate_extremal_partition(g, out.partition, p, purple)
            out.resolved_purple = colour
            outcomes.append(out)
        factors = [o for o in outcomes if o.is_factor]
        if factors:
            return max(factors, key=lambda o: len(o.factor.triangles))
        return min(outcomes, key=lambda o: len(o.report.failures()))

    t, eps = p.t, p.eps
    if not (9 - 2 * eps) * t - 1e-9 <= g.n <= (9 + eps) * t + 1e-9:
        raise PreconditionError(f"order {g.n} outside [(9-2eps)t, (9+eps)t]")
    if g.min_degree() < (9 - 2 * eps) * t - 1 - 1e-9:
        raise PreconditionError(f"min degree {g.min_degree()} below (9-2eps)t - 1")

    decomp = greedy_clique_partition(g, m, stray_threshold)
    groups = group_cliques(g, decomp.cliques)
    by_group: dict[tuple[Colour, int], int] = {}
    for (mask, colour), gid in zip(decomp.cliques, groups):
        key = (colour, gid)
        by_group[key] = by_group.get(key, 0) | mask

    def ranked(colour: Colour) -> list[int]:
        masks = [mask for (c, _), mask in by_group.items() if c is colour]
        masks.sort(key=lambda mm: (-popcount(mm), lowest_bit(mm)))
        return masks

    blue_groups, red_groups = ranked(BLUE), ranked(RED)

    factor_target = 3 * (1 + eps) * t
    lab_cache: dict[Colour, object] = {}
    for colour, group_list in ((RED, red_groups), (BLUE, blue_groups)):
        for mask in group_list:
            tris = greedy_triangle_packing(g, colour, mask)
            if 3 * len(tris) >= factor_target - 1e-9:
                if colour not in lab_cache:
                    lab_cache[colour] = triangle_components(g, colour)
                tf = TriangleFactor(colour, sorted(tris), None)
                try:
                    validate_triangle_factor(g, tf, labelling=lab_cache[colour])
                except AssertionError:
                    continue
                return RecoveryOutcome("factor", factor=tf)

    def nth(lst: list[int], i: int) -> int:
        return lst[i] if i < len(lst) else 0

    cores = {
        "B1": nth(blue_groups, 0), "B2": nth(blue_groups, 1),
        "R1": nth(red_groups, 0), "R2": nth(red_groups, 1),
        "Z": 0,
    }
    for mask in blue_groups[2:] + red_groups[2:]:
        cores["Z"] |= mask

    # orient the red classes so R1 is the one blue-linked to B1
    if _blue_link_fraction(g, cores["B1"], cores["R1"]) < \
            _blue_link_fraction(g, cores["B1"], cores["R2"]):
        cores["R1"], cores["R2"] = cores["R2"], cores["R1"]

    refined = _refine_classes(g, cores)
    part = ExtremalPartition(refined["B1"], refined["B2"], refined["R1"],
                             refined["R2"], refined["Z"], refined["T"])
    report = validate_extremal_partition(g, part, p)
    return RecoveryOutcome("partition", partition=part, report=report)
