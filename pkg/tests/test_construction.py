import pytest

from ramsq.bitset import bit, mask_of, popcount, to_list
from ramsq.core import BLUE, RED, EdgeState, from_cgr, to_cgr
from ramsq.construction import (
    CensusComponent,
    InteriorRule,
    Target,
    Variant,
    build_construction,
    census_matches,
    certify_no_mono_square,
    derive_partition,
    expected_census,
    expected_red_census,
    hitting_set_triangle_bound,
    target_order_and_alpha,
)
from ramsq.errors import BoundNotApplicable, CertificateRefused
from ramsq.powers import independence_number, square_cycle, square_path
from ramsq.triangles import max_triangle_factor_exact, triangle_components


def test_sizes_base_and_plus2():
    g, p = build_construction(2, "base", "all-red")
    assert g.n == 14
    assert [popcount(m) for m in (p.X1, p.X2, p.Y1, p.Y2, p.Z)] == [3, 3, 3, 3, 1]
    g, p = build_construction(2, "plus2", "all-red")
    assert g.n == 18 and popcount(p.X1) == 4
    g, p = build_construction(3, "base", "all-blue")
    assert g.n == 23
    with pytest.raises(ValueError):
        build_construction(1)


def test_fixed_pair_colours():
    g, p = build_construction(3, "base", "all-blue")
    x1, x2 = to_list(p.X1)[0], to_list(p.X2)[0]
    y1, y2 = to_list(p.Y1)[0], to_list(p.Y2)[0]
    assert g.edge_state(y1, y2) is EdgeState.BLUE
    assert g.edge_state(x1, x2) is EdgeState.RED
    assert g.edge_state(x1, y1) is EdgeState.BLUE
    assert g.edge_state(x1, y2) is EdgeState.RED
    # hub: blue to X parts, red to Y parts
    assert g.edge_state(p.z, x1) is EdgeState.BLUE
    assert g.edge_state(p.z, y1) is EdgeState.RED
    # all of X1 is blue to the hub (blue neighbourhood covers X1)
    assert g.colour_neighbourhood(p.z, BLUE, within=p.X1) == p.X1


def test_interior_rules():
    g, p = build_construction(3, "base", "all-red")
    zs = to_list(p.Z)
    assert g.edge_state(zs[0], zs[1]) is EdgeState.RED
    assert g.edge_state(p.z, zs[0]) is EdgeState.RED
    g, p = build_construction(3, "base", "all-blue")
    assert g.edge_state(p.z, to_list(p.Z)[0]) is EdgeState.BLUE
    g1, _ = build_construction(3, "base", "seed:9")
    g2, _ = build_construction(3, "base", "seed:9")
    assert g1 == g2
    with pytest.raises(ValueError):
        InteriorRule.parse("sometimes-red")


def test_red_census_counts():
    # interior all-red at n=3: three red components (hub edges join the core)
    comps = expected_red_census(3, "base", "all-red")
    assert [c.kind for c in comps] == ["side1", "side2", "core"]
    # interior all-blue: still three red components, core without interior pairs
    comps = expected_red_census(3, "base", "all-blue")
    assert [c.kind for c in comps] == ["side1", "side2", "core"]
    # n=2, all-red: |Z| = 1 so the hub-to-Z red pair sits in no red triangle
    comps = expected_red_census(2, "base", "all-red")
    assert [c.kind for c in comps] == ["side1", "side2", "core", "singleton"]


def test_census_equals_union_find():
    for n in (2, 3, 4, 6):
        for interior in ("all-red", "all-blue", "seed:5"):
            for variant in ("base", "plus2"):
                g, p = build_construction(n, variant, interior)
                for colour in (RED, BLUE):
                    assert census_matches(g, p, colour), (n, variant, interior, colour)


def test_certificates_accept():
    for n in (2, 3, 7):
        for interior in ("all-red", "all-blue"):
            gb, pb = build_construction(n, "base", interior)
            assert certify_no_mono_square(gb, pb, Target.P3N).accepted
            assert certify_no_mono_square(gb, pb, "c3n").accepted
            gp, pp = build_construction(n, "plus2", interior)
            assert certify_no_mono_square(gp, pp, Target.P3N2).accepted


def test_certificate_wrong_variant_refused():
    g, p = build_construction(3, "base", "all-red")
    with pytest.raises(CertificateRefused):
        certify_no_mono_square(g, p, Target.P3N2)
    g, p = build_construction(3, "plus2", "all-red")
    with pytest.raises(CertificateRefused):
        certify_no_mono_square(g, p, Target.P3N)


def test_certificate_refuses_tampering():
    g, p = build_construction(3, "base", "all-red")
    y1, zz = to_list(p.Y1)[0], to_list(p.Z)[0]
    g.set_edge(y1, zz, RED)
    with pytest.raises(CertificateRefused):
        certify_no_mono_square(g, p, Target.P3N)


def test_interior_recolouring_is_allowed():
    # interior pairs are free: certification still accepts after flips there
    g, p = build_construction(4, "base", "all-red")
    zs = to_list(p.Z)
    g.set_edge(zs[0], zs[1], BLUE)
    g.set_edge(p.z, zs[2], BLUE)
    cert = certify_no_mono_square(g, p, Target.P3N)
    assert cert.accepted


def test_derive_partition_round_trip():
    g, p = build_construction(5, "plus2", "all-blue")
    g2 = from_cgr(to_cgr(g))
    p2 = derive_partition(g2, 5)
    assert p2.variant is Variant.PLUS2
    assert (p2.X1, p2.X2, p2.Y1, p2.Y2, p2.Z, p2.z) == (p.X1, p.X2, p.Y1, p.Y2, p.Z, p.z)
    with pytest.raises(CertificateRefused):
        derive_partition(g2, 4)


def test_hitting_set_bounds():
    g, p = build_construction(3, "base", "all-red")
    comps = expected_census(g, p, RED, with_edges=False)
    side1 = next(c for c in comps if c.kind == "side1")
    core = next(c for c in comps if c.kind == "core")
    assert hitting_set_triangle_bound(g, RED, side1.support, side1.hitting_set) == 2
    assert hitting_set_triangle_bound(g, RED, core.support, core.hitting_set) == 2
    # exact packing oracle never beats the bound
    lab = triangle_components(g, RED)
    for comp in comps:
        cid = lab.component_of(*_an_edge_of(g, RED, comp))
        exact = max_triangle_factor_exact(g, RED, cid, labelling=lab)
        bound = hitting_set_triangle_bound(g, RED, comp.support, comp.hitting_set)
        assert len(exact) <= bound
    # empty hitting set on a component with a triangle: no rule applies
    with pytest.raises(BoundNotApplicable):
        hitting_set_triangle_bound(g, RED, side1.support, 0)


def _an_edge_of(g, colour, comp: CensusComponent):
    vs = to_list(comp.support)
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            if g.edge_state(u, v).colour is colour:
                if comp.kind != "core" or not (bit(u) | bit(v)) & ~comp.support:
                    return (u, v)
    raise AssertionError("census component without an edge")


def test_core_bound_at_n4():
    g, p = build_construction(4, "base", "all-red")
    comps = expected_census(g, p, RED, with_edges=False)
    core = next(c for c in comps if c.kind == "core")
    assert hitting_set_triangle_bound(g, RED, core.support, core.hitting_set) == 3


def test_target_alpha_against_exact():
    for n in (2, 3, 4):
        for target in (Target.P3N, Target.P3N2, Target.C3N):
            order, alpha = target_order_and_alpha(target, n)
            h = square_cycle(order) if target is Target.C3N else square_path(order)
            assert h.n == order
            if order <= 14:
                assert independence_number(h) == alpha


def test_certificate_vs_exhaustive_search():
    from ramsq.search import contains_mono_subgraph
    g, p = build_construction(2, "base", "all-red")
    assert certify_no_mono_square(g, p, Target.P3N).accepted
    for colour in (RED, BLUE):
        assert contains_mono_subgraph(g, colour, square_path(6)) is False


def test_r_pair_examples_on_construction():
    from ramsq.core import is_r_blue_pair
    g, p = build_construction(3, "base", "all-red")
    assert is_r_blue_pair(g, p.Y1, p.Y2, 0)
    assert not is_r_blue_pair(g, p.X1, p.X2, 0)
