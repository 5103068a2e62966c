import random

import pytest

from tc_lab import homological_core as hc
from tc_lab import obstruction_engine as oe
from tc_lab.canonical_class import context, canonical_cocycle, equivariant_maps
from tc_lab.finite_groups import parse_group, cyclic_group
from tc_lab.group_modules import trivial_module


def test_page_zero_identities():
    G = parse_group("c2")
    ctx = context(G)
    page = oe.build_couple(G, ctx.ZK, 2)
    c = page.couple
    for n in range(3):
        direct = hc.cohomology(ctx.K, ctx.ZK, n, c.R).group.invariants
        assert page.D[(n, 0)].group.invariants == direct
    # D^{0,n} = Hom_K(I^n, Z); over C2 the sign action on I^n is (-1)^n
    for n in (1, 2):
        rank = len(equivariant_maps(ctx.power_K(n), ctx.ZK))
        assert rank == 1 - n % 2
        assert page.D[(0, n)].group.invariants == [0] * rank
    assert page.D[(0, 0)].group.invariants == [0]


def test_e0_row_one_matches_group_cohomology():
    G = parse_group("c2")
    ctx = context(G)
    page = oe.build_couple(G, ctx.ZK, 2)
    for r in range(2):
        want = hc.cohomology(G, trivial_module(G), r).group.invariants
        assert page.E[(r, 1)].group.invariants == want


@pytest.mark.parametrize("name", ["c2", "c3"])
@pytest.mark.parametrize("coeff", ["Z", "F2", "I"])
def test_e0_oracle_agreement(name, coeff):
    G = parse_group(name)
    ctx = context(G)
    A = {"Z": ctx.ZK, "F2": trivial_module(ctx.K, char=2), "I": ctx.I}[coeff]
    for s in (1, 2):
        for r in (0, 1, 2):
            grp, factors = oe.e0_oracle(G, A, r, s)
            assert sorted(oe.e0_direct(G, A, r, s)) == sorted(grp.invariants), (s, r)


def test_e0_oracle_examples():
    C2, S3 = parse_group("c2"), parse_group("s3")
    grp, factors = oe.e0_oracle(C2, context(C2).ZK, 2, 1)
    assert grp.invariants == [2] and len(factors) == 1 and factors[0]["centralizer_order"] == 2
    grp, factors = oe.e0_oracle(S3, context(S3).ZK, 2, 1)
    assert grp.invariants == [6]
    assert sorted(f["centralizer_order"] for f in factors) == [2, 3]
    grp, factors = oe.e0_oracle(S3, context(S3).ZK, 0, 1)
    assert grp.invariants == [0, 0]


@pytest.mark.parametrize("name,coeff", [("c2", "Z"), ("c2", "I"), ("c3", "I")])
def test_pages_exact_and_degrees(name, coeff):
    G = parse_group(name)
    ctx = context(G)
    A = ctx.ZK if coeff == "Z" else ctx.I
    pg = oe.pages(G, A, 2)
    for p, page in enumerate(pg):
        assert page.p == p
        assert page.check_exactness() and page.check_degrees()
    for a, b in zip(pg, pg[1:]):
        assert a.homology_matches(b)
    assert oe.degree_of("j", 2) == (-2, 2) and oe.degree_of("d", 1) == (-1, 2)


def test_zero_differential_keeps_e():
    G = parse_group("c2")
    pg = oe.pages(G, context(G).ZK, 2)
    for (r, s), d in pg[0].d.items():
        if d.matrix.is_zero() and (r, s) in pg[1].E:
            src = (r + 0, s - 1)
            if src in pg[0].d and not pg[0].d[src].matrix.is_zero():
                continue
            assert pg[1].E[(r, s)].group.invariants == pg[0].E[(r, s)].group.invariants


def _zero_divisor_count(G, A, n):
    H = hc.cohomology(context(G).K, A, n)
    return sum(1 for u in H.elements() if oe.is_zero_divisor(G, u))


@pytest.mark.parametrize("name", ["c2", "c3"])
def test_d1_is_zero_divisors(name):
    G = parse_group(name)
    ctx = context(G)
    pg = oe.pages(G, ctx.I, 1)
    D1 = pg[1].D[(1, 0)].group
    order = 1
    for d in D1.invariants:
        assert d != 0
        order *= d
    assert order == _zero_divisor_count(G, ctx.I, 1)


@pytest.mark.parametrize("name", ["c2", "c3"])
@pytest.mark.parametrize("coeff", ["Z", "I"])
def test_degree_one_essential_iff_zero_divisor(name, coeff):
    G = parse_group(name)
    ctx = context(G)
    A = ctx.ZK if coeff == "Z" else ctx.I
    pg = oe.pages(G, A, 1)
    H = hc.cochain_complex(pg[0].couple.R, A).cohomology(1)
    for u in H.elements():
        rep = oe.obstruction_sequence(G, u, pg)
        assert rep.essential == rep.zero_divisor


def test_v_is_essential_with_identity_certificate():
    G = parse_group("c2")
    ctx = context(G)
    v = canonical_cocycle(G).v
    rep = oe.obstruction_sequence(G, v, oe.pages(G, ctx.I, 1))
    assert rep.verdict == "essential"
    assert rep.certificate.matrix.to_dense() == [[1]]
    js = rep.to_json()
    assert js["class"] == [1] and js["obstructions"][0]["bidegree"] == [1, 0]


def test_zero_class_essential_with_zero_certificate():
    G = parse_group("c3")
    ctx = context(G)
    pg = oe.pages(G, ctx.I, 2)
    H = hc.cochain_complex(pg[0].couple.R, ctx.I).cohomology(2)
    rep = oe.obstruction_sequence(G, H.zero(), pg)
    assert rep.essential and rep.certificate.matrix.is_zero()


def test_first_obstruction_independent_of_representative():
    G = parse_group("c3")
    ctx = context(G)
    pg = oe.pages(G, ctx.I, 2)
    C = hc.cochain_complex(pg[0].couple.R, ctx.I)
    rng = random.Random(3)
    for u in C.cohomology(2).elements():
        base = oe.obstruction_sequence(G, u, pg)
        for _ in range(2):
            w = [rng.randint(-3, 3) for _ in range(C.dim(1))]
            shifted = hc.CohomologyClass(C, 2, [a + b for a, b in zip(u.vector, C.coboundary(1, w))])
            rep = oe.obstruction_sequence(G, shifted, pg)
            assert rep.verdict == base.verdict
            assert len(rep.obstructions) == len(base.obstructions)


def test_bockstein_paths():
    assert oe.global_sign() in (1, -1)
    G = parse_group("c2")
    ctx = context(G)
    c = oe.build_couple(G, ctx.ZK, 1).couple
    H0 = c.D[(0, 1)]
    zero = H0.zero()
    assert oe.bockstein_via_v(c, zero, 0).is_zero()
    c = oe.build_couple(G, ctx.I, 1).couple
    for u in c.D[(0, 1)].generators():
        oe.bockstein_via_v(c, u, 0)


def test_phi_isomorphism_examples():
    G = parse_group("c2")
    ctx = context(G)
    out = oe.phi_isomorphism(G, ctx.ZK, ctx.ZK)
    assert out["left_rank"] == out["right_rank"] == 1
    assert out["Phi"] == [[1]] or out["Phi"] == [[-1]]
    out = oe.phi_isomorphism(G, ctx.I, ctx.I)
    assert out["left_rank"] == out["right_rank"]


def test_gamma_examples():
    C2, C3 = parse_group("c2"), parse_group("c3")
    f = oe.gamma_isomorphism(C2, context(C2).ZK, 0)
    assert f.source.invariants == [0] and f.matrix.to_dense() in ([[1]], [[-1]])
    assert oe.gamma_isomorphism(C2, context(C2).I, 1).is_isomorphism()
    f = oe.gamma_isomorphism(C3, context(C3).ZK, 2)
    assert f.source.invariants == [3]


def test_tc_lower_bound():
    T = cyclic_group(1)
    out = oe.tc_lower_bound(T, context(T).ZK, 2)
    assert out["bound"] is None
    C2 = parse_group("c2")
    out1 = oe.tc_lower_bound(C2, context(C2).I, 1)
    assert out1["bound"] >= 2
    out2 = oe.tc_lower_bound(C2, context(C2).I, 2)
    assert out2["bound"] >= out1["bound"]
    assert "formal" in out2["note"]


def test_couple_survives_resolution_extension():
    # asking for a longer standard resolution replaces the cached one; a
    # couple built before must keep working against the new v
    G = parse_group("c2")
    ctx = context(G)
    pg = oe.pages(G, ctx.I, 1)
    hc.standard_resolution(ctx.K, pg[0].couple.R.d_max + 2)
    v = canonical_cocycle(G, pg[0].couple.R.d_max + 2).v
    assert v.resolution is not pg[0].couple.R
    rep = oe.obstruction_sequence(G, v, pg)
    assert rep.essential and rep.certificate.matrix.to_dense() == [[1]]
    for u in pg[0].couple.D[(0, 1)].generators():
        oe.bockstein_via_v(pg[0].couple, u, 0)
