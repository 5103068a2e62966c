import itertools
import json
import logging

import pytest

from tc_lab import cache
from tc_lab import homological_core as hc
from tc_lab.canonical_class import canonical_cocycle, context, cup_power_v, equivariant_maps
from tc_lab.exact_linalg import IntMatrix
from tc_lab.finite_groups import parse_group, product, cyclic_group
from tc_lab.group_modules import (
    trivial_module, sign_module_c2, left_augmentation_ideal, GroupMismatch, ModuleMap,
)


def inv(G, A, r, R=None):
    return hc.cohomology(G, A, r, R).group.invariants


def test_cyclic_two_integral():
    G = cyclic_group(2)
    Z = trivial_module(G)
    assert [inv(G, Z, r) for r in range(5)] == [[0], [], [2], [], [2]]
    assert inv(G, sign_module_c2(G), 1) == [2]
    assert inv(G, sign_module_c2(G), 0) == []


def test_known_groups():
    # periodic groups have H^2 = abelianization dual, H^4 = Z/|G| for Q8, C_n
    cases = {"c3": ([3], [3]), "s3": ([2], [6]), "q8": ([2, 2], [8]), "klein": ([2, 2], [2, 2, 2])}
    for name, (h2, h4) in cases.items():
        G = parse_group(name)
        Z = trivial_module(G)
        assert sorted(inv(G, Z, 2)) == sorted(h2), name
        assert sorted(inv(G, Z, 4)) == sorted(h4), name


def test_out_of_range():
    G = cyclic_group(2)
    R = hc.bar_resolution(G, 2)
    with pytest.raises(hc.DegreeOutOfRange):
        hc.cohomology(G, trivial_module(G), 2, R)


@pytest.mark.parametrize("name", ["c2", "c3", "klein", "s3"])
def test_resolution_independence(name):
    G = parse_group(name)
    Z = trivial_module(G)
    I = left_augmentation_ideal(G)[0]
    builders = [hc.bar_resolution, hc.reduced_resolution, hc.splice_resolution, hc.standard_resolution]
    if G.order <= 3:
        builders.append(hc.homogeneous_resolution)
    if G.cyclic_generator is not None:
        builders.append(hc.periodic_resolution)
    d = 4 if G.order <= 4 else 3
    for A in (Z, I):
        ref = None
        for build in builders:
            R = build(G, d)
            R.check()
            got = [sorted(inv(G, A, r, R)) for r in range(d)]
            if ref is None:
                ref = got
            assert got == ref, build.__name__


def test_resolution_ranks():
    G = parse_group("s3")
    assert hc.bar_resolution(G, 3).ranks == [1, 5, 25, 125]
    assert hc.homogeneous_resolution(cyclic_group(2), 3).ranks == [1, 2, 4, 8]
    assert hc.splice_resolution(G, 2).ranks == [1, 5, 25]
    C2 = cyclic_group(2)
    P = hc.periodic_resolution(C2, 4)
    T = hc.tensor_resolutions(P, P)
    assert T.ranks == [n + 1 for n in range(5)]
    T.check()


def test_cup_unit_and_powers():
    G = cyclic_group(2)
    Z = trivial_module(G)
    one = hc.cohomology(G, Z, 0).generators()[0]
    u = hc.cohomology(G, Z, 2).generators()[0]
    assert hc.cup_product(one, u).coords() == u.coords()
    assert hc.cup_product(u, u).coords() == [1]
    assert hc.cup_power(u, 2).coords() == [1]
    t = hc.cohomology(G, trivial_module(G, char=2), 1).generators()[0]
    assert not hc.cup_product(t, t).is_zero()


def test_graded_commutativity_odd():
    # over F3 odd classes anticommute, so t^2 = 0 and ab = -ba != 0
    C3 = cyclic_group(3)
    t = hc.cohomology(C3, trivial_module(C3, char=3), 1).generators()[0]
    assert hc.cup_product(t, t).is_zero()
    K = product(C3, C3)
    gens = hc.cohomology(K, trivial_module(K, char=3), 1).generators()
    a, b = gens[0], gens[1]
    ab, ba = hc.cup_product(a, b), hc.cup_product(b, a)
    assert any(ab.coords())
    # the two products use distinct (equal) tensor modules, so compare coordinates
    assert all((x + y) % 3 == 0 for x, y in zip(ab.coords(), ba.coords()))


def test_graded_commutativity_even():
    G = parse_group("klein")
    Z = trivial_module(G)
    R = hc.standard_resolution(G, 6)
    for u in hc.cohomology(G, Z, 2, R).generators():
        for v in hc.cohomology(G, Z, 3, R).generators():
            assert hc.cup_product(u, v).coords() == hc.cup_product(v, u).coords()


def test_class_arithmetic():
    G = cyclic_group(3)
    u = hc.cohomology(G, trivial_module(G), 2).generators()[0]
    assert (u + u + u).is_zero()
    assert (-u).coords() == [2]
    assert u.scale(4) == u
    v = hc.cohomology(cyclic_group(2), trivial_module(cyclic_group(2)), 2).generators()[0]
    with pytest.raises(GroupMismatch):
        u + v


@pytest.mark.parametrize("name", ["c2", "c3", "s3"])
def test_connecting_hom_and_extension_class(name):
    G = parse_group(name)
    ctx = context(G)
    v = canonical_cocycle(G).v
    R = v.resolution
    seq = hc.bimodule_sequence(G, ctx.K)
    one = hc.cochain_complex(R, seq.M).cohomology(0).generators()[0]
    assert hc.connecting_hom(seq, one).vector == v.vector
    ext = hc.class_of_exact_sequence([seq.iota, seq.pi], R=R)
    assert ext.coords() == v.coords()


def test_restriction_transport():
    S3 = parse_group("s3")
    Z = trivial_module(S3)
    u = hc.cohomology(S3, Z, 4).generators()[0]
    R = hc.bar_resolution(S3, 5)
    w = hc.transport(u, R)
    assert sorted(w.complex.cohomology(4).group.invariants) == [6]
    assert not w.is_zero()


def test_splice_sequence_ranks():
    G = cyclic_group(3)
    seq = hc.splice_sequence(G, 1)
    assert (seq.N.rank, seq.L.rank, seq.M.rank) == (4, 6, 2)


@pytest.mark.parametrize("flavor", ["bar", "reduced"])
def test_cache_round_trip(tmp_path, flavor):
    G = parse_group("s3")
    R = {"bar": hc.bar_resolution, "reduced": hc.reduced_resolution}[flavor](G, 3)
    path = cache.store(R, str(tmp_path))
    back = cache.load(G, flavor, 3, str(tmp_path))
    assert back.ranks == R.ranks and back.bd == R.bd and back.aug == R.aug
    assert cache.cache_key(G, flavor, 3) != cache.cache_key(G, flavor, 4)
    assert cache.load(G, flavor, 4, str(tmp_path)) is None
    assert path.endswith(".json")


def test_cache_corrupt_file_warns(tmp_path, caplog):
    G = parse_group("s3")
    path = cache.cache_path(G, "reduced", 3, str(tmp_path))
    with open(path, "w") as fh:
        fh.write("{not json")
    with caplog.at_level(logging.WARNING):
        R = cache.load_or_build(G, "reduced", 3, lambda: hc.reduced_resolution(G, 3), str(tmp_path))
    assert "corrupt" in caplog.text
    assert R.ranks[:4] == [1, 2, 2, 2]
    with open(path) as fh:
        assert json.load(fh)["group"] == G.content_hash()


def test_cache_off_without_env(monkeypatch, tmp_path):
    monkeypatch.delenv(cache.ENV_VAR, raising=False)
    assert cache.cache_dir() is None
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path))
    assert cache.cache_dir() == str(tmp_path)


@pytest.mark.parametrize("name", ["c2", "c3"])
def test_cup_associative(name):
    G = parse_group(name)
    R = hc.standard_resolution(G, 6)
    for M in (trivial_module(G), trivial_module(G, char=G.order)):
        gens = [u for d in (1, 2) for u in hc.cohomology(G, M, d, R).generators()]
        for a, b, c in itertools.product(gens, repeat=3):
            if a.degree + b.degree + c.degree > 4:
                continue
            left = hc.cup_product(hc.cup_product(a, b), c)
            right = hc.cup_product(a, hc.cup_product(b, c))
            assert left.coords() == right.coords()


@pytest.mark.parametrize("name", ["c2", "c3"])
def test_connecting_hom_natural(name):
    # id (x) f maps I (x) I -> Z[G] (x) I -> I to itself for f in End_K(I)
    G = parse_group(name)
    ctx = context(G)
    seq = hc.tensor_sequence(hc.bimodule_sequence(G, ctx.K), ctx.I)
    R = canonical_cocycle(G).resolution
    r = ctx.I.rank
    for f in equivariant_maps(ctx.I, ctx.I):
        fM = ModuleMap(seq.M, seq.M, f)
        fN = ModuleMap(seq.N, seq.N, IntMatrix.identity(r).kron(f))
        for deg in (0, 1):
            for u in hc.cochain_complex(R, seq.M).cohomology(deg).generators():
                lhs = hc.connecting_hom(seq, hc.pushforward(fM, u))
                rhs = hc.pushforward(fN, hc.connecting_hom(seq, u))
                assert lhs == rhs


def _splice_maps(G, ctx, n):
    seqs = [hc.splice_sequence(G, s, ctx.K) for s in range(n)]
    maps = [seqs[n - 1].iota]
    for j in range(n - 1, 0, -1):
        maps.append(ModuleMap(seqs[j].L, seqs[j - 1].L, seqs[j - 1].iota.matrix @ seqs[j].pi.matrix))
    maps.append(seqs[0].pi)
    return maps


@pytest.mark.parametrize("name", ["c2", "c3"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_splice_class_is_cup_power(name, n):
    G = parse_group(name)
    ctx = context(G)
    vn = cup_power_v(G, n)
    c = hc.class_of_exact_sequence(_splice_maps(G, ctx, n), R=vn.resolution)
    # same coefficient module up to object identity; compare in vn's complex
    assert hc.CohomologyClass(vn.complex, n, c.vector) == vn


@pytest.mark.parametrize("name", ["c2", "c3", "s3"])
def test_v_vanishes_on_diagonal_homogeneous(name):
    G = parse_group(name)
    ctx = context(G)
    B = canonical_cocycle(G)
    for a in range(G.order):
        for b in range(G.order):
            x, y = ctx.diag.images[a], ctx.diag.images[b]
            assert not any(B.homogeneous_value((x, y)))
