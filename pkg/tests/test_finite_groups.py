import itertools
import random

import pytest

from tc_lab.finite_groups import (
    GroupTable, parse_group, named_group, product, cyclic_group, symmetric_group,
    tuple_conjugacy_classes, centralizer, subgroup, diagonal, left_inclusion,
    GroupHom, GroupError, UnknownFamily,
)

SHIPPED = ["trivial", "c2", "c3", "c4", "c5", "c6", "klein", "s3", "d4", "q8"]


def is_isomorphic_brute(G, H):
    if G.order != H.order:
        return False
    # cyclic targets only: compare element order censuses and cyclicity
    og = sorted(G.element_order(a) for a in range(G.order))
    oh = sorted(H.element_order(a) for a in range(H.order))
    return og == oh


def test_named_examples():
    T = named_group("cyclic", 1)
    assert T.order == 1
    C2 = named_group("cyclic", 2)
    g = C2.nonidentity()[0]
    assert C2.inverse[g] == g
    S3 = named_group("symmetric", 3)
    assert S3.order == 6
    assert sum(1 for a in range(6) if S3.element_order(a) == 2) == 3
    with pytest.raises(UnknownFamily):
        parse_group("z7")


def test_products():
    C3 = cyclic_group(3)
    assert product(cyclic_group(1), C3).order == 3
    V = product(cyclic_group(2), cyclic_group(2))
    assert all(V.element_order(a) == 2 for a in V.nonidentity())
    C6 = product(cyclic_group(2), cyclic_group(3))
    assert any(C6.element_order(a) == 6 for a in range(6))
    assert is_isomorphic_brute(C6, cyclic_group(6))


@pytest.mark.parametrize("name", SHIPPED)
def test_group_axioms(name):
    G = parse_group(name)
    t = G.table
    m = G.order
    for row in t:
        assert sorted(row) == list(range(m))
    for a, b, c in itertools.product(range(m), repeat=3):
        assert t[t[a][b]][c] == t[a][t[b][c]]
    for a in range(m):
        assert t[a][G.inverse[a]] == G.identity


def test_non_associative_table_rejected():
    bad = [[0, 1, 2], [1, 0, 2], [2, 2, 0]]
    with pytest.raises(GroupError):
        GroupTable(bad)


def test_homs():
    G = symmetric_group(3)
    K = product(G, G)
    for h in (diagonal(G, K), left_inclusion(G, K)):
        for a in range(6):
            for b in range(6):
                assert h.images[G.table[a][b]] == K.table[h.images[a]][h.images[b]]
    with pytest.raises(GroupError):
        GroupHom(cyclic_group(2), cyclic_group(3), [0, 1])


def test_tuple_orbit_examples():
    orbs = tuple_conjugacy_classes(cyclic_group(2), 1)
    assert len(orbs) == 1 and len(orbs[0].stabilizer) == 2
    S3 = symmetric_group(3)
    orbs = tuple_conjugacy_classes(S3, 1)
    assert sorted(len(o.stabilizer) for o in orbs) == [2, 3]
    assert len(tuple_conjugacy_classes(S3, 2)) == 6


def test_centralizers():
    S3 = symmetric_group(3)
    assert centralizer(S3, S3.identity) == list(range(6))
    for a in S3.nonidentity():
        want = 2 if S3.element_order(a) == 2 else 3
        assert len(centralizer(S3, a)) == want


@pytest.mark.parametrize("name", ["c2", "c3", "c4", "klein", "s3", "d4", "q8"])
@pytest.mark.parametrize("s", [1, 2, 3])
def test_orbit_stabilizer(name, s):
    G = parse_group(name)
    if (G.order - 1) ** s > 400:
        pytest.skip("large tuple space")
    seen = set()
    for o in tuple_conjugacy_classes(G, s):
        assert len(o.members) * len(o.stabilizer) == G.order
        assert o.rep == min(o.members)
        # stabilizer is the joint centralizer
        joint = set(range(G.order))
        for x in o.rep:
            joint &= set(centralizer(G, x))
        assert sorted(joint) == o.stabilizer
        seen.update(o.members)
    assert len(seen) == (G.order - 1) ** s


def test_abelian_singletons():
    G = product(cyclic_group(2), cyclic_group(3))
    for o in tuple_conjugacy_classes(G, 1):
        assert len(o.members) == 1 and len(o.stabilizer) == G.order


def relabel(G, perm):
    m = G.order
    table = [[0] * m for _ in range(m)]
    for a in range(m):
        for b in range(m):
            table[perm[a]][perm[b]] = perm[G.table[a][b]]
    return GroupTable(table)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_orbits_independent_of_labels(seed):
    G = symmetric_group(3)
    perm = list(range(6))
    random.Random(seed).shuffle(perm)
    H = relabel(G, perm)
    inv = {p: i for i, p in enumerate(perm)}
    for s in (1, 2):
        a = {frozenset(o.members) for o in tuple_conjugacy_classes(G, s)}
        b = {frozenset(tuple(inv[x] for x in t) for t in o.members) for o in tuple_conjugacy_classes(H, s)}
        assert a == b


def test_subgroup():
    G = symmetric_group(3)
    H, inc = subgroup(G, centralizer(G, G.nonidentity()[0]))
    assert H.order in (2, 3)
    t1, t2 = [a for a in G.nonidentity() if G.element_order(a) == 2][:2]
    with pytest.raises(GroupError):
        subgroup(G, [G.identity, t1, t2])
