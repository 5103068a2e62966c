"""Finite groups as multiplication tables.

Elements are indices 0..m-1.  Products are lexicographically indexed:
(g, h) in G x H gets index g*|H| + h.
"""

import hashlib
import itertools
import json
import random


class GroupError(ValueError):
    pass


class UnknownFamily(GroupError):
    pass


class OrderTooLarge(GroupError):
    pass


class TooManyTuples(GroupError):
    pass


MAX_ORDER = 64 * 64


class GroupTable:
    """Finite group from its multiplication table (table[a][b] = a*b)."""

    def __init__(self, table, name=None, check=True):
        self.table = [list(map(int, row)) for row in table]
        self.order = m = len(self.table)
        self.name = name
        # optional structure hints used to choose small resolutions
        self.factors = None
        self.cyclic_generator = None
        if m == 0:
            raise GroupError("empty table")
        ident = None
        for a in range(m):
            if self.table[a] == list(range(m)):
                ident = a
                break
        if ident is None:
            raise GroupError("no identity element")
        self.identity = ident
        inv = [None] * m
        for a in range(m):
            row = self.table[a]
            for b in range(m):
                if row[b] == ident:
                    inv[a] = b
                    break
        if any(x is None for x in inv):
            raise GroupError("missing inverse")
        self.inverse = inv
        if check:
            self._validate()
        self._hash = None

    def _validate(self):
        m = self.order
        t = self.table
        full = set(range(m))
        for row in t:
            if len(row) != m or set(row) != full:
                raise GroupError("table is not a Latin square")
        for j in range(m):
            if {t[i][j] for i in range(m)} != full:
                raise GroupError("table is not a Latin square")
        for a in range(m):
            if t[a][self.inverse[a]] != self.identity or t[self.inverse[a]][a] != self.identity:
                raise GroupError("inverse table inconsistent")
        if m <= 64:
            triples = itertools.product(range(m), repeat=3)
        else:
            rng = random.Random(20240917)
            triples = [(rng.randrange(m), rng.randrange(m), rng.randrange(m)) for _ in range(20000)]
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError("associativity fails at (%d, %d, %d)" % (a, b, c))

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def conj(self, g, x):
        """g x g^-1"""
        t = self.table
        return t[t[g][x]][self.inverse[g]]

    def prod(self, seq):
        x = self.identity
        for a in seq:
            x = self.table[x][a]
        return x

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def elements(self):
        return range(self.order)

    def nonidentity(self):
        return [a for a in range(self.order) if a != self.identity]

    def is_abelian(self):
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def conjugacy_class(self, x):
        return sorted({self.conj(g, x) for g in range(self.order)})

    def conjugacy_classes(self):
        seen = set()
        out = []
        for x in range(self.order):
            if x in seen:
                continue
            c = self.conjugacy_class(x)
            seen.update(c)
            out.append(c)
        return out

    def content_hash(self):
        if self._hash is None:
            blob = json.dumps(self.table, separators=(",", ":")).encode()
            self._hash = hashlib.sha256(blob).hexdigest()[:16]
        return self._hash

    def to_json(self):
        return {"order": self.order, "table": self.table}

    def __repr__(self):
        return "GroupTable(%s, order=%d)" % (self.name or "?", self.order)

    def __eq__(self, other):
        return isinstance(other, GroupTable) and self.table == other.table

    def __hash__(self):
        return hash(self.content_hash())


def group_from_json(obj):
    if not isinstance(obj, dict) or "table" not in obj:
        raise GroupError("group JSON needs a 'table' field")
    g = GroupTable(obj["table"])
    if "order" in obj and obj["order"] != g.order:
        raise GroupError("declared order %s does not match table" % obj["order"])
    return g


# ---------------------------------------------------------------------------
# named families

def cyclic_group(n):
    g = GroupTable([[(a + b) % n for b in range(n)] for a in range(n)], name="C%d" % n)
    if n > 1:
        g.cyclic_generator = 1
    return g


def _perm_group(perms, name):
    perms = sorted(perms)
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = [[index[tuple(p[x] for x in q)] for q in perms] for p in perms]
    return GroupTable(table, name=name)


def _closure(gens, n):
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = tuple(p[x] for x in g)
                if q not in seen:
                    seen.add(q)
                    new.append(q)
        frontier = new
    return seen


def symmetric_group(n):
    return _perm_group(list(itertools.permutations(range(n))), "S%d" % n)


def dihedral_group(n):
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return _perm_group(_closure([rot, ref], n), "D%d" % n)


def quaternion_group():
    # elements (sign, unit) with units 1, i, j, k
    units = ["1", "i", "j", "k"]
    mult = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, u) for s in (1, -1) for u in units]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = mult[(u1, u2)]
            row.append(index[(s * s1 * s2, u)])
        table.append(row)
    return GroupTable(table, name="Q8")


def product(G, H, check=True):
    """Direct product, (g, h) -> g*|H| + h."""
    m, n = G.order, H.order
    if m * n > MAX_ORDER:
        raise OrderTooLarge("product order %d exceeds %d" % (m * n, MAX_ORDER))
    tg, th = G.table, H.table
    table = [[tg[a // n][b // n] * n + th[a % n][b % n] for b in range(m * n)] for a in range(m * n)]
    P = GroupTable(table, name="%sx%s" % (G.name or "?", H.name or "?"), check=check and m * n <= 64)
    P.factors = (G, H)
    return P


def named_group(family, param=None):
    """Families: cyclic n, dihedral n (order 2n), symmetric 3, quaternion 8,
    trivial, klein, and 'AxB' products of names."""
    if param is None and isinstance(family, str):
        return parse_group(family)
    fam = family.lower()
    if fam in ("cyclic", "c"):
        if param < 1:
            raise GroupError("cyclic order must be positive")
        if param > 64:
            raise OrderTooLarge("cyclic order %d" % param)
        return cyclic_group(param)
    if fam in ("dihedral", "d"):
        if 2 * param > 64:
            raise OrderTooLarge("dihedral order %d" % (2 * param))
        if param < 3:
            raise GroupError("dihedral parameter must be at least 3")
        return dihedral_group(param)
    if fam in ("symmetric", "s"):
        if param not in (1, 2, 3, 4):
            raise OrderTooLarge("symmetric groups beyond S4 are not shipped")
        return symmetric_group(param)
    if fam in ("quaternion", "q"):
        if param != 8:
            raise UnknownFamily("only the quaternion group of order 8 is shipped")
        return quaternion_group()
    raise UnknownFamily("unknown group family %r" % family)


def parse_group(text):
    """Parse names like 'c2', 's3', 'd4', 'q8', 'trivial', 'klein', 'c2xc3'."""
    t = text.strip().lower()
    if "x" in t and t not in ("klein",):
        parts = t.split("x")
        G = parse_group(parts[0])
        for p in parts[1:]:
            G = product(G, parse_group(p))
        G.name = text
        return G
    if t in ("trivial", "1", "c1"):
        return cyclic_group(1)
    if t in ("klein", "v4"):
        return product(cyclic_group(2), cyclic_group(2))
    if t == "q8":
        return quaternion_group()
    fam = {"c": "cyclic", "d": "dihedral", "s": "symmetric"}.get(t[:1])
    if fam is None or not t[1:].isdigit():
        raise UnknownFamily("unknown group name %r" % text)
    return named_group(fam, int(t[1:]))


# ---------------------------------------------------------------------------
# homomorphisms

class GroupHom:
    def __init__(self, source, target, images, check=True):
        self.source = source
        self.target = target
        self.images = list(images)
        if len(self.images) != source.order:
            raise GroupError("image list has wrong length")
        if check:
            ts, tt = source.table, target.table
            im = self.images
            for a in range(source.order):
                for b in range(source.order):
                    if im[ts[a][b]] != tt[im[a]][im[b]]:
                        raise GroupError("not a homomorphism at (%d, %d)" % (a, b))

    def __call__(self, a):
        return self.images[a]

    def compose(self, other):
        """self after other"""
        return GroupHom(other.source, self.target, [self.images[x] for x in other.images], check=False)

    def is_injective(self):
        return len(set(self.images)) == len(self.images)


def identity_hom(G):
    return GroupHom(G, G, list(range(G.order)), check=False)


def diagonal(G, GG=None):
    GG = GG or product(G, G)
    n = G.order
    return GroupHom(G, GG, [g * n + g for g in range(n)])


def left_inclusion(G, GG=None):
    """g -> (g, e)"""
    GG = GG or product(G, G)
    n = G.order
    return GroupHom(G, GG, [g * n + G.identity for g in range(n)])


def right_inclusion(G, GG=None):
    GG = GG or product(G, G)
    n = G.order
    return GroupHom(G, GG, [G.identity * n + g for g in range(n)])


def difference_map(G, GG=None):
    """(x, y) -> x y^-1; a homomorphism only for abelian G."""
    GG = GG or product(G, G)
    n = G.order
    return GroupHom(GG, G, [G.table[a // n][G.inverse[a % n]] for a in range(n * n)])


def subgroup(G, elements):
    """Subgroup on a sorted element list: (GroupTable, inclusion hom)."""
    elems = sorted(elements)
    pos = {x: i for i, x in enumerate(elems)}
    t = G.table
    try:
        table = [[pos[t[a][b]] for b in elems] for a in elems]
    except KeyError:
        raise GroupError("element list is not closed under multiplication")
    H = GroupTable(table, name="sub(%s)" % (G.name or "?"))
    return H, GroupHom(H, G, elems)


# ---------------------------------------------------------------------------
# conjugation combinatorics

def centralizer(G, g):
    return sorted(h for h in range(G.order) if G.table[h][g] == G.table[g][h])


class TupleOrbit:
    def __init__(self, rep, members, stabilizer):
        self.arity = len(rep)
        self.rep = tuple(rep)
        self.members = members
        self.stabilizer = stabilizer

    def __repr__(self):
        return "TupleOrbit(rep=%s, size=%d, |N_C|=%d)" % (self.rep, len(self.members), len(self.stabilizer))


def tuple_conjugacy_classes(G, s, nontrivial_only=True):
    """Orbits of s-tuples under simultaneous conjugation.

    Representatives are lexicographically minimal; orbits are sorted by
    representative; the stabilizer is the joint centralizer.
    """
    pool = G.nonidentity() if nontrivial_only else list(range(G.order))
    if len(pool) ** s > 10 ** 6:
        raise TooManyTuples("%d^%d tuples" % (len(pool), s))
    seen = set()
    out = []
    conj = [[G.conj(g, x) for x in range(G.order)] for g in range(G.order)]
    for tup in itertools.product(pool, repeat=s):
        if tup in seen:
            continue
        orbit = sorted({tuple(conj[g][x] for x in tup) for g in range(G.order)})
        seen.update(orbit)
        stab = sorted(g for g in range(G.order) if all(conj[g][x] == x for x in tup))
        out.append(TupleOrbit(orbit[0], orbit, stab))
    out.sort(key=lambda o: o.rep)
    return out
