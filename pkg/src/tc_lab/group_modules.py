"""Modules over integral group rings, free over Z with explicit bases.

Conventions
-----------
* a module over G x G is a bimodule via (g, h).m = g m h^-1;
* Hom_Z(A, B) has basis the matrix units E[b, a] (f(e_a) = e_b), ordered
  b * rank(A) + a, and (x.f) = rho_B(x) f rho_A(x^-1);
* A (x) B has basis pairs (a, b) ordered a * rank(B) + b with the diagonal
  action;
* the augmentation ideal has basis {g - 1 : g != e} in element order, and
  its tensor powers use lexicographic order on tuples of those.
"""

import itertools
import random

from .exact_linalg import IntMatrix, DimensionMismatch, hstack
from .finite_groups import GroupError, product, GroupHom


class ModuleError(ValueError):
    pass


class RankTooLarge(ModuleError):
    pass


class GroupMismatch(ModuleError):
    pass


class NotEquivariant(ModuleError):
    pass


MAX_RANK = 10 ** 4


def _sample_pairs(m, count, seed):
    rng = random.Random(seed)
    return [(rng.randrange(m), rng.randrange(m)) for _ in range(count)]


class GModule:
    """Z-free module with a group action by integer matrices.

    ``action[g]`` is the matrix of g.  ``char`` is 0 for integral
    coefficients or a prime p when cochains are to be read mod p.
    """

    def __init__(self, group, rank, action, labels=None, char=0, name=None, check=True):
        self.group = group
        self.rank = int(rank)
        self.action = list(action)
        self.labels = labels
        self.char = char
        self.name = name
        self._sp = {}
        if len(self.action) != group.order:
            raise ModuleError("need one action matrix per group element")
        for a in self.action:
            if a.shape != (self.rank, self.rank):
                raise DimensionMismatch("action matrix has shape %s" % (a.shape,))
        if check:
            self.check()

    def check(self):
        G = self.group
        m = G.order
        if self.action[G.identity] != IntMatrix.identity(self.rank):
            raise ModuleError("identity does not act trivially")
        if m <= 12:
            pairs = itertools.product(range(m), repeat=2)
        else:
            pairs = _sample_pairs(m, 40, 1234)
        t = G.table
        for a, b in pairs:
            if self.action[t[a][b]] != self.action[a] @ self.action[b]:
                raise ModuleError("action is not a homomorphism at (%d, %d)" % (a, b))
        # invertibility over Z is a consequence; assert it on the inverse table
        ident = IntMatrix.identity(self.rank)
        check_elems = range(m) if m <= 12 else sorted({a for a, _ in _sample_pairs(m, 10, 99)})
        for a in check_elems:
            if self.action[a] @ self.action[G.inverse[a]] != ident:
                raise ModuleError("action matrix of %d is not invertible" % a)

    def act(self, g, vec):
        return self.action[g].apply(vec)

    def act_sp(self, g):
        """Cached int64 sparse copy of the action of g."""
        a = self._sp.get(g)
        if a is None:
            a = self._sp[g] = self.action[g].to_scipy()
        return a

    def with_char(self, p):
        return GModule(self.group, self.rank, self.action, self.labels, char=p, name=self.name, check=False)

    def is_trivial_action(self):
        ident = IntMatrix.identity(self.rank)
        return all(a == ident for a in self.action)

    def invariants_rank(self):
        """rank of the fixed points, by averaging traces"""
        tr = sum(sum(a[i, i] for i in range(self.rank)) for a in self.action)
        return tr // self.group.order

    def __repr__(self):
        return "GModule(%s, rank=%d, |G|=%d)" % (self.name or "?", self.rank, self.group.order)


class ModuleMap:
    """Equivariant Z-linear map, matrix of shape (rank target, rank source)."""

    def __init__(self, source, target, matrix, check=True):
        if source.group is not target.group and source.group != target.group:
            raise GroupMismatch("modules over different groups")
        self.source = source
        self.target = target
        self.matrix = matrix
        if matrix.shape != (target.rank, source.rank):
            raise DimensionMismatch("map matrix shape %s, expected %s" % (matrix.shape, (target.rank, source.rank)))
        if check:
            self.check()

    def check(self):
        G = self.source.group
        elems = range(G.order) if G.order <= 12 else sorted({a for a, _ in _sample_pairs(G.order, 12, 7)})
        p = self.target.char
        for g in elems:
            diff = self.matrix @ self.source.action[g] - self.target.action[g] @ self.matrix
            if p:
                bad = any(v % p for _, _, v in diff.triples)
            else:
                bad = not diff.is_zero()
            if bad:
                raise NotEquivariant("map does not commute with the action of %d" % g)

    def __call__(self, vec):
        return self.matrix.apply(vec)

    def compose(self, other):
        """self after other"""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)


# ---------------------------------------------------------------------------
# basic modules

def trivial_module(G, rank=1, char=0):
    ident = IntMatrix.identity(rank)
    name = "Z" if char == 0 else "F%d" % char
    return GModule(G, rank, [ident] * G.order, char=char, name=name, check=False)


def character_module(G, signs, name="sign"):
    """Rank one module where g acts by signs[g] in {1, -1}."""
    return GModule(G, 1, [IntMatrix.from_dense([[s]]) for s in signs], name=name)


def sign_module_c2(G):
    """Nonidentity elements act by -1 (a module when G has order 2)."""
    return character_module(G, [1 if g == G.identity else -1 for g in range(G.order)])


def permutation_module(G, npoints, action_of, name=None, labels=None):
    """action_of(g, i) gives the image of basis point i."""
    mats = []
    for g in range(G.order):
        rows = {}
        for i in range(npoints):
            rows.setdefault(action_of(g, i), {})[i] = 1
        mats.append(IntMatrix(npoints, npoints, rows))
    return GModule(G, npoints, mats, labels=labels, name=name)


def regular_module(G):
    """Z[G] with left multiplication."""
    t = G.table
    return permutation_module(G, G.order, lambda g, a: t[g][a], name="Z[G]", labels=list(range(G.order)))


def group_ring_bimodule(G, GG=None):
    """Z[G] over G x G with (g, h).a = g a h^-1."""
    GG = GG or product(G, G)
    n = G.order
    t, inv = G.table, G.inverse
    M = permutation_module(GG, n, lambda x, a: t[t[x // n][a]][inv[x % n]],
                           name="Z[pi]", labels=list(range(n)))
    return M


def augmentation_ideal_of(P, base):
    """Kernel of the augmentation of a permutation module P on its points,
    with basis {a - base : a != base} in point order."""
    pts = [a for a in range(P.rank) if a != base]
    pos = {a: i for i, a in enumerate(pts)}
    r = len(pts)
    G = P.group
    mats = []
    for g in range(G.order):
        perm = P.action[g]
        T = perm.T
        img = {a: next(iter(T.row(a))) for a in range(P.rank)}
        rows = {}
        xb = img[base]
        for a in pts:
            xa = img[a]
            col = pos[a]
            if xa != base:
                rows.setdefault(pos[xa], {})
                rows[pos[xa]][col] = rows[pos[xa]].get(col, 0) + 1
            if xb != base:
                rows.setdefault(pos[xb], {})
                rows[pos[xb]][col] = rows[pos[xb]].get(col, 0) - 1
        mats.append(IntMatrix(r, r, rows))
    I = GModule(G, r, mats, labels=pts, name="I")
    incl_rows = {}
    for a in pts:
        incl_rows.setdefault(a, {})[pos[a]] = 1
        incl_rows.setdefault(base, {})[pos[a]] = -1
    incl = ModuleMap(I, P, IntMatrix(P.rank, r, incl_rows))
    Z = trivial_module(G)
    aug = ModuleMap(P, Z, IntMatrix(1, P.rank, {0: {a: 1 for a in range(P.rank)}}))
    return I, incl, aug


def augmentation_ideal(G, GG=None):
    """(I, incl, aug) for the bimodule Z[G] over G x G."""
    P = group_ring_bimodule(G, GG)
    return augmentation_ideal_of(P, G.identity)


def left_augmentation_ideal(G):
    """I as a G-module under left multiplication, with incl and aug."""
    return augmentation_ideal_of(regular_module(G), G.identity)


def tensor_modules(A, B, name=None):
    if A.group is not B.group and A.group != B.group:
        raise GroupMismatch("tensor of modules over different groups")
    if A.rank * B.rank > MAX_RANK * 10:
        raise RankTooLarge("tensor rank %d" % (A.rank * B.rank))
    mats = [A.action[g].kron(B.action[g]) for g in range(A.group.order)]
    char = A.char or B.char
    return GModule(A.group, A.rank * B.rank, mats, char=char,
                   name=name or "(%s)(x)(%s)" % (A.name, B.name), check=False)


def tensor_power_diagonal(M, s):
    if s == 0:
        return trivial_module(M.group)
    if s == 1:
        return M
    if M.rank ** s > MAX_RANK:
        raise RankTooLarge("rank %d^%d exceeds %d" % (M.rank, s, MAX_RANK))
    out = M
    for _ in range(s - 1):
        out = tensor_modules(out, M)
    out.name = "%s^%d" % (M.name, s)
    return out


def hom_z_module(A, B, name=None):
    """Hom_Z(A, B) with (x.f) = rho_B(x) f rho_A(x^-1)."""
    if A.group is not B.group and A.group != B.group:
        raise GroupMismatch("Hom of modules over different groups")
    if A.rank * B.rank > MAX_RANK * 10:
        raise RankTooLarge("Hom rank %d" % (A.rank * B.rank))
    G = A.group
    mats = [B.action[g].kron(A.action[G.inverse[g]].T) for g in range(G.order)]
    return GModule(G, A.rank * B.rank, mats, char=B.char,
                   name=name or "Hom(%s,%s)" % (A.name, B.name), check=False)


def restrict_along(h, M):
    if M.group is not h.target and M.group != h.target:
        raise GroupMismatch("module group is not the target of the homomorphism")
    mats = [M.action[h.images[g]] for g in range(h.source.order)]
    return GModule(h.source, M.rank, mats, labels=M.labels, char=M.char, name=M.name, check=False)


def coinduced_from_class(G, C):
    """Functions on a conjugacy class C, (g.f)(h) = f(g^-1 h g).

    C may be a list of elements or a single representative."""
    if isinstance(C, int):
        C = G.conjugacy_class(C)
    C = sorted(C)
    if set(C) != set(G.conjugacy_class(C[0])):
        raise GroupError("not a full conjugacy class")
    pos = {c: i for i, c in enumerate(C)}
    return permutation_module(G, len(C), lambda g, i: pos[G.conj(g, C[i])],
                              name="Z^C", labels=C)


def dual_module(M):
    return hom_z_module(M, trivial_module(M.group))


# ---------------------------------------------------------------------------
# maps

def identity_map(M):
    return ModuleMap(M, M, IntMatrix.identity(M.rank), check=False)


def zero_map(A, B):
    return ModuleMap(A, B, IntMatrix.zeros(B.rank, A.rank), check=False)


def tensor_maps(f, g, src=None, tgt=None):
    """f (x) g between tensor modules."""
    src = src or tensor_modules(f.source, g.source)
    tgt = tgt or tensor_modules(f.target, g.target)
    return ModuleMap(src, tgt, f.matrix.kron(g.matrix), check=False)


def hom_precompose(f, A, src=None, tgt=None):
    """Hom(Y, A) -> Hom(X, A), F -> F o f, for f: X -> Y."""
    X, Y = f.source, f.target
    src = src or hom_z_module(Y, A)
    tgt = tgt or hom_z_module(X, A)
    mat = IntMatrix.identity(A.rank).kron(f.matrix.T)
    return ModuleMap(src, tgt, mat, check=False)


def hom_postcompose(X, g, src=None, tgt=None):
    """Hom(X, A) -> Hom(X, B), F -> g o F, for g: A -> B."""
    src = src or hom_z_module(X, g.source)
    tgt = tgt or hom_z_module(X, g.target)
    mat = g.matrix.kron(IntMatrix.identity(X.rank))
    return ModuleMap(src, tgt, mat, check=False)


def evaluation_map(I, A, s, src=None, tgt=None):
    """ev: I (x) Hom(I^(s+1), A) -> Hom(I^s, A),
    x0 (x) f -> (x1 ... xs -> f(x0 x1 ... xs))."""
    r = I.rank
    Is = tensor_power_diagonal(I, s)
    Is1 = tensor_power_diagonal(I, s + 1)
    H1 = hom_z_module(Is1, A)
    src = src or tensor_modules(I, H1)
    tgt = tgt or hom_z_module(Is, A)
    rs = r ** s
    rows = {}
    n1 = Is1.rank
    for i in range(r):
        for alpha in range(A.rank):
            for rest in range(rs):
                J = i * rs + rest
                col = i * H1.rank + alpha * n1 + J
                row = alpha * rs + rest
                rows.setdefault(row, {})[col] = 1
    return ModuleMap(src, tgt, IntMatrix(tgt.rank, src.rank, rows), check=False)


def _reverse_index(idx, r, k):
    digits = []
    for _ in range(k):
        digits.append(idx % r)
        idx //= r
    # digits are least significant first, i.e. already reversed
    out = 0
    for d in digits:
        out = out * r + d
    return out


def pairing_psi(I, A, k, src=None, tgt=None):
    """psi: I^k (x) Hom(I^k, A) -> A, x1..xk (x) f -> f(xk ... x1)."""
    r = I.rank
    Ik = tensor_power_diagonal(I, k)
    H = hom_z_module(Ik, A)
    src = src or tensor_modules(Ik, H)
    tgt = tgt or A
    n = Ik.rank
    rows = {}
    for v in range(n):
        J = _reverse_index(v, r, k)
        for alpha in range(A.rank):
            col = v * H.rank + alpha * n + J
            rows.setdefault(alpha, {})[col] = 1
    return ModuleMap(src, tgt, IntMatrix(A.rank, src.rank, rows), check=False)


def module_from_json(obj, group):
    """{"rank": r, "action": {element: matrix}}; missing elements are
    generated from the given ones by multiplication."""
    r = int(obj["rank"])
    given = {int(k): IntMatrix.from_dense(v, ncols=r) for k, v in obj["action"].items()}
    G = group
    mats = {G.identity: IntMatrix.identity(r)}
    mats.update(given)
    frontier = list(mats)
    while frontier:
        new = []
        for a in frontier:
            for b in list(given):
                c = G.table[a][b]
                if c not in mats:
                    mats[c] = mats[a] @ given[b]
                    new.append(c)
        frontier = new
    if len(mats) != G.order:
        raise ModuleError("given matrices do not generate an action of the whole group")
    return GModule(G, r, [mats[g] for g in range(G.order)], name=obj.get("name", "custom"))
