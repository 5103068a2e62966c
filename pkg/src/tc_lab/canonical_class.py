"""The canonical class v in H^1(G x G, I), the class b in H^1(G, I), their
powers, the kappa chain maps into the splice sequence, and the
correspondence alpha = mu_*(b^n).

Bar symbols over K = G x G are tuples of element indices of K, where
(g, h) has index g * |G| + h.  The cocycle of v sends [(g, h)] to
g h^-1 - 1.  Powers use I^n = I (x) I^(n-1) with the first factor most
significant, matching ``cup_product``.
"""

import itertools

from .exact_linalg import IntMatrix, Solver, kernel_basis, hermite_rows
from .finite_groups import product, left_inclusion, diagonal, GroupHom
from .group_modules import (augmentation_ideal, left_augmentation_ideal, tensor_modules,
                            trivial_module, ModuleMap, GroupMismatch)
from .homological_core import (standard_resolution, cochain_complex, CohomologyClass,
                               cochain_from_bar, bar_values, cup_product, restriction,
                               transport, splice_resolution, homogeneous_resolution,
                               pushforward as _pushforward)

MAX_POWER_RANK = 4096


class TooLarge(ValueError):
    pass


class CrossCheckFailed(AssertionError):
    pass


class ChainMapCheckFailed(AssertionError):
    pass


class ConversionFailed(ValueError):
    pass


class GroupContext:
    """Shared objects for one group so that classes are comparable:
    K = G x G, I over K and over G, and their tensor powers."""

    def __init__(self, G):
        self.G = G
        self.K = product(G, G)
        self.I, self.incl, self.aug = augmentation_ideal(G, self.K)
        self.IG, self.inclG, self.augG = left_augmentation_ideal(G)
        self.ZK = trivial_module(self.K)
        self.ZG = trivial_module(G)
        self._powK = {0: self.ZK, 1: self.I}
        self._powG = {0: self.ZG, 1: self.IG}
        self.pos = {a: i for i, a in enumerate(self.I.labels)}
        self.left = left_inclusion(G, self.K)
        self.diag = diagonal(G, self.K)

    def power_K(self, n):
        return self._power(n, self._powK, self.I)

    def power_G(self, n):
        return self._power(n, self._powG, self.IG)

    def _power(self, n, store, I):
        got = store.get(n)
        if got is None:
            if I.rank ** n > MAX_POWER_RANK:
                raise TooLarge("I^%d has rank %d" % (n, I.rank ** n))
            got = store[n] = tensor_modules(I, self._power(n - 1, store, I), name="I^%d" % n)
        return got

    def diff(self, k):
        """(g, h) -> g h^-1"""
        n = self.G.order
        g, h = divmod(k, n)
        return self.G.table[g][self.G.inverse[h]]

    def element_vector(self, x):
        """x - 1 in the basis of I."""
        out = [0] * self.I.rank
        if x != self.G.identity:
            out[self.pos[x]] = 1
        return out

    def difference_vector(self, x, y):
        """x - y in the basis of I."""
        a = self.element_vector(x)
        b = self.element_vector(y)
        return [p - q for p, q in zip(a, b)]


_CONTEXTS = {}


def context(G):
    key = G.content_hash()
    got = _CONTEXTS.get(key)
    if got is None:
        got = _CONTEXTS[key] = GroupContext(G)
    return got


def _kron_vectors(vs):
    out = [1]
    for v in vs:
        out = [a * b for a in out for b in v]
    return out


def f_n_value(ctx, xs):
    """(x1 - x0) (x) ... (x) (xn - x_{n-1}) in I^n for group elements x_i."""
    return _kron_vectors([ctx.difference_vector(xs[i + 1], xs[i]) for i in range(len(xs) - 1)])


def bar_to_homogeneous_x(ctx, sym):
    """x_i = diff(y1 ... yi) for a bar symbol [y1|..|yn] over K."""
    K = ctx.K
    xs = [ctx.G.identity]
    acc = K.identity
    for y in sym:
        acc = K.table[acc][y]
        xs.append(ctx.diff(acc))
    return xs


class CanonicalClassBundle:
    def __init__(self, ctx, R):
        self.ctx = ctx
        self.G = ctx.G
        self.K = ctx.K
        self.I = ctx.I
        self.resolution = R
        self.v = CohomologyClass(cochain_complex(R, ctx.I), 1, cochain_from_bar(R, ctx.I, 1, self.bar_value))
        RG = standard_resolution(ctx.G, R.d_max)
        self.b = restriction(self.v, ctx.left, R=RG, module=ctx.IG)

    def bar_value(self, sym):
        (k,) = sym
        return self.ctx.element_vector(self.ctx.diff(k))

    def homogeneous_value(self, xs):
        """Value on a homogeneous symbol (k0, k1) of K."""
        k0, k1 = xs
        return self.ctx.difference_vector(self.ctx.diff(k1), self.ctx.diff(k0))

    def homogeneous_cochain(self, H=None):
        """Cocycle on the homogeneous resolution of K (degree 1 generators
        (e, y))."""
        H = H or homogeneous_resolution(self.K, 2)
        vec = []
        e = self.K.identity
        for (y,) in H.labels[1]:
            vec.extend(self.homogeneous_value((e, y)))
        return H, vec

    def comparison(self, H=None):
        """The homogeneous representative transported to the working
        resolution, with the equality of classes checked."""
        H, vec = self.homogeneous_cochain(H)
        hv = CohomologyClass(cochain_complex(H, self.I), 1, vec)
        back = transport(hv, self.resolution)
        if back != self.v:
            raise CrossCheckFailed("homogeneous and bar representatives disagree")
        return hv


_BUNDLES = {}


def canonical_cocycle(G, d_max=5, R=None):
    """Bundle for v and b on R (default: the standard resolution of G x G).

    Bundles are kept per resolution: the standard resolution is replaced
    when a larger degree is requested, and objects built on the old one
    (couples, say) must still find v there."""
    ctx = context(G)
    R = R or standard_resolution(ctx.K, d_max)
    key = (ctx.G.content_hash(), id(R))
    got = _BUNDLES.get(key)
    if got is None or got.resolution is not R:
        got = _BUNDLES[key] = CanonicalClassBundle(ctx, R)
    return got


def berstein_class(G, d_max=5):
    return canonical_cocycle(G, d_max).b


def direct_berstein_class(G, d_max=5):
    """b from the class of 0 -> I -> Z[G] -> Z -> 0 over Z[G] (oracle)."""
    from .homological_core import class_of_exact_sequence
    ctx = context(G)
    RG = standard_resolution(G, d_max)
    return class_of_exact_sequence([ctx.inclG, ctx.augG], R=RG)


def canonical_power(G, n, check=True):
    """v^n from the cocycle f_n, cross-checked against iterated cup products."""
    ctx = context(G)
    if (G.order - 1) ** n > MAX_POWER_RANK:
        raise TooLarge("(|G|-1)^n too large")
    B = canonical_cocycle(G, max(n + 1, 5))
    R = B.resolution
    In = ctx.power_K(n)
    if n == 0:
        vec = [R.aug[a] for a in range(R.ranks[0])]
        return CohomologyClass(cochain_complex(R, In), 0, vec)

    def fn(sym):
        return f_n_value(ctx, bar_to_homogeneous_x(ctx, sym))

    u = CohomologyClass(cochain_complex(R, In), n, cochain_from_bar(R, In, n, fn))
    if check and n >= 2:
        w = cup_power_v(G, n)
        if w.vector != u.vector and w != u:
            raise CrossCheckFailed("f_%d differs from the %d-fold cup product" % (n, n))
    return u


def cup_power_v(G, n):
    ctx = context(G)
    B = canonical_cocycle(G, max(n + 1, 5))
    out = B.v
    for k in range(2, n + 1):
        out = cup_product(B.v, out, target=ctx.power_K(k))
    return out


def b_power(G, n):
    ctx = context(G)
    B = canonical_cocycle(G, max(n + 1, 5))
    if n == 0:
        RG = B.b.resolution
        return CohomologyClass(cochain_complex(RG, ctx.ZG), 0, [RG.aug[a] for a in range(RG.ranks[0])])
    out = B.b
    for k in range(2, n + 1):
        out = cup_product(B.b, out, target=ctx.power_G(k))
    return out


# ---------------------------------------------------------------------------
# kappa

def _kappa_element(K_ctx, xs):
    """x0 (x) (x1 - x0) (x) ... as {tuple of G elements: coeff}."""
    terms = {(xs[0],): 1}
    for i in range(1, len(xs)):
        new = {}
        for t, c in terms.items():
            for g, s in ((xs[i], 1), (xs[i - 1], -1)):
                if xs[i] == xs[i - 1]:
                    continue
                key = t + (g,)
                new[key] = new.get(key, 0) + s * c
        terms = {k: v for k, v in new.items() if v}
    return terms


def _difference_tensor(xs):
    """(x1 - x0) (x) ... (x) (xn - x_{n-1}) expanded on group tuples."""
    terms = {(): 1}
    for i in range(1, len(xs)):
        if xs[i] == xs[i - 1]:
            return {}
        new = {}
        for t, c in terms.items():
            new[t + (xs[i],)] = new.get(t + (xs[i],), 0) + c
            new[t + (xs[i - 1],)] = new.get(t + (xs[i - 1],), 0) - c
        terms = {k: v for k, v in new.items() if v}
    return terms


def _splice_boundary(elem):
    """eps on the first tensor factor."""
    out = {}
    for t, c in elem.items():
        key = t[1:]
        out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def kappa_value(ctx, ks, j=None):
    """kappa_j on the homogeneous symbol (k0, .., kj) of K."""
    xs = [ctx.diff(k) for k in ks]
    return _kappa_element(ctx, xs)


def kappa_chain_map(G, n, samples=None, seed=0):
    """Check d_S kappa_j = kappa_{j-1} d for j < n and incl f_n = kappa_{n-1} d.

    All generators (e, y1, .., yj) are checked, or ``samples`` random ones
    per degree.  Returns a summary dict; raises ChainMapCheckFailed."""
    import random
    ctx = context(G)
    K = ctx.K
    e = K.identity
    rng = random.Random(seed)
    checked = {}
    for j in range(0, n + 1):
        if samples is None:
            gens = itertools.product(range(K.order), repeat=j)
        else:
            gens = (tuple(rng.randrange(K.order) for _ in range(j)) for _ in range(samples))
        count = 0
        for ys in gens:
            ks = (e,) + tuple(ys)
            if j == 0:
                # eps(kappa_0) = 1
                val = _kappa_element(ctx, [ctx.diff(ks[0])])
                if sum(val.values()) != 1:
                    raise ChainMapCheckFailed("augmentation of kappa_0")
                count += 1
                continue
            # kappa_{j-1}(d (k0..kj))
            rhs = {}
            for drop in range(j + 1):
                face = ks[:drop] + ks[drop + 1:]
                for t, c in kappa_value(ctx, face).items():
                    rhs[t] = rhs.get(t, 0) + (-1) ** drop * c
            rhs = {t: c for t, c in rhs.items() if c}
            if j < n:
                lhs = _splice_boundary(kappa_value(ctx, ks))
            else:
                # f_n(k0..kn) viewed in Z[pi]^(x n) through the inclusion
                lhs = _difference_tensor([ctx.diff(k) for k in ks])
            if lhs != rhs:
                raise ChainMapCheckFailed("kappa identity fails in degree %d at %s" % (j, ks))
            count += 1
        checked[j] = count
    return {"group": G.name, "n": n, "checked": checked}


# ---------------------------------------------------------------------------
# universality

def pushforward(m, u):
    if m.source.group != u.module.group:
        raise GroupMismatch("coefficient map over a different group")
    return _pushforward(m, u)


def equivariant_maps(X, A):
    """Z-basis (list of IntMatrix) of Hom_G(X, A)."""
    G = X.group
    rX, rA = X.rank, A.rank
    blocks = []
    for g in range(G.order):
        if g == G.identity:
            continue
        left = A.action[g].kron(IntMatrix.identity(rX))
        right = IntMatrix.identity(rA).kron(X.action[g].T)
        blocks.append(left - right)
    n = rA * rX
    p = A.char
    if not blocks:
        basis = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    else:
        from .exact_linalg import vstack, hstack
        E = vstack(blocks, n)
        if p:
            # equivariant mod p: E v in p Z
            E = hstack([E, IntMatrix.identity(E.nrows).scale(-p)])
        Kb = kernel_basis(E)
        Kb = Kb.submatrix(range(n), range(Kb.ncols))
        basis = []
        for c in range(Kb.ncols):
            col = Kb.col(c)
            basis.append([col.get(i, 0) for i in range(n)])
    basis = hermite_rows(basis, n)
    return [_vec_to_matrix(v, rA, rX) for v in basis]


def _vec_to_matrix(v, r, c):
    return IntMatrix.from_dense([v[i * c:(i + 1) * c] for i in range(r)], c) if r else IntMatrix.zeros(0, c)


def _matrix_to_vec(M):
    return [x for row in M.to_dense() for x in row]


def _lexmin_affine(base, lattice_rows, n, max_branch=64):
    """Lex-min of (|x_0|, |x_1|, ..) over base + span(lattice_rows)."""
    H = hermite_rows(lattice_rows, n)
    piv = []
    for r in H:
        c = next(i for i, x in enumerate(r) if x)
        piv.append(c)
    states = [list(base)]
    for r, c in zip(H, piv):
        d = r[c]
        new = []
        for x in states:
            q, rem = divmod(x[c], d)
            opts = {q}
            if 2 * rem > d:
                opts = {q + 1}
            elif 2 * rem == d:
                opts = {q, q + 1}
            for t in sorted(opts):
                new.append([a - t * b for a, b in zip(x, r)])
        new.sort(key=lambda y: [abs(a) for a in y])
        states = new[:max_branch]
    return min(states, key=lambda y: ([abs(a) for a in y], [-a for a in y]))


def universality_mu(G, alpha):
    """mu: I^n -> A with mu_*(b^n) = alpha, lexicographically least |entries|."""
    ctx = context(G)
    n = alpha.degree
    A = alpha.module
    if A.group != G:
        raise ConversionFailed("class is not over G")
    In = ctx.power_G(n)
    bn = b_power(G, n)
    R = bn.resolution
    target = transport(alpha, R) if alpha.resolution is not R else alpha
    # particular solution from the splice resolution
    S = splice_resolution(G, n + 1)
    fa = bar_values(alpha)
    vec = cochain_from_bar(S, A, n, fa)
    rIn = In.rank
    if S.ranks[n] != rIn:
        raise ConversionFailed("splice generators do not match I^n")
    cols = [vec[b * A.rank:(b + 1) * A.rank] for b in range(rIn)]
    mu0 = IntMatrix.from_columns([{i: x for i, x in enumerate(c) if x} for c in cols], A.rank) \
        if rIn else IntMatrix.zeros(A.rank, 0)
    m0 = ModuleMap(In, A, mu0, check=True)
    if pushforward(m0, bn) != target:
        raise ConversionFailed("splice correspondence did not reproduce the class")
    mu = solve_coefficient_map(bn, target, particular=mu0)
    if mu is None or pushforward(mu, bn) != target:
        raise ConversionFailed("lex-min representative failed verification")
    return mu


def solve_coefficient_map(c, alpha, particular=None):
    """Lex-min (by |entries|) equivariant mu: X -> A with mu_*(c) = alpha.

    ``c`` has coefficients X, ``alpha`` coefficients A, both on the same
    resolution.  Returns None when no such mu exists."""
    X, A = c.module, alpha.module
    if c.resolution is not alpha.resolution or c.degree != alpha.degree:
        raise GroupMismatch("classes must share resolution and degree")
    rX = X.rank
    basis = equivariant_maps(X, A)
    invs = alpha.complex.cohomology(alpha.degree).group.invariants
    images = [pushforward(ModuleMap(X, A, B, check=False), c).coords() for B in basis]
    k = len(invs)
    nb = len(basis)
    vecs = [_matrix_to_vec(B) for B in basis]
    n = A.rank * rX
    rel_cols = [{i: x for i, x in enumerate(images[j]) if x} for j in range(nb)]
    rel_cols += [{i: d} if d else {} for i, d in enumerate(invs)]
    Mrel = IntMatrix.from_columns(rel_cols, k) if k else IntMatrix.zeros(0, len(rel_cols))
    if particular is None:
        a = alpha.coords()
        if k:
            sol = Solver(Mrel).solve(a)
            if sol is None:
                return None
        else:
            sol = [0] * len(rel_cols)
        base = [0] * n
        for cf, v in zip(sol[:nb], vecs):
            if cf:
                for idx, x in enumerate(v):
                    base[idx] += cf * x
    else:
        base = _matrix_to_vec(particular)
    if k == 0:
        kernel_rows = list(vecs)
    else:
        Kb = kernel_basis(Mrel)
        kernel_rows = []
        for j in range(Kb.ncols):
            col = Kb.col(j)
            coeffs = [col.get(i, 0) for i in range(nb)]
            if not any(coeffs):
                continue
            v = [0] * n
            for cf, w in zip(coeffs, vecs):
                if cf:
                    for idx, x in enumerate(w):
                        v[idx] += cf * x
            kernel_rows.append(v)
    best = _lexmin_affine(base, kernel_rows, n)
    return ModuleMap(X, A, _vec_to_matrix(best, A.rank, rX), check=True)


def verify_universality(G, alpha, mu):
    bn = b_power(G, alpha.degree)
    R = bn.resolution
    target = transport(alpha, R) if alpha.resolution is not R else alpha
    return pushforward(mu, bn) == target
