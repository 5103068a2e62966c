"""Free resolutions, cochains, cohomology and the maps between them.

Sign and basis conventions (kept in one place):

* resolutions are left modules; the Z-basis of P_j is {k e_a}, indexed
  a * |G| + k;
* a boundary is stored as ``bd[j][a] = [(b, k, c), ...]`` meaning
  d(e_a) = sum c * k e_b;
* a cochain in degree j with coefficients M is the list of its values on
  the generators e_a, concatenated (block a has length rank M);
* coboundary is (delta f)(e_a) = f(d e_a) with no extra sign;
* the bar resolution is normalized, d[x1|..|xn] = x1[x2|..|xn]
  + sum_i (-1)^i [..|x_i x_{i+1}|..] + (-1)^n [x1|..|x_{n-1}];
* cup products use u[x1..xp] (x) (x1...xp) v[x_{p+1}..xn] on bar symbols;
* the tensor product of resolutions uses d(a (x) b) = da (x) b
  + (-1)^|a| a (x) db;
* connecting maps are the snake construction: lift values by a Z-splitting,
  apply delta, pull back along the injection.
"""

import itertools

import numpy as np
import scipy.sparse as sp

from .exact_linalg import (IntMatrix, Solver, Subquotient, PresentedAbelianGroup,
                           kernel_basis, lattice_basis, hstack, smith_normal_form,
                           local_torsion_invariants, invariant_factors, DimensionMismatch)
from .finite_groups import product, GroupHom
from .group_modules import (GModule, ModuleMap, trivial_module, tensor_modules,
                            tensor_power_diagonal, augmentation_ideal, group_ring_bimodule,
                            left_augmentation_ideal, regular_module, hom_z_module,
                            restrict_along, tensor_maps, identity_map, GroupMismatch)

DEFAULT_DMAX = 4


class ResolutionError(ValueError):
    pass


class TooLarge(ResolutionError):
    pass


class DegreeOutOfRange(ResolutionError):
    pass


class NotExact(ResolutionError):
    pass


class NoSplitting(ResolutionError):
    pass


class LiftFailed(ResolutionError):
    pass


# ---------------------------------------------------------------------------
# resolutions

class FreeResolution:
    def __init__(self, group, ranks, bd, aug, flavor, labels=None):
        self.group = group
        self.ranks = list(ranks)
        self.bd = bd
        self.aug = list(aug)
        self.flavor = flavor
        self.labels = labels
        self.d_max = len(self.ranks) - 1
        self._zb = {}
        self._homotopy = None
        self._bar = None

    @property
    def key(self):
        return (self.group.content_hash(), self.flavor)

    def z_rank(self, j):
        return self.ranks[j] * self.group.order

    def z_boundary(self, j):
        """Matrix of d_j: P_j -> P_{j-1} on Z-bases."""
        if j in self._zb:
            return self._zb[j]
        m = self.group.order
        t = self.group.table
        rows = {}
        for a, terms in enumerate(self.bd[j]):
            for kk in range(m):
                col = a * m + kk
                for b, k, c in terms:
                    row = b * m + t[kk][k]
                    r = rows.setdefault(row, {})
                    w = r.get(col, 0) + c
                    if w:
                        r[col] = w
                    else:
                        del r[col]
        rows = {i: r for i, r in rows.items() if r}
        M = IntMatrix(self.z_rank(j - 1), self.z_rank(j), rows)
        self._zb[j] = M
        return M

    def z_augmentation(self):
        m = self.group.order
        row = {}
        for b, e in enumerate(self.aug):
            if e:
                for k in range(m):
                    row[b * m + k] = e
        return IntMatrix(1, self.z_rank(0), {0: row} if row else {})

    def check(self, degrees=None):
        """d o d = 0 and exactness by ranks; raises NotExact."""
        top = self.d_max if degrees is None else min(degrees, self.d_max)
        eps = self.z_augmentation()
        if top >= 1 and not (eps @ self.z_boundary(1)).is_zero():
            raise NotExact("augmentation o d_1 != 0")
        for j in range(2, top + 1):
            if not (self.z_boundary(j - 1) @ self.z_boundary(j)).is_zero():
                raise NotExact("d_%d o d_%d != 0" % (j - 1, j))
        prev_rank = len(invariant_factors(eps))
        if prev_rank != 1:
            raise NotExact("augmentation is not onto Z rationally")
        for j in range(0, top):
            # rank ker d_j (or eps at j=0) == rank d_{j+1}
            rk = len(invariant_factors(self.z_boundary(j + 1)))
            if self.z_rank(j) - prev_rank != rk:
                raise NotExact("homology at degree %d" % j)
            prev_rank = rk
        return True

    def act_on_vector(self, k, vec):
        """Left action of group element k on a sparse Z-vector of P_j."""
        m = self.group.order
        t = self.group.table
        return {(i // m) * m + t[k][i % m]: c for i, c in vec.items()}

    def boundary_vector(self, j, vec):
        """d_j of a sparse Z-vector."""
        m = self.group.order
        t = self.group.table
        out = {}
        for i, c in vec.items():
            a, kk = divmod(i, m)
            for b, k, e in self.bd[j][a]:
                idx = b * m + t[kk][k]
                out[idx] = out.get(idx, 0) + c * e
        return {i: v for i, v in out.items() if v}

    def to_json(self):
        out = []
        for j in range(self.d_max + 1):
            entry = {"degree": j, "rank": self.ranks[j]}
            if j >= 1:
                entry["boundary"] = [[a, b, k, c] for a, terms in enumerate(self.bd[j])
                                     for (b, k, c) in terms]
            else:
                entry["augmentation"] = list(self.aug)
            out.append(entry)
        return {"flavor": self.flavor, "group": self.group.content_hash(), "degrees": out}

    @classmethod
    def from_json(cls, obj, group):
        ranks = [d["rank"] for d in obj["degrees"]]
        bd = [None]
        for d in obj["degrees"][1:]:
            terms = [[] for _ in range(d["rank"])]
            for a, b, k, c in d["boundary"]:
                terms[a].append((b, k, c))
            bd.append(terms)
        return cls(group, ranks, bd, obj["degrees"][0]["augmentation"], obj["flavor"])

    def truncated(self, d):
        return FreeResolution(self.group, self.ranks[:d + 1], self.bd[:d + 1], self.aug, self.flavor)

    def __repr__(self):
        return "FreeResolution(%s, %s, ranks=%s)" % (self.flavor, self.group.name, self.ranks)


def _nonid_tuples(G, j):
    return list(itertools.product(G.nonidentity(), repeat=j))


def bar_resolution(G, d_max=DEFAULT_DMAX):
    """Normalized bar resolution; generators are tuples of nonidentity
    elements in lexicographic order."""
    m = G.order
    if (m - 1) ** d_max * m > 2 * 10 ** 6:
        raise TooLarge("bar resolution of order %d to degree %d" % (m, d_max))
    e = G.identity
    t = G.table
    tuples = [_nonid_tuples(G, j) for j in range(d_max + 1)]
    index = [{tp: i for i, tp in enumerate(ts)} for ts in tuples]
    bd = [None]
    for j in range(1, d_max + 1):
        terms_all = []
        for tp in tuples[j]:
            terms = {}
            # x1 [x2 .. xn]
            key = (index[j - 1][tp[1:]], tp[0])
            terms[key] = terms.get(key, 0) + 1
            for i in range(j - 1):
                y = t[tp[i]][tp[i + 1]]
                if y == e:
                    continue
                face = tp[:i] + (y,) + tp[i + 2:]
                key = (index[j - 1][face], e)
                terms[key] = terms.get(key, 0) + (-1) ** (i + 1)
            key = (index[j - 1][tp[:-1]], e)
            terms[key] = terms.get(key, 0) + (-1) ** j
            terms_all.append(sorted((b, k, c) for (b, k), c in terms.items() if c))
        bd.append(terms_all)
    R = FreeResolution(G, [len(ts) for ts in tuples], bd, [1], "bar", labels=tuples)
    return R


def homogeneous_resolution(G, d_max=DEFAULT_DMAX):
    """Generators (e, y1, .., yi) for all tuples y; d = sum (-1)^j (face j)."""
    m = G.order
    if m ** d_max > 2 * 10 ** 5:
        raise TooLarge("homogeneous resolution of order %d to degree %d" % (m, d_max))
    t, inv = G.table, G.inverse
    e = G.identity
    tuples = [list(itertools.product(range(m), repeat=j)) for j in range(d_max + 1)]
    index = [{tp: i for i, tp in enumerate(ts)} for ts in tuples]
    bd = [None]
    for j in range(1, d_max + 1):
        terms_all = []
        for ys in tuples[j]:
            full = (e,) + ys
            terms = {}
            for drop in range(j + 1):
                face = full[:drop] + full[drop + 1:]
                g0 = face[0]
                g0i = inv[g0]
                norm = tuple(t[g0i][x] for x in face[1:])
                key = (index[j - 1][norm], g0)
                terms[key] = terms.get(key, 0) + (-1) ** drop
            terms_all.append(sorted((b, k, c) for (b, k), c in terms.items() if c))
        bd.append(terms_all)
    return FreeResolution(G, [len(ts) for ts in tuples], bd, [1], "homogeneous", labels=tuples)


def periodic_resolution(G, d_max=DEFAULT_DMAX):
    """Rank one in every degree for a cyclic group: t - 1, then the norm."""
    gen = G.cyclic_generator
    if G.order == 1:
        return trivial_resolution(G, d_max)
    if gen is None:
        raise ResolutionError("periodic resolution needs a cyclic group with a known generator")
    e = G.identity
    bd = [None]
    for j in range(1, d_max + 1):
        if j % 2:
            bd.append([[(0, e, -1), (0, gen, 1)]])
        else:
            bd.append([[(0, k, 1) for k in range(G.order)]])
    return FreeResolution(G, [1] * (d_max + 1), bd, [1], "periodic")


def trivial_resolution(G, d_max=DEFAULT_DMAX):
    if G.order != 1:
        raise ResolutionError("only for the trivial group")
    return FreeResolution(G, [1] + [0] * d_max, [None] + [[] for _ in range(d_max)], [1], "periodic")


def tensor_resolutions(P, Q, group=None):
    """Total complex of P (x) Q over G x H with Koszul signs."""
    G, H = P.group, Q.group
    GH = group or product(G, H)
    nH = H.order
    eG, eH = G.identity, H.identity
    d_max = min(P.d_max, Q.d_max)
    gens = []
    for n in range(d_max + 1):
        gens.append([(i, a, b) for i in range(n + 1) for a in range(P.ranks[i]) for b in range(Q.ranks[n - i])])
    if sum(len(g) for g in gens) * GH.order > 10 ** 6:
        raise TooLarge("tensor resolution too large")
    index = [{g: k for k, g in enumerate(gs)} for gs in gens]
    bd = [None]
    for n in range(1, d_max + 1):
        terms_all = []
        for (i, a, b) in gens[n]:
            terms = {}
            if i >= 1:
                for (a2, k, c) in P.bd[i][a]:
                    key = (index[n - 1][(i - 1, a2, b)], k * nH + eH)
                    terms[key] = terms.get(key, 0) + c
            if n - i >= 1:
                sign = -1 if i % 2 else 1
                for (b2, k, c) in Q.bd[n - i][b]:
                    key = (index[n - 1][(i, a, b2)], eG * nH + k)
                    terms[key] = terms.get(key, 0) + sign * c
            terms_all.append(sorted((bb, k, c) for (bb, k), c in terms.items() if c))
        bd.append(terms_all)
    aug = [P.aug[a] * Q.aug[b] for (_, a, b) in gens[0]]
    return FreeResolution(GH, [len(g) for g in gens], bd, aug, "tensor", labels=gens)


def _modular_rank(vectors, n, p=2147483629):
    """Rank of integer column vectors mod a large prime (greedy selection
    only; exactness is always certified separately)."""
    if not vectors:
        return 0
    A = np.array(vectors, dtype=np.int64) % p
    A = A.T.copy()  # n x k
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
        if r == rows:
            break
    return r


def reduced_resolution(G, d_max=DEFAULT_DMAX):
    """A small free resolution found greedily.

    In each degree the kernel of the previous boundary is computed over Z
    and Z[G]-generators are chosen from its basis until the translates
    span the kernel as a lattice (certified by a Smith form).
    """
    m = G.order
    t = G.table
    bd = [None]
    ranks = [1]
    aug = [1]
    prevR = FreeResolution(G, [1], [None], aug, "reduced")
    prev_matrix = prevR.z_augmentation()
    for j in range(1, d_max + 1):
        K = kernel_basis(prev_matrix)
        N = K.nrows
        kcols = [K.col(c) for c in range(K.ncols)]
        kvecs = [[col.get(i, 0) for i in range(N)] for col in kcols]
        # sort candidates by support size then magnitude, for sparse boundaries
        order = sorted(range(len(kvecs)), key=lambda c: (sum(1 for x in kvecs[c] if x),
                                                        sum(abs(x) for x in kvecs[c]), c))

        def translates(v):
            out = []
            for k in range(m):
                w = [0] * N
                for i, x in enumerate(v):
                    if x:
                        a, kk = divmod(i, m)
                        w[a * m + t[k][kk]] = x
                out.append(w)
            return out

        chosen = []
        span = []
        target = K.ncols
        cur = 0
        # greedy by largest rank gain, so few generators are used
        while cur < target:
            best = None
            for c in order:
                trial = span + translates(kvecs[c])
                r = _modular_rank(trial, N)
                if best is None or r > best[0]:
                    best = (r, c, trial)
                if r - cur == m:
                    break
            if best[0] == cur:
                break
            cur, c, span = best
            chosen.append(kvecs[c])

        def lattice_index_ok(vs):
            if not vs:
                return target == 0
            S = Solver(K)
            coords = [S.solve(v) for v in vs]
            C = IntMatrix.from_columns(coords, K.ncols)
            d = invariant_factors(C)
            return len(d) == target and all(x == 1 for x in d)

        while not lattice_index_ok(span):
            improved = False
            for c in order:
                trial = span + translates(kvecs[c])
                S = Solver(K)
                C = IntMatrix.from_columns([S.solve(v) for v in trial], K.ncols)
                d_new = invariant_factors(C)
                C_old = IntMatrix.from_columns([S.solve(v) for v in span], K.ncols)
                d_old = invariant_factors(C_old)
                prod_new = 1
                for x in d_new:
                    prod_new *= x
                prod_old = 1
                for x in d_old:
                    prod_old *= x
                if len(d_new) > len(d_old) or (len(d_new) == len(d_old) and prod_new < prod_old):
                    chosen.append(kvecs[c])
                    span = trial
                    improved = True
                    break
            if not improved:
                raise NotExact("could not generate the kernel in degree %d" % j)
        terms_all = []
        for v in chosen:
            terms = []
            for i, x in enumerate(v):
                if x:
                    b, k = divmod(i, m)
                    terms.append((b, k, x))
            terms_all.append(sorted(terms))
        bd.append(terms_all)
        ranks.append(len(chosen))
        R = FreeResolution(G, ranks, bd, aug, "reduced")
        prev_matrix = R.z_boundary(j)
    return FreeResolution(G, ranks, bd, aug, "reduced")


_STD_CACHE = {}


def standard_resolution(G, d_max=5):
    """The small resolution used for class computations.

    Cyclic groups get the periodic resolution, recorded products get the
    tensor product of their factors' resolutions, anything else a reduced
    resolution.  Cached per group content and extended when a larger
    degree is requested."""
    key = G.content_hash()
    R = _STD_CACHE.get(key)
    if R is not None and R.d_max >= d_max:
        return R
    d = max(d_max, 5)
    if G.order == 1:
        R = trivial_resolution(G, d)
    elif G.factors is not None:
        A, B = G.factors
        R = tensor_resolutions(standard_resolution(A, d), standard_resolution(B, d), group=G)
    elif G.cyclic_generator is not None:
        R = periodic_resolution(G, d)
    else:
        from . import cache
        R = cache.load_or_build(G, "reduced", d, lambda: reduced_resolution(G, d))
    _STD_CACHE[key] = R
    return R


# ---------------------------------------------------------------------------
# contracting homotopy and comparison maps

class ContractingHomotopy:
    """Z-linear s with d s + s d = id on the augmented complex, built
    lazily one basis vector at a time."""

    def __init__(self, P):
        self.P = P
        self._solvers = {}
        self._memo = {}
        eps = P.z_augmentation()
        x = Solver(eps).solve([1])
        if x is None:
            raise NotExact("augmentation not onto Z")
        self.s_minus = {i: v for i, v in enumerate(x) if v}

    def _solver(self, n):
        s = self._solvers.get(n)
        if s is None:
            s = self._solvers[n] = Solver(self.P.z_boundary(n))
        return s

    def s_basis(self, n, i):
        key = (n, i)
        got = self._memo.get(key)
        if got is not None:
            return got
        if n + 1 > self.P.d_max:
            raise DegreeOutOfRange("contracting homotopy needs degree %d" % (n + 1))
        x = {i: 1}
        if n == 0:
            e = self.P.aug[i // self.P.group.order]
            rhs = dict(x)
            for k, v in self.s_minus.items():
                rhs[k] = rhs.get(k, 0) - e * v
        else:
            dx = self.P.boundary_vector(n, x)
            sdx = self.apply(n - 1, dx)
            rhs = dict(x)
            for k, v in sdx.items():
                rhs[k] = rhs.get(k, 0) - v
        rhs = {k: v for k, v in rhs.items() if v}
        if not rhs:
            out = {}
        else:
            N = self.P.z_rank(n)
            vec = [0] * N
            for k, v in rhs.items():
                vec[k] = v
            y = self._solver(n + 1).solve(vec)
            if y is None:
                raise NotExact("resolution not exact at degree %d" % n)
            out = {k: v for k, v in enumerate(y) if v}
        self._memo[key] = out
        return out

    def apply(self, n, vec):
        out = {}
        for i, c in vec.items():
            for k, v in self.s_basis(n, i).items():
                out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}


def contracting_homotopy(P):
    if P._homotopy is None:
        P._homotopy = ContractingHomotopy(P)
    return P._homotopy


class BarComparison:
    """Chain maps between the normalized bar resolution of G and P.

    ``to_P(sym)`` is phi(sym) in P (sparse Z-vector), ``from_P(n, a)`` is
    psi(e_a) as {(k, sym): c} meaning sum c k[sym]."""

    def __init__(self, P):
        self.P = P
        self.G = P.group
        self.s = contracting_homotopy(P)
        self._phi = {}
        self._psi = {}

    def bar_boundary(self, sym):
        """d[sym] as {(k, face): c}."""
        G = self.G
        e = G.identity
        t = G.table
        n = len(sym)
        out = {}
        if n == 0:
            return out

        def add(k, face, c):
            key = (k, face)
            out[key] = out.get(key, 0) + c

        add(sym[0], sym[1:], 1)
        for i in range(n - 1):
            y = t[sym[i]][sym[i + 1]]
            if y != e:
                add(e, sym[:i] + (y,) + sym[i + 2:], (-1) ** (i + 1))
        add(e, sym[:-1], (-1) ** n)
        return {k: v for k, v in out.items() if v}

    def to_P(self, sym):
        sym = tuple(sym)
        got = self._phi.get(sym)
        if got is not None:
            return got
        if self.G.identity in sym:
            return {}
        n = len(sym)
        if n == 0:
            res = dict(self.s.s_minus)
        else:
            acc = {}
            for (k, face), c in self.bar_boundary(sym).items():
                img = self.to_P(face)
                if k != self.G.identity:
                    img = self.P.act_on_vector(k, img)
                for i, v in img.items():
                    acc[i] = acc.get(i, 0) + c * v
            acc = {i: v for i, v in acc.items() if v}
            res = self.s.apply(n - 1, acc)
        self._phi[sym] = res
        return res

    def from_P(self, n, a):
        key = (n, a)
        got = self._psi.get(key)
        if got is not None:
            return got
        P, G = self.P, self.G
        t = G.table
        e = G.identity
        if n == 0:
            res = {(e, ()): P.aug[a]} if P.aug[a] else {}
        else:
            acc = {}
            for b, k, c in P.bd[n][a]:
                for (k2, sym), v in self.from_P(n - 1, b).items():
                    # h(k k2 [sym]) = [k k2 | sym]
                    g = t[k][k2]
                    if g == e:
                        continue
                    key2 = (e, (g,) + sym)
                    acc[key2] = acc.get(key2, 0) + c * v
            res = {k: v for k, v in acc.items() if v}
        self._psi[key] = res
        return res


def bar_comparison(P):
    if P._bar is None:
        P._bar = BarComparison(P)
    return P._bar


def comparison_map(R_from, R_to, degree):
    """Chain map R_from -> R_to over the identity of Z, up to ``degree``.

    Returns a list F with F[j][a] = sparse Z-vector of F(e_a) in R_to."""
    s = contracting_homotopy(R_to)
    m = R_from.group.order
    F = []
    F0 = []
    for b in range(R_from.ranks[0]):
        F0.append({i: R_from.aug[b] * v for i, v in s.s_minus.items() if R_from.aug[b] * v})
    F.append(F0)
    for j in range(1, degree + 1):
        Fj = []
        for a in range(R_from.ranks[j]):
            acc = {}
            for b, k, c in R_from.bd[j][a]:
                img = R_to.act_on_vector(k, F[j - 1][b])
                for i, v in img.items():
                    acc[i] = acc.get(i, 0) + c * v
            acc = {i: v for i, v in acc.items() if v}
            Fj.append(s.apply(j - 1, acc))
        F.append(Fj)
    return F


# ---------------------------------------------------------------------------
# cochains

def _coo_of(M, k):
    cache = M.__dict__.setdefault("_coo", {})
    got = cache.get(k)
    if got is None:
        a = M.act_sp(k).tocoo()
        got = cache[k] = (a.row.astype(np.int64), a.col.astype(np.int64), a.data.astype(np.int64))
    return got


def evaluate_chain(M, values, vec, group_order):
    """Value of a cochain (list of per-generator value lists) on a sparse
    Z-vector of the resolution."""
    out = [0] * M.rank
    for i, c in vec.items():
        a, k = divmod(i, group_order)
        v = values[a]
        if not any(v):
            continue
        w = M.action[k].apply(v) if k != M.group.identity else v
        for t in range(M.rank):
            if w[t]:
                out[t] += c * w[t]
    return out


class CochainComplex:
    """Hom_{Z[G]}(P_*, M) with cached coboundaries and cohomology."""

    def __init__(self, P, M):
        if P.group is not M.group and P.group != M.group:
            raise GroupMismatch("resolution and module over different groups")
        self.P = P
        self.M = M
        self._delta = {}
        self._delta_sp = {}
        self._coh = {}

    def dim(self, j):
        return self.P.ranks[j] * self.M.rank

    def delta_scipy(self, j):
        """delta^j : C^{j-1} -> C^j as int64 sparse."""
        got = self._delta_sp.get(j)
        if got is not None:
            return got
        if j < 1 or j > self.P.d_max:
            raise DegreeOutOfRange("coboundary %d outside the resolution" % j)
        r = self.M.rank
        rows_n, cols_n = self.dim(j), self.dim(j - 1)
        R, C, V = [], [], []
        for a, terms in enumerate(self.P.bd[j]):
            for b, k, c in terms:
                rr, cc, vv = _coo_of(self.M, k)
                R.append(rr + a * r)
                C.append(cc + b * r)
                V.append(vv * c)
        if R:
            mat = sp.coo_matrix((np.concatenate(V), (np.concatenate(R), np.concatenate(C))),
                                shape=(rows_n, cols_n)).tocsr()
            mat.sum_duplicates()
            mat.eliminate_zeros()
        else:
            mat = sp.csr_matrix((rows_n, cols_n), dtype=np.int64)
        self._delta_sp[j] = mat
        return mat

    def delta(self, j):
        got = self._delta.get(j)
        if got is None:
            if j == 0:
                got = IntMatrix.zeros(self.dim(0), 0)
            else:
                got = IntMatrix.from_scipy(self.delta_scipy(j))
            self._delta[j] = got
        return got

    def coboundary(self, j, vec):
        """delta^(j+1) applied to a degree-j cochain."""
        return self.delta(j + 1).apply(list(vec))

    def is_cocycle(self, j, vec):
        if self.M.char:
            return all(x % self.M.char == 0 for x in self.coboundary(j, vec))
        return not any(self.coboundary(j, vec))

    def cohomology(self, j):
        got = self._coh.get(j)
        if got is None:
            if j + 1 > self.P.d_max:
                raise DegreeOutOfRange("H^%d needs resolution degree %d" % (j, j + 1))
            got = self._coh[j] = Cohomology(self, j)
        return got

    def invariants(self, j, method="auto"):
        """Invariant factors of H^j; the local method avoids transforms."""
        if method == "exact" or self.M.char:
            return self.cohomology(j).group.invariants
        if j in self._coh:
            return self._coh[j].group.invariants
        if method == "auto":
            size = self.dim(j) * max(self.dim(j - 1) if j else 1, 1)
            method = "local" if size > 250000 else "exact"
        if method == "exact":
            return self.cohomology(j).group.invariants
        if j == 0:
            d1 = self.delta(1)
            return [0] * (self.dim(0) - len(invariant_factors(d1)))
        primes = _prime_powers(self.P.group.order)
        tors = local_torsion_invariants(self.delta_scipy(j), primes)
        return sorted(tors)

    def values(self, j, vec):
        r = self.M.rank
        return [list(vec[a * r:(a + 1) * r]) for a in range(self.P.ranks[j])]

    def cls(self, j, vec):
        return CohomologyClass(self, j, vec)


def _prime_powers(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Cohomology:
    """H^j of a cochain complex with projection/lifting helpers."""

    def __init__(self, C, j):
        self.C = C
        self.degree = j
        d_in = C.delta(j)
        d_out = C.delta(j + 1)
        p = C.M.char
        if p:
            N = C.dim(j)
            pid = IntMatrix.identity(d_out.nrows).scale(p)
            big = hstack([d_out, -pid]) if d_out.nrows else d_out
            Kg = kernel_basis(big)
            Kg = Kg.submatrix(range(N), range(Kg.ncols))
            K = lattice_basis(Kg)
            B = hstack([d_in, IntMatrix.identity(N).scale(p)])
        else:
            K = kernel_basis(d_out)
            B = d_in
        self.sq = Subquotient(K, B)
        self.group = self.sq.group

    def project(self, vec):
        return self.sq.project(list(vec))

    def lift(self, coords):
        return self.sq.lift(coords)

    def generators(self):
        return [CohomologyClass(self.C, self.degree, v) for v in self.sq.generators()]

    def elements(self):
        return [CohomologyClass(self.C, self.degree, self.lift(c)) for c in self.group.elements()]

    def zero(self):
        return CohomologyClass(self.C, self.degree, [0] * self.C.dim(self.degree))


_COMPLEX_CACHE = {}


def cochain_complex(P, M):
    key = (id(P), id(M))
    got = _COMPLEX_CACHE.get(key)
    if got is None:
        got = _COMPLEX_CACHE[key] = CochainComplex(P, M)
    return got


class CohomologyClass:
    def __init__(self, complex_, degree, vector, check=True):
        self.complex = complex_
        self.degree = degree
        self.vector = [int(x) for x in vector]
        if len(self.vector) != complex_.dim(degree):
            raise DimensionMismatch("cochain length %d, expected %d" % (len(self.vector), complex_.dim(degree)))
        if check and not complex_.is_cocycle(degree, self.vector):
            raise ValueError("vector is not a cocycle")

    @property
    def module(self):
        return self.complex.M

    @property
    def resolution(self):
        return self.complex.P

    @property
    def group(self):
        return self.complex.P.group

    def coords(self):
        return self.complex.cohomology(self.degree).project(self.vector)

    def is_zero(self):
        return not any(self.coords())

    def _same(self, other):
        if other.complex is not self.complex or other.degree != self.degree:
            raise GroupMismatch("classes live in different cohomology groups")

    def __eq__(self, other):
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        self._same(other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash((id(self.complex), self.degree, tuple(self.coords())))

    def __add__(self, other):
        self._same(other)
        return CohomologyClass(self.complex, self.degree,
                               [a + b for a, b in zip(self.vector, other.vector)], check=False)

    def __sub__(self, other):
        self._same(other)
        return CohomologyClass(self.complex, self.degree,
                               [a - b for a, b in zip(self.vector, other.vector)], check=False)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return CohomologyClass(self.complex, self.degree, [c * a for a in self.vector], check=False)

    def values(self):
        return self.complex.values(self.degree, self.vector)

    def __repr__(self):
        return "CohomologyClass(deg=%d, %s, coords=%s)" % (self.degree, self.module.name, self.coords())


def cohomology(G, A, n, R=None):
    """H^n(G, A) computed on R (default: the standard small resolution)."""
    R = R or standard_resolution(G, n + 1)
    if n + 1 > R.d_max:
        raise DegreeOutOfRange("resolution too short for H^%d" % n)
    return cochain_complex(R, A).cohomology(n)


def ext_via_hom(G, M, A, r, R=None):
    """Ext^r over Z[G] of a Z-free M into A as H^r(G, Hom_Z(M, A))."""
    return cohomology(G, hom_z_module(M, A), r, R).group


def ext_invariants(G, M, A, r, R=None, method="auto"):
    R = R or standard_resolution(G, r + 1)
    return cochain_complex(R, hom_z_module(M, A)).invariants(r, method)


# ---------------------------------------------------------------------------
# operations on classes

def bar_values(u):
    """Memoized evaluation of a class's cochain on normalized bar symbols."""
    P = u.resolution
    comp = bar_comparison(P)
    vals = u.values()
    M = u.module
    order = P.group.order
    memo = {}

    def f(sym):
        sym = tuple(sym)
        got = memo.get(sym)
        if got is None:
            got = memo[sym] = evaluate_chain(M, vals, comp.to_P(sym), order)
        return got
    return f


def cochain_from_bar(P, M, degree, fn):
    """Cochain on P from a function on nondegenerate bar symbols."""
    comp = bar_comparison(P)
    vec = []
    for a in range(P.ranks[degree]):
        acc = [0] * M.rank
        for (k, sym), c in comp.from_P(degree, a).items():
            v = fn(sym)
            if not any(v):
                continue
            w = M.action[k].apply(v) if k != P.group.identity else v
            for t in range(M.rank):
                acc[t] += c * w[t]
        vec.extend(acc)
    return vec


def cup_product(u, v, target=None):
    """Class of u cup v with coefficients u.module (x) v.module."""
    if u.group is not v.group and u.group != v.group:
        raise GroupMismatch("cup product of classes over different groups")
    P = u.resolution
    if v.resolution is not P:
        raise GroupMismatch("cup factors must live on the same resolution")
    A, B = u.module, v.module
    AB = target or tensor_modules(A, B)
    p, q = u.degree, v.degree
    fu, fv = bar_values(u), bar_values(v)
    G = P.group
    t = G.table
    rB = B.rank

    def fn(sym):
        a = fu(sym[:p])
        if not any(a):
            return [0] * AB.rank
        g = G.identity
        for x in sym[:p]:
            g = t[g][x]
        b = fv(sym[p:])
        if not any(b):
            return [0] * AB.rank
        if g != G.identity:
            b = B.action[g].apply(b)
        out = [0] * AB.rank
        for i, x in enumerate(a):
            if x:
                base = i * rB
                for j2, y in enumerate(b):
                    if y:
                        out[base + j2] = x * y
        return out

    vec = cochain_from_bar(P, AB, p + q, fn)
    C = cochain_complex(P, AB)
    return CohomologyClass(C, p + q, vec)


def cup_power(u, n, target=None):
    out = u
    for _ in range(n - 1):
        out = cup_product(u, out) if target is None else cup_product(u, out)
    return out


def pushforward(m, u, target_complex=None):
    """Apply a coefficient map to a class."""
    if m.source.rank != u.module.rank:
        raise GroupMismatch("map source does not match the class coefficients")
    P = u.resolution
    C = target_complex or cochain_complex(P, m.target)
    vals = u.values()
    vec = []
    for v in vals:
        vec.extend(m.matrix.apply(v))
    return CohomologyClass(C, u.degree, vec)


def restriction(u, h, R=None, module=None):
    """Pull u back along h: H -> G (u a class over G)."""
    if h.target is not u.group and h.target != u.group:
        raise GroupMismatch("class group is not the target of the homomorphism")
    H = h.source
    R = R or standard_resolution(H, u.degree + 1)
    M = module or restrict_along(h, u.module)
    fu = bar_values(u)
    e = u.group.identity
    im = h.images

    def fn(sym):
        img = tuple(im[x] for x in sym)
        if e in img:
            return [0] * M.rank
        return fu(img)

    vec = cochain_from_bar(R, M, u.degree, fn)
    return CohomologyClass(cochain_complex(R, M), u.degree, vec)


def transport(u, R):
    """Same class on another resolution R of the same group."""
    fu = bar_values(u)
    M = u.module
    vec = cochain_from_bar(R, M, u.degree, fu)
    return CohomologyClass(cochain_complex(R, M), u.degree, vec)


def class_from_bar_function(G, M, degree, fn, R=None):
    R = R or standard_resolution(G, degree + 1)
    vec = cochain_from_bar(R, M, degree, fn)
    return CohomologyClass(cochain_complex(R, M), degree, vec)


# ---------------------------------------------------------------------------
# exact sequences

class ShortExactSequence:
    """0 -> N --iota--> L --pi--> M -> 0 with a Z-splitting.

    ``section`` is Z-linear M -> L with pi o section = id; ``retraction``
    is Z-linear L -> N with retraction o iota = id and
    iota o retraction + section o pi = id."""

    def __init__(self, iota, pi, section=None, check=True):
        self.iota = iota
        self.pi = pi
        self.N, self.L, self.M = iota.source, iota.target, pi.target
        if pi.source.rank != self.L.rank:
            raise NotExact("maps are not composable")
        if check:
            if not (pi.matrix @ iota.matrix).is_zero():
                raise NotExact("pi o iota != 0")
            if len(invariant_factors(iota.matrix)) != self.N.rank:
                raise NotExact("iota is not injective")
            if self.N.rank + self.M.rank != self.L.rank:
                raise NotExact("ranks do not add up")
        if section is None:
            section = self._basis_section()
        self.section = section
        self.retraction = self._retraction()

    def _basis_section(self):
        S = Solver(self.pi.matrix)
        cols = []
        for i in range(self.M.rank):
            e = [0] * self.M.rank
            e[i] = 1
            x = S.solve(e)
            if x is None:
                raise NoSplitting("pi is not onto over Z")
            cols.append(x)
        return IntMatrix.from_columns(cols, self.L.rank)

    def _retraction(self):
        S = Solver(self.iota.matrix)
        proj = IntMatrix.identity(self.L.rank) - self.section @ self.pi.matrix
        cols = []
        for j in range(self.L.rank):
            c = proj.col(j)
            v = [c.get(i, 0) for i in range(self.L.rank)]
            x = S.solve(v)
            if x is None:
                raise NotExact("sequence is not exact in the middle")
            cols.append(x)
        return IntMatrix.from_columns(cols, self.N.rank)

    def with_section(self, section):
        return ShortExactSequence(self.iota, self.pi, section=section, check=False)


def connecting_hom(seq, u):
    """Snake-lemma class in H^(n+1)(G, N) of u in H^n(G, M)."""
    P = u.resolution
    n = u.degree
    CL = cochain_complex(P, seq.L)
    CN = cochain_complex(P, seq.N)
    lifted = []
    for v in u.values():
        lifted.extend(seq.section.apply(v))
    d = CL.coboundary(n, lifted)
    rL = seq.L.rank
    p = seq.N.char
    if p:
        # mod p the lift's coboundary only maps to zero mod p; remove
        # sigma(pi(d)), which is divisible by p and so changes nothing
        rM = seq.M.rank
        for a in range(P.ranks[n + 1]):
            blk = d[a * rL:(a + 1) * rL]
            pb = seq.pi.matrix.apply(blk)
            if any(x % p for x in pb):
                raise NotExact("lift of a mod-%d cocycle is not a cocycle mod %d" % (p, p))
            corr = seq.section.apply(pb)
            d[a * rL:(a + 1) * rL] = [x - y for x, y in zip(blk, corr)]
    out = []
    for a in range(P.ranks[n + 1]):
        blk = d[a * rL:(a + 1) * rL]
        out.extend(seq.retraction.apply(blk))
    # sanity: iota(out) == d
    chk = []
    for a in range(P.ranks[n + 1]):
        chk.extend(seq.iota.matrix.apply(out[a * seq.N.rank:(a + 1) * seq.N.rank]))
    if chk != d:
        raise NotExact("coboundary of the lift does not come from the kernel")
    return CohomologyClass(CN, n + 1, out)


def class_of_exact_sequence(maps, R=None):
    """Class in Ext^n(Z, N) of 0 -> N -> L_n -> ... -> L_1 -> Z -> 0.

    ``maps`` lists ModuleMaps [iota: N -> L_n, d_n: L_n -> L_{n-1}, ...,
    d_2: L_2 -> L_1, pi: L_1 -> Z].  The identity of Z is lifted to a chain
    map from R into the sequence; the top component is the cocycle."""
    n = len(maps) - 1
    iota = maps[0]
    pi = maps[-1]
    G = pi.source.group
    R = R or standard_resolution(G, n + 1)
    if pi.target.rank != 1:
        raise LiftFailed("only sequences ending in a rank one trivial module are supported")
    # mids[j] is the map L_{j+1} -> L_j (with L_0 = Z)
    chain = list(reversed(maps))  # pi, d_2, ..., d_n, iota
    solvers = [Solver(f.matrix) for f in chain]
    m = G.order
    F_prev = None
    for j in range(0, n + 1):
        f = chain[j]
        src_mod = f.target
        Fj = []
        for a in range(R.ranks[j]):
            if j == 0:
                rhs = [R.aug[a]]
            else:
                rhs = [0] * src_mod.rank
                for b, k, c in R.bd[j][a]:
                    w = src_mod.action[k].apply(F_prev[b])
                    for t in range(src_mod.rank):
                        rhs[t] += c * w[t]
            y = solvers[j].solve(rhs)
            if y is None:
                raise LiftFailed("no lift at degree %d" % j)
            Fj.append(y)
        F_prev = Fj
    N = iota.source
    vec = [x for y in F_prev for x in y]
    return CohomologyClass(cochain_complex(R, N), n, vec)


# ---------------------------------------------------------------------------
# splice constructions

def splice_resolution(G, d_max=DEFAULT_DMAX):
    """Z[G] (x) I^j with the diagonal left action, free on e (x) basis.

    Differential: x0 (x) x1 (x) ... -> eps(x0) x1 (x) x2 ... viewed in
    Z[G] (x) I^(j-1)."""
    m = G.order
    if m * (m - 1) ** d_max > 10 ** 6:
        raise TooLarge("splice resolution too large")
    I, _, _ = left_augmentation_ideal(G)
    e = G.identity
    nonid = I.labels
    powers = [tensor_power_diagonal(I, j) for j in range(d_max + 1)]
    bd = [None]
    r = m - 1
    for j in range(1, d_max + 1):
        prev = powers[j - 1]
        rprev = prev.rank
        terms_all = []
        for idx in range(powers[j].rank):
            g1 = nonid[idx // rprev]
            rest = idx % rprev
            terms = {}
            # g1 (x) rest = g1 . (e (x) g1^-1 rest)
            v = [0] * rprev
            v[rest] = 1
            w = prev.action[G.inverse[g1]].apply(v)
            for b, c in enumerate(w):
                if c:
                    terms[(b, g1)] = terms.get((b, g1), 0) + c
            terms[(rest, e)] = terms.get((rest, e), 0) - 1
            terms_all.append(sorted((b, k, c) for (b, k), c in terms.items() if c))
        bd.append(terms_all)
    R = FreeResolution(G, [p.rank for p in powers], bd, [1], "splice")
    R.powers = powers
    return R


def bimodule_sequence(G, GG=None):
    """0 -> I -> Z[G] -> Z -> 0 over G x G."""
    GG = GG or product(G, G)
    I, incl, aug = augmentation_ideal(G, GG)
    return ShortExactSequence(incl, aug)


def tensor_sequence(seq, M):
    """seq (x) M, still Z-split."""
    NM = tensor_modules(seq.N, M)
    LM = tensor_modules(seq.L, M)
    MM = tensor_modules(seq.M, M)
    idM = IntMatrix.identity(M.rank)
    iota = ModuleMap(NM, LM, seq.iota.matrix.kron(idM), check=False)
    pi = ModuleMap(LM, MM, seq.pi.matrix.kron(idM), check=False)
    section = seq.section.kron(idM)
    return ShortExactSequence(iota, pi, section=section, check=False)


def splice_sequence(G, s, GG=None, base=None):
    """0 -> I^(s+1) -> Z[G] (x) I^s -> I^s -> 0 over G x G."""
    base = base or bimodule_sequence(G, GG)
    Is = tensor_power_diagonal(base.N, s)
    seq = tensor_sequence(base, Is)
    return seq
