"""Exact linear algebra over the integers.

Matrices are sparse (row dictionaries of Python ints), so entries never
overflow.  The Smith form routine tracks both transforms and the inverse of
the column transform, which is what kernels, subquotients and membership
tests need.
"""

from math import gcd


class CompositionNotZero(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class NotWellDefined(ValueError):
    pass


class IntMatrix:
    """Immutable sparse integer matrix.

    Entries live in ``_rows``: row index -> {col index: nonzero int}.  The
    public view is the sorted list of (row, col, value) triples.
    """

    __slots__ = ("nrows", "ncols", "_rows", "_T")

    def __init__(self, nrows, ncols, rows=None, _trusted=False):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self._T = None
        if rows is None:
            rows = {}
        if not _trusted:
            clean = {}
            for i, r in rows.items():
                if not 0 <= i < self.nrows:
                    raise IndexError("row %d out of range" % i)
                rr = {}
                for j, v in r.items():
                    if not 0 <= j < self.ncols:
                        raise IndexError("col %d out of range" % j)
                    v = int(v)
                    if v:
                        rr[j] = v
                if rr:
                    clean[i] = rr
            rows = clean
        self._rows = rows

    # constructors
    @classmethod
    def zeros(cls, m, n):
        return cls(m, n, {}, _trusted=True)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {i: {i: 1} for i in range(n)}, _trusted=True)

    @classmethod
    def diag(cls, entries, m=None, n=None):
        k = len(entries)
        m = k if m is None else m
        n = k if n is None else n
        return cls(m, n, {i: {i: v} for i, v in enumerate(entries) if v})

    @classmethod
    def from_dense(cls, data, ncols=None):
        data = [list(r) for r in data]
        m = len(data)
        if ncols is None:
            ncols = len(data[0]) if m else 0
        rows = {}
        for i, r in enumerate(data):
            if len(r) != ncols:
                raise DimensionMismatch("ragged dense input")
            rr = {j: int(v) for j, v in enumerate(r) if v}
            if rr:
                rows[i] = rr
        return cls(m, ncols, rows, _trusted=True)

    @classmethod
    def from_triples(cls, m, n, triples):
        rows = {}
        for i, j, v in triples:
            if v:
                r = rows.setdefault(i, {})
                r[j] = r.get(j, 0) + int(v)
                if r[j] == 0:
                    del r[j]
        return cls(m, n, {i: r for i, r in rows.items() if r})

    @classmethod
    def from_columns(cls, cols, nrows):
        """Columns given as dicts or lists."""
        rows = {}
        for j, c in enumerate(cols):
            items = c.items() if isinstance(c, dict) else enumerate(c)
            for i, v in items:
                if v:
                    rows.setdefault(i, {})[j] = int(v)
        return cls(nrows, len(cols), rows)

    @classmethod
    def from_rows(cls, rows_list, ncols):
        rows = {}
        for i, r in enumerate(rows_list):
            items = r.items() if isinstance(r, dict) else enumerate(r)
            rr = {j: int(v) for j, v in items if v}
            if rr:
                rows[i] = rr
        return cls(len(rows_list), ncols, rows)

    # views
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def triples(self):
        out = []
        for i in sorted(self._rows):
            r = self._rows[i]
            for j in sorted(r):
                out.append((i, j, r[j]))
        return out

    @property
    def nnz(self):
        return sum(len(r) for r in self._rows.values())

    def density(self):
        if self.nrows == 0 or self.ncols == 0:
            return 0.0
        return self.nnz / (self.nrows * self.ncols)

    def row(self, i):
        return dict(self._rows.get(i, {}))

    def col(self, j):
        return dict(self.T._rows.get(j, {}))

    def __getitem__(self, ij):
        i, j = ij
        return self._rows.get(i, {}).get(j, 0)

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in self._rows.items():
            row = out[i]
            for j, v in r.items():
                row[j] = v
        return out

    def to_numpy(self, dtype=object):
        import numpy as np
        a = np.zeros((self.nrows, self.ncols), dtype=dtype)
        for i, r in self._rows.items():
            for j, v in r.items():
                a[i, j] = v
        return a

    def to_scipy(self):
        """int64 CSR copy; refuses entries that do not fit."""
        import numpy as np
        import scipy.sparse as sp
        ii, jj, vv = [], [], []
        for i, r in self._rows.items():
            for j, v in r.items():
                if abs(v) >= 1 << 62:
                    raise OverflowError("entry too large for int64")
                ii.append(i)
                jj.append(j)
                vv.append(v)
        return sp.csr_matrix((np.array(vv, dtype=np.int64), (ii, jj)),
                             shape=(self.nrows, self.ncols), dtype=np.int64)

    @classmethod
    def from_scipy(cls, a):
        a = a.tocoo()
        rows = {}
        for i, j, v in zip(a.row.tolist(), a.col.tolist(), a.data.tolist()):
            if v:
                r = rows.setdefault(i, {})
                r[j] = r.get(j, 0) + int(v)
        return cls(a.shape[0], a.shape[1], rows)

    def __repr__(self):
        if self.nrows * self.ncols <= 64:
            return "IntMatrix(%r)" % self.to_dense()
        return "IntMatrix(%dx%d, nnz=%d)" % (self.nrows, self.ncols, self.nnz)

    # algebra
    @property
    def T(self):
        if self._T is None:
            rows = {}
            for i, r in self._rows.items():
                for j, v in r.items():
                    rows.setdefault(j, {})[i] = v
            t = IntMatrix(self.ncols, self.nrows, rows, _trusted=True)
            t._T = self
            self._T = t
        return self._T

    def transpose(self):
        return self.T

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(self.triples)))

    def is_zero(self):
        return not self._rows

    def __neg__(self):
        return IntMatrix(self.nrows, self.ncols,
                         {i: {j: -v for j, v in r.items()} for i, r in self._rows.items()},
                         _trusted=True)

    def scale(self, c):
        c = int(c)
        if c == 0:
            return IntMatrix.zeros(self.nrows, self.ncols)
        return IntMatrix(self.nrows, self.ncols,
                         {i: {j: c * v for j, v in r.items()} for i, r in self._rows.items()},
                         _trusted=True)

    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch("shape %s vs %s" % (self.shape, other.shape))
        rows = {i: dict(r) for i, r in self._rows.items()}
        _add_rows_into(rows, other._rows, 1)
        return IntMatrix(self.nrows, self.ncols, rows, _trusted=True)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch("shape %s vs %s" % (self.shape, other.shape))
        rows = {i: dict(r) for i, r in self._rows.items()}
        _add_rows_into(rows, other._rows, -1)
        return IntMatrix(self.nrows, self.ncols, rows, _trusted=True)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch("inner dimensions %d vs %d" % (self.ncols, other.nrows))
            orows = other._rows
            out = {}
            for i, r in self._rows.items():
                acc = {}
                for k, a in r.items():
                    ok = orows.get(k)
                    if ok is None:
                        continue
                    for j, b in ok.items():
                        acc[j] = acc.get(j, 0) + a * b
                acc = {j: v for j, v in acc.items() if v}
                if acc:
                    out[i] = acc
            return IntMatrix(self.nrows, other.ncols, out, _trusted=True)
        return self.apply(other)

    def apply(self, vec):
        """Matrix times a vector given as a list."""
        if len(vec) != self.ncols:
            raise DimensionMismatch("vector length %d, expected %d" % (len(vec), self.ncols))
        out = [0] * self.nrows
        for i, r in self._rows.items():
            s = 0
            for j, a in r.items():
                x = vec[j]
                if x:
                    s += a * x
            out[i] = s
        return out

    def apply_sparse(self, vec):
        """Matrix times a sparse vector {index: value}; returns a dict."""
        cols = self.T._rows
        out = {}
        for j, x in vec.items():
            if not x:
                continue
            c = cols.get(j)
            if c is None:
                continue
            for i, a in c.items():
                out[i] = out.get(i, 0) + a * x
        return {i: v for i, v in out.items() if v}

    def submatrix(self, rows, cols):
        cpos = {c: k for k, c in enumerate(cols)}
        out = {}
        for k, i in enumerate(rows):
            r = self._rows.get(i)
            if not r:
                continue
            rr = {cpos[j]: v for j, v in r.items() if j in cpos}
            if rr:
                out[k] = rr
        return IntMatrix(len(rows), len(cols), out, _trusted=True)

    def kron(self, other):
        m2, n2 = other.nrows, other.ncols
        out = {}
        for i1, r1 in self._rows.items():
            for i2, r2 in other._rows.items():
                rr = {}
                for j1, a in r1.items():
                    base = j1 * n2
                    for j2, b in r2.items():
                        rr[base + j2] = a * b
                out[i1 * m2 + i2] = rr
        return IntMatrix(self.nrows * m2, self.ncols * n2, out, _trusted=True)

    def max_abs(self):
        return max((abs(v) for r in self._rows.values() for v in r.values()), default=0)


def _add_rows_into(rows, other_rows, c):
    for i, r in other_rows.items():
        dst = rows.get(i)
        if dst is None:
            dst = rows[i] = {}
        for j, v in r.items():
            w = dst.get(j, 0) + c * v
            if w:
                dst[j] = w
            else:
                dst.pop(j, None)
        if not dst:
            del rows[i]


def hstack(mats, nrows=None):
    if not mats:
        return IntMatrix.zeros(nrows or 0, 0)
    m = mats[0].nrows
    out = {}
    off = 0
    for a in mats:
        if a.nrows != m:
            raise DimensionMismatch("hstack row mismatch")
        for i, r in a._rows.items():
            dst = out.setdefault(i, {})
            for j, v in r.items():
                dst[off + j] = v
        off += a.ncols
    return IntMatrix(m, off, out, _trusted=True)


def vstack(mats, ncols=None):
    if not mats:
        return IntMatrix.zeros(0, ncols or 0)
    n = mats[0].ncols
    out = {}
    off = 0
    for a in mats:
        if a.ncols != n:
            raise DimensionMismatch("vstack column mismatch")
        for i, r in a._rows.items():
            out[off + i] = dict(r)
        off += a.nrows
    return IntMatrix(off, n, out, _trusted=True)


def block_matrix(blocks, row_sizes, col_sizes):
    """Assemble from a dict {(I, J): IntMatrix}."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    out = {}
    for (bi, bj), a in blocks.items():
        if a.shape != (row_sizes[bi], col_sizes[bj]):
            raise DimensionMismatch("block (%d,%d) has shape %s" % (bi, bj, a.shape))
        r0, c0 = roff[bi], coff[bj]
        for i, r in a._rows.items():
            dst = out.setdefault(r0 + i, {})
            for j, v in r.items():
                w = dst.get(c0 + j, 0) + v
                if w:
                    dst[c0 + j] = w
                else:
                    dst.pop(c0 + j, None)
    out = {i: r for i, r in out.items() if r}
    return IntMatrix(roff[-1], coff[-1], out, _trusted=True)


# ---------------------------------------------------------------------------
# Smith normal form

def _round_div(a, p):
    # nearest quotient; remainder lands in (-|p|/2, |p|/2]
    return (2 * a + p) // (2 * p)


def _ext_gcd(a, b):
    """s, t, g with s*a + t*b = g = gcd(|a|, |b|) > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_s, old_t, old_r


def _addmul(store, dst, src, q):
    """row dst += q * row src, rows as dicts inside ``store``."""
    s = store.get(src)
    if not s or not q:
        return
    d = store.get(dst)
    if d is None:
        d = store[dst] = {}
    for j, v in s.items():
        w = d.get(j, 0) + q * v
        if w:
            d[j] = w
        else:
            del d[j]
    if not d:
        del store[dst]


def _combine(store, i, j, a11, a12, a21, a22):
    """(row i, row j) <- (a11 ri + a12 rj, a21 ri + a22 rj)."""
    ri = store.get(i, {})
    rj = store.get(j, {})
    ni, nj = {}, {}
    for k in set(ri) | set(rj):
        x = ri.get(k, 0)
        y = rj.get(k, 0)
        u = a11 * x + a12 * y
        v = a21 * x + a22 * y
        if u:
            ni[k] = u
        if v:
            nj[k] = v
    for idx, new in ((i, ni), (j, nj)):
        if new:
            store[idx] = new
        else:
            store.pop(idx, None)


class SmithForm:
    """Result of smith_normal_form: U*M*V = D.

    Iterating yields (U, D, V).  ``Vinv`` (and ``Uinv`` when requested) are
    the inverse transforms; ``diagonal`` lists the nonzero invariant factors
    in divisibility order and ``rank`` their count.
    """

    def __init__(self, U, D, V, Vinv, Uinv, diagonal):
        self.U = U
        self.D = D
        self.V = V
        self.Vinv = Vinv
        self.Uinv = Uinv
        self.diagonal = diagonal
        self.rank = len(diagonal)

    def __iter__(self):
        return iter((self.U, self.D, self.V))


def smith_normal_form(M, want_uinv=False, want_transforms=True):
    """Smith normal form with unimodular transforms.

    Pivot rule: smallest nonzero absolute value among unused rows/columns,
    ties by (row, col).  No physical swaps are done during elimination; the
    pivot order becomes a row/column permutation at the end.
    """
    m, n = M.nrows, M.ncols
    A = {i: dict(r) for i, r in M._rows.items()}
    track = want_transforms
    U = {i: {i: 1} for i in range(m)} if track else None
    UinvT = {i: {i: 1} for i in range(m)} if (track and want_uinv) else None
    VT = {j: {j: 1} for j in range(n)} if track else None
    Vinv = {j: {j: 1} for j in range(n)} if track else None

    # column supports let us find the rows touching a pivot column quickly
    colsupp = {}
    for i, r in A.items():
        for j in r:
            colsupp.setdefault(j, set()).add(i)

    def row_addmul(dst, src, q):
        # A row op plus bookkeeping for supports and transforms
        s = A.get(src)
        d = A.get(dst)
        if d is None:
            d = A[dst] = {}
        for j, v in s.items():
            w = d.get(j, 0) + q * v
            if w:
                if j not in d:
                    colsupp.setdefault(j, set()).add(dst)
                d[j] = w
            else:
                del d[j]
                colsupp[j].discard(dst)
        if not d:
            del A[dst]
        if track:
            _addmul(U, dst, src, q)
            if UinvT is not None:
                _addmul(UinvT, src, dst, -q)

    pivots = []

    while A:
        # global pivot choice; finished rows are removed from A and finished
        # columns are empty outside their pivot row
        best = min((abs(v), i, j) for i, r in A.items() for j, v in r.items())
        _, pr, pc = best
        while True:
            p = A[pr][pc]
            # clear column pc with row operations
            rem_rows = []
            for i in sorted(colsupp.get(pc, ())):
                if i == pr:
                    continue
                a = A[i][pc]
                q = _round_div(a, p)
                if q:
                    row_addmul(i, pr, -q)
                if pc in A.get(i, {}):
                    rem_rows.append(i)
            if rem_rows:
                # smaller remainder appeared in the column; move pivot there
                cand = min((abs(A[i][pc]), i) for i in rem_rows)
                pr = cand[1]
                continue
            # column is clean; clear row pr with column operations, which
            # only touch row pr because column pc is zero elsewhere
            row = A[pr]
            rem_cols = []
            for j in sorted(row):
                if j == pc:
                    continue
                a = row[j]
                q = _round_div(a, p)
                if q:
                    r = a - q * p
                    if r:
                        row[j] = r
                        rem_cols.append(j)
                    else:
                        del row[j]
                        colsupp[j].discard(pr)
                    if track:
                        # col j -= q col pc
                        _addmul(VT, j, pc, -q)
                        _addmul(Vinv, pc, j, q)
                else:
                    rem_cols.append(j)
            if rem_cols:
                cand = min((abs(row[j]), j) for j in rem_cols)
                pc = cand[1]
                continue
            break
        pivots.append([pr, pc, A[pr][pc]])
        # retire the pivot so it is not scanned again
        del A[pr]
        colsupp[pc].discard(pr)

    # order pivots by absolute value (stable), then enforce divisibility
    pivots.sort(key=lambda t: abs(t[2]))
    k = len(pivots)
    for a_idx in range(k):
        if abs(pivots[a_idx][2]) == 1:
            continue
        for b_idx in range(a_idx + 1, k):
            a = pivots[a_idx][2]
            b = pivots[b_idx][2]
            if b % a == 0:
                continue
            s, t, g = _ext_gcd(a, b)
            ri, ci = pivots[a_idx][0], pivots[a_idx][1]
            rj, cj = pivots[b_idx][0], pivots[b_idx][1]
            if track:
                _combine(U, ri, rj, s, t, -(b // g), a // g)
                if UinvT is not None:
                    _combine(UinvT, ri, rj, a // g, b // g, -t, s)
                _combine(VT, ci, cj, 1, 1, -t * (b // g), s * (a // g))
                _combine(Vinv, ci, cj, s * (a // g), t * (b // g), -1, 1)
            pivots[a_idx][2] = g
            pivots[b_idx][2] = a * b // g
    for piv in pivots:
        if piv[2] < 0:
            piv[2] = -piv[2]
            if track:
                U[piv[0]] = {j: -v for j, v in U[piv[0]].items()}
                if UinvT is not None:
                    UinvT[piv[0]] = {j: -v for j, v in UinvT[piv[0]].items()}

    diagonal = [piv[2] for piv in pivots]
    D = IntMatrix(m, n, {i: {i: d} for i, d in enumerate(diagonal)}, _trusted=True)
    if not track:
        return SmithForm(None, D, None, None, None, diagonal)

    prow = [piv[0] for piv in pivots]
    pcol = [piv[1] for piv in pivots]
    prs, pcs = set(prow), set(pcol)
    row_order = prow + [i for i in range(m) if i not in prs]
    col_order = pcol + [j for j in range(n) if j not in pcs]

    Uf = IntMatrix(m, m, {k: U[i] for k, i in enumerate(row_order) if U.get(i)}, _trusted=True)
    Vf = IntMatrix(n, n, {k: VT[j] for k, j in enumerate(col_order) if VT.get(j)}, _trusted=True).T
    Vinvf = IntMatrix(n, n, {k: Vinv[j] for k, j in enumerate(col_order) if Vinv.get(j)}, _trusted=True)
    Uinvf = None
    if UinvT is not None:
        Uinvf = IntMatrix(m, m, {k: UinvT[i] for k, i in enumerate(row_order) if UinvT.get(i)},
                          _trusted=True).T
    return SmithForm(Uf, D, Vf, Vinvf, Uinvf, diagonal)


def invariant_factors(M):
    """Nonzero invariant factors of M (no transforms)."""
    count, R = unit_pivot_reduce(M)
    return [1] * count + list(smith_normal_form(R, want_transforms=False).diagonal)


def rank(M):
    return len(invariant_factors(M))


def kernel_basis(M):
    """Columns form a Z-basis of ker M (a saturated lattice)."""
    snf = smith_normal_form(M)
    return snf.V.submatrix(range(M.ncols), range(snf.rank, M.ncols))


def membership(M, v):
    """x with M x = v if v lies in the integer column span of M, else None."""
    if len(v) != M.nrows:
        raise DimensionMismatch("vector length %d, matrix has %d rows" % (len(v), M.nrows))
    snf = smith_normal_form(M)
    return _solve_with(snf, v, M.ncols)


def _solve_with(snf, v, ncols):
    w = snf.U.apply(list(v))
    y = [0] * ncols
    for i, d in enumerate(snf.diagonal):
        if w[i] % d:
            return None
        y[i] = w[i] // d
    for i in range(len(snf.diagonal), len(w)):
        if w[i]:
            return None
    return snf.V.apply(y)


class Solver:
    """Reusable membership tests against a fixed matrix."""

    def __init__(self, M):
        self.M = M
        self.snf = smith_normal_form(M)

    def solve(self, v):
        if len(v) != self.M.nrows:
            raise DimensionMismatch("vector length mismatch")
        return _solve_with(self.snf, v, self.M.ncols)


def lattice_basis(G):
    """Columns forming a basis of the lattice spanned by the columns of G."""
    snf = smith_normal_form(G, want_uinv=True)
    r = snf.rank
    cols = []
    Ui = snf.Uinv
    for k in range(r):
        d = snf.diagonal[k]
        c = Ui.col(k)
        cols.append({i: d * v for i, v in c.items()})
    return IntMatrix.from_columns(cols, G.nrows)


def hermite_rows(vectors, n):
    """Row-style Hermite basis of the lattice spanned by integer vectors.

    Returns a list of rows with strictly increasing pivot columns, positive
    pivots and entries above each pivot reduced into [0, pivot).
    """
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not nz:
            col += 1
            continue
        # gcd reduction on column col
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            new = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                rr = [a - q * b for a, b in zip(r, p)]
                if rr[col]:
                    new.append(rr)
                elif any(rr):
                    rest.append(rr)
            nz = new
        p = nz[0]
        if p[col] < 0:
            p = [-a for a in p]
        basis.append((col, p))
        rows = rest
        col += 1
    # reduce above pivots
    out = []
    for k, (c, p) in enumerate(basis):
        out.append(p)
    for k in range(len(basis)):
        c, p = basis[k][0], out[k]
        for t in range(k):
            q = out[t][c] // p[c]
            if q:
                out[t] = [a - q * b for a, b in zip(out[t], p)]
    return out


# ---------------------------------------------------------------------------
# presented abelian groups

class PresentedAbelianGroup:
    """Finitely generated abelian group Z^g / (relation columns).

    Invariant factors are computed lazily.  ``invariants`` drops the unit
    factors: torsion orders ascending (each dividing the next) followed by
    zeros for free summands.  Canonical coordinates of an element are taken
    with respect to that decomposition.
    """

    def __init__(self, ngens, relations=None):
        self.ngens = int(ngens)
        if relations is None:
            relations = IntMatrix.zeros(self.ngens, 0)
        if relations.nrows != self.ngens:
            raise DimensionMismatch("relations must have one row per generator")
        self.relations = relations
        self._snf = None
        self._inv = None

    @classmethod
    def from_invariants(cls, invs):
        invs = [int(d) for d in invs]
        g = cls(len(invs), IntMatrix.diag(invs, len(invs), len(invs)))
        return g

    def _compute(self):
        if self._inv is not None:
            return
        snf = smith_normal_form(self.relations)
        self._snf = snf
        d = list(snf.diagonal) + [0] * (self.ngens - snf.rank)
        keep = [i for i, x in enumerate(d) if x != 1]
        self._keep = keep
        self._inv = [d[i] for i in keep]

    @property
    def invariants(self):
        self._compute()
        return list(self._inv)

    def torsion(self):
        return [d for d in self.invariants if d]

    def free_rank(self):
        return sum(1 for d in self.invariants if d == 0)

    def order(self):
        """Order of the group, or None if infinite."""
        o = 1
        for d in self.invariants:
            if d == 0:
                return None
            o *= d
        return o

    def is_trivial(self):
        return not self.invariants

    def to_canonical(self, v):
        """Generator coordinates -> canonical coordinates (reduced)."""
        self._compute()
        w = self._snf.U.apply(list(v))
        out = [w[i] for i in self._keep]
        return self.reduce(out)

    def from_canonical(self, c):
        self._compute()
        if self._snf.Uinv is None:
            self._snf = smith_normal_form(self.relations, want_uinv=True)
        w = [0] * self.ngens
        for k, i in enumerate(self._keep):
            w[i] = c[k]
        return self._snf.Uinv.apply(w)

    def reduce(self, c):
        return [x % d if d else x for x, d in zip(c, self.invariants)]

    def is_zero_element(self, c):
        return not any(self.reduce(c))

    def elements(self):
        """All canonical elements of a finite group, in lexicographic order."""
        invs = self.invariants
        if any(d == 0 for d in invs):
            raise ValueError("group is infinite")
        out = [[]]
        for d in invs:
            out = [e + [x] for e in out for x in range(d)]
        return out

    def __eq__(self, other):
        if not isinstance(other, PresentedAbelianGroup):
            return NotImplemented
        return self.invariants == other.invariants

    def __hash__(self):
        return hash(tuple(self.invariants))

    def describe(self):
        parts = []
        for d in self.invariants:
            parts.append("Z" if d == 0 else "Z/%d" % d)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "PresentedAbelianGroup(%s)" % self.describe()


class AbHom:
    """Homomorphism between presented groups in canonical coordinates."""

    def __init__(self, source, target, matrix, check=True):
        self.source = source
        self.target = target
        if isinstance(matrix, IntMatrix):
            self.matrix = matrix
        else:
            self.matrix = IntMatrix.from_dense(matrix, ncols=len(source.invariants))
        ns, nt = len(source.invariants), len(target.invariants)
        if self.matrix.shape != (nt, ns):
            raise DimensionMismatch("AbHom matrix shape %s, expected %s" % (self.matrix.shape, (nt, ns)))
        if check:
            self.check()

    def check(self):
        invs = self.source.invariants
        for i, d in enumerate(invs):
            if d == 0:
                continue
            col = [0] * len(invs)
            col[i] = d
            if not self.target.is_zero_element(self.matrix.apply(col)):
                raise NotWellDefined("generator %d of order %d does not map to a killed element" % (i, d))

    def __call__(self, x):
        return self.target.reduce(self.matrix.apply(list(x)))

    def compose(self, other):
        """self after other."""
        if other.target.invariants != self.source.invariants:
            raise DimensionMismatch("composition of incompatible maps")
        return AbHom(other.source, self.target, self.matrix @ other.matrix)

    def _ambient(self):
        """Image generators plus target relations as one integer matrix."""
        tinv = self.target.invariants
        rel = IntMatrix.diag(tinv, len(tinv), len(tinv))
        return hstack([self.matrix, rel]) if len(tinv) else self.matrix

    def image_lattice(self):
        return image_lattice(self)

    def kernel_lattice(self):
        return kernel_lattice(self)

    def is_injective(self):
        K = kernel_lattice(self)
        return lattice_equal(K, relation_lattice(self.source), len(self.source.invariants))

    def is_surjective(self):
        n = len(self.target.invariants)
        return lattice_equal(image_lattice(self), IntMatrix.identity(n), n)

    def is_isomorphism(self):
        return self.is_injective() and self.is_surjective()


def relation_lattice(G):
    invs = G.invariants
    return IntMatrix.diag(invs, len(invs), len(invs))


def image_lattice(f):
    """Lattice in target coordinates: image plus target relations."""
    return f._ambient()


def preimage_lattice(F, L, nsrc):
    """{x in Z^nsrc : F x in span(L)} as generating columns."""
    if L.ncols == 0:
        big = F
    else:
        big = hstack([F, -L])
    K = kernel_basis(big)
    return K.submatrix(range(nsrc), range(K.ncols))


def kernel_lattice(f):
    """Lattice in source coordinates: x with f(x) = 0, including relations."""
    ns = len(f.source.invariants)
    tinv = f.target.invariants
    rel = IntMatrix.diag(tinv, len(tinv), len(tinv))
    P = preimage_lattice(f.matrix, rel, ns)
    return hstack([P, relation_lattice(f.source)])


def lattice_contains(L, v):
    if L.ncols == 0:
        return not any(v)
    return membership(L, list(v)) is not None


def lattice_le(L1, L2, n):
    """span(L1) inside span(L2)."""
    if L1.ncols == 0:
        return True
    if L2.ncols == 0:
        return L1.is_zero()
    s = Solver(L2)
    for j in range(L1.ncols):
        c = L1.col(j)
        v = [c.get(i, 0) for i in range(n)]
        if s.solve(v) is None:
            return False
    return True


def lattice_equal(L1, L2, n):
    return lattice_le(L1, L2, n) and lattice_le(L2, L1, n)


def lattice_sum(*Ls):
    Ls = [L for L in Ls if L.ncols]
    if not Ls:
        return None
    return hstack(Ls)


def lattice_intersection(L1, L2, n):
    if L1.ncols == 0 or L2.ncols == 0:
        return IntMatrix.zeros(n, 0)
    P = preimage_lattice(L1, L2, L1.ncols)
    return L1 @ P


# ---------------------------------------------------------------------------
# subquotients and homology

class Subquotient:
    """The group span(K) / span(B) where span(B) lies in span(K).

    K must have independent columns.  ``project`` sends a vector of span(K)
    to canonical coordinates, ``lift`` goes back to an ambient vector.
    """

    def __init__(self, K, B):
        self.ambient = K.nrows
        self.K = K
        k = K.ncols
        self._ksolver = Solver(K) if k else None
        # express boundaries in K-coordinates
        cols = []
        for j in range(B.ncols):
            c = B.col(j)
            v = [c.get(i, 0) for i in range(K.nrows)]
            y = self._coords(v)
            if y is None:
                raise CompositionNotZero("boundary column %d is not inside the cycle lattice" % j)
            cols.append(y)
        R = IntMatrix.from_columns(cols, k) if cols else IntMatrix.zeros(k, 0)
        self.R = R
        snf = smith_normal_form(R, want_uinv=True)
        self._snf = snf
        d = list(snf.diagonal) + [0] * (k - snf.rank)
        self._keep = [i for i, x in enumerate(d) if x != 1]
        self.group = PresentedAbelianGroup.from_invariants([d[i] for i in self._keep])

    def _coords(self, v):
        if self._ksolver is None:
            return [] if not any(v) else None
        return self._ksolver.solve(v)

    def contains(self, v):
        return self._coords(v) is not None

    def project(self, v):
        y = self._coords(list(v))
        if y is None:
            raise ValueError("vector does not lie in the cycle lattice")
        w = self._snf.U.apply(y) if y else []
        return self.group.reduce([w[i] for i in self._keep])

    def lift(self, c):
        k = self.K.ncols
        w = [0] * k
        for t, i in enumerate(self._keep):
            w[i] = int(c[t])
        y = self._snf.Uinv.apply(w) if k else []
        return self.K.apply(y) if k else [0] * self.ambient

    def generators(self):
        """Ambient lifts of the canonical generators."""
        n = len(self._keep)
        out = []
        for t in range(n):
            e = [0] * n
            e[t] = 1
            out.append(self.lift(e))
        return out


def homology_at(d_in, d_out):
    """ker(d_out) / im(d_in) with projection and lifting helpers.

    Returns (PresentedAbelianGroup, Subquotient).
    """
    if d_in.nrows != d_out.ncols:
        raise DimensionMismatch("d_in has %d rows, d_out has %d cols" % (d_in.nrows, d_out.ncols))
    if not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out * d_in is not zero")
    K = kernel_basis(d_out)
    sq = Subquotient(K, d_in)
    return sq.group, sq


# ---------------------------------------------------------------------------
# unit pivot pre-elimination

def unit_pivot_reduce(M):
    """Eliminate +-1 pivots exactly, Markowitz-style on row length.

    Returns (count, R) where M is equivalent over Z to diag(1,..,1) (+) R
    with ``count`` ones; R keeps all rows that were not used as pivots,
    including zero rows, so coker M = coker R.
    """
    import heapq
    rows = {i: dict(r) for i, r in M._rows.items() if r}
    cols = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    used_cols = set()
    used_rows = set()
    while heap:
        ln, i = heapq.heappop(heap)
        r = rows.get(i)
        if r is None or len(r) != ln:
            continue
        best = None
        for j, v in r.items():
            if v == 1 or v == -1:
                c = len(cols[j])
                if best is None or c < best[0]:
                    best = (c, j)
        if best is None:
            continue
        j = best[1]
        v = r[j]
        del rows[i]
        used_rows.add(i)
        for jj in r:
            cols[jj].discard(i)
        for i2 in list(cols[j]):
            r2 = rows[i2]
            f = r2[j] * v
            for jj, x in r.items():
                y = r2.get(jj, 0) - f * x
                if y:
                    if jj not in r2:
                        cols[jj].add(i2)
                    r2[jj] = y
                elif jj in r2:
                    del r2[jj]
                    cols[jj].discard(i2)
            heapq.heappush(heap, (len(r2), i2))
        del cols[j]
        used_cols.add(j)
    keep_rows = [i for i in range(M.nrows) if i not in used_rows]
    keep_cols = [j for j in range(M.ncols) if j not in used_cols]
    rpos = {i: k for k, i in enumerate(keep_rows)}
    cpos = {j: k for k, j in enumerate(keep_cols)}
    out = {}
    for i, r in rows.items():
        if r:
            out[rpos[i]] = {cpos[j]: v for j, v in r.items()}
    return len(used_rows), IntMatrix(len(keep_rows), len(keep_cols), out, _trusted=True)


# ---------------------------------------------------------------------------
# local invariant factors (fast path for large finite cokernels)

def _local_valuations(a, p, k):
    """Valuations of the Smith form of an int64 matrix over Z/p^k.

    Returns a list of exponents v < k, one per invariant factor whose p-part
    is p^v; factors divisible by p^k are not reported.
    """
    import numpy as np
    q = p ** k
    A = np.mod(np.asarray(a, dtype=np.int64), q)
    out = []
    shift = 0
    while A.size and shift < k:
        while True:
            mask = (A % p) != 0
            if not mask.any():
                break
            flat = int(np.argmax(mask))
            i, j = divmod(flat, A.shape[1])
            piv = int(A[i, j])
            inv = pow(piv, -1, q)
            prow = (A[i] * inv) % q
            col = A[:, j].copy()
            A = (A - np.outer(col, prow)) % q
            A = np.delete(np.delete(A, i, axis=0), j, axis=1)
            out.append(shift)
            if not A.size:
                break
        if not A.size or not A.any():
            break
        A = A // p
        shift += 1
        q //= p
        A %= q
    return out


def local_torsion_invariants(M, primes):
    """Torsion invariant factors of coker M assuming they only involve the
    given primes with the given exponent bounds.

    ``primes`` maps p -> e with p^e annihilating the torsion p-part.  The
    computation runs over Z/p^(e+1), so it is exact under that assumption.
    """
    import numpy as np
    if not isinstance(M, IntMatrix):
        M = IntMatrix.from_scipy(M) if hasattr(M, "tocoo") else IntMatrix.from_dense(M)
    _, R = unit_pivot_reduce(M)
    parts = {}
    for p, e in sorted(primes.items()):
        q = p ** (e + 1)
        dense = np.zeros(R.shape, dtype=np.int64)
        for i, j, v in R.triples:
            dense[i, j] = v % q
        vals = [v for v in _local_valuations(dense, p, e + 1) if v > 0]
        parts[p] = sorted(vals)
    # assemble invariant factors from p-parts: largest with largest
    n = max((len(v) for v in parts.values()), default=0)
    invs = [1] * n
    for p, vals in parts.items():
        vals = [0] * (n - len(vals)) + vals
        for t in range(n):
            invs[t] *= p ** vals[t]
    return [d for d in invs if d != 1]
