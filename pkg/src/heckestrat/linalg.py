"""Dense exact linear algebra over any residue field from ringtower.

Matrices are lists of rows. Over prime fields the work is handed to flint's
nmod_mat; everywhere else a plain Gauss-Jordan elimination is used, picking
the cheapest available pivot in each column (this keeps rational-function
entries small).
"""

from __future__ import annotations

import flint


def zeros(F, m, n):
    return [[F.zero] * n for _ in range(m)]


def identity(F, n):
    out = zeros(F, n, n)
    for i in range(n):
        out[i][i] = F.one
    return out


def transpose(M, ncols=None):
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(F, A, B):
    if not A:
        return []
    n = len(B[0]) if B else 0
    Bt = transpose(B, n)
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if not F.is_zero(a)]
        new = []
        for col in Bt:
            acc = F.zero
            for k, a in nz:
                b = col[k]
                if not F.is_zero(b):
                    acc = acc + a * b
            new.append(acc)
        out.append(new)
    return out


class MatOp:
    """A matrix prepared for applying to many vectors: nmod_mat over prime
    fields, sparse rows elsewhere."""

    def __init__(self, F, A, ncols=None):
        self.F = F
        self.m = len(A)
        self.n = len(A[0]) if A else (ncols or 0)
        if _use_nmod(F):
            self.M = flint.nmod_mat(self.m, self.n, [int(a) for row in A for a in row], F.p)
        else:
            self.M = None
            self.rows = [[(j, a) for j, a in enumerate(row) if not F.is_zero(a)] for row in A]

    def apply_many(self, vecs):
        F = self.F
        if not vecs:
            return []
        if self.M is not None:
            k = len(vecs)
            X = flint.nmod_mat(self.n, k, [int(v[j]) for j in range(self.n) for v in vecs], F.p)
            Y = self.M * X
            return [[flint.nmod(int(Y[i, c]), F.p) for i in range(self.m)] for c in range(k)]
        out = []
        for v in vecs:
            w = []
            for row in self.rows:
                acc = F.zero
                for j, a in row:
                    b = v[j]
                    if not F.is_zero(b):
                        acc = acc + a * b
                w.append(acc)
            out.append(w)
        return out


def spin_space(F, n, vecs, ops, S=None):
    """Smallest subspace containing S and vecs that is stable under the
    MatOps ops. Each round applies the ops to the new part only: rows of
    the echelon basis whose pivots are new span a complement of the old
    space."""
    S = S if S is not None else Subspace.zero(F, n)
    new = S.add_vectors(vecs) if vecs else S
    while new.dim > S.dim:
        old = set(S.pivots)
        frontier = [row for row, p in zip(new.basis, new.pivots) if p not in old]
        S = new
        imgs = []
        for op in ops:
            imgs.extend(op.apply_many(frontier))
        new = S.add_vectors(imgs)
    return S


def matvec(F, A, v):
    out = []
    for row in A:
        acc = F.zero
        for a, b in zip(row, v):
            if not F.is_zero(a) and not F.is_zero(b):
                acc = acc + a * b
        out.append(acc)
    return out


def vecmat(F, v, A):
    n = len(A[0]) if A else 0
    out = [F.zero] * n
    for a, row in zip(v, A):
        if F.is_zero(a):
            continue
        for j, b in enumerate(row):
            if not F.is_zero(b):
                out[j] = out[j] + a * b
    return out


def add(F, A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(F, A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(F, c, A):
    return [[c * a for a in row] for row in A]


def is_zero_matrix(F, A):
    return all(F.is_zero(a) for row in A for a in row)


def mat_eq(F, A, B):
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(F.is_zero(a - b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def is_zero_vector(F, v):
    return all(F.is_zero(a) for a in v)


# ---------------------------------------------------------------------------
# Elimination


def _use_nmod(F):
    return getattr(F, "is_finite", False) and getattr(F, "prime", False)


def _rref_nmod(F, rows, ncols):
    p = F.p
    M = flint.nmod_mat(len(rows), ncols, [int(a) for row in rows for a in row], p)
    R, rank = M.rref()
    out = []
    pivots = []
    for i in range(rank):
        row = [R[i, j] for j in range(ncols)]
        for j in range(ncols):
            if int(row[j]) != 0:
                pivots.append(j)
                break
        out.append([flint.nmod(int(a), p) for a in row])
    return out, pivots


def rref(F, rows, ncols=None):
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows or ncols == 0:
        return [], []
    if _use_nmod(F):
        return _rref_nmod(F, rows, ncols)
    pivots = []
    r = 0
    m = len(rows)
    for c in range(ncols):
        best = None
        best_size = None
        for i in range(r, m):
            a = rows[i][c]
            if not F.is_zero(a):
                s = F.size(a)
                if best is None or s < best_size:
                    best, best_size = i, s
                    if s == 0:
                        break
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        inv = F.one / piv
        rows[r] = [a * inv if not F.is_zero(a) else F.zero for a in rows[r]]
        rows[r][c] = F.one
        prow = rows[r]
        nz = [j for j in range(c, ncols) if not F.is_zero(prow[j])]
        for i in range(m):
            if i == r:
                continue
            f = rows[i][c]
            if F.is_zero(f):
                continue
            row = rows[i]
            for j in nz:
                row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows[:r], pivots


def rank(F, rows, ncols=None):
    if _use_nmod(F) and rows:
        n = ncols if ncols is not None else len(rows[0])
        if n == 0:
            return 0
        return flint.nmod_mat(len(rows), n, [int(a) for row in rows for a in row], F.p).rank()
    return len(rref(F, rows, ncols)[0])


def nullspace(F, M, ncols=None):
    """Basis of {v : M v = 0} as a list of vectors."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [[F.one if i == j else F.zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(F, M, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [F.zero] * ncols
        v[free] = F.one
        for row, pc in zip(R, pivots):
            a = row[free]
            if not F.is_zero(a):
                v[pc] = -a
        basis.append(v)
    return basis


def left_nullspace(F, M, nrows=None):
    """Basis of {x : x M = 0}."""
    if nrows is None:
        nrows = len(M)
    ncols = len(M[0]) if M else 0
    if ncols == 0:
        return [[F.one if i == j else F.zero for i in range(nrows)] for j in range(nrows)]
    return nullspace(F, transpose(M), nrows)


def solve(F, A, b):
    """Some x with A x = b, or None."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(F, aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [F.zero] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return x


def solve_left(F, A, b):
    """Some x with x A = b, or None."""
    return solve(F, transpose(A, len(A)), b) if A else (None if not is_zero_vector(F, b) else [])


def inverse(F, A):
    n = len(A)
    aug = [list(row) + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(F, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def det(F, A):
    """Determinant by elimination."""
    n = len(A)
    rows = [list(r) for r in A]
    d = F.one
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not F.is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            return F.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        p = rows[c][c]
        d = d * p
        inv = F.one / p
        for i in range(c + 1, n):
            f = rows[i][c]
            if F.is_zero(f):
                continue
            f = f * inv
            for j in range(c, n):
                rows[i][j] = rows[i][j] - f * rows[c][j]
    return d


# ---------------------------------------------------------------------------
# Subspaces of F^n, spanned by row vectors


class Subspace:
    """Row span kept in reduced echelon form."""

    def __init__(self, F, n, rows=(), _reduced=None):
        self.F = F
        self.n = n
        if _reduced is not None:
            self.basis, self.pivots = _reduced
        else:
            rows = [list(r) for r in rows]
            self.basis, self.pivots = rref(F, rows, n) if rows else ([], [])

    @classmethod
    def full(cls, F, n):
        return cls(F, n, _reduced=(identity(F, n), list(range(n))))

    @classmethod
    def zero(cls, F, n):
        return cls(F, n, _reduced=([], []))

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return self.dim

    def coords(self, v):
        """Coordinates of v in the echelon basis, or None if v is outside."""
        F = self.F
        c = [v[p] for p in self.pivots]
        w = list(v)
        for ci, row in zip(c, self.basis):
            if F.is_zero(ci):
                continue
            for j, a in enumerate(row):
                if not F.is_zero(a):
                    w[j] = w[j] - ci * a
        if not is_zero_vector(F, w):
            return None
        return c

    def contains(self, v):
        return self.coords(v) is not None

    def contains_space(self, other):
        return all(self.contains(v) for v in other.basis)

    def __eq__(self, other):
        return self.dim == other.dim and self.contains_space(other)

    def sum(self, other):
        return Subspace(self.F, self.n, self.basis + other.basis)

    def add_vectors(self, vecs):
        return Subspace(self.F, self.n, self.basis + [list(v) for v in vecs])

    def intersect(self, other):
        F = self.F
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(F, self.n)
        # x A = y B  <=>  (x, -y) [A; B] = 0
        stacked = self.basis + other.basis
        ker = left_nullspace(F, stacked)
        vecs = [vecmat(F, k[: self.dim], self.basis) for k in ker]
        return Subspace(F, self.n, vecs)

    def complement_basis(self):
        """Standard basis vectors spanning a complement."""
        piv = set(self.pivots)
        F = self.F
        return [[F.one if i == j else F.zero for i in range(self.n)] for j in range(self.n) if j not in piv]

    def image(self, M):
        """Span of v M for v in the space (M an n x k matrix)."""
        k = len(M[0]) if M else 0
        return Subspace(self.F, k, [vecmat(self.F, v, M) for v in self.basis])
