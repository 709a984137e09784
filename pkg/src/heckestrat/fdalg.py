"""Finite-dimensional algebras over a residue field, given by structure
constants, and their left modules given by action matrices.

Hom spaces are computed from a presentation: a module M is written as a
quotient of a sum of cyclic projectives B e_i, and Hom(M, N) is the set of
tuples (n_i) with n_i in e_i N killed by the relations. The naive
commutation solver is kept for cross-checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import flint

from . import linalg as la


class NotAnIdeal(ValueError):
    pass


class NotIdempotent(ValueError):
    pass


# ---------------------------------------------------------------------------
# Algebras


class FieldAlgebra:
    """Algebra with basis b_0..b_{n-1}; prod[(i, j)] = [(k, c), ...] gives b_i b_j."""

    def __init__(self, F, dim, prod, unit=None, labels=None, idempotents=None, name=""):
        self.F = F
        self.dim = dim
        self.prod = {key: val for key, val in prod.items() if val}
        self.labels = labels or [f"b{i}" for i in range(dim)]
        self.name = name
        self._by_left = {}
        for (i, j), val in self.prod.items():
            self._by_left.setdefault(i, []).append((j, val))
        self._unit = unit
        self.idempotents = idempotents  # optional list of vectors (orthogonal, sum to 1)
        self._lmats = {}

    # -- vectors
    def zero(self):
        return [self.F.zero] * self.dim

    def basis_vec(self, i):
        v = self.zero()
        v[i] = self.F.one
        return v

    def add(self, x, y):
        return [a + b for a, b in zip(x, y)]

    def sub(self, x, y):
        return [a - b for a, b in zip(x, y)]

    def scale(self, c, x):
        return [c * a for a in x]

    def is_zero(self, x):
        return la.is_zero_vector(self.F, x)

    def mul(self, x, y):
        F = self.F
        out = [F.zero] * self.dim
        ynz = {j: b for j, b in enumerate(y) if not F.is_zero(b)}
        if not ynz:
            return out
        for i, a in enumerate(x):
            if F.is_zero(a):
                continue
            for j, val in self._by_left.get(i, ()):
                b = ynz.get(j)
                if b is None:
                    continue
                ab = a * b
                for k, c in val:
                    out[k] = out[k] + ab * c
        return out

    def unit(self):
        if self._unit is None:
            # solve u b_j = b_j for all j
            F = self.F
            rows = []
            rhs = []
            for j in range(self.dim):
                for k in range(self.dim):
                    rows.append([self._coef(i, j, k) for i in range(self.dim)])
                    rhs.append(F.one if j == k else F.zero)
            u = la.solve(F, rows, rhs)
            if u is None:
                raise ValueError("algebra has no unit")
            self._unit = u
        return self._unit

    def _coef(self, i, j, k):
        for kk, c in self.prod.get((i, j), ()):
            if kk == k:
                return c
        return self.F.zero

    def left_matrix(self, x):
        """Matrix of y -> x y (column j = x b_j)."""
        cols = [self.mul(x, self.basis_vec(j)) for j in range(self.dim)]
        return la.transpose(cols, self.dim)

    def basis_left_matrix(self, i):
        if i not in self._lmats:
            F = self.F
            M = la.zeros(F, self.dim, self.dim)
            for j, val in self._by_left.get(i, ()):
                for k, c in val:
                    M[k][j] = c
            self._lmats[i] = M
        return self._lmats[i]

    def right_matrix(self, x):
        cols = [self.mul(self.basis_vec(j), x) for j in range(self.dim)]
        return la.transpose(cols, self.dim)

    def power(self, x, k):
        out = self.unit()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def is_associative(self, trials=None, rng=None):
        idx = range(self.dim)
        triples = [(i, j, k) for i in idx for j in idx for k in idx]
        if trials is not None:
            rng = rng or random.Random(0)
            triples = rng.sample(triples, min(trials, len(triples)))
        for i, j, k in triples:
            a, b, c = self.basis_vec(i), self.basis_vec(j), self.basis_vec(k)
            if not la.is_zero_vector(self.F, self.sub(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c)))):
                return False
        return True

    # -- subspaces
    def span(self, vecs):
        return la.Subspace(self.F, self.dim, vecs)

    def product_space(self, U, V):
        return self.span([self.mul(u, v) for u in U.basis for v in V.basis])

    def left_ideal(self, vecs):
        """B * span(vecs)."""
        return self._close(vecs, left=True, right=False)

    def right_ideal(self, vecs):
        return self._close(vecs, left=False, right=True)

    def two_sided_ideal(self, vecs):
        return self._close(vecs, left=True, right=True)

    def generators(self):
        """A small set of basis indices generating B as a unital algebra."""
        if getattr(self, "_gens", None) is None:
            one = self.unit()
            chosen = []
            sub = self.span([one])
            current = self._subalgebra_closure(sub, [])
            for i in range(self.dim):
                v = self.basis_vec(i)
                if current.contains(v):
                    continue
                chosen.append(i)
                current = self._subalgebra_closure(current, [v])
                if current.dim == self.dim:
                    break
            self._gens = chosen
        return self._gens

    def _subalgebra_closure(self, S, new):
        S = S.add_vectors(new)
        frontier = list(S.basis)
        while frontier:
            nxt = []
            basis = list(S.basis)
            for a in frontier:
                for b in basis:
                    for p in (self.mul(a, b), self.mul(b, a)):
                        if not S.contains(p):
                            S = S.add_vectors([p])
                            nxt.append(p)
            frontier = nxt
        return S

    def _close(self, vecs, left, right):
        S = self.span(vecs)
        gens = [self.basis_vec(i) for i in self.generators()]
        frontier = list(S.basis)
        while frontier:
            nxt = []
            for v in frontier:
                for g in gens:
                    cands = []
                    if left:
                        cands.append(self.mul(g, v))
                    if right:
                        cands.append(self.mul(v, g))
                    for p in cands:
                        if not S.contains(p):
                            S = S.add_vectors([p])
                            nxt.append(p)
            frontier = nxt
        return S

    def is_ideal(self, U):
        for v in U.basis:
            for i in range(self.dim):
                b = self.basis_vec(i)
                if not U.contains(self.mul(b, v)) or not U.contains(self.mul(v, b)):
                    return False
        return True

    def is_idempotent_elt(self, e):
        return la.is_zero_vector(self.F, self.sub(self.mul(e, e), e))

    # -- derived algebras
    def quotient(self, U):
        """B / U for a two-sided ideal U, on the non-pivot coordinates."""
        F = self.F
        piv = set(U.pivots)
        keep = [k for k in range(self.dim) if k not in piv]
        pos = {k: i for i, k in enumerate(keep)}

        def proj(v):
            w = list(v)
            for row, p in zip(U.basis, U.pivots):
                c = w[p]
                if not F.is_zero(c):
                    w = [a - c * b for a, b in zip(w, row)]
            return [w[k] for k in keep]

        prod = {}
        for a in keep:
            for b in keep:
                p = proj(self.mul(self.basis_vec(a), self.basis_vec(b)))
                nz = [(i, c) for i, c in enumerate(p) if not F.is_zero(c)]
                if nz:
                    prod[(pos[a], pos[b])] = nz
        idem = None
        if self.idempotents is not None:
            idem = [proj(e) for e in self.idempotents]
        Q = FieldAlgebra(F, len(keep), prod, unit=proj(self.unit()), labels=[self.labels[k] for k in keep], idempotents=idem, name=f"{self.name}/J")
        Q.projection = proj
        Q.lift = lambda v: _lift(F, v, keep, self.dim)
        return Q

    def subalgebra(self, vecs, unit=None):
        """Algebra on a subspace closed under products (e.g. a corner eBe)."""
        F = self.F
        S = self.span(vecs)
        n = S.dim
        prod = {}
        for a in range(n):
            for b in range(n):
                c = S.coords(self.mul(S.basis[a], S.basis[b]))
                if c is None:
                    raise ValueError("subspace is not closed under multiplication")
                nz = [(i, x) for i, x in enumerate(c) if not F.is_zero(x)]
                if nz:
                    prod[(a, b)] = nz
        u = S.coords(unit) if unit is not None else None
        C = FieldAlgebra(F, n, prod, unit=u, name=f"sub({self.name})")
        C.embedding = S
        return C

    def corner(self, e):
        """eBe as an algebra with unit e."""
        vecs = [self.mul(self.mul(e, self.basis_vec(i)), e) for i in range(self.dim)]
        return self.subalgebra(vecs, unit=e)

    # -- trace form
    def trace_vector(self):
        """tr[k] = trace of left multiplication by b_k."""
        F = self.F
        tr = [F.zero] * self.dim
        for (i, j), val in self.prod.items():
            for k, c in val:
                if k == j:
                    tr[i] = tr[i] + c
        return tr

    def trace_gram(self):
        F = self.F
        tr = self.trace_vector()
        G = la.zeros(F, self.dim, self.dim)
        for (i, j), val in self.prod.items():
            acc = F.zero
            for k, c in val:
                if not F.is_zero(tr[k]):
                    acc = acc + c * tr[k]
            G[i][j] = acc
        return G

    def regular_module(self):
        return FAModule(self, self.dim, [self.basis_left_matrix(i) for i in range(self.dim)], name="regular")


def _lift(F, v, keep, n):
    out = [F.zero] * n
    for i, k in enumerate(keep):
        out[k] = v[i]
    return out


def matrix_algebra(F, n):
    """M_n(F) with matrix units E_ij at index i*n+j."""
    prod = {}
    for i in range(n):
        for j in range(n):
            for l in range(n):
                prod[(i * n + j, j * n + l)] = [(i * n + l, F.one)]
    return FieldAlgebra(F, n * n, prod, labels=[f"E{i}{j}" for i in range(n) for j in range(n)], name=f"M{n}")


def upper_triangular_algebra(F, n):
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {ij: k for k, ij in enumerate(idx)}
    prod = {}
    for (i, j) in idx:
        for (j2, l) in idx:
            if j == j2:
                prod[(pos[(i, j)], pos[(j2, l)])] = [(pos[(i, l)], F.one)]
    return FieldAlgebra(F, len(idx), prod, labels=[f"E{i}{j}" for i, j in idx], name=f"UT{n}")


def algebra_from_matrices(F, mats, name=""):
    """The algebra spanned by (and closed under products of) the given
    matrices, with the basis in echelon form of their flattenings."""
    n = len(mats[0])
    flat = lambda M: [a for row in M for a in row]
    unflat = lambda v: [v[i * n:(i + 1) * n] for i in range(n)]
    S = la.Subspace(F, n * n, [flat(la.identity(F, n))] + [flat(M) for M in mats])
    frontier = list(S.basis)
    while frontier:
        nxt = []
        basis = list(S.basis)
        for a in frontier:
            for b in basis:
                for p in (la.matmul(F, unflat(a), unflat(b)), la.matmul(F, unflat(b), unflat(a))):
                    v = flat(p)
                    if not S.contains(v):
                        S = S.add_vectors([v])
                        nxt.append(v)
        frontier = nxt
    d = S.dim
    prod = {}
    for i in range(d):
        for j in range(d):
            c = S.coords(flat(la.matmul(F, unflat(S.basis[i]), unflat(S.basis[j]))))
            nz = [(k, x) for k, x in enumerate(c) if not F.is_zero(x)]
            if nz:
                prod[(i, j)] = nz
    A = FieldAlgebra(F, d, prod, unit=S.coords(flat(la.identity(F, n))), name=name)
    A.matrix_basis = [unflat(v) for v in S.basis]
    return A


# ---------------------------------------------------------------------------
# Modules


@dataclass
class FAModule:
    """Left module: act[i] is the matrix of b_i (column j = b_i m_j)."""

    B: FieldAlgebra
    dim: int
    act: list
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def F(self):
        return self.B.F

    def elt_matrix(self, x):
        F = self.F
        M = la.zeros(F, self.dim, self.dim)
        for i, a in enumerate(x):
            if F.is_zero(a):
                continue
            A = self.act[i]
            for r in range(self.dim):
                row = A[r]
                Mr = M[r]
                for c in range(self.dim):
                    if not F.is_zero(row[c]):
                        Mr[c] = Mr[c] + a * row[c]
        return M

    def apply(self, x, v):
        return la.matvec(self.F, self.elt_matrix(x), v)

    def gen_mats(self):
        return [self.act[i] for i in self.B.generators()]

    def spin(self, vecs):
        """Submodule generated by vecs."""
        ops = getattr(self, "_ops", None)
        if ops is None:
            ops = self._ops = [la.MatOp(self.F, M, self.dim) for M in self.gen_mats()]
        return la.spin_space(self.F, self.dim, vecs, ops)

    def submodule(self, S):
        """Module on the subspace S (assumed stable)."""
        F = self.F
        act = []
        for A in self.act:
            cols = []
            for v in S.basis:
                c = S.coords(la.matvec(F, A, v))
                if c is None:
                    raise ValueError("subspace is not a submodule")
                cols.append(c)
            act.append(la.transpose(cols, S.dim) if cols else [])
        out = FAModule(self.B, S.dim, act, f"sub({self.name})")
        out.embedding = S
        return out

    def quotient(self, S):
        F = self.F
        piv = set(S.pivots)
        keep = [k for k in range(self.dim) if k not in piv]

        def proj(v):
            w = list(v)
            for row, p in zip(S.basis, S.pivots):
                c = w[p]
                if not F.is_zero(c):
                    w = [a - c * b for a, b in zip(w, row)]
            return [w[k] for k in keep]

        act = []
        for A in self.act:
            cols = [proj([A[r][k] for r in range(self.dim)]) for k in keep]
            act.append(la.transpose(cols, len(keep)) if cols else [])
        out = FAModule(self.B, len(keep), act, f"quot({self.name})")
        out.projection = proj
        out.keep = keep
        return out

    def image_of(self, x):
        """x M as a subspace."""
        M = self.elt_matrix(x)
        return la.Subspace(self.F, self.dim, la.transpose(M, self.dim))

    def radical_submodule(self, rad):
        """rad(B) M for rad given as a subspace of B."""
        vecs = []
        for r in rad.basis:
            M = self.elt_matrix(r)
            vecs.extend(la.transpose(M, self.dim))
        return self.spin(vecs) if vecs else la.Subspace.zero(self.F, self.dim)

    def dual(self, Bop=None):
        """Transposed action: a right module seen as a left module over B^op."""
        return FAModule(Bop or self.B, self.dim, [la.transpose(A, self.dim) for A in self.act], f"dual({self.name})")

    def is_module(self):
        B = self.B
        F = self.F
        for i in range(B.dim):
            for j in range(B.dim):
                lhs = la.matmul(F, self.act[i], self.act[j])
                rhs = self.elt_matrix(B.mul(B.basis_vec(i), B.basis_vec(j)))
                if not la.mat_eq(F, lhs, rhs):
                    return False
        return la.mat_eq(F, self.elt_matrix(B.unit()), la.identity(F, self.dim))

    def direct_sum(self, other):
        F = self.F
        n, m = self.dim, other.dim
        act = []
        for A, C in zip(self.act, other.act):
            M = la.zeros(F, n + m, n + m)
            for i in range(n):
                M[i][:n] = list(A[i])
            for i in range(m):
                M[n + i][n:] = list(C[i])
            act.append(M)
        return FAModule(self.B, n + m, act, f"{self.name}+{other.name}")


def left_ideal_module(B, U, name="ideal"):
    """The left ideal U of B as a module."""
    F = B.F
    act = []
    for i in range(B.dim):
        b = B.basis_vec(i)
        cols = []
        for u in U.basis:
            c = U.coords(B.mul(b, u))
            if c is None:
                raise NotAnIdeal("subspace is not a left ideal")
            cols.append(c)
        act.append(la.transpose(cols, U.dim) if cols else [])
    M = FAModule(B, U.dim, act, name)
    M.embedding = U
    return M


def cyclic_projective(B, e, name=None):
    """B e as a left module."""
    U = B.span([B.mul(B.basis_vec(i), e) for i in range(B.dim)])
    return left_ideal_module(B, U, name or "Be")


def corner_module(B, M, e):
    """e M as a subspace of M."""
    return M.image_of(e)


# ---------------------------------------------------------------------------
# Hom spaces


def hom_space_naive(M: FAModule, N: FAModule):
    """Basis of Hom_B(M, N) by solving X A_g = C_g X for algebra generators g."""
    F = M.F
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    rows = []
    for g in M.B.generators():
        A, C = M.act[g], N.act[g]
        for i in range(n):
            for j in range(m):
                row = [F.zero] * (n * m)
                for k in range(m):
                    a = A[k][j]
                    if not F.is_zero(a):
                        row[i * m + k] = row[i * m + k] + a
                for k in range(n):
                    c = C[i][k]
                    if not F.is_zero(c):
                        row[k * m + j] = row[k * m + j] - c
                if not la.is_zero_vector(F, row):
                    rows.append(row)
    sols = la.nullspace(F, rows, n * m) if rows else la.nullspace(F, [], n * m)
    return [[v[i * m:(i + 1) * m] for i in range(n)] for v in sols]


@dataclass
class Presentation:
    """M as a quotient of P = sum_i B e_i: generators gens[i] = (e_i, m_i),
    relation generators rels (tuples (r_i) with r_i in B e_i), and preimages
    pre[k] of the basis vectors of M."""

    gens: list
    rels: list
    pre: list


def _idempotent_set(B):
    if B.idempotents:
        return [e for e in B.idempotents if not la.is_zero_vector(B.F, e)]
    return [B.unit()]


def present(M: FAModule, idems=None):
    B, F = M.B, M.F
    idems = idems if idems is not None else _idempotent_set(B)
    gens = []
    S = la.Subspace.zero(F, M.dim)
    for e in idems:
        E = M.elt_matrix(e)
        for k in range(M.dim):
            v = [E[r][k] for r in range(M.dim)]
            if la.is_zero_vector(F, v) or S.contains(v):
                continue
            gens.append((e, v))
            S = M.spin(S.basis + [v])
            if S.dim == M.dim:
                break
        if S.dim == M.dim:
            break
    if S.dim != M.dim:
        raise ValueError("idempotents do not generate the module")
    # P = sum B e_i, with basis from echelon forms of B e_i
    blocks = []
    for e, v in gens:
        U = B.span([B.mul(B.basis_vec(j), e) for j in range(B.dim)])
        blocks.append(U)
    # images of P basis vectors in M
    cols = []
    owners = []
    for bi, (U, (e, v)) in enumerate(zip(blocks, gens)):
        for u in U.basis:
            cols.append(M.apply(u, v))
            owners.append((bi, u))
    total = len(cols)
    pi = la.transpose(cols, M.dim)  # M.dim x total
    ker = la.nullspace(F, pi, total)
    # relations as tuples (r_i), then reduce to module generators of the kernel
    offsets = []
    off = 0
    for U in blocks:
        offsets.append(off)
        off += U.dim

    def to_tuple(vec):
        out = []
        for bi, U in enumerate(blocks):
            part = vec[offsets[bi]:offsets[bi] + U.dim]
            out.append(la.vecmat(F, part, U.basis) if U.dim else [F.zero] * B.dim)
        return out

    rels = _module_generators_of_kernel(B, blocks, offsets, ker, to_tuple)
    # preimage of each basis vector of M
    pre = []
    for k in range(M.dim):
        target = [F.one if r == k else F.zero for r in range(M.dim)]
        sol = la.solve(F, pi, target)
        pre.append(to_tuple(sol))
    return Presentation(gens, rels, pre)


def _module_generators_of_kernel(B, blocks, offsets, ker, to_tuple):
    """Greedy module generators of the kernel submodule of sum B e_i."""
    F = B.F
    if not ker:
        return []
    total = sum(U.dim for U in blocks)
    K = la.Subspace(F, total, ker)
    gmats = []
    for g in B.generators():
        gv = B.basis_vec(g)
        # matrix of left multiplication by b_g on P in block coordinates
        cols = []
        for bi, U in enumerate(blocks):
            for u in U.basis:
                img = U.coords(B.mul(gv, u))
                col = [F.zero] * total
                for t, c in enumerate(img):
                    col[offsets[bi] + t] = c
                cols.append(col)
        gmats.append(la.transpose(cols, total))
    ops = [la.MatOp(F, G, total) for G in gmats]
    chosen = []
    S = la.Subspace.zero(F, total)
    for v in K.basis:
        if S.contains(v):
            continue
        chosen.append(v)
        S = la.spin_space(F, total, [v], ops, S)
        if S.dim == K.dim:
            break
    return [to_tuple(v) for v in chosen]


def hom_space(M: FAModule, N: FAModule, pres: Presentation = None):
    """Basis of Hom_B(M, N) (matrices N.dim x M.dim) through a presentation of M."""
    F = M.F
    if M.dim == 0 or N.dim == 0:
        return []
    pres = pres or present(M)
    # unknowns: n_i in e_i N, coordinates w.r.t. a basis of e_i N
    spaces = [N.image_of(e) for e, _ in pres.gens]
    offs = []
    off = 0
    for S in spaces:
        offs.append(off)
        off += S.dim
    nunk = off
    if nunk == 0:
        return []

    def act_block(r, i):
        """Matrix (N.dim x dim e_i N) of n -> r n on e_i N."""
        R = N.elt_matrix(r)
        cols = [la.matvec(F, R, v) for v in spaces[i].basis]
        return cols

    rows = []
    for rel in pres.rels:
        acc = [[F.zero] * nunk for _ in range(N.dim)]
        for i, r in enumerate(rel):
            if la.is_zero_vector(F, r) or spaces[i].dim == 0:
                continue
            for t, col in enumerate(act_block(r, i)):
                for row in range(N.dim):
                    if not F.is_zero(col[row]):
                        acc[row][offs[i] + t] = acc[row][offs[i] + t] + col[row]
        rows.extend(r for r in acc if not la.is_zero_vector(F, r))
    sols = la.nullspace(F, rows, nunk) if rows else la.nullspace(F, [], nunk)
    # turn each solution into a matrix via preimages of the basis of M
    pre_cols = []
    for tup in pres.pre:
        blocks = []
        for i, r in enumerate(tup):
            if spaces[i].dim == 0 or la.is_zero_vector(F, r):
                blocks.append(None)
            else:
                blocks.append(act_block(r, i))
        pre_cols.append(blocks)
    out = []
    for sol in sols:
        cols = []
        for blocks in pre_cols:
            col = [F.zero] * N.dim
            for i, blk in enumerate(blocks):
                if blk is None:
                    continue
                for t, c in enumerate(blk):
                    x = sol[offs[i] + t]
                    if F.is_zero(x):
                        continue
                    for row in range(N.dim):
                        if not F.is_zero(c[row]):
                            col[row] = col[row] + x * c[row]
            cols.append(col)
        out.append(la.transpose(cols, N.dim))
    return out


def hom_dim(M, N, pres=None):
    return len(hom_space(M, N, pres))


def is_hom(M, N, X):
    F = M.F
    return all(la.mat_eq(F, la.matmul(F, X, M.act[g]), la.matmul(F, N.act[g], X)) for g in M.B.generators())


# ---------------------------------------------------------------------------
# Tensor products over a subalgebra


def tensor_dim_over_corner(B, e, C_vectors=None):
    """dim (B e) (x)_{eBe} (e B), via the relations x c (x) y = x (x) c y for
    algebra generators c of eBe (or of the given subalgebra)."""
    F = B.F
    Be = B.span([B.mul(B.basis_vec(i), e) for i in range(B.dim)])
    eB = B.span([B.mul(e, B.basis_vec(i)) for i in range(B.dim)])
    if C_vectors is None:
        C = B.corner(e)
        gens = [C.embedding.basis[i] for i in C.generators()]
    else:
        C = B.subalgebra(C_vectors)
        gens = [C.embedding.basis[i] for i in C.generators()]
    p, q = Be.dim, eB.dim
    rows = []
    for c in gens:
        # right action of c on Be and left action on eB
        Rc = [Be.coords(B.mul(x, c)) for x in Be.basis]  # Rc[a] = coords of x_a c
        Lc = [eB.coords(B.mul(c, y)) for y in eB.basis]
        for a in range(p):
            for b in range(q):
                row = [F.zero] * (p * q)
                for a2, v in enumerate(Rc[a]):
                    if not F.is_zero(v):
                        row[a2 * q + b] = row[a2 * q + b] + v
                for b2, v in enumerate(Lc[b]):
                    if not F.is_zero(v):
                        row[a * q + b2] = row[a * q + b2] - v
                if not la.is_zero_vector(F, row):
                    rows.append(row)
    r = la.rank(F, rows, p * q) if rows else 0
    return p * q - r


# ---------------------------------------------------------------------------
# Minimal polynomials and roots


def minimal_polynomial(B, x):
    """Coefficients (ascending, monic) of the minimal polynomial of x."""
    F = B.F
    powers = [B.unit()]
    while True:
        nxt = B.mul(powers[-1], x)
        mat = la.transpose(powers, B.dim)
        sol = la.solve(F, mat, nxt)
        if sol is not None:
            return [-a for a in sol] + [F.one]
        powers.append(nxt)


def eval_poly_elt(B, coeffs, x):
    out = B.zero()
    p = B.unit()
    for c in coeffs:
        if not B.F.is_zero(c):
            out = B.add(out, B.scale(c, p))
        p = B.mul(p, x)
    return out


def poly_roots(F, coeffs):
    """Distinct roots in F of a polynomial with coefficients in F, or None
    when root finding is not available for this field."""
    from .ringtower import FiniteField, NumberField, RationalFunctionField

    if isinstance(F, FiniteField):
        if F.prime:
            P = flint.nmod_poly([int(c) for c in coeffs], F.p)
            return [F(int(-f[0] / f[1])) for f, _ in P.factor()[1] if f.degree() == 1]
        P = flint.fq_default_poly_ctx(F.ctx)(list(coeffs))
        out = []
        for f, _ in P.factor()[1]:
            if f.degree() == 1:
                cs = f.coeffs()
                out.append(-cs[0] / cs[1])
        return out
    if isinstance(F, RationalFunctionField):
        return _roots_rational_function(F, coeffs)
    if isinstance(F, NumberField):
        return _roots_number_field(F, coeffs)
    return None


# polynomials over a number field as ascending coefficient lists


def _ktrim(F, a):
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return a


def _kdivmod(F, a, b):
    a, b = _ktrim(F, a), _ktrim(F, b)
    q = [F.zero] * max(len(a) - len(b) + 1, 0)
    inv = F.one / b[-1]
    while len(a) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] = a[k + i] - c * bi
        a = _ktrim(F, a)
    return q, a


def _kgcd(F, a, b):
    a, b = _ktrim(F, a), _ktrim(F, b)
    while b:
        a, b = b, _kdivmod(F, a, b)[1]
    inv = F.one / a[-1]
    return [c * inv for c in a]


def _roots_number_field(F, coeffs):
    """Roots in Q[y]/(m) by norms: for a shift s making the norm of
    f(x - s y) squarefree, the linear factors of f are gcd(f, h(x + s y))
    for the irreducible factors h of the norm of degree [K : Q]."""
    from math import lcm

    f = _ktrim(F, coeffs)
    if len(f) <= 1:
        return []
    df = [c * k for k, c in enumerate(f)][1:]
    g = _kgcd(F, f, df)
    if len(g) > 1:
        f = _kdivmod(F, f, g)[0]
    if len(f) == 2:
        return [-f[0] / f[1]]
    ctx = flint.fmpz_mpoly_ctx.get(names=("x", "y"), ordering="lex")
    x, y = ctx.gens()
    m = 0 * x
    den = 1
    mod = F.modulus
    for c in mod.coeffs():
        den = lcm(den, int(c.q))
    for e, c in enumerate(mod.coeffs()):
        if c != 0:
            m = m + int(c * den) * y ** e
    d = F.degree
    theta = F.t
    for s in [0, 1, -1, 2, -2, 3, -3, 5]:
        xs = x - s * y
        total = 0 * x
        den = 1
        for c in f:
            for a in c.v.coeffs():
                den = lcm(den, int(a.q))
        for k, c in enumerate(f):
            for e, a in enumerate(c.v.coeffs()):
                if a != 0:
                    total = total + int(a * den) * xs ** k * y ** e
        N = total.resultant(m, "y")
        _, facs = N.factor()
        if any(mult > 1 for _, mult in facs):
            continue
        roots = []
        for h, _ in facs:
            if h.degrees()[0] != d:
                continue
            hc = [F.zero] * (d + 1)
            for (ex, _), a in zip(h.monoms(), h.coeffs()):
                hc[ex] = F(int(a))
            # h(x + s theta) by Horner
            sub = [F(0) + theta * s, F.one]
            acc = [hc[-1]]
            for c in reversed(hc[:-1]):
                prod = [F.zero] * (len(acc) + 1)
                for i, a in enumerate(acc):
                    for j, b in enumerate(sub):
                        prod[i + j] = prod[i + j] + a * b
                prod[0] = prod[0] + c
                acc = prod
            lin = _kgcd(F, f, acc)
            if len(lin) == 2:
                roots.append(-lin[0])
        return roots
    return None


def _roots_rational_function(F, coeffs):
    """Roots in Q(t) or F_p(t): clear denominators, factor in two variables
    over Z or F_p, keep the factors of degree one in x."""
    from math import lcm

    p = F.characteristic
    if p == 0:
        ctx = flint.fmpz_mpoly_ctx.get(names=("x", "t"), ordering="lex")
    else:
        ctx = flint.nmod_mpoly_ctx.get(names=("x", "t"), ordering="lex", modulus=p)
    x, t = ctx.gens()
    D = coeffs[0].d
    for c in coeffs[1:]:
        D = (D * c.d) // D.gcd(c.d)
    nums = [c.n * (D // c.d) for c in coeffs]
    if p == 0:
        den = 1
        for num in nums:
            for a in num.coeffs():
                den = lcm(den, int(a.q))
        ints = [[int(a * den) for a in num.coeffs()] for num in nums]
    else:
        ints = [[int(a) for a in num.coeffs()] for num in nums]
    total = 0 * x
    for k, cs in enumerate(ints):
        for e, a in enumerate(cs):
            if a:
                total = total + a * x ** k * t ** e
    roots = []
    for f, _ in total.factor()[1]:
        if f.degrees()[0] != 1:
            continue
        a_part, b_part = {}, {}
        for (ex, et), coef in zip(f.monoms(), f.coeffs()):
            (a_part if ex == 1 else b_part)[et] = int(coef)
        A = [a_part.get(i, 0) for i in range(max(a_part) + 1)]
        Bc = [-b_part.get(i, 0) for i in range(max(b_part, default=0) + 1)]
        roots.append(F.from_polys(Bc, A))
    return roots
