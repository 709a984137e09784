"""MeatAxe over finite fields: irreducibility tests, composition factors,
simple modules, peakwords, projective covers and the Jacobson radical."""

from __future__ import annotations

import random
from dataclasses import dataclass

import flint

from . import fdalg as fa
from . import linalg as la


class MeatAxeFailure(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Polynomials over a finite field


def poly_ring(F):
    if F.prime:
        return lambda cs: flint.nmod_poly([int(c) for c in cs], F.p)
    ctx = flint.fq_default_poly_ctx(F.ctx)
    return lambda cs: ctx(list(cs))


def poly_coeffs(F, P):
    return [F(c) if F.prime else c for c in P.coeffs()]


def charpoly(F, M):
    """Characteristic polynomial of a square matrix, ascending coefficients."""
    n = len(M)
    if n == 0:
        return [F.one]
    if F.prime:
        A = flint.nmod_mat(n, n, [int(a) for row in M for a in row], F.p)
        return [F(int(c)) for c in A.charpoly().coeffs()]
    return _charpoly_hessenberg(F, M)


def _charpoly_hessenberg(F, M):
    n = len(M)
    H = [list(r) for r in M]
    for j in range(n - 2):
        piv = None
        for i in range(j + 1, n):
            if not F.is_zero(H[i][j]):
                piv = i
                break
        if piv is None:
            continue
        if piv != j + 1:
            H[piv], H[j + 1] = H[j + 1], H[piv]
            for r in H:
                r[piv], r[j + 1] = r[j + 1], r[piv]
        inv = F.one / H[j + 1][j]
        for i in range(j + 2, n):
            f = H[i][j] * inv
            if F.is_zero(f):
                continue
            H[i] = [a - f * b for a, b in zip(H[i], H[j + 1])]
            for r in H:
                r[j + 1] = r[j + 1] + f * r[i]
    R = poly_ring(F)
    x = R([F.zero, F.one])
    polys = [R([F.one])]
    for k in range(n):
        pk = (x - R([H[k][k]])) * polys[k]
        prod = F.one
        for i in range(k - 1, -1, -1):
            prod = prod * H[i + 1][i]
            if F.is_zero(prod):
                break
            pk = pk - R([prod * H[i][k]]) * polys[i]
        polys.append(pk)
    return poly_coeffs(F, polys[n])


def factor_poly(F, cs):
    P = poly_ring(F)(cs)
    return [(poly_coeffs(F, f), m) for f, m in P.factor()[1]]


def eval_matrix_poly(F, cs, A):
    n = len(A)
    out = la.zeros(F, n, n)
    for c in reversed(cs):
        out = la.matmul(F, A, out)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


# ---------------------------------------------------------------------------
# Splitting


def _random_element(B, rng, terms=3):
    """A random algebra element built from products of basis elements."""
    F = B.F
    x = B.zero()
    gens = [B.basis_vec(i) for i in B.generators()] or [B.unit()]
    basis = [B.basis_vec(i) for i in range(B.dim)]
    for _ in range(terms):
        w = rng.choice(basis)
        for _ in range(rng.randrange(3)):
            w = B.mul(w, rng.choice(gens))
        x = B.add(x, B.scale(F.random_element(rng), w))
    return x


def _annihilated(M, dual_space):
    """{m in M : u m = 0 for u in dual_space}: a submodule when dual_space is
    stable under the transposed action."""
    return la.Subspace(M.F, M.dim, la.nullspace(M.F, dual_space.basis, M.dim))


def split(M: fa.FAModule, rng, tries=200):
    """(True, None) if M is irreducible, else (False, proper submodule)."""
    F = M.F
    if M.dim <= 1:
        return True, None
    Mt = fa.FAModule(M.B, M.dim, [la.transpose(A, M.dim) for A in M.act])
    for _ in range(tries):
        a = _random_element(M.B, rng)
        A = M.elt_matrix(a)
        facs = sorted(factor_poly(F, charpoly(F, A)), key=lambda fm: len(fm[0]))
        for f, _m in facs:
            deg = len(f) - 1
            fA = eval_matrix_poly(F, f, A)
            N = la.nullspace(F, fA, M.dim)
            if not N:
                continue
            S = M.spin([N[0]])
            if S.dim < M.dim:
                return False, S
            Nt = la.nullspace(F, la.transpose(fA, M.dim), M.dim)
            St = Mt.spin([Nt[0]])
            if St.dim < M.dim:
                return False, _annihilated(M, St)
            if len(N) == deg:
                return True, None
    raise MeatAxeFailure("no conclusive irreducibility test found")


def composition_factors(M: fa.FAModule, rng=None):
    rng = rng or random.Random(0)
    if M.dim == 0:
        return []
    irred, S = split(M, rng)
    if irred:
        return [M]
    return composition_factors(M.submodule(S), rng) + composition_factors(M.quotient(S), rng)


def hom_dim_small(M, N):
    return len(fa.hom_space_naive(M, N))


def isomorphic_simples(D1, D2):
    return D1.dim == D2.dim and hom_dim_small(D1, D2) > 0


@dataclass
class SimpleData:
    """Simple modules of a finite-dimensional algebra over a finite field."""

    B: fa.FieldAlgebra
    simples: list
    endo: list  # dim End(D)
    peakwords: list = None
    proj_dims: list = None


def simple_modules(B: fa.FieldAlgebra, rng=None, regular=None):
    """Isomorphism classes of simple modules, from a composition series of
    the regular module (each simple occurs there)."""
    rng = rng or random.Random(0)
    reg = regular or B.regular_module()
    found = []
    for D in composition_factors(reg, rng):
        if not any(isomorphic_simples(D, E) for E in found):
            found.append(D)
    found.sort(key=lambda D: D.dim)
    return SimpleData(B, found, [hom_dim_small(D, D) for D in found])


# ---------------------------------------------------------------------------
# Peakwords and projective covers


def _nullity(F, A):
    return len(A) - la.rank(F, A, len(A)) if A else 0


def find_peakwords(sd: SimpleData, rng=None, tries=400):
    """For each simple D_i an element w_i with nullity(w_i) = nullity(w_i^2)
    = dim End(D_i) on D_i, acting invertibly on the other simples."""
    rng = rng or random.Random(1)
    B, F = sd.B, sd.B.F
    words = [None] * len(sd.simples)
    for _ in range(tries):
        if all(w is not None for w in words):
            break
        a = _random_element(B, rng)
        for i, D in enumerate(sd.simples):
            if words[i] is not None:
                continue
            A = D.elt_matrix(a)
            for f, _m in factor_poly(F, charpoly(F, A)):
                w = fa.eval_poly_elt(B, f, a)
                W = D.elt_matrix(w)
                if _nullity(F, W) != sd.endo[i] or _nullity(F, la.matmul(F, W, W)) != sd.endo[i]:
                    continue
                if all(_nullity(F, E.elt_matrix(w)) == 0 for j, E in enumerate(sd.simples) if j != i):
                    words[i] = w
                    break
    if any(w is None for w in words):
        raise MeatAxeFailure("peakword search did not succeed")
    sd.peakwords = words
    return words


def stable_nullity(F, A):
    """Dimension of the generalized kernel of A."""
    n = len(A)
    if n == 0:
        return 0
    P = A
    k = 1
    while k < n:
        P = la.matmul(F, P, P)
        k *= 2
    return _nullity(F, P)


def composition_multiplicities(sd: SimpleData, M: fa.FAModule):
    """[M : D_i] via peakword generalized kernels."""
    if sd.peakwords is None:
        find_peakwords(sd)
    F = sd.B.F
    out = []
    for w, e in zip(sd.peakwords, sd.endo):
        out.append(stable_nullity(F, M.elt_matrix(w)) // e)
    return out


def fitting_idempotent(B, w):
    """The idempotent in F[w] projecting onto the generalized kernel of w."""
    F = B.F
    m = fa.minimal_polynomial(B, w)
    k = 0
    while F.is_zero(m[k]):
        k += 1
    R = poly_ring(F)
    xk = R([F.zero] * k + [F.one])
    g = R(m[k:])
    # u g = 1 mod x^k
    d, u, _v = g.xgcd(xk)
    dinv = F.one / poly_coeffs(F, d)[0]
    h = poly_coeffs(F, g * u)
    h = [c * dinv for c in h]
    return fa.eval_poly_elt(B, h, w)


def projective_cover_dims(sd: SimpleData):
    """dim P(D_i) = dim B eps_i for the Fitting idempotent of the peakword."""
    if sd.peakwords is None:
        find_peakwords(sd)
    B, F = sd.B, sd.B.F
    dims = []
    for w in sd.peakwords:
        eps = fitting_idempotent(B, w)
        dims.append(la.rank(F, B.right_matrix(eps), B.dim))
    sd.proj_dims = dims
    return dims


def is_projective_finite(sd: SimpleData, M: fa.FAModule):
    """M is projective iff its projective cover has dimension dim M. The top
    multiplicities are dim Hom(M, D_i) / dim End(D_i)."""
    if sd.proj_dims is None:
        projective_cover_dims(sd)
    cover = 0
    for D, e, pd in zip(sd.simples, sd.endo, sd.proj_dims):
        cover += (fa.hom_dim(M, D) // e) * pd
    return cover == M.dim


# ---------------------------------------------------------------------------
# Radicals


def radical_via_simples(sd: SimpleData):
    """rad B as the common annihilator of the simple modules."""
    B, F = sd.B, sd.B.F
    rows = []
    for D in sd.simples:
        for r in range(D.dim):
            for c in range(D.dim):
                rows.append([D.act[i][r][c] for i in range(B.dim)])
    return la.Subspace(F, B.dim, la.nullspace(F, rows, B.dim))


def _restrict_to_prime(B):
    """Structure constants of B viewed over the prime field: basis
    g^l b_k at index k * d + l."""
    F = B.F
    d = F.degree
    n = B.dim * d
    p = F.p
    gpow = [F.from_coeffs([0] * l + [1]) for l in range(2 * d)]
    mats = []
    for m in range(B.dim):
        for l in range(d):
            M = [[0] * n for _ in range(n)]
            for j in range(B.dim):
                for k, c in B.prod.get((m, j), ()):
                    for l2 in range(d):
                        coeffs = F.to_coeffs(c * gpow[l] * gpow[l2])
                        for l3, a in enumerate(coeffs):
                            if a:
                                M[k * d + l3][j * d + l2] = (M[k * d + l3][j * d + l2] + a) % p
            mats.append(M)
    return mats, n


def radical_ciw(B):
    """Jacobson radical over a finite field by the trace-power method of
    Cohen, Ivanyos and Wales, applied over the prime field."""
    F = B.F
    p = F.p
    if F.prime:
        n = B.dim
        mats = []
        for m in range(n):
            M = [[0] * n for _ in range(n)]
            for j, val in B._by_left.get(m, ()):
                for k, c in val:
                    M[k][j] = int(c)
            mats.append(M)
        d = 1
    else:
        mats, n = _restrict_to_prime(B)
        d = F.degree

    def right_prod(x, j):
        # x b_j: column action of right multiplication, from left-structure mats
        out = [0] * n
        for m, a in enumerate(x):
            if a:
                col = [mats[m][r][j] for r in range(n)]
                for r in range(n):
                    out[r] = (out[r] + a * col[r]) % p
        return out

    space = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    i = 0
    while p ** i <= n:
        mod = p ** (i + 1)
        lifted = [flint.nmod_mat(M, mod) for M in mats]

        def g(x):
            A = flint.nmod_mat(n, n, [0] * (n * n), mod)
            for m, a in enumerate(x):
                if a:
                    A += lifted[m] * a
            P = A ** (p ** i)
            tr = 0
            for r in range(n):
                tr += int(P[r, r])
            tr %= mod
            if tr % (p ** i):
                raise ArithmeticError("trace not divisible")
            return (tr // p ** i) % p

        rows = []
        for j in range(n):
            rows.append([g(right_prod(u, j)) for u in space])
        K = flint.nmod_mat(len(rows), len(space), [a for r in rows for a in r], p)
        ker = _nmod_nullspace(K, len(space), p)
        space = [[sum(c * u[t] for c, u in zip(vec, space)) % p for t in range(n)] for vec in ker]
        if not space:
            break
        i += 1
    # back to F
    if F.prime:
        vecs = [[F(a) for a in v] for v in space]
    else:
        vecs = [[F.from_coeffs(v[k * d:(k + 1) * d]) for k in range(B.dim)] for v in space]
    return la.Subspace(F, B.dim, vecs)


def _nmod_nullspace(K, ncols, p):
    if K.nrows() == 0:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    X, nullity = K.nullspace()
    return [[int(X[r, c]) for r in range(ncols)] for c in range(nullity)]
