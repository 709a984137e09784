"""Hecke modules as free lattices (or vector spaces after specialization)
given by one action matrix per generator.

Column convention: column j of mats[s] holds the coordinates of T_s b_j
(left modules) or b_j T_s (right modules). So a word acts on a right module
through the reversed matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg as la
from .hecke import LAURENT, HeckeAlgebra, KLData
from .ringtower import T, parse_laurent, residue_field


class SideMismatch(ValueError):
    pass


class RelationFailure(ValueError):
    pass


@dataclass
class LatticeModule:
    side: str  # "left" or "right"
    W: object
    R: object  # coefficient ring: LAURENT or a residue field
    basis: list  # names
    mats: list  # one rank x rank matrix per generator
    provenance: str = "user"
    meta: dict = field(default_factory=dict)

    @property
    def rank(self):
        return len(self.basis)

    def specialize(self, spot):
        F = residue_field(spot)
        if self.R is not LAURENT:
            raise ValueError("module is already specialized")
        mats = [[[F.from_laurent(a) for a in row] for row in M] for M in self.mats]
        out = LatticeModule(self.side, self.W, F, list(self.basis), mats, self.provenance, dict(self.meta))
        out.meta["spot"] = spot.label()
        return out

    def word_matrix(self, word):
        """Matrix of the action of T_{s_1} ... T_{s_k}."""
        R = self.R
        M = la.identity(R, self.rank)
        if self.side == "left":
            for s in reversed(word):
                M = la.matmul(R, self.mats[s], M)
        else:
            for s in word:
                M = la.matmul(R, self.mats[s], M)
        return M

    def element_matrix(self, h):
        """Matrix of a Hecke element (dict w -> coefficient in R)."""
        R = self.R
        out = la.zeros(R, self.rank, self.rank)
        for w, c in h.items():
            out = la.add(R, out, la.scale(R, c, self.word_matrix(self.W.words[w])))
        return out

    def relation_defects(self):
        """List of violated relations (empty when the module is valid)."""
        R, W = self.R, self.W
        bad = []
        n = self.rank
        I = la.identity(R, n)
        for s in range(W.rank):
            q = R.from_laurent(T ** (2 * W.weights[s]))
            A = la.sub(R, self.mats[s], la.scale(R, q, I))
            B = la.add(R, self.mats[s], I)
            if not la.is_zero_matrix(R, la.matmul(R, A, B)):
                bad.append(f"quadratic s{s + 1}")
        for s in range(W.rank):
            for u in range(s + 1, W.rank):
                m = W.matrix[s][u]
                w1 = [s if k % 2 == 0 else u for k in range(m)]
                w2 = [u if k % 2 == 0 else s for k in range(m)]
                if not la.mat_eq(R, self.word_matrix(w1), self.word_matrix(w2)):
                    bad.append(f"braid s{s + 1},s{u + 1}")
        return bad

    def check_relations(self):
        bad = self.relation_defects()
        if bad:
            raise RelationFailure(", ".join(bad))
        return True

    def dual(self):
        """Z-linear (or k-linear) dual, on the opposite side, via transposes."""
        side = "right" if self.side == "left" else "left"
        mats = [la.transpose(M, self.rank) for M in self.mats]
        return LatticeModule(side, self.W, self.R, [f"{b}*" for b in self.basis], mats, f"dual({self.provenance})", dict(self.meta))

    def direct_sum(self, other):
        if self.side != other.side:
            raise SideMismatch("direct sum of modules on different sides")
        R = self.R
        n, m = self.rank, other.rank
        mats = []
        for A, B in zip(self.mats, other.mats):
            M = la.zeros(R, n + m, n + m)
            for i in range(n):
                for j in range(n):
                    M[i][j] = A[i][j]
            for i in range(m):
                for j in range(m):
                    M[n + i][n + j] = B[i][j]
            mats.append(M)
        return LatticeModule(self.side, self.W, R, self.basis + other.basis, mats, f"{self.provenance}+{other.provenance}")

    def to_text(self):
        lines = [f"side {self.side}", f"rank {self.rank}", "basis " + " ".join(self.basis)]
        for s, M in enumerate(self.mats):
            lines.append(f"gen s{s + 1}")
            for row in M:
                lines.append(", ".join(self.R.fmt(a) for a in row))
        return "\n".join(lines) + "\n"


def parse_module_text(text, W):
    """Read a lattice module: side, rank, basis, then ``gen sK`` blocks of
    comma-separated Laurent-polynomial rows."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    side = None
    rank = None
    basis = None
    mats = {}
    cur = None
    for ln in lines:
        head = ln.split(None, 1)
        key = head[0].lower()
        if key == "side":
            side = head[1].strip()
        elif key == "rank":
            rank = int(head[1])
        elif key == "basis":
            basis = head[1].split()
        elif key == "gen":
            cur = int(head[1].strip().lstrip("s")) - 1
            mats[cur] = []
        else:
            if cur is None:
                raise ValueError(f"unexpected line {ln!r}")
            mats[cur].append([parse_laurent(x) for x in ln.split(",")])
    if side not in ("left", "right") or rank is None:
        raise ValueError("module file needs side and rank")
    if basis is None:
        basis = [f"b{i + 1}" for i in range(rank)]
    if sorted(mats) != list(range(W.rank)):
        raise ValueError("module file needs one matrix per generator")
    for M in mats.values():
        if len(M) != rank or any(len(r) != rank for r in M):
            raise ValueError("matrix shape does not match rank")
    mod = LatticeModule(side, W, LAURENT, basis, [mats[s] for s in range(W.rank)], "user")
    mod.check_relations()
    return mod


# ---------------------------------------------------------------------------
# Cell modules


def _ts_on_cprime(kl: KLData, s, x):
    """T_s C'_x in the C'-basis: t^c C'_s C'_x - C'_x."""
    c = kl.W.weights[s]
    out = {z: a.shift(c) for z, a in kl.left_mult(s, x).items()}
    out[x] = out.get(x, LAURENT.zero) - 1
    if out[x].is_zero():
        del out[x]
    return out


def _truncated_left_module(kl, members, provenance):
    W = kl.W
    pos = {x: i for i, x in enumerate(members)}
    n = len(members)
    mats = []
    for s in range(W.rank):
        M = [[LAURENT.zero] * n for _ in range(n)]
        for j, x in enumerate(members):
            for z, a in _ts_on_cprime(kl, s, x).items():
                if z in pos:
                    M[pos[z]][j] = a
        mats.append(M)
    return LatticeModule("left", W, LAURENT, [f"C'[{W.label(x)}]" for x in members], mats, provenance)


def cell_module(cells, omega):
    """Left cell module S(omega): C'_x, x in omega, modulo lower cells."""
    members = cells.left_cells[omega]
    mod = _truncated_left_module(cells.kl, members, f"cell {cells.cell_label(members)}")
    mod.meta["left_cell"] = omega
    return mod


def dual_cell_module(cells, omega):
    """Right module S_omega, the dual of S(omega)."""
    mod = cell_module(cells, omega).dual()
    mod.provenance = f"dual cell {cells.cell_label(cells.left_cells[omega])}"
    mod.meta["left_cell"] = omega
    return mod


def two_sided_cell_module(cells, xi):
    """Left module S[xi] on C'_x, x in the two-sided cell xi, modulo lower cells."""
    members = cells.two_sided_cells[xi]
    mod = _truncated_left_module(cells.kl, members, f"two-sided cell {cells.cell_label(members)}")
    mod.meta["two_sided_cell"] = xi
    return mod


def regular_left_module(H):
    W, R = H.W, H.R
    mats = []
    for s in range(W.rank):
        M = la.zeros(R, W.size, W.size)
        for j in range(W.size):
            for w, a in H.left_Ts(s, {j: R.one}).items():
                M[w][j] = a
        mats.append(M)
    return LatticeModule("left", W, R, [f"T[{W.label(w)}]" for w in range(W.size)], mats, "left regular")


# ---------------------------------------------------------------------------
# q-permutation modules


def x_lambda(H, lam):
    R = H.R
    return {u: R.one for u in H.W.parabolic_elements(lam)}


def q_permutation(H: HeckeAlgebra, lam):
    """Right module x_lam H on x_lam T_d, d minimal in W_lam \\ W. The action
    is computed in H and read off at the coefficients of T_{d'}."""
    W, R = H.W, H.R
    lam = frozenset(lam)
    reps = W.min_right_coset_reps(lam)
    pos = {d: i for i, d in enumerate(reps)}
    xl = x_lambda(H, lam)
    gens = [H.right_Tw(xl, d) for d in reps]
    n = len(reps)
    mats = []
    for s in range(W.rank):
        M = la.zeros(R, n, n)
        for j, g in enumerate(gens):
            img = H.right_Ts(g, s)
            combo = {}
            for d, i in pos.items():
                a = img.get(d)
                if a is not None and not R.is_zero(a):
                    M[i][j] = a
                    combo = H.add(combo, H.scale(a, gens[i]))
            if H.sub(img, combo):
                raise ArithmeticError("x_lam H is not closed under T_s; coset data inconsistent")
        mats.append(M)
    label = "{" + ",".join(f"s{i + 1}" for i in sorted(lam)) + "}"
    mod = LatticeModule("right", W, R, [f"x{label}T[{W.label(d)}]" for d in reps], mats, f"xperm:{label}")
    mod.meta["lambda"] = sorted(lam)
    mod.meta["reps"] = reps
    return mod


def right_regular(H):
    mod = q_permutation(H, ())
    mod.provenance = "regular"
    return mod


def specialize_module(M, spot):
    out = M.specialize(spot)
    out.check_relations()
    return out


# ---------------------------------------------------------------------------
# Hom spaces over a field


def hom_space(M, N):
    """Basis of Hom_H(M, N) as matrices X (rank N x rank M) with X M_s = N_s X."""
    if M.side != N.side:
        raise SideMismatch("Hom between modules on different sides")
    F = M.R
    m, n = M.rank, N.rank
    # unknown X[i][j] at position i*m + j
    rows = []
    for s in range(M.W.rank):
        A, B = M.mats[s], N.mats[s]
        for i in range(n):
            for j in range(m):
                row = [F.zero] * (n * m)
                # (X A)[i][j] = sum_k X[i][k] A[k][j]
                for k in range(m):
                    a = A[k][j]
                    if not F.is_zero(a):
                        row[i * m + k] = row[i * m + k] + a
                # (B X)[i][j] = sum_k B[i][k] X[k][j]
                for k in range(n):
                    b = B[i][k]
                    if not F.is_zero(b):
                        row[k * m + j] = row[k * m + j] - b
                if not la.is_zero_vector(F, row):
                    rows.append(row)
    if not rows:
        sols = la.nullspace(F, [], n * m)
    else:
        sols = la.nullspace(F, rows, n * m)
    return [[v[i * m:(i + 1) * m] for i in range(n)] for v in sols]


def is_module_hom(M, N, X):
    F = M.R
    return all(la.mat_eq(F, la.matmul(F, X, M.mats[s]), la.matmul(F, N.mats[s], X)) for s in range(M.W.rank))
