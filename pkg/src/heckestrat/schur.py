"""Endomorphism algebras A = End_H(T) of module collections T, the height
filtration T_l of T and the ideal chain J_j of A.

Layer convention: a section of height h sits in layer l = h + 1, so that
T_0 = 0 and T_Nc = T with Nc = max height + 1. J_j consists of the
homomorphisms killing T_{Nc - j}; hence J_0 = 0 and J_Nc = A.

A acts on T from the left by composition. The basis element (a, b, d)
maps x_b to the sum of T_w over the double coset W_a d W_b, as a map from
summand b to summand a.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

import flint

from . import fdalg as fa
from . import linalg as la
from .cells import CellDecomposition, compute_cells
from .hecke import LAURENT, HeckeAlgebra, kl_basis
from .hmodules import LatticeModule, dual_cell_module, hom_space, q_permutation
from .ringtower import ONE, T, PrimeSpot, factor_in_Zt, residue_field

GENERIC = PrimeSpot.generic()


class IntegralBasisUnavailable(ValueError):
    pass


class NoDeclaredFiltration(ValueError):
    pass


def QT():
    return residue_field(GENERIC)


# ---------------------------------------------------------------------------
# Laurent linear algebra through Q(t)


def to_field_vec(F, v):
    return [F.from_laurent(a) for a in v]


def laurent_vec(v):
    """The vector with entries in Z[t, t^-1], or None."""
    K = QT()
    out = []
    for a in v:
        b = K.to_laurent(a)
        if b is None:
            return None
        out.append(b)
    return out


def laurent_kernel_basis(rows, n, tries=6):
    """A Z[t,t^-1]-basis of {c : rows c = 0} when some choice of free
    columns gives an integral echelon basis; else (K-basis scaled, False)."""
    K = QT()
    Krows = [to_field_vec(K, r) for r in rows if any(not a.is_zero() for a in r)]
    orders = [list(range(n)), list(range(n - 1, -1, -1))]
    rng = random.Random(n)
    for _ in range(tries):
        perm = list(range(n))
        rng.shuffle(perm)
        orders.append(perm)
    fallback = None
    for perm in orders:
        prow = [[r[j] for j in perm] for r in Krows]
        ker = la.nullspace(K, prow, n) if prow else la.nullspace(K, [], n)
        vecs = []
        ok = True
        for v in ker:
            w = [None] * n
            for pos, j in enumerate(perm):
                w[j] = v[pos]
            lv = laurent_vec(w)
            if lv is None:
                ok = False
                break
            vecs.append(lv)
        if ok:
            return vecs, True
        if fallback is None:
            fallback = ker, perm
    ker, perm = fallback
    out = []
    for v in ker:
        w = [None] * n
        for pos, j in enumerate(perm):
            w[j] = v[pos]
        out.append(_clear_denominators(K, w))
    return out, False


def _clear_denominators(K, v):
    D = None
    for a in v:
        if not a.n.is_zero():
            D = a.d if D is None else (D * a.d) // D.gcd(a.d)
    scale = K.from_polys([int(c) for c in D.coeffs()]) if D is not None else K.one
    out = []
    for a in v:
        b = K.to_laurent(a * scale)
        if b is None:
            # rational content left: clear integer denominators too
            den = 1
            for c in (a * scale).n.coeffs():
                den = den * int(c.q) // _gcd(den, int(c.q))
            return _clear_denominators(K, [x * K(den) for x in v])
        out.append(b)
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def laurent_is_unit(a):
    terms = list(a.terms())
    return len(terms) == 1 and abs(terms[0][1]) == 1


def laurent_gcd(vals):
    """gcd in Z[t, t^-1] up to units, as an IntLaurent."""
    g = None
    for a in vals:
        if a.is_zero():
            continue
        _, p = a.to_poly()
        g = p if g is None else g.gcd(p)
    if g is None:
        return LAURENT.zero
    from .ringtower import IntLaurent

    return IntLaurent.from_fmpz_poly(g)


# ---------------------------------------------------------------------------
# Collections


@dataclass
class Summand:
    module: LatticeModule  # right H-module over Z[t, t^-1]
    mult: int = 1
    label: str = ""
    lam: frozenset = None  # set for q-permutation summands
    cell: int = None  # left cell of the bottom section
    height: int = None  # height of the bottom section


@dataclass
class ModuleCollection:
    H: HeckeAlgebra
    cells: CellDecomposition
    summands: list
    regular_index: int = None
    two_heights: list = None  # heights on two-sided cells

    def __post_init__(self):
        if self.two_heights is None:
            self.two_heights = self.cells.two_sided_heights()
        for S in self.summands:
            if S.mult < 1:
                raise ValueError("multiplicities must be positive")
            S.module.check_relations()

    @property
    def W(self):
        return self.H.W

    @property
    def kl(self):
        return self.cells.kl

    def expanded(self):
        """(summand index, copy) for each copy of each summand."""
        return [(i, k) for i, S in enumerate(self.summands) for k in range(S.mult)]

    @property
    def is_qperm(self):
        return all(S.lam is not None for S in self.summands)

    def elt_height(self, x):
        return self.two_heights[self.cells.two_of[x]]

    @property
    def max_height(self):
        return max(self.two_heights)

    @property
    def n_layers(self):
        return self.max_height + 1

    def labels(self):
        out = []
        for i, k in self.expanded():
            S = self.summands[i]
            out.append(S.label if S.mult == 1 else f"{S.label}#{k + 1}")
        return out


def _lam_label(lam):
    return "{" + ",".join(f"s{i + 1}" for i in sorted(lam)) + "}"


def xperm_summand(H, lam, mult=1):
    lam = frozenset(lam)
    mod = q_permutation(H, lam)
    label = "regular" if not lam else f"xperm:{_lam_label(lam)}"
    return Summand(mod, mult, label, lam)


def preset_collection(H, name="qschur", cells=None):
    """Builtin collections: qschur (x_lam H for every subset lam of S) or
    regular (H_H alone)."""
    W = H.W
    cells = cells or compute_cells(kl_basis(W))
    if name == "qschur":
        subsets = []
        for mask in range(1 << W.rank):
            subsets.append(frozenset(i for i in range(W.rank) if mask >> i & 1))
        subsets.sort(key=lambda s: (len(s), sorted(s)))
        summands = [xperm_summand(H, lam) for lam in subsets]
    elif name == "regular":
        summands = [xperm_summand(H, ())]
    else:
        raise ValueError(f"unknown collection preset {name!r}")
    return ModuleCollection(H, cells, summands, regular_index=0)


def parse_generator_list(text):
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"bad generator set {text!r}")
    body = text[1:-1].strip()
    if not body:
        return frozenset()
    return frozenset(int(x.strip().lstrip("s")) - 1 for x in body.split(","))


def parse_collection_text(text, H, cells=None, base_dir=None):
    """Lines: `regular`, `xperm:{s1,s2}` or `file:path`, each optionally
    followed by `mult=N`."""
    import os

    from .hmodules import parse_module_text

    W = H.W
    cells = cells or compute_cells(kl_basis(W))
    summands = []
    reg = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        ref = parts[0]
        mult = 1
        for opt in parts[1:]:
            key, _, val = opt.partition("=")
            if key == "mult":
                mult = int(val)
            else:
                raise ValueError(f"unknown option {opt!r}")
        if ref == "regular":
            S = xperm_summand(H, (), mult)
            reg = len(summands)
        elif ref.startswith("xperm:"):
            lam = parse_generator_list(ref[len("xperm:"):])
            S = xperm_summand(H, lam, mult)
            if not lam:
                reg = len(summands)
        elif ref.startswith("file:"):
            path = ref[len("file:"):]
            if base_dir and not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            with open(path) as fh:
                mod = parse_module_text(fh.read(), W)
            if mod.side != "right":
                raise ValueError("collection summands must be right modules")
            S = Summand(mod, mult, f"file:{os.path.basename(path)}")
        else:
            raise ValueError(f"unknown summand reference {ref!r}")
        summands.append(S)
    if not summands:
        raise ValueError("empty collection")
    return ModuleCollection(H, cells, summands, regular_index=reg)


# ---------------------------------------------------------------------------
# Height filtration


def trace_pairing(H, u, c):
    """tau(u c) with tau(T_w) = delta_{w,e}."""
    W, R = H.W, H.R
    total = R.zero
    for a, x in u.items():
        y = c.get(W.inv[a])
        if y is not None:
            total = total + x * y * H.R.from_laurent(T ** (2 * W.wlength[a]))
    return total


@dataclass
class SummandFiltration:
    """Integral bases of T_l, l = 0..Nc, in the coordinates of the summand."""

    layers: list  # layers[l] = list of Laurent vectors
    certified: bool  # every layer basis is an integral echelon basis
    bottom: int  # smallest l with T_l != 0

    def rank(self, l):
        return len(self.layers[l])


def _qperm_generators(H, lam):
    W = H.W
    xl = {u: H.R.one for u in W.parabolic_elements(lam)}
    return [H.right_Tw(xl, d) for d in W.min_right_coset_reps(lam)]


def filtration_of_summand(coll: ModuleCollection, S: Summand):
    """T_l = {h : tau(h C'_x) = 0 for every x of height >= l}."""
    if S.lam is None:
        raise NoDeclaredFiltration(f"summand {S.label} declares no cell filtration")
    H, kl = coll.H, coll.kl
    W = H.W
    gens = _qperm_generators(H, S.lam)
    n = len(gens)
    cp = [kl.cprime_T(x) for x in range(W.size)]
    pair = [[trace_pairing(H, g, cp[x]) for g in gens] for x in range(W.size)]
    Nc = coll.n_layers
    layers = []
    certified = True
    for l in range(Nc + 1):
        rows = [pair[x] for x in range(W.size) if coll.elt_height(x) + 1 > l]
        if l == Nc:
            vecs = [[ONE if i == j else LAURENT.zero for j in range(n)] for i in range(n)]
            ok = True
        elif len(rows) == 0:
            vecs, ok = [[ONE if i == j else LAURENT.zero for j in range(n)] for i in range(n)], True
        else:
            vecs, ok = laurent_kernel_basis(rows, n)
        certified = certified and ok
        layers.append(vecs)
    bottom = next(l for l in range(Nc + 1) if layers[l])
    return SummandFiltration(layers, certified, bottom)


def submodule_lattice(M: LatticeModule, vecs):
    """The right submodule with the given basis (coordinates in M)."""
    K = QT()
    n = len(vecs)
    Kvecs = [to_field_vec(K, v) for v in vecs]
    S = la.Subspace(K, M.rank, Kvecs)
    mats = []
    for s in range(M.W.rank):
        Ms = [to_field_vec(K, r) for r in M.mats[s]]
        cols = []
        for v in Kvecs:
            img = la.matvec(K, Ms, v)
            c = la.solve(K, la.transpose(Kvecs, M.rank), img)
            if c is None:
                raise ValueError("subspace is not a submodule")
            lc = laurent_vec(c)
            if lc is None:
                raise IntegralBasisUnavailable("submodule basis is not integral")
            cols.append(lc)
        mats.append(la.transpose(cols, n))
    return LatticeModule(M.side, M.W, LAURENT, [f"v{i + 1}" for i in range(n)], mats, f"sub({M.provenance})")


def quotient_lattice(M: LatticeModule, vecs):
    """M / span(vecs) for a saturated span with an echelon basis."""
    K = QT()
    Kvecs = [to_field_vec(K, v) for v in vecs]
    S = la.Subspace(K, M.rank, Kvecs)
    piv = set(S.pivots)
    keep = [k for k in range(M.rank) if k not in piv]
    mats = []
    for s in range(M.W.rank):
        Ms = [to_field_vec(K, r) for r in M.mats[s]]
        cols = []
        for k in keep:
            img = [Ms[r][k] for r in range(M.rank)]
            w = list(img)
            for row, p in zip(S.basis, S.pivots):
                c = w[p]
                if not K.is_zero(c):
                    w = [a - c * b for a, b in zip(w, row)]
            lc = laurent_vec([w[j] for j in keep])
            if lc is None:
                raise IntegralBasisUnavailable("quotient is not integral")
            cols.append(lc)
        mats.append(la.transpose(cols, len(keep)))
    return LatticeModule(M.side, M.W, LAURENT, [M.basis[k] for k in keep], mats, f"quot({M.provenance})")


def isomorphic_over_field(M, N, rng=None, tries=6):
    """Isomorphism test for modules over a field via random homs."""
    if M.rank != N.rank:
        return False
    homs = hom_space(M, N)
    if not homs:
        return False
    F = M.R
    rng = rng or random.Random(7)
    for k in range(tries):
        X = la.zeros(F, N.rank, M.rank)
        for Hm in homs:
            c = F(rng.randint(-5, 5)) if k else F.one
            X = la.add(F, X, la.scale(F, c, Hm))
        if not F.is_zero(la.det(F, X)):
            return True
    return False


def identify_bottom(coll, S, filt):
    """The left cell omega with bottom section of S isomorphic to S_omega at
    Generic, and the number of copies (1 expected)."""
    K = QT()
    bottom = submodule_lattice(S.module, filt.layers[filt.bottom]).specialize(GENERIC)
    h = filt.bottom - 1
    cells = coll.cells
    for omega in range(len(cells.left_cells)):
        if coll.two_heights[cells.two_of_left(omega)] != h:
            continue
        Sw = dual_cell_module(cells, omega).specialize(GENERIC)
        if isomorphic_over_field(Sw, bottom):
            return omega
    raise NoDeclaredFiltration(f"bottom section of {S.label} is not a single dual cell module")


def section_check(coll, S, filt):
    """At Generic, each section T_l/T_{l-1} has dimension equal to a sum of
    ranks of S_omega of height l - 1 (semisimple count)."""
    K = QT()
    cells = coll.cells
    M = S.module.specialize(GENERIC)
    out = []
    for l in range(1, coll.n_layers + 1):
        lo, hi = filt.layers[l - 1], filt.layers[l]
        if len(hi) == len(lo):
            out.append(True)
            continue
        sub_hi = submodule_lattice(S.module, hi)
        # section = T_l / T_{l-1} inside T_l
        K_lo_coords = []
        Khi = [to_field_vec(K, v) for v in hi]
        for v in lo:
            K_lo_coords.append(la.solve(K, la.transpose(Khi, S.module.rank), to_field_vec(K, v)))
        sec = quotient_lattice(sub_hi, [laurent_vec(c) for c in K_lo_coords]).specialize(GENERIC)
        total = 0
        seen = []
        for omega in range(len(cells.left_cells)):
            if coll.two_heights[cells.two_of_left(omega)] != l - 1:
                continue
            Sw = dual_cell_module(cells, omega).specialize(GENERIC)
            if any(isomorphic_over_field(Sw, P) for P in seen):
                continue
            seen.append(Sw)
            e = len(hom_space(Sw, Sw))
            total += len(hom_space(Sw, sec)) // e * Sw.rank
        out.append(total == sec.rank)
    return all(out)


def height_filtration(coll: ModuleCollection):
    """Filtrations of all summands; fills in bottom cells and heights."""
    out = []
    for S in coll.summands:
        filt = filtration_of_summand(coll, S)
        S.height = filt.bottom - 1
        S.cell = identify_bottom(coll, S, filt)
        out.append(filt)
    return out


# ---------------------------------------------------------------------------
# Endomorphism algebras


@dataclass
class EndoAlgebra:
    coll: ModuleCollection
    R: object  # LAURENT or a residue field
    spot: str  # "integral" or a spot label
    labels: list  # (a, b, d): summand copy a <- b via double coset rep d
    mats: list  # hom matrices over R (rank_a x rank_b)
    prod: dict  # (i, j) -> [(k, c)]
    idempotents: list  # one vector per summand copy
    blocks: dict  # (a, b) -> list of basis indices
    copies: list  # expanded (summand index, copy)

    @property
    def dim(self):
        return len(self.labels)

    def zero(self):
        return [self.R.zero] * self.dim

    def unit(self):
        out = self.zero()
        for e in self.idempotents:
            out = [x + y for x, y in zip(out, e)]
        return out

    def field_algebra(self):
        if self.R is LAURENT:
            raise ValueError("integral algebra: specialize first")
        return fa.FieldAlgebra(self.R, self.dim, self.prod, unit=self.unit(), labels=self.label_strings(), idempotents=self.idempotents, name=f"A@{self.spot}")

    def specialize(self, spot):
        """Integral structure constants reduced at a spot."""
        if self.R is not LAURENT:
            raise ValueError("already over a field")
        F = residue_field(spot)
        prod = {}
        for key, val in self.prod.items():
            nz = [(k, F.from_laurent(c)) for k, c in val]
            nz = [(k, c) for k, c in nz if not F.is_zero(c)]
            if nz:
                prod[key] = nz
        mats = [[[F.from_laurent(a) for a in row] for row in M] for M in self.mats]
        idem = [[F.from_laurent(a) for a in e] for e in self.idempotents]
        return EndoAlgebra(self.coll, F, spot.label(), list(self.labels), mats, prod, idem, self.blocks, self.copies)

    def label_strings(self):
        W = self.coll.W
        names = self.coll.labels()
        return [f"{names[a]}<-{names[b]}:{W.label(d) if d is not None else k}" for a, b, d, k in self.labels]

    def mul(self, x, y):
        R = self.R
        out = self.zero()
        for (i, j), val in self.prod.items():
            a, b = x[i], y[j]
            if R.is_zero(a) or R.is_zero(b):
                continue
            ab = a * b
            for k, c in val:
                out[k] = out[k] + ab * c
        return out

    def hom_matrix(self, x):
        """The endomorphism of T given by x, blockwise."""
        return [(self.labels[i][0], self.labels[i][1], x[i]) for i in range(self.dim) if not self.R.is_zero(x[i])]

    def is_associative(self):
        R = self.R
        n = self.dim
        e = lambda i: [R.one if k == i else R.zero for k in range(n)]
        for i in range(n):
            for j in range(n):
                if (i, j) not in self.prod:
                    continue
                ij = self.mul(e(i), e(j))
                for k in range(n):
                    lhs = self.mul(ij, e(k))
                    rhs = self.mul(e(i), self.mul(e(j), e(k)))
                    if any(not R.is_zero(a - b) for a, b in zip(lhs, rhs)):
                        return False
        return True

    def rank_formula(self):
        """Sum over pairs of dim Hom(T_b, T_a)."""
        return sum(len(v) for v in self.blocks.values())

    def dump(self):
        strs = self.label_strings()
        lines = [f"basis {len(strs)}"] + [f"  {i}: {s}" for i, s in enumerate(strs)]
        for (i, j) in sorted(self.prod):
            terms = " + ".join(f"({self.R.fmt(c)})*b{k}" for k, c in self.prod[(i, j)])
            lines.append(f"b{i}*b{j} = {terms}")
        return "\n".join(lines) + "\n"


def _qperm_hom_matrix(H, lam_a, lam_b, d):
    """Matrix of x_b h -> g x_b^{-1} ... : the map x_b -> sum over W_a d W_b,
    in the bases x_a T_{d2} and x_b T_{d1}."""
    W, R = H.W, H.R
    g = {w: R.one for w in W.double_coset(lam_a, d, lam_b)}
    reps_a = W.min_right_coset_reps(lam_a)
    reps_b = W.min_right_coset_reps(lam_b)
    cols = []
    for d1 in reps_b:
        img = H.right_Tw(g, d1)
        col = [img.get(d2, R.zero) for d2 in reps_a]
        cols.append(col)
    return la.transpose(cols, len(reps_a))


def build_endo(coll: ModuleCollection, spot=None, verify=True):
    """End_H(T): integrally (spot None) or over the residue field at spot,
    with the double-coset basis; via Hom spaces for general collections."""
    if spot is None:
        if not coll.is_qperm:
            raise IntegralBasisUnavailable("integral mode needs q-permutation summands")
        return _build_qperm(coll, coll.H, "integral", verify)
    if coll.is_qperm:
        F = residue_field(spot)
        return _build_qperm(coll, HeckeAlgebra(coll.W, F), spot.label(), verify)
    return _build_general(coll, spot)


def _build_qperm(coll, H, tag, verify):
    W, R = H.W, H.R
    copies = coll.expanded()
    lams = [coll.summands[i].lam for i, _ in copies]
    labels, mats = [], []
    blocks = {}
    pos_e = {}
    for a, la_a in enumerate(lams):
        reps_a = W.min_right_coset_reps(la_a)
        for b, la_b in enumerate(lams):
            idx = []
            for d in W.double_coset_reps_idx(la_a, la_b):
                idx.append(len(labels))
                labels.append((a, b, d, None))
                mats.append(_qperm_hom_matrix(H, la_a, la_b, d))
            blocks[(a, b)] = idx
    # coordinates: entry at row d (in reps of a), column of x_b (rep e)
    row_of = {}
    for a, la_a in enumerate(lams):
        row_of[a] = {d: r for r, d in enumerate(W.min_right_coset_reps(la_a))}
    n = len(labels)
    prod = {}
    for i, (a, b, d, _) in enumerate(labels):
        for c in range(len(lams)):
            for j in blocks[(b, c)]:
                X = la.matmul(R, mats[i], mats[j])
                coords = []
                for k in blocks[(a, c)]:
                    dk = labels[k][2]
                    val = X[row_of[a][dk]][0]
                    if not R.is_zero(val):
                        coords.append((k, val))
                if verify:
                    Y = la.zeros(R, len(X), len(X[0]))
                    for k, val in coords:
                        Y = la.add(R, Y, la.scale(R, val, mats[k]))
                    if not la.mat_eq(R, X, Y):
                        raise ArithmeticError("composition is not in the span of the double-coset basis")
                if coords:
                    prod[(i, j)] = coords
    idem = []
    for a in range(len(lams)):
        v = [R.zero] * n
        for k in blocks[(a, a)]:
            if labels[k][2] == 0:
                v[k] = R.one
        idem.append(v)
    return EndoAlgebra(coll, R, tag, labels, mats, prod, idem, blocks, copies)


def _build_general(coll, spot):
    F = residue_field(spot)
    copies = coll.expanded()
    mods = [coll.summands[i].module.specialize(spot) for i, _ in copies]
    labels, mats = [], []
    blocks = {}
    for a, Ma in enumerate(mods):
        for b, Mb in enumerate(mods):
            idx = []
            for k, X in enumerate(hom_space(Mb, Ma)):
                idx.append(len(labels))
                labels.append((a, b, None, k))
                mats.append(X)
            blocks[(a, b)] = idx
    n = len(labels)
    flat = lambda X: [x for row in X for x in row]
    spaces = {}
    for key, idx in blocks.items():
        if idx:
            spaces[key] = la.transpose([flat(mats[k]) for k in idx])
    prod = {}
    for i, (a, b, _, _) in enumerate(labels):
        for c in range(len(mods)):
            for j in blocks[(b, c)]:
                X = la.matmul(F, mats[i], mats[j])
                if la.is_zero_matrix(F, X):
                    continue
                sol = la.solve(F, spaces[(a, c)], flat(X))
                if sol is None:
                    raise ArithmeticError("composite is not a homomorphism in the computed basis")
                coords = [(blocks[(a, c)][t], v) for t, v in enumerate(sol) if not F.is_zero(v)]
                if coords:
                    prod[(i, j)] = coords
    idem = []
    for a, Ma in enumerate(mods):
        I = la.identity(F, Ma.rank)
        sol = la.solve(F, spaces[(a, a)], flat(I))
        v = [F.zero] * n
        for t, val in enumerate(sol):
            v[blocks[(a, a)][t]] = val
        idem.append(v)
    return EndoAlgebra(coll, F, spot.label(), labels, mats, prod, idem, blocks, copies)


def consistent_with_integral(A_int: EndoAlgebra, A_spot: EndoAlgebra):
    """Specialized integral structure constants equal the per-spot build."""
    F = A_spot.R
    spec = {}
    for key, val in A_int.prod.items():
        nz = [(k, F.from_laurent(c)) for k, c in val]
        nz = tuple((k, c) for k, c in nz if not F.is_zero(c))
        if nz:
            spec[key] = nz
    direct = {key: tuple((k, c) for k, c in val if not F.is_zero(c)) for key, val in A_spot.prod.items()}
    direct = {k: v for k, v in direct.items() if v}
    if set(spec) != set(direct):
        return False
    for key in spec:
        a = dict(spec[key])
        b = dict(direct[key])
        if set(a) != set(b) or any(not F.is_zero(a[k] - b[k]) for k in a):
            return False
    return A_int.labels == A_spot.labels


# ---------------------------------------------------------------------------
# Ideal chain


@dataclass
class HeightIdealChain:
    A: EndoAlgebra
    N: int  # number of layers (J_N = A)
    spans: list  # spans[j] = basis vectors of J_j (over A.R)
    certified: bool = True  # integral echelon bases found
    layer_idempotents: list = None  # e_(j): summands with T_{N-j} = 0

    def dim(self, j):
        return len(self.spans[j])


def _summand_layer_vectors(A: EndoAlgebra, filts, l):
    """Basis of T_l in each summand copy, over A.R."""
    R = A.R
    out = []
    for i, _ in A.copies:
        vecs = filts[i].layers[l]
        out.append([[R.from_laurent(a) for a in v] for v in vecs] if R is not LAURENT else vecs)
    return out


def ideal_chain(A: EndoAlgebra, filts):
    """J_j = {alpha in A : alpha(T_{Nc - j}) = 0}, computed blockwise."""
    coll = A.coll
    Nc = coll.n_layers
    R = A.R
    n = A.dim
    spans = []
    certified = True
    layer_idem = []
    for j in range(Nc + 1):
        l = Nc - j
        layer = _summand_layer_vectors(A, filts, l)
        vecs = []
        for (a, b), idx in sorted(A.blocks.items()):
            if not idx:
                continue
            basis_b = layer[b]
            rows = []
            for v in basis_b:
                imgs = [la.matvec(R, A.mats[k], v) for k in idx]
                for r in range(len(imgs[0])):
                    rows.append([img[r] for img in imgs])
            m = len(idx)
            if R is LAURENT:
                if rows:
                    ker, ok = laurent_kernel_basis(rows, m)
                    certified = certified and ok
                else:
                    ker = [[ONE if s == t else LAURENT.zero for t in range(m)] for s in range(m)]
                zero = LAURENT.zero
            else:
                rows = [r for r in rows if not la.is_zero_vector(R, r)]
                ker = la.nullspace(R, rows, m) if rows else la.nullspace(R, [], m)
                zero = R.zero
            for c in ker:
                w = [zero] * n
                for t, k in enumerate(idx):
                    w[k] = c[t]
                vecs.append(w)
        spans.append(vecs)
        e = [R.zero] * n
        for a in range(len(A.copies)):
            if not layer[a]:
                e = [x + y for x, y in zip(e, A.idempotents[a])]
        layer_idem.append(e)
    return HeightIdealChain(A, Nc, spans, certified, layer_idem)


def ideal_chain_at(A_int: EndoAlgebra, filts, spot):
    A = A_int.specialize(spot) if A_int.R is LAURENT else A_int
    return A, ideal_chain(A, filts)


def check_idempotent(B: fa.FieldAlgebra, J: la.Subspace):
    return B.product_space(J, J) == J


def check_nested(chain: HeightIdealChain):
    F = chain.A.R
    prev = None
    for vecs in chain.spans:
        S = la.Subspace(F, chain.A.dim, vecs)
        if prev is not None and not S.contains_space(prev):
            return False
        prev = S
    return True


def check_quotient_free(A: EndoAlgebra, J_vecs, max_minors=3000):
    """True if the Z[t,t^-1]-span of J_vecs is a direct summand of A with free
    complement; False if the maximal minors share a non-unit factor;
    otherwise the string "unknown"."""
    if A.R is not LAURENT:
        raise IntegralBasisUnavailable("quotient freeness is an integral question")
    n = A.dim
    if not J_vecs:
        return True
    K = QT()
    Kv = [to_field_vec(K, v) for v in J_vecs]
    rows, piv = la.rref(K, Kv, n)
    echelon = [laurent_vec(r) for r in rows]
    if all(e is not None for e in echelon):
        # each echelon row must be an integral combination of J_vecs
        indep = _independent_subset(K, Kv, n)
        basis = [Kv[i] for i in indep]
        ok = True
        for r in rows:
            c = la.solve(K, la.transpose(basis, n), r)
            if c is None or laurent_vec(c) is None:
                ok = False
                break
        if ok:
            return True
    indep = _independent_subset(K, Kv, n)
    S = [J_vecs[i] for i in indep]
    k = len(S)
    from itertools import combinations
    from math import comb

    if comb(n, k) > max_minors:
        return "unknown"
    g = None
    Fz = _LaurentDet()
    for cols in combinations(range(n), k):
        d = Fz.det([[S[r][c] for c in cols] for r in range(k)])
        if d.is_zero():
            continue
        g = laurent_gcd([d] if g is None else [g, d])
        if laurent_is_unit(g):
            return "unknown"
    if g is None or not laurent_is_unit(g):
        return False
    return "unknown"


def _independent_subset(K, vecs, n):
    chosen = []
    S = la.Subspace.zero(K, n)
    for i, v in enumerate(vecs):
        if not S.contains(v):
            chosen.append(i)
            S = S.add_vectors([v])
    return chosen


class _LaurentDet:
    """Determinants of Laurent matrices through Q(t)."""

    def det(self, M):
        K = QT()
        d = la.det(K, [to_field_vec(K, r) for r in M])
        out = K.to_laurent(d)
        if out is None:
            raise ArithmeticError("determinant of a Laurent matrix left Z[t,t^-1]")
        return out


def morita_progenerator_check(B: fa.FieldAlgebra, e):
    if not B.is_idempotent_elt(e):
        raise fa.NotIdempotent("e is not idempotent")
    return B.two_sided_ideal([e]).dim == B.dim


def regular_idempotent(A: EndoAlgebra):
    """Projection of T onto its H_H summand."""
    coll = A.coll
    if coll.regular_index is None:
        return None
    for k, (i, c) in enumerate(A.copies):
        if i == coll.regular_index and c == 0:
            return A.idempotents[k]
    return None


# ---------------------------------------------------------------------------
# Morita corner compatibility


def corner_compatibility(A: EndoAlgebra, chain: HeightIdealChain, e):
    """e J_j e lies in the span of e A e for each j, and e J_j e is the set
    of elements of eAe killing the regular summand's T_{Nc - j}."""
    B = A.field_algebra()
    F = A.R
    ok = True
    for vecs in chain.spans:
        J = la.Subspace(F, A.dim, vecs)
        for v in vecs:
            w = B.mul(B.mul(e, v), e)
            if not J.contains(w):
                ok = False
    return ok
