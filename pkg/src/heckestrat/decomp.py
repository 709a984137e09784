"""Decomposition matrices over finite residue fields and the triangularity
checks for the standard objects E(lambda) and the two-sided cell modules.

Rows carry a height. For the E(lambda) it is the height of the summand
whose standard module gives E(lambda): the first section J_1 carries the
largest height and A / J_{N-1} the smallest. lambda(D) is the row of
smallest height hitting D.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import fdalg as fa
from . import linalg as la
from . import meataxe as mx
from . import schur as sc
from . import stratcheck as st
from .hecke import HeckeAlgebra
from .hmodules import two_sided_cell_module
from .ringtower import PrimeSpot, residue_field


class SectionNotSplit(ValueError):
    pass


class NotFinite(ValueError):
    pass


# ---------------------------------------------------------------------------
# Simples and multiplicities


def simples_finite_field(B: fa.FieldAlgebra, seed=0):
    if not getattr(B.F, "is_finite", False):
        raise NotFinite("simple modules are computed over finite fields only")
    sd = mx.simple_modules(B, random.Random(seed))
    mx.find_peakwords(sd, random.Random(seed + 1))
    mx.projective_cover_dims(sd)
    total = sum(D.dim // e * pd for D, e, pd in zip(sd.simples, sd.endo, sd.proj_dims))
    if total != B.dim:
        raise ArithmeticError("simple modules incomplete: cover dimensions do not add up")
    return sd


def composition_multiplicity(sd, M, i=None):
    mults = mx.composition_multiplicities(sd, M)
    if sum(m * D.dim for m, D in zip(mults, sd.simples)) != M.dim:
        raise ArithmeticError("multiplicity bookkeeping failed")
    return mults if i is None else mults[i]


def radical_series_multiplicities(sd, M, rad=None):
    """Oracle: walk the radical series M > rad M > rad^2 M > ...; each layer
    is semisimple, so [layer : D] = dim Hom(layer, D) / dim End(D)."""
    B = sd.B
    rad = rad if rad is not None else mx.radical_ciw(B)
    out = [0] * len(sd.simples)
    cur = M
    while cur.dim:
        R = cur.radical_submodule(rad)
        top = cur.quotient(R)
        for i, (D, e) in enumerate(zip(sd.simples, sd.endo)):
            out[i] += len(fa.hom_space_naive(top, D)) // e
        cur = cur.submodule(R)
    return out


def in_head(M, D):
    return fa.hom_dim(M, D) > 0


# ---------------------------------------------------------------------------
# Standard objects E(lambda)


@dataclass
class StandardObject:
    label: str  # summand copy whose standard module is E(lambda)
    section: int  # j with E(lambda) a summand of J_j / J_{j-1}
    height: int  # height of the summand
    cell: int  # two-sided cell c[lambda]
    generic_dim: int
    copy: int  # index into the copies of the endomorphism algebra


@dataclass
class StandardObjects:
    coll: object
    A_int: object
    filts: list
    objects: list
    hecke_dims: list = field(default_factory=list)

    def rows(self):
        return [o.label for o in self.objects]


def _section_of(chain, e):
    """Smallest j with e in J_j."""
    F = chain.A.R
    for j in range(chain.N + 1):
        if la.Subspace(F, chain.A.dim, chain.spans[j]).contains(e):
            return j
    raise ValueError("idempotent outside the chain")


def build_E_lambda(coll, A_int=None, filts=None):
    """One E(lambda) per irreducible A_K-module: the standard modules
    Delta(a) = A e_a / J_{j-1} e_a that are irreducible at Generic, one per
    isomorphism class. Raises SectionNotSplit when some simple A_K-module
    has no such representative."""
    A_int = A_int or sc.build_endo(coll)
    filts = filts or sc.height_filtration(coll)
    spot = PrimeSpot.generic()
    As = A_int.specialize(spot)
    chain = sc.ideal_chain(As, filts)
    sysK = st.strat_system_from_chain(As, coll, chain)
    B = sysK.B
    ss, split, blocks = st.is_split_semisimple(B)
    if ss is not True or split is not True:
        raise SectionNotSplit("A is not split semisimple at Generic")
    reps = []
    for k in range(len(sysK.labels)):
        D = sysK.Delta[k]
        if fa.hom_dim(D, D) != 1:
            continue
        if any(fa.hom_dim(sysK.Delta[r], D) for r in reps):
            continue
        reps.append(k)
    if len(reps) != len(blocks):
        raise SectionNotSplit(f"{len(blocks)} simple modules at Generic but only {len(reps)} irreducible standard modules")
    objs = []
    for k in reps:
        i, _ = As.copies[k]
        S = coll.summands[i]
        objs.append(StandardObject(sysK.labels[k], _section_of(chain, As.idempotents[k]), S.height, coll.cells.two_of_left(S.cell), sysK.Delta[k].dim, k))
    objs.sort(key=lambda o: (o.height, o.label))
    # corner dims e_H E_K(lambda) (the Hecke-side modules)
    e = sc.regular_idempotent(As)
    hdims = [sysK.Delta[o.copy].image_of(e).dim if e is not None else None for o in objs]
    return StandardObjects(coll, A_int, filts, objs, hdims)


def _corner_algebra_module(B, C, M, e):
    """e M as a module over the corner C = e B e (C.embedding gives its basis in B)."""
    F = B.F
    eM = M.image_of(e)
    act = []
    for c in C.embedding.basis:
        X = M.elt_matrix(c)
        cols = [eM.coords(la.matvec(F, X, v)) for v in eM.basis]
        act.append(la.transpose(cols, eM.dim) if cols else [])
    return fa.FAModule(C, eM.dim, act, f"e{M.name}")


@dataclass
class DecompositionMatrix:
    spot: str
    rows: list  # row labels
    heights: list
    cells: list
    simple_dims: list
    entries: list  # entries[r][d]
    row_dims: list
    oracle_entries: list = None

    def to_dict(self):
        return {
            "spot": self.spot,
            "rows": [{"label": l, "height": h, "cell": c, "dim": d, "entries": list(e)} for l, h, c, d, e in zip(self.rows, self.heights, self.cells, self.row_dims, self.entries)],
            "simple_dims": list(self.simple_dims),
            "oracle_agrees": None if self.oracle_entries is None else self.oracle_entries == self.entries,
        }

    def pretty(self):
        w = max([len(r) for r in self.rows] + [6])
        lines = [" " * (w + 6) + " ".join(f"D{i}({d})" for i, d in enumerate(self.simple_dims))]
        for l, h, e in zip(self.rows, self.heights, self.entries):
            lines.append(f"{l:<{w}} ht={h:<2} " + " ".join(f"{x:>{len(f'D{i}({d})')}}" for i, (x, d) in enumerate(zip(e, self.simple_dims))))
        return "\n".join(lines)


def phi4_regime(spot):
    """Which regime a run is in: t^2 + 1 invertible at the spot or not."""
    F = residue_field(spot)
    zero = F.is_zero(F.t * F.t + F.one)
    return "t^2+1 in m (local, opted in)" if zero else "t^2+1 invertible"


def decomposition_matrix(objs: StandardObjects, spot, side="hecke", oracle=True, seed=0):
    """[E(lambda)(m) : D] at a maximal spot. side="hecke" works with
    e_H E(lambda) over e_H A e_H = H(m); side="endo" with E(lambda) over A(m)."""
    if not spot.is_maximal():
        raise NotFinite("decomposition matrices need a maximal spot (p, f)")
    coll = objs.coll
    As = objs.A_int.specialize(spot)
    chain = sc.ideal_chain(As, objs.filts)
    sysm = st.strat_system_from_chain(As, coll, chain)
    B = sysm.B
    mods = [sysm.Delta[o.copy] for o in objs.objects]
    if side == "hecke":
        e = sc.regular_idempotent(As)
        C = B.corner(e)
        mods = [_corner_algebra_module(B, C, M, e) for M in mods]
        alg = C
    else:
        alg = B
    sd = simples_finite_field(alg, seed)
    ent = [composition_multiplicity(sd, M) for M in mods]
    orc = None
    if oracle:
        rad = mx.radical_ciw(alg)
        orc = [radical_series_multiplicities(sd, M, rad) for M in mods]
    dm = DecompositionMatrix(spot.label(), objs.rows(), [o.height for o in objs.objects], [o.cell for o in objs.objects], [D.dim for D in sd.simples], ent, [M.dim for M in mods], orc)
    dm.modules = mods
    dm.simples = sd
    return dm


def verify_triangularity(dm: DecompositionMatrix, modules=None, simples=None):
    """For each simple D: lambda(D) is the unique row of smallest height with
    a nonzero entry, every other row of height <= ht(lambda(D)) has zero
    entry, D is in the head of E(lambda(D)) and the entry is 1."""
    modules = modules if modules is not None else getattr(dm, "modules", None)
    simples = simples if simples is not None else getattr(dm, "simples", None)
    n = len(dm.rows)
    order = sorted(range(n), key=lambda r: (dm.heights[r], dm.rows[r]))
    per = []
    ok = True
    for d in range(len(dm.simple_dims)):
        hits = [r for r in order if dm.entries[r][d]]
        rec = {"simple": d, "dim": dm.simple_dims[d]}
        if not hits:
            rec.update(ok=False, witness="no row contains this simple")
            per.append(rec)
            ok = False
            continue
        lam = hits[0]
        others = [r for r in hits[1:] if dm.heights[r] <= dm.heights[lam]]
        rec["lambda"] = dm.rows[lam]
        rec["unique"] = not others
        rec["multiplicity_one"] = dm.entries[lam][d] == 1
        if modules is not None and simples is not None:
            rec["in_head"] = in_head(modules[lam], simples.simples[d])
        else:
            rec["in_head"] = None
        good = rec["unique"] and rec["multiplicity_one"] and rec["in_head"] is not False
        if others:
            rec["witness"] = [dm.rows[r] for r in others]
        rec["ok"] = good
        ok = ok and good
        per.append(rec)
    return {"ok": ok, "simples": per}


def bookkeeping_ok(dm):
    return all(sum(m * d for m, d in zip(row, dm.simple_dims)) == rd for row, rd in zip(dm.entries, dm.row_dims))


# ---------------------------------------------------------------------------
# Block version with two-sided cell modules


def hecke_field_algebra(W, F):
    """H(m) in the T-basis as a FieldAlgebra."""
    H = HeckeAlgebra(W, F)
    table = H.mult_table()
    prod = {}
    for x in range(W.size):
        for y in range(W.size):
            nz = [(z, c) for z, c in sorted(table[x][y].items()) if not F.is_zero(c)]
            if nz:
                prod[(x, y)] = nz
    unit = [F.one if w == 0 else F.zero for w in range(W.size)]
    return fa.FieldAlgebra(F, W.size, prod, unit=unit, labels=[f"T[{W.label(w)}]" for w in range(W.size)], name="H")


def lattice_to_famodule(M, B):
    """A specialized left lattice module as a module over B = H(m) (T-basis)."""
    W = M.W
    act = [M.word_matrix(W.words[w]) for w in range(W.size)]
    return fa.FAModule(B, M.rank, act, M.provenance)


def verify_block_triangularity(cells, spot, seed=0):
    """Rows: two-sided cell modules S[omega](m) with the two-sided cell
    heights; columns: simples of H(m)."""
    W = cells.W
    F = residue_field(spot)
    B = hecke_field_algebra(W, F)
    ht = cells.two_sided_heights()
    mods_int = [two_sided_cell_module(cells, xi) for xi in range(len(cells.two_sided_cells))]
    rank_sum = sum(M.rank for M in mods_int)
    mods = []
    for M in mods_int:
        Ms = M.specialize(spot)
        Ms.check_relations()
        mods.append(lattice_to_famodule(Ms, B))
    sd = simples_finite_field(B, seed)
    rad = mx.radical_ciw(B)
    ent = [composition_multiplicity(sd, M) for M in mods]
    orc = [radical_series_multiplicities(sd, M, rad) for M in mods]
    labels = [cells.cell_label(c) for c in cells.two_sided_cells]
    dm = DecompositionMatrix(spot.label(), labels, list(ht), list(range(len(labels))), [D.dim for D in sd.simples], ent, [M.dim for M in mods], orc)
    n = len(labels)
    order = sorted(range(n), key=lambda r: (ht[r], labels[r]))
    per = []
    ok = True
    for d in range(len(sd.simples)):
        hits = [r for r in order if ent[r][d]]
        rec = {"simple": d, "dim": sd.simples[d].dim}
        if not hits:
            rec.update(ok=False, witness="no cell module contains this simple")
            ok = False
            per.append(rec)
            continue
        om = hits[0]
        others = [r for r in hits[1:] if ht[r] <= ht[om]]
        rec["cell"] = labels[om]
        rec["unique"] = not others
        rec["in_head"] = in_head(mods[om], sd.simples[d])
        if others:
            rec["witness"] = [labels[r] for r in others]
        rec["ok"] = rec["unique"] and rec["in_head"]
        ok = ok and rec["ok"]
        per.append(rec)
    return {
        "ok": ok and rank_sum == W.size and orc == ent,
        "rank_sum": rank_sum,
        "group_order": W.size,
        "oracle_agrees": orc == ent,
        "matrix": dm.to_dict(),
        "simples": per,
    }
