"""Kazhdan-Lusztig preorders, left and two-sided cells, quasi-posets and
height functions.

Orientation: z <=_L y when C'_z occurs in some h C'_y. Hence the cell of
w0 is the minimum and the cell of e the maximum for <=_L and <=_LR. Heights
are taken for the opposite order <=_LR^op, so the cell of e has height 0
and the cell of w0 the largest height.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .hecke import HeckeAlgebra, KLData, LAURENT, _add_into
from .ringtower import ZERO

ORIENTATION = "w0-cell minimal, e-cell maximal for <=_LR; heights on <=_LR^op"


class CycleBeyondEquivalence(ValueError):
    pass


class IncompatibleHeight(ValueError):
    pass


# ---------------------------------------------------------------------------
# Quasi-posets


@dataclass
class QuasiPoset:
    """A finite set 0..n-1 with a reflexive transitive relation leq[a][b]."""

    labels: list
    leq: list

    @property
    def n(self):
        return len(self.labels)

    def less(self, a, b):
        return self.leq[a][b] and not self.leq[b][a]

    def equiv(self, a, b):
        return self.leq[a][b] and self.leq[b][a]

    def op(self):
        return QuasiPoset(list(self.labels), [[self.leq[b][a] for b in range(self.n)] for a in range(self.n)])

    def is_reflexive(self):
        return all(self.leq[a][a] for a in range(self.n))

    def is_transitive(self):
        n = self.n
        return all(
            not (self.leq[a][b] and self.leq[b][c]) or self.leq[a][c]
            for a in range(n)
            for b in range(n)
            for c in range(n)
        )

    def is_preorder(self):
        return self.is_reflexive() and self.is_transitive()

    def restrict(self, idx):
        return QuasiPoset([self.labels[i] for i in idx], [[self.leq[a][b] for b in idx] for a in idx])


def standard_height(P: QuasiPoset):
    """ht(a) = maximal length of a chain a = a_n > ... > a_0."""
    n = P.n
    ht = [None] * n
    state = [0] * n  # 0 new, 1 on stack, 2 done

    def visit(a):
        if state[a] == 2:
            return ht[a]
        if state[a] == 1:
            raise CycleBeyondEquivalence("strict order has a cycle")
        state[a] = 1
        best = 0
        for b in range(n):
            if b != a and P.leq[b][a] and not P.leq[a][b]:
                best = max(best, visit(b) + 1)
        state[a] = 2
        ht[a] = best
        return best

    for a in range(n):
        visit(a)
    return ht


def check_height(P: QuasiPoset, ht):
    """True iff ht is compatible: a < b => ht(a) < ht(b), a ~ b => equal."""
    for a in range(P.n):
        for b in range(P.n):
            if P.less(a, b) and not ht[a] < ht[b]:
                return False
            if P.equiv(a, b) and ht[a] != ht[b]:
                return False
    return True


# ---------------------------------------------------------------------------
# Cells


@dataclass
class CellDecomposition:
    kl: KLData
    left_cells: list  # lists of element indices
    two_sided_cells: list
    left_of: list  # element -> left cell index
    two_of: list  # element -> two-sided cell index
    left_leq: list  # left_leq[a][b]: cell a <=_L cell b
    two_leq: list  # two_leq[a][b]: cell a <=_LR cell b
    right_cells: list = None
    orientation: str = ORIENTATION

    @property
    def W(self):
        return self.kl.W

    def two_of_left(self, omega):
        return self.two_of[self.left_cells[omega][0]]

    def lr_quasiposet(self):
        labels = [self.cell_label(c) for c in self.two_sided_cells]
        return QuasiPoset(labels, [list(r) for r in self.two_leq])

    def lr_op(self):
        return self.lr_quasiposet().op()

    def two_sided_heights(self):
        return standard_height(self.lr_op())

    def left_heights(self, two_ht=None):
        if two_ht is None:
            two_ht = self.two_sided_heights()
        return [two_ht[self.two_of_left(o)] for o in range(len(self.left_cells))]

    def left_lr_quasiposet(self):
        """Left cells ordered by <=_LR of their two-sided cells."""
        k = len(self.left_cells)
        t = [self.two_of_left(o) for o in range(k)]
        return QuasiPoset([self.cell_label(c) for c in self.left_cells], [[self.two_leq[t[a]][t[b]] for b in range(k)] for a in range(k)])

    def cell_label(self, cell):
        return "{" + ",".join(self.W.label(x) for x in cell) + "}"

    def max_height(self):
        return max(self.two_sided_heights())

    def report(self):
        W = self.W
        ht2 = self.two_sided_heights()
        return {
            "orientation": self.orientation,
            "kl_normalization": "Soergel: C'_w = sum p_{y,w} t^{-L(y)} T_y, p in t^-1 Z[t^-1]",
            "conjecture_dependent": self.kl.conjecture_dependent,
            "left_cells": [
                {"members": [W.label(x) for x in c], "two_sided": self.two_of[c[0]], "height": ht2[self.two_of[c[0]]]}
                for c in self.left_cells
            ],
            "two_sided_cells": [
                {"members": [W.label(x) for x in c], "height": ht2[i]} for i, c in enumerate(self.two_sided_cells)
            ],
            "lr_edges": [
                [a, b]
                for a in range(len(self.two_sided_cells))
                for b in range(len(self.two_sided_cells))
                if a != b and self.two_leq[a][b]
            ],
        }


def _cells_from_edges(size, edges):
    """SCCs of the digraph y -> z (meaning z <= y), ordered by smallest member,
    plus the induced reachability preorder on them."""
    G = nx.DiGraph()
    G.add_nodes_from(range(size))
    G.add_edges_from(edges)
    comps = sorted((sorted(c) for c in nx.strongly_connected_components(G)), key=lambda c: c[0])
    of = [0] * size
    for i, c in enumerate(comps):
        for x in c:
            of[x] = i
    C = nx.condensation(G, scc=[set(c) for c in comps])
    k = len(comps)
    leq = [[False] * k for _ in range(k)]
    for a in range(k):
        leq[a][a] = True
        for b in nx.descendants(C, a):
            # b reachable from a: members of b are <= members of a
            leq[b][a] = True
    return comps, of, leq


def _build(kl, left_edges, right_edges):
    W = kl.W
    lcells, lof, lleq = _cells_from_edges(W.size, left_edges)
    rcells, _, _ = _cells_from_edges(W.size, right_edges)
    tcells, tof, tleq = _cells_from_edges(W.size, left_edges + right_edges)
    return CellDecomposition(kl, lcells, tcells, lof, tof, lleq, tleq, rcells)


def compute_cells(kl: KLData):
    """Cells from the C'_s C'_y straightening data (production path)."""
    W = kl.W
    left, right = [], []
    for y in range(W.size):
        for s in range(W.rank):
            for z in kl.left_mult(s, y):
                if z != y:
                    left.append((y, z))
            for z in kl.right_mult(y, s):
                if z != y:
                    right.append((y, z))
    return _build(kl, left, right)


# ---------------------------------------------------------------------------
# Brute-force oracle


def transition_inverse(kl):
    """Inverse of the unitriangular matrix expressing C' in the Ht-basis,
    built column by column by back substitution: Ht_y = sum_z q_{z,y} C'_z."""
    W = kl.W
    inv = [None] * W.size
    for y in range(W.size):
        # Ht_y = C'_y - sum_{z<y} p_{z,y} Ht_z
        col = {y: LAURENT.one}
        for z, a in kl.p[y].items():
            if z == y:
                continue
            for u, b in inv[z].items():
                _add_into(col, u, -(a * b), LAURENT)
        inv[y] = col
    return inv


def brute_force_cells(kl: KLData):
    """Cells from the supports of T_x C'_y and C'_y T_x for all x, y, with
    C'-coordinates read off through transition_inverse."""
    W = kl.W
    H = HeckeAlgebra(W)
    inv = transition_inverse(kl)

    def cprime_coords(h_T):
        out = {}
        for y, a in h_T.items():
            a = a.shift(W.wlength[y])
            for z, b in inv[y].items():
                _add_into(out, z, a * b, LAURENT)
        return out

    left, right = [], []
    for y in range(W.size):
        cy = kl.cprime_T(y)
        for x in range(W.size):
            for z in cprime_coords(H.left_Tw(x, cy)):
                if z != y:
                    left.append((y, z))
            for z in cprime_coords(H.right_Tw(cy, x)):
                if z != y:
                    right.append((y, z))
    return _build(kl, left, right)


# ---------------------------------------------------------------------------
# Refined preorder


def op_preorder(cells: CellDecomposition):
    return cells.lr_op()


def refined_preorder(cells: CellDecomposition, ht=None):
    """omega <= omega' iff ht(omega) < ht(omega'), or equal heights and the
    same two-sided cell. ht is a height on left cells compatible with
    <=_LR^op."""
    P = cells.left_lr_quasiposet().op()
    if ht is None:
        ht = cells.left_heights()
    if not check_height(P, ht):
        raise IncompatibleHeight("height function incompatible with <=_LR^op")
    k = len(cells.left_cells)
    two = [cells.two_of_left(o) for o in range(k)]
    leq = [[ht[a] < ht[b] or (ht[a] == ht[b] and two[a] == two[b]) for b in range(k)] for a in range(k)]
    return QuasiPoset(list(P.labels), leq), ht


def cell_mu_value(kl, z, y):
    return kl.p[y].get(z, ZERO).coeff(-1)
