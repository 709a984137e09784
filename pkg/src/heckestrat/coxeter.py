"""Finite Coxeter systems: element enumeration, multiplication, Bruhat order,
parabolic subgroups and double coset representatives.

Elements are indexed 0..|W|-1 in (length, canonical word) order, with
index 0 the identity. The canonical word of an element is its
lexicographically least reduced word (generators compared by index).

Enumeration never uses a matrix representation. Level L+1 is built from
level L: for a new element v = w*s, a second generator s' is a right descent
of v exactly when v ends in the longest element of the dihedral group
<s, s'>, which is detected by alternately stripping s', s, ... from w using
the already known descent tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_CAP = 10_000


class BoundExceeded(RuntimeError):
    pass


class InvalidCoxeterMatrix(ValueError):
    pass


class InvalidWeights(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Elt:
    """Group element as its canonical reduced word (generator indices 0..n-1)."""

    word: tuple

    @property
    def length(self):
        return len(self.word)

    def label(self):
        return word_label(self.word)

    def __str__(self):
        return self.label()


def word_label(word):
    return "e" if not word else "".join(f"s{i + 1}" for i in word)


def parse_word(text):
    text = text.strip()
    if text in ("e", "1", ""):
        return ()
    parts = [p for p in text.replace(" ", "").split("s") if p]
    return tuple(int(p) - 1 for p in parts)


# ---------------------------------------------------------------------------
# Coxeter matrices of the standard types (Bourbaki numbering)


def _chain(n, m=3):
    M = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        M[i][i + 1] = M[i + 1][i] = m
    return M


def coxeter_matrix_of_type(label):
    label = label.strip().upper()
    family = label[0]
    if family == "I":
        # I2(m), written I2(5) or I2_5
        inner = label[2:].strip("()_")
        m = int(inner)
        if m < 2:
            raise InvalidCoxeterMatrix("I2(m) needs m >= 2")
        return [[1, m], [m, 1]]
    n = int(label[1:])
    if n < 1:
        raise InvalidCoxeterMatrix("rank must be positive")
    if family == "A":
        return _chain(n)
    if family in ("B", "C"):
        if n < 2:
            raise InvalidCoxeterMatrix(f"{family}n needs n >= 2")
        M = _chain(n)
        M[n - 2][n - 1] = M[n - 1][n - 2] = 4
        return M
    if family == "D":
        if n < 4:
            raise InvalidCoxeterMatrix("Dn needs n >= 4")
        M = _chain(n - 1) if n > 1 else [[1]]
        M = [row + [2] for row in M] + [[2] * (n - 1) + [1]]
        M[n - 3][n - 1] = M[n - 1][n - 3] = 3
        return M
    if family == "E":
        if n not in (6, 7, 8):
            raise InvalidCoxeterMatrix("En needs n in 6, 7, 8")
        M = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]
        for i, j in edges:
            M[i][j] = M[j][i] = 3
        return M
    if family == "F":
        if n != 4:
            raise InvalidCoxeterMatrix("only F4")
        M = _chain(4)
        M[1][2] = M[2][1] = 4
        return M
    if family == "G":
        if n != 2:
            raise InvalidCoxeterMatrix("only G2")
        return [[1, 6], [6, 1]]
    if family == "H":
        if n not in (2, 3, 4):
            raise InvalidCoxeterMatrix("Hn needs n in 2, 3, 4")
        M = _chain(n)
        M[0][1] = M[1][0] = 5
        return M
    raise InvalidCoxeterMatrix(f"unknown type {label!r}")


def is_crystallographic_matrix(M):
    return all(M[i][j] in (1, 2, 3, 4, 6) for i in range(len(M)) for j in range(len(M)))


# ---------------------------------------------------------------------------


class CoxeterSystem:
    """A finite Coxeter system with positive weights c_s."""

    def __init__(self, matrix, weights=None, type_label="custom", bn_pair=False, cap=DEFAULT_CAP):
        M = [list(map(int, row)) for row in matrix]
        n = len(M)
        if n == 0 or any(len(row) != n for row in M):
            raise InvalidCoxeterMatrix("matrix must be square and nonempty")
        for i in range(n):
            if M[i][i] != 1:
                raise InvalidCoxeterMatrix("diagonal entries must be 1")
            for j in range(n):
                if M[i][j] != M[j][i]:
                    raise InvalidCoxeterMatrix("matrix must be symmetric")
                if i != j and M[i][j] < 2:
                    raise InvalidCoxeterMatrix("off-diagonal entries must be >= 2 (infinity unsupported)")
        self.rank = n
        self.matrix = tuple(tuple(row) for row in M)
        self.type_label = type_label
        self.bn_pair = bool(bn_pair)
        if weights is None:
            weights = [1] * n
        weights = [int(c) for c in weights]
        if len(weights) != n or any(c <= 0 for c in weights):
            raise InvalidWeights("need one positive weight per generator")
        self.weights = tuple(weights)
        # The Hecke relations only make sense if weights agree on generators
        # joined by an odd-m path (such generators are conjugate in W).
        for comp in self.conjugacy_classes_of_generators():
            if len({self.weights[s] for s in comp}) > 1:
                raise InvalidWeights(
                    f"weights must agree on conjugate generators {[f's{s + 1}' for s in comp]}"
                )
        self.cap = cap
        self._enumerate()

    @classmethod
    def from_type(cls, label, weights=None, bn_pair=False, cap=DEFAULT_CAP):
        return cls(coxeter_matrix_of_type(label), weights, label.strip().upper(), bn_pair, cap)

    def m(self, s, t):
        return self.matrix[s][t]

    def conjugacy_classes_of_generators(self):
        n = self.rank
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(n):
            for j in range(i + 1, n):
                if self.matrix[i][j] % 2 == 1:
                    parent[find(i)] = find(j)
        comps = {}
        for i in range(n):
            comps.setdefault(find(i), []).append(i)
        return sorted(comps.values())

    def equal_parameters(self):
        return len(set(self.weights)) == 1

    def is_crystallographic(self):
        return is_crystallographic_matrix(self.matrix)

    # -- enumeration
    def _enumerate(self):
        n = self.rank
        words = [()]
        down = [{}]  # down[v][s] = index of v*s when s is a right descent
        up = [{}]
        level = [0]
        key_index = {}
        while level:
            new_level = []
            key_index.clear()
            for w in level:
                for s in range(n):
                    if s in down[w]:
                        continue
                    desc = {s: w}
                    for s2 in range(n):
                        if s2 == s:
                            continue
                        m = self.matrix[s][s2]
                        # v = w*s has s2 as a descent iff m-1 alternating strips
                        # s2, s, s2, ... from w all succeed.
                        x = w
                        ok = True
                        letters = []
                        for k in range(m - 1):
                            a = s2 if k % 2 == 0 else s
                            nxt = down[x].get(a)
                            if nxt is None:
                                ok = False
                                break
                            letters.append(a)
                            x = nxt
                        if not ok:
                            continue
                        # v = x * (alternating word of length m ending in s); so
                        # v*s2 = x * (alternating word of length m-1 ending in s)
                        # alternating word of length m-1 whose last letter is s
                        alt = [(s if (m - 1 - k) % 2 == 1 else s2) for k in range(m - 1)]
                        y = x
                        for a in alt:
                            y = up[y][a]
                        desc[s2] = y
                    key = tuple(sorted(desc.items()))
                    v = key_index.get(key)
                    if v is None:
                        v = len(words)
                        if v >= self.cap:
                            raise BoundExceeded(f"more than {self.cap} elements; group infinite or cap too small")
                        best = min((words[x] + (a,) for a, x in desc.items()))
                        words.append(best)
                        down.append(dict(desc))
                        up.append({})
                        key_index[key] = v
                        new_level.append(v)
                        for a, x in desc.items():
                            up[x][a] = v
                    # else already recorded: the up entry was set for every descent
            level = new_level
        order = sorted(range(len(words)), key=lambda i: (len(words[i]), words[i]))
        pos = {old: new for new, old in enumerate(order)}
        self.words = [words[i] for i in order]
        self.size = len(self.words)
        self.length = [len(w) for w in self.words]
        self.rmul = [[0] * n for _ in range(self.size)]
        for old in range(len(words)):
            new = pos[old]
            for a, x in down[old].items():
                self.rmul[new][a] = pos[x]
            for a, x in up[old].items():
                self.rmul[new][a] = pos[x]
        self.index = {w: i for i, w in enumerate(self.words)}
        self.inv = [self._walk(0, reversed(w)) for w in self.words]
        self.lmul = [[self.inv[self.rmul[self.inv[i]][s]] for s in range(n)] for i in range(self.size)]
        self.wlength = [sum(self.weights[a] for a in w) for w in self.words]
        self.rdesc = [frozenset(s for s in range(n) if self.length[self.rmul[i][s]] < self.length[i]) for i in range(self.size)]
        self.ldesc = [frozenset(s for s in range(n) if self.length[self.lmul[i][s]] < self.length[i]) for i in range(self.size)]
        self.w0 = self.size - 1
        self._bruhat = None

    def _walk(self, start, word):
        x = start
        for a in word:
            x = self.rmul[x][a]
        return x

    # -- element API
    def elt(self, i):
        return Elt(self.words[i])

    def idx(self, x):
        if isinstance(x, int):
            return x
        if isinstance(x, Elt):
            return self._walk(0, x.word)
        if isinstance(x, str):
            return self._walk(0, parse_word(x))
        return self._walk(0, tuple(x))

    def canon(self, word):
        return Elt(self.words[self._walk(0, word)])

    def elements(self):
        return [Elt(w) for w in self.words]

    def mul(self, i, j):
        return self._walk(i, self.words[j])

    def label(self, i):
        return word_label(self.words[i])

    def order(self):
        return self.size

    # -- Bruhat order
    def bruhat_below(self, y):
        """Bitset (int) of all x <= y."""
        if self._bruhat is None:
            below = [0] * self.size
            below[0] = 1
            for yy in range(1, self.size):
                s = min(self.rdesc[yy])
                B = below[self.rmul[yy][s]]
                acc = B
                bits = B
                while bits:
                    low = bits & -bits
                    x = low.bit_length() - 1
                    acc |= 1 << self.rmul[x][s]
                    bits ^= low
                below[yy] = acc
            self._bruhat = below
        return self._bruhat[y]

    def bruhat_leq_idx(self, x, y):
        return bool((self.bruhat_below(y) >> x) & 1)

    # -- parabolics
    def parabolic_elements(self, lam):
        lam = frozenset(lam)
        return [i for i, w in enumerate(self.words) if all(a in lam for a in w)]

    def longest_idx(self, lam):
        els = self.parabolic_elements(lam)
        return max(els, key=lambda i: (self.length[i], self.words[i]))

    def min_left_coset_reps(self, mu):
        """Minimal representatives of W / W_mu."""
        mu = frozenset(mu)
        return [i for i in range(self.size) if not (self.rdesc[i] & mu)]

    def min_right_coset_reps(self, lam):
        """Minimal representatives of W_lam \\ W."""
        lam = frozenset(lam)
        return [i for i in range(self.size) if not (self.ldesc[i] & lam)]

    def double_coset_reps_idx(self, lam, mu):
        lam, mu = frozenset(lam), frozenset(mu)
        return [i for i in range(self.size) if not (self.ldesc[i] & lam) and not (self.rdesc[i] & mu)]

    def double_coset(self, lam, d, mu):
        """All elements of W_lam d W_mu."""
        L = self.parabolic_elements(lam)
        Mu = self.parabolic_elements(mu)
        out = set()
        for a in L:
            ad = self.mul(a, d)
            for b in Mu:
                out.add(self.mul(ad, b))
        return sorted(out)

    def describe(self):
        return {
            "type": self.type_label,
            "rank": self.rank,
            "matrix": [list(r) for r in self.matrix],
            "weights": list(self.weights),
            "bn_pair": self.bn_pair,
            "order": self.size,
        }

    def __repr__(self):
        return f"CoxeterSystem({self.type_label}, weights={self.weights})"


# ---------------------------------------------------------------------------
# Functional API


def enumerate_elements(sys):
    return sys.elements()


def multiply(sys, x, y):
    return sys.elt(sys.mul(sys.idx(x), sys.idx(y)))


def bruhat_leq(sys, x, y):
    return sys.bruhat_leq_idx(sys.idx(x), sys.idx(y))


def longest_element(sys, lam):
    return sys.elt(sys.longest_idx(lam))


def double_coset_reps(sys, lam, mu):
    return [sys.elt(i) for i in sys.double_coset_reps_idx(lam, mu)]


def parse_generator_set(text, rank):
    """``{s1,s2}``, ``s1,s3``, ``{}`` or ``all`` -> frozenset of indices."""
    text = text.strip().strip("{}").strip()
    if text.lower() == "all":
        return frozenset(range(rank))
    if not text:
        return frozenset()
    out = set()
    for part in text.split(","):
        part = part.strip().lstrip("s")
        i = int(part) - 1
        if not 0 <= i < rank:
            raise ValueError(f"generator s{i + 1} out of range")
        out.add(i)
    return frozenset(out)


def parse_system_text(text, cap=DEFAULT_CAP):
    """Read ``rank``, then the matrix rows, then an optional weights line and
    an optional ``bn`` line. Lines may carry ``#`` comments."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise InvalidCoxeterMatrix("empty system file")
    first = lines[0].split()
    n = int(first[-1])
    if len(lines) < 1 + n:
        raise InvalidCoxeterMatrix("not enough matrix rows")
    M = [[int(x) for x in lines[1 + i].replace(",", " ").split()] for i in range(n)]
    weights = None
    bn = False
    label = "custom"
    for line in lines[1 + n:]:
        words = line.replace(",", " ").split()
        head = words[0].lower()
        if head == "weights":
            weights = [int(x) for x in words[1:]]
        elif head == "bn":
            bn = True
        elif head == "label":
            label = words[1]
        else:
            weights = [int(x) for x in words]
    return CoxeterSystem(M, weights, label, bn, cap)


def system_to_text(sys):
    lines = [f"rank {sys.rank}"]
    lines += [" ".join(str(x) for x in row) for row in sys.matrix]
    lines.append("weights " + " ".join(str(c) for c in sys.weights))
    if sys.bn_pair:
        lines.append("bn")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Independent oracles


def geometric_representation(sys):
    """Generator matrices of the root-lattice representation over Q
    (crystallographic Coxeter matrices only): s_i(a_j) = a_j - A_ij a_i with
    A_ij A_ji = 4 cos^2(pi/m)."""
    n = sys.rank
    prod_for_m = {2: 0, 3: 1, 4: 2, 6: 3}
    A = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = Fraction(2)
        for j in range(i + 1, n):
            m = sys.matrix[i][j]
            if m not in prod_for_m:
                raise ValueError("geometric oracle only for crystallographic matrices")
            prod = prod_for_m[m]
            # symmetric choice where possible, otherwise -1 and -prod
            A[i][j] = Fraction(-1 if prod else 0)
            A[j][i] = Fraction(-prod)
    gens = []
    for i in range(n):
        S = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
        # column j is the image of a_j
        for j in range(n):
            S[i][j] -= A[i][j]
        gens.append(tuple(tuple(row) for row in S))
    return gens


def _matmul_q(X, Y):
    n = len(X)
    return tuple(tuple(sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def group_order_by_matrices(sys, cap=DEFAULT_CAP):
    """|W| by closing the generator matrices under multiplication."""
    gens = geometric_representation(sys)
    n = sys.rank
    e = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _matmul_q(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > cap:
                        raise BoundExceeded("matrix closure exceeded cap")
        frontier = nxt
    return len(seen)


def bruhat_leq_subword(sys, x, y):
    """x <= y via the subword property on the canonical word of y."""
    reach = {0}
    for a in sys.words[y]:
        reach |= {sys.rmul[z][a] for z in reach}
    return x in reach


def reduce_word_by_exchange(sys, word):
    """Freely reduce a word: multiply letter by letter and read off the result
    (oracle for canonical-form soundness)."""
    return Elt(sys.words[sys._walk(0, word)])
