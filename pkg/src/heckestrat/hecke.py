"""The generic Hecke algebra in the T-basis, the bar involution, and the
Kazhdan-Lusztig basis with weights.

Conventions. T_s satisfies (T_s - t^{2c_s})(T_s + 1) = 0. With the weighted
length L(w) = sum of c_s along a reduced word, put Ht_w = t^{-L(w)} T_w. The
KL element C'_w is the unique bar-invariant element
    C'_w = sum_y p_{y,w} Ht_y,   p_{w,w} = 1,   p_{y,w} in t^{-1} Z[t^{-1}] (y != w).
In particular C'_s = t^{-c_s}(T_s + 1). With all c_s = 1 and q = t^2 the
classical polynomials are P_{y,w}(q) = t^{l(w)-l(y)} p_{y,w}.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .coxeter import CoxeterSystem, parse_word, word_label
from .ringtower import IntLaurent, ONE, T, ZERO, parse_laurent

CACHE_VERSION = 1
CACHE_ENV = "HECKESTRAT_CACHE"


class FormatVersionMismatch(ValueError):
    pass


class LaurentRing:
    """Z[t, t^-1] presented with the same interface as the residue fields."""

    characteristic = 0
    is_finite = False
    label = "Z[t,t^-1]"

    def __init__(self):
        self.zero = ZERO
        self.one = ONE
        self.t = T
        self.tinv = T.bar()

    def __call__(self, n):
        return IntLaurent(n) if isinstance(n, int) else n

    def is_zero(self, x):
        return x.is_zero()

    def from_laurent(self, a):
        return a

    def fmt(self, x):
        return str(x)

    def size(self, x):
        return len(x.c)


LAURENT = LaurentRing()


def _add_into(d, key, val, R):
    cur = d.get(key)
    if cur is None:
        if not R.is_zero(val):
            d[key] = val
    else:
        s = cur + val
        if R.is_zero(s):
            del d[key]
        else:
            d[key] = s


class HeckeAlgebra:
    """H over a coefficient ring R (Z[t,t^-1] by default, or a residue field),
    elements as dicts element-index -> coefficient."""

    def __init__(self, W: CoxeterSystem, R=LAURENT):
        self.W = W
        self.R = R
        self.q = [R.from_laurent(T ** (2 * c)) for c in W.weights]
        self.qm1 = [qs - R.one for qs in self.q]
        self._bar_basis = None

    # -- constructors
    def basis(self, w):
        return {self.W.idx(w): self.R.one}

    def from_laurent_dict(self, d):
        R = self.R
        out = {}
        for w, a in d.items():
            v = R.from_laurent(a)
            if not R.is_zero(v):
                out[w] = v
        return out

    def scalar(self, c):
        return {0: c} if not self.R.is_zero(c) else {}

    # -- linear structure
    def add(self, a, b):
        out = dict(a)
        for w, v in b.items():
            _add_into(out, w, v, self.R)
        return out

    def sub(self, a, b):
        out = dict(a)
        for w, v in b.items():
            _add_into(out, w, -v, self.R)
        return out

    def scale(self, c, a):
        R = self.R
        if R.is_zero(c):
            return {}
        out = {}
        for w, v in a.items():
            x = c * v
            if not R.is_zero(x):
                out[w] = x
        return out

    # -- multiplication
    def left_Ts(self, s, h):
        """T_s * h."""
        W, R = self.W, self.R
        q, qm1 = self.q[s], self.qm1[s]
        out = {}
        for w, a in h.items():
            sw = W.lmul[w][s]
            if W.length[sw] > W.length[w]:
                _add_into(out, sw, a, R)
            else:
                _add_into(out, sw, q * a, R)
                _add_into(out, w, qm1 * a, R)
        return out

    def right_Ts(self, h, s):
        """h * T_s."""
        W, R = self.W, self.R
        q, qm1 = self.q[s], self.qm1[s]
        out = {}
        for w, a in h.items():
            ws = W.rmul[w][s]
            if W.length[ws] > W.length[w]:
                _add_into(out, ws, a, R)
            else:
                _add_into(out, ws, q * a, R)
                _add_into(out, w, qm1 * a, R)
        return out

    def right_Tw(self, h, w):
        for s in self.W.words[w]:
            h = self.right_Ts(h, s)
        return h

    def left_Tw(self, w, h):
        for s in reversed(self.W.words[w]):
            h = self.left_Ts(s, h)
        return h

    def mult(self, a, b):
        """a * b, using a*T_w = (a*T_{ws})*T_s along canonical words."""
        W = self.W
        if not a or not b:
            return {}
        need = set()
        for w in b:
            x = w
            while x not in need and x != 0:
                need.add(x)
                x = W.rmul[x][W.words[x][-1]]
        prods = {0: a}
        for w in sorted(need):
            last = W.words[w][-1]
            prefix = W.rmul[w][last]
            prods[w] = self.right_Ts(prods[prefix], last)
        out = {}
        for w, c in b.items():
            for x, v in prods[w].items():
                _add_into(out, x, c * v, self.R)
        return out

    def mult_table(self):
        """table[x][y] = T_x T_y."""
        W = self.W
        table = []
        for x in range(W.size):
            row = [None] * W.size
            row[0] = {x: self.R.one}
            for y in range(1, W.size):
                last = W.words[y][-1]
                row[y] = self.right_Ts(row[W.rmul[y][last]], last)
            table.append(row)
        return table

    def quadratic_defect(self, s):
        """(T_s - q_s)(T_s + 1), which must vanish."""
        R = self.R
        Ts = {self.W.rmul[0][s]: R.one}
        left = self.sub(Ts, self.scalar(self.q[s]))
        right = self.add(Ts, self.scalar(R.one))
        return self.mult(left, right)

    # -- bar involution (Laurent coefficients only)
    def bar_basis(self, w):
        """bar(T_w) = T_{w^-1}^{-1} = prod over the word of T_s^{-1}."""
        if self._bar_basis is None:
            if self.R is not LAURENT:
                raise TypeError("bar involution needs Laurent coefficients")
            W = self.W
            table = [None] * W.size
            table[0] = {0: ONE}
            for x in range(1, W.size):
                last = W.words[x][-1]
                c = W.weights[last]
                prev = table[W.rmul[x][last]]
                # T_s^{-1} = t^{-2c} T_s + (t^{-2c} - 1)
                qinv = T ** (-2 * c)
                part = self.scale(qinv, self.right_Ts(prev, last))
                table[x] = self.add(part, self.scale(qinv - 1, prev))
            self._bar_basis = table
        return self._bar_basis[w]

    def bar(self, h):
        out = {}
        for w, a in h.items():
            ab = a.bar()
            for x, v in self.bar_basis(w).items():
                _add_into(out, x, ab * v, self.R)
        return out

    def fmt(self, h):
        if not h:
            return "0"
        return " + ".join(f"({self.R.fmt(h[w])})*T[{self.W.label(w)}]" for w in sorted(h))


def mult_T(H, a, b):
    return H.mult(a, b)


def bar(H, a):
    return H.bar(a)


# ---------------------------------------------------------------------------
# Kazhdan-Lusztig basis


@dataclass
class KLData:
    W: CoxeterSystem
    p: list  # p[w] = {y: p_{y,w}} in the Ht-basis
    _left: dict = field(default_factory=dict, repr=False)

    @property
    def conjecture_dependent(self):
        """Unequal-parameter cell theory relies on Lusztig's conjectures."""
        return not self.W.equal_parameters()

    def cprime_T(self, w):
        """C'_w in the T-basis."""
        W = self.W
        return {y: a.shift(-W.wlength[y]) for y, a in self.p[w].items()}

    def cprime_Ht(self, w):
        return dict(self.p[w])

    def mu(self, y, w):
        """Coefficient of t^-1 in p_{y,w}."""
        return self.p[w].get(y, ZERO).coeff(-1)

    def classical_P(self, y, w):
        """P_{y,w} as a polynomial in q = t^{2c} (equal parameters only),
        returned as an IntLaurent in the variable q."""
        W = self.W
        if not W.equal_parameters():
            raise ValueError("classical KL polynomials need equal parameters")
        c = W.weights[0]
        a = self.p[w].get(y, ZERO).shift(c * (W.length[w] - W.length[y]))
        out = {}
        for e, v in a.c.items():
            if e % (2 * c):
                raise ArithmeticError("unexpected odd exponent")
            out[e // (2 * c)] = v
        return IntLaurent(out)

    def left_mult(self, s, y):
        """C'_s C'_y expanded in the C'-basis, as {z: coefficient}."""
        key = (s, y)
        if key not in self._left:
            W = self.W
            sy = W.lmul[y][s]
            c = W.weights[s]
            if W.length[sy] < W.length[y]:
                self._left[key] = {y: T ** c + T ** (-c)}
            else:
                prod = _cs_times_ht(W, s, self.p[y])
                m = _straighten(W, prod, sy, self.p)
                m[sy] = ONE
                self._left[key] = m
        return self._left[key]

    def right_mult(self, y, s):
        """C'_y C'_s in the C'-basis, via the anti-involution Ht_w -> Ht_{w^-1}."""
        W = self.W
        return {W.inv[z]: a for z, a in self.left_mult(s, W.inv[y]).items()}

    def to_cprime(self, h_ht):
        """Coordinates in the C'-basis of an element given in the Ht-basis."""
        W = self.W
        h = dict(h_ht)
        out = {}
        while h:
            y = max(h, key=lambda x: (W.length[x], x))
            a = h[y]
            out[y] = a
            for z, v in self.p[y].items():
                _add_into(h, z, -(a * v), LAURENT)
        return out


def _cs_times_ht(W, s, h):
    """C'_s * sum h_x Ht_x in the Ht-basis."""
    c = W.weights[s]
    vc, vmc = T ** c, T ** (-c)
    out = {}
    for x, a in h.items():
        sx = W.lmul[x][s]
        _add_into(out, sx, a, LAURENT)
        if W.length[sx] > W.length[x]:
            _add_into(out, x, vmc * a, LAURENT)
        else:
            _add_into(out, x, vc * a, LAURENT)
    return out


def _bar_invariant_lift(a):
    """The bar-invariant m with a - m in t^-1 Z[t^-1]."""
    d = {}
    for e, v in a.c.items():
        if e == 0:
            d[0] = d.get(0, 0) + v
        elif e > 0:
            d[e] = d.get(e, 0) + v
            d[-e] = d.get(-e, 0) + v
    return IntLaurent(d)


def _straighten(W, prod, top, p):
    """Subtract bar-invariant multiples m_y C'_y (y below top) from prod until
    every non-top coefficient lies in t^-1 Z[t^-1]; mutate prod into C'_top
    and return {y: m_y}."""
    coeffs = {}
    done = set()
    while True:
        cand = [y for y in prod if y != top and y not in done and prod[y].max_exp() >= 0]
        if not cand:
            break
        y = max(cand, key=lambda x: (W.length[x], x))
        done.add(y)
        m = _bar_invariant_lift(prod[y])
        if m.is_zero():
            continue
        coeffs[y] = m
        for z, v in p[y].items():
            _add_into(prod, z, -(m * v), LAURENT)
    return coeffs


def kl_basis(W: CoxeterSystem, cache_dir=None):
    """All C'_w, built by increasing length from C'_s C'_{sw} straightening."""
    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_ENV)
    if cache_dir:
        path = os.path.join(cache_dir, cache_filename(W))
        if os.path.exists(path):
            try:
                return read_kl_cache(W, path)
            except FormatVersionMismatch:
                pass
    p = [None] * W.size
    p[0] = {0: ONE}
    for w in range(1, W.size):
        s = W.words[w][0]
        x = W.lmul[w][s]
        prod = _cs_times_ht(W, s, p[x])
        _straighten(W, prod, w, p)
        p[w] = prod
    data = KLData(W, p)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        write_kl_cache(data, os.path.join(cache_dir, cache_filename(W)))
    return data


# ---------------------------------------------------------------------------
# Cache files


def cache_filename(W):
    m = "-".join("".join(str(x) for x in row) for row in W.matrix)
    wts = "-".join(str(c) for c in W.weights)
    return f"kl_v{CACHE_VERSION}_{W.type_label}_{m}_w{wts}.txt"


def serialize_kl(data):
    W = data.W
    lines = [f"heckestrat-kl-cache v{CACHE_VERSION}"]
    lines.append(f"type {W.type_label}")
    lines.append("matrix " + ";".join(" ".join(str(x) for x in row) for row in W.matrix))
    lines.append("weights " + " ".join(str(c) for c in W.weights))
    lines.append(f"count {sum(1 for row in data.p if row is not None)}")
    for w in range(W.size):
        row = data.p[w]
        if row is None:
            continue
        entries = " ; ".join(f"{word_label(W.words[y])} : {row[y]}" for y in sorted(row))
        lines.append(f"{word_label(W.words[w])} : [{entries}]")
    return "\n".join(lines) + "\n"


def parse_kl(W, text):
    lines = text.splitlines()
    if not lines or not lines[0].startswith("heckestrat-kl-cache v"):
        raise FormatVersionMismatch("not a KL cache file")
    version = int(lines[0].rsplit("v", 1)[1])
    if version != CACHE_VERSION:
        raise FormatVersionMismatch(f"cache version {version}, expected {CACHE_VERSION}")
    header = {}
    body = []
    for line in lines[1:]:
        if not line.strip():
            continue
        key = line.split(" ", 1)[0]
        if key in ("type", "matrix", "weights", "count") and " : " not in line:
            header[key] = line.split(" ", 1)[1] if " " in line else ""
        else:
            body.append(line)
    matrix = tuple(tuple(int(x) for x in row.split()) for row in header.get("matrix", "").split(";") if row.strip())
    weights = tuple(int(x) for x in header.get("weights", "").split())
    if matrix != W.matrix or weights != W.weights:
        raise FormatVersionMismatch("cache belongs to a different Coxeter system")
    p = [None] * W.size
    for line in body:
        head, rest = line.split(" : ", 1)
        w = W.idx(parse_word(head))
        rest = rest.strip()
        if not (rest.startswith("[") and rest.endswith("]")):
            raise FormatVersionMismatch("malformed cache row")
        inner = rest[1:-1].strip()
        row = {}
        if inner:
            for entry in inner.split(" ; "):
                ylab, poly = entry.split(" : ", 1)
                row[W.idx(parse_word(ylab))] = parse_laurent(poly)
        p[w] = row
    return KLData(W, p)


def write_kl_cache(data, path):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(serialize_kl(data))
    os.replace(tmp, path)


def read_kl_cache(W, path):
    with open(path) as fh:
        return parse_kl(W, fh.read())


def kl_cache_roundtrip(data, path):
    write_kl_cache(data, path)
    return read_kl_cache(data.W, path)
