"""Exact arithmetic over Z[t, t^-1], cyclotomic polynomials, prime spots and
their residue fields, and localization data.

Integral data never leaves Z[t, t^-1]; division only happens after a
specialization to one of the residue fields below:

    Generic            Q(t)
    IntPrime(p)        F_p(t)
    IrrPoly(f)         Q[t]/(f)
    Maximal(p, fbar)   F_p[t]/(fbar), a finite field

Polynomial gcd and factorization are delegated to python-flint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

import flint


class InvalidSpot(ValueError):
    pass


class ZeroInput(ValueError):
    pass


# ---------------------------------------------------------------------------
# Laurent polynomials


class IntLaurent:
    """Element of Z[t, t^-1] stored as a sparse map exponent -> coefficient."""

    __slots__ = ("c",)

    def __init__(self, data=None):
        if data is None:
            self.c = {}
        elif isinstance(data, int):
            self.c = {0: data} if data else {}
        elif isinstance(data, dict):
            self.c = {e: v for e, v in data.items() if v}
        elif isinstance(data, IntLaurent):
            self.c = dict(data.c)
        else:
            raise TypeError(f"cannot build IntLaurent from {type(data).__name__}")

    @classmethod
    def _raw(cls, d):
        obj = cls.__new__(cls)
        obj.c = d
        return obj

    @classmethod
    def monomial(cls, e=1, coeff=1):
        return cls._raw({e: coeff} if coeff else {})

    @classmethod
    def from_coeffs(cls, coeffs, shift=0):
        """Build sum coeffs[i] t^(i+shift)."""
        return cls._raw({i + shift: int(v) for i, v in enumerate(coeffs) if v})

    @classmethod
    def parse(cls, text):
        return parse_laurent(text)

    # -- basic queries
    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def is_unit(self):
        """True for +-t^k, the units of Z[t, t^-1]."""
        return len(self.c) == 1 and abs(next(iter(self.c.values()))) == 1

    def coeff(self, e):
        return self.c.get(e, 0)

    def min_exp(self):
        return min(self.c) if self.c else None

    def max_exp(self):
        return max(self.c) if self.c else None

    def terms(self):
        return sorted(self.c.items())

    def is_constant(self):
        return not self.c or (len(self.c) == 1 and 0 in self.c)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.c.get(0, 0)

    # -- arithmetic
    @staticmethod
    def _coerce(x):
        if isinstance(x, IntLaurent):
            return x
        if isinstance(x, int):
            return IntLaurent(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.c:
            return self
        d = dict(self.c)
        for e, v in other.c.items():
            s = d.get(e, 0) + v
            if s:
                d[e] = s
            else:
                d.pop(e, None)
        return IntLaurent._raw(d)

    __radd__ = __add__

    def __neg__(self):
        return IntLaurent._raw({e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if not a or not b:
            return IntLaurent._raw({})
        if len(b) == 1:
            (eb, vb), = b.items()
            return IntLaurent._raw({e + eb: v * vb for e, v in a.items()})
        if len(a) == 1:
            (ea, va), = a.items()
            return IntLaurent._raw({e + ea: v * va for e, v in b.items()})
        d = {}
        for ea, va in a.items():
            for eb, vb in b.items():
                e = ea + eb
                d[e] = d.get(e, 0) + va * vb
        return IntLaurent._raw({e: v for e, v in d.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_unit():
                raise ZeroDivisionError("only units have negative powers in Z[t,t^-1]")
            (e, v), = self.c.items()
            # v is +1 or -1, so v^n stays an integer
            return IntLaurent._raw({e * n: 1 if n % 2 == 0 else v})
        result = IntLaurent(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntLaurent(other)
        if not isinstance(other, IntLaurent):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def shift(self, k):
        """Multiply by t^k."""
        return IntLaurent._raw({e + k: v for e, v in self.c.items()})

    def bar(self):
        """The involution t -> t^-1."""
        return IntLaurent._raw({-e: v for e, v in self.c.items()})

    def subs_neg(self):
        """The substitution t -> -t."""
        return IntLaurent._raw({e: (-v if e % 2 else v) for e, v in self.c.items()})

    def subs_square(self):
        """The substitution t -> t^2."""
        return IntLaurent._raw({2 * e: v for e, v in self.c.items()})

    def evaluate(self, x, one=None, xinv=None):
        """Evaluate at x in any ring supporting +, * and ** (xinv needed for
        negative exponents unless x supports negative powers)."""
        total = None
        for e, v in sorted(self.c.items()):
            if e >= 0:
                term = x ** e
            else:
                term = (xinv if xinv is not None else x ** -1) ** (-e)
            term = term * v
            total = term if total is None else total + term
        if total is None:
            return one if one is not None else 0
        return total

    # -- polynomial views
    def to_poly(self):
        """Return (shift, fmpz_poly P) with self = t^shift * P and P(0) != 0."""
        if not self.c:
            return 0, flint.fmpz_poly([])
        lo = min(self.c)
        hi = max(self.c)
        coeffs = [self.c.get(lo + i, 0) for i in range(hi - lo + 1)]
        return lo, flint.fmpz_poly(coeffs)

    @classmethod
    def from_fmpz_poly(cls, p, shift=0):
        return cls.from_coeffs([int(c) for c in p.coeffs()], shift)

    def divexact(self, other):
        """Exact division in Z[t, t^-1]; raises ValueError if it does not divide."""
        if not other.c:
            raise ZeroDivisionError("division by zero")
        s1, p1 = self.to_poly()
        s2, p2 = other.to_poly()
        q, r = divmod(p1, p2)
        if not r.is_zero() or q * p2 != p1:
            raise ValueError("not divisible")
        return IntLaurent.from_fmpz_poly(q, s1 - s2)

    def content(self):
        g = 0
        for v in self.c.values():
            g = _gcd(g, v)
        return g

    def __str__(self):
        if not self.c:
            return "0"
        return " + ".join(f"{v}*t^{e}" for e, v in sorted(self.c.items()))

    def __repr__(self):
        return f"IntLaurent({self})"

    def pretty(self, var="t"):
        return poly_string(dict(self.c), var)


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


T = IntLaurent.monomial(1)
ONE = IntLaurent(1)
ZERO = IntLaurent(0)


def poly_string(coeffs, var="t"):
    """Human-readable form of a sparse map exponent -> coefficient (descending)."""
    if not coeffs:
        return "0"
    parts = []
    for e in sorted(coeffs, reverse=True):
        v = coeffs[e]
        sign = "-" if v < 0 else "+"
        a = abs(v)
        if e == 0:
            body = str(a)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def parse_laurent(text):
    """Parse expressions such as ``t^2-t-1``, ``3*t^-1 + -2*t^0`` or ``(t+1)*(t-1)``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Laurent polynomial {text!r} at position {pos}")
        pos = m.end()
        kinds = ("int", "t", "^", "*", "+", "-", "(", ")")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                tokens.append((kind, val))
                break
    tokens.append(("end", ""))
    idx = [0]

    def peek():
        return tokens[idx[0]][0]

    def take(kind=None):
        tok = tokens[idx[0]]
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind} in {text!r}")
        idx[0] += 1
        return tok

    def signed_int():
        neg = False
        while peek() in ("-", "+"):
            if take()[0] == "-":
                neg = not neg
        v = int(take("int")[1])
        return -v if neg else v

    def atom():
        kind = peek()
        if kind == "int":
            val = IntLaurent(int(take()[1]))
        elif kind == "t":
            take()
            val = T
        elif kind == "(":
            take()
            val = expr()
            take(")")
        else:
            raise ValueError(f"unexpected token in {text!r}")
        if peek() == "^":
            take()
            val = val ** signed_int()
        return val

    def term():
        neg = False
        while peek() in ("-", "+"):
            if take()[0] == "-":
                neg = not neg
        val = atom()
        while peek() in ("*", "t", "(", "int"):
            if peek() == "*":
                take()
                if peek() in ("-", "+"):
                    inner = term()
                    val = val * inner
                    continue
            val = val * atom()
        return -val if neg else val

    def expr():
        val = term()
        while peek() in ("+", "-"):
            kind = take()[0]
            rhs = term()
            val = val + rhs if kind == "+" else val - rhs
        return val

    result = expr()
    if peek() != "end":
        raise ValueError(f"trailing input in {text!r}")
    return result


# ---------------------------------------------------------------------------
# Cyclotomic polynomials


@lru_cache(maxsize=None)
def cyclotomic(n):
    """The n-th cyclotomic polynomial in t, by dividing t^n - 1 by the lower ones."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = T ** n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = poly.divexact(cyclotomic(d))
    return poly


@dataclass(frozen=True)
class CyclotomicSquare:
    e: int
    sign: int
    factors: tuple
    target: IntLaurent

    def product(self):
        prod = IntLaurent(self.sign)
        for f in self.factors:
            prod = prod * f
        return prod

    def reassembles(self):
        return self.product() == self.target


def cyclotomic_square_identity(e):
    """Factor Phi_e(t^2) as Phi_2e(t) (e even) or sign * Phi_2e(t) Phi_2e(-t) (e odd)."""
    if e < 1:
        raise ValueError("e must be positive")
    target = cyclotomic(e).subs_square()
    phi = cyclotomic(2 * e)
    if e % 2 == 0:
        factors = (phi,)
    else:
        factors = (phi, phi.subs_neg())
    prod = IntLaurent(1)
    for f in factors:
        prod = prod * f
    if prod == target:
        sign = 1
    elif -prod == target:
        sign = -1
    else:
        raise ArithmeticError(f"cyclotomic square identity fails for e={e}")
    return CyclotomicSquare(e, sign, factors, target)


# ---------------------------------------------------------------------------
# Factorization in Z[t]


@dataclass(frozen=True)
class ZtFactorization:
    sign: int
    t_shift: int
    content_primes: tuple  # ((p, multiplicity), ...)
    factors: tuple  # ((IntLaurent, multiplicity), ...)

    def reassemble(self):
        out = IntLaurent.monomial(self.t_shift, self.sign)
        for p, m in self.content_primes:
            out = out * (p ** m)
        for f, m in self.factors:
            out = out * (f ** m)
        return out


def factor_in_Zt(a):
    """Factor a nonzero Laurent polynomial as +-t^k * content * irreducibles.

    The t-power is a unit of Z[t, t^-1]; the factors are primitive,
    irreducible over Q, with positive leading coefficient and nonzero
    constant term.
    """
    if a.is_zero():
        raise ZeroInput("cannot factor zero")
    shift, poly = a.to_poly()
    content, facs = poly.factor()
    content = int(content)
    sign = 1 if content > 0 else -1
    factors = []
    for f, m in facs:
        g = IntLaurent.from_fmpz_poly(f)
        if g.coeff(g.max_exp()) < 0:
            g = -g
            if m % 2:
                sign = -sign
        factors.append((g, int(m)))
    factors.sort(key=lambda fm: (fm[0].max_exp(), str(fm[0])))
    primes = tuple((int(p), int(m)) for p, m in flint.fmpz(abs(content)).factor()) if abs(content) > 1 else ()
    return ZtFactorization(sign, shift, primes, tuple(factors))


def is_irreducible_over_Q(f):
    shift, poly = f.to_poly()
    if shift != 0 or poly.degree() < 1:
        return False
    content, facs = poly.factor()
    return abs(int(content)) == 1 and len(facs) == 1 and facs[0][1] == 1


def is_prime(p):
    return p >= 2 and bool(flint.fmpz(p).is_prime())


# ---------------------------------------------------------------------------
# Residue fields


def _poly_str(coeffs, var="t"):
    return poly_string({i: int(c) if not isinstance(c, flint.fmpq) else c for i, c in enumerate(coeffs) if c != 0}, var)


def _fmpq_poly_str(p, var="t"):
    coeffs = p.coeffs()
    if not coeffs:
        return "0"
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = str(a)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out


class Field:
    """Common interface of the residue fields. Elements support + - * / and ==."""

    characteristic = 0
    is_finite = False
    label = "?"

    def is_zero(self, x):
        raise NotImplementedError

    def __call__(self, n):
        raise NotImplementedError

    def from_laurent(self, a):
        total = self.zero
        for e, v in a.c.items():
            if e >= 0:
                total = total + self.t ** e * self(v)
            else:
                total = total + self.tinv ** (-e) * self(v)
        return total

    def size(self, x):
        """Pivot-choice heuristic: smaller is cheaper."""
        return 0

    def fmt(self, x):
        return str(x)

    def eq(self, x, y):
        return self.is_zero(x - y)

    def __repr__(self):
        return f"<Field {self.label}>"


class RatFunc:
    """Reduced fraction n/d of univariate polynomials with d monic."""

    __slots__ = ("n", "d", "F")

    def __init__(self, n, d, F, reduce=True):
        if reduce:
            if d.is_zero():
                raise ZeroDivisionError("zero denominator")
            if n.is_zero():
                d = F._one_poly
            elif not d.is_one():
                g = n.gcd(d)
                if not g.is_one():
                    n = n // g
                    d = d // g
                lc = d.leading_coefficient()
                if lc != 1:
                    inv = 1 / lc
                    n = n * inv
                    d = d * inv
        self.n = n
        self.d = d
        self.F = F

    def _wrap(self, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, int):
            return self.F(x)
        raise TypeError(f"cannot combine RatFunc with {type(x).__name__}")

    def __add__(self, o):
        o = self._wrap(o)
        if self.d.is_one() and o.d.is_one():
            return RatFunc(self.n + o.n, self.d, self.F, reduce=False)
        if self.d == o.d:
            return RatFunc(self.n + o.n, self.d, self.F)
        return RatFunc(self.n * o.d + o.n * self.d, self.d * o.d, self.F)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._wrap(o)
        if self.d.is_one() and o.d.is_one():
            return RatFunc(self.n - o.n, self.d, self.F, reduce=False)
        if self.d == o.d:
            return RatFunc(self.n - o.n, self.d, self.F)
        return RatFunc(self.n * o.d - o.n * self.d, self.d * o.d, self.F)

    def __rsub__(self, o):
        return self._wrap(o) - self

    def __neg__(self):
        return RatFunc(-self.n, self.d, self.F, reduce=False)

    def __mul__(self, o):
        o = self._wrap(o)
        if self.d.is_one() and o.d.is_one():
            return RatFunc(self.n * o.n, self.d, self.F, reduce=False)
        return RatFunc(self.n * o.n, self.d * o.d, self.F)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._wrap(o)
        if o.n.is_zero():
            raise ZeroDivisionError("division by zero in rational function field")
        return RatFunc(self.n * o.d, self.d * o.n, self.F)

    def __rtruediv__(self, o):
        return self._wrap(o) / self

    def __pow__(self, k):
        if k < 0:
            return self.F.one / (self ** (-k))
        return RatFunc(self.n ** k, self.d ** k, self.F, reduce=False)

    def __eq__(self, o):
        if isinstance(o, int):
            o = self.F(o)
        if not isinstance(o, RatFunc):
            return NotImplemented
        return self.n == o.n and self.d == o.d

    def __hash__(self):
        return hash((str(self.n), str(self.d)))

    def is_zero(self):
        return self.n.is_zero()

    def __repr__(self):
        return self.F.fmt(self)


class RationalFunctionField(Field):
    """Q(t) (p = 0) or F_p(t)."""

    def __init__(self, p=0):
        self.characteristic = p
        if p == 0:
            self._poly = flint.fmpq_poly
            self.label = "Q(t)"
        else:
            self._poly = lambda coeffs: flint.nmod_poly(coeffs, p)
            self.label = f"F_{p}(t)"
        self._one_poly = self._poly([1])
        self.zero = RatFunc(self._poly([]), self._one_poly, self, reduce=False)
        self.one = RatFunc(self._poly([1]), self._one_poly, self, reduce=False)
        self.t = RatFunc(self._poly([0, 1]), self._one_poly, self, reduce=False)
        self.tinv = RatFunc(self._poly([1]), self._poly([0, 1]), self, reduce=False)

    def __call__(self, n):
        if isinstance(n, RatFunc):
            return n
        return RatFunc(self._poly([n]), self._one_poly, self, reduce=False)

    def from_laurent(self, a):
        if a.is_zero():
            return self.zero
        shift, poly = a.to_poly()
        coeffs = [int(c) for c in poly.coeffs()]
        if shift >= 0:
            return RatFunc(self._poly([0] * shift + coeffs), self._one_poly, self)
        return RatFunc(self._poly(coeffs), self._poly([0] * (-shift) + [1]), self)

    def from_polys(self, num_coeffs, den_coeffs=(1,)):
        return RatFunc(self._poly(list(num_coeffs)), self._poly(list(den_coeffs)), self)

    def is_zero(self, x):
        return x.n.is_zero()

    def size(self, x):
        return x.n.degree() + x.d.degree() + (0 if x.d.is_one() else 1)

    def fmt(self, x):
        if self.characteristic == 0:
            num = _fmpq_poly_str(x.n)
            den = _fmpq_poly_str(x.d)
        else:
            num = _poly_str([int(c) for c in x.n.coeffs()])
            den = _poly_str([int(c) for c in x.d.coeffs()])
        return num if den == "1" else f"({num})/({den})"

    def to_laurent(self, x):
        """Return the IntLaurent equal to x, or None if x is not in Z[t, t^-1].

        Only meaningful in characteristic 0.
        """
        if self.characteristic != 0:
            raise ValueError("integrality is only defined over Q(t)")
        d = x.d.coeffs()
        if any(c != 0 for c in d[:-1]):
            return None
        shift = -(len(d) - 1)
        coeffs = x.n.coeffs()
        out = {}
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            if c.q != 1:
                return None
            out[i + shift] = int(c.p)
        return IntLaurent(out)

    def random_element(self, rng):
        coeffs = [rng.randint(-3, 3) for _ in range(3)]
        return RatFunc(self._poly(coeffs), self._one_poly, self)

    def poly_coeffs(self, poly):
        return list(poly.coeffs())


class NFElem:
    __slots__ = ("v", "F")

    def __init__(self, v, F):
        self.v = v
        self.F = F

    def _wrap(self, x):
        if isinstance(x, NFElem):
            return x
        if isinstance(x, int):
            return self.F(x)
        raise TypeError(f"cannot combine NFElem with {type(x).__name__}")

    def __add__(self, o):
        return NFElem(self.v + self._wrap(o).v, self.F)

    __radd__ = __add__

    def __sub__(self, o):
        return NFElem(self.v - self._wrap(o).v, self.F)

    def __rsub__(self, o):
        return NFElem(self._wrap(o).v - self.v, self.F)

    def __neg__(self):
        return NFElem(-self.v, self.F)

    def __mul__(self, o):
        o = self._wrap(o)
        prod = self.v * o.v
        if prod.degree() >= self.F.degree:
            prod = prod % self.F.modulus
        return NFElem(prod, self.F)

    __rmul__ = __mul__

    def inverse(self):
        if self.v.is_zero():
            raise ZeroDivisionError("division by zero in number field")
        g, s, _ = self.v.xgcd(self.F.modulus)
        if g.degree() != 0:
            raise ArithmeticError("modulus not irreducible")
        return NFElem((s / g.coeffs()[0]) % self.F.modulus, self.F)

    def __truediv__(self, o):
        return self * self._wrap(o).inverse()

    def __rtruediv__(self, o):
        return self._wrap(o) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.F.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, o):
        if isinstance(o, int):
            o = self.F(o)
        if not isinstance(o, NFElem):
            return NotImplemented
        return self.v == o.v

    def __hash__(self):
        return hash(str(self.v))

    def is_zero(self):
        return self.v.is_zero()

    def __repr__(self):
        return self.F.fmt(self)


class NumberField(Field):
    """Q[t]/(f) for f irreducible over Q."""

    def __init__(self, f):
        shift, poly = f.to_poly()
        self.modulus = flint.fmpq_poly([int(c) for c in poly.coeffs()])
        self.degree = self.modulus.degree()
        self.label = f"Q[t]/({f.pretty()})"
        self.zero = NFElem(flint.fmpq_poly([]), self)
        self.one = NFElem(flint.fmpq_poly([1]), self)
        self.t = NFElem(flint.fmpq_poly([0, 1]) % self.modulus, self)
        self.tinv = self.t.inverse()

    def __call__(self, n):
        if isinstance(n, NFElem):
            return n
        return NFElem(flint.fmpq_poly([n]), self)

    def from_coeffs(self, coeffs):
        return NFElem(flint.fmpq_poly(list(coeffs)) % self.modulus, self)

    def is_zero(self, x):
        return x.v.is_zero()

    def size(self, x):
        return sum(1 for c in x.v.coeffs() if c != 0)

    def fmt(self, x):
        return _fmpq_poly_str(x.v)

    def random_element(self, rng):
        return self.from_coeffs([rng.randint(-3, 3) for _ in range(self.degree)])


class FiniteField(Field):
    """F_p[t]/(fbar) with t mapped to the class of t."""

    is_finite = True

    def __init__(self, p, fbar):
        self.characteristic = p
        self.p = p
        self.fbar = tuple(fbar)  # ascending, monic, reduced mod p
        self.degree = len(fbar) - 1
        self.order = p ** self.degree
        self.label = f"F_{p}[t]/({_poly_str(list(fbar))})"
        if self.degree == 1:
            self.prime = True
            root = (-fbar[0]) % p
            self.zero = flint.nmod(0, p)
            self.one = flint.nmod(1, p)
            self.t = flint.nmod(root, p)
            self.gen = self.one
        else:
            self.prime = False
            R = flint.fmpz_mod_poly_ctx(p)
            self.ctx = flint.fq_default_ctx(p, modulus=R(list(fbar)))
            self.zero = self.ctx.zero()
            self.one = self.ctx.one()
            self.t = self.ctx.gen()
            self.gen = self.t
        self.tinv = self.one / self.t

    def __call__(self, n):
        if self.prime:
            if isinstance(n, flint.nmod):
                return n
            return flint.nmod(int(n) % self.p, self.p)
        if isinstance(n, flint.fq_default):
            return n
        return self.ctx(int(n) % self.p)

    def from_coeffs(self, coeffs):
        """Element sum coeffs[i] g^i for the generator g of F_q over F_p."""
        total = self.zero
        power = self.one
        for c in coeffs:
            total = total + power * self(c)
            power = power * self.gen if not self.prime else power
        return total

    def to_coeffs(self, x):
        if self.prime:
            return [int(x)]
        out = [int(c) for c in x.to_list()]
        return out + [0] * (self.degree - len(out))

    def is_zero(self, x):
        if self.prime:
            return int(x) == 0
        return x.is_zero()

    def fmt(self, x):
        if self.prime:
            return str(int(x))
        return _poly_str(self.to_coeffs(x), "z")

    def elements(self):
        if self.prime:
            return [flint.nmod(i, self.p) for i in range(self.p)]
        out = []
        for idx in range(self.order):
            coeffs = []
            k = idx
            for _ in range(self.degree):
                coeffs.append(k % self.p)
                k //= self.p
            out.append(self.from_coeffs(coeffs))
        return out

    def random_element(self, rng):
        if self.prime:
            return flint.nmod(rng.randrange(self.p), self.p)
        return self.from_coeffs([rng.randrange(self.p) for _ in range(self.degree)])

    def index(self, x):
        """Integer code of x (for deterministic enumeration)."""
        code = 0
        for c in reversed(self.to_coeffs(x)):
            code = code * self.p + c
        return code


# ---------------------------------------------------------------------------
# Prime spots


_KIND_ORDER = {"generic": 0, "intprime": 1, "irrpoly": 2, "maximal": 3}


@dataclass(frozen=True)
class PrimeSpot:
    """A prime of Z[t, t^-1] of height <= 1, or a maximal ideal (p, fbar).

    kind is one of generic, intprime, irrpoly, maximal. f holds ascending
    integer coefficients (for maximal, reduced mod p and monic).
    """

    kind: str
    p: int = 0
    f: tuple = ()

    def __post_init__(self):
        if self.kind == "generic":
            if self.p or self.f:
                raise InvalidSpot("generic spot takes no data")
        elif self.kind == "intprime":
            if not is_prime(self.p):
                raise InvalidSpot(f"{self.p} is not prime")
        elif self.kind == "irrpoly":
            f = IntLaurent.from_coeffs(self.f)
            if len(self.f) < 2 or self.f[-1] == 0:
                raise InvalidSpot("IrrPoly needs a nonconstant polynomial")
            if self.f[0] == 0:
                raise InvalidSpot("t is a unit of Z[t,t^-1]; f = t (or f(0) = 0) is not a prime")
            if self.f[-1] < 0:
                raise InvalidSpot("normalize f to a positive leading coefficient")
            if not is_irreducible_over_Q(f):
                raise InvalidSpot(f"{f.pretty()} is not primitive irreducible over Q")
        elif self.kind == "maximal":
            if not is_prime(self.p):
                raise InvalidSpot(f"{self.p} is not prime")
            if len(self.f) < 2:
                raise InvalidSpot("maximal spot needs a nonconstant fbar")
            if self.f[-1] != 1 or any(not (0 <= c < self.p) for c in self.f):
                raise InvalidSpot("fbar must be reduced mod p and monic")
            if self.f[0] == 0:
                raise InvalidSpot("fbar = t (or divisible by t) is not allowed: t is a unit")
            nm = flint.nmod_poly(list(self.f), self.p)
            _, facs = nm.factor()
            if len(facs) != 1 or facs[0][1] != 1:
                raise InvalidSpot(f"{_poly_str(list(self.f))} is not irreducible mod {self.p}")
        else:
            raise InvalidSpot(f"unknown spot kind {self.kind!r}")

    # -- constructors
    @classmethod
    def generic(cls):
        return cls("generic")

    @classmethod
    def int_prime(cls, p):
        return cls("intprime", p)

    @classmethod
    def irr_poly(cls, f):
        if isinstance(f, str):
            f = parse_laurent(f)
        shift, poly = f.to_poly()
        if shift < 0:
            raise InvalidSpot("IrrPoly needs an honest polynomial")
        coeffs = [0] * shift + [int(c) for c in poly.coeffs()]
        if shift > 0:
            raise InvalidSpot("t is a unit of Z[t,t^-1]; f divisible by t is not a prime")
        if coeffs and coeffs[-1] < 0:
            coeffs = [-c for c in coeffs]
        return cls("irrpoly", 0, tuple(coeffs))

    @classmethod
    def cyclotomic(cls, n):
        return cls.irr_poly(cyclotomic(n))

    @classmethod
    def maximal(cls, p, fbar):
        if isinstance(fbar, str):
            fbar = parse_laurent(fbar)
        if isinstance(fbar, IntLaurent):
            if fbar.is_zero() or fbar.min_exp() < 0:
                raise InvalidSpot("fbar must be a polynomial")
            coeffs = [fbar.coeff(i) for i in range(fbar.max_exp() + 1)]
        else:
            coeffs = list(fbar)
        if not is_prime(p):
            raise InvalidSpot(f"{p} is not prime")
        coeffs = [c % p for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise InvalidSpot("fbar must be nonconstant mod p")
        inv = pow(coeffs[-1], -1, p)
        coeffs = [(c * inv) % p for c in coeffs]
        return cls("maximal", p, tuple(coeffs))

    # -- views
    def poly(self):
        return IntLaurent.from_coeffs(self.f)

    def label(self):
        if self.kind == "generic":
            return "generic"
        if self.kind == "intprime":
            return f"p={self.p}"
        if self.kind == "irrpoly":
            f = self.poly()
            deg = f.max_exp()
            for n in range(1, 2 * deg * deg + 3):
                if cyclotomic(n) == f:
                    return f"phi={n}"
            return f"f={f.pretty()}"
        return f"max={self.p},{_poly_str(list(self.f))}"

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.p, len(self.f), self.f)

    def is_maximal(self):
        return self.kind == "maximal"

    def field(self):
        return residue_field(self)

    def contains_integer(self, n):
        """True iff the integer n lies in this prime."""
        if self.kind in ("intprime", "maximal"):
            return n % self.p == 0
        return n == 0

    def __str__(self):
        return self.label()


@lru_cache(maxsize=None)
def residue_field(spot):
    if spot.kind == "generic":
        return RationalFunctionField(0)
    if spot.kind == "intprime":
        return RationalFunctionField(spot.p)
    if spot.kind == "irrpoly":
        return NumberField(spot.poly())
    return FiniteField(spot.p, spot.f)


def specialize(a, spot):
    """Image of a Laurent polynomial in the residue field k(spot)."""
    if isinstance(a, int):
        a = IntLaurent(a)
    return residue_field(spot).from_laurent(a)


def parse_spot(text):
    text = text.strip()
    low = text.lower()
    if low == "generic":
        return PrimeSpot.generic()
    if "=" not in text:
        raise InvalidSpot(f"cannot parse spot {text!r}")
    key, val = text.split("=", 1)
    key = key.strip().lower()
    val = val.strip()
    try:
        if key == "p":
            return PrimeSpot.int_prime(int(val))
        if key == "phi":
            return PrimeSpot.cyclotomic(int(val))
        if key == "f":
            return PrimeSpot.irr_poly(parse_laurent(val))
        if key == "max":
            p_text, f_text = val.split(",", 1)
            return PrimeSpot.maximal(int(p_text), parse_laurent(f_text))
    except InvalidSpot:
        raise
    except ValueError as exc:
        raise InvalidSpot(f"cannot parse spot {text!r}: {exc}") from exc
    raise InvalidSpot(f"unknown spot key {key!r}")


def parse_spot_list(text):
    """Split a comma-separated spot list; ``max=p,f`` keeps its inner comma."""
    if not text:
        return []
    pieces = [p.strip() for p in text.split(",") if p.strip()]
    merged = []
    for piece in pieces:
        if merged and "=" not in piece and piece.lower() != "generic" and merged[-1].lower().startswith("max=") and merged[-1].count(",") == 0:
            merged[-1] = merged[-1] + "," + piece
        else:
            merged.append(piece)
    return [parse_spot(m) for m in merged]


# ---------------------------------------------------------------------------
# Bad primes and localizations

# Bad primes of the finite Weyl groups. This is external data (standard
# tables), not something derived here.
BAD_PRIMES = {
    "A": (),
    "B": (2,),
    "C": (2,),
    "D": (2,),
    "G2": (2, 3),
    "F4": (2, 3),
    "E6": (2, 3),
    "E7": (2, 3),
    "E8": (2, 3, 5),
}


def bad_primes(type_label):
    label = type_label.strip().upper()
    if label in BAD_PRIMES:
        return BAD_PRIMES[label]
    family = label[:1]
    if family in ("A", "B", "C", "D") and label[1:].isdigit():
        return BAD_PRIMES[family]
    raise KeyError(f"no bad-prime data for type {type_label!r} (not a crystallographic type)")


@dataclass(frozen=True)
class LocalizationSpec:
    """The multiplicative set generated by some rational primes and polynomials."""

    primes: tuple = ()
    polys: tuple = ()
    note: str = field(default="", compare=False)

    def __post_init__(self):
        for p in self.primes:
            if not is_prime(p):
                raise ValueError(f"inverted integer {p} must be a prime")
        for f in self.polys:
            if f.is_zero() or f.is_unit():
                raise ValueError("inverted polynomials must be nonzero non-units")

    def generators(self):
        return [IntLaurent(p) for p in self.primes] + list(self.polys)

    def excludes(self, spot):
        """True iff some inverted element lies in the prime, i.e. the spot is
        not a prime of the localized ring."""
        return any(residue_field(spot).is_zero(specialize(g, spot)) for g in self.generators())

    def describe(self):
        items = [str(p) for p in self.primes] + [f.pretty() for f in self.polys]
        return "{" + ", ".join(items) + "}" if items else "{}"

    def is_trivial(self):
        return not self.primes and not self.polys


def parse_localization(text, type_label=None):
    """Parse ``none``, ``bad``, ``phi4``, ``bad+phi4``, ``2+3``, ``f=t^2+1``."""
    if text is None:
        return LocalizationSpec()
    text = text.strip()
    if text.lower() in ("", "none"):
        return LocalizationSpec()
    primes = set()
    polys = []
    for item in re.split(r"[+;]", text):
        item = item.strip()
        low = item.lower()
        if not item:
            continue
        if low == "bad":
            if type_label is None:
                raise ValueError("'bad' needs a Coxeter type")
            primes.update(bad_primes(type_label))
        elif low.startswith("phi"):
            n = int(low[3:].lstrip("="))
            polys.append(cyclotomic(n))
        elif low.startswith("f="):
            polys.append(parse_laurent(item[2:]))
        else:
            for part in item.split(","):
                primes.add(int(part))
    seen = []
    for f in polys:
        if f not in seen:
            seen.append(f)
    return LocalizationSpec(tuple(sorted(primes)), tuple(seen), note=text)
