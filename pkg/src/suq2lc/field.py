"""Exact arithmetic in F = Q(q,t,k)[s]/(s^2 - q^2 - 1).

Elements are a + b*s with a, b rational functions in q, t, k over Q and
s = sqrt(1 + q^2).  Everything is kept in a reduced canonical form so that
equality is literal comparison and serialization is deterministic.
"""

from __future__ import annotations

import re
from fractions import Fraction

from sympy import ZZ
from sympy.polys.rings import ring

# The base polynomial ring Z[q,t,k].  PolyElement is sparse (dict of
# exponent tuples -> integer coefficients) which is exactly the BasePoly
# representation we need; gcd / exact division come for free.
R, Q, T, K = ring("q,t,k", ZZ)

BasePoly = type(R.one)

_VARS = ("q", "t", "k")


class DivisionByZero(ZeroDivisionError):
    pass


class EvalDenominatorZero(ZeroDivisionError):
    pass


class NonPythagoreanPoint(ValueError):
    pass


class ParseError(ValueError):
    pass


def _poly_lc_positive(p):
    """True if the leading coefficient (in the ring's term order) is > 0."""
    return p.LC > 0


def _content(p):
    """Integer content of a polynomial (0 for the zero polynomial)."""
    c = 0
    for coeff in p.values():
        c = _gcd_int(c, int(coeff))
    return c


def _gcd_int(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


class BaseRat:
    """Reduced fraction num/den of polynomials in Z[q,t,k].

    Invariants: den != 0, gcd(num, den) = 1, leading coefficient of den
    positive.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if den is None:
            den = R.one
        if not den:
            raise DivisionByZero("zero denominator")
        if not _reduced:
            if not num:
                den = R.one
            else:
                g = num.gcd(den)
                num = num.quo(g)
                den = den.quo(g)
            if not _poly_lc_positive(den):
                num, den = -num, -den
        self.num = num
        self.den = den

    # -- constructors ----------------------------------------------------
    @staticmethod
    def from_int(n):
        return BaseRat(R.ground_new(n), R.one, _reduced=True)

    @staticmethod
    def from_fraction(fr):
        fr = Fraction(fr)
        return BaseRat(R.ground_new(fr.numerator), R.ground_new(fr.denominator))

    # -- predicates ------------------------------------------------------
    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, BaseRat):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        return BaseRat(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __sub__(self, other):
        return BaseRat(self.num * other.den - other.num * self.den,
                       self.den * other.den)

    def __neg__(self):
        return BaseRat(-self.num, self.den, _reduced=True)

    def __mul__(self, other):
        return BaseRat(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if not other.num:
            raise DivisionByZero("division by zero BaseRat")
        return BaseRat(self.num * other.den, self.den * other.num)

    def eval(self, q0, t0, k0):
        num = _poly_eval(self.num, q0, t0, k0)
        den = _poly_eval(self.den, q0, t0, k0)
        if den == 0:
            raise EvalDenominatorZero("denominator vanishes at the point")
        return num / den

    def __repr__(self):
        return f"BaseRat({poly_str(self.num)!r}, {poly_str(self.den)!r})"


_ZERO_RAT = BaseRat.from_int(0)
_ONE_RAT = BaseRat.from_int(1)


def _poly_eval(p, q0, t0, k0):
    total = Fraction(0)
    for (eq, et, ek), coeff in p.items():
        total += int(coeff) * q0 ** eq * t0 ** et * k0 ** ek
    return total


class FieldElem:
    """a + b*s with a, b in Q(q,t,k) and s^2 = 1 + q^2."""

    __slots__ = ("a", "b")

    def __init__(self, a=None, b=None):
        self.a = a if a is not None else _ZERO_RAT
        self.b = b if b is not None else _ZERO_RAT

    # -- constructors ----------------------------------------------------
    @staticmethod
    def from_int(n):
        return FieldElem(BaseRat.from_int(n))

    @staticmethod
    def from_fraction(fr):
        return FieldElem(BaseRat.from_fraction(fr))

    @staticmethod
    def from_rat(a):
        return FieldElem(a)

    # -- predicates ------------------------------------------------------
    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        return FieldElem(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return FieldElem(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return FieldElem(-self.a, -self.b)

    def __mul__(self, other):
        # (a1 + b1 s)(a2 + b2 s) = a1 a2 + b1 b2 (1+q^2) + (a1 b2 + a2 b1) s
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return FieldElem(a1 * a2 + b1 * b2 * _R_RAT, a1 * b2 + a2 * b1)

    def inv(self):
        # 1/(a + b s) = (a - b s) / (a^2 - b^2 (1+q^2))
        if self.is_zero():
            raise DivisionByZero("inverse of zero field element")
        norm = self.a * self.a - self.b * self.b * _R_RAT
        if norm.is_zero():
            # cannot happen: s^2 - q^2 - 1 is irreducible over Q(q,t,k)
            raise DivisionByZero("vanishing norm")
        return FieldElem(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        return self * other.inv()

    def eval(self, q0, t0, k0):
        """Exact rational value at a Pythagorean point q0 (s -> +sqrt(1+q0^2))."""
        s0 = pythagorean_s(q0)
        return self.a.eval(q0, t0, k0) + self.b.eval(q0, t0, k0) * s0

    def __repr__(self):
        return f"FieldElem({elem_str(self)!r})"


def arith(x, y, kind):
    """Spec-level arithmetic dispatcher."""
    if kind == "add":
        return x + y
    if kind == "sub":
        return x - y
    if kind == "mul":
        return x * y
    raise ValueError(f"unknown arithmetic kind: {kind}")


def invert(x):
    return x.inv()


def evaluate(x, q0, t0, k0):
    return x.eval(Fraction(q0), Fraction(t0), Fraction(k0))


def evaluate_at(x, q0, t0, k0, s0):
    """Evaluate with an explicit branch s -> s0 (s0^2 must equal 1 + q0^2)."""
    q0, t0, k0, s0 = Fraction(q0), Fraction(t0), Fraction(k0), Fraction(s0)
    if s0 * s0 != 1 + q0 * q0:
        raise NonPythagoreanPoint(f"s0^2 != 1 + q0^2 at q0={q0}, s0={s0}")
    return x.a.eval(q0, t0, k0) + x.b.eval(q0, t0, k0) * s0


def pythagorean_s(q0):
    """Rational sqrt(1 + q0^2), or raise NonPythagoreanPoint."""
    q0 = Fraction(q0)
    val = 1 + q0 * q0
    num, den = _isqrt(val.numerator), _isqrt(val.denominator)
    if num is None or den is None:
        raise NonPythagoreanPoint(f"1 + ({q0})^2 = {val} is not a rational square")
    return Fraction(num, den)


def pythagorean_q(u):
    """The Pythagorean rational q = (u^2 - 1) / (2u)."""
    u = Fraction(u)
    if u == 0:
        raise NonPythagoreanPoint("u must be nonzero")
    return (u * u - 1) / (2 * u)


def _isqrt(n):
    if n < 0:
        return None
    r = int(n)
    x = int(r ** 0.5)
    while x * x > r:
        x -= 1
    while (x + 1) * (x + 1) <= r:
        x += 1
    return x if x * x == r else None


# -- canonical constants ----------------------------------------------------
_R_RAT = BaseRat(Q * Q + 1)          # r = 1 + q^2 as a BaseRat

ZERO = FieldElem()
ONE = FieldElem.from_int(1)
QE = FieldElem(BaseRat(Q))            # q
TE = FieldElem(BaseRat(T))            # t
KE = FieldElem(BaseRat(K))            # k
RE = FieldElem(_R_RAT)                # r = 1 + q^2
SE = FieldElem(_ZERO_RAT, _ONE_RAT)   # s = sqrt(r)


def from_int(n):
    return FieldElem.from_int(n)


# -- canonical text form -----------------------------------------------------
#
# Grammar:  elem   := poly | poly " / " poly
#           poly   := term (" + " term | " - " term)*
#           term   := [-]coeff? factor ("*" factor)*     e.g. "-2*q^3*t*k^2*s"
#           factor := ("q" | "t" | "k" | "s") ("^" int)?
# The numerator may contain at most one power of s (degree <= 1); the
# denominator is s-free.  Terms are sorted by (s-degree, ring term order).


def poly_str(p):
    """Canonical string of an s-free polynomial."""
    return _terms_str(_sorted_terms(p, 0))


def _sorted_terms(p, sdeg):
    out = []
    for mono in sorted(p.keys(), reverse=True):
        out.append((mono, sdeg, int(p[mono])))
    return out


def _terms_str(terms):
    if not terms:
        return "0"
    pieces = []
    for idx, (mono, sdeg, coeff) in enumerate(terms):
        factors = []
        for name, e in zip(_VARS, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if sdeg:
            factors.append("s")
        mag = abs(coeff)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        if idx == 0:
            pieces.append(body if coeff > 0 else "-" + body)
        else:
            pieces.append((" + " if coeff > 0 else " - ") + body)
    return "".join(pieces)


def elem_str(x):
    """Canonical string of a FieldElem as a single reduced fraction."""
    # combine a + b s over a common denominator, then reduce
    na, da, nb, db = x.a.num, x.a.den, x.b.num, x.b.den
    den = da * db
    pa = na * db
    pb = nb * da
    if not pa and not pb:
        return "0"
    g = pa.gcd(pb) if (pa and pb) else (pa or pb)
    g = g.gcd(den)
    pa, pb, den = pa.quo(g), pb.quo(g), den.quo(g)
    if not _poly_lc_positive(den):
        pa, pb, den = -pa, -pb, -den
    terms = _sorted_terms(pa, 0) + _sorted_terms(pb, 1)
    num_s = _terms_str(terms)
    if den == R.one:
        return num_s
    return f"{num_s} / {poly_str(den)}"


_TERM_RE = re.compile(r"^(\d+)?((?:\*?[qtks](?:\^\d+)?)*)$")
_FACTOR_RE = re.compile(r"([qtks])(?:\^(\d+))?")


def _parse_poly_pair(text):
    """Parse a sum of terms into (s-free part, s part) as ring polynomials."""
    text = text.strip()
    if text == "0":
        return R.zero, R.zero
    # normalize "a - b" / "a + b" into signed tokens
    tokens = re.split(r"\s+([+-])\s+", text)
    signed = []
    first = tokens[0]
    sign = 1
    if first.startswith("-"):
        sign, first = -1, first[1:].strip()
    elif first.startswith("+"):
        first = first[1:].strip()
    signed.append((sign, first))
    for op, term in zip(tokens[1::2], tokens[2::2]):
        signed.append((1 if op == "+" else -1, term.strip()))
    p0, p1 = R.zero, R.zero
    for sign, term in signed:
        m = _TERM_RE.match(term.replace(" ", ""))
        if not m:
            raise ParseError(f"bad term: {term!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        expo = {"q": 0, "t": 0, "k": 0, "s": 0}
        for name, e in _FACTOR_RE.findall(m.group(2) or ""):
            expo[name] += int(e) if e else 1
        if expo["s"] > 1:
            raise ParseError(f"s-degree above 1 in term: {term!r}")
        mono = R.term_new((expo["q"], expo["t"], expo["k"]), sign * coeff)
        if expo["s"]:
            p1 += mono
        else:
            p0 += mono
    return p0, p1


def parse_elem(text):
    """Parse the canonical text form back into a FieldElem."""
    if " / " in text:
        num_s, den_s = text.split(" / ", 1)
    else:
        num_s, den_s = text, "1"
    pa, pb = _parse_poly_pair(num_s)
    d0, d1 = _parse_poly_pair(den_s)
    if d1:
        raise ParseError("denominator must be s-free")
    if not d0:
        raise ParseError("zero denominator")
    return FieldElem(BaseRat(pa, d0), BaseRat(pb, d0))


def parse_rational(text):
    """Parse a 'p/q' or integer string into a Fraction (CLI plumbing)."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational: {text!r}") from exc
