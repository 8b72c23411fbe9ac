"""Exact arithmetic in the coefficient field Q(q, eta).

A scalar is a reduced fraction of two integer-coefficient polynomials in the
two central parameters q and eta.  Exponents inside a polynomial are
non-negative; negative powers of a parameter live in the denominator
(e.g. q^-1 is the scalar 1/q).  Every Scalar is kept in a canonical form
(gcd removed, denominator sign-normalized), so equality of scalars is plain
structural equality.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd

__all__ = ["CoeffError", "ZeroDenominator", "PoleError", "ParamPoly", "Scalar"]


class CoeffError(ArithmeticError):
    """Invalid operation in the coefficient field."""


class ZeroDenominator(CoeffError):
    """Division by the zero scalar / zero denominator polynomial."""


class PoleError(CoeffError):
    """Evaluation point lies on a pole of the scalar."""


# ---------------------------------------------------------------------------
# dense helpers for gcd computations
#
# Level 1: an element of Z[eta] as a list of ints (index = eta exponent).
# Level 2: an element of Z[eta][q] as a list of level-1 polys (index = q exp).
# Sparse dicts are the public representation; the dense form only exists
# inside the gcd/exact-division routines, where degrees are small.
# ---------------------------------------------------------------------------

def _e_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _e_add(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return _e_trim(out)


def _e_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                if v:
                    out[i + j] += u * v
    return _e_trim(out)


def _e_mul_int(a, n):
    if n == 0:
        return []
    return [v * n for v in a]


def _e_neg(a):
    return [-v for v in a]


def _e_content(a):
    g = 0
    for v in a:
        g = _igcd(g, abs(v))
    return g


def _e_divexact_int(a, n):
    out = []
    for v in a:
        d, r = divmod(v, n)
        if r:
            raise CoeffError("inexact integer division in gcd path")
        out.append(d)
    return out


def _e_divexact(a, b):
    """Exact division of a by b in Z[eta]; raises CoeffError if inexact."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return []
    if len(b) == 1:
        return _e_divexact_int(a, b[0])
    rem = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        lead = rem[k + len(b) - 1]
        qk, r = divmod(lead, b[-1])
        if r:
            raise CoeffError("inexact polynomial division in gcd path")
        out[k] = qk
        if qk:
            for j, v in enumerate(b):
                rem[k + j] -= qk * v
    if _e_trim(rem):
        raise CoeffError("inexact polynomial division in gcd path")
    return _e_trim(out)


def _e_pseudo_rem(a, b):
    """Lazy pseudo-remainder over Z: repeat rem := lc(b)*rem - lc(rem)*x^k*b."""
    db = len(b) - 1
    rem = list(a)
    lead = b[-1]
    for k in range(len(a) - db - 1, -1, -1):
        if len(rem) <= k + db:
            continue
        c = rem[k + db]
        if not c:
            continue
        rem = _e_mul_int(rem, lead)
        for j, v in enumerate(b):
            rem[k + j] -= c * v
        _e_trim(rem)
    return _e_trim(rem)


def _e_gcd(a, b):
    """gcd in Z[eta] (primitive PRS), with positive leading coefficient."""
    a, b = list(a), list(b)
    if not a:
        g = b
    elif not b:
        g = a
    else:
        ca, cb = _e_content(a), _e_content(b)
        cg = _igcd(ca, cb)
        a = _e_divexact_int(a, ca if a[-1] > 0 else -ca)
        b = _e_divexact_int(b, cb if b[-1] > 0 else -cb)
        if len(a) < len(b):
            a, b = b, a
        while b:
            r = _e_pseudo_rem(a, b)
            if r:
                c = _e_content(r)
                r = _e_divexact_int(r, c if r[-1] > 0 else -c)
            a, b = b, r
        g = _e_mul_int(a, cg)
    g = list(g)
    if g and g[-1] < 0:
        g = _e_neg(g)
    return g


def _q_trim(c):
    while c and not c[-1]:
        c.pop()
    return c


def _q_scale(a, e):
    """Multiply a q-poly by an eta-poly."""
    return _q_trim([_e_mul(x, e) for x in a])


def _q_pseudo_rem(a, b):
    """Lazy pseudo-remainder in Z[eta][q]."""
    db = len(b) - 1
    rem = [list(x) for x in a]
    lead = b[-1]
    for k in range(len(a) - db - 1, -1, -1):
        if len(rem) <= k + db:
            continue
        c = rem[k + db]
        if not c:
            continue
        rem = [_e_mul(x, lead) for x in rem]
        for j, v in enumerate(b):
            rem[k + j] = _e_add(rem[k + j], _e_neg(_e_mul(c, v)))
        _q_trim(rem)
    return _q_trim(rem)


def _q_content(a):
    g = []
    for x in a:
        g = _e_gcd(g, x)
    return g


def _q_divexact_e(a, e):
    return [_e_divexact(x, e) for x in a]


def _q_gcd(a, b):
    """gcd in Z[q, eta] on dense nested lists (primitive PRS in q)."""
    if not a:
        g = [list(x) for x in b]
    elif not b:
        g = [list(x) for x in a]
    else:
        ca, cb = _q_content(a), _q_content(b)
        cg = _e_gcd(ca, cb)
        a = _q_divexact_e(a, ca)
        b = _q_divexact_e(b, cb)
        if len(a) < len(b):
            a, b = b, a
        while b:
            r = _q_pseudo_rem(a, b)
            if r:
                r = _q_divexact_e(r, _q_content(r))
            a, b = b, r
        g = _q_scale(a, cg)
    if g and g[-1] and g[-1][-1] < 0:
        g = [_e_neg(x) for x in g]
    return g


def _q_divexact(a, b):
    """Exact division in Z[eta][q]; raises CoeffError if inexact."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return []
    rem = [list(x) for x in a]
    out = [[] for _ in range(len(a) - len(b) + 1)]
    for k in range(len(a) - len(b), -1, -1):
        lead = rem[k + len(b) - 1] if k + len(b) - 1 < len(rem) else []
        if not lead:
            continue
        qk = _e_divexact(lead, b[-1])
        out[k] = qk
        for j, v in enumerate(b):
            rem[k + j] = _e_add(rem[k + j], _e_neg(_e_mul(qk, v)))
    if _q_trim(rem):
        raise CoeffError("inexact polynomial division in gcd path")
    return _q_trim(out)


def _to_nested(terms):
    if not terms:
        return []
    dq = max(eq for eq, _ in terms)
    out = [[] for _ in range(dq + 1)]
    for (eq, ee), c in terms.items():
        row = out[eq]
        if len(row) <= ee:
            row += [0] * (ee + 1 - len(row))
        row[ee] = c
    for row in out:
        _e_trim(row)
    return _q_trim(out)


def _from_nested(nested):
    terms = {}
    for eq, row in enumerate(nested):
        for ee, c in enumerate(row):
            if c:
                terms[(eq, ee)] = c
    return terms


# ---------------------------------------------------------------------------
# ParamPoly
# ---------------------------------------------------------------------------

class ParamPoly:
    """Integer-coefficient polynomial in q and eta with exponents >= 0.

    Immutable; ``terms`` maps exponent pairs (q_exp, eta_exp) to nonzero ints.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for key, c in terms.items():
                if c:
                    eq, ee = key
                    if eq < 0 or ee < 0:
                        raise CoeffError("negative exponent in ParamPoly")
                    t[(int(eq), int(ee))] = int(c)
        object.__setattr__(self, "terms", t)

    def __setattr__(self, *a):
        raise AttributeError("ParamPoly is immutable")

    # -- constructors
    @staticmethod
    def zero():
        return _PP_ZERO

    @staticmethod
    def one():
        return _PP_ONE

    @staticmethod
    def from_int(n):
        return ParamPoly({(0, 0): n})

    @staticmethod
    def monomial(coeff, q_exp=0, eta_exp=0):
        return ParamPoly({(q_exp, eta_exp): coeff})

    # -- structure
    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0, 0): 1}

    def leading(self):
        """(exponent pair, coefficient) of the lex-leading term."""
        key = max(self.terms)
        return key, self.terms[key]

    def is_monomial(self):
        return len(self.terms) == 1

    def __eq__(self, other):
        return isinstance(other, ParamPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic
    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ParamPoly(out)

    def __neg__(self):
        return ParamPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ParamPoly({k: c * other for k, c in self.terms.items()})
        out = {}
        for (aq, ae), ac in self.terms.items():
            for (bq, be), bc in other.terms.items():
                k = (aq + bq, ae + be)
                s = out.get(k, 0) + ac * bc
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return ParamPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise CoeffError("negative power of ParamPoly")
        out = _PP_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def evaluate(self, q0, eta0):
        total = Fraction(0)
        for (eq, ee), c in self.terms.items():
            total += c * q0 ** eq * eta0 ** ee
        return total

    def __repr__(self):
        return f"ParamPoly({self.terms!r})"


_PP_ZERO = ParamPoly()
_PP_ONE = ParamPoly({(0, 0): 1})


def poly_gcd(a, b):
    """gcd of two ParamPolys (includes integer content), canonical sign."""
    return ParamPoly(_from_nested(_q_gcd(_to_nested(a.terms), _to_nested(b.terms))))


def poly_divexact(a, b):
    """Exact quotient a / b of ParamPolys."""
    return ParamPoly(_from_nested(_q_divexact(_to_nested(a.terms), _to_nested(b.terms))))


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------

class Scalar:
    """Element of Q(q, eta) in canonical form: num/den with gcd(num, den)=1,
    den nonzero with positive lex-leading coefficient; zero is 0/1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, int):
            num = ParamPoly.from_int(num)
        if den is None:
            den = _PP_ONE
        elif isinstance(den, int):
            den = ParamPoly.from_int(den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def make(num, den=None):
        """Canonicalize a numerator/denominator pair into a Scalar."""
        if isinstance(num, int):
            num = ParamPoly.from_int(num)
        if den is None:
            den = _PP_ONE
        elif isinstance(den, int):
            den = ParamPoly.from_int(den)
        if den.is_zero():
            raise ZeroDenominator("zero denominator")
        if num.is_zero():
            return ZERO
        if not den.is_one():
            g = poly_gcd(num, den)
            if not g.is_one():
                num = poly_divexact(num, g)
                den = poly_divexact(den, g)
        if den.leading()[1] < 0:
            num, den = -num, -den
        return Scalar(num, den)

    # -- constructors
    @staticmethod
    def from_int(n):
        if n == 0:
            return ZERO
        return Scalar(ParamPoly.from_int(n))

    @staticmethod
    def from_fraction(f):
        f = Fraction(f)
        return Scalar.make(ParamPoly.from_int(f.numerator), ParamPoly.from_int(f.denominator))

    @staticmethod
    def q_power(n):
        if n >= 0:
            return Scalar(ParamPoly.monomial(1, q_exp=n))
        return Scalar(_PP_ONE, ParamPoly.monomial(1, q_exp=-n))

    @staticmethod
    def eta_power(n):
        if n >= 0:
            return Scalar(ParamPoly.monomial(1, eta_exp=n))
        return Scalar(_PP_ONE, ParamPoly.monomial(1, eta_exp=-n))

    # -- structure
    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_negative_form(self):
        """True when the canonical numerator has a negative leading coefficient."""
        return bool(self.num) and self.num.leading()[1] < 0

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Scalar.from_int(other)
        return isinstance(other, Scalar) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- field operations
    def _coerce(other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, int):
            return Scalar.from_int(other)
        return None

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return Scalar.make(self.num + other.num, self.den)
        return Scalar.make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return Scalar(-self.num, self.den)

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar._coerce(other) + (-self)

    def __mul__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        # cross-cancel before multiplying to keep intermediates small
        a_num, a_den = self.num, self.den
        b_num, b_den = other.num, other.den
        if not b_den.is_one():
            g = poly_gcd(a_num, b_den)
            if not g.is_one():
                a_num = poly_divexact(a_num, g)
                b_den = poly_divexact(b_den, g)
        if not a_den.is_one():
            g = poly_gcd(b_num, a_den)
            if not g.is_one():
                b_num = poly_divexact(b_num, g)
                a_den = poly_divexact(a_den, g)
        return Scalar.make(a_num * b_num, a_den * b_den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDenominator("inverse of zero")
        return Scalar.make(self.den, self.num)

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar._coerce(other) * self.inverse()

    def eval_at(self, q0, eta0):
        """Exact rational value at (q0, eta0); PoleError on a denominator zero."""
        q0, eta0 = Fraction(q0), Fraction(eta0)
        d = self.den.evaluate(q0, eta0)
        if d == 0:
            raise PoleError(f"denominator vanishes at q={q0}, eta={eta0}")
        return self.num.evaluate(q0, eta0) / d

    def __repr__(self):
        from .parser import format_scalar
        return f"Scalar({format_scalar(self)})"


ZERO = Scalar(_PP_ZERO)
ONE = Scalar(_PP_ONE)
Q = Scalar(ParamPoly.monomial(1, q_exp=1))
ETA = Scalar(ParamPoly.monomial(1, eta_exp=1))


def scalar_arith(op, a, b):
    """Dispatch basic field arithmetic by name ('add'|'sub'|'mul'|'div')."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDenominator("scalar division by zero")
        return a / b
    raise ValueError(f"unknown scalar op {op!r}")


def canonicalize(num, den):
    """Public canonical constructor (spec operation)."""
    return Scalar.make(num, den)
