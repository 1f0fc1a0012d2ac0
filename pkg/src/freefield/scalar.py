"""Exact coefficient arithmetic: the field Q(kappa).

A Scalar is a quotient of two integer-coefficient polynomials in the formal
parameter kappa, kept in a unique canonical form:

  * numerator and denominator share no polynomial factor (gcd over Q is 1),
  * their integer contents are coprime,
  * the denominator's leading coefficient is positive.

Polynomials are plain tuples of ints, lowest degree first, with no trailing
zeros; the empty tuple is the zero polynomial.  Scalars are immutable and
hashable, so equality is structural equality of canonical forms.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd


class ScalarError(ArithmeticError):
    pass


class PoleError(ScalarError):
    """Evaluation at a zero of the denominator."""


class DivisionByZero(ScalarError):
    pass


# ---------------------------------------------------------------------------
# integer polynomials as tuples (lowest degree first)

def _trim(cs):
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


def p_deg(a):
    return len(a) - 1


def p_add(a, b):
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def p_neg(a):
    return tuple(-c for c in a)


def p_sub(a, b):
    return p_add(a, p_neg(b))


def p_mul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        ca = a[0]
        if ca == 1:
            return b
        return tuple(c * ca for c in b)
    if len(b) == 1:
        cb = b[0]
        if cb == 1:
            return a
        return tuple(c * cb for c in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _trim(out)


def p_scale(a, k):
    if k == 0:
        return ()
    if k == 1:
        return a
    return tuple(c * k for c in a)


def p_content(a):
    g = 0
    for c in a:
        g = _int_gcd(g, c)
        if g == 1:
            return 1
    return g


def p_primitive(a):
    """Return (content, primitive part); the zero polynomial has content 0."""
    if not a:
        return 0, ()
    c = p_content(a)
    if c == 1:
        return 1, a
    return c, tuple(x // c for x in a)


def _p_pseudo_rem(a, b):
    """Pseudo-remainder of a by b: lead(b)^(deg a - deg b + 1) * a mod b."""
    db = p_deg(b)
    lb = b[-1]
    r = list(a)
    while len(r) and len(r) - 1 >= db:
        lr = r[-1]
        if lr == 0:
            r.pop()
            continue
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[shift + i] -= lr * c
        r = list(_trim(r))
    return _trim(r)


def p_gcd(a, b):
    """Primitive gcd with positive leading coefficient (1 for coprime inputs).

    Primitive PRS: each pseudo-remainder is reduced to its primitive part, so
    intermediate coefficients stay small without any rational arithmetic.
    """
    _, a = p_primitive(a)
    _, b = p_primitive(b)
    if p_deg(a) < p_deg(b):
        a, b = b, a
    while b:
        r = _p_pseudo_rem(a, b)
        _, r = p_primitive(r)
        a, b = b, r
    if not a:
        return ()
    if a[-1] < 0:
        a = p_neg(a)
    return a


def p_divexact(a, b):
    """Exact quotient a / b for b | a over Z; raises on inexact division."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    if not a:
        return ()
    q = [0] * (len(a) - len(b) + 1)
    r = list(a)
    lb = b[-1]
    for shift in range(len(a) - len(b), -1, -1):
        c = r[shift + len(b) - 1]
        if c % lb:
            raise ScalarError("inexact polynomial division")
        coef = c // lb
        q[shift] = coef
        if coef:
            for i, bc in enumerate(b):
                r[shift + i] -= coef * bc
    if any(r):
        raise ScalarError("inexact polynomial division")
    return _trim(q)


def p_eval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _p_str(a, var="κ"):
    if not a:
        return "0"
    parts = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------------------

class Scalar:
    """An element of Q(kappa) in canonical form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=(1,), _canonical=False):
        if isinstance(num, int):
            num = (num,) if num else ()
        if isinstance(den, int):
            den = (den,) if den else ()
        if not _canonical:
            num, den = _canonicalize(_trim(num), _trim(den))
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_fraction(q):
        q = Fraction(q)
        return Scalar((q.numerator,) if q.numerator else (), (q.denominator,),
                      _canonical=q.denominator > 0)

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_constant(self):
        return len(self.num) <= 1 and len(self.den) <= 1

    def as_fraction(self):
        if not self.is_constant():
            raise ScalarError(f"not a constant: {self}")
        return Fraction(self.num[0] if self.num else 0, self.den[0])

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            num = p_add(self.num, other.num)
            if self.den == (1,):
                return Scalar(num, (1,), _canonical=True)
            return Scalar(num, self.den)
        num = p_add(p_mul(self.num, other.den), p_mul(other.num, self.den))
        return Scalar(num, p_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(p_neg(self.num), self.den, _canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if other.den == (1,):
            if other.num == (1,):
                return self
            if self.den == (1,):
                return Scalar(p_mul(self.num, other.num), (1,), _canonical=True)
        elif self.num == (1,) and self.den == (1,):
            return other
        return Scalar(p_mul(self.num, other.num), p_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise DivisionByZero("scalar division by zero")
        if not self.num:
            return ZERO
        return Scalar(p_mul(self.num, other.den), p_mul(self.den, other.num))

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if n < 0:
            return ONE / self ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.num, self.den))
        return h

    # -- evaluation / serialization ----------------------------------------

    def evaluate_at(self, x):
        """Exact value at kappa = x (a Fraction); raises PoleError at a pole."""
        x = Fraction(x)
        d = p_eval(self.den, x)
        if d == 0:
            raise PoleError(f"pole of {self} at kappa={x}")
        return p_eval(self.num, x) / d

    def to_string(self):
        num = ",".join(str(c) for c in self.num) or "0"
        den = ",".join(str(c) for c in self.den)
        return num + "/" + den

    @staticmethod
    def from_string(s):
        num_s, den_s = s.split("/")
        num = () if num_s == "0" else tuple(int(c) for c in num_s.split(","))
        den = tuple(int(c) for c in den_s.split(","))
        return Scalar(num, den)

    def __str__(self):
        if self.den == (1,):
            return _p_str(self.num)
        num = _p_str(self.num)
        den = _p_str(self.den)
        if len(self.num) > 1 or (self.num and self.num[0] < 0):
            num = "(" + num + ")"
        if len(self.den) > 1:
            den = "(" + den + ")"
        return num + "/" + den

    def __repr__(self):
        return f"Scalar({self})"


def _tz(a):
    """Number of leading zero coefficients (the kappa-power factor)."""
    i = 0
    n = len(a)
    while i < n and a[i] == 0:
        i += 1
    return i


def _nnz(a):
    c = 0
    for x in a:
        if x:
            c += 1
            if c > 1:
                return c
    return c


def _canonicalize(num, den):
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return (), (1,)
    if _nnz(den) == 1:
        # denominator c * kappa^j: reduce the power and the integer content
        j = _tz(den)
        c = den[j]
        tn = _tz(num)
        if tn and j:
            t = tn if tn < j else j
            num = num[t:]
            j -= t
        if c != 1 and c != -1:
            g = c
            for x in num:
                g = _int_gcd(g, x)
                if g == 1:
                    break
            if g > 1:
                num = tuple(x // g for x in num)
                c //= g
        if c < 0:
            num = p_neg(num)
            c = -c
        return num, ((0,) * j + (c,) if j else (c,))
    # common kappa power
    t = min(_tz(num), _tz(den))
    if t:
        num = num[t:]
        den = den[t:]
    cn, num = p_primitive(num)
    cd, den = p_primitive(den)
    # a monomial shares no further polynomial factor after the power split
    if _nnz(num) > 1 and _nnz(den) > 1:
        g = p_gcd(num, den)
        if len(g) > 1:
            num = p_divexact(num, g)
            den = p_divexact(den, g)
    c = _int_gcd(cn, cd)
    if c > 1:
        cn //= c
        cd //= c
    if cn != 1:
        num = p_scale(num, cn)
    if cd != 1:
        den = p_scale(den, cd)
    if den[-1] < 0:
        num = p_neg(num)
        den = p_neg(den)
    return num, den


_INT_CACHE = {}


def _coerce(x):
    if type(x) is Scalar:
        return x
    if isinstance(x, int):
        s = _INT_CACHE.get(x)
        if s is None:
            if len(_INT_CACHE) < 4096:
                s = _INT_CACHE[x] = Scalar((x,) if x else (), (1,), _canonical=True)
            else:
                s = Scalar((x,) if x else (), (1,), _canonical=True)
        return s
    if isinstance(x, Fraction):
        return Scalar.from_fraction(x)
    return None


def S(x):
    """Coerce an int or Fraction to a Scalar."""
    s = _coerce(x)
    if s is None:
        raise TypeError(f"cannot coerce {type(x)} to Scalar")
    return s


ZERO = Scalar((), (1,), _canonical=True)
ONE = Scalar((1,), (1,), _canonical=True)
KAPPA = Scalar((0, 1), (1,), _canonical=True)


def kappa():
    """The formal parameter kappa as a Scalar."""
    return KAPPA


def delta_weight(lam, sign=+1):
    """Conformal weight of the lattice vector at lam.

    The plus sign gives lam*(lam+2)/(4*kappa) - lam/2, the minus sign flips
    the sign of the kappa-dependent term.
    """
    if sign in ("+", +1):
        return Scalar((lam * (lam + 2), -2 * lam), (0, 4))
    if sign in ("-", -1):
        return Scalar((-lam * (lam + 2), -2 * lam), (0, 4))
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")
