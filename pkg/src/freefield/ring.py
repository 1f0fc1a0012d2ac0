"""Coefficient backends for the state engine.

The reference backend is the canonical Scalar field Q(kappa).  The fast
backend stores an integer-coefficient polynomial Kronecker-encoded at the
base B = 2**128 (kappa -> B), over a monomial denominator c * kappa^j.
Encoding is a ring homomorphism Z[kappa] -> Z and is injective as long as
every coefficient stays below B/2 in absolute value, so additions,
multiplications and equality tests on encoded values are exact statements
about polynomials.  The workloads routed through this backend keep
coefficients far below 2**100 (checked by the digit audit in the tests),
and every suite is cross-validated against the Scalar backend on a
subwindow.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

from .scalar import Scalar, _nnz, _tz

B_BITS = 128
B = 1 << B_BITS
HALF = B >> 1


def encode(coeffs):
    """Kronecker encoding of an integer-coefficient tuple (lowest first)."""
    n = 0
    for c in reversed(coeffs):
        n = (n << B_BITS) + c
    return n


def decode(n):
    """Balanced-digit decoding; exact for |coefficients| < B/2."""
    out = []
    while n:
        d = n & (B - 1)
        if d >= HALF:
            d -= B
        out.append(d)
        n = (n - d) >> B_BITS
    return tuple(out)


def digits_ok(n, margin_bits=16):
    """True when every balanced digit stays margin_bits below the bound."""
    bound = HALF >> margin_bits
    while n:
        d = n & (B - 1)
        if d >= HALF:
            d -= B
        if abs(d) > bound:
            return False
        n = (n - d) >> B_BITS
    return True


class RC:
    """Encoded polynomial over a monomial denominator c * kappa^j (c > 0)."""

    __slots__ = ("num", "c", "j")

    def __init__(self, num, c=1, j=0):
        self.num = num
        self.c = c
        self.j = j

    def __mul__(self, other):
        n = self.num * other.num
        c = self.c * other.c
        j = self.j + other.j
        if j and n and not n & (B - 1):
            # cancel kappa powers exactly (constant digit is zero)
            while j and not n & (B - 1):
                n >>= B_BITS
                j -= 1
        return RC(n, c, j)

    def __add__(self, other):
        c1, j1, c2, j2 = self.c, self.j, other.c, other.j
        if c1 == c2 and j1 == j2:
            return RC(self.num + other.num, c1, j1)
        g = _int_gcd(c1, c2)
        cl = c1 // g * c2
        jm = j1 if j1 > j2 else j2
        n1 = self.num * (cl // c1) << (B_BITS * (jm - j1))
        n2 = other.num * (cl // c2) << (B_BITS * (jm - j2))
        return RC(n1 + n2, cl, jm)

    def __neg__(self):
        return RC(-self.num, self.c, self.j)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, RC):
            return NotImplemented
        if self.c == other.c and self.j == other.j:
            return self.num == other.num
        lhs = self.num * other.c << (B_BITS * other.j)
        rhs = other.num * self.c << (B_BITS * self.j)
        return lhs == rhs

    __hash__ = None

    def __repr__(self):
        return f"RC({to_scalar(self)})"


def to_scalar(rc):
    den = (0,) * rc.j + (rc.c,)
    return Scalar(decode(rc.num), den)


def from_scalar(s):
    if not s.num:
        return RC(0)
    if _nnz(s.den) != 1:
        raise ValueError(f"fast backend needs a monomial denominator: {s}")
    j = _tz(s.den)
    return RC(encode(s.num), s.den[j], j)


class FastRing:
    name = "fast"

    def __init__(self):
        self._ints = {}
        self.zero = RC(0)
        self.one = RC(1)

    def of_int(self, i):
        got = self._ints.get(i)
        if got is None:
            got = self._ints[i] = RC(i)
        return got

    def from_scalar(self, s):
        return from_scalar(s)

    def to_scalar(self, x):
        return to_scalar(x)

    def kappa_multiple(self, m):
        """The Scalar 2*kappa*m as a backend element."""
        return RC((m << 1) * B)

    def from_fraction_kpow(self, fr, j):
        fr = Fraction(fr)
        if fr.numerator >= 0:
            return RC(fr.numerator, fr.denominator, j)
        return RC(fr.numerator, fr.denominator, j)


class ScalarRing:
    name = "scalar"
    zero = Scalar((), (1,), _canonical=True)
    one = Scalar((1,), (1,), _canonical=True)

    @staticmethod
    def of_int(i):
        from .scalar import S
        return S(i)

    @staticmethod
    def from_scalar(s):
        return s

    @staticmethod
    def to_scalar(x):
        return x

    @staticmethod
    def kappa_multiple(m):
        return Scalar((0, 2 * m), (1,), _canonical=True)

    @staticmethod
    def from_fraction_kpow(fr, j):
        fr = Fraction(fr)
        return Scalar((fr.numerator,), (0,) * j + (fr.denominator,))


SCALAR_RING = ScalarRing()
FAST_RING = FastRing()

ACTIVE = SCALAR_RING


def use(ring):
    """Set the active coefficient backend (affects newly built operators)."""
    global ACTIVE
    ACTIVE = ring


class ring_context:
    def __init__(self, ring):
        self.ring = ring

    def __enter__(self):
        self.prev = ACTIVE
        use(self.ring)
        return self.ring

    def __exit__(self, *exc):
        use(self.prev)
        return False
