"""Symbolic quantum fields and their exact mode actions on states.

A FieldExpr is a tree over generators, lattice vertex operators Y(mu,z),
derivatives, normal-ordered products and scalar combinations.  Fields are
never materialized as matrices: a compiled field evaluates one generic
Laurent mode on one monomial at a time, with all mode sums bounded through
the conformal grading, so every evaluation is exact and finite.

Generic indices follow the bigrading convention: X_(n) is the coefficient
of z^(-n-1) in X(z), and deg X_(n) = deg X - n - 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from . import fock
from . import ring as ring_mod
from .fock import (
    A, ABAR, BETA, EPS_E, EPS_F, GAMMA, ODD, PSIST,
    act_on_mono, add_term, fock_deg, mono, state_of,
)
from .scalar import ONE, S, Scalar

# conformal degree of each generator field (z-expansion offset)
FIELD_DEG = (0, 1, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 1, 0, 2, -1)


# ---------------------------------------------------------------------------
# expression nodes

@dataclass(frozen=True)
class Gen:
    family: int


@dataclass(frozen=True)
class Vertex:
    mu: int


@dataclass(frozen=True)
class Dz:
    arg: object


@dataclass(frozen=True)
class NP:
    left: object
    right: object


@dataclass(frozen=True)
class SMul:
    coeff: Scalar
    arg: object


@dataclass(frozen=True)
class FSum:
    terms: tuple


def smul(c, expr):
    c = S(c) if not isinstance(c, Scalar) else c
    return SMul(c, expr)


def fsum(*terms):
    flat = []
    for t in terms:
        if isinstance(t, FSum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    return FSum(tuple(flat))


def np_left(*factors):
    """Left-nested normal ordered product :A B C...: = :A(:B C...:):."""
    if len(factors) == 1:
        return factors[0]
    return NP(factors[0], np_left(*factors[1:]))


def field_parity(expr):
    if isinstance(expr, Gen):
        return 1 if expr.family in ODD else 0
    if isinstance(expr, Vertex):
        return 0
    if isinstance(expr, (Dz, SMul)):
        return field_parity(expr.arg)
    if isinstance(expr, NP):
        return field_parity(expr.left) ^ field_parity(expr.right)
    if isinstance(expr, FSum):
        ps = {field_parity(t) for t in expr.terms}
        if len(ps) > 1:
            raise ValueError("sum of fields with mixed parity")
        return ps.pop() if ps else 0
    raise TypeError(expr)


def field_deg_bound(expr):
    """Upper bound for the conformal degree of the field (mode-sum ceilings)."""
    if isinstance(expr, Gen):
        return FIELD_DEG[expr.family]
    if isinstance(expr, Vertex):
        return 0
    if isinstance(expr, Dz):
        return field_deg_bound(expr.arg) + 1
    if isinstance(expr, SMul):
        return field_deg_bound(expr.arg)
    if isinstance(expr, NP):
        return field_deg_bound(expr.left) + field_deg_bound(expr.right)
    if isinstance(expr, FSum):
        return max(field_deg_bound(t) for t in expr.terms)
    raise TypeError(expr)


def generic_to_family_mode(family, n):
    """Translate a generic index to this family's own mode index."""
    if EPS_E <= family <= EPS_F:
        return -(n + 1)
    return n + 1 - FIELD_DEG[family]


def family_to_generic_mode(family, m):
    if EPS_E <= family <= EPS_F:
        return -(m + 1)
    return m - 1 + FIELD_DEG[family]


# ---------------------------------------------------------------------------
# Schur polynomials

@lru_cache(maxsize=None)
def _partitions(w):
    """Partitions of w as sorted tuples of (part, multiplicity)."""
    if w == 0:
        return ((),)
    out = []

    def rec(remaining, max_part, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(remaining, max_part), 0, -1):
            mult = 1
            while part * mult <= remaining:
                rec(remaining - part * mult, part - 1, acc + [(part, mult)])
                mult += 1

    rec(w, w, [])
    return tuple(out)


def schur(m, alphas):
    """Schur polynomial s_m(alpha_1, ..., alpha_m) of exact Scalars."""
    if m < 0:
        raise ValueError("schur index must be nonnegative")
    total = S(0)
    for part in _partitions(m):
        term = ONE
        for p, mult in part:
            term = term * alphas[p - 1] ** mult / S(factorial(mult))
        total = total + term
    return total


# ---------------------------------------------------------------------------
# lattice vertex operators

_VERTEX_COEFF = {}


def _vertex_creation_coeff(ring, mu, n, q, barred):
    # one factor of exp(+-mu/(2 kappa) sum a_{-n}/n z^n): (+-mu/(2 kappa n))^q / q!
    key = (ring.name, mu, n, q, barred)
    got = _VERTEX_COEFF.get(key)
    if got is None:
        sign = -1 if barred else 1
        c = Fraction(sign * mu, 2 * n) ** q / factorial(q)
        got = _VERTEX_COEFF[key] = ring.from_fraction_kpow(c, q)
    return got


def vertex_on_mono(mu, d, m):
    """Coefficient of z^d in Y(mu,z) applied to one monomial."""
    ring = ring_mod.ACTIVE
    lam, factors = m
    a_factors = [(i, f) for i, f in enumerate(factors) if f[0] == A or f[0] == ABAR]
    # stage 1: annihilation part, a per-factor contraction choice
    stage1 = [(ring.one, factors, 0)]
    for i, (fam, mode, e) in a_factors:
        new = []
        n = -mode
        for coeff, fs, w in stage1:
            for l in range(e + 1):
                if l == 0:
                    new.append((coeff, fs, w))
                    continue
                c = coeff * ring.of_int((-mu) ** l * comb(e, l))
                fs2 = tuple(
                    (f if j != i else (fam, mode, e - l)) for j, f in enumerate(fs))
                new.append((c, fs2, w + n * l))
        stage1 = new
    out = []
    for coeff, fs, w in stage1:
        p = d + w
        if p < 0:
            continue
        fs = tuple(f for f in fs if f[2] > 0)
        base = (lam + mu, fs)
        # stage 3: creation part split between the a and abar exponentials
        for pa in range(p + 1):
            pb = p - pa
            for part_a in _partitions(pa):
                ca = coeff
                for n, q in part_a:
                    ca = ca * _vertex_creation_coeff(ring, mu, n, q, False)
                for part_b in _partitions(pb):
                    c = ca
                    for n, q in part_b:
                        c = c * _vertex_creation_coeff(ring, mu, n, q, True)
                    if not c.num:
                        continue
                    target = base
                    for n, q in part_a:
                        _, target = fock.apply_creation(A, -n, target)
                        if q > 1:
                            tl, tf = target
                            tf = tuple((f[0], f[1], f[2] + q - 1)
                                       if f[:2] == (A, -n) else f for f in tf)
                            target = (tl, tf)
                    for n, q in part_b:
                        _, target = fock.apply_creation(ABAR, -n, target)
                        if q > 1:
                            tl, tf = target
                            tf = tuple((f[0], f[1], f[2] + q - 1)
                                       if f[:2] == (ABAR, -n) else f for f in tf)
                            target = (tl, tf)
                    out.append((c, target))
    return out


def vertex_mode(mu, d, state):
    """Coefficient of z^d of Y(mu, z) applied to a State."""
    out = {}
    for m, c in state.items():
        for c2, m2 in vertex_on_mono(mu, d, m):
            add_term(out, c * c2, m2)
    return out


# ---------------------------------------------------------------------------
# compiled fields

class Compiled:
    """A FieldExpr with a per-(mode, monomial) evaluation cache."""

    def __init__(self, expr, registry=None):
        self.expr = expr
        self.parity = field_parity(expr)
        self.deg = field_deg_bound(expr)
        self.ring = ring_mod.ACTIVE
        self.cache = {}
        self._neg_cache = {}
        if registry is None:
            registry = {}
        registry[expr] = self
        self._fn = self._build(expr, registry)

    def _child(self, expr, registry):
        got = registry.get(expr)
        if got is None:
            got = Compiled(expr, registry)
        return got

    def _build(self, expr, registry):
        if isinstance(expr, Gen):
            fam = expr.family

            def fn(n, m, _fam=fam):
                return tuple(act_on_mono(_fam, generic_to_family_mode(_fam, n), m))
            return fn
        if isinstance(expr, Vertex):
            mu = expr.mu

            def fn(n, m, _mu=mu):
                return tuple(vertex_on_mono(_mu, -n - 1, m))
            return fn
        if isinstance(expr, SMul):
            child = self._child(expr.arg, registry)
            c0 = self.ring.from_scalar(expr.coeff)

            def fn(n, m):
                return tuple((c0 * c, m2) for c, m2 in child.mode_mono(n, m))
            return fn
        if isinstance(expr, Dz):
            child = self._child(expr.arg, registry)
            of_int = self.ring.of_int

            def fn(n, m):
                if n == 0:
                    return ()
                cn = of_int(-n)
                return tuple((cn * c, m2) for c, m2 in child.mode_mono(n - 1, m))
            return fn
        if isinstance(expr, FSum):
            children = [self._child(t, registry) for t in expr.terms]

            def fn(n, m):
                acc = {}
                for ch in children:
                    for c, m2 in ch.mode_mono(n, m):
                        add_term(acc, c, m2)
                return tuple((c, m2) for m2, c in acc.items())
            return fn
        if isinstance(expr, NP):
            left = self._child(expr.left, registry)
            right = self._child(expr.right, registry)
            sign = -1 if (left.parity and right.parity) else 1
            dl, dr = left.deg, right.deg

            def fn(n, m):
                acc = {}
                ds = fock_deg(m)
                # creation part of the left factor
                for j in range(n - ds - dr, 0):
                    for c, m2 in right.mode_mono(n - j - 1, m):
                        for c2, m3 in left.mode_mono(j, m2):
                            add_term(acc, c * c2, m3)
                # annihilation part of the left factor moves right
                for j in range(0, ds + dl):
                    t = left.mode_mono(j, m)
                    if not t:
                        continue
                    for c, m2 in t:
                        for c2, m3 in right.mode_mono(n - j - 1, m2):
                            if sign < 0:
                                add_term(acc, -(c * c2), m3)
                            else:
                                add_term(acc, c * c2, m3)
                return tuple((c, m2) for m2, c in acc.items())
            return fn
        raise TypeError(expr)

    def mode_mono(self, n, m):
        key = (n, m)
        got = self.cache.get(key)
        if got is None:
            got = self.cache[key] = self._fn(n, m)
        return got

    def mode(self, n, state):
        out = {}
        cache = self.cache
        fn = self._fn
        one = self.ring.one
        get = out.get
        for m, c in state.items():
            key = (n, m)
            t = cache.get(key)
            if t is None:
                t = cache[key] = fn(n, m)
            if c is one:
                for c2, m2 in t:
                    old = get(m2)
                    if old is None:
                        out[m2] = c2
                    else:
                        new = old + c2
                        if new.num:
                            out[m2] = new
                        else:
                            del out[m2]
            else:
                for c2, m2 in t:
                    old = get(m2)
                    if old is None:
                        out[m2] = c * c2
                    else:
                        new = old + c * c2
                        if new.num:
                            out[m2] = new
                        else:
                            del out[m2]
        return out

    def accumulate(self, n, state, out, negate):
        """out += (+-1) * X_(n) state, merging in place."""
        cache = self.cache
        fn = self._fn
        get = out.get
        if negate:
            ncache = self._neg_cache
        for m, c in state.items():
            key = (n, m)
            if negate:
                t = ncache.get(key)
                if t is None:
                    pos = cache.get(key)
                    if pos is None:
                        pos = cache[key] = fn(n, m)
                    t = ncache[key] = tuple((-c2, m2) for c2, m2 in pos)
            else:
                t = cache.get(key)
                if t is None:
                    t = cache[key] = fn(n, m)
            for c2, m2 in t:
                old = get(m2)
                if old is None:
                    out[m2] = c * c2
                else:
                    new = old + c * c2
                    if new.num:
                        out[m2] = new
                    else:
                        del out[m2]

    def clear_cache(self):
        self.cache.clear()
        self._neg_cache.clear()


_FIELD_MEMO = {}


def compile_field(expr):
    got = _FIELD_MEMO.get(expr)
    if got is None:
        if len(_FIELD_MEMO) > 512:
            _FIELD_MEMO.clear()
        got = _FIELD_MEMO[expr] = Compiled(expr)
    return got


def field_mode(expr, n, state):
    """Generic mode X_(n) of a symbolic field applied to a State."""
    if isinstance(expr, Compiled):
        return expr.mode(n, state)
    return compile_field(expr).mode(n, state)


# ---------------------------------------------------------------------------
# OPE-driven commutator verification

@dataclass(frozen=True)
class ExpectedOPE:
    """Pole orders mapped to field coefficients or central Scalars."""
    poles: tuple  # of (j, FieldExpr | Scalar)


@dataclass
class Report:
    checked: int = 0
    failures: list = None

    def __post_init__(self):
        if self.failures is None:
            self.failures = []

    @property
    def ok(self):
        return not self.failures

    def merge(self, other):
        self.checked += other.checked
        self.failures.extend(other.failures)

    def to_json(self):
        return json.dumps({"checked": self.checked, "failed": self.failures})


def verify_commutator(X, Y, expected, trunc, mode_range, space):
    """Check [X_(m), Y_(n)] s against the binomial re-expansion of the OPE.

    [X_(m), Y_(n)] = sum_j binom(m, j-1) (C_j)_(m+n-j+1), central C_j acting
    as C_j * delta_{m+n-j+1, -1}.
    """
    ring = ring_mod.ACTIVE
    cx, cy = compile_field(X), compile_field(Y)
    sign = -1 if (cx.parity and cy.parity) else 1
    comp = {j: (ring.from_scalar(c) if isinstance(c, Scalar) else compile_field(c))
            for j, c in expected.poles}
    central = {j for j, c in expected.poles if isinstance(c, Scalar)}
    basis = fock.enumerate_basis(trunc, space)
    lo, hi = mode_range
    report = Report()
    for m_idx in range(lo, hi + 1):
        for n_idx in range(lo, hi + 1):
            for b in basis:
                s = state_of(b)
                lhs = cx.mode(m_idx, cy.mode(n_idx, s))
                other = cy.mode(n_idx, cx.mode(m_idx, s))
                if sign < 0:
                    lhs = fock.state_add(lhs, other)
                else:
                    lhs = fock.state_sub(lhs, other)
                rhs = {}
                for j, cj in comp.items():
                    coef = comb(m_idx, j - 1) if m_idx >= 0 else _binom_int(m_idx, j - 1)
                    if coef == 0:
                        continue
                    if j in central:
                        if m_idx + n_idx - j + 1 == -1:
                            add_term(rhs, ring.of_int(coef) * cj, b)
                    else:
                        for c2, m2 in cj.mode_mono(m_idx + n_idx - j + 1, b):
                            add_term(rhs, ring.of_int(coef) * c2, m2)
                report.checked += 1
                if lhs != rhs:
                    report.failures.append({
                        "m": m_idx, "n": n_idx, "state": fock.mono_str(b),
                        "lhs": fock.state_str(lhs), "rhs": fock.state_str(rhs),
                    })
    return report


def _binom_int(m, k):
    """binom(m, k) for possibly negative integer m."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= m - i
    return num // factorial(k)


# ---------------------------------------------------------------------------
# serialization

def expr_to_json(expr):
    return json.dumps(_expr_obj(expr))


def _expr_obj(expr):
    if isinstance(expr, Gen):
        return {"gen": fock.FAMILY_NAMES[expr.family]}
    if isinstance(expr, Vertex):
        return {"vertex": expr.mu}
    if isinstance(expr, Dz):
        return {"d": _expr_obj(expr.arg)}
    if isinstance(expr, NP):
        return {"np": [_expr_obj(expr.left), _expr_obj(expr.right)]}
    if isinstance(expr, SMul):
        return {"smul": [expr.coeff.to_string(), _expr_obj(expr.arg)]}
    if isinstance(expr, FSum):
        return {"sum": [_expr_obj(t) for t in expr.terms]}
    raise TypeError(expr)


def expr_from_json(text):
    return _obj_expr(json.loads(text))


def _obj_expr(obj):
    if "gen" in obj:
        return Gen(fock.FAMILY_INDEX[obj["gen"]])
    if "vertex" in obj:
        return Vertex(obj["vertex"])
    if "d" in obj:
        return Dz(_obj_expr(obj["d"]))
    if "np" in obj:
        return NP(_obj_expr(obj["np"][0]), _obj_expr(obj["np"][1]))
    if "smul" in obj:
        return SMul(Scalar.from_string(obj["smul"][0]), _obj_expr(obj["smul"][1]))
    if "sum" in obj:
        return FSum(tuple(_obj_expr(t) for t in obj["sum"]))
    raise ValueError(obj)
