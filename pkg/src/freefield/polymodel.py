"""The loop-Bruhat polynomial model: regular actions as differential operators.

Variables are x_n, y_n (loop coordinates of the two unipotent factors),
zeta_m for m != 0 (higher torus modes), and the invertible torus coordinate
zeta carried as a power.  The lowering operators contain doubly infinite
multiplication tails (the Schur screening sums), so they cannot preserve
any finite-dimensional window; an application therefore returns the exact
window projection of the full answer together with a discarded flag.

Window discipline: zeta indices live in [-N, N], x/y indices internally in
[-2N, 2N], monomial degree at most deg_cap.  Kept terms are exact, and for
input monomials inside the certified region (indices within N-2, degree
within deg_cap-2) a single commutator of two operators with modes within
the window margin is provably uncontaminated by dropped terms inside that
region: dropped terms carry an index beyond 2N (x/y) or N (zeta) or degree
beyond deg_cap, and one further operator application moves indices by at
most max(|mode|, index-window) toward zero while never landing below N-1,
and lowers degree by at most one.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .fields import Report, _partitions
from .scalar import KAPPA, S, Scalar

X, Y, Z = 0, 1, 2  # variable kinds


def pmono(zpow=0, var_exps=()):
    return (zpow, tuple(sorted(var_exps)))


PUNIT = pmono()


def pdegree(m):
    return sum(e for _, e in m[1])


def _mult(m, kind, idx, power=1):
    zpow, ve = m
    for j, ((k, i), e) in enumerate(ve):
        if (k, i) == (kind, idx):
            return (zpow, ve[:j] + (((k, i), e + power),) + ve[j + 1:])
    return (zpow, tuple(sorted(ve + (((kind, idx), power),))))


def _deriv(m, kind, idx):
    """d/d(var): (multiplicity, reduced monomial) or None."""
    zpow, ve = m
    for j, ((k, i), e) in enumerate(ve):
        if (k, i) == (kind, idx):
            if e == 1:
                return e, (zpow, ve[:j] + ve[j + 1:])
            return e, (zpow, ve[:j] + (((k, i), e - 1),) + ve[j + 1:])
    return None


def _mult_zeta(m, power):
    return (m[0] + power, m[1])


class PolyResult:
    """Exact window projection of one application plus a discarded flag."""

    __slots__ = ("terms", "flag")

    def __init__(self):
        self.terms = {}
        self.flag = False

    def add(self, coeff, m):
        old = self.terms.get(m)
        new = coeff if old is None else old + coeff
        if new.is_zero():
            self.terms.pop(m, None)
        else:
            self.terms[m] = new


class PolyOperator:
    def __init__(self, name, fn):
        self.name = name
        self.fn = fn

    def apply_mono(self, m, coeff=None):
        res = PolyResult()
        self.fn(m, coeff if coeff is not None else S(1), res)
        return res

    def apply(self, terms):
        res = PolyResult()
        for m, c in terms.items():
            self.fn(m, c, res)
        return res


def _emitter(N, deg_cap):
    xw = 2 * N

    def emit(res, coeff, m):
        if pdegree(m) > deg_cap:
            res.flag = True
            return
        for (k, i), _ in m[1]:
            if abs(i) > (N if k == Z else xw):
                res.flag = True
                return
        res.add(coeff, m)
    return emit


def _schur_terms(j, idx_sign, N, deg_cap):
    """s_j with alpha_p = -2 zeta_{idx_sign * p}: list of (Fraction, factors)."""
    out = []
    lost = False
    for part in _partitions(j):
        coeff = Fraction(1)
        ve = []
        bad = False
        for p, mult in part:
            if p > N:
                bad = True
                break
            coeff *= Fraction((-2) ** mult, factorial(mult))
            ve.append(((Z, idx_sign * p), mult))
        if bad or sum(mm for _, mm in ve) > deg_cap:
            lost = True
            continue
        out.append((coeff, tuple(sorted(ve))))
    return out, lost


def build_poly_action(level, kap=None, N=4, deg_cap=8):
    """Operator maps for the displayed regular actions.

    level "classical": Prop-level finite-dimensional big cell, keys
    ("l"|"r", g); level "loop": keys ("l"|"r", g, n) for |n| <= N.
    """
    if kap is None:
        kap = KAPPA
    if level == "classical":
        ops = {}
        for side in ("l", "r"):
            for g in ("e", "h", "f"):
                ops[(side, g)] = PolyOperator(
                    f"pi_{side}({g})", _classical_fn(side, g))
        return ops
    if level == "loop":
        ops = {}
        for side in ("l", "r"):
            for g in ("e", "h", "f"):
                for n in range(-N, N + 1):
                    fn = {"e": _loop_e, "h": _loop_h, "f": _loop_f}[g](
                        side, n, kap, N, deg_cap)
                    ops[(side, g, n)] = PolyOperator(f"pi_{side}({g}_{n})", fn)
        return ops
    raise ValueError(f"unknown poly level {level!r}")


# -- the finite-dimensional big cell (exact, no windows) --------------------

def _classical_fn(side, g):
    if side == "l":
        def e_fn(m, c, res):
            d = _deriv(m, X, 0)
            if d:
                res.add(c * S(-d[0]), d[1])

        def h_fn(m, c, res):
            if m[0]:
                res.add(c * S(m[0]), m)
            d = _deriv(m, X, 0)
            if d:
                res.add(c * S(-2 * d[0]), _mult(d[1], X, 0))

        def f_fn(m, c, res):
            if m[0]:
                res.add(c * S(-m[0]), _mult(m, X, 0))
            d = _deriv(m, X, 0)
            if d:
                res.add(c * S(d[0]), _mult(d[1], X, 0, 2))
            d = _deriv(m, Y, 0)
            if d:
                res.add(c * S(d[0]), _mult_zeta(d[1], -2))
    else:
        def e_fn(m, c, res):
            d = _deriv(m, Y, 0)
            if d:
                res.add(c * S(d[0]), d[1])

        def h_fn(m, c, res):
            if m[0]:
                res.add(c * S(m[0]), m)
            d = _deriv(m, Y, 0)
            if d:
                res.add(c * S(-2 * d[0]), _mult(d[1], Y, 0))

        def f_fn(m, c, res):
            if m[0]:
                res.add(c * S(m[0]), _mult(m, Y, 0))
            d = _deriv(m, Y, 0)
            if d:
                res.add(c * S(-d[0]), _mult(d[1], Y, 0, 2))
            d = _deriv(m, X, 0)
            if d:
                res.add(c * S(-d[0]), _mult_zeta(d[1], -2))
    return {"e": e_fn, "h": h_fn, "f": f_fn}[g]


# -- the loop model ----------------------------------------------------------

def _loop_e(side, n, kap, N, deg_cap):
    kind, sgn = (X, -1) if side == "l" else (Y, 1)

    def fn(m, c, res):
        d = _deriv(m, kind, n)
        if d:
            res.add(c * S(sgn * d[0]), d[1])
    return fn


def _torus_h(side, mode, kap, emit):
    """The torus summand of pi(h_mode): derivative plus possible anomaly."""
    anomaly = (mode > 0) if side == "l" else (mode < 0)
    anomaly_coeff = (2 * mode * kap) if side == "l" else (-2 * mode * kap)

    def fn(m, c, res):
        if mode == 0:
            if m[0]:
                res.add(c * S(m[0]), m)
            return
        d = _deriv(m, Z, mode)
        if d:
            emit(res, c * S(d[0]), d[1])
        if anomaly:
            emit(res, c * anomaly_coeff, _mult(m, Z, -mode))
    return fn


def _loop_h(side, n, kap, N, deg_cap):
    kind = X if side == "l" else Y
    emit = _emitter(N, deg_cap)
    torus = _torus_h(side, n, kap, emit)

    def fn(m, c, res):
        for (k, l), _ in m[1]:
            if k != kind:
                continue
            d = _deriv(m, kind, l)
            emit(res, c * S(-2 * d[0]), _mult(d[1], kind, l - n))
        torus(m, c, res)
    return fn


def _loop_f(side, n, kap, N, deg_cap):
    left = side == "l"
    ku = X if left else Y          # own unipotent coordinates
    kv = Y if left else X          # opposite coordinates hit by the screening
    emit = _emitter(N, deg_cap)
    quad_sign = 1 if left else -1
    ladder_sign = -1 if left else 1
    screen_sign = 1 if left else -1
    jmax = N * (deg_cap + 1)

    def fn(m, c, res):
        zpow = m[0]
        res.flag = True  # the quadratic and multiplication tails are infinite
        # quadratic term sum_{i,i'} u_i u_{i'} d/du_{i+i'+n}
        for (k, l), _ in m[1]:
            if k != ku:
                continue
            d = _deriv(m, ku, l)
            base = c * S(quad_sign * d[0])
            for i in range(-2 * N, 2 * N + 1):
                i2 = l - n - i
                if abs(i2) > 2 * N or i2 < i:
                    continue
                mult = 1 if i2 == i else 2
                emit(res, base * S(mult), _mult(_mult(d[1], ku, i), ku, i2))
        # torus ladder: -+ sum_j u_{j-n} d/dzeta_j over all j != 0
        for (k, j), _ in m[1]:
            if k != Z:
                continue
            d = _deriv(m, Z, j)
            emit(res, c * S(ladder_sign * d[0]), _mult(d[1], ku, j - n))
        # anomaly multiplication tail: -2 j kappa u_{j-n} zeta_{-j}
        jr = range(1, N + 1) if left else range(-1, -N - 1, -1)
        for j in jr:
            emit(res, c * (-2 * j * kap), _mult(_mult(m, Z, -j), ku, j - n))
        if zpow:
            emit(res, c * S(ladder_sign * zpow), _mult(m, ku, -n))
        # central term -kappa n u_{-n}
        if n:
            emit(res, c * (-n * kap), _mult(m, ku, -n))
        # screening: ± zeta^-2 sum_{j,j'>=0} s_{j'} s_j d/dv
        for (k, l), _ in m[1]:
            if k != kv:
                continue
            d = _deriv(m, kv, l)
            base = _mult_zeta(d[1], -2)
            diff = l - n if left else n - l
            # left: d/dy_{n-j+j'} -> j' = j + (l-n); inner Schur at zeta_-
            # right: d/dx_{n+j-j'} -> j' = j + (n-l); inner Schur at zeta_+
            for j in range(0, jmax + 1):
                jp = j + diff
                if jp < 0:
                    continue
                inner, _ = _schur_terms(j, -1 if left else 1, N, deg_cap)
                outer, _ = _schur_terms(jp, 1 if left else -1, N, deg_cap)
                for ci, vi in inner:
                    for co, vo in outer:
                        mm = base
                        for (kk, ii), ee in vi:
                            mm = _mult(mm, kk, ii, ee)
                        for (kk, ii), ee in vo:
                            mm = _mult(mm, kk, ii, ee)
                        emit(res, c * S(screen_sign * d[0])
                             * Scalar.from_fraction(ci * co), mm)
    return fn


# ---------------------------------------------------------------------------
# bracket verification

def interior_monomials(N, max_degree=2, zeta_window=2):
    """Monomials with variable indices within N-2 and bounded degree."""
    margin = N - 2
    vars_ = ([(X, i) for i in range(-margin, margin + 1)]
             + [(Y, i) for i in range(-margin, margin + 1)]
             + [(Z, i) for i in range(-margin, margin + 1) if i != 0])
    monos = [((), 0)]
    for v in vars_:
        monos += [(ve + ((v, 1),), d + 1) for ve, d in monos if d < max_degree]
    out = []
    for ve, _ in monos:
        merged = {}
        for v, e in ve:
            merged[v] = merged.get(v, 0) + e
        for zp in range(-zeta_window, zeta_window + 1):
            out.append(pmono(zp, tuple(merged.items())))
    return sorted(set(out))


def certified_region(m, N, deg_cap):
    if pdegree(m) > deg_cap - 2:
        return False
    return all(abs(i) <= N - 2 for (_, i), _ in m[1])


def _restrict(terms, N, deg_cap):
    return {m: c for m, c in terms.items() if certified_region(m, N, deg_cap)}


def loop_bracket_expectations(kap):
    """[pi(x_m), pi(y_n)] data: pi_l has level -kappa, pi_r has +kappa."""
    def pairs(side):
        lvl = -kap if side == "l" else kap

        def c_hh(m, n):
            return [], (2 * m * lvl if m + n == 0 else None)

        def c_ef(m, n):
            return [(1, (side, "h"))], (m * lvl if m + n == 0 else None)

        return [
            ((side, "h"), (side, "e"), lambda m, n: ([(2, (side, "e"))], None)),
            ((side, "h"), (side, "f"), lambda m, n: ([(-2, (side, "f"))], None)),
            ((side, "h"), (side, "h"), c_hh),
            ((side, "e"), (side, "f"), c_ef),
            ((side, "e"), (side, "e"), lambda m, n: ([], None)),
            ((side, "f"), (side, "f"), lambda m, n: ([], None)),
        ]
    mixed = [(("l", g), ("r", g2), lambda m, n: ([], None))
             for g in ("e", "h", "f") for g2 in ("e", "h", "f")]
    return pairs("l") + pairs("r") + mixed


def classical_bracket_expectations():
    def pairs(side):
        return [
            ((side, "h"), (side, "e"), ([(2, (side, "e"))])),
            ((side, "h"), (side, "f"), ([(-2, (side, "f"))])),
            ((side, "e"), (side, "f"), ([(1, (side, "h"))])),
            ((side, "e"), (side, "e"), []),
            ((side, "f"), (side, "f"), []),
            ((side, "h"), (side, "h"), []),
        ]
    mixed = [(("l", g), ("r", g2), []) for g in ("e", "h", "f")
             for g2 in ("e", "h", "f")]
    return pairs("l") + pairs("r") + mixed


def check_classical_brackets(kap=None):
    """Prop-level big-cell action: all brackets, exact (no windows)."""
    ops = build_poly_action("classical", kap)
    monos = interior_monomials(4, max_degree=3, zeta_window=3)
    report = Report()
    for xk, yk, targets in classical_bracket_expectations():
        for m0 in monos:
            a = ops[yk].apply_mono(m0)
            ab = ops[xk].apply(a.terms)
            b = ops[xk].apply_mono(m0)
            ba = ops[yk].apply(b.terms)
            lhs = dict(ab.terms)
            for mm, cc in ba.terms.items():
                old = lhs.get(mm)
                new = -cc if old is None else old - cc
                if new.is_zero():
                    lhs.pop(mm, None)
                else:
                    lhs[mm] = new
            rhs = PolyResult()
            for coeff, key in targets:
                ops[key].fn(m0, S(coeff), rhs)
            report.checked += 1
            if lhs != rhs.terms:
                report.failures.append({"pair": [xk, yk], "mono": str(m0)})
    return report


def check_loop_brackets(kap=None, N=4, deg_cap=8, mode_window=2,
                        max_degree=2):
    """Thm-level loop action: certified-window bracket comparison.

    Both sides are compared after restriction to the certified region, and
    the report records that both sides carried identical certification
    status there (the raw discarded flags are data, not errors).
    """
    if kap is None:
        kap = KAPPA
    ops = build_poly_action("loop", kap, N, deg_cap)
    monos = interior_monomials(N, max_degree=max_degree)
    report = Report()
    for xk, yk, expect in loop_bracket_expectations(kap):
        for m in range(-mode_window, mode_window + 1):
            for n in range(-mode_window, mode_window + 1):
                opx = ops[xk + (m,)]
                opy = ops[yk + (n,)]
                targets, central = expect(m, n)
                for m0 in monos:
                    a = opy.apply_mono(m0)
                    ab = opx.apply(a.terms)
                    b = opx.apply_mono(m0)
                    ba = opy.apply(b.terms)
                    lhs = _restrict(ab.terms, N, deg_cap)
                    for mm, cc in _restrict(ba.terms, N, deg_cap).items():
                        old = lhs.get(mm)
                        new = -cc if old is None else old - cc
                        if new.is_zero():
                            lhs.pop(mm, None)
                        else:
                            lhs[mm] = new
                    rhs = PolyResult()
                    for coeff, key in targets:
                        ops[key + (m + n,)].fn(m0, S(coeff), rhs)
                    rterms = _restrict(rhs.terms, N, deg_cap)
                    if central is not None:
                        old = rterms.get(m0)
                        new = central if old is None else old + central
                        if new.is_zero():
                            rterms.pop(m0, None)
                        else:
                            rterms[m0] = new
                    report.checked += 1
                    if lhs != rterms:
                        report.failures.append({
                            "pair": [list(xk), list(yk)], "m": m, "n": n,
                            "mono": str(m0)})
    return report
