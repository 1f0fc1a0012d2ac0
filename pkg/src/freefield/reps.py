"""Constructors for every named free-field representation.

Each bundle packages the generating quantum fields as FieldExprs together
with its declared levels / central charges.  The bracket suites re-verify
the declared commutation relations exactly, state by state, over Q(kappa);
nothing here trusts the construction it checks.
"""

from __future__ import annotations

import multiprocessing

from . import fock
from . import ring as ring_mod
from .fields import (
    Compiled, Dz, Gen, NP, Vertex, fsum, np_left, smul,
)
from .fock import (
    A, ABAR, BBETA, BETA, BGAMMA, GAMMA,
    SpaceSpec, Truncation, counit, enumerate_basis, state_of,
)
from .fields import Report
from .ring import FAST_RING, SCALAR_RING, ring_context
from .scalar import KAPPA, ONE, S, Scalar

H_CHECK = 2  # dual Coxeter number of sl2

_B, _G, _BB, _BG, _A, _AB = Gen(BETA), Gen(GAMMA), Gen(BBETA), Gen(BGAMMA), Gen(A), Gen(ABAR)


def _currents(kap):
    """The two commuting affine sl2 actions on the big-cell Fock space."""
    k = kap - H_CHECK
    kbar = -kap - H_CHECK
    e = _G
    h = fsum(smul(2, NP(_B, _G)), _A)
    f = fsum(smul(-1, np_left(_B, _B, _G)),
             smul(-1, NP(_B, _A)),
             smul(-k, Dz(_B)),
             NP(Vertex(-2), _BG))
    ebar = _BG
    hbar = fsum(smul(2, NP(_BB, _BG)), _AB)
    fbar = fsum(smul(-1, np_left(_BB, _BB, _BG)),
                smul(-1, NP(_BB, _AB)),
                smul(-kbar, Dz(_BB)),
                NP(Vertex(-2), _G))
    return e, h, f, ebar, hbar, fbar


def _wakimoto_f(kap):
    k = kap - H_CHECK
    return fsum(smul(-1, np_left(_B, _B, _G)),
                smul(-1, NP(_B, _A)),
                smul(-k, Dz(_B)))


def _sugawara(e, h, f, level_plus_hcheck):
    return smul(ONE / (2 * level_plus_hcheck),
                fsum(smul(Scalar((1,), (2,)), NP(h, h)), NP(e, f), NP(f, e)))


def _feigin_fuks(kap, barred=False):
    a = _AB if barred else _A
    if barred:
        return fsum(smul(-1 / (4 * kap), NP(a, a)),
                    smul((kap + 1) / (2 * kap), Dz(a)))
    return fsum(smul(1 / (4 * kap), NP(a, a)),
                smul((kap - 1) / (2 * kap), Dz(a)))


class ActionBundle:
    """A named family of generating fields with declared constants."""

    def __init__(self, name, kap, exprs, constants, space):
        self.name = name
        self.kappa = kap
        self.exprs = exprs
        self.constants = constants
        self.space = space
        registry = {}
        self.compiled = {key: Compiled(x, registry) for key, x in exprs.items()}

    def field(self, key):
        return self.compiled[key]

    def apply(self, key, mode, state):
        """Apply a field in its own mode convention (currents at deg 1,
        Virasoro fields at deg 2)."""
        generic = mode + 1 if key.startswith("L") else mode
        return self.compiled[key].mode(generic, state)

    def clear_caches(self):
        seen = set()
        for c in self.compiled.values():
            _clear_tree(c, seen)

    def describe(self):
        from .fields import expr_to_json
        import json
        return {
            "name": self.name,
            "constants": {k: v.to_string() for k, v in self.constants.items()},
            "fields": {k: json.loads(expr_to_json(x)) for k, x in self.exprs.items()},
        }


def _clear_tree(c, seen):
    if id(c) in seen:
        return
    seen.add(id(c))
    c.cache.clear()


BUNDLE_NAMES = (
    "classical_bimodule", "affine_bimodule", "wakimoto",
    "sugawara_left", "sugawara_right", "feigin_fuks",
    "virasoro_bimodule", "heterogeneous",
)


def build_action(name, kap=None, lam=0):
    """Build a named ActionBundle; kap defaults to the symbolic parameter."""
    if kap is None:
        kap = KAPPA
    if kap.is_zero():
        raise ValueError("kappa must be nonzero")
    k = kap - H_CHECK
    kbar = -kap - H_CHECK
    e, h, f, ebar, hbar, fbar = _currents(kap)

    if name == "classical_bimodule":
        exprs = dict(e=e, h=h, f=f, ebar=ebar, hbar=hbar, fbar=fbar)
        return ActionBundle(name, kap, exprs, {}, fock.CLASSICAL)

    if name == "affine_bimodule":
        exprs = dict(e=e, h=h, f=f, ebar=ebar, hbar=hbar, fbar=fbar)
        consts = {"k": k, "kbar": kbar, "diagonal_level": k + kbar}
        return ActionBundle(name, kap, exprs, consts, fock.AFFINE_BIMODULE)

    if name == "wakimoto":
        exprs = dict(e=e, h=h, f=_wakimoto_f(kap))
        return ActionBundle(name, kap, exprs, {"k": k},
                            fock.wakimoto_space(lam))

    if name == "sugawara_left":
        L = _sugawara(e, h, f, kap)
        return ActionBundle(name, kap, dict(L=L, e=e, h=h, f=f),
                            {"c": 3 - 6 / kap}, fock.AFFINE_BIMODULE)

    if name == "sugawara_right":
        L = _sugawara(ebar, hbar, fbar, -kap)
        return ActionBundle(name, kap, dict(L=L, e=ebar, h=hbar, f=fbar),
                            {"c": 3 + 6 / kap}, fock.AFFINE_BIMODULE)

    if name == "feigin_fuks":
        LF = _feigin_fuks(kap)
        c = 13 - 6 * kap - 6 / kap
        return ActionBundle(name, kap, dict(L=LF), {"c": c},
                            SpaceSpec((A,), fixed_lattice=lam))

    if name == "virasoro_bimodule":
        LF = _feigin_fuks(kap)
        LFbar = _feigin_fuks(kap, barred=True)
        L = fsum(LF, smul(-1 / kap, Vertex(-2)))
        Lbar = fsum(LFbar, smul(1 / kap, Vertex(-2)))
        Ltot = fsum(LF, LFbar)  # the vertex terms cancel in L + Lbar
        c = 13 - 6 * kap - 6 / kap
        cbar = 13 + 6 * kap + 6 / kap
        consts = {"c": c, "cbar": cbar, "total": c + cbar}
        return ActionBundle(name, kap, dict(L=L, Lbar=Lbar, Ltot=Ltot),
                            consts, fock.HEISENBERG_PAIR)

    if name == "heterogeneous":
        fh = fsum(smul(-1, np_left(_B, _B, _G)),
                  smul(-1, NP(_B, _A)),
                  smul(-k, Dz(_B)),
                  smul(-1, Vertex(-2)))
        Lbar = fsum(_feigin_fuks(kap, barred=True),
                    smul(1 / kap, NP(Vertex(-2), _G)))
        Ltot = fsum(_sugawara(e, h, fh, kap),
                    smul(Scalar((1,), (2,)), Dz(h)),
                    Lbar)
        cbar = 13 + 6 * kap + 6 / kap
        rank = (3 * k) / kap - 6 * k + cbar
        consts = {"k": k, "cbar": cbar, "rank": rank}
        return ActionBundle(name, kap, dict(e=e, h=h, f=fh, Lbar=Lbar, Ltot=Ltot),
                            consts, fock.HETEROGENEOUS)

    raise ValueError(f"unknown action bundle {name!r}")


# ---------------------------------------------------------------------------
# central charge extraction

class VirasoroProbeError(ValueError):
    pass


def central_charge(L, vacuum_lattice=0):
    """Extract c from [L_2, L_-2] - 4 L_0 on the vacuum; checks [L_1, L_-1]."""
    with ring_context(SCALAR_RING):
        cl = Compiled(L.expr if isinstance(L, Compiled) else L)

        def vm(m, s):
            return cl.mode(m + 1, s)

        vac = state_of(fock.mono(vacuum_lattice))
        lhs = vm(1, vm(-1, vac))
        rhs = fock.state_scale(S(2), vm(0, vac))
        if lhs != rhs:
            raise VirasoroProbeError("[L_1, L_-1] != 2 L_0 on the vacuum")
        probe = fock.state_sub(vm(2, vm(-2, vac)),
                               fock.state_scale(S(4), vm(0, vac)))
        coeff = probe.get(fock.mono(vacuum_lattice), S(0))
        rest = dict(probe)
        rest.pop(fock.mono(vacuum_lattice), None)
        if rest:
            raise VirasoroProbeError(
                f"([L_2, L_-2] - 4 L_0) vacuum probe is not scalar: "
                f"{fock.state_str(rest)}")
        return 2 * coeff


# ---------------------------------------------------------------------------
# bracket suites

def _zero(m, n):
    return [], None


def _aff_pairs(kap, barred):
    k = (-kap if barred else kap) - H_CHECK
    p = "bar" if barred else ""

    def c_hh(m, n):
        return [], (2 * m * k if m + n == 0 else None)

    def c_ef(m, n):
        return [(1, "h" + p)], (m * k if m + n == 0 else None)

    return [
        ("h" + p, "e" + p, lambda m, n: ([(2, "e" + p)], None)),
        ("h" + p, "f" + p, lambda m, n: ([(-2, "f" + p)], None)),
        ("h" + p, "h" + p, c_hh),
        ("e" + p, "f" + p, c_ef),
        ("e" + p, "e" + p, _zero),
        ("f" + p, "f" + p, _zero),
    ]


def _mixed_pairs():
    out = []
    for x in ("e", "h", "f"):
        for y in ("ebar", "hbar", "fbar"):
            out.append((x, y, _zero))
    return out


def _vir_self(key, c):
    def expect(m, n):
        coeffs = [(m - n, key)] if m != n else []
        central = (S(m ** 3 - m) / 12 * c) if m + n == 0 else None
        return coeffs, central
    return expect


def _het_pairs(k, rank):
    # [L_m, x_n] for the semidirect product Vir \ltimes n_+ built from the
    # h'(z)/2-shifted Sugawara field; the h-bracket picks up the twisted
    # level anomaly -m(m+1) k delta_{m+n,0}.
    def l_e(m, n):
        return [(-(n + m + 1), "e")], None

    def l_f(m, n):
        return [(m - n + 1, "f")], None

    def l_h(m, n):
        return [(-n, "h")], (-m * (m + 1) * k if m + n == 0 else None)

    return [
        ("Ltot", "e", l_e),
        ("Ltot", "f", l_f),
        ("Ltot", "h", l_h),
        ("Ltot", "Ltot", _vir_self("Ltot", rank)),
    ]


def suite_spec(kind):
    """(bundle name, pairs, default space) for one verification suite."""
    kap = KAPPA
    k = kap - H_CHECK
    if kind == "affine-bimodule":
        pairs = (_aff_pairs(kap, False) + _aff_pairs(kap, True) + _mixed_pairs())
        return "affine_bimodule", pairs
    if kind == "wakimoto":
        return "wakimoto", _aff_pairs(kap, False)
    if kind == "classical":
        pairs = (_aff_pairs(kap, False) + _aff_pairs(kap, True) + _mixed_pairs())
        return "classical_bimodule", pairs
    if kind == "virasoro-bimodule":
        c = 13 - 6 * kap - 6 / kap
        cbar = 13 + 6 * kap + 6 / kap
        pairs = [
            ("L", "Lbar", _zero),
            ("L", "L", _vir_self("L", c)),
            ("Lbar", "Lbar", _vir_self("Lbar", cbar)),
            ("Ltot", "Ltot", _vir_self("Ltot", S(26))),
        ]
        return "virasoro_bimodule", pairs
    if kind == "heterogeneous":
        pairs = _aff_pairs(kap, False) + _het_pairs(k, S(28))
        return "heterogeneous", pairs
    raise ValueError(f"unknown suite {kind!r}")


def _is_vir(key):
    return key.startswith("L")


def check_bracket(bundle, xkey, ykey, expect, m, n, state, base_mono, ring):
    cx, cy = bundle.compiled[xkey], bundle.compiled[ykey]
    gx = m + 1 if _is_vir(xkey) else m
    gy = n + 1 if _is_vir(ykey) else n
    lhs = {}
    cx.accumulate(gx, cy.mode(gy, state), lhs, False)
    cy.accumulate(gy, cx.mode(gx, state), lhs, True)
    coeffs, central = expect(m, n)
    rhs = {}
    for c, key in coeffs:
        if c == 0:
            continue
        g = m + n + 1 if _is_vir(key) else m + n
        rc = ring.of_int(c)
        for m2, c2 in bundle.compiled[key].mode(g, state).items():
            fock.add_term(rhs, rc * c2, m2)
    if central is not None:
        fock.add_term(rhs,
                      ring.from_scalar(central) if isinstance(central, Scalar)
                      else ring.of_int(central),
                      base_mono)
    return lhs == rhs, lhs, rhs


def run_suite_slice(kind, trunc, window, lams, backend="fast"):
    """Verify one suite on the lattice sectors in lams (fresh caches)."""
    bundle_name, pairs = suite_spec(kind)
    report = Report()
    lo, hi = window
    ring = FAST_RING if backend == "fast" else SCALAR_RING
    with ring_context(ring):
        for lam in lams:
            bundle = build_action(bundle_name)
            space = bundle.space
            t = Truncation(D=trunc.D, lam=trunc.lam, B=trunc.B, N=trunc.N,
                           seed=trunc.seed)
            sector = SpaceSpec(space.families, fixed_lattice=lam)
            basis = enumerate_basis(t, sector)
            for xkey, ykey, expect in pairs:
                same = xkey == ykey
                for b in basis:
                    s = state_of(b)
                    for n in range(lo, hi + 1):
                        # [X_m, X_n] is antisymmetric in (m, n) as computed,
                        # so m < n covers the same-field families
                        for m in range(lo, n if same else hi + 1):
                            ok, lhs, rhs = check_bracket(
                                bundle, xkey, ykey, expect, m, n, s, b, ring)
                            report.checked += 1
                            if not ok:
                                report.failures.append({
                                    "pair": [xkey, ykey], "m": m, "n": n,
                                    "state": fock.mono_str(b),
                                    "lhs": fock.state_str(lhs),
                                    "rhs": fock.state_str(rhs),
                                })
            bundle.clear_caches()
    return report


def _slice_worker(args):
    kind, tdict, window, lams, backend = args
    return run_suite_slice(kind, Truncation(**tdict), window, lams, backend)


def run_suite(kind, trunc, window=(-3, 3), jobs=1, backend="fast"):
    """Run a full bracket suite over all lattice sectors in the truncation."""
    bundle_name, _ = suite_spec(kind)
    space = build_action(bundle_name).space
    if space.fixed_lattice is not None:
        lams = [space.fixed_lattice]
    elif space.lattice:
        lams = list(range(-trunc.lam, trunc.lam + 1))
    else:
        lams = [0]
    tdict = dict(D=trunc.D, lam=trunc.lam, B=trunc.B, N=trunc.N, seed=trunc.seed)
    report = Report()
    if jobs > 1 and len(lams) > 1:
        tasks = [(kind, tdict, window, [lam], backend) for lam in lams]
        with multiprocessing.Pool(min(jobs, len(tasks))) as pool:
            for r in pool.imap_unordered(_slice_worker, tasks):
                report.merge(r)
    else:
        report.merge(run_suite_slice(kind, trunc, window, lams, backend))
    return report


# ---------------------------------------------------------------------------
# structural identities

def wakimoto_deletion_check(kap=None):
    """The Wakimoto currents are the affine left currents without the
    lattice vertex term; asserted structurally on the expression trees."""
    kap = kap or KAPPA
    aff = build_action("affine_bimodule", kap)
    wak = build_action("wakimoto", kap)
    f_aff, f_wak = aff.exprs["f"], wak.exprs["f"]
    return (f_aff.terms[:-1] == f_wak.terms
            and f_aff.terms[-1] == NP(Vertex(-2), _BG)
            and aff.exprs["e"] == wak.exprs["e"]
            and aff.exprs["h"] == wak.exprs["h"])


def feigin_fuks_shift_check(kap=None):
    """virasoro_bimodule L differs from the Feigin-Fuks field by the
    vertex term with coefficient -1/kappa."""
    kap = kap or KAPPA
    vb = build_action("virasoro_bimodule", kap)
    ff = build_action("feigin_fuks", kap)
    L = vb.exprs["L"]
    return (L.terms[:-1] == ff.exprs["L"].terms
            and L.terms[-1] == smul(-1 / kap, Vertex(-2)))


# ---------------------------------------------------------------------------
# the classical co-unit contravariance

def contravariance_report(trunc):
    """<e v> = <fbar v>, <h v> = <hbar v>, <f v> = <ebar v> on the classical
    sector (the co-unit intertwines the two actions through e <-> f)."""
    bundle = build_action("classical_bimodule")
    basis = enumerate_basis(Truncation(D=0, lam=trunc.lam, B=trunc.B),
                            fock.CLASSICAL)
    report = Report()
    for left, right in (("e", "fbar"), ("h", "hbar"), ("f", "ebar")):
        for b in basis:
            s = state_of(b)
            lv = counit(bundle.apply(left, 0, s))
            rv = counit(bundle.apply(right, 0, s))
            report.checked += 1
            if lv != rv:
                report.failures.append({
                    "pair": [left, right], "state": fock.mono_str(b),
                    "lhs": str(lv), "rhs": str(rv),
                })
    return report
