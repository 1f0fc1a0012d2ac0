"""Graded Fock spaces over the lattice group algebra.

States are finite linear combinations of canonically ordered monomials

    X1_{m1}^{e1} X2_{m2}^{e2} ... 1_lam

where every factor is a creation mode of one of the registered generator
families.  A monomial is a pair ``(lam, factors)`` with ``factors`` a tuple
of ``(family, mode, exponent)`` triples sorted by ``(family, -mode)``;
fermionic exponents never exceed 1.  States are plain dicts mapping
monomials to nonzero Scalars, so equality is structural.

The single pairing table below encodes all Heisenberg / Clifford relations:
[beta_m, gamma_n] = delta_{m+n,0},  [a_m, a_n] = 2*kappa*m*delta_{m+n,0},
[abar_m, abar_n] = -2*kappa*m*delta_{m+n,0}, {psi_m, psi*_n} = delta_{m+n,0},
{b_m, c_n} = delta_{m+n,0} and {iota(x_m), eps(x'_n)} = delta_{m,n}<x',x>.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import ring as ring_mod
from .scalar import KAPPA, ONE, S, Scalar

# ---------------------------------------------------------------------------
# family registry (the index order fixes the canonical monomial order)

BETA, GAMMA, BBETA, BGAMMA, A, ABAR = 0, 1, 2, 3, 4, 5
IOTA_E, IOTA_H, IOTA_F, EPS_E, EPS_H, EPS_F = 6, 7, 8, 9, 10, 11
PSI, PSIST, B, C = 12, 13, 14, 15

FAMILY_NAMES = (
    "beta", "gamma", "bbeta", "bgamma", "a", "abar",
    "iota_e", "iota_h", "iota_f", "eps_e", "eps_h", "eps_f",
    "psi", "psi*", "b", "c",
)
FAMILY_INDEX = {name: i for i, name in enumerate(FAMILY_NAMES)}

GHOST_FAMILIES = frozenset(range(IOTA_E, C + 1))
ODD = frozenset(range(IOTA_E, C + 1))  # all ghost families are fermionic

# (wl, wr) carried by one factor; lattice vectors contribute (lam, lam)
WEIGHTS = (
    (-2, 0), (2, 0), (0, -2), (0, 2), (0, 0), (0, 0),
    (1, 1), (0, 0), (-1, -1), (-1, -1), (0, 0), (1, 1),
    (1, 1), (-1, -1), (0, 0), (0, 0),
)

GHOST_NUMBER = (0, 0, 0, 0, 0, 0, -1, -1, -1, 1, 1, 1, -1, 1, -1, 1)

# partner family for contractions, and whether the pairing is at m+n=0
# (True) or at equal mode indices m=n (the iota/eps convention, False)
PARTNER = (
    GAMMA, BETA, BGAMMA, BBETA, A, ABAR,
    EPS_E, EPS_H, EPS_F, IOTA_E, IOTA_H, IOTA_F,
    PSIST, PSI, C, B,
)
_OPPOSITE_MODE = tuple(f not in (IOTA_E, IOTA_H, IOTA_F, EPS_E, EPS_H, EPS_F)
                       for f in range(16))


def mode_degree(fam, mode):
    """Conformal degree of one mode (eps modes grade upward)."""
    return mode if EPS_E <= fam <= EPS_F else -mode


def is_creation(fam, mode):
    if fam == BETA or fam == BBETA or fam == PSIST:
        return mode <= 0
    if fam == C:
        return mode <= 1
    if fam == B:
        return mode <= -2
    if EPS_E <= fam <= EPS_F:
        return mode >= 0
    return mode <= -1


_A_PAIR = {}


def _a_pairing(ring, fam, mode):
    key = (ring.name, fam, mode)
    c = _A_PAIR.get(key)
    if c is None:
        c = ring.kappa_multiple(mode if fam == A else -mode)
        _A_PAIR[key] = c
    return c


# ---------------------------------------------------------------------------
# monomials

def mono(lam, factors=()):
    return (lam, tuple(sorted(factors, key=lambda f: (f[0], -f[1]))))


VACUUM = mono(0)


def mono_key(fam, mode):
    return (fam, -mode)


def apply_creation(fam, mode, m):
    """Multiply a creation mode into a monomial: (sign, monomial) or None."""
    lam, factors = m
    key = (fam, -mode)
    odd = fam in ODD
    sign = 1
    pos = 0
    for i, (f2, m2, e2) in enumerate(factors):
        k2 = (f2, -m2)
        if k2 < key:
            if odd and f2 in ODD:
                sign = -sign
            pos = i + 1
        elif k2 == key:
            if odd:
                return None
            new = factors[:i] + ((f2, m2, e2 + 1),) + factors[i + 1:]
            return sign, (lam, new)
        else:
            break
    new = factors[:pos] + ((fam, mode, 1),) + factors[pos:]
    return sign, (lam, new)


def apply_annihilation(fam, mode, m):
    """Contract an annihilation mode through a monomial.

    Returns a list of (coefficient, monomial) pairs; a_0 and abar_0 pick up
    the lattice eigenvalue lam after passing every factor.
    """
    ring = ring_mod.ACTIVE
    lam, factors = m
    partner = PARTNER[fam]
    target_mode = -mode if _OPPOSITE_MODE[fam] else mode
    heis = fam == A or fam == ABAR
    sign_flip = -1 if (fam == GAMMA or fam == BGAMMA) else 1
    odd = fam in ODD
    out = []
    sign = 1
    for i, (f2, m2, e2) in enumerate(factors):
        if f2 == partner and m2 == target_mode:
            if e2 > 1:
                new = factors[:i] + ((f2, m2, e2 - 1),) + factors[i + 1:]
                c = sign * e2
            else:
                new = factors[:i] + factors[i + 1:]
                c = sign
            if heis:
                coeff = _a_pairing(ring, fam, mode) * ring.of_int(c)
            else:
                coeff = ring.of_int(c * sign_flip)
            out.append((coeff, (lam, new)))
        if odd and f2 in ODD:
            sign = -sign
    if mode == 0 and heis and lam:
        out.append((ring.of_int(lam), m))
    return out


def act_on_mono(fam, mode, m):
    """One generator mode applied to one monomial: list of (coeff, mono)."""
    if is_creation(fam, mode):
        r = apply_creation(fam, mode, m)
        if r is None:
            return []
        sign, new = r
        return [(ring_mod.ACTIVE.of_int(sign), new)]
    return apply_annihilation(fam, mode, m)


def act_mode(op, state):
    """A generator mode (family, mode) applied to a whole State."""
    fam, mode = op
    if isinstance(fam, str):
        fam = FAMILY_INDEX[fam]
    out = {}
    for m, c in state.items():
        for c2, m2 in act_on_mono(fam, mode, m):
            add_term(out, c * c2, m2)
    return out


# ---------------------------------------------------------------------------
# state helpers

def add_term(state, coeff, m):
    old = state.get(m)
    if old is None:
        if coeff.num:
            state[m] = coeff
    else:
        new = old + coeff
        if new.num:
            state[m] = new
        else:
            del state[m]


def state_add(a, b):
    out = dict(a)
    for m, c in b.items():
        add_term(out, c, m)
    return out


def state_sub(a, b):
    out = dict(a)
    for m, c in b.items():
        add_term(out, -c, m)
    return out


def state_scale(c, a):
    if not c.num:
        return {}
    return {m: c * cm for m, cm in a.items()}


def state_of(m, coeff=None):
    return {m: coeff if coeff is not None else ring_mod.ACTIVE.one}


def shift_lattice(m, mu):
    return (m[0] + mu, m[1])


# ---------------------------------------------------------------------------
# gradings

def grading(m):
    """(conformal degree, left weight, right weight, ghost number)."""
    lam, factors = m
    deg = 0
    wl = wr = lam
    gh = 0
    for fam, mode, e in factors:
        deg += mode_degree(fam, mode) * e
        w = WEIGHTS[fam]
        wl += w[0] * e
        wr += w[1] * e
        gh += GHOST_NUMBER[fam] * e
    return deg, wl, wr, gh


def fock_deg(m):
    """Conformal degree of the non-ghost factors only."""
    d = 0
    for fam, mode, e in m[1]:
        if fam not in GHOST_FAMILIES:
            d -= mode * e
    return d


DEG_PRIME_FIELD = {BETA: 1, GAMMA: 0, A: 1, PSI: 0, PSIST: 1}


def deg_prime(m):
    """The modified grading used by the Drinfeld-Sokolov differential."""
    d = 0
    for fam, mode, e in m[1]:
        p = DEG_PRIME_FIELD.get(fam)
        if p is None:
            raise ValueError(f"deg' undefined for family {FAMILY_NAMES[fam]}")
        # bigrading rule deg' X_(n) = p - n - 1 in generic indices
        if fam == BETA or fam == PSIST:
            d += (1 - mode) * e
        elif fam == A:
            d += -mode * e
        else:
            d += (-mode - 1) * e
    return d


# ---------------------------------------------------------------------------
# basis enumeration

@dataclass(frozen=True)
class Truncation:
    """Finite enumeration window: conformal degree, lattice half-width,
    zero-mode exponent cap, poly-model index window, sampling seed."""
    D: int = 2
    lam: int = 2
    B: int = 2
    N: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.D < 0 or self.lam < 0 or self.B < 0 or self.N < 0:
            raise ValueError("truncation bounds must be nonnegative")


@dataclass(frozen=True)
class SpaceSpec:
    """Which generator families make the space, and how the lattice enters."""
    families: tuple
    lattice: bool = True
    fixed_lattice: int | None = None


CLASSICAL = SpaceSpec((BETA, GAMMA, BBETA, BGAMMA))
AFFINE_BIMODULE = SpaceSpec((BETA, GAMMA, BBETA, BGAMMA, A, ABAR))
HEISENBERG_PAIR = SpaceSpec((A, ABAR))
HETEROGENEOUS = SpaceSpec((BETA, GAMMA, A, ABAR))
GHOST_AFFINE = SpaceSpec((IOTA_E, IOTA_H, IOTA_F, EPS_E, EPS_H, EPS_F), lattice=False)
GHOST_PSI = SpaceSpec((PSI, PSIST), lattice=False)
GHOST_BC = SpaceSpec((B, C), lattice=False)


def wakimoto_space(lam):
    return SpaceSpec((BETA, GAMMA, A), fixed_lattice=lam)


def _family_local_monomials(fam, t):
    """All creation-factor lists of one family within the degree window,
    each tagged with its total degree."""
    D = t.D
    if fam in ODD:
        modes = [m for m in range(-(D + 2), D + 3)
                 if is_creation(fam, m) and abs(mode_degree(fam, m)) <= D]
        combos = [((), 0)]
        for m in modes:
            d = mode_degree(fam, m)
            combos += [(c + ((fam, m, 1),), dc + d) for c, dc in combos
                       if -D <= dc + d <= D]
        opts = combos
    else:
        zero_modes = [m for m in (0,) if is_creation(fam, m)]
        pos = [m for m in range(-1, -(D + 1), -1)
               if is_creation(fam, m) and mode_degree(fam, m) <= D]
        stack = [((), 0)]
        for m in pos:
            d = mode_degree(fam, m)
            new = []
            for c, dc in stack:
                e = 0
                while dc + e * d <= D:
                    new.append((c + ((fam, m, e),), dc + e * d) if e else (c, dc))
                    e += 1
            stack = new
        opts = []
        for c, dc in stack:
            for m0 in zero_modes:
                for e in range(1, t.B + 1):
                    opts.append((c + ((fam, m0, e),), dc))
            opts.append((c, dc))
    return [(tuple(f for f in o if f[2] > 0), d) for o, d in opts]


def enumerate_basis(t, spec):
    """Complete, duplicate-free, deterministically ordered monomial list."""
    per_family = [_family_local_monomials(f, t) for f in spec.families]
    # prune the cross-family product by the reachable total degree
    suffix_min = [0] * (len(per_family) + 1)
    suffix_max = [0] * (len(per_family) + 1)
    for i in range(len(per_family) - 1, -1, -1):
        degs = [d for _, d in per_family[i]]
        suffix_min[i] = suffix_min[i + 1] + min(degs)
        suffix_max[i] = suffix_max[i + 1] + max(degs)
    combos = [((), 0)]
    for i, opts in enumerate(per_family):
        new = []
        for c, dc in combos:
            for o, do in opts:
                d = dc + do
                if d + suffix_min[i + 1] <= t.D and d + suffix_max[i + 1] >= -t.D:
                    new.append((c + o, d))
        combos = new
    if spec.fixed_lattice is not None:
        lams = [spec.fixed_lattice]
    elif spec.lattice:
        lams = list(range(-t.lam, t.lam + 1))
    else:
        lams = [0]
    out = []
    for factors, total in combos:
        if total > t.D or total < -t.D:
            continue
        for lam in lams:
            out.append(mono(lam, factors))
    out.sort(key=lambda m: (grading(m)[0], m[0], m[1]))
    return out


# ---------------------------------------------------------------------------
# the co-unit functional

class CounitError(ValueError):
    pass


def counit(state):
    """Sum of the pure-lattice coefficients of a classical-sector state."""
    total = ring_mod.ACTIVE.zero
    for m, c in state.items():
        if grading(m)[0] != 0:
            raise CounitError(f"counit undefined on positive-degree state {m}")
        if not m[1]:
            total = total + c
    return total


# ---------------------------------------------------------------------------
# serialization / formatting

def state_to_json(state):
    items = []
    for m in sorted(state, key=lambda m: (grading(m)[0], m[0], m[1])):
        lam, factors = m
        items.append({
            "lattice": lam,
            "factors": [[FAMILY_NAMES[f], mode, e] for f, mode, e in factors],
            "coeff": state[m].to_string(),
        })
    return json.dumps(items)


def state_from_json(text):
    out = {}
    for item in json.loads(text):
        factors = tuple((FAMILY_INDEX[f], mode, e)
                        for f, mode, e in item["factors"])
        out[mono(item["lattice"], factors)] = Scalar.from_string(item["coeff"])
    return out


def mono_str(m):
    lam, factors = m
    parts = []
    for fam, mode, e in factors:
        s = f"{FAMILY_NAMES[fam]}({mode})"
        if e > 1:
            s += f"^{e}"
        parts.append(s)
    parts.append(f"1_{lam}")
    return " ".join(parts)


def state_str(state):
    if not state:
        return "0"
    terms = []
    for m in sorted(state, key=lambda m: (grading(m)[0], m[0], m[1])):
        terms.append(f"({state[m]}) {mono_str(m)}")
    return " + ".join(terms)
