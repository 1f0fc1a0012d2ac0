import random

import pytest

from freefield import fock
from freefield.fock import (
    A, ABAR, B, BBETA, BETA, BGAMMA, C, GAMMA, EPS_E, EPS_F, EPS_H,
    IOTA_E, IOTA_F, IOTA_H, PSI, PSIST,
    CounitError, SpaceSpec, Truncation,
    act_mode, counit, enumerate_basis, grading, mono, state_of,
    state_from_json, state_sub, state_to_json,
)
from freefield.scalar import S, kappa

K = kappa()


def test_gamma_contraction():
    s = state_of(mono(0, [(BETA, -1, 1)]))
    assert act_mode((GAMMA, 1), s) == {mono(0): S(-1)}


def test_a0_eigenvalue():
    for lam in (-3, 0, 5):
        s = state_of(mono(lam))
        expected = {} if lam == 0 else {mono(lam): S(lam)}
        assert act_mode((A, 0), s) == expected
        assert act_mode((ABAR, 0), s) == expected


def test_psi_contraction():
    s = state_of(mono(0, [(PSI, -1, 1)]))
    assert act_mode((PSIST, 1), s) == {mono(0): S(1)}


def test_fermionic_sign_walk():
    # psi*_2 psi_{-1} psi_{-2} |0> = -psi_{-1} |0>
    s = state_of(mono(0, [(PSI, -1, 1), (PSI, -2, 1)]))
    out = act_mode((PSIST, 2), s)
    assert out == {mono(0, [(PSI, -1, 1)]): S(-1)}


def test_grading_examples():
    # honest h_0-eigenvalues: a beta factor lowers the left weight by 2
    assert grading(mono(3, [(BETA, -2, 1)])) == (2, 1, 3, 0)
    assert grading(mono(0, [(IOTA_E, -1, 1), (EPS_F, 0, 1)])) == (1, 2, 2, 0)
    assert grading(mono(0)) == (0, 0, 0, 0)


def test_enumerate_classical_window():
    basis = enumerate_basis(Truncation(D=0, lam=1, B=1), fock.CLASSICAL)
    assert len(basis) == 12
    assert len(set(basis)) == 12
    for m in basis:
        assert grading(m)[0] == 0


def test_enumerate_heisenberg():
    basis = enumerate_basis(Truncation(D=1, lam=0, B=0), SpaceSpec((A,)))
    assert basis == [mono(0), mono(0, [(A, -1, 1)])]
    assert enumerate_basis(Truncation(D=0, lam=0, B=0), fock.AFFINE_BIMODULE) == [mono(0)]


def test_enumerate_deterministic():
    t = Truncation(D=2, lam=1, B=1)
    assert enumerate_basis(t, fock.AFFINE_BIMODULE) == enumerate_basis(t, fock.AFFINE_BIMODULE)


def test_counit():
    assert counit(state_of(mono(5))) == S(1)
    assert counit(state_of(mono(2, [(BETA, 0, 1)]))) == S(0)
    s = {mono(0): S(3), mono(1, [(BETA, 0, 1), (BBETA, 0, 1)]): S(1)}
    assert counit(s) == S(3)
    with pytest.raises(CounitError):
        counit(state_of(mono(0, [(A, -1, 1)])))


PAIRS = [
    # (X, Y, central(m, n), fermionic)
    (BETA, GAMMA, lambda m, n: S(1) if m + n == 0 else S(0), False),
    (BBETA, BGAMMA, lambda m, n: S(1) if m + n == 0 else S(0), False),
    (A, A, lambda m, n: 2 * m * K if m + n == 0 else S(0), False),
    (ABAR, ABAR, lambda m, n: -2 * m * K if m + n == 0 else S(0), False),
    (PSI, PSIST, lambda m, n: S(1) if m + n == 0 else S(0), True),
    (B, C, lambda m, n: S(1) if m + n == 0 else S(0), True),
    (IOTA_E, EPS_E, lambda m, n: S(1) if m == n else S(0), True),
    (IOTA_H, EPS_H, lambda m, n: S(1) if m == n else S(0), True),
    (IOTA_F, EPS_F, lambda m, n: S(1) if m == n else S(0), True),
    # a few brackets that must vanish identically
    (BETA, BETA, lambda m, n: S(0), False),
    (GAMMA, GAMMA, lambda m, n: S(0), False),
    (A, ABAR, lambda m, n: S(0), False),
    (BETA, BGAMMA, lambda m, n: S(0), False),
    (PSI, PSI, lambda m, n: S(0), True),
    (IOTA_E, EPS_H, lambda m, n: S(0), True),
    (PSIST, B, lambda m, n: S(0), True),
]

ALL_FAMILIES = SpaceSpec(tuple(range(16)))


def _pair_space(X, Y):
    fams = {X, Y, fock.PARTNER[X], fock.PARTNER[Y], BETA, GAMMA, PSI, PSIST}
    return SpaceSpec(tuple(sorted(fams)))


def test_heisenberg_clifford_relations():
    rng = random.Random(11)
    for X, Y, central, fermionic in PAIRS:
        basis = enumerate_basis(Truncation(D=2, lam=2, B=2), _pair_space(X, Y))
        states = [state_of(rng.choice(basis)) for _ in range(50)]
        for m in range(-2, 3):
            for n in range(-2, 3):
                c = central(m, n)
                for s in states:
                    xy = act_mode((X, m), act_mode((Y, n), s))
                    yx = act_mode((Y, n), act_mode((X, m), s))
                    bracket = (fock.state_add(xy, yx) if fermionic
                               else state_sub(xy, yx))
                    expected = fock.state_scale(c, s)
                    assert bracket == expected, (X, Y, m, n, s)


def test_grading_additivity():
    basis = enumerate_basis(Truncation(D=2, lam=2, B=2), ALL_FAMILIES)
    rng = random.Random(3)
    ops = [(fam, m) for fam in range(16) for m in range(-2, 3)]
    for _ in range(300):
        m0 = rng.choice(basis)
        fam, mode = rng.choice(ops)
        out = act_mode((fam, mode), state_of(m0))
        d0, wl0, wr0, g0 = grading(m0)
        dd = fock.mode_degree(fam, mode)
        dwl, dwr = fock.WEIGHTS[fam]
        dg = fock.GHOST_NUMBER[fam]
        for m1 in out:
            assert grading(m1) == (d0 + dd, wl0 + dwl, wr0 + dwr, g0 + dg)


def test_fermionic_nilpotence():
    basis = enumerate_basis(Truncation(D=2, lam=1, B=1), ALL_FAMILIES)
    rng = random.Random(5)
    for _ in range(200):
        m0 = rng.choice(basis)
        fam = rng.choice(sorted(fock.ODD))
        mode = rng.randint(-2, 2)
        once = act_mode((fam, mode), state_of(m0))
        assert act_mode((fam, mode), once) == {}


def test_state_serialization_roundtrip():
    basis = enumerate_basis(Truncation(D=2, lam=2, B=2), ALL_FAMILIES)
    rng = random.Random(9)
    state = {}
    for _ in range(5):
        fock.add_term(state, 7 - 3 * K, rng.choice(basis))
        fock.add_term(state, 1 / (2 * K), rng.choice(basis))
    text = state_to_json(state)
    assert state_from_json(text) == state
    assert state_to_json(state_from_json(text)) == text


def test_deg_prime_table():
    # deg' beta_{-n} = n + 1, deg' gamma_{-n} = n - 1, deg' a_{-n} = n,
    # deg' psi_{-n} = n - 1, deg' psi*_{-n} = n + 1
    assert fock.deg_prime(mono(0, [(BETA, -1, 1)])) == 2
    assert fock.deg_prime(mono(0, [(GAMMA, -1, 1)])) == 0
    assert fock.deg_prime(mono(0, [(A, -2, 1)])) == 2
    assert fock.deg_prime(mono(0, [(PSI, -1, 1), (PSIST, 0, 1)])) == 1
