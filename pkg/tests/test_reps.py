import pytest

from freefield import fock, reps
from freefield.fock import BETA, BGAMMA, GAMMA, Truncation, mono, state_of
from freefield.reps import (
    build_action, central_charge, contravariance_report,
    feigin_fuks_shift_check, run_suite, wakimoto_deletion_check,
)
from freefield.scalar import S, kappa

K = kappa()


def test_classical_e_action():
    bundle = build_action("classical_bimodule")
    s = state_of(mono(0, [(BETA, 0, 1)]))
    assert bundle.apply("e", 0, s) == {mono(0): S(-1)}


def test_affine_f_shift_term():
    bundle = build_action("affine_bimodule")
    out = bundle.apply("f", -1, state_of(mono(0)))
    k = K - 2
    assert out.get(mono(0, [(BETA, -1, 1)])) == -k
    lattice_shifted = {m: c for m, c in out.items() if m[0] == -2}
    assert lattice_shifted.get(mono(-2, [(BGAMMA, -1, 1)])) == S(1)


def test_central_charges():
    assert central_charge(build_action("sugawara_left").field("L")) == 3 - 6 / K
    assert central_charge(build_action("sugawara_right").field("L")) == 3 + 6 / K
    ff = central_charge(build_action("feigin_fuks").field("L"))
    assert ff == 13 - 6 * K - 6 / K
    k = K - 2
    assert ff == 1 - 6 / (k + 2) - 6 * k
    vb = build_action("virasoro_bimodule")
    assert central_charge(vb.field("Ltot")) == S(26)
    assert central_charge(vb.field("L")) == 13 - 6 * K - 6 / K
    assert central_charge(vb.field("Lbar")) == 13 + 6 * K + 6 / K


def test_heterogeneous_rank_28():
    het = build_action("heterogeneous")
    assert het.constants["rank"] == S(28)
    assert central_charge(het.field("Ltot")) == S(28)


def test_affine_suite_small_window():
    r = run_suite("affine-bimodule", Truncation(D=1, lam=1, B=1), window=(-1, 1))
    assert r.ok, r.failures[:2]
    assert r.checked > 0


def test_classical_suite():
    r = run_suite("classical", Truncation(D=0, lam=2, B=2), window=(0, 0))
    assert r.ok, r.failures[:2]


def test_virasoro_suite_small_window():
    r = run_suite("virasoro-bimodule", Truncation(D=2, lam=1, B=0), window=(-1, 1))
    assert r.ok, r.failures[:2]


def test_heterogeneous_commutes_on_vacuum():
    bundle = build_action("heterogeneous")
    vac = state_of(mono(0))
    for m in range(-2, 3):
        for n in range(-2, 3):
            lhs = fock.state_sub(
                bundle.apply("Ltot", m, bundle.apply("e", n, vac)),
                bundle.apply("e", n, bundle.apply("Ltot", m, vac)))
            rhs = fock.state_scale(S(-(n + m + 1)),
                                   bundle.apply("e", m + n, vac))
            assert lhs == rhs, (m, n)


def test_sugawara_primary_currents():
    bundle = build_action("sugawara_left")
    basis = fock.enumerate_basis(Truncation(D=1, lam=1, B=1),
                                 fock.AFFINE_BIMODULE)
    for b in basis:
        s = state_of(b)
        for m in range(-1, 2):
            for n in range(-1, 2):
                lhs = fock.state_sub(
                    bundle.apply("L", m, bundle.apply("e", n, s)),
                    bundle.apply("e", n, bundle.apply("L", m, s)))
                rhs = fock.state_scale(S(-n), bundle.apply("e", m + n, s))
                assert lhs == rhs, (b, m, n)


def test_wakimoto_is_affine_without_vertex():
    assert wakimoto_deletion_check()


def test_feigin_fuks_shift():
    assert feigin_fuks_shift_check()


def test_contravariance():
    r = contravariance_report(Truncation(D=0, lam=3, B=3))
    assert r.ok, r.failures[:3]


def test_unknown_bundle():
    with pytest.raises(ValueError):
        build_action("nope")


def test_kappa_zero_rejected():
    with pytest.raises(ValueError):
        build_action("affine_bimodule", S(0))
