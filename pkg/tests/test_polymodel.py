from freefield.polymodel import (
    PUNIT, X, Y, Z, build_poly_action, check_classical_brackets,
    check_loop_brackets, pmono,
)
from freefield.scalar import S, kappa

K = kappa()


def test_classical_lowering_examples():
    ops = build_poly_action("classical")
    # pi_l(f) 1 = 0 and pi_l(f) y = zeta^-2
    assert ops[("l", "f")].apply_mono(PUNIT).terms == {}
    out = ops[("l", "f")].apply_mono(pmono(0, (((Y, 0), 1),)))
    assert out.terms == {pmono(-2): S(1)}


def test_loop_raising_and_torus_examples():
    ops = build_poly_action("loop", N=4)
    # pi_r(e_n) y_n = 1
    for n in (-2, 0, 1):
        out = ops[("r", "e", n)].apply_mono(pmono(0, (((Y, n), 1),)))
        assert out.terms == {PUNIT: S(1)}
    # pi_l(h_1) 1 = 2 kappa zeta_{-1}
    out = ops[("l", "h", 1)].apply_mono(PUNIT)
    assert out.terms == {pmono(0, (((Z, -1), 1),)): 2 * K}
    assert not out.flag


def test_lowering_always_flags():
    ops = build_poly_action("loop", N=4)
    assert ops[("l", "f", 0)].apply_mono(PUNIT).flag


def test_classical_brackets_exact():
    r = check_classical_brackets()
    assert r.checked > 0
    assert r.ok, r.failures[:3]


def test_loop_brackets_certified_window():
    r = check_loop_brackets(N=4, deg_cap=8, mode_window=2, max_degree=2)
    assert r.checked > 0
    assert r.ok, r.failures[:3]
