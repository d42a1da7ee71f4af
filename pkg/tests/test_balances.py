import json

import pytest
import sympy

from dgr.balances import (BalanceError, SERIES, SeriesEvaluator, check_equivariance, initial_locus,
                          initial_point, kovalevskaya_exponents, principal_balance, solve_balance)
from dgr.mechanics import PHASE, dgr_system
from helpers import to_sympy

t = sympy.Symbol("t")
PH = sympy.symbols("q Q p P")
LEAD = (2, 2, 3, 3)


def sympy_field():
    H = to_sympy(dgr_system().H, PHASE)
    q, Q, p, P = PH
    return [sympy.diff(H, p), sympy.diff(H, P), -sympy.diff(H, q), -sympy.diff(H, Q)]


def test_initial_locus_points():
    pts = initial_locus()
    got = {pt.name: tuple(int(v) for v in pt.as_tuple()) for pt in pts}
    assert got == {"I1": (-4, 4, 8, 24), "I2": (-18, -24, 36, -144), "I3": (-2, 0, 4, 0), "origin": (0, 0, 0, 0)}


def test_initial_locus_independent_of_a():
    assert initial_locus(a_symbolic=True) == initial_locus()


def test_indicial_equations_hold_sympy():
    field = sympy_field()
    a = sympy.Symbol("a")
    for pt in initial_locus():
        vals = dict(zip(PH, (int(v) for v in pt.as_tuple())))
        for x0, w, f in zip(PH, LEAD, field):
            # leading order: -w x0 = (weighted-leading part of f)(x0), a drops out
            lead = sympy.expand(f.subs(a, 0)).subs(vals)
            assert -w * vals[x0] == lead


def test_kovalevskaya_exponents_against_sympy():
    field = sympy_field()
    a = sympy.Symbol("a")
    J = sympy.Matrix([[sympy.diff(f.subs(a, 0), v) for v in PH] for f in field])
    for name in ("I1", "I2", "I3"):
        pt = initial_point(name)
        vals = dict(zip(PH, (int(v) for v in pt.as_tuple())))
        K = J.subs(vals) + sympy.diag(*LEAD)
        theirs = sorted(sum(([k] * m for k, m in K.eigenvals().items()), []))
        ours = sorted(int(e) for e in kovalevskaya_exponents(pt))
        assert ours == theirs


def test_exponent_values():
    assert sorted(kovalevskaya_exponents(initial_point("I3"))) == [-1, 1, 4, 6]


def test_non_principal_points_rejected():
    for name in ("I1", "I2"):
        with pytest.raises(BalanceError):
            solve_balance(initial_point(name), order=8)
    with pytest.raises(BalanceError):
        kovalevskaya_exponents(initial_point("origin"))


def test_series_solves_equations_of_motion_sympy():
    N = 10
    b = principal_balance(N, a_symbolic=True)
    series = []
    for x in ("q", "Q", "p", "P"):
        s = b[x]
        series.append(sum(to_sympy(c, SERIES) * t ** pw for pw, c in s.terms()))
    H = to_sympy(dgr_system().H, PHASE)
    subs = dict(zip(PH, series))
    rhs = [sympy.diff(H, PH[2]), sympy.diff(H, PH[3]), -sympy.diff(H, PH[0]), -sympy.diff(H, PH[1])]
    for x, w, f, s in zip(PH, LEAD, rhs, series):
        resid = sympy.expand((sympy.diff(s, t) - f.subs(subs)) * t ** (w + 1))
        poly = sympy.Poly(resid, t)
        # certified through t^(N - w - 1), i.e. t^N after the shift
        for k in range(N + 1):
            assert sympy.expand(poly.coeff_monomial(t ** k)) == 0, (x, k)


def test_truncation_is_consistent():
    high = principal_balance(24, a_symbolic=True)
    for order in (8, 14, 20):
        low = principal_balance(order, a_symbolic=True)
        for x in ("q", "Q", "p", "P"):
            assert high[x].truncate(low[x].top) == low[x]


def test_a_zero_balance_is_specialization():
    sym = principal_balance(16, a_symbolic=True).at_a(0)
    zero = principal_balance(16, a_symbolic=False)
    for x in ("q", "Q", "p", "P"):
        assert sym[x] == zero[x]


def test_sigma_equivariance_all_orders():
    for order in range(1, 25):
        assert check_equivariance(principal_balance(order, a_symbolic=False))


def test_invariants_are_t_free_through_truncation():
    b = principal_balance(24, a_symbolic=True)
    ev = SeriesEvaluator(b)
    S = dgr_system()
    for f in (S.H, S.G):
        s = ev.evaluate(f)
        assert all(c.is_zero() for pw, c in s.terms() if pw != 0)


def test_balance_json():
    d = json.loads(principal_balance(6).to_json())
    assert d["initial_point"]["name"] == "I3"
    assert d["series"]["q"][0] == [-2, "-2"]
