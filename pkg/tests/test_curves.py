import json
import random
from fractions import Fraction

import pytest
import sympy

from dgr.algebra import PolyRing, RationalFunction, qq
from dgr.balances import principal_balance
from dgr.curves import (CURVE, FAMILY, STRATA, CurveError, Stratum, cyclic_cover_data, elliptic_quotient,
                        general_family, genus_simple_ramification, j_from_cross_ratio, j_invariant_quartic,
                        painleve_plane_model, ramification_sextic_a, resultant_xy)
from dgr.filtration import reference_targets
from helpers import to_sympy

al, be, ga, de, ep, ze, x, y = sympy.symbols("al be ga de ep ze x y")
SYM_FAMILY = (y + al * x ** 4) * (y + be * x ** 4) * (y + ga * x ** 4) + de * x ** 2 * y + ep * x ** 6 + ze


def sympy_resultant(F):
    return sympy.Poly(sympy.resultant(F, sympy.diff(F, y), y), x)


def test_family_resultant_matches_sympy():
    ours = to_sympy(resultant_xy(general_family().poly), FAMILY)
    assert sympy.expand(ours - sympy_resultant(SYM_FAMILY).as_expr()) == 0


def test_leading_resultant_coefficients_sympy():
    R = sympy_resultant(SYM_FAMILY)
    # true Sylvester sign: minus the squared Vandermonde of the leading roots
    assert sympy.expand(R.coeff_monomial(x ** 24) + (al - be) ** 2 * (be - ga) ** 2 * (ga - al) ** 2) == 0
    R2 = sympy_resultant(SYM_FAMILY.subs(ga, be))
    assert sympy.expand(R2.coeff_monomial(x ** 18) + 4 * (al - be) ** 3 * (de * be - ep)) == 0


def test_stratum_iii_quadratic_sympy():
    F = SYM_FAMILY.subs({ga: be, ep: be * de})
    R = sympy_resultant(F)
    A = (al - be) ** 2 * (4 * ze * (al - be) - de ** 2)
    B = 2 * de * (2 * de ** 2 - 9 * ze * (al - be))
    C = 27 * ze ** 2
    assert sympy.expand(R.as_expr() - (A * x ** 12 + B * x ** 6 + C)) == 0
    assert sympy.expand(B ** 2 - 4 * A * C - 16 * (de ** 2 - 3 * ze * (al - be)) ** 3) == 0
    ours = to_sympy(resultant_xy(STRATA["beta=gamma,eps=beta*delta"].apply(general_family()).poly), FAMILY)
    assert sympy.expand(ours - R.as_expr()) == 0


def test_genus_ladder_on_strata():
    family = general_family()
    for name, want in reference_targets()["genus"].items():
        cert = genus_simple_ramification(family, name)
        assert cert.genus == want, name
        assert json.loads(json.dumps(cert.to_dict()))["genus"] == want


def test_genus_independent_of_seed():
    family = general_family()
    for seed in range(3):
        assert genus_simple_ramification(family, "generic", seed=seed).genus == 10
        assert genus_simple_ramification(family, "beta=gamma,eps=beta*delta", seed=seed).genus == 4


def test_genus_matches_cyclic_cover_random():
    # on stratum (iii) the curve is a sextic cyclic cover of a line; both counts agree
    rng = random.Random(5)
    family = general_family()
    count = 0
    while count < 10:
        vals = {n: rng.choice([-1, 1]) * rng.randint(1, 9) for n in ("al", "be", "de", "ze")}
        a_, b_, d_, z_ = vals["al"], vals["be"], vals["de"], vals["ze"]
        if a_ == b_ or d_ * d_ in (3 * z_ * (a_ - b_), 4 * z_ * (a_ - b_)):
            continue
        st = Stratum("pt", {"ga": "be", "ep": "be*de", **{k: str(v) for k, v in vals.items()}})
        assert genus_simple_ramification(family, st).genus == 4
        count += 1
    rng = random.Random(6)
    for _ in range(100):
        zh, dh, eh = (rng.choice([-1, 1]) * rng.randint(1, 30) for _ in range(3))
        if dh * dh == 4 * zh * eh:
            continue
        data = cyclic_cover_data(zh, dh, eh)
        assert (data["genus"], data["euler_characteristic"]) == (4, -6)


def test_painleve_model_a_zero():
    C = painleve_plane_model(principal_balance(16, a_symbolic=False))
    targets = reference_targets()
    assert C.poly == CURVE(targets["plane_model"]).subs({"a": 0})
    assert {k: str(v) for k, v in C.coordinates.items()} == {k: str(CURVE(v)) for k, v in targets["readoff"].items()}
    assert C.is_sigma_invariant()


def test_painleve_model_symbolic():
    C = painleve_plane_model(principal_balance(16, a_symbolic=True))
    assert C.poly == CURVE(reference_targets()["plane_model"])
    assert C.poly.is_weighted_homogeneous() and C.poly.weighted_degree() == 12


def test_painleve_divisor_genus_a_zero():
    C = painleve_plane_model(principal_balance(16, a_symbolic=False))
    assert genus_simple_ramification(C, Stratum("fibre", nonzero=("g", "3*h^2 + 2*g"))).genus == 4
    assert genus_simple_ramification(C, Stratum("s", {"g": "-3/2*h^2"}, nonzero=("h",))).genus == 1
    assert genus_simple_ramification(C, Stratum("z", {"g": "0"}, nonzero=("h",), factor="y - x^4")).genus == 2


def test_ramification_sextic_matches_resultant_sympy():
    C = painleve_plane_model(principal_balance(16, a_symbolic=True))
    sextic = ramification_sextic_a(C)
    F = to_sympy(C.poly, CURVE)
    R = sympy.expand(sympy.resultant(F, sympy.diff(F, y), y))
    z = sympy.Symbol("z")
    ours = to_sympy(sextic, sextic.ring).subs(z, x ** 2)
    ratio = sympy.cancel(R / ours)
    assert ratio.is_number and ratio != 0
    assert sextic.primitive() == sextic.ring(reference_targets()["ramification_sextic"]).primitive()


def test_j_family_and_fibre():
    targets = reference_targets()
    E2f = elliptic_quotient(STRATA["beta=gamma,eps=beta*delta"].apply(general_family()))
    ring = E2f.j.ring
    assert E2f.j == RationalFunction(ring(targets["j_E2_family"]["num"]), ring(targets["j_E2_family"]["den"]))
    E2 = elliptic_quotient(painleve_plane_model(principal_balance(16, a_symbolic=False)))
    ring = E2.j.ring
    assert E2.j == RationalFunction(ring(targets["j_E2"]["num"]), ring(targets["j_E2"]["den"]))


def test_j_deformed():
    t = reference_targets()
    E = elliptic_quotient(painleve_plane_model(principal_balance(16, a_symbolic=True)))
    ring = E.j.ring
    assert E.j == RationalFunction(ring(t["j_E"]["num"]), ring(t["j_E"]["den"]))
    assert E.plane_model.primitive() == E.plane_model.ring(t["tau_quotient"]).primitive()


def test_j_from_cross_ratio_random():
    rng = random.Random(7)
    X = PolyRing(("X", "Y"))
    count = 0
    while count < 100:
        lam = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        if lam in (0, 1):
            continue
        # roots 0, 1, lam, infinity
        f = X(f"X*Y*(X - Y)*(X - {lam}*Y)")
        assert qq(j_invariant_quartic(f)) == qq(j_from_cross_ratio(lam))
        count += 1


def test_j_special_values():
    X = PolyRing(("X", "Y"))
    assert j_invariant_quartic(X("X^4 - Y^4")) == 1728
    assert j_invariant_quartic(X("X*(X^3 - Y^3)")) == 0
    with pytest.raises(CurveError):
        j_invariant_quartic(X("X^2*(X^2 - Y^2)"))


def test_plane_model_json():
    C = painleve_plane_model(principal_balance(16, a_symbolic=False))
    d = json.loads(C.to_json())
    assert CURVE(d["curve"]) == C.poly
