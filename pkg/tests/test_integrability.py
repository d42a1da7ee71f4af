import json

import pytest
import sympy

from dgr.filtration import HGA, phi_basis, psi_basis
from dgr.integrability import (critical_value_eliminant, expressibility_phi, expressibility_psi,
                               quadratic_expressibility, wronskians)
from dgr.mechanics import PHASE, dgr_system, poisson_bracket
from helpers import to_sympy

h, g = sympy.symbols("h g")


@pytest.fixture(scope="module")
def system0():
    return dgr_system().at(0)


def reexpand(cert, table, basis, system):
    """Check d(H, G) W = sum c_kl(H, G) b_k b_l in sympy for every feasible pair."""
    Hs, Gs = to_sympy(system.H, PHASE), to_sympy(system.G, PHASE)
    subs = {h: Hs, g: Gs, sympy.Symbol("a"): 0}
    for ij, r in cert.results.items():
        if r is None:
            continue
        den, co = r
        lhs = to_sympy(den, HGA).subs(subs) * to_sympy(table[ij], PHASE)
        rhs = sum(to_sympy(c, HGA).subs(subs) * to_sympy(basis[k] * basis[l], PHASE) for (k, l), c in co.items())
        assert sympy.expand(lhs - rhs) == 0, ij


def test_wronskian_antisymmetry_and_weights(system0):
    basis = phi_basis(False)
    T = wronskians(basis, "H")
    for i in range(6):
        assert not T[i, i]
        for j in range(6):
            assert T[i, j] == -T[j, i]
            if T[i, j]:
                assert T[i, j].weighted_degree() == T.weight(i, j)


def test_first_wronskian_is_flow_of_Q(system0):
    T = wronskians(phi_basis(False), "H")
    assert T[0, 1] == -poisson_bracket(system0.H, PHASE.var("Q"))


def test_phi_failing_pairs_H(system0):
    basis = phi_basis(False)
    table = wronskians(basis, "H")
    cert = quadratic_expressibility(table)
    assert cert.failing_pairs == [(0, 1), (0, 2), (0, 4), (1, 3), (2, 5), (3, 4), (4, 5)]
    assert len(cert.failing_pairs) == 7
    assert set(cert.witnesses) == set(cert.failing_pairs)
    reexpand(cert, table, basis, system0)


def test_phi_failing_pairs_G():
    cert = expressibility_phi("G")
    assert len(cert.failing_pairs) == 7


def test_psi_wronskians_expressible_H(system0):
    basis = psi_basis(False)
    table = wronskians(basis, "H")
    cert = quadratic_expressibility(table)
    assert cert.failing_pairs == []
    assert cert.denominators == ["1", "g"]
    reexpand(cert, table, basis, system0)


def test_psi_wronskians_expressible_G():
    cert = expressibility_psi("G")
    assert cert.failing_pairs == []
    assert cert.denominators == ["1"]
    d = json.loads(cert.to_json())
    assert d["F"] == "G" and d["failing_pairs"] == []


def test_eliminant_a_zero():
    rep = critical_value_eliminant("zero")
    expected = sympy.expand(sympy.Mul(*(f for f, _ in sympy.factor_list(3 * h ** 2 * g + 2 * g ** 2)[1])))
    ours = to_sympy(rep.R, HGA)
    assert sympy.simplify(ours / expected).is_number
    assert rep.all_divide and rep.origin_is_root and rep.weighted_homogeneous
    assert rep.extraneous == HGA.one()
    assert json.loads(rep.to_json())["divides"] == {"3*h^2 + 2*g": True, "g": True}


def test_eliminant_rejects_mode():
    with pytest.raises(ValueError):
        critical_value_eliminant("other")
