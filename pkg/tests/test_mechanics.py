import random

import pytest
import sympy

from dgr.algebra import PolyRing
from dgr.mechanics import (PHASE, UMBRELLA_TEXTS, WeylElement, canonicalize_dgr, dgr_system,
                           fixed_point_count, poisson_bracket, sigma, verify_component_membership,
                           weyl_commutator_check)
from helpers import random_poly, to_sympy

q, Q, p, P = sympy.symbols("q Q p P")


def sympy_bracket(f, g):
    # {f, g} = f_p g_q - f_q g_p + f_P g_Q - f_Q g_P
    return sympy.expand(sympy.diff(f, p) * sympy.diff(g, q) - sympy.diff(f, q) * sympy.diff(g, p)
                        + sympy.diff(f, P) * sympy.diff(g, Q) - sympy.diff(f, Q) * sympy.diff(g, P))


def test_bracket_convention():
    assert poisson_bracket(PHASE.var("p"), PHASE.var("q")) == PHASE.one()
    assert poisson_bracket(PHASE.var("P"), PHASE.var("Q")) == PHASE.one()
    assert poisson_bracket(PHASE.var("q"), PHASE.var("p"), convention="standard") == PHASE.one()
    with pytest.raises(ValueError):
        poisson_bracket(PHASE.one(), PHASE.one(), convention="other")


def test_conservation_symbolic_a():
    S = dgr_system()
    assert not poisson_bracket(S.H, S.G)
    assert "a" in S.G.variables()


def test_conservation_against_sympy():
    S = dgr_system()
    assert sympy_bracket(to_sympy(S.H), to_sympy(S.G)) == 0


def test_canonicalization_reproduces_rational_pair():
    S = canonicalize_dgr()
    T = dgr_system()
    assert S.H == T.H and S.G == T.G
    assert all(c.denominator for c in S.G.terms.values())


def test_flow_is_bracket_with_H():
    S = dgr_system()
    field = S.vector_field()
    assert field["q"] == S.H.diff("p")
    assert field["p"] == -S.H.diff("q")


def test_jacobi_identity_random():
    rng = random.Random(1)
    for _ in range(100):
        f, g, h = (random_poly(PHASE, rng, terms=3, max_exp=2) for _ in range(3))
        total = (poisson_bracket(f, poisson_bracket(g, h)) + poisson_bracket(g, poisson_bracket(h, f))
                 + poisson_bracket(h, poisson_bracket(f, g)))
        assert not total


def test_bracket_matches_sympy_random():
    rng = random.Random(2)
    for _ in range(30):
        f, g = (random_poly(PHASE, rng, terms=3, max_exp=2) for _ in range(2))
        diff = to_sympy(poisson_bracket(f, g), PHASE) - sympy_bracket(to_sympy(f), to_sympy(g))
        assert sympy.expand(diff) == 0


def test_bracket_weight_rule_random():
    rng = random.Random(3)
    count = 0
    while count < 100:
        wf, wg = rng.randint(2, 12), rng.randint(2, 12)
        f = random_poly(PHASE, rng, terms=3, weight=wf)
        g = random_poly(PHASE, rng, terms=3, weight=wg)
        b = poisson_bracket(f, g)
        if not b:
            continue
        assert b.is_weighted_homogeneous()
        assert b.weighted_degree() == wf + wg - 5
        count += 1


def test_H_G_weights():
    S = dgr_system()
    assert S.H.is_weighted_homogeneous() and S.H.weighted_degree() == 6
    assert S.G.is_weighted_homogeneous() and S.G.weighted_degree() == 12


def test_sigma_invariance_at_a_zero():
    S = dgr_system().at(0)
    assert sigma(S.H) == S.H
    assert sigma(S.G) == S.G
    assert sigma(PHASE.var("q"), 3) == PHASE.var("q")
    assert sigma(PHASE.var("p"), 3) == -PHASE.var("p")


def test_fixed_point_counts_on_several_fibres():
    for seed in range(3):
        assert [fixed_point_count(k, seed=seed) for k in (1, 2, 3)] == [0, 8, 12]


def test_fixed_point_count_rejects_power():
    with pytest.raises(ValueError):
        fixed_point_count(4)


def test_umbrella_multipliers_are_graded_identities():
    mult = verify_component_membership()
    gens = [PHASE(t) for t in UMBRELLA_TEXTS]
    S = dgr_system().at(0)
    for name, target in (("H", S.H), ("G", S.G)):
        ring = mult[name][0].ring
        total = ring.zero()
        for m, g in zip(mult[name], gens):
            total = total + m * g.to_ring(ring)
            if m:
                assert m.is_weighted_homogeneous()
                assert m.weighted_degree() + g.weighted_degree() == target.weighted_degree()
        assert total == target.to_ring(ring)


def test_weyl_relations():
    pq = WeylElement("p") * WeylElement("q")
    assert pq == WeylElement("q*p + hbar")
    PQ = WeylElement("P") * WeylElement("Q")
    assert PQ == WeylElement("Q*P + hbar")
    assert WeylElement("p") * WeylElement("Q") == WeylElement("Q*p")


def test_weyl_associativity_random():
    rng = random.Random(4)
    ring = PolyRing(("q", "Q", "p", "P", "hbar"), (2, 2, 3, 3, 5))
    for _ in range(30):
        a, b, c = (WeylElement(random_poly(ring, rng, terms=2, max_exp=2)) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_quantum_lift_commutes():
    assert not weyl_commutator_check()
