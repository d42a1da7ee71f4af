import json
import random

import pytest

from dgr.algebra import mpq
from dgr.filtration import (Z, FiltrationError, reference_relations, certify_relation, completed_psi_basis,
                            filtration_basis, hilbert_function, hilbert_series_coefficients,
                            image_relations, in_relation_span, line_section, normal_form, phi_basis,
                            psi_basis, same_span, slice_rank)
from dgr.mechanics import PHASE, dgr_system


@pytest.fixture(scope="module")
def nf():
    return normal_form(a_symbolic=False)


@pytest.fixture(scope="module")
def surface():
    cubics = image_relations(3, a_symbolic=False)
    quartics = image_relations(4, a_symbolic=False, lower=cubics)
    return cubics, quartics


def random_combination(rng, elements):
    total = PHASE.zero()
    for f in elements:
        total = total + f.scale(mpq(rng.randint(-9, 9), rng.randint(1, 5)))
    return total


def test_pole_orders_of_coordinates(nf):
    assert [nf.pole_order(PHASE(t)) for t in ("1", "Q", "q", "P", "p")] == [0, 1, 2, 2, 3]
    assert nf.pole_order(PHASE("q^2")) == 4


def test_pole_orders_of_bases(nf):
    assert all(nf.pole_order(f) <= 1 for f in phi_basis(False))
    assert all(nf.pole_order(f) <= 2 for f in psi_basis(False))
    assert nf.pole_order(psi_basis(False)[23]) == 2


def test_invariants_have_no_pole(nf):
    S = dgr_system().at(0)
    assert nf.pole_order(S.H) == 0 and nf.pole_order(S.G) == 0


def test_filtration_nesting_random(nf):
    rng = random.Random(3)
    phi = phi_basis(False)
    for _ in range(100):
        f = random_combination(rng, phi)
        g = random_combination(rng, phi)
        assert nf.pole_order(f) <= 1
        # P(D) sits inside P(2D), and products of two P(D) elements land there too
        assert nf.pole_order(f) <= 2
        assert nf.pole_order(f * g) <= 2


def test_dimension_of_first_piece():
    fb = filtration_basis(1, a_symbolic=False)
    assert fb.dimension == 6
    assert same_span(fb, phi_basis(False))
    assert json.loads(fb.to_json())["dimension"] == 6


def test_second_piece_and_completed_basis():
    fb = filtration_basis(2, a_symbolic=False)
    assert fb.dimension == 24
    assert same_span(fb, completed_psi_basis(False))


def test_first_piece_rejects_wrong_span():
    fb = filtration_basis(1, a_symbolic=False)
    wrong = phi_basis(False)[:5] + [PHASE("Q^2")]
    assert not same_span(fb, wrong)


def test_filtration_rejects_bad_pole():
    with pytest.raises(ValueError):
        filtration_basis(0)


def test_relation_slices(surface):
    cubics, quartics = surface
    assert len(cubics.generators) == 4
    assert len(quartics.generators) == 6
    for f in cubics.generators + quartics.generators:
        assert certify_relation(f, a_symbolic=False)


def test_reference_relations_lie_in_slices(surface):
    cubics, quartics = surface
    _, c3, c4 = reference_relations()
    zero = {"a": 0}
    assert all(in_relation_span(f.subs(zero), cubics, False) for f in c3)
    assert all(in_relation_span(f.subs(zero), quartics, False) for f in c4)
    vals = {"h": 17, "g": 23, "a": 0}
    assert slice_rank(cubics.generators + [f.subs(zero) for f in c3], vals) == 4


def test_certify_relation_rejects_non_relation():
    assert not certify_relation(Z("z0*z1*z2 - z3^2*z0"), a_symbolic=False)


def test_hilbert_function(surface):
    cubics, quartics = surface
    hf = hilbert_function(cubics.generators + quartics.generators, 4, a_symbolic=False)
    assert hf == [1, 6, 21, 52, 96]
    assert hilbert_series_coefficients() == hf


def test_hilbert_closed_form():
    # numerator / (1 - t)^3 expanded by hand for small d
    assert hilbert_series_coefficients((1,), 4) == [1, 3, 6, 10, 15]
    assert hilbert_series_coefficients((1, 3, 6, 6, -3, -3, 2), 6)[:5] == [1, 6, 21, 52, 96]


def test_line_section_a_zero(surface):
    cubics, quartics = surface
    sec = line_section(cubics.generators + quartics.generators)
    assert sec.contains_p
    assert sec.j == 0
    assert sec.quartic.primitive() == sec.quartic.ring("9*z2^4*g - 4*z2*z5^3").primitive()


def test_octic_certifies():
    F8, _, _ = reference_relations()
    assert certify_relation(F8.subs({"a": 0}), a_symbolic=False)
    with pytest.raises(FiltrationError):
        line_section([Z("z2^2 - z5*z0")])
