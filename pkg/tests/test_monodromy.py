import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ade_belyi.belyi import NotBelyiError, passport_of_forms, passport_of_triple
from ade_belyi.errors import MalformedInputError
from ade_belyi.monodromy_numeric import (
    NearCriticalValueError,
    TrackerConfig,
    chordal,
    fiber_roots,
    monodromy_report,
    monodromy_triple,
)
from ade_belyi.perms import cycle_type, is_transitive
from support import DEGREE_FOUR, DESSIN, catalog_bel3_images, forms, xn_pair

FIXTURES = ([xn_pair(n) for n in range(1, 9)] + [forms(*DESSIN)]
            + [forms(*p) for p in DEGREE_FOUR] + catalog_bel3_images())


def test_bel3_images_present():
    images = catalog_bel3_images()
    assert forms("x1^6", "(x1^2 + x2^2)^3") in images
    assert all(f.n <= 6 for f in images)


@pytest.mark.parametrize("f", FIXTURES, ids=lambda f: f"{f.h1}/{f.h2}")
def test_cycle_types_match_exact_passport(f):
    t = monodromy_triple(f)
    assert passport_of_triple(t) == passport_of_forms(f)
    assert (t.s0 * t.s1 * t.sinf).is_identity()
    assert is_transitive([t.s0, t.s1], f.n)


@pytest.mark.parametrize("f", FIXTURES, ids=lambda f: f"{f.h1}/{f.h2}")
def test_halving_radius_keeps_conjugacy_classes(f):
    a = monodromy_triple(f, TrackerConfig(radius=0.5))
    b = monodromy_triple(f, TrackerConfig(radius=0.25))
    for x, y in zip((a.s0, a.s1, a.sinf), (b.s0, b.s1, b.sinf)):
        assert cycle_type(x) == cycle_type(y)


def test_deterministic(dessin):
    runs = [monodromy_triple(dessin) for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]


def test_dessin_triple(dessin):
    t = monodromy_triple(dessin)
    assert t.s0.to_cycle_string() == "(1 2)"
    assert t.s1.to_cycle_string() == "(2 3)"


def test_report_json(dessin):
    out = monodromy_report(dessin).to_json()
    assert out["verified_cycle_types"] is True
    assert set(out) == {"s0", "s1", "sinf", "verified_cycle_types"}


def test_cube_roots_of_eight():
    pts = fiber_roots(xn_pair(3), 8)
    want = [2 * cmath.exp(2j * cmath.pi * k / 3) for k in range(3)]
    for w in want:
        assert min(abs(p - w) for p in pts) < 1e-10


def test_fibre_includes_infinity():
    # f(inf) = 1/2, so the fibre over the base point holds infinity and 1/2
    pts = fiber_roots(forms("x1^2 + x1*x2", "2*x1^2 + x2^2"), 0.5)
    assert cmath.isinf(pts[-1])
    assert abs(pts[0] - 0.5) < 1e-12


def test_branch_value_is_rejected():
    with pytest.raises(NearCriticalValueError):
        fiber_roots(xn_pair(3), 0)
    with pytest.raises(NearCriticalValueError):
        fiber_roots(forms(*DESSIN), 1)


def test_non_belyi_is_rejected():
    with pytest.raises(NotBelyiError):
        monodromy_triple(forms("x1^3 - 3*x1*x2^2", "x2^3"))


@pytest.mark.parametrize("kwargs", [
    {"radius": 0}, {"radius": 0.7}, {"base": 1.0}, {"step": 2.0},
    {"min_step": 0.5, "step": 0.1}, {"eps_root": 1e-3, "eps_match": 1e-4},
])
def test_config_validation(kwargs):
    with pytest.raises(MalformedInputError):
        TrackerConfig(**kwargs)


def test_chordal_metric():
    inf = complex("inf")
    assert chordal(inf, inf) == 0
    assert chordal(0, inf) == 1
    assert chordal(1, -1) == pytest.approx(1.0)
    assert chordal(1e9, inf) < 1e-8


@settings(max_examples=50, deadline=None)
@given(st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_chordal_is_symmetric_and_inversion_invariant(a, b):
    assert chordal(a, b) == pytest.approx(chordal(b, a))
    assert chordal(a, b) <= 1 + 1e-12
    if a != 0 and b != 0:
        assert chordal(1 / a, 1 / b) == pytest.approx(chordal(a, b), abs=1e-12)
