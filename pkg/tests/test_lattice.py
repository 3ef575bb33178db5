from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fibsurf import (
    CurveClass,
    Divisor,
    IntersectionLattice,
    LatticeError,
    NegativeGenusError,
    NonIntegralGenusError,
    ParityViolationError,
    UnknownClassError,
)
from conftest import make_lattice


def small_lattice():
    classes = [
        CurveClass("K", "canonical"),
        CurveClass("C", "generic-fiber"),
        CurveClass("A", "vertical-component"),
        CurveClass("B", "vertical-component"),
        CurveClass("H", "horizontal"),
    ]
    entries = {
        ("K", "K"): -1,
        ("K", "C"): 2,
        ("K", "A"): -1,
        ("K", "B"): 4,
        ("K", "H"): 1,
        ("A", "A"): -1,
        ("B", "B"): -4,
        ("A", "B"): 2,
        ("C", "H"): 3,
        ("H", "H"): 5,
        ("A", "H"): 1,
    }
    return make_lattice(classes, entries)


def test_construction_rejects_duplicate_ids():
    with pytest.raises(LatticeError, match="duplicate"):
        make_lattice(
            [CurveClass("K", "canonical"), CurveClass("C", "generic-fiber"), CurveClass("C", "horizontal")],
            {},
        )


def test_construction_requires_unique_canonical_and_fiber():
    with pytest.raises(LatticeError, match="canonical"):
        make_lattice([CurveClass("C", "generic-fiber"), CurveClass("A", "vertical-component")], {})
    with pytest.raises(LatticeError, match="generic-fiber"):
        make_lattice([CurveClass("K", "canonical"), CurveClass("C", "generic-fiber"),
                      CurveClass("C2", "generic-fiber")], {})


def test_construction_rejects_asymmetric_table():
    ids = ["K", "C"]
    table = {"K": {"K": 0, "C": 1}, "C": {"K": 2, "C": 0}}
    with pytest.raises(LatticeError, match="symmetric"):
        IntersectionLattice([CurveClass("K", "canonical"), CurveClass("C", "generic-fiber")], table)


def test_pair_zero_divisor_and_fiber_square():
    lat = small_lattice()
    d = Divisor({"A": 3, "B": -2})
    assert lat.pair(Divisor.zero(), d) == 0
    assert lat.pair(lat.fiber_divisor(), lat.fiber_divisor()) == 0


def test_pair_unknown_class():
    lat = small_lattice()
    with pytest.raises(UnknownClassError):
        lat.pair(Divisor.of("nope"), Divisor.of("A"))


def test_pair_matches_direct_expansion():
    lat = small_lattice()
    d1 = Divisor({"A": 2, "C": 1})
    d2 = Divisor({"B": 1, "K": -1})
    expected = 2 * 1 * lat.entry("A", "B") + 2 * (-1) * lat.entry("A", "K") \
        + 1 * 1 * lat.entry("C", "B") + 1 * (-1) * lat.entry("C", "K")
    assert lat.pair(d1, d2) == expected


coeffs = st.dictionaries(st.sampled_from(["K", "C", "A", "B", "H"]), st.integers(-9, 9), max_size=5)


@given(coeffs, coeffs, coeffs, st.integers(-6, 6))
def test_pair_symmetric_and_bilinear(c1, c2, c3, a):
    lat = small_lattice()
    d1, d2, d3 = Divisor(c1), Divisor(c2), Divisor(c3)
    assert lat.pair(d1, d2) == lat.pair(d2, d1)
    assert lat.pair(a * d1 + d2, d3) == a * lat.pair(d1, d3) + lat.pair(d2, d3)


def test_adjunction_examples():
    classes = [
        CurveClass("K", "canonical"),
        CurveClass("C", "generic-fiber"),
        CurveClass("n2", "vertical-component"),   # (-2) rational curve
        CurveClass("e1", "vertical-component"),   # (-1) exceptional curve
        CurveClass("g2", "vertical-component"),   # genus 2 curve
    ]
    entries = {
        ("n2", "n2"): -2,
        ("e1", "e1"): -1, ("K", "e1"): -1,
        ("g2", "g2"): 0, ("K", "g2"): 2,
    }
    lat = make_lattice(classes, entries)
    assert lat.adjunction_genus("n2") == 0
    assert lat.adjunction_genus("e1") == 0
    assert lat.adjunction_genus("g2") == 2


def test_adjunction_errors():
    classes = [
        CurveClass("K", "canonical"),
        CurveClass("C", "generic-fiber"),
        CurveClass("odd", "vertical-component"),
        CurveClass("neg", "vertical-component"),
    ]
    entries = {("odd", "odd"): -1, ("neg", "neg"): -6}
    lat = make_lattice(classes, entries)
    with pytest.raises(NonIntegralGenusError):
        lat.adjunction_genus("odd")
    with pytest.raises(NegativeGenusError):
        lat.adjunction_genus("neg")
    with pytest.raises(LatticeError):
        lat.adjunction_genus("K")


def test_riemann_roch_examples():
    lat = small_lattice()
    for chi in (-2, 0, 1, 5):
        assert lat.riemann_roch_chi(Divisor.zero(), chi) == chi
        assert lat.riemann_roch_chi(lat.canonical_divisor(), chi) == chi


def test_riemann_roch_formula_direct():
    lat = small_lattice()
    d = Divisor({"A": 1, "C": 2})
    dd = lat.pair(d, d)
    dk = lat.pair(d, lat.canonical_divisor())
    assert (dd - dk) % 2 == 0
    assert lat.riemann_roch_chi(d, 1) == 1 + (dd - dk) // 2


def test_riemann_roch_parity_violation():
    classes = [CurveClass("K", "canonical"), CurveClass("C", "generic-fiber"),
               CurveClass("A", "vertical-component")]
    lat = make_lattice(classes, {("A", "A"): -1, ("K", "A"): 0})
    with pytest.raises(ParityViolationError):
        lat.riemann_roch_chi(Divisor.of("A"), 1)


def test_invariant_violations_reported():
    classes = [CurveClass("K", "canonical"), CurveClass("C", "generic-fiber"),
               CurveClass("A", "vertical-component")]
    lat = make_lattice(classes, {("C", "C"): 1, ("C", "A"): 2, ("K", "K"): 3})
    report = lat.invariant_violations(declared_k_self=5)
    assert "generic fiber self-intersection nonzero" in report
    assert any("vertical class 'A'" in v for v in report)
    assert any("K_self" in v for v in report)


def test_fraction_entries_normalize_and_flag():
    classes = [CurveClass("K", "canonical"), CurveClass("C", "generic-fiber"),
               CurveClass("A", "vertical-component")]
    lat = make_lattice(classes, {("A", "A"): Fraction(-1, 2), ("K", "C"): Fraction(4, 2)})
    assert not lat.is_integral
    assert lat.entry("K", "C") == 2 and isinstance(lat.entry("K", "C"), int)
    assert lat.pair(2 * Divisor.of("A"), 2 * Divisor.of("A")) == -2


def test_divisor_arithmetic():
    d = Divisor({"A": 1}) + Divisor({"A": 2, "B": 1})
    assert d == Divisor({"A": 3, "B": 1})
    assert d - d == Divisor.zero()
    assert (-2) * d == Divisor({"A": -6, "B": -2})
    assert Divisor({"A": 0}) == Divisor.zero()
    with pytest.raises(LatticeError):
        Divisor({"A": 1.5})
