from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fibsurf import (
    CoverDegreeError,
    CurveClass,
    Divisor,
    GenusTooSmallError,
    InconsistentInputError,
    RandomModelSpec,
    ReductionContext,
    SectionCounts,
    SweepError,
    ZeroPairingHorizontalError,
    base_change_sweep,
    base_genus,
    chi_balance,
    component_pull_pair,
    eigenvalue_genus_bound,
    foliation_canonical,
    generate_models,
    min_cover_degree,
    multiplicity_dichotomy,
    pullback_pair,
    section_count_predicates,
)
from conftest import make_model


# -- base genus ---------------------------------------------------------------


def test_base_genus_values():
    assert base_genus(3, 0) == 1
    assert base_genus(5, 0) == 6
    for g_y in range(0, 4):
        assert base_genus(1, g_y) == g_y


@given(st.integers(0, 40))
def test_base_genus_identity_cover(g_y):
    assert base_genus(1, g_y) == g_y


def test_base_genus_rejects_nonpositive():
    with pytest.raises(CoverDegreeError):
        base_genus(0, 0)


# -- reduction context ----------------------------------------------------------


def test_context_requires_common_multiple(double_fiber_model):
    with pytest.raises(CoverDegreeError, match="not a common multiple"):
        ReductionContext(double_fiber_model, 3)


def test_context_requires_n_above_s(double_fiber_model):
    # s = 1, and 1 is a common multiple of nothing relevant? lcm is 2
    with pytest.raises(CoverDegreeError):
        ReductionContext(double_fiber_model, 1)


def test_context_ramification(double_fiber_model):
    ctx = ReductionContext(double_fiber_model, 4)
    assert ctx.g_x == base_genus(4, 0) == 7
    assert ctx.ramification == {"A": 2, "B": 4}


def test_pullback_pair_scaling(double_fiber_model):
    ctx = ReductionContext(double_fiber_model, 4)
    lat = double_fiber_model.lattice
    c = lat.fiber_divisor()
    kf = foliation_canonical(double_fiber_model)
    assert pullback_pair(ctx, c, c) == 0
    assert pullback_pair(ctx, kf, c) == 4 * (2 * double_fiber_model.genus - 2)
    assert pullback_pair(ctx, kf, kf) == 4 * lat.pair(kf, kf)


def test_component_pull_pair_recovers_fiber_degree(double_fiber_model):
    ctx = ReductionContext(double_fiber_model, 4)
    kf = foliation_canonical(double_fiber_model)
    total = sum(component_pull_pair(ctx, comp, kf) for comp in double_fiber_model.fibers[0].components)
    assert total == 2 * double_fiber_model.genus - 2


def test_component_pull_pair_vertical_against_fiber(double_fiber_model):
    ctx = ReductionContext(double_fiber_model, 2)
    c = double_fiber_model.lattice.fiber_divisor()
    for comp in double_fiber_model.fibers[0].components:
        assert component_pull_pair(ctx, comp, c) == 0


# -- chi balance ----------------------------------------------------------------


def test_chi_balance_no_multiple_fibers(bare_model):
    report = chi_balance(bare_model)
    assert report.lhs == 0 == report.rhs
    assert report.ok


def test_chi_balance_double_fiber_frozen(double_fiber_model):
    report = chi_balance(double_fiber_model)
    assert report.lhs == 1 == report.rhs
    assert report.chi_kf == double_fiber_model.chi_o + 2
    assert report.per_fiber == ((0, 1),)


def test_chi_balance_on_corpus():
    for model in generate_models(RandomModelSpec(seed=77), 60):
        assert chi_balance(model).ok


def test_chi_balance_nonzero_base_genus():
    # one multiple fiber over an elliptic base; the 2 g_Y correction keeps it exact
    classes = [
        CurveClass("K", "canonical"),
        CurveClass("C", "generic-fiber"),
        CurveClass("A", "vertical-component", genus=0),
        CurveClass("B", "vertical-component", genus=1),
    ]
    entries = {
        ("K", "K"): -1, ("K", "C"): 2, ("C", "C"): 0,
        ("A", "A"): -1, ("B", "B"): -4, ("A", "B"): 2,
        ("K", "A"): -1, ("K", "B"): 4,
    }
    m = make_model(classes, entries, [[("A", 2), ("B", 1)]], genus=2, base_genus=1)
    assert m.validation().ok
    assert chi_balance(m).ok


# -- polynomial sweep -------------------------------------------------------------


def test_sweep_trivial_model(bare_model):
    report = base_change_sweep(bare_model, [1, 2, 3, 4])
    assert report.ok
    assert report.degree1_gap == 0
    assert report.balance_gap_times_two == 0


def test_sweep_double_fiber(double_fiber_model):
    report = base_change_sweep(double_fiber_model, [2, 4, 6, 8])
    assert report.pointwise_ok
    assert report.coeffs_ok
    assert report.degree1_gap == 2 * (Fraction(1) - Fraction(1)) == 0


def test_sweep_rows_match_direct_evaluation(double_fiber_model):
    report = base_change_sweep(double_fiber_model, [2, 4, 6, 8])
    m = double_fiber_model
    lat = m.lattice
    kf = foliation_canonical(m)
    for n, w1, w2 in report.rows:
        assert w1 == n * lat.pair(kf, kf) + 4 * (m.genus - 1) * (base_genus(n, 0) - 1)
        assert w1 == w2


def test_sweep_too_short(double_fiber_model):
    with pytest.raises(SweepError, match="too short"):
        base_change_sweep(double_fiber_model, [2, 4, 6])


def test_sweep_rejects_invalid_degree(double_fiber_model):
    with pytest.raises(CoverDegreeError):
        base_change_sweep(double_fiber_model, [2, 3, 4, 6])


def test_sweep_on_corpus():
    import math

    for model in generate_models(RandomModelSpec(seed=5150), 25):
        lcm = 1
        for fiber in model.fibers:
            for comp in fiber.components:
                lcm = math.lcm(lcm, comp.multiplicity)
        k0 = model.s // lcm + 1
        values = [lcm * (k0 + i) for i in range(4)]
        report = base_change_sweep(model, values)
        assert report.ok
        assert report.degree1_gap == 0


# -- dichotomy and eigenvalue bound -------------------------------------------------


def test_dichotomy_vacuous_branch_a(double_fiber_model):
    report = multiplicity_dichotomy(double_fiber_model)
    assert report.branch_a  # s = 1 <= 2: threshold is -1
    assert report.branch_a_threshold == -1
    assert report.holds


def test_dichotomy_genus_gate(hesse_descriptor):
    from fibsurf import assemble_fibration

    model = assemble_fibration(hesse_descriptor)  # genus 1
    with pytest.raises(GenusTooSmallError):
        multiplicity_dichotomy(model)


def test_dichotomy_counts_low_multiplicity_fibers():
    # five multiple fibers 2A_i (squares 0), three of them with an extra
    # low-multiplicity structure is overkill; count fibers with some n <= 3
    classes = [CurveClass("K", "canonical"), CurveClass("C", "generic-fiber")]
    entries = {("K", "K"): 0, ("K", "C"): 2 * 21 - 2, ("C", "C"): 0}
    fibers = []
    for i, n in enumerate((2, 2, 2, 5, 5)):
        cid = f"A{i}"
        classes.append(CurveClass(cid, "vertical-component", genus=(40 + n) // n))
        entries[(cid, cid)] = 0
        entries[("K", cid)] = 40 // n
        fibers.append([(cid, n)])
    m = make_model(classes, entries, fibers, genus=21)
    assert m.validation().ok
    report = multiplicity_dichotomy(m)
    assert report.branch_a_count == 3
    assert report.branch_a_threshold == 3
    assert report.branch_a


def test_dichotomy_branch_b_on_nef_corpus():
    spec = RandomModelSpec(seed=404, fibers=(3, 4), components=(1, 5), multiplicity=(4, 9), nef=True)
    for model in generate_models(spec, 40):
        report = multiplicity_dichotomy(model)
        assert report.branch_b, report


def test_eigenvalue_bound_not_applicable(double_fiber_model):
    report = eigenvalue_genus_bound(double_fiber_model, 3)
    assert not report.applicable


def test_eigenvalue_bound_inconsistent_multiplicity(double_fiber_model):
    with pytest.raises(InconsistentInputError):
        eigenvalue_genus_bound(double_fiber_model, 4)


def test_eigenvalue_bound_on_nef_model():
    spec = RandomModelSpec(seed=11, fibers=(3, 3), components=(1, 4), multiplicity=(4, 9), nef=True)
    model = next(iter(generate_models(spec, 1)))
    report = eigenvalue_genus_bound(model, 4)
    assert report.applicable and report.holds


def test_eigenvalue_bound_genus_one():
    # genus 1, no singular fibers: bound reads 0 <= 4*(2g-2) = 0
    classes = [CurveClass("K", "canonical"), CurveClass("C", "generic-fiber")]
    m = make_model(classes, {("K", "K"): 0, ("K", "C"): 0, ("C", "C"): 0}, [], genus=1)
    report = eigenvalue_genus_bound(m, 5)
    assert report.applicable
    assert report.lhs == 0 and report.rhs == 0 and report.holds


# -- minimal cover degree --------------------------------------------------------


def test_min_cover_degree_worked_example(horizontal_model):
    kf = foliation_canonical(horizontal_model)
    lat = horizontal_model.lattice
    assert lat.pair(kf, Divisor.of("D0")) == 1
    assert lat.pair(lat.fiber_divisor(), Divisor.of("D0")) == 7
    assert min_cover_degree(horizontal_model, 1) == 8


def test_min_cover_degree_no_horizontal(double_fiber_model):
    assert min_cover_degree(double_fiber_model, 1) == 2  # least multiple of 2 above s = 1


def test_min_cover_degree_zero_pairing():
    classes = [
        CurveClass("K", "canonical"),
        CurveClass("C", "generic-fiber"),
        CurveClass("D0", "horizontal"),
    ]
    entries = {
        ("K", "K"): -1, ("K", "C"): 2, ("C", "C"): 0,
        ("C", "D0"): 3, ("K", "D0"): -6, ("D0", "D0"): 2,
    }
    m = make_model(classes, entries, [], genus=2)
    with pytest.raises(ZeroPairingHorizontalError):
        min_cover_degree(m, 1)


# -- section predicates -----------------------------------------------------------


def test_section_predicates_vacuous(bare_model):
    counts = SectionCounts(h0_kf_n=3, h0_kbar_n=3, n=1)
    report = section_count_predicates(bare_model, counts)
    assert not report.nef_antecedent
    assert report.nef_ok


def test_section_predicates_boundary(boundary_model):
    counts = SectionCounts(h0_kf_n=1, h0_kbar_n=2, n=1)
    report = section_count_predicates(boundary_model, counts)
    assert report.nef_antecedent
    assert report.nef_bound_lhs == 2 == report.nef_bound_rhs
    assert report.nef_ok


def test_section_predicates_failure_flagged():
    # K_F^2 = 0, g = 3, n = 2 with a section jump: the conclusion fails
    classes = [CurveClass("K", "canonical"), CurveClass("C", "generic-fiber")]
    entries = {("K", "K"): -16, ("K", "C"): 4, ("C", "C"): 0}
    m = make_model(classes, entries, [], genus=3)
    lat = m.lattice
    kf = foliation_canonical(m)
    assert lat.pair(kf, kf) == 0
    report = section_count_predicates(m, SectionCounts(h0_kf_n=1, h0_kbar_n=2, n=2))
    assert report.nef_antecedent and not report.nef_bound_holds and not report.nef_ok


def test_section_predicates_global_generation(boundary_model):
    report = section_count_predicates(boundary_model, SectionCounts(h0_kf_n=5, h0_kbar_n=5, n=1))
    assert report.global_gen_first  # (2n-1)(g-1) = 1 <= 5
    assert report.global_gen_second  # 2(g-1) = 2 <= K_F^2 = 2
    assert "fiber" in report.split_note


def test_section_counts_validation():
    with pytest.raises(InconsistentInputError):
        SectionCounts(h0_kf_n=-1, h0_kbar_n=0, n=1)
    with pytest.raises(InconsistentInputError):
        SectionCounts(h0_kf_n=0, h0_kbar_n=0, n=0)
