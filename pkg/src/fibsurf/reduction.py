"""Cyclic base change bookkeeping and the genus-bound predicates.

The degree-N base change replaces the fibration by a reduced one; at the
lattice level only products survive, routed through the pushforward rule
for fiber components. Everything here is exact integer (or exact rational)
arithmetic over a validated model; sweeps are pure and parallelize over N
with deterministic aggregation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    CoverDegreeError,
    GenusTooSmallError,
    InconsistentInputError,
    ParityViolationError,
    SweepError,
    ZeroPairingHorizontalError,
)
from .fibration import (
    FiberComponent,
    FibrationModel,
    delta_divisors,
    foliation_canonical,
)
from .lattice import KIND_HORIZONTAL, Divisor


def base_genus(n: int, g_y: int) -> int:
    """Genus of the covering base curve: g_X - 1 = N(N-1)/2 + N(g_Y - 1)."""
    if n < 1:
        raise CoverDegreeError(f"N must be >= 1, got {n}")
    return 1 + n * (n - 1) // 2 + n * (g_y - 1)


def _multiplicity_lcm(model: FibrationModel) -> int:
    out = 1
    for fiber in model.fibers:
        for comp in fiber.components:
            out = math.lcm(out, comp.multiplicity)
    return out


class ReductionContext:
    """Degree-N cyclic base change data for a model.

    N must be a common multiple of every fiber multiplicity and must exceed
    the non-reduced fiber count s, so that N - s generic ramification fibers
    exist."""

    def __init__(self, model: FibrationModel, n: int):
        model.require_valid()
        if n < 1:
            raise CoverDegreeError(f"N must be >= 1, got {n}")
        for fiber in model.fibers:
            for comp in fiber.components:
                if n % comp.multiplicity != 0:
                    raise CoverDegreeError(
                        f"N={n} is not a common multiple of the fiber multiplicities "
                        f"(component {comp.class_id!r} has multiplicity {comp.multiplicity})"
                    )
        if n <= model.s:
            raise CoverDegreeError(f"N={n} must exceed the non-reduced fiber count s={model.s}")
        self.model = model
        self.n = n
        self.g_x = base_genus(n, model.base_genus)
        self.ramification: Dict[str, int] = {
            comp.class_id: n // comp.multiplicity
            for fiber in model.fibers
            for comp in fiber.components
        }


def pullback_pair(ctx: ReductionContext, d1: Divisor, d2: Divisor):
    """Products scale by the covering degree: N * (d1 . d2)."""
    return ctx.n * ctx.model.lattice.pair(d1, d2)


def component_pull_pair(ctx: ReductionContext, comp: FiberComponent, d: Divisor):
    """Pushforward rule for a component preimage: n_ij * (F_ij . d)."""
    if ctx.n % comp.multiplicity != 0:
        raise CoverDegreeError(
            f"component multiplicity {comp.multiplicity} does not divide N={ctx.n}"
        )
    return comp.multiplicity * ctx.model.lattice.pair(Divisor.of(comp.class_id), d)


# ---------------------------------------------------------------------------
# the chi balance identity


@dataclass(frozen=True)
class ChiBalanceReport:
    lhs: object
    rhs: object
    chi_kf: object
    s: int
    per_fiber: Tuple[Tuple[int, object], ...]

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def chi_balance(model: FibrationModel) -> ChiBalanceReport:
    """(s - 2 + 2 g_Y)(g - 1) + chi(K_F) - chi(O_S) against the halved sum
    of K_F-degrees over non-reduced fiber components.

    Over a rational base the coefficient is the classical s - 2; the extra
    2 g_Y term makes the identity exact over any base."""
    model.require_valid()
    lat = model.lattice
    kf = foliation_canonical(model)
    k = lat.canonical_divisor()
    s = model.s
    g = model.genus

    chi_diff = Fraction(lat.pair(kf, kf) - lat.pair(kf, k), 2)
    lhs = (s - 2 + 2 * model.base_genus) * (g - 1) + chi_diff

    per_fiber: List[Tuple[int, object]] = []
    rhs = Fraction(0)
    for fiber in model.non_reduced_fibers():
        total = sum(lat.pair(kf, Divisor.of(c.class_id)) for c in fiber.components)
        half = Fraction(total, 2)
        per_fiber.append((fiber.index, half))
        rhs += half

    if lat.is_integral and rhs.denominator != 1:
        raise ParityViolationError(f"half-integer right side {rhs}: odd pairing sum")

    def norm(x):
        return int(x) if isinstance(x, Fraction) and x.denominator == 1 else x

    return ChiBalanceReport(
        lhs=norm(lhs),
        rhs=norm(rhs),
        chi_kf=norm(Fraction(model.chi_o) + chi_diff),
        s=s,
        per_fiber=tuple((i, norm(h)) for i, h in per_fiber),
    )


# ---------------------------------------------------------------------------
# two-way polynomial sweep


def _fit_polynomial(xs: Sequence[int], ys: Sequence, degree: int) -> List[Fraction]:
    """Exact Vandermonde solve for coefficients c_0..c_degree."""
    m = degree + 1
    rows = [[Fraction(x) ** j for j in range(m)] + [Fraction(ys[i])] for i, x in enumerate(xs[:m])]
    for col in range(m):
        pivot = next(r for r in range(col, m) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pv = rows[col][col]
        rows[col] = [v / pv for v in rows[col]]
        for r in range(m):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [rows[i][m] for i in range(m)]


def _eval_poly(coeffs: Sequence[Fraction], x: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class SweepReport:
    rows: Tuple[Tuple[int, object, object], ...]
    way1_coeffs: Tuple[Fraction, ...]
    way2_coeffs: Tuple[Fraction, ...]
    degree1_gap: Fraction
    balance_gap_times_two: Fraction

    @property
    def pointwise_ok(self) -> bool:
        return all(w1 == w2 for _, w1, w2 in self.rows)

    @property
    def coeffs_ok(self) -> bool:
        return self.way1_coeffs == self.way2_coeffs

    @property
    def ok(self) -> bool:
        return self.pointwise_ok and self.coeffs_ok


def base_change_sweep(model: FibrationModel, n_list: Sequence[int]) -> SweepReport:
    """Compute K_fbar . K_Sbar two ways for each N and compare the exact
    polynomial fits. The degree-1 coefficient gap equals twice the chi
    balance defect, so it vanishes on valid models."""
    model.require_valid()
    if len(n_list) < 4:
        raise SweepError(f"sweep too short: need >= 4 values, got {len(n_list)}")
    if len(set(n_list)) != len(n_list):
        raise SweepError("sweep values must be distinct")

    lat = model.lattice
    kf = foliation_canonical(model)
    k = lat.canonical_divisor()
    g = model.genus
    g_y = model.base_genus
    s = model.s
    kf2 = lat.pair(kf, kf)
    kfk = lat.pair(kf, k)

    comp_terms = [
        (comp.multiplicity, lat.pair(kf, Divisor.of(comp.class_id)))
        for fiber in model.non_reduced_fibers()
        for comp in fiber.components
    ]

    rows = []
    for n in n_list:
        ReductionContext(model, n)  # admissibility gate
        way1 = n * kf2 + 4 * (g - 1) * (base_genus(n, g_y) - 1)
        way2 = (
            n * kfk
            + sum((n // m - 1) * m * v for m, v in comp_terms)
            + 2 * (n - s) * (n - 1) * (g - 1)
        )
        rows.append((n, way1, way2))

    xs = [r[0] for r in rows]
    c1 = _fit_polynomial(xs, [r[1] for r in rows], 3)
    c2 = _fit_polynomial(xs, [r[2] for r in rows], 3)
    for n, w1, w2 in rows[4:]:
        if _eval_poly(c1, n) != w1 or _eval_poly(c2, n) != w2:
            raise SweepError(f"values at N={n} do not lie on the cubic fit")

    bal = chi_balance(model)
    return SweepReport(
        rows=tuple(rows),
        way1_coeffs=tuple(c1),
        way2_coeffs=tuple(c2),
        degree1_gap=c1[1] - c2[1],
        balance_gap_times_two=2 * (Fraction(bal.lhs) - Fraction(bal.rhs)),
    )


# ---------------------------------------------------------------------------
# dichotomy and eigenvalue bound


@dataclass(frozen=True)
class DichotomyReport:
    branch_a: bool
    branch_a_count: int
    branch_a_threshold: int
    branch_b: bool
    branch_b_lhs: int
    branch_b_rhs: object
    per_fiber_half_degrees: Tuple[Tuple[int, object], ...]

    @property
    def holds(self) -> bool:
        return self.branch_a or self.branch_b


def _branch_b_sides(model: FibrationModel):
    lat = model.lattice
    kf = foliation_canonical(model)
    k = lat.canonical_divisor()
    chi_diff = Fraction(lat.pair(kf, kf) - lat.pair(kf, k), 2)
    rhs = 4 * (-chi_diff)
    if rhs.denominator == 1:
        rhs = int(rhs)
    return model.genus - 1, rhs


def multiplicity_dichotomy(model: FibrationModel) -> DichotomyReport:
    """Either at least s-2 non-reduced fibers carry a multiplicity <= 3, or
    g - 1 is bounded by 4(chi(O_S) - chi(K_F)). Requires genus >= 2."""
    model.require_valid()
    if model.genus < 2:
        raise GenusTooSmallError(f"dichotomy requires genus >= 2, got {model.genus}")
    s = model.s
    count = sum(
        1
        for fiber in model.non_reduced_fibers()
        if any(c.multiplicity <= 3 for c in fiber.components)
    )
    lhs, rhs = _branch_b_sides(model)
    balance = chi_balance(model)
    return DichotomyReport(
        branch_a=count >= s - 2,
        branch_a_count=count,
        branch_a_threshold=s - 2,
        branch_b=lhs <= rhs,
        branch_b_lhs=lhs,
        branch_b_rhs=rhs,
        per_fiber_half_degrees=balance.per_fiber,
    )


@dataclass(frozen=True)
class EigenvalueBoundReport:
    applicable: bool
    holds: Optional[bool] = None
    lhs: Optional[int] = None
    rhs: Optional[object] = None


def eigenvalue_genus_bound(model: FibrationModel, eigenvalue_floor: int) -> EigenvalueBoundReport:
    """If every foliation eigenvalue exceeds 3 in absolute value, every
    multiplicity carrying a singular point exceeds 3 and the genus bound
    g - 1 <= 4(-chi(K_F) + chi(O_S)) applies. Floors <= 3 are not
    applicable (a strict inequality is required)."""
    model.require_valid()
    if model.genus < 1:
        raise GenusTooSmallError(f"eigenvalue bound requires genus > 0, got {model.genus}")
    if eigenvalue_floor <= 3:
        return EigenvalueBoundReport(applicable=False)
    for fiber in model.fibers:
        crossing = len(fiber.components) > 1
        for comp in fiber.components:
            if comp.multiplicity <= 3 and (crossing or not fiber.is_reduced):
                raise InconsistentInputError(
                    f"multiplicity {comp.multiplicity} on {comp.class_id!r} contradicts "
                    f"eigenvalue floor {eigenvalue_floor}"
                )
    lhs, rhs = _branch_b_sides(model)
    return EigenvalueBoundReport(applicable=True, holds=lhs <= rhs, lhs=lhs, rhs=rhs)


# ---------------------------------------------------------------------------
# minimal cover degree and section-count predicates


def min_cover_degree(model: FibrationModel, n: int) -> int:
    """Least admissible cover degree N with N*n*(K_F . D0) > C . D0 for
    every horizontal class D0. Vertical classes are exempt since they pair
    to zero with the fiber. With no horizontal classes the condition is
    vacuous and the least admissible N is returned."""
    model.require_valid()
    if n < 1:
        raise InconsistentInputError(f"power n must be >= 1, got {n}")
    lat = model.lattice
    kf = foliation_canonical(model)
    lcm = _multiplicity_lcm(model)
    floor = model.s  # admissible N must exceed s

    lower = floor + 1
    for h in lat.ids_of_kind(KIND_HORIZONTAL):
        kf_d = lat.pair(kf, Divisor.of(h))
        if kf_d <= 0:
            raise ZeroPairingHorizontalError(
                f"horizontal class {h!r} pairs {kf_d} with the foliation canonical"
            )
        c_d = lat.pair(lat.fiber_divisor(), Divisor.of(h))
        # strict inequality N > c_d / (n * kf_d)
        lower = max(lower, Fraction(c_d, n * kf_d).__floor__() + 1)

    n_min = ((lower + lcm - 1) // lcm) * lcm
    return int(n_min)


@dataclass(frozen=True)
class SectionCounts:
    """User-supplied section counts; never computed here."""

    h0_kf_n: int
    h0_kbar_n: int
    n: int

    def __post_init__(self):
        if self.h0_kf_n < 0 or self.h0_kbar_n < 0:
            raise InconsistentInputError("section counts must be nonnegative")
        if self.n < 1:
            raise InconsistentInputError("power n must be >= 1")


@dataclass(frozen=True)
class SectionPredicateReport:
    nef_antecedent: bool
    nef_bound_lhs: int
    nef_bound_rhs: int
    nef_bound_holds: bool
    nef_ok: bool
    ample_bound_holds: bool
    ample_bound_lhs: int
    ample_bound_rhs: int
    global_gen_first: bool
    global_gen_second: bool
    split_note: str

    @property
    def ok(self) -> bool:
        return self.nef_ok


def section_count_predicates(model: FibrationModel, counts: SectionCounts) -> SectionPredicateReport:
    """Numeric conclusions of the section-count bounds.

    nef case:   if h0 jumps under the base change, n*K_F^2 >= 2(g-1) must hold.
    ample case: n^2*K_F^2 >= 2(g-1), reported as a predicate.
    global generation: reports which of (2n-1)(g-1) <= h0 or 2(g-1) <= n*K_F^2 holds.
    The split hypothesis only implies existence of a fiber with a vanishing
    twist; nothing is computable, so it is emitted as a note."""
    model.require_valid()
    lat = model.lattice
    kf = foliation_canonical(model)
    kf2 = lat.pair(kf, kf)
    g = model.genus
    n = counts.n

    antecedent = counts.h0_kbar_n > counts.h0_kf_n
    nef_lhs = n * kf2
    nef_rhs = 2 * (g - 1)
    nef_holds = nef_lhs >= nef_rhs

    return SectionPredicateReport(
        nef_antecedent=antecedent,
        nef_bound_lhs=nef_lhs,
        nef_bound_rhs=nef_rhs,
        nef_bound_holds=nef_holds,
        nef_ok=(not antecedent) or nef_holds,
        ample_bound_holds=n * n * kf2 >= 2 * (g - 1),
        ample_bound_lhs=n * n * kf2,
        ample_bound_rhs=2 * (g - 1),
        global_gen_first=(2 * n - 1) * (g - 1) <= counts.h0_kf_n,
        global_gen_second=2 * (g - 1) <= n * kf2,
        split_note=(
            "a split direct image implies some fiber has a nonvanishing twisted section; "
            "not computable from lattice data"
        ),
    )
