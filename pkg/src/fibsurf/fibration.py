"""Fibration models: singular-fiber combinatorics over an intersection lattice.

A model is the data of a fibration f: S -> Y at the lattice level: base
genus, fiber genus, chi(O_S) and the singular fibers as weighted sums of
vertical classes. Everything downstream (canonical divisor bookkeeping,
the exact identity suite, multiplicity propagation) runs on a validated
model. Models are immutable and all operations are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import (
    DisconnectedFiberError,
    InconsistentInputError,
    InvalidModelError,
    LatticeError,
    NegativeGenusError,
    NonIntegralGenusError,
)
from .lattice import (
    KIND_HORIZONTAL,
    KIND_VERTICAL,
    Divisor,
    IntersectionLattice,
)

ONE_CONNECTED_CUTOFF = 12


@dataclass(frozen=True)
class FiberComponent:
    fiber_index: int
    comp_index: int
    class_id: str
    multiplicity: int


@dataclass(frozen=True)
class Fiber:
    index: int
    components: Tuple[FiberComponent, ...]

    def divisor(self) -> Divisor:
        return Divisor({c.class_id: c.multiplicity for c in self.components})

    @property
    def is_reduced(self) -> bool:
        return all(c.multiplicity == 1 for c in self.components)

    def component(self, comp_index: int) -> FiberComponent:
        for c in self.components:
            if c.comp_index == comp_index:
                return c
        raise InconsistentInputError(f"fiber {self.index} has no component {comp_index}")


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[str, ...]
    warnings: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


class FibrationModel:
    """Immutable fibration model; validation is computed once and cached."""

    def __init__(
        self,
        lattice: IntersectionLattice,
        base_genus: int,
        genus: int,
        chi_o: int,
        fibers: List[Fiber],
    ):
        self.lattice = lattice
        self.base_genus = base_genus
        self.genus = genus
        self.chi_o = chi_o
        self.fibers = tuple(sorted(fibers, key=lambda f: f.index))
        self._validation: Optional[ValidationReport] = None

    @property
    def s(self) -> int:
        """Number of non-reduced fibers (some component of multiplicity >= 2)."""
        return sum(1 for f in self.fibers if not f.is_reduced)

    def non_reduced_fibers(self) -> Tuple[Fiber, ...]:
        return tuple(f for f in self.fibers if not f.is_reduced)

    def fiber(self, index: int) -> Fiber:
        for f in self.fibers:
            if f.index == index:
                return f
        raise InconsistentInputError(f"no fiber with index {index}")

    def validation(self) -> ValidationReport:
        if self._validation is None:
            self._validation = validate(self)
        return self._validation

    def require_valid(self) -> None:
        report = self.validation()
        if not report.ok:
            raise InvalidModelError(report.violations)

    def __eq__(self, other):
        return (
            isinstance(other, FibrationModel)
            and self.lattice == other.lattice
            and self.base_genus == other.base_genus
            and self.genus == other.genus
            and self.chi_o == other.chi_o
            and self.fibers == other.fibers
        )

    def __repr__(self):
        return (
            f"FibrationModel(g={self.genus}, g_Y={self.base_genus}, "
            f"chi_O={self.chi_o}, fibers={len(self.fibers)}, s={self.s})"
        )


# ---------------------------------------------------------------------------
# validation


def _dual_graph(model: FibrationModel, fiber: Fiber) -> Dict[int, Dict[int, int]]:
    """Adjacency with positive pairing weights between fiber components."""
    lat = model.lattice
    graph: Dict[int, Dict[int, int]] = {c.comp_index: {} for c in fiber.components}
    for a, b in itertools.combinations(fiber.components, 2):
        w = lat.entry(a.class_id, b.class_id)
        if w > 0:
            graph[a.comp_index][b.comp_index] = w
            graph[b.comp_index][a.comp_index] = w
    return graph


def _connected(graph: Dict[int, Dict[int, int]]) -> bool:
    if not graph:
        return True
    seen = set()
    stack = [next(iter(graph))]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(graph[node])
    return len(seen) == len(graph)


def validate(model: FibrationModel) -> ValidationReport:
    """Report every violated model invariant; an empty report means valid."""
    violations: List[str] = []
    warnings: List[str] = []
    lat = model.lattice

    violations.extend(lat.invariant_violations())

    if model.base_genus < 0:
        violations.append("base genus negative")
    if model.genus < 0:
        violations.append("fiber genus negative")

    k = lat.canonical_divisor()
    c = lat.fiber_divisor()
    if lat.pair(k, c) != 2 * model.genus - 2:
        violations.append(
            f"declared genus {model.genus} inconsistent with K*C = {lat.pair(k, c)}"
        )

    seen_classes: Dict[str, int] = {}
    seen_indices = set()
    for fiber in model.fibers:
        if fiber.index in seen_indices:
            violations.append(f"duplicate fiber index {fiber.index}")
        seen_indices.add(fiber.index)
        if not fiber.components:
            violations.append(f"fiber {fiber.index} has no components")
            continue
        for comp in fiber.components:
            if comp.multiplicity < 1:
                violations.append(
                    f"fiber {fiber.index} component {comp.class_id!r} has multiplicity < 1"
                )
            try:
                cls = lat.curve_class(comp.class_id)
            except LatticeError:
                violations.append(f"fiber {fiber.index} references unknown class {comp.class_id!r}")
                continue
            if cls.kind != KIND_VERTICAL:
                violations.append(
                    f"fiber {fiber.index} component {comp.class_id!r} is not a vertical component"
                )
            if comp.class_id in seen_classes:
                violations.append(
                    f"class {comp.class_id!r} appears in fibers {seen_classes[comp.class_id]} and {fiber.index}"
                )
            seen_classes[comp.class_id] = fiber.index

    if violations:
        return ValidationReport(tuple(violations), tuple(warnings))

    # numeric checks only make sense once the structure is sound
    for fiber in model.fibers:
        div = fiber.divisor()
        for cid in lat.ids:
            if lat.pair(div, Divisor.of(cid)) != lat.pair(c, Divisor.of(cid)):
                violations.append(
                    f"fiber {fiber.index} not numerically equivalent to C (against class {cid!r})"
                )
                break

        graph = _dual_graph(model, fiber)
        if not _connected(graph):
            violations.append(f"fiber {fiber.index} dual graph disconnected")

        ncomp = len(fiber.components)
        if ncomp > ONE_CONNECTED_CUTOFF:
            warnings.append(
                f"fiber {fiber.index}: 1-connectedness not checked ({ncomp} components > {ONE_CONNECTED_CUTOFF})"
            )
        elif ncomp > 1:
            comps = list(fiber.components)
            for r in range(1, ncomp):
                for part in itertools.combinations(comps, r):
                    d1 = Divisor({p.class_id: p.multiplicity for p in part})
                    d2 = div - d1
                    if lat.pair(d1, d2) < 1:
                        violations.append(
                            f"fiber {fiber.index} not 1-connected "
                            f"(split {sorted(p.class_id for p in part)})"
                        )
                        break
                else:
                    continue
                break

    for cls in lat.classes:
        if cls.genus is None or cls.kind not in (KIND_VERTICAL, KIND_HORIZONTAL):
            continue
        try:
            g = lat.adjunction_genus(cls.id)
        except (NonIntegralGenusError, NegativeGenusError) as exc:
            violations.append(f"class {cls.id!r}: adjunction failure ({exc})")
            continue
        if g != cls.genus:
            violations.append(
                f"class {cls.id!r}: declared genus {cls.genus} differs from adjunction genus {g}"
            )

    return ValidationReport(tuple(violations), tuple(warnings))


# ---------------------------------------------------------------------------
# canonical divisors


def relative_canonical(model: FibrationModel) -> Divisor:
    """K_S + (2 - 2 g_Y) C, the relative dualizing class of the fibration."""
    model.require_valid()
    lat = model.lattice
    return lat.canonical_divisor() + (2 - 2 * model.base_genus) * lat.fiber_divisor()


def delta_divisors(model: FibrationModel) -> Tuple[Divisor, Divisor, Divisor]:
    """(Delta, Delta_red, Delta_0): sums over the non-reduced fibers only."""
    model.require_valid()
    delta = Divisor.zero()
    delta_red = Divisor.zero()
    for fiber in model.non_reduced_fibers():
        delta = delta + fiber.divisor()
        delta_red = delta_red + Divisor({c.class_id: 1 for c in fiber.components})
    return delta, delta_red, delta - delta_red


def foliation_canonical(model: FibrationModel) -> Divisor:
    """Canonical class of the foliation: relative canonical minus Delta_0."""
    model.require_valid()
    _, _, delta0 = delta_divisors(model)
    return relative_canonical(model) - delta0


# ---------------------------------------------------------------------------
# counting and identities


def c2_count(model: FibrationModel) -> int:
    """Singular point count: pairwise products of components within each
    listed fiber. Requires normal-crossing data, so sibling pairings must
    be nonnegative."""
    model.require_valid()
    lat = model.lattice
    total = 0
    for fiber in model.fibers:
        for a, b in itertools.combinations(fiber.components, 2):
            w = lat.entry(a.class_id, b.class_id)
            if w < 0:
                raise LatticeError(
                    f"negative pairing between sibling components {a.class_id!r}, {b.class_id!r}"
                )
            total += w
    return total


def _c2_non_reduced(model: FibrationModel) -> int:
    lat = model.lattice
    total = 0
    for fiber in model.non_reduced_fibers():
        for a, b in itertools.combinations(fiber.components, 2):
            total += lat.entry(a.class_id, b.class_id)
    return total


@dataclass(frozen=True)
class IdentitySuiteReport:
    """Exact results of the three intersection identities.

    delta_square:     Delta_0^2 versus (K_F - K_S)^2
    component_sum:    -sum F_ij^2 versus 2 c2 - (K_F - K_S)^2, both sides
                      restricted to non-reduced fibers
    reconstruction:   per component, the self-intersection recomputed from
                      the fiber relation F*C = 0
    """

    delta_square_lhs: object
    delta_square_rhs: object
    component_sum_lhs: object
    component_sum_rhs: object
    reconstruction: Tuple[Tuple[str, object, object], ...]
    reduced_singular_fibers_present: bool
    notes: Tuple[str, ...] = ()

    @property
    def delta_square_ok(self) -> bool:
        return self.delta_square_lhs == self.delta_square_rhs

    @property
    def component_sum_ok(self) -> bool:
        return self.component_sum_lhs == self.component_sum_rhs

    @property
    def reconstruction_ok(self) -> bool:
        return all(stored == recomputed for _, stored, recomputed in self.reconstruction)

    @property
    def all_ok(self) -> bool:
        return self.delta_square_ok and self.component_sum_ok and self.reconstruction_ok


def identity_suite(model: FibrationModel) -> IdentitySuiteReport:
    """Verify the three exact identities tying Delta_0, the component
    self-intersections and the singular point count together."""
    model.require_valid()
    lat = model.lattice
    k = lat.canonical_divisor()
    kf = foliation_canonical(model)
    _, _, delta0 = delta_divisors(model)

    diff = kf - k
    delta_sq = lat.pair(delta0, delta0)
    diff_sq = lat.pair(diff, diff)

    comp_sq_sum = 0
    for fiber in model.non_reduced_fibers():
        for comp in fiber.components:
            comp_sq_sum += lat.entry(comp.class_id, comp.class_id)
    lhs = -comp_sq_sum
    rhs = 2 * _c2_non_reduced(model) - diff_sq

    recon = []
    for fiber in model.fibers:
        for comp in fiber.components:
            acc = 0
            for other in fiber.components:
                if other.comp_index == comp.comp_index:
                    continue
                acc += other.multiplicity * lat.entry(comp.class_id, other.class_id)
            recomputed = Fraction(-acc, comp.multiplicity)
            if recomputed.denominator == 1:
                recomputed = int(recomputed)
            elif lat.is_integral:
                raise LatticeError(
                    f"divisibility failure reconstructing {comp.class_id!r}^2: "
                    f"{-acc} not divisible by {comp.multiplicity}"
                )
            recon.append((comp.class_id, lat.entry(comp.class_id, comp.class_id), recomputed))

    reduced_singular = any(f.is_reduced and len(f.components) > 1 for f in model.fibers)
    notes = ()
    if reduced_singular:
        notes = (
            "reduced singular fibers present; component sum and c2 restricted to non-reduced fibers",
        )
    return IdentitySuiteReport(
        delta_square_lhs=delta_sq,
        delta_square_rhs=diff_sq,
        component_sum_lhs=lhs,
        component_sum_rhs=rhs,
        reconstruction=tuple(recon),
        reduced_singular_fibers_present=reduced_singular,
        notes=notes,
    )


def propagate_multiplicity_bounds(model: FibrationModel, fiber_index: int, j0: int, bound: int) -> Dict[int, int]:
    """Chain a bound on one component's multiplicity through the fiber.

    From 0 = F_j * (sum_k n_k F_k) each neighbour k of a bounded component j
    satisfies n_k <= b_j * (-F_j^2) / (F_j*F_k); relaxing over the dual graph
    until stable gives a finite bound for every component of the fiber."""
    model.require_valid()
    fiber = model.fiber(fiber_index)
    start = fiber.component(j0)
    if bound < start.multiplicity:
        raise InconsistentInputError(
            f"bound {bound} is below the known multiplicity {start.multiplicity}"
        )
    graph = _dual_graph(model, fiber)
    if not _connected(graph):
        raise DisconnectedFiberError(f"fiber {fiber_index} dual graph disconnected")

    lat = model.lattice
    self_sq = {c.comp_index: lat.entry(c.class_id, c.class_id) for c in fiber.components}
    bounds: Dict[int, int] = {j0: bound}
    changed = True
    while changed:
        changed = False
        for j, bj in list(bounds.items()):
            for kk, w in graph[j].items():
                candidate = (bj * (-self_sq[j])) // w
                if kk not in bounds or candidate < bounds[kk]:
                    bounds[kk] = candidate
                    changed = True
    return bounds


@dataclass(frozen=True)
class ZeroPairingScan:
    offenders: Tuple[str, ...]
    warnings: Tuple[str, ...] = ()


def zero_pairing_scan(model: FibrationModel) -> ZeroPairingScan:
    """List vertical classes pairing to zero with the foliation canonical
    that are not (-2) rational curves. Empty means the model is consistent
    with the big-and-nef regime; below genus 2 only a hypothesis warning
    is emitted."""
    model.require_valid()
    if model.genus < 2:
        return ZeroPairingScan(
            offenders=(),
            warnings=(f"fiber genus {model.genus} < 2: big-and-nef regime hypothesis not met",),
        )
    lat = model.lattice
    kf = foliation_canonical(model)
    offenders = []
    for v in lat.ids_of_kind(KIND_VERTICAL):
        if lat.pair(kf, Divisor.of(v)) != 0:
            continue
        if lat.entry(v, v) != -2:
            offenders.append(v)
            continue
        cls = lat.curve_class(v)
        if cls.genus is None:
            raise LatticeError(f"missing genus data on scanned class {v!r}")
        if cls.genus != 0:
            offenders.append(v)
    return ZeroPairingScan(offenders=tuple(offenders))
