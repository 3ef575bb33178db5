"""Plane pencils: local singularity types, base point resolution, assembly.

A non-degenerate pencil singularity is either dicritical (a base point,
local form x^p - t*y^q) or a saddle (x^p y^q = t, away from the base
locus). Base points are resolved purely on valuation pairs: subtractive
Euclid on (p, q), which provably matches the chart-by-chart blow-up on the
non-degenerate local form (the charts live in the test oracle only).

`assemble_fibration` turns a full pencil descriptor into a fibration model
by expanding every tracked curve in the orthogonal basis of a hyperplane
class and the blow-up centers, which makes the resolved fibers literally
equal to the generic member class.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DescriptorError, InconsistentInputError
from .fibration import Fiber, FiberComponent, FibrationModel
from .lattice import (
    KIND_CANONICAL,
    KIND_FIBER,
    KIND_HORIZONTAL,
    KIND_VERTICAL,
    CurveClass,
    IntersectionLattice,
)

DICRITICAL = "dicritical"
SADDLE = "saddle"

VERTICAL_OVER_ZERO = "vertical-over-0"
VERTICAL_OVER_INF = "vertical-over-inf"
HORIZONTAL = "horizontal"

X_BRANCH = "X"
Y_BRANCH = "Y"


@dataclass(frozen=True)
class LocalSingularity:
    """A pencil singular point with local exponents (p, q)."""

    kind: str
    p: int
    q: int

    def __post_init__(self):
        if self.kind not in (DICRITICAL, SADDLE):
            raise InconsistentInputError(f"unknown singularity kind {self.kind!r}")
        if self.p < 1 or self.q < 1:
            raise InconsistentInputError("local exponents must be positive")

    @property
    def a(self) -> int:
        return math.gcd(self.p, self.q)

    @property
    def p_reduced(self) -> int:
        return self.p // self.a

    @property
    def q_reduced(self) -> int:
        return self.q // self.a


def classify_singularity(eigenvalues: Tuple[int, int]) -> LocalSingularity:
    """Classify a non-degenerate singularity from its linear-part eigenvalues.

    Same signs mean dicritical, opposite signs a saddle; the reduced pair
    (p', q') is recovered as absolute values (the gcd factor is invisible
    to the linear part)."""
    e1, e2 = eigenvalues
    if e1 == 0 or e2 == 0:
        raise InconsistentInputError("degenerate singularity: zero eigenvalue is out of scope")
    kind = DICRITICAL if (e1 > 0) == (e2 > 0) else SADDLE
    return LocalSingularity(kind=kind, p=abs(e1), q=abs(e2))


# ---------------------------------------------------------------------------
# base point resolution on valuation pairs


@dataclass(frozen=True)
class ChainCurve:
    name: str
    v_x: int
    v_y: int
    status: str
    multiplicity: int  # |p*v_x - q*v_y|; 0 for the horizontal curve
    self_intersection: int


@dataclass(frozen=True)
class ResolutionChain:
    """Exceptional curves of one resolved base point, in creation order.

    The two parent branches are the strict transforms of {x = 0} and
    {y = 0}; they are referred to by the sentinel names "X" and "Y" in
    adjacency and center data."""

    p: int
    q: int
    curves: Tuple[ChainCurve, ...]
    centers: Tuple[Tuple[str, str], ...]
    adjacency: Tuple[Tuple[str, str], ...]
    x_center_count: int
    y_center_count: int

    @property
    def gcd(self) -> int:
        return math.gcd(self.p, self.q)

    @property
    def horizontal(self) -> ChainCurve:
        return self.curves[-1]

    def curve(self, name: str) -> ChainCurve:
        for c in self.curves:
            if c.name == name:
                return c
        raise InconsistentInputError(f"no chain curve named {name!r}")

    def neighbors(self, name: str) -> Tuple[str, ...]:
        out = []
        for a, b in self.adjacency:
            if a == name:
                out.append(b)
            elif b == name:
                out.append(a)
        return tuple(out)

    def fiber_over_zero(self) -> Tuple[Tuple[str, int], ...]:
        parts = [(X_BRANCH, self.p)]
        parts.extend((c.name, c.multiplicity) for c in self.curves if c.status == VERTICAL_OVER_ZERO)
        return tuple(parts)

    def fiber_over_inf(self) -> Tuple[Tuple[str, int], ...]:
        parts = [(Y_BRANCH, self.q)]
        parts.extend((c.name, c.multiplicity) for c in self.curves if c.status == VERTICAL_OVER_INF)
        return tuple(parts)


def resolve_base_point(p: int, q: int) -> ResolutionChain:
    """Resolve a dicritical point of local type (p, q).

    Two parent branches start at valuations (1,0) and (0,1); each blow-up
    sits at the crossing of the current parents and creates an exceptional
    curve carrying the sum of their valuations. Descent is subtractive
    Euclid on the signed defect p*v_x - q*v_y and stops at defect zero,
    which is the unique horizontal (dicritical) curve."""
    if p < 1 or q < 1:
        raise InconsistentInputError("base point exponents must be positive")

    def defect(v):
        return p * v[0] - q * v[1]

    plus = (X_BRANCH, (1, 0))
    minus = (Y_BRANCH, (0, 1))
    edges = {frozenset((X_BRANCH, Y_BRANCH))}
    self_int: Dict[str, int] = {}
    x_centers = 0
    y_centers = 0
    centers: List[Tuple[str, str]] = []
    created: List[Tuple[str, Tuple[int, int], str, int]] = []

    step = 0
    while True:
        step += 1
        name = f"E{step}"
        centers.append((plus[0], minus[0]))
        for parent in (plus[0], minus[0]):
            if parent == X_BRANCH:
                x_centers += 1
            elif parent == Y_BRANCH:
                y_centers += 1
            else:
                self_int[parent] -= 1
        edges.discard(frozenset((plus[0], minus[0])))
        edges.add(frozenset((plus[0], name)))
        edges.add(frozenset((name, minus[0])))
        self_int[name] = -1

        v = (plus[1][0] + minus[1][0], plus[1][1] + minus[1][1])
        d = defect(v)
        if d > 0:
            created.append((name, v, VERTICAL_OVER_ZERO, d))
            plus = (name, v)
        elif d < 0:
            created.append((name, v, VERTICAL_OVER_INF, -d))
            minus = (name, v)
        else:
            created.append((name, v, HORIZONTAL, 0))
            break

    curves = tuple(
        ChainCurve(name, v[0], v[1], status, mult, self_int[name])
        for name, v, status, mult in created
    )
    adjacency = tuple(sorted(tuple(sorted(e)) for e in edges))
    return ResolutionChain(
        p=p,
        q=q,
        curves=curves,
        centers=tuple(centers),
        adjacency=adjacency,
        x_center_count=x_centers,
        y_center_count=y_centers,
    )


def total_transform_orders(chain: ResolutionChain) -> Tuple[int, ...]:
    """min(p*v_x, q*v_y) per exceptional curve: the order of the generic
    member's total transform along it."""
    return tuple(min(chain.p * c.v_x, chain.q * c.v_y) for c in chain.curves)


def germ_multiplicity_sequence(chain: ResolutionChain, pp: int, qq: int) -> Tuple[int, ...]:
    """Multiplicities of the germ x^pp - t*y^qq at the successive centers
    of the chain (generic t). Branch parents carry order zero."""
    order = {X_BRANCH: 0, Y_BRANCH: 0}
    for curve in chain.curves:
        order[curve.name] = min(pp * curve.v_x, qq * curve.v_y)
    out = []
    for curve, (pa, pb) in zip(chain.curves, chain.centers):
        out.append(order[curve.name] - order[pa] - order[pb])
    return tuple(out)


# ---------------------------------------------------------------------------
# germ-level fibration model for a single base point


def local_model(p: int, q: int) -> FibrationModel:
    """Fibration model of the resolved germ of a single base point.

    The two branch curves need rational self-pairings (pX'^2 balances the
    adjacent multiplicity), so the resulting lattice is exact-rational on
    those two diagonal entries and integral everywhere else. Fibers pair
    to zero against every chain curve and square to zero exactly."""
    chain = resolve_base_point(p, q)
    ids = [X_BRANCH, Y_BRANCH] + [c.name for c in chain.curves] + ["C", "K"]
    horiz = chain.horizontal.name

    classes = [
        CurveClass(X_BRANCH, KIND_VERTICAL),
        CurveClass(Y_BRANCH, KIND_VERTICAL),
    ]
    for c in chain.curves:
        kind = KIND_HORIZONTAL if c.status == HORIZONTAL else KIND_VERTICAL
        classes.append(CurveClass(c.name, kind, genus=0))
    classes.append(CurveClass("C", KIND_FIBER))
    classes.append(CurveClass("K", KIND_CANONICAL))

    entries: Dict[str, Dict[str, object]] = {a: {b: 0 for b in ids} for a in ids}

    def put(a, b, v):
        entries[a][b] = v
        entries[b][a] = v

    for a, b in chain.adjacency:
        put(a, b, 1)
    for c in chain.curves:
        put(c.name, c.name, c.self_intersection)

    def side_sum(branch, status):
        total = 0
        for nb in _branch_neighbors(chain, branch):
            curve = chain.curve(nb)
            if curve.status == status:
                total += curve.multiplicity
        return total

    put(X_BRANCH, X_BRANCH, Fraction(-side_sum(X_BRANCH, VERTICAL_OVER_ZERO), p))
    put(Y_BRANCH, Y_BRANCH, Fraction(-side_sum(Y_BRANCH, VERTICAL_OVER_INF), q))

    # canonical row: adjunction on the rational exceptionals, fiber-degree
    # balance (germ genus 0) on the branches
    for c in chain.curves:
        put("K", c.name, -2 - c.self_intersection)
    k_zero_side = sum(
        c.multiplicity * entries["K"][c.name] for c in chain.curves if c.status == VERTICAL_OVER_ZERO
    )
    k_inf_side = sum(
        c.multiplicity * entries["K"][c.name] for c in chain.curves if c.status == VERTICAL_OVER_INF
    )
    put("K", X_BRANCH, Fraction(-2 - k_zero_side, p))
    put("K", Y_BRANCH, Fraction(-2 - k_inf_side, q))
    put("K", "C", -2)
    put("K", "K", 0)
    put("C", horiz, chain.gcd)
    put("C", "C", 0)

    lattice = IntersectionLattice(classes, entries)
    fibers = [
        Fiber(0, tuple(FiberComponent(0, j, cid, m) for j, (cid, m) in enumerate(chain.fiber_over_zero()))),
        Fiber(1, tuple(FiberComponent(1, j, cid, m) for j, (cid, m) in enumerate(chain.fiber_over_inf()))),
    ]
    return FibrationModel(lattice, base_genus=0, genus=0, chi_o=1, fibers=fibers)


def _branch_neighbors(chain: ResolutionChain, branch: str) -> Tuple[str, ...]:
    out = []
    for a, b in chain.adjacency:
        if a == branch:
            out.append(b)
        elif b == branch:
            out.append(a)
    return tuple(out)


# ---------------------------------------------------------------------------
# pencil descriptors


@dataclass(frozen=True)
class MemberComponent:
    id: str
    degree: int
    multiplicity: int


@dataclass(frozen=True)
class SpecialMember:
    label: str
    components: Tuple[MemberComponent, ...]


@dataclass(frozen=True)
class BranchRef:
    """Owner of one local branch: a special-member component, or generic."""

    member: Optional[str] = None
    component: Optional[str] = None

    @property
    def is_generic(self) -> bool:
        return self.member is None


@dataclass(frozen=True)
class TransitRef:
    """A special member crossing a base point without owning a branch; it
    follows `branches` of the gcd(p, q) conjugate germ branches."""

    member: str
    component: str
    branches: int = 1


@dataclass(frozen=True)
class BasePoint:
    id: str
    p: int
    q: int
    x_branch: BranchRef = field(default_factory=BranchRef)
    y_branch: BranchRef = field(default_factory=BranchRef)
    transits: Tuple[TransitRef, ...] = ()


@dataclass(frozen=True)
class PencilDescriptor:
    degree: int
    members: Tuple[SpecialMember, ...] = ()
    base_points: Tuple[BasePoint, ...] = ()
    saddles: Tuple[Tuple[int, int], ...] = ()
    foliation_degree: Optional[int] = None


def validate_descriptor(desc: PencilDescriptor) -> None:
    if desc.degree < 1:
        raise DescriptorError("pencil degree must be positive")
    comp_owner: Dict[str, str] = {}
    labels = set()
    for member in desc.members:
        if member.label in labels:
            raise DescriptorError(f"duplicate member label {member.label!r}")
        labels.add(member.label)
        if not member.components:
            raise DescriptorError(f"member {member.label!r} has no components")
        total = 0
        for comp in member.components:
            if comp.id in comp_owner:
                raise DescriptorError(f"duplicate component id {comp.id!r}")
            comp_owner[comp.id] = member.label
            if comp.degree < 1 or comp.multiplicity < 1:
                raise DescriptorError(f"component {comp.id!r} has nonpositive degree or multiplicity")
            total += comp.degree * comp.multiplicity
        if total != desc.degree:
            raise DescriptorError(
                f"member {member.label!r}: sum of degree*multiplicity is {total}, expected {desc.degree}"
            )

    members_by_label = {m.label: m for m in desc.members}
    point_ids = set()
    for bp in desc.base_points:
        if bp.id in point_ids:
            raise DescriptorError(f"duplicate base point id {bp.id!r}")
        point_ids.add(bp.id)
        if bp.p < 1 or bp.q < 1:
            raise DescriptorError(f"base point {bp.id!r}: exponents must be positive")
        owners = []
        for side, ref, exponent in (("x", bp.x_branch, bp.p), ("y", bp.y_branch, bp.q)):
            if ref.is_generic:
                if exponent != 1:
                    raise DescriptorError(
                        f"base point {bp.id!r}: {side}-branch is generic but exponent is {exponent}"
                    )
                continue
            member = members_by_label.get(ref.member)
            if member is None:
                raise DescriptorError(f"base point {bp.id!r}: unknown member {ref.member!r}")
            comp = next((c for c in member.components if c.id == ref.component), None)
            if comp is None:
                raise DescriptorError(
                    f"base point {bp.id!r}: member {ref.member!r} has no component {ref.component!r}"
                )
            if comp.multiplicity != exponent:
                raise DescriptorError(
                    f"base point {bp.id!r}: {side}-branch exponent {exponent} does not match "
                    f"multiplicity {comp.multiplicity} of component {ref.component!r}"
                )
            owners.append(ref.member)
        if len(owners) == 2 and owners[0] == owners[1]:
            raise DescriptorError(
                f"base point {bp.id!r}: both branches belong to member {owners[0]!r}"
            )
        for tr in bp.transits:
            if tr.member in owners:
                raise DescriptorError(
                    f"base point {bp.id!r}: member {tr.member!r} owns a branch and cannot transit"
                )
            member = members_by_label.get(tr.member)
            if member is None:
                raise DescriptorError(f"base point {bp.id!r}: unknown transit member {tr.member!r}")
            if all(c.id != tr.component for c in member.components):
                raise DescriptorError(
                    f"base point {bp.id!r}: transit component {tr.component!r} not in member {tr.member!r}"
                )
            if tr.branches < 1 or tr.branches > math.gcd(bp.p, bp.q):
                raise DescriptorError(
                    f"base point {bp.id!r}: transit branch count {tr.branches} out of range"
                )


# ---------------------------------------------------------------------------
# assembly


def assemble_fibration(desc: PencilDescriptor) -> FibrationModel:
    """Resolve every base point and build the global fibration model.

    Every tracked curve is written in the basis (H; one coordinate per
    blow-up center) with H^2 = 1 and centers mutually orthogonal of square
    -1; pairings, the canonical row and the generic member class are then
    plain inner products, and the assembled fibers come out numerically
    equal to C by construction (anything else means the descriptor lies
    about its local types)."""
    validate_descriptor(desc)
    chains = {bp.id: resolve_base_point(bp.p, bp.q) for bp in desc.base_points}

    center_keys: List[Tuple[str, int]] = []
    for bp in desc.base_points:
        for t in range(len(chains[bp.id].centers)):
            center_keys.append((bp.id, t))

    def new_vec(h=0):
        return {"H": h, **{key: 0 for key in center_keys}}

    vectors: Dict[str, Dict] = {}

    # strict transforms of the special member components
    for member in desc.members:
        for comp in member.components:
            vectors[comp.id] = new_vec(comp.degree)
    for bp in desc.base_points:
        chain = chains[bp.id]
        for side_ref, parent in ((bp.x_branch, X_BRANCH), (bp.y_branch, Y_BRANCH)):
            if side_ref.is_generic:
                continue
            vec = vectors[side_ref.component]
            for t, parents in enumerate(chain.centers):
                if parent in parents:
                    vec[(bp.id, t)] -= 1
        for tr in bp.transits:
            seq = germ_multiplicity_sequence(
                chain, bp.p // math.gcd(bp.p, bp.q), bp.q // math.gcd(bp.p, bp.q)
            )
            vec = vectors[tr.component]
            for t, m in enumerate(seq):
                vec[(bp.id, t)] -= tr.branches * m

    # exceptional curves (strict transforms)
    exc_ids: Dict[Tuple[str, str], str] = {}
    for bp in desc.base_points:
        chain = chains[bp.id]
        for idx, curve in enumerate(chain.curves):
            cid = f"{bp.id}.{curve.name}"
            exc_ids[(bp.id, curve.name)] = cid
            vec = new_vec()
            vec[(bp.id, idx)] = 1
            for t in range(idx + 1, len(chain.centers)):
                if curve.name in chain.centers[t]:
                    vec[(bp.id, t)] -= 1
            vectors[cid] = vec

    # generic member and canonical class
    c_vec = new_vec(desc.degree)
    for bp in desc.base_points:
        for t, m in enumerate(germ_multiplicity_sequence(chains[bp.id], bp.p, bp.q)):
            c_vec[(bp.id, t)] -= m
    vectors["C"] = c_vec
    k_vec = new_vec(-3)
    for key in center_keys:
        k_vec[key] = 1
    vectors["K"] = k_vec

    def gram(u, v):
        total = u["H"] * v["H"]
        for key in center_keys:
            total -= u[key] * v[key]
        return total

    classes: List[CurveClass] = []
    for member in desc.members:
        for comp in member.components:
            genus = (comp.degree - 1) * (comp.degree - 2) // 2
            classes.append(CurveClass(comp.id, KIND_VERTICAL, genus=genus))
    for bp in desc.base_points:
        for curve in chains[bp.id].curves:
            kind = KIND_HORIZONTAL if curve.status == HORIZONTAL else KIND_VERTICAL
            classes.append(CurveClass(exc_ids[(bp.id, curve.name)], kind, genus=0))
    classes.append(CurveClass("C", KIND_FIBER))
    classes.append(CurveClass("K", KIND_CANONICAL))

    ids = [c.id for c in classes]
    entries = {a: {b: gram(vectors[a], vectors[b]) for b in ids} for a in ids}
    lattice = IntersectionLattice(classes, entries)

    fibers: List[Fiber] = []
    for index, member in enumerate(desc.members):
        parts: List[Tuple[str, int]] = [(c.id, c.multiplicity) for c in member.components]
        for bp in desc.base_points:
            chain = chains[bp.id]
            for side_ref, status in (
                (bp.x_branch, VERTICAL_OVER_ZERO),
                (bp.y_branch, VERTICAL_OVER_INF),
            ):
                if side_ref.is_generic or side_ref.member != member.label:
                    continue
                for curve in chain.curves:
                    if curve.status == status:
                        parts.append((exc_ids[(bp.id, curve.name)], curve.multiplicity))
        fibers.append(
            Fiber(index, tuple(FiberComponent(index, j, cid, m) for j, (cid, m) in enumerate(parts)))
        )

    kc = lattice.pair(lattice.canonical_divisor(), lattice.fiber_divisor())
    if kc % 2 != 0:
        raise DescriptorError(f"K*C = {kc} is odd: degrees and local types are inconsistent")
    genus = kc // 2 + 1
    if genus < 0:
        raise DescriptorError(f"derived fiber genus {genus} is negative")

    model = FibrationModel(lattice, base_genus=0, genus=genus, chi_o=1, fibers=fibers)
    report = model.validation()
    if not report.ok:
        raise DescriptorError(
            "descriptor inconsistent with its declared local types: " + "; ".join(report.violations)
        )
    return model


# ---------------------------------------------------------------------------
# classical degree checks


@dataclass(frozen=True)
class DegreeChecksReport:
    degree_formula_lhs: int
    degree_formula_rhs: int
    foliation_degree: int
    genus_inequality_lhs: int
    genus_inequality_rhs: int
    horizontal_per_point_ok: bool
    fibers_complete_ok: bool
    saddle_count_expected: Optional[int]
    saddle_count_found: Optional[int]

    @property
    def degree_formula_ok(self) -> bool:
        return self.degree_formula_lhs == self.degree_formula_rhs

    @property
    def genus_inequality_ok(self) -> bool:
        return self.genus_inequality_lhs >= self.genus_inequality_rhs

    @property
    def structural_ok(self) -> bool:
        return self.horizontal_per_point_ok and self.fibers_complete_ok

    @property
    def saddle_ok(self) -> Optional[bool]:
        if self.saddle_count_expected is None:
            return None
        return self.saddle_count_expected == self.saddle_count_found

    @property
    def all_ok(self) -> bool:
        return (
            self.degree_formula_ok
            and self.genus_inequality_ok
            and self.structural_ok
            and self.saddle_ok is not False
        )


def degree_checks(desc: PencilDescriptor, model: FibrationModel) -> DegreeChecksReport:
    """Poincare's classical degree relation 2d - 2 = m + sum d_ij (n_ij - 1),
    his genus inequality in integer form 4(g - 1) >= (m - 4) d, and the
    structural completeness of the resolution."""
    sigma = sum(
        comp.degree * (comp.multiplicity - 1)
        for member in desc.members
        for comp in member.components
    )
    m = desc.foliation_degree if desc.foliation_degree is not None else 2 * desc.degree - 2 - sigma

    chains = {bp.id: resolve_base_point(bp.p, bp.q) for bp in desc.base_points}
    one_horizontal = all(
        sum(1 for c in chain.curves if c.status == HORIZONTAL) == 1 for chain in chains.values()
    )
    lat = model.lattice
    fibers_complete = model.validation().ok and lat.entry(lat.fiber_id, lat.fiber_id) == 0

    expected = found = None
    if desc.saddles:
        expected = len(desc.saddles)
        member_comp_ids = {c.id for member in desc.members for c in member.components}
        found = 0
        for fiber in model.fibers:
            for a, b in itertools.combinations(fiber.components, 2):
                if a.class_id in member_comp_ids and b.class_id in member_comp_ids:
                    found += lat.entry(a.class_id, b.class_id)

    return DegreeChecksReport(
        degree_formula_lhs=2 * desc.degree - 2,
        degree_formula_rhs=m + sigma,
        foliation_degree=m,
        genus_inequality_lhs=4 * (model.genus - 1),
        genus_inequality_rhs=(m - 4) * desc.degree,
        horizontal_per_point_ok=one_horizontal,
        fibers_complete_ok=fibers_complete,
        saddle_count_expected=expected,
        saddle_count_found=found,
    )
