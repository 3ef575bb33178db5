"""Exact intersection-theoretic models of fibered surfaces and the
foliations defined by plane pencils: divisor lattices, singular-fiber
identities, cyclic base-change bookkeeping, base point resolution and the
classical genus-bound predicates. All arithmetic is exact."""

from .errors import (
    CoverDegreeError,
    DescriptorError,
    FibsurfError,
    GenusTooSmallError,
    InconsistentInputError,
    InfeasibleSpecError,
    InvalidModelError,
    LatticeError,
    NegativeGenusError,
    NonIntegralGenusError,
    ParityViolationError,
    SchemaError,
    SweepError,
    UnknownClassError,
    ZeroPairingHorizontalError,
)
from .fibration import (
    Fiber,
    FiberComponent,
    FibrationModel,
    ValidationReport,
    c2_count,
    delta_divisors,
    foliation_canonical,
    identity_suite,
    propagate_multiplicity_bounds,
    relative_canonical,
    validate,
    zero_pairing_scan,
)
from .generator import RandomModelSpec, generate_models
from .lattice import (
    KIND_CANONICAL,
    KIND_FIBER,
    KIND_HORIZONTAL,
    KIND_VERTICAL,
    CurveClass,
    Divisor,
    IntersectionLattice,
)
from .pencil import (
    BasePoint,
    BranchRef,
    LocalSingularity,
    MemberComponent,
    PencilDescriptor,
    ResolutionChain,
    SpecialMember,
    TransitRef,
    assemble_fibration,
    classify_singularity,
    degree_checks,
    germ_multiplicity_sequence,
    local_model,
    resolve_base_point,
    total_transform_orders,
)
from .reduction import (
    ReductionContext,
    SectionCounts,
    base_change_sweep,
    base_genus,
    chi_balance,
    component_pull_pair,
    eigenvalue_genus_bound,
    min_cover_degree,
    multiplicity_dichotomy,
    pullback_pair,
    section_count_predicates,
)

__version__ = "0.1.0"
