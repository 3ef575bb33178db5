"""Exact divisor arithmetic over a finite set of curve classes.

A lattice holds finitely many named curve classes together with a stored
symmetric pairing. Every global model (files, generator output, resolved
pencils) has an integer pairing; germ-level models produced by the local
resolution of a single base point need exact rationals on the diagonal of
the two branch curves, so entries are integers or `fractions.Fraction`
values and all arithmetic is exact. No floating point anywhere.

All objects are immutable after construction and all operations are pure,
so lattices can be shared freely between concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .errors import (
    LatticeError,
    NegativeGenusError,
    NonIntegralGenusError,
    ParityViolationError,
    UnknownClassError,
)

KIND_VERTICAL = "vertical-component"
KIND_FIBER = "generic-fiber"
KIND_HORIZONTAL = "horizontal"
KIND_CANONICAL = "canonical"

KINDS = (KIND_VERTICAL, KIND_FIBER, KIND_HORIZONTAL, KIND_CANONICAL)

Number = Union[int, Fraction]


def _normalize(value: Number) -> Number:
    """Collapse integral fractions to plain ints; reject everything else."""
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise LatticeError(f"pairing entries must be exact integers or fractions, got {value!r}")
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


@dataclass(frozen=True)
class CurveClass:
    """A named curve class. Genus is optional and only required for classes
    that enter the zero-pairing scan or carry a declared-genus cross check."""

    id: str
    kind: str
    genus: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise LatticeError(f"unknown class kind {self.kind!r} for {self.id!r}")
        if self.genus is not None and (not isinstance(self.genus, int) or self.genus < 0):
            raise LatticeError(f"class {self.id!r}: genus must be a nonnegative integer")


class Divisor:
    """Finite integer combination of curve classes. The empty map is zero."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[str, int]] = None):
        clean = {}
        for cid, c in (coeffs or {}).items():
            if isinstance(c, bool) or not isinstance(c, int):
                raise LatticeError(f"divisor coefficient for {cid!r} must be an integer")
            if c != 0:
                clean[cid] = c
        self._coeffs = clean

    @classmethod
    def zero(cls) -> "Divisor":
        return cls()

    @classmethod
    def of(cls, cid: str, coeff: int = 1) -> "Divisor":
        return cls({cid: coeff})

    def coeff(self, cid: str) -> int:
        return self._coeffs.get(cid, 0)

    def items(self):
        return self._coeffs.items()

    @property
    def support(self):
        return frozenset(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self._coeffs)
        for cid, c in other.items():
            out[cid] = out.get(cid, 0) + c
        return Divisor(out)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __neg__(self) -> "Divisor":
        return Divisor({cid: -c for cid, c in self._coeffs.items()})

    def __rmul__(self, scalar: int) -> "Divisor":
        if isinstance(scalar, bool) or not isinstance(scalar, int):
            raise LatticeError("divisors only scale by integers")
        return Divisor({cid: scalar * c for cid, c in self._coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self):
        if not self._coeffs:
            return "Divisor(0)"
        parts = [f"{c}*{cid}" for cid, c in sorted(self._coeffs.items())]
        return "Divisor(" + " + ".join(parts) + ")"


class IntersectionLattice:
    """Curve classes plus a stored symmetric exact pairing.

    `pairing` maps class id to a mapping of class ids to values; it must be
    total and symmetric. Exactly one class must be canonical (K_S) and
    exactly one the generic fiber (C). Numeric invariants such as C*C = 0
    are *reported* by :meth:`invariant_violations`, not enforced here, so
    that broken input files can be diagnosed instead of rejected opaquely.
    """

    def __init__(self, classes: Iterable[CurveClass], pairing: Mapping[str, Mapping[str, Number]]):
        by_id = {}
        for cls in classes:
            if cls.id in by_id:
                raise LatticeError(f"duplicate class id {cls.id!r}")
            by_id[cls.id] = cls
        canonical = [c.id for c in by_id.values() if c.kind == KIND_CANONICAL]
        fiber = [c.id for c in by_id.values() if c.kind == KIND_FIBER]
        if len(canonical) != 1:
            raise LatticeError(f"expected exactly one canonical class, got {len(canonical)}")
        if len(fiber) != 1:
            raise LatticeError(f"expected exactly one generic-fiber class, got {len(fiber)}")
        self._classes = by_id
        self._canonical = canonical[0]
        self._fiber = fiber[0]

        entries = {}
        ids = set(by_id)
        if set(pairing) != ids:
            missing = ids - set(pairing)
            extra = set(pairing) - ids
            raise LatticeError(f"pairing rows mismatch: missing {sorted(missing)}, unknown {sorted(extra)}")
        for a, row in pairing.items():
            if set(row) != ids:
                raise LatticeError(f"pairing row {a!r} does not cover all class ids")
            for b, v in row.items():
                entries[(a, b)] = _normalize(v)
        for a in ids:
            for b in ids:
                if entries[(a, b)] != entries[(b, a)]:
                    raise LatticeError(f"pairing not symmetric at ({a!r}, {b!r})")
        self._entries = entries
        self._integral = all(isinstance(v, int) for v in entries.values())

    # -- basic access -----------------------------------------------------

    @property
    def canonical_id(self) -> str:
        return self._canonical

    @property
    def fiber_id(self) -> str:
        return self._fiber

    @property
    def is_integral(self) -> bool:
        return self._integral

    @property
    def ids(self):
        return tuple(self._classes)

    @property
    def classes(self):
        return tuple(self._classes.values())

    def curve_class(self, cid: str) -> CurveClass:
        try:
            return self._classes[cid]
        except KeyError:
            raise UnknownClassError(f"unknown class id {cid!r}") from None

    def ids_of_kind(self, kind: str):
        return tuple(c.id for c in self._classes.values() if c.kind == kind)

    def entry(self, a: str, b: str) -> Number:
        if a not in self._classes:
            raise UnknownClassError(f"unknown class id {a!r}")
        if b not in self._classes:
            raise UnknownClassError(f"unknown class id {b!r}")
        return self._entries[(a, b)]

    # -- arithmetic -------------------------------------------------------

    def pair(self, d1: Divisor, d2: Divisor) -> Number:
        """Bilinear extension of the stored pairing. Symmetric by construction."""
        total = Fraction(0)
        for a, ca in d1.items():
            for b, cb in d2.items():
                total += ca * cb * Fraction(self.entry(a, b))
        return _normalize(total)

    def canonical_divisor(self) -> Divisor:
        return Divisor.of(self._canonical)

    def fiber_divisor(self) -> Divisor:
        return Divisor.of(self._fiber)

    def adjunction_genus(self, cid: str) -> int:
        """Genus g with 2g - 2 = v*v + K*v for a vertical or horizontal class."""
        cls = self.curve_class(cid)
        if cls.kind not in (KIND_VERTICAL, KIND_HORIZONTAL):
            raise LatticeError(f"adjunction genus is only defined for curves, not {cls.kind!r}")
        rhs = Fraction(self.entry(cid, cid)) + Fraction(self.entry(self._canonical, cid))
        g2 = rhs + 2
        if g2 % 2 != 0:
            raise NonIntegralGenusError(f"class {cid!r}: v*v + K*v = {rhs} is odd")
        g = g2 / 2
        if g.denominator != 1:
            raise NonIntegralGenusError(f"class {cid!r}: adjunction genus {g} is not an integer")
        g = int(g)
        if g < 0:
            raise NegativeGenusError(f"class {cid!r}: adjunction genus {g} is negative")
        return g

    def rr_chi_exact(self, d: Divisor, chi_o: int) -> Number:
        """chi_O + d*(d - K)/2 as an exact value, no integrality constraint."""
        k = self.canonical_divisor()
        return _normalize(chi_o + Fraction(self.pair(d, d) - self.pair(d, k), 2))

    def riemann_roch_chi(self, d: Divisor, chi_o: int) -> int:
        """Surface Riemann-Roch: chi_O + (d*d - d*K)/2, must be an integer."""
        value = self.rr_chi_exact(d, chi_o)
        if not isinstance(value, int):
            raise ParityViolationError(f"d*(d - K) = {self.pair(d, d) - self.pair(d, self.canonical_divisor())} is odd")
        return value

    # -- invariants -------------------------------------------------------

    def invariant_violations(self, declared_k_self: Optional[int] = None) -> list:
        """Numeric pairing-table invariants, reported rather than raised."""
        out = []
        c = self._fiber
        if self.entry(c, c) != 0:
            out.append("generic fiber self-intersection nonzero")
        for v in self.ids_of_kind(KIND_VERTICAL):
            if self.entry(c, v) != 0:
                out.append(f"generic fiber pairs nonzero with vertical class {v!r}")
        if declared_k_self is not None and self.entry(self._canonical, self._canonical) != declared_k_self:
            out.append(
                f"declared K_self {declared_k_self} differs from stored K*K = "
                f"{self.entry(self._canonical, self._canonical)}"
            )
        return out

    def __eq__(self, other):
        return (
            isinstance(other, IntersectionLattice)
            and self._classes == other._classes
            and self._entries == other._entries
        )

    def __repr__(self):
        return f"IntersectionLattice({len(self._classes)} classes)"
