import pytest

from fibsurf import (
    BasePoint,
    BranchRef,
    CurveClass,
    Fiber,
    FiberComponent,
    FibrationModel,
    IntersectionLattice,
    MemberComponent,
    PencilDescriptor,
    SpecialMember,
)


def make_lattice(classes, entries):
    """Build a lattice from an upper-triangular entry dict; missing pairs are 0."""
    ids = [c.id for c in classes]
    table = {a: {b: 0 for b in ids} for a in ids}
    for (a, b), v in entries.items():
        table[a][b] = v
        table[b][a] = v
    return IntersectionLattice(classes, table)


def make_model(classes, entries, fibers, genus, base_genus=0, chi_o=1):
    lattice = make_lattice(classes, entries)
    built = [
        Fiber(i, tuple(FiberComponent(i, j, cid, m) for j, (cid, m) in enumerate(comps)))
        for i, comps in enumerate(fibers)
    ]
    return FibrationModel(lattice, base_genus=base_genus, genus=genus, chi_o=chi_o, fibers=built)


@pytest.fixture
def bare_model():
    """No singular fibers: classes K, C only, genus 2 surface."""
    classes = [CurveClass("K", "canonical"), CurveClass("C", "generic-fiber")]
    entries = {("K", "K"): -1, ("K", "C"): 2, ("C", "C"): 0}
    return make_model(classes, entries, [], genus=2)


@pytest.fixture
def double_fiber_model():
    """One multiple fiber 2A + B with A.B = 2, A^2 = -1, B^2 = -4; g = 2."""
    classes = [
        CurveClass("K", "canonical"),
        CurveClass("C", "generic-fiber"),
        CurveClass("A", "vertical-component", genus=0),
        CurveClass("B", "vertical-component", genus=1),
    ]
    entries = {
        ("K", "K"): -1,
        ("K", "C"): 2,
        ("C", "C"): 0,
        ("A", "A"): -1,
        ("B", "B"): -4,
        ("A", "B"): 2,
        ("K", "A"): -1,
        ("K", "B"): 4,
    }
    return make_model(classes, entries, [[("A", 2), ("B", 1)]], genus=2)


@pytest.fixture
def horizontal_model():
    """double_fiber_model plus a 7-section D0 with K_F.D0 = 1 (worked example)."""
    classes = [
        CurveClass("K", "canonical"),
        CurveClass("C", "generic-fiber"),
        CurveClass("A", "vertical-component", genus=0),
        CurveClass("B", "vertical-component", genus=1),
        CurveClass("D0", "horizontal"),
    ]
    entries = {
        ("K", "K"): -1,
        ("K", "C"): 2,
        ("C", "C"): 0,
        ("A", "A"): -1,
        ("B", "B"): -4,
        ("A", "B"): 2,
        ("K", "A"): -1,
        ("K", "B"): 4,
        ("C", "D0"): 7,
        ("A", "D0"): 2,
        ("B", "D0"): 3,
        ("K", "D0"): -11,
        ("D0", "D0"): 13,
    }
    return make_model(classes, entries, [[("A", 2), ("B", 1)]], genus=2)


@pytest.fixture
def boundary_model():
    """K_F^2 = 2 at genus 2, no singular fibers: K^2 = -6, K.C = 2."""
    classes = [CurveClass("K", "canonical"), CurveClass("C", "generic-fiber")]
    entries = {("K", "K"): -6, ("K", "C"): 2, ("C", "C"): 0}
    return make_model(classes, entries, [], genus=2)


@pytest.fixture
def hesse_descriptor():
    """Cubic pencil {x^3+y^3+z^3, xyz}: one triangle member, nine simple
    base points, three on each line."""
    members = (
        SpecialMember(
            "xyz",
            (
                MemberComponent("LX", 1, 1),
                MemberComponent("LY", 1, 1),
                MemberComponent("LZ", 1, 1),
            ),
        ),
    )
    points = []
    for i, comp in enumerate(("LX", "LY", "LZ")):
        for j in range(3):
            points.append(BasePoint(id=f"b{i}{j}", p=1, q=1, x_branch=BranchRef("xyz", comp)))
    return PencilDescriptor(degree=3, members=members, base_points=tuple(points))


@pytest.fixture
def cusp_descriptor():
    """Pencil {x^2 y, z^3}: base points of types (2,3) and (1,3)."""
    members = (
        SpecialMember("x2y", (MemberComponent("X", 1, 2), MemberComponent("Y", 1, 1))),
        SpecialMember("z3", (MemberComponent("Z", 1, 3),)),
    )
    points = (
        BasePoint(id="b1", p=2, q=3, x_branch=BranchRef("x2y", "X"), y_branch=BranchRef("z3", "Z")),
        BasePoint(id="b2", p=1, q=3, x_branch=BranchRef("x2y", "Y"), y_branch=BranchRef("z3", "Z")),
    )
    return PencilDescriptor(degree=3, members=members, base_points=points, saddles=((2, 1),))
