"""Deterministic random fibration models for the property suites.

Construction works backward from chosen multiplicities: pick the fiber
component multiplicities and a connected adjacency, give each edge weight
n_j * n_k * m (which makes the self-intersections forced by the fiber
relation automatically integral), then solve for component genera and a
canonical row so that every fiber has the same canonical degree 2g - 2
with integral adjunction on every class. Models always come out valid;
anything else is a bug, not a data problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import InfeasibleSpecError
from .fibration import Fiber, FiberComponent, FibrationModel
from .lattice import (
    KIND_CANONICAL,
    KIND_FIBER,
    KIND_VERTICAL,
    CurveClass,
    IntersectionLattice,
)

import random


@dataclass(frozen=True)
class RandomModelSpec:
    seed: int
    fibers: Tuple[int, int] = (1, 4)
    components: Tuple[int, int] = (1, 6)
    multiplicity: Tuple[int, int] = (1, 9)
    nef: bool = False

    def __post_init__(self):
        for name, (lo, hi) in (
            ("fibers", self.fibers),
            ("components", self.components),
            ("multiplicity", self.multiplicity),
        ):
            if lo > hi or lo < 0:
                raise InfeasibleSpecError(f"empty {name} range ({lo}, {hi})")
        if self.components[0] < 1 or self.multiplicity[0] < 1:
            raise InfeasibleSpecError("components and multiplicities must be >= 1")


def _crt(pairs: List[Tuple[int, int]]) -> Optional[Tuple[int, int]]:
    """Combine congruences x = r_i (mod m_i); None if incompatible."""
    r, m = 0, 1
    for ri, mi in pairs:
        g = math.gcd(m, mi)
        if (ri - r) % g != 0:
            return None
        lcm = m // g * mi
        t = ((ri - r) // g * pow(m // g, -1, mi // g)) % (mi // g)
        r = r + m * t
        m = lcm
    return r % m, m


def _decompose(amount: int, coins: List[int]) -> Optional[List[int]]:
    """Nonnegative t with sum(t_j * coins[j]) = amount, or None."""
    counts = [0] * len(coins)
    if amount == 0:
        return counts
    if amount < 0:
        return None
    d = math.gcd(*coins) if len(coins) > 1 else coins[0]
    if amount % d != 0:
        return None
    a = amount // d
    cs = [c // d for c in coins]
    cmin = min(cs)
    jmin = cs.index(cmin)
    cap = max(cs) ** 2 + max(cs)
    if a > cap:
        bulk = (a - cap) // cmin
        counts[jmin] += bulk
        a -= bulk * cmin
    # small exact DP with predecessors
    pred = [-1] * (a + 1)
    pred[0] = -2
    for value in range(1, a + 1):
        for j, c in enumerate(cs):
            if value >= c and pred[value - c] != -1:
                pred[value] = j
                break
    if pred[a] == -1:
        return None
    while a > 0:
        j = pred[a]
        counts[j] += 1
        a -= cs[j]
    return counts


class _FiberDraft:
    def __init__(self, mults: List[int], edges: Dict[Tuple[int, int], int]):
        self.mults = mults
        self.edges = edges  # (j, k) with j < k -> pairing weight
        # self-intersections forced by the fiber relation n_j F_j^2 = -sum n_k w_jk
        self.self_sq = []
        for j in range(len(mults)):
            acc = 0
            for (a, b), w in edges.items():
                if a == j:
                    acc += mults[b] * w
                elif b == j:
                    acc += mults[a] * w
            if acc % mults[j] != 0:
                raise InfeasibleSpecError("edge weights not divisible")  # unreachable by scheme
            self.self_sq.append(-acc // mults[j])


def _draw_fiber(rng: random.Random, spec: RandomModelSpec) -> _FiberDraft:
    ncomp = rng.randint(*spec.components)
    mults = [rng.randint(*spec.multiplicity) for _ in range(ncomp)]
    edges: Dict[Tuple[int, int], int] = {}
    for j in range(1, ncomp):
        parent = rng.randrange(j)
        scale = 1 if rng.random() < 0.75 else 2
        edges[(min(parent, j), max(parent, j))] = mults[parent] * mults[j] * scale
    if ncomp >= 3 and rng.random() < 0.3:
        j, k = sorted(rng.sample(range(ncomp), 2))
        if (j, k) not in edges:
            edges[(j, k)] = mults[j] * mults[k]
    return _FiberDraft(mults, edges)


def _gamma_floor(draft: _FiberDraft, j: int, nef: bool) -> int:
    if not nef:
        return 0
    wsum = sum(w for (a, b), w in draft.edges.items() if j in (a, b))
    # K_F . F_j = 2*gamma_j - 2 + wsum must be >= 0
    return max(0, (2 - wsum + 1) // 2)


def _build_model(rng: random.Random, spec: RandomModelSpec) -> Optional[FibrationModel]:
    nfibers = rng.randint(*spec.fibers)
    drafts = [_draw_fiber(rng, spec) for _ in range(nfibers)]

    floors = [[_gamma_floor(d, j, spec.nef) for j in range(len(d.mults))] for d in drafts]
    bases = []
    for d, fl in zip(drafts, floors):
        base = sum(
            n * (-2 - sq + 2 * g0) for n, sq, g0 in zip(d.mults, d.self_sq, fl)
        )
        if base % 2 != 0:
            return None  # unreachable with the n_j*n_k edge scheme
        bases.append(base // 2)

    if drafts:
        gcds = [math.gcd(*d.mults) if len(d.mults) > 1 else d.mults[0] for d in drafts]
        solved = _crt([(b % g, g) for b, g in zip(bases, gcds)])
        if solved is None:
            return None
        residue, modulus = solved
        start = max([1] + bases)
        gm1 = residue + ((start - residue + modulus - 1) // modulus) * modulus
        gammas: Optional[List[List[int]]] = None
        for _ in range(30):
            trial = []
            for d, fl, b in zip(drafts, floors, bases):
                t = _decompose(gm1 - b, list(d.mults))
                if t is None:
                    break
                trial.append([f + extra for f, extra in zip(fl, t)])
            else:
                gammas = trial
                break
            gm1 += modulus
        if gammas is None:
            return None
        genus = gm1 + 1
    else:
        genus = rng.randint(2, 6)
        gammas = []

    chi_o = rng.randint(-2, 3)
    k_self = rng.randint(-8, 8)

    classes = [CurveClass("K", KIND_CANONICAL), CurveClass("C", KIND_FIBER)]
    ids = ["K", "C"]
    comp_ids: List[List[str]] = []
    for i, d in enumerate(drafts):
        row = []
        for j, gamma in enumerate(gammas[i]):
            cid = f"F{i}.{j}"
            classes.append(CurveClass(cid, KIND_VERTICAL, genus=gamma))
            row.append(cid)
            ids.append(cid)
        comp_ids.append(row)

    entries = {a: {b: 0 for b in ids} for a in ids}

    def put(a, b, v):
        entries[a][b] = v
        entries[b][a] = v

    put("K", "K", k_self)
    put("K", "C", 2 * genus - 2)
    put("C", "C", 0)
    for i, d in enumerate(drafts):
        for j, cid in enumerate(comp_ids[i]):
            put(cid, cid, d.self_sq[j])
            put("K", cid, -2 - d.self_sq[j] + 2 * gammas[i][j])
        for (a, b), w in d.edges.items():
            put(comp_ids[i][a], comp_ids[i][b], w)

    fibers = [
        Fiber(
            i,
            tuple(
                FiberComponent(i, j, comp_ids[i][j], d.mults[j]) for j in range(len(d.mults))
            ),
        )
        for i, d in enumerate(drafts)
    ]
    lattice = IntersectionLattice(classes, entries)
    return FibrationModel(lattice, base_genus=0, genus=genus, chi_o=chi_o, fibers=fibers)


def generate_models(spec: RandomModelSpec, count: int) -> Iterator[FibrationModel]:
    """Yield `count` valid models, deterministically for a fixed seed."""
    rng = random.Random(spec.seed)
    produced = 0
    while produced < count:
        model = None
        for _ in range(50):
            model = _build_model(rng, spec)
            if model is not None:
                break
        if model is None:
            raise InfeasibleSpecError("no integral solution found within the retry budget")
        report = model.validation()
        if not report.ok:  # generator soundness: never expected
            raise InfeasibleSpecError("generated model failed validation: " + "; ".join(report.violations))
        produced += 1
        yield model
