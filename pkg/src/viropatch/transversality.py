"""Numerical hypotheses behind the nodal gluing theorems, and dimension counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .lattice import LatticePolygon, LatticeSegment, boundary_count, integer_length

SINGULARITY_KINDS = ("node", "cusp")


@dataclass(frozen=True)
class SingularityType:
    kind: str

    def __post_init__(self):
        if self.kind not in SINGULARITY_KINDS:
            raise ValueError(f"weight undefined for singularity kind {self.kind!r}")


def singularity_weight(s: SingularityType | str) -> int:
    kind = s.kind if isinstance(s, SingularityType) else s
    if kind == "node":
        return 0
    if kind == "cusp":
        return 1
    raise ValueError(f"weight undefined for singularity kind {kind!r}")


@dataclass(frozen=True)
class TransversalitySetup:
    cell: LatticePolygon
    incoming: frozenset  # segment keys
    singularities: tuple[SingularityType, ...] = ()

    def __post_init__(self):
        keys = frozenset(s.key() if isinstance(s, LatticeSegment) else tuple(s) for s in self.incoming)
        own = {e.key() for e in self.cell.edges()}
        stray = keys - own
        if stray:
            raise ValueError(f"incoming facet {sorted(stray)[0]} is not an edge of the cell")
        object.__setattr__(self, "incoming", keys)
        object.__setattr__(self, "singularities",
                           tuple(s if isinstance(s, SingularityType) else SingularityType(s)
                                 for s in self.singularities))


@dataclass(frozen=True)
class Margin:
    """An inequality ``lhs < rhs`` with both sides kept."""

    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs

    @property
    def slack(self) -> int:
        return self.rhs - self.lhs

    def __bool__(self) -> bool:
        return self.holds


def is_s_transversal_nodal(setup: TransversalitySetup) -> Margin:
    weight = sum(singularity_weight(s) for s in setup.singularities)
    free = sum(integer_length(e) for e in setup.cell.edges() if e.key() not in setup.incoming)
    return Margin(weight, free)


def incoming_lattice_count(incoming: Iterable[LatticeSegment]) -> int:
    segs = list(incoming)
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            a, b = segs[i], segs[j]
            if a.direction in (b.direction, (-b.direction.x, -b.direction.y)) and \
                    (a.contains(b.a) and a.contains(b.b) or b.contains(a.a) and b.contains(a.b)):
                raise ValueError("incoming edges overlap")
    return sum(integer_length(s) for s in segs)


@dataclass(frozen=True)
class HypothesisFailure:
    lhs: int
    rhs: int
    statement: str

    def __str__(self) -> str:
        return f"hypothesis {self.statement} fails: {self.lhs} >= {self.rhs}"


def codim_prescribed(delta: LatticePolygon, k_nodes: int, m_points: int) -> int | HypothesisFailure:
    """Codimension of curves with k nodes through m fixed points, when 2k + m < b."""
    if k_nodes < 0 or m_points < 0:
        raise ValueError("counts must be nonnegative")
    b = boundary_count(delta)
    if 2 * k_nodes + m_points < b:
        return 3 * k_nodes + m_points
    return HypothesisFailure(2 * k_nodes + m_points, b, "2k+m < b")


def brusotti_codim(n: int) -> int:
    if n < 0:
        raise ValueError("node count must be nonnegative")
    return n


@dataclass(frozen=True)
class GeneralPositionLedger:
    k: int
    l: int
    deg_K_minus_D_prime: int
    h0_D_prime: int
    dim_E: int
    codim_A: int
    dim_restriction_image: int

    def rows(self) -> list[tuple[str, int]]:
        return [("deg(K - D')", self.deg_K_minus_D_prime), ("h0(D')", self.h0_D_prime),
                ("dim E", self.dim_E), ("codim A", self.codim_A),
                ("dim restriction image", self.dim_restriction_image)]


def generalposition_ledger(k: int, l: int) -> GeneralPositionLedger:
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    image = 3 * (2 * k + 1) * (2 * l + 1) - 2 * (k + 1) * (l + 1) - 1
    led = GeneralPositionLedger(k, l, -2 * k * l - 2 * k - 2 * l, 3 * k * l + k + l,
                                10 * k * l + 4 * k + 4 * l, 6 * k * l, image)
    assert image == 10 * k * l + 4 * (k + l), "restriction map is not onto"
    return led


@dataclass(frozen=True)
class FinalCheck:
    main: Margin  # 2N + m < b(D)
    second: Margin  # m' < b(D')
    third: Margin  # m'' < b(D'')

    @property
    def ok(self) -> bool:
        return self.main.holds and self.second.holds and self.third.holds

    def __bool__(self) -> bool:
        return self.ok


def theoremfinal_check(delta: LatticePolygon, delta1: LatticePolygon, delta2: LatticePolygon, n: int,
                       incoming: Sequence[LatticeSegment], incoming1: Sequence[LatticeSegment],
                       incoming2: Sequence[LatticeSegment]) -> FinalCheck:
    m, m1, m2 = (incoming_lattice_count(x) for x in (incoming, incoming1, incoming2))
    return FinalCheck(Margin(2 * n + m, boundary_count(delta)),
                      Margin(m1, boundary_count(delta1)),
                      Margin(m2, boundary_count(delta2)))


def family_level_checks(k: int, l: int) -> list[tuple[int, FinalCheck]]:
    """The hypothesis block at each stacking level h = 2..l of the (2k, 2l, 2) family."""
    out = []
    for h in range(2, l + 1):
        big = LatticePolygon.rectangle(0, 4 * h - 5, 4 * k, 4 * h - 1)
        small = LatticePolygon.rectangle(0, h - 1, k, h)
        inc = [LatticeSegment((0, 4 * h - 5), (4 * k, 4 * h - 5))]
        inc_small = [LatticeSegment((0, h - 1), (k, h - 1))]
        out.append((h, theoremfinal_check(big, small, small, 2 * k, inc, inc_small, inc_small)))
    return out
