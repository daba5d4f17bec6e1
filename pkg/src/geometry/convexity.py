"""
Convex geometries of finite point sets

tau(A) is the set of points lying in the convex hull of A. Hull membership
is exact: a point is in conv(A) when it is a convex combination of some
affinely independent subset of A with at most d+1 points.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from ..core.config import settings
from ..core.errors import CapExceededError, ConsistencyError, InputError
from ..core.utils import bits, mask_of, submasks
from ..greedoids.setsys import GroundSet, SetSystem, check_axioms
from ..models.schemas import AxiomClass, PointSetModel
from .arrangements import rank_of_rows

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]


def _affinely_independent(points: Sequence[Point], d: int) -> bool:
    if len(points) <= 1:
        return True
    base = points[0]
    differences = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
    return rank_of_rows(differences, d) == len(differences)


def _in_simplex(p: Point, simplex: Sequence[Point], d: int) -> bool:
    """Solve for barycentric coordinates; inside when all are non-negative"""
    columns = [[Rational(c.numerator, c.denominator) for c in q] + [1] for q in simplex]
    a = Matrix(columns).T
    b = Matrix([Rational(c.numerator, c.denominator) for c in p] + [1])
    try:
        solution, params = a.gauss_jordan_solve(b)
    except ValueError:
        return False
    if params.shape[0]:
        raise ConsistencyError("barycentric coordinates of an affinely independent set are not unique")
    return all(value >= 0 for value in solution)


def in_hull(p: Point, points: Sequence[Point], d: int) -> bool:
    if p in points:
        return True
    for size in range(2, min(d + 1, len(points)) + 1):
        for simplex in combinations(points, size):
            if _affinely_independent(simplex, d) and _in_simplex(p, simplex, d):
                return True
    return False


@dataclass(frozen=True, eq=False)
class ConvexGeometry:
    ground: GroundSet
    points: Tuple[Point, ...]
    d: int

    @cached_property
    def _tau(self) -> Dict[int, int]:
        full = self.ground.full
        table = {}
        for a in submasks(full):
            inside = [self.points[e] for e in bits(a)]
            table[a] = mask_of(e for e in range(len(self.points)) if in_hull(self.points[e], inside, self.d))
        return table

    def tau(self, a: int) -> int:
        self.ground.check_mask(a)
        return self._tau[a]

    def ext(self, a: int) -> int:
        """Extreme points of A: those outside the hull of the rest of A"""
        return mask_of(e for e in bits(a) if not self.tau(a & ~(1 << e)) >> e & 1)

    @cached_property
    def closed_sets(self) -> FrozenSet[int]:
        return frozenset(a for a, t in self._tau.items() if a == t)

    @cached_property
    def system(self) -> SetSystem:
        """Complements of closed sets"""
        full = self.ground.full
        return SetSystem(self.ground, frozenset(full & ~c for c in self.closed_sets))

    def closure_violation(self) -> Optional[str]:
        for a, t in self._tau.items():
            if t & a != a:
                return f"tau does not contain {self.ground.describe(a)}"
            if self._tau[t] != t:
                return f"tau is not idempotent at {self.ground.describe(a)}"
            for b in submasks(a):
                if self._tau[b] & t != self._tau[b]:
                    return f"tau is not monotone at {self.ground.describe(b)} in {self.ground.describe(a)}"
        return None

    def anti_exchange_violation(self) -> Optional[Tuple[int, int, int]]:
        """First (A, y, z) with A closed, y, z outside A, z in tau(A+y) and y in tau(A+z)"""
        full = self.ground.full
        for a in sorted(self.closed_sets):
            outside = list(bits(full & ~a))
            for y in outside:
                for z in outside:
                    if y == z:
                        continue
                    if self.tau(a | 1 << y) >> z & 1 and self.tau(a | 1 << z) >> y & 1:
                        return a, y, z
        return None

    def check_anti_exchange(self) -> bool:
        return self.anti_exchange_violation() is None


def _verify(geometry: ConvexGeometry):
    problem = geometry.closure_violation()
    if problem:
        raise ConsistencyError(problem)
    violation = geometry.anti_exchange_violation()
    if violation is not None:
        a, y, z = violation
        raise ConsistencyError(f"anti-exchange fails at {geometry.ground.describe(a)} with {y}, {z}")

    sys = geometry.system
    full = geometry.ground.full
    for x in sys.members:
        gamma = mask_of(e for e in bits(full & ~x) if (x | 1 << e) in sys.feasible)
        if gamma != geometry.ext(full & ~x):
            raise ConsistencyError(f"continuations of {geometry.ground.describe(x)} are not the extreme points of its complement")
    for c in geometry.closed_sets:
        if geometry.tau(geometry.ext(c)) != c:
            raise ConsistencyError(f"closed set {geometry.ground.describe(c)} is not the hull of its extreme points")

    report = check_axioms(sys, AxiomClass.ANTIMATROID)
    if not report.passed:
        raise ConsistencyError(f"complements of closed sets fail the antimatroid axioms: {report.violations[0]}")


def convex_geometry(
    points: Sequence[Sequence[Fraction]],
    labels: Optional[Sequence[str]] = None,
    d: Optional[int] = None,
) -> ConvexGeometry:
    """
    Convex geometry and antimatroid of a point configuration

    Raises:
        InputError: On duplicate points or inconsistent dimensions
        CapExceededError: If the dimension or the number of points is too large
    """
    rows = tuple(tuple(Fraction(v) for v in point) for point in points)
    if d is None:
        d = len(rows[0]) if rows else 0
    if d > settings.convex_max_dimension:
        raise CapExceededError("Point dimension", d, settings.convex_max_dimension, "convex_max_dimension")
    if len(rows) > settings.closure_max_free:
        raise CapExceededError("Number of points", len(rows), settings.closure_max_free, "closure_max_free")
    labels = list(labels) if labels is not None else [f"p{e}" for e in range(len(rows))]
    if len(labels) != len(rows):
        raise InputError(f"{len(labels)} labels for {len(rows)} points")
    for e, row in enumerate(rows):
        if len(row) != d:
            raise InputError(f"Point {labels[e]} has {len(row)} coordinates, dimension is {d}")
    if len(set(rows)) != len(rows):
        raise InputError("Point configuration has duplicate points")

    geometry = ConvexGeometry(GroundSet(tuple(labels)), rows, d)
    _verify(geometry)
    logger.debug(f"{len(rows)} points in dimension {d}: {len(geometry.closed_sets)} closed sets")
    return geometry


def from_model(model: PointSetModel) -> ConvexGeometry:
    return convex_geometry(model.fractions(), model.labels, model.d)
