"""
Order complexes and their integer homology
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from ..core.config import settings
from ..core.errors import CapExceededError, PreconditionError
from ..models.schemas import HomologyReportModel, SimplicialComplexModel
from .poset import FinitePoset

logger = logging.getLogger(__name__)

Face = Tuple[Hashable, ...]


@dataclass
class SimplicialComplex:
    """Faces by dimension; vertices of a face are listed in a fixed global order"""
    faces: Dict[int, List[Face]]

    @property
    def dimension(self) -> int:
        return max(self.faces, default=-1)

    @property
    def vertices(self) -> List[Hashable]:
        return [f[0] for f in self.faces.get(0, [])]

    @property
    def f_vector(self) -> List[int]:
        return [len(self.faces.get(k, [])) for k in range(self.dimension + 1)]

    @property
    def euler(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    def facets(self) -> List[Face]:
        contained = set()
        for k in range(1, self.dimension + 1):
            for face in self.faces[k]:
                for i in range(len(face)):
                    contained.add(face[:i] + face[i + 1:])
        return [f for k in range(self.dimension + 1) for f in self.faces[k] if f not in contained]

    def to_model(self) -> SimplicialComplexModel:
        return SimplicialComplexModel(
            vertices=[str(v) for v in self.vertices],
            facets=[[str(v) for v in face] for face in self.facets()],
            f_vector=self.f_vector,
        )


def order_complex(p: FinitePoset) -> SimplicialComplex:
    """
    Chains of the proper part of a bounded poset

    Raises:
        PreconditionError: If p is not bounded
        CapExceededError: If the chain count passes the face cap
    """
    if not p.is_bounded():
        raise PreconditionError("Poset is not bounded")
    proper = [e for e in p.elements if e != p.bottom and e != p.top]
    # a linear extension keeps every chain listed bottom-up
    depth = {e: len(p.below(e)) for e in proper}
    proper.sort(key=lambda e: (depth[e], p.index[e]))
    above = {e: [f for f in proper if f != e and p.leq(e, f)] for e in proper}

    faces: Dict[int, List[Face]] = {}
    count = 0
    stack: List[Face] = [(e,) for e in reversed(proper)]
    while stack:
        chain = stack.pop()
        faces.setdefault(len(chain) - 1, []).append(chain)
        count += 1
        if count > settings.homology_max_faces:
            raise CapExceededError("Order complex face count", count, settings.homology_max_faces, "homology_max_faces")
        for f in reversed(above[chain[-1]]):
            stack.append(chain + (f,))

    position = {e: i for i, e in enumerate(proper)}
    for k in faces:
        faces[k].sort(key=lambda face: [position[v] for v in face])
    logger.debug(f"order complex: f-vector {[len(faces[k]) for k in sorted(faces)]}")
    return SimplicialComplex(faces)


def _boundary_factors(rows: int, columns: int, entries: Dict[Tuple[int, int], int]) -> List[int]:
    """Nonzero invariant factors of an integer matrix given by its nonzero entries"""
    if rows == 0 or columns == 0 or not entries:
        return []
    dense = [[ZZ(0)] * columns for _ in range(rows)]
    for (i, j), value in entries.items():
        dense[i][j] = ZZ(value)
    factors = invariant_factors(DomainMatrix(dense, (rows, columns), ZZ))
    return [abs(int(f)) for f in factors if f != 0]


@dataclass
class HomologyReport:
    f_vector: List[int]
    euler: int
    reduced_betti: List[int]
    torsion: Dict[int, List[int]] = field(default_factory=dict)

    def is_sphere(self, dimension: int) -> bool:
        """Reduced homology of the sphere of this dimension with no torsion and matching Euler characteristic"""
        expected = [1 if k == dimension else 0 for k in range(max(dimension + 1, len(self.reduced_betti)))]
        betti = self.reduced_betti + [0] * (len(expected) - len(self.reduced_betti))
        return betti == expected and not self.torsion and self.euler == 1 + (-1) ** dimension

    def to_model(self) -> HomologyReportModel:
        return HomologyReportModel(
            f_vector=self.f_vector,
            euler=self.euler,
            reduced_betti=self.reduced_betti,
            torsion={str(k): v for k, v in self.torsion.items()},
        )


def homology_evidence(c: SimplicialComplex) -> HomologyReport:
    """
    Euler characteristic and reduced integer homology via Smith normal form

    Raises:
        PreconditionError: If the complex is empty
        CapExceededError: If the complex has too many faces
    """
    if not c.faces:
        raise PreconditionError("Complex is empty")
    f_vector = c.f_vector
    if sum(f_vector) > settings.homology_max_faces:
        raise CapExceededError("Complex face count", sum(f_vector), settings.homology_max_faces, "homology_max_faces")

    index = {k: {face: i for i, face in enumerate(c.faces[k])} for k in c.faces}
    ranks: Dict[int, int] = {0: 1}
    torsion: Dict[int, List[int]] = {}
    for k in range(1, c.dimension + 1):
        entries = {}
        for j, face in enumerate(c.faces[k]):
            for i in range(len(face)):
                entries[(index[k - 1][face[:i] + face[i + 1:]], j)] = (-1) ** i
        factors = _boundary_factors(f_vector[k - 1], f_vector[k], entries)
        ranks[k] = len(factors)
        extra = [f for f in factors if f > 1]
        if extra:
            torsion[k - 1] = extra

    betti = [f_vector[k] - ranks[k] - ranks.get(k + 1, 0) for k in range(c.dimension + 1)]
    report = HomologyReport(f_vector, c.euler, betti, torsion)
    logger.debug(f"homology: f={f_vector}, chi={report.euler}, reduced betti={betti}")
    return report
