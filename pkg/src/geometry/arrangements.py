"""
Real hyperplane arrangements over the rationals

Sign patterns are decided exactly: equalities are solved away with sympy,
the remaining strict homogeneous system goes through Fourier-Motzkin
elimination on Fractions.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from ..core.config import settings
from ..core.errors import CapExceededError, ConsistencyError, InputError
from ..core.utils import mask_of
from ..greedoids.setsys import GroundSet, SetSystem
from ..models.schemas import ArrangementModel
from ..oriented.orient import OrientedSystem, validate_oig, validate_om

logger = logging.getLogger(__name__)

Row = Tuple[Fraction, ...]


def to_sympy(rows: Sequence[Sequence[Fraction]], width: int) -> Matrix:
    if not rows:
        return Matrix.zeros(0, width)
    return Matrix([[Rational(v.numerator, v.denominator) for v in row] for row in rows])


def from_sympy(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def rank_of_rows(rows: Sequence[Sequence[Fraction]], width: int) -> int:
    return to_sympy(rows, width).rank() if rows else 0


@dataclass(frozen=True)
class RationalArrangement:
    """Linear forms on Q^d; a form is its coefficient row"""
    d: int
    forms: Tuple[Row, ...]
    distinct: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.d < 0:
            raise InputError(f"Dimension must be non-negative, got {self.d}")
        forms = tuple(tuple(Fraction(v) for v in form) for form in self.forms)
        object.__setattr__(self, "forms", forms)
        for e, form in enumerate(forms):
            if len(form) != self.d:
                raise InputError(f"Form {e} has {len(form)} coefficients, dimension is {self.d}")
            if self.distinct and not any(form):
                raise InputError(f"Form {e} is identically zero")
        if self.distinct:
            for a, b in combinations(range(len(forms)), 2):
                if rank_of_rows([forms[a], forms[b]], self.d) < 2:
                    raise InputError(f"Forms {a} and {b} are proportional")

    @property
    def n(self) -> int:
        return len(self.forms)

    def is_essential(self) -> bool:
        return rank_of_rows(self.forms, self.d) == self.d

    def sub(self, positions: Sequence[int]) -> "RationalArrangement":
        return RationalArrangement(self.d, tuple(self.forms[e] for e in positions), distinct=False)

    @classmethod
    def from_model(cls, model: ArrangementModel) -> "RationalArrangement":
        return cls(model.d, tuple(tuple(row) for row in model.fractions()))


# ---------------------------------------------------------------- feasibility


def _normalize(row: Row) -> Row:
    scale = max(abs(v) for v in row)
    return tuple(v / scale for v in row) if scale else row


def _strict_feasible(rows: List[Row]) -> bool:
    """Whether some t has row . t > 0 for every row"""
    system = {_normalize(r) for r in rows}
    if not system:
        return True
    width = len(next(iter(system)))
    for k in reversed(range(width)):
        if any(not any(r) for r in system):
            return False
        positive = [r for r in system if r[k] > 0]
        negative = [r for r in system if r[k] < 0]
        kept = {r for r in system if r[k] == 0}
        for p in positive:
            for q in negative:
                combined = tuple(-q[k] * a + p[k] * b for a, b in zip(p, q))
                kept.add(_normalize(combined))
        system = kept
        if not system:
            return True
    return not system


def _sign_feasible(forms: Sequence[Row], d: int, sigma: str) -> bool:
    zero_rows = [f for f, s in zip(forms, sigma) if s == "0"]
    if zero_rows:
        basis = [[from_sympy(v) for v in column] for column in to_sympy(zero_rows, d).nullspace()]
    else:
        basis = [[Fraction(int(i == j)) for i in range(d)] for j in range(d)]

    strict = []
    for form, s in zip(forms, sigma):
        if s == "0":
            continue
        sign = 1 if s == "+" else -1
        strict.append(tuple(sign * sum((a * b for a, b in zip(form, v)), Fraction(0)) for v in basis))

    if not basis:
        return not strict
    return _strict_feasible(strict)


def sign_feasible(arr: RationalArrangement, sigma: str) -> bool:
    """
    Whether some x in Q^d realizes the sign of every form

    Args:
        arr: The arrangement
        sigma: One symbol from 0 + - per form

    Raises:
        InputError: On a length mismatch or a symbol outside 0 + -
    """
    if len(sigma) != arr.n or any(s not in "0+-" for s in sigma):
        raise InputError(f"{sigma!r} is not a sign vector over 0 + - of length {arr.n}")
    return _sign_feasible(arr.forms, arr.d, sigma)


def real_covectors(arr: RationalArrangement) -> Tuple[str, ...]:
    """
    Every realizable sign vector of the arrangement, sorted

    Grows sign prefixes one form at a time and drops infeasible prefixes.

    Raises:
        CapExceededError: If the arrangement has too many forms
    """
    if arr.n > settings.face_enum_max_forms:
        raise CapExceededError("Number of forms", arr.n, settings.face_enum_max_forms, "face_enum_max_forms")

    prefixes = [""]
    for k in range(arr.n):
        forms = arr.forms[:k + 1]
        prefixes = [p + s for p in prefixes for s in "+-0" if _sign_feasible(forms, arr.d, p + s)]
    faces = tuple(sorted(prefixes))

    if settings.debug_checks and not validate_om(arr.n, faces).passed:
        raise ConsistencyError("realizable sign vectors fail the oriented matroid axioms")
    logger.debug(f"{arr.n} forms in dimension {arr.d}: {len(faces)} faces")
    return faces


# ---------------------------------------------------------------- vector configurations


def om_from_vectors(
    vectors: Sequence[Sequence[Fraction]],
    labels: Optional[Sequence[str]] = None,
    d: Optional[int] = None,
) -> OrientedSystem:
    """
    Oriented matroid of a vector configuration as an oriented interval greedoid

    Feasible sets are the linearly independent subsets; covectors are the
    sign vectors (sign f(v_e))_e over all linear functionals f.

    Raises:
        InputError: On a zero vector or inconsistent dimensions
        CapExceededError: If there are more vectors than the face enumeration allows
    """
    rows = tuple(tuple(Fraction(v) for v in vector) for vector in vectors)
    if d is None:
        d = len(rows[0]) if rows else 0
    labels = list(labels) if labels is not None else [f"v{e}" for e in range(len(rows))]
    if len(labels) != len(rows):
        raise InputError(f"{len(labels)} labels for {len(rows)} vectors")
    for e, row in enumerate(rows):
        if len(row) != d:
            raise InputError(f"Vector {labels[e]} has {len(row)} coordinates, dimension is {d}")
        if not any(row):
            raise InputError(f"Vector {labels[e]} is zero; loops are not supported")

    arrangement = RationalArrangement(d, rows, distinct=False)
    faces = real_covectors(arrangement)

    ground = GroundSet(tuple(labels))
    independent = set()
    for size in range(min(d, len(rows)) + 1):
        for subset in combinations(range(len(rows)), size):
            if rank_of_rows([rows[e] for e in subset], d) == size:
                independent.add(mask_of(subset))
    system = SetSystem(ground, frozenset(independent))

    oig = validate_oig(system, faces)
    if settings.debug_checks and validate_om(len(rows), faces).passed != oig.report.passed:
        raise ConsistencyError("oriented matroid and interval greedoid validators disagree on a vector configuration")
    if not oig.report.passed:
        raise ConsistencyError(f"vector configuration covectors fail validation: {oig.report.to_model(oig.lattice)}")
    logger.debug(f"{len(rows)} vectors: {len(independent)} independent sets, {len(faces)} covectors")
    return oig


@lru_cache(maxsize=settings.face_cache_size)
def _faces_of_forms(d: int, forms: Tuple[Row, ...]) -> Tuple[str, ...]:
    return real_covectors(RationalArrangement(d, forms, distinct=False))


def faces_of(arr: RationalArrangement, positions: Sequence[int]) -> Tuple[str, ...]:
    """Real covectors of the subarrangement on ``positions``, cached by its forms"""
    return _faces_of_forms(arr.d, tuple(arr.forms[e] for e in positions))
