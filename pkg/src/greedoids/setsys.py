"""
Finite set systems over an ordered ground set

Subsets are bit masks over the canonical element order of a GroundSet.
Everything here is immutable; all operations are pure functions.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..core.config import settings
from ..core.errors import AxiomError, CapExceededError, ConsistencyError, InputError, NotFeasibleError, PreconditionError
from ..core.utils import bits, compress_mask, mask_of, popcount, subset_key
from ..models.schemas import AxiomClass, AxiomId, AxiomReportModel, AxiomViolationModel, SetSystemModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroundSet:
    """Distinct labels; a label's position is its canonical element index"""
    labels: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        seen = set()
        for label in self.labels:
            if label in seen:
                raise InputError(f"Duplicate label {label!r} in ground set")
            seen.add(label)
        if len(self.labels) > settings.max_ground_set:
            raise CapExceededError("Ground set size", len(self.labels), settings.max_ground_set, "max_ground_set")

    @cached_property
    def _positions(self) -> Dict[str, int]:
        return {label: index for index, label in enumerate(self.labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: str) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise InputError(f"Unknown label {label!r}; ground set is {list(self.labels)}") from None

    def mask(self, labels: Iterable[str]) -> int:
        return mask_of(self.index(label) for label in labels)

    def check_mask(self, mask: int):
        if mask < 0 or mask & ~self.full:
            raise InputError(f"Subset mask {mask:#x} is not inside a ground set of {self.size} elements")

    def labels_of(self, mask: int) -> List[str]:
        self.check_mask(mask)
        return [self.labels[index] for index in bits(mask)]

    def describe(self, mask: int) -> str:
        return "{" + ",".join(self.labels_of(mask)) + "}"

    def sub(self, within: int) -> "GroundSet":
        """Ground set of the labels in ``within``, in canonical order"""
        return GroundSet(tuple(self.labels_of(within)))


@dataclass(frozen=True)
class SetSystem:
    ground: GroundSet
    feasible: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "feasible", frozenset(self.feasible))
        for member in self.feasible:
            self.ground.check_mask(member)

    @cached_property
    def members(self) -> Tuple[int, ...]:
        """Feasible sets sorted by size, then lexicographically"""
        return tuple(sorted(self.feasible, key=subset_key))

    def is_feasible(self, mask: int) -> bool:
        return mask in self.feasible

    def require_feasible(self, mask: int):
        self.ground.check_mask(mask)
        if mask not in self.feasible:
            raise NotFeasibleError(f"{self.ground.describe(mask)} is not feasible")

    def to_model(self) -> SetSystemModel:
        return SetSystemModel(
            ground=list(self.ground.labels),
            feasible=[self.ground.labels_of(member) for member in self.members],
        )

    @classmethod
    def from_model(cls, model: SetSystemModel) -> "SetSystem":
        return build_set_system(model.ground, model.feasible)

    def reindexed(self, within: int) -> "SetSystem":
        """Members inside ``within`` over the sub-ground set ``within``"""
        return SetSystem(
            self.ground.sub(within),
            frozenset(compress_mask(m, within) for m in self.feasible if not m & ~within),
        )


def build_set_system(labels: Sequence[str], members: Iterable[Iterable[str]]) -> SetSystem:
    """
    Build a canonical set system from labels and label-set members

    Args:
        labels: Ground set labels in canonical order
        members: Feasible sets given as label collections

    Returns:
        SetSystem with deduplicated members

    Raises:
        InputError: On a duplicate label or a member naming an unknown label
    """
    ground = GroundSet(tuple(labels))
    feasible = frozenset(ground.mask(member) for member in members)
    return SetSystem(ground, feasible)


def loops(sys: SetSystem) -> int:
    """Elements lying in no feasible set"""
    covered = 0
    for member in sys.feasible:
        covered |= member
    return sys.ground.full & ~covered


# ---------------------------------------------------------------- axioms


@dataclass(frozen=True)
class AxiomViolation:
    axiom: AxiomId
    x: Optional[int] = None
    y: Optional[int] = None
    z: Optional[int] = None
    element: Optional[int] = None
    note: Optional[str] = None

    def to_model(self, ground: GroundSet) -> AxiomViolationModel:
        def labels(mask):
            return None if mask is None else ground.labels_of(mask)

        return AxiomViolationModel(
            axiom=self.axiom,
            X=labels(self.x),
            Y=labels(self.y),
            Z=labels(self.z),
            element=None if self.element is None else ground.labels[self.element],
            note=self.note,
        )


@dataclass(frozen=True)
class AxiomReport:
    class_checked: AxiomClass
    violations: Tuple[AxiomViolation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_model(self, ground: GroundSet) -> AxiomReportModel:
        return AxiomReportModel(
            class_checked=self.class_checked,
            passed=self.passed,
            violations=[v.to_model(ground) for v in self.violations],
        )


def _accessibility(sys: SetSystem) -> Iterator[AxiomViolation]:
    if not sys.feasible:
        yield AxiomViolation(AxiomId.IG1, note="empty family")
        return
    for member in sys.members:
        if member and not any((member & ~(1 << x)) in sys.feasible for x in bits(member)):
            yield AxiomViolation(AxiomId.IG1, x=member)


def _exchange(sys: SetSystem) -> Iterator[AxiomViolation]:
    for big in sys.members:
        for small in sys.members:
            if popcount(big) <= popcount(small):
                continue
            if not any((small | 1 << x) in sys.feasible for x in bits(big & ~small)):
                yield AxiomViolation(AxiomId.IG2, x=big, y=small)


def _extendable_by(sys: SetSystem) -> Dict[int, List[int]]:
    """For each element e, the feasible sets X with e not in X and X+e feasible"""
    table = {}
    for e in range(sys.ground.size):
        bit = 1 << e
        table[e] = [m for m in sys.members if not m & bit and (m | bit) in sys.feasible]
    return table


def _interval(sys: SetSystem) -> Iterator[AxiomViolation]:
    table = _extendable_by(sys)
    for middle in sys.members:
        for e in range(sys.ground.size):
            bit = 1 << e
            if middle & bit or (middle | bit) in sys.feasible:
                continue
            lower = next((x for x in table[e] if x & middle == x), None)
            if lower is None:
                continue
            upper = next((z for z in table[e] if z & middle == middle), None)
            if upper is not None:
                yield AxiomViolation(AxiomId.IG3, x=lower, y=middle, z=upper, element=e)


def _hereditary(sys: SetSystem) -> Iterator[AxiomViolation]:
    if not sys.feasible:
        yield AxiomViolation(AxiomId.M1, note="empty family")
        return
    for member in sys.members:
        for x in bits(member):
            if (member & ~(1 << x)) not in sys.feasible:
                yield AxiomViolation(AxiomId.M1, x=member, element=x)


def _lower_interval(sys: SetSystem) -> Iterator[AxiomViolation]:
    table = _extendable_by(sys)
    for e, uppers in table.items():
        bit = 1 << e
        for upper in uppers:
            for lower in sys.members:
                if lower & upper == lower and (lower | bit) not in sys.feasible:
                    yield AxiomViolation(AxiomId.LIP, x=lower, y=upper, element=e)


def _upper_interval(sys: SetSystem) -> Iterator[AxiomViolation]:
    table = _extendable_by(sys)
    for e, lowers in table.items():
        bit = 1 << e
        for lower in lowers:
            for upper in sys.members:
                if upper & bit or lower & upper != lower:
                    continue
                if (upper | bit) not in sys.feasible:
                    yield AxiomViolation(AxiomId.UIP, x=lower, y=upper, element=e)


def _collect(sources: Iterable[Callable[[SetSystem], Iterator[AxiomViolation]]], sys: SetSystem, exhaustive: bool) -> Tuple[AxiomViolation, ...]:
    found = []
    for source in sources:
        if exhaustive:
            found.extend(source(sys))
        else:
            first = next(source(sys), None)
            if first is not None:
                found.append(first)
    return tuple(found)


_CLASS_AXIOMS = {
    AxiomClass.ACCESSIBLE: (_accessibility,),
    AxiomClass.GREEDOID: (_accessibility, _exchange),
    AxiomClass.INTERVAL_GREEDOID: (_accessibility, _exchange, _interval),
    AxiomClass.MATROID: (_hereditary, _exchange),
    AxiomClass.ANTIMATROID: (_accessibility, _exchange, _upper_interval),
}


def check_axioms(sys: SetSystem, axiom_class: AxiomClass = AxiomClass.INTERVAL_GREEDOID, exhaustive: bool = False) -> AxiomReport:
    """
    Check a set system against an axiom class

    Args:
        sys: The set system
        axiom_class: Which class to check
        exhaustive: List every violating witness instead of the first per axiom

    Returns:
        AxiomReport; witnesses are lexicographically first by canonical index
    """
    axiom_class = AxiomClass(axiom_class)
    violations = _collect(_CLASS_AXIOMS[axiom_class], sys, exhaustive)
    report = AxiomReport(axiom_class, violations)

    if settings.debug_checks and axiom_class == AxiomClass.MATROID:
        as_greedoid = _collect(_CLASS_AXIOMS[AxiomClass.GREEDOID], sys, False)
        if not as_greedoid:
            lip = next(_lower_interval(sys), None)
            if (lip is None) != report.passed:
                raise ConsistencyError("greedoid with the lower interval property disagrees with the matroid check")

    logger.debug(f"check_axioms {axiom_class.value}: {len(violations)} violation(s)")
    return report


def lower_interval_violations(sys: SetSystem, exhaustive: bool = False) -> Tuple[AxiomViolation, ...]:
    return _collect((_lower_interval,), sys, exhaustive)


def upper_interval_violations(sys: SetSystem, exhaustive: bool = False) -> Tuple[AxiomViolation, ...]:
    return _collect((_upper_interval,), sys, exhaustive)


def require_class(sys: SetSystem, axiom_class: AxiomClass = AxiomClass.INTERVAL_GREEDOID) -> AxiomReport:
    report = check_axioms(sys, axiom_class)
    if not report.passed:
        first = report.violations[0]
        raise AxiomError(
            f"Set system is not a valid {AxiomClass(axiom_class).value}: axiom {first.axiom.value} fails",
            report,
        )
    return report


# ---------------------------------------------------------------- orderings


def feasible_ordering(sys: SetSystem, x: int) -> Tuple[int, ...]:
    """
    Lexicographically least ordering of a feasible set with feasible prefixes

    Raises:
        NotFeasibleError: If x is not feasible
        ConsistencyError: If no ordering exists (input is not a greedoid)
    """
    sys.require_feasible(x)
    prefix = 0
    ordering = []
    while prefix != x:
        step = next((e for e in bits(x & ~prefix) if (prefix | 1 << e) in sys.feasible), None)
        if step is None:
            raise ConsistencyError(f"No feasible ordering of {sys.ground.describe(x)}")
        prefix |= 1 << step
        ordering.append(step)
    return tuple(ordering)


def strong_exchange(sys: SetSystem, x_ordering: Sequence[int], y: int) -> Tuple[int, ...]:
    """
    Elements of X minus Y, in X-order, whose stepwise unions with Y stay feasible

    Args:
        sys: Interval greedoid
        x_ordering: A feasible ordering of X
        y: Feasible set with |Y| < |X|

    Returns:
        The lexicographically least valid selection of |X|-|Y| elements
    """
    x_ordering = tuple(x_ordering)
    x = mask_of(x_ordering)
    if len(set(x_ordering)) != len(x_ordering):
        raise PreconditionError("X ordering repeats an element")
    prefix = 0
    for e in x_ordering:
        prefix |= 1 << e
        if prefix not in sys.feasible:
            raise PreconditionError(f"Prefix {sys.ground.describe(prefix)} of the X ordering is not feasible")
    sys.require_feasible(y)
    if popcount(y) >= popcount(x):
        raise PreconditionError("strong exchange needs |Y| < |X|")

    remaining = [e for e in x_ordering if not y >> e & 1]
    k = popcount(x) - popcount(y)

    best = None
    for choice in combinations(remaining, k):
        running = y
        ok = True
        for e in choice:
            running |= 1 << e
            if running not in sys.feasible:
                ok = False
                break
        if ok and (best is None or choice < best):
            best = choice
    if best is None:
        raise ConsistencyError(
            f"Strong exchange failed for X={sys.ground.describe(x)}, Y={sys.ground.describe(y)}"
        )
    return best


# ---------------------------------------------------------------- minors


def continuations(sys: SetSystem, x: int) -> int:
    sys.require_feasible(x)
    out = 0
    for e in bits(sys.ground.full & ~x):
        if (x | 1 << e) in sys.feasible:
            out |= 1 << e
    return out


def contraction_support(sys: SetSystem, x: int) -> int:
    """Ground set of F/X: the union of its members, as a mask over E"""
    sys.require_feasible(x)
    support = 0
    for member in sys.feasible:
        if member & x == x:
            support |= member & ~x
    return support


def contract(sys: SetSystem, x: int) -> SetSystem:
    """F/X = {Y : X and Y disjoint, X+Y feasible}, over the union of its members"""
    support = contraction_support(sys, x)
    members = frozenset(
        compress_mask(member & ~x, support)
        for member in sys.feasible
        if member & x == x
    )
    result = SetSystem(sys.ground.sub(support), members)

    if settings.debug_checks and check_axioms(sys).passed and not check_axioms(result).passed:
        raise ConsistencyError(f"Contraction by {sys.ground.describe(x)} is not an interval greedoid")
    return result


def restrict(sys: SetSystem, w: int) -> SetSystem:
    """F|W = {X in F : X inside W}, over ground set W"""
    sys.ground.check_mask(w)
    return sys.reindexed(w)


# ---------------------------------------------------------------- rank


def rank_of(sys: SetSystem, a: int) -> int:
    return max((popcount(m) for m in sys.feasible if m & a == m), default=0)


def rank_and_closure(sys: SetSystem, a: int) -> Tuple[int, int]:
    """
    Rank of A and its closure: A together with every element whose
    addition leaves the rank unchanged

    The closure is closed: every element outside it raises the rank.
    """
    sys.ground.check_mask(a)
    full = sys.ground.full
    r = rank_of(sys, a)
    closure = a | mask_of(e for e in bits(full & ~a) if rank_of(sys, a | 1 << e) == r)

    if settings.debug_checks:
        if rank_of(sys, closure) != r:
            raise ConsistencyError(f"closure of {sys.ground.describe(a)} has a different rank")
        if not all(rank_of(sys, closure | 1 << e) > r for e in bits(full & ~closure)):
            raise ConsistencyError(f"closure {sys.ground.describe(closure)} is not closed")
    return r, closure


def maximal_feasible_in(sys: SetSystem, a: int) -> List[int]:
    """Inclusion-maximal feasible subsets of A, sorted canonically"""
    sys.ground.check_mask(a)
    inside = [m for m in sys.members if m & a == m]
    maximal = [m for m in inside if not any(other != m and other & m == m for other in inside)]

    if settings.debug_checks and len(maximal) > 1:
        sizes = {popcount(m) for m in maximal}
        contractions = {contract(sys, m) for m in maximal}
        if len(sizes) != 1 or len(contractions) != 1:
            raise ConsistencyError(f"maximal feasible subsets of {sys.ground.describe(a)} are not equivalent")
    return maximal


__all__ = [
    "GroundSet", "SetSystem", "AxiomViolation", "AxiomReport",
    "build_set_system", "loops", "check_axioms", "require_class",
    "lower_interval_violations", "upper_interval_violations",
    "feasible_ordering", "strong_exchange", "continuations", "contraction_support",
    "contract", "restrict", "rank_of", "rank_and_closure", "maximal_feasible_in",
]
