"""
Flats of an interval greedoid and the lattice they form

A flat is a class of feasible sets with equal continuations. Flats are
ordered by reverse inclusion of their unions (xi); join and meet go through
mu, the flat of a maximal feasible subset.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Optional, Tuple

import numpy as np

from ..core.config import settings
from ..core.errors import ConsistencyError, InputError
from ..core.utils import bits, index_tuple, popcount
from ..models.schemas import FlatModel, LatticeModel
from ..topology.poset import FinitePoset
from .setsys import GroundSet, SetSystem, contract, require_class

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Flat:
    id: int
    members: Tuple[int, ...]
    gamma: int
    xi: int
    corank: int


class FlatLattice:
    """Lattice of flats; build with flat_lattice()"""

    def __init__(self, system: SetSystem, flats: Tuple[Flat, ...]):
        self.system = system
        self.flats = flats
        self._flat_of: Dict[int, int] = {m: f.id for f in flats for m in f.members}

        n = len(flats)
        xi = [f.xi for f in flats]
        self.leq_matrix = np.array(
            [[xi[b] & xi[a] == xi[b] for b in range(n)] for a in range(n)], dtype=bool
        ).reshape(n, n)
        self.join_table = np.array(
            [[self.mu(xi[a] & xi[b]) for b in range(n)] for a in range(n)], dtype=np.int64
        ).reshape(n, n)
        self.meet_table = np.array(
            [[self.mu(xi[a] | xi[b]) for b in range(n)] for a in range(n)], dtype=np.int64
        ).reshape(n, n)

        self.top = self._flat_of[0]
        self.bottom = max(range(n), key=lambda f: (flats[f].corank, -f))

    @property
    def ground(self) -> GroundSet:
        return self.system.ground

    def __len__(self) -> int:
        return len(self.flats)

    @property
    def rank(self) -> int:
        return self.flats[self.bottom].corank

    def mu(self, a: int) -> int:
        """Flat of a maximum-cardinality (hence inclusion-maximal) feasible subset of A"""
        best = None
        for member in self.system.members:
            if member & a == member and (best is None or popcount(member) > popcount(best)):
                best = member
        return self._flat_of[best]

    def xi(self, f: int) -> int:
        return self.flats[f].xi

    def gamma(self, f: int) -> int:
        return self.flats[f].gamma

    def flat_of(self, x: int) -> int:
        """Flat containing the feasible set X"""
        self.system.require_feasible(x)
        return self._flat_of[x]

    def leq(self, a: int, b: int) -> bool:
        return bool(self.leq_matrix[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def as_poset(self) -> FinitePoset:
        return FinitePoset(range(len(self.flats)), self.leq_matrix)

    def covers(self) -> List[Tuple[int, int]]:
        return [(int(a), int(b)) for a, b in self.as_poset().covers()]

    def coatoms(self) -> List[int]:
        return [a for a, b in self.covers() if b == self.top]

    def describe(self, f: int) -> str:
        members = self.flats[f].members
        return "[" + self.ground.describe(members[0]) + "]"

    def to_model(self) -> LatticeModel:
        ground = self.ground
        return LatticeModel(
            flats=[
                FlatModel(
                    id=f.id,
                    members=[ground.labels_of(m) for m in f.members],
                    xi=ground.labels_of(f.xi),
                    gamma=ground.labels_of(f.gamma),
                    corank=f.corank,
                )
                for f in self.flats
            ],
            covers=self.covers(),
            top=self.top,
            bottom=self.bottom,
            rank=self.rank,
        )

    def to_dot(self) -> str:
        return self.as_poset().to_dot(
            label=lambda f: self.ground.describe(self.flats[f].xi), name="flats"
        )


def _group_flats(sys: SetSystem) -> Tuple[Flat, ...]:
    groups: Dict[int, List[int]] = {}
    for member in sys.members:
        gamma = 0
        for e in bits(sys.ground.full & ~member):
            if (member | 1 << e) in sys.feasible:
                gamma |= 1 << e
        groups.setdefault(gamma, []).append(member)

    raw = []
    for gamma, members in groups.items():
        coranks = {popcount(m) for m in members}
        if len(coranks) != 1:
            raise ConsistencyError(
                f"feasible sets of different sizes share continuations {sys.ground.describe(gamma)}"
            )
        xi = 0
        for m in members:
            xi |= m
        raw.append((coranks.pop(), xi, gamma, tuple(members)))

    raw.sort(key=lambda item: (-item[0], index_tuple(item[1])))
    return tuple(
        Flat(id=i, members=members, gamma=gamma, xi=xi, corank=corank)
        for i, (corank, xi, gamma, members) in enumerate(raw)
    )


def _verify(lattice: FlatLattice):
    n = len(lattice)
    leq = lattice.leq_matrix
    for a in range(n):
        for b in range(n):
            j, m = lattice.join(a, b), lattice.meet(a, b)
            upper = leq[a] & leq[b]
            lower = leq[:, a] & leq[:, b]
            if not upper[j] or not leq[j, upper].all():
                raise ConsistencyError(f"join of flats {a} and {b} is not a least upper bound")
            if not lower[m] or not leq[lower, m].all():
                raise ConsistencyError(f"meet of flats {a} and {b} is not a greatest lower bound")

    poset = lattice.as_poset()
    for lower, upper in poset.covers():
        if lattice.flats[lower].corank != lattice.flats[upper].corank + 1:
            raise ConsistencyError(f"cover {lower} < {upper} does not drop corank by one")
    if lattice.flats[lattice.top].corank != 0:
        raise ConsistencyError("top flat does not have corank 0")
    if not leq[lattice.bottom].all():
        raise ConsistencyError("the flat of maximal feasible sets is not the bottom")

    cover = poset.cover_matrix
    for c in range(n):
        below = np.nonzero(cover[:, c])[0]
        for i, a in enumerate(below):
            for b in below[i + 1:]:
                m = lattice.meet(int(a), int(b))
                if not (cover[m, a] and cover[m, b]):
                    raise ConsistencyError(f"flats {a}, {b} under {c} break lower semimodularity")


def _cross_check(lattice: FlatLattice):
    sys = lattice.system
    for f in lattice.flats:
        if len({contract(sys, m) for m in f.members}) != 1:
            raise ConsistencyError(f"members of flat {f.id} have different contractions")
    for a in lattice.flats:
        for b in lattice.flats:
            representative = b.members[0]
            exists = any(m & representative == representative for m in a.members)
            if exists != lattice.leq(a.id, b.id):
                raise ConsistencyError(f"flat order disagrees with the contraction order at ({a.id}, {b.id})")


def flat_lattice(sys: SetSystem) -> FlatLattice:
    """
    Build the lattice of flats of an interval greedoid

    Raises:
        AxiomError: If sys is not an interval greedoid
        ConsistencyError: If a lattice invariant fails
    """
    require_class(sys)
    lattice = FlatLattice(sys, _group_flats(sys))
    _verify(lattice)
    if settings.debug_checks:
        _cross_check(lattice)
    logger.debug(f"flat lattice: {len(lattice)} flats, rank {lattice.rank}")
    return lattice


def mu_map(lattice: FlatLattice, a: int) -> int:
    lattice.ground.check_mask(a)
    return lattice.mu(a)


def xi(lattice: FlatLattice, f: int) -> int:
    return lattice.xi(f)


def join(lattice: FlatLattice, a: int, b: int) -> int:
    return lattice.join(a, b)


def meet(lattice: FlatLattice, a: int, b: int) -> int:
    return lattice.meet(a, b)


def ig_from_semimodular_lattice(
    poset: FinitePoset,
    label: Optional[Callable[[Hashable], str]] = None,
) -> Tuple[SetSystem, Dict[int, Hashable]]:
    """
    Interval greedoid of a finite lower semimodular lattice

    The ground set is the meet-irreducible elements (one upper cover, not the
    top), labelled in poset order. A set is feasible when its elements can be
    listed so the running meets descend from the top by covers.

    Returns:
        (system, iso) where iso maps each flat id to the meet of its members

    Raises:
        InputError: If the poset is not a lattice or not lower semimodular
    """
    if not poset.is_lattice():
        raise InputError("Poset is not a lattice")
    violation = poset.lower_semimodular_violation()
    if violation is not None:
        a, b, c = violation
        raise InputError(f"Lattice is not lower semimodular at {a!r}, {b!r} under {c!r}")

    label = label or str
    top = poset.top
    irreducible = [e for e in poset.elements if e != top and len(poset.upper_covers(e)) == 1]

    running: Dict[int, Hashable] = {0: top}
    frontier = [0]
    while frontier:
        next_frontier = []
        for mask in frontier:
            current = running[mask]
            for k, e in enumerate(irreducible):
                if mask >> k & 1 or (mask | 1 << k) in running:
                    continue
                lowered = poset.meet(current, e)
                if poset.is_cover(lowered, current):
                    running[mask | 1 << k] = lowered
                    next_frontier.append(mask | 1 << k)
        frontier = next_frontier

    system = SetSystem(GroundSet(tuple(label(e) for e in irreducible)), frozenset(running))
    lattice = flat_lattice(system)
    iso = {f.id: running[f.members[0]] for f in lattice.flats}

    if len(set(iso.values())) != len(iso) or len(iso) != len(poset):
        raise ConsistencyError("flats do not correspond bijectively to lattice elements")
    for a in iso:
        for b in iso:
            if lattice.leq(a, b) != poset.leq(iso[a], iso[b]):
                raise ConsistencyError("flat order disagrees with the lattice order")

    logger.debug(f"lattice of {len(poset)} elements gives {len(irreducible)} meet-irreducibles, {len(running)} feasible sets")
    return system, iso
