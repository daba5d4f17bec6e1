"""
Flag counts, the coatom-meet sublattice, and sphericity reports

Covector chains over a descending chain of flats are counted directly and
compared with the product of Möbius sums over the lattice of flats.
"""

import logging
from dataclasses import dataclass, field
from math import prod
from typing import Dict, List, Optional, Sequence

import networkx as nx

from ..core.config import settings
from ..core.errors import CapExceededError, ConsistencyError, PreconditionError
from ..models.schemas import FlagCountModel, FlagTableModel, SphereReportModel
from ..oriented.covectors import signs_leq
from ..oriented.orient import OrientedSystem, topes, underlying_oriented_matroid
from .complexes import HomologyReport, homology_evidence, order_complex
from .covector_poset import augment, is_eulerian, is_thin, rank_cell_counts
from .rco import recursive_coatom_ordering

logger = logging.getLogger(__name__)


@dataclass
class FlagCount:
    chain: List[int]
    observed: int
    predicted: int

    @property
    def agrees(self) -> bool:
        return self.observed == self.predicted

    def to_model(self) -> FlagCountModel:
        return FlagCountModel(chain=self.chain, observed=self.observed, predicted=self.predicted)


def _check_chain(oig: OrientedSystem, chain: Sequence[int]):
    lattice = oig.lattice
    if not chain:
        raise PreconditionError("Flag chain is empty")
    for f in chain:
        if not 0 <= f < len(lattice):
            raise PreconditionError(f"{f} is not a flat id")
    for upper, lower in zip(chain, chain[1:]):
        if upper == lower or not lattice.leq(lower, upper):
            raise PreconditionError(f"flags must descend: {lattice.describe(lower)} is not below {lattice.describe(upper)}")
    if chain[-1] != lattice.bottom:
        raise PreconditionError("flag chain must end at the bottom flat")


def flag_count(oig: OrientedSystem, chain: Sequence[int]) -> FlagCount:
    """
    Covector chains with the given support chain, counted and predicted

    Args:
        chain: Flat ids from the top of the chain down to the bottom flat

    Raises:
        PreconditionError: If chain does not descend to the bottom flat
    """
    chain = list(chain)
    _check_chain(oig, chain)
    phi = oig.lattice.as_poset()

    levels = [[c.signs for c in oig.covectors if c.support == f] for f in chain]
    ways: Dict[str, int] = {c: 1 for c in levels[-1]}
    for level in reversed(levels[:-1]):
        ways = {a: sum(n for b, n in ways.items() if signs_leq(b, a)) for a in level}
    observed = sum(ways[a] for a in levels[0])

    predicted = prod(
        sum(abs(phi.mobius(b, upper)) for b in phi.interval(lower, upper))
        for upper, lower in zip(chain, chain[1:])
    )
    return FlagCount(chain, observed, predicted)


def _descending_chains(oig: OrientedSystem) -> List[List[int]]:
    lattice = oig.lattice
    chains = []

    def extend(chain: List[int]):
        chains.append(chain + [lattice.bottom] if chain[-1] != lattice.bottom else chain)
        if chain[-1] == lattice.bottom:
            return
        for f in range(len(lattice)):
            if f != chain[-1] and f != lattice.bottom and lattice.leq(f, chain[-1]):
                extend(chain + [f])

    for start in range(len(lattice)):
        extend([start])
    return chains


@dataclass
class FlagTable:
    rows: List[FlagCount]

    @property
    def all_agree(self) -> bool:
        return all(row.agrees for row in self.rows)

    def to_model(self) -> FlagTableModel:
        return FlagTableModel(rows=[r.to_model() for r in self.rows], all_agree=self.all_agree)


def flag_table(oig: OrientedSystem) -> FlagTable:
    """
    Flag counts over every descending chain ending at the bottom flat

    Raises:
        CapExceededError: If the lattice of flats is too large
    """
    size = len(oig.lattice)
    if size > settings.flag_table_max_flats:
        raise CapExceededError("Number of flats", size, settings.flag_table_max_flats, "flag_table_max_flats")
    rows = [flag_count(oig, chain) for chain in _descending_chains(oig)]
    logger.debug(f"flag table: {len(rows)} chains")
    return FlagTable(rows)


# ---------------------------------------------------------------- coatom meets


@dataclass
class FlatEmbeddingReport:
    image: List[int]
    meet_closed: bool
    isomorphic_to_matroid: bool
    mobius_vanishes_off_image: bool
    mobius_agrees_on_image: bool
    phi_sum: int
    image_sum: int

    @property
    def passed(self) -> bool:
        return (self.meet_closed and self.isomorphic_to_matroid and self.mobius_vanishes_off_image
                and self.mobius_agrees_on_image and self.phi_sum == self.image_sum)


def underlying_flat_embedding_checks(oig: OrientedSystem) -> FlatEmbeddingReport:
    """
    Compare the lattice of flats with its sublattice generated by coatoms under meet

    The sublattice is the top together with all meets of coatoms; it should be
    the flat lattice of the underlying matroid, and the Möbius function to the
    top should live on it.
    """
    lattice = oig.lattice
    phi = lattice.as_poset()
    top = lattice.top

    image = {top}
    frontier = set(lattice.coatoms())
    while frontier:
        image |= frontier
        frontier = {lattice.meet(a, b) for a in image - {top} for b in image - {top}} - image
    ordered = sorted(image)
    bar = phi.subposet(ordered)

    meet_closed = all(lattice.meet(a, b) in image for a in image for b in image)
    om = underlying_oriented_matroid(oig)
    isomorphic = nx.is_isomorphic(bar.hasse_graph(), om.lattice.as_poset().hasse_graph())

    vanishes = all(phi.mobius(b, top) == 0 for b in range(len(lattice)) if b not in image)
    agrees = all(phi.mobius(b, top) == bar.mobius(b, top) for b in ordered)
    phi_sum = sum(abs(phi.mobius(b, top)) for b in range(len(lattice)))
    image_sum = sum(abs(bar.mobius(b, top)) for b in ordered)
    return FlatEmbeddingReport(ordered, meet_closed, isomorphic, vanishes, agrees, phi_sum, image_sum)


# ---------------------------------------------------------------- sphericity


@dataclass
class SphereReport:
    rank: int
    thin: bool
    eulerian: bool
    cell_counts: List[int]
    homology: HomologyReport
    rco_verified: bool
    violation: Optional[str] = field(default=None)

    @property
    def sphere_evidence(self) -> bool:
        return (self.thin and self.eulerian and self.rco_verified
                and (self.rank == 0 or self.homology.is_sphere(self.rank - 1)))

    def to_model(self) -> SphereReportModel:
        return SphereReportModel(
            rank=self.rank,
            thin=self.thin,
            eulerian=self.eulerian,
            cell_counts=self.cell_counts,
            homology=self.homology.to_model(),
            sphere_evidence=self.sphere_evidence,
            rco_verified=self.rco_verified,
        )


def sphere_report(oig: OrientedSystem, base: Optional[str] = None) -> SphereReport:
    """
    Evidence that the augmented covector poset is the face poset of a sphere:
    thinness, the Eulerian property, a verified recursive coatom ordering and
    the integer homology of its order complex
    """
    poset = augment(oig)
    rank = oig.lattice.rank
    thin, _ = is_thin(poset)
    eulerian = is_eulerian(poset)
    counts = rank_cell_counts(poset)

    if rank == 0:
        homology = HomologyReport([], 0, [])
    else:
        homology = homology_evidence(order_complex(poset))

    base = base or topes(oig)[0].signs
    try:
        recursive_coatom_ordering(oig, base)
        rco_verified, violation = True, None
    except ConsistencyError as e:
        rco_verified, violation = False, str(e)

    report = SphereReport(rank, thin, eulerian, counts, homology, rco_verified, violation)
    logger.debug(f"sphere report: rank {rank}, cells {counts}, evidence={report.sphere_evidence}")
    return report
