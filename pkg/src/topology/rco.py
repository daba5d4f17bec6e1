"""
Recursive coatom orderings of augmented covector posets

The root orders the topes by a linear extension of a tope poset. Below a
covector delta of support T, the coatoms of [bottom, delta] are emitted
along a gallery from delta to -delta through a chosen base: for each step
the facets of delta sharing the support of the crossed wall, ordered by an
extension adapted to that wall. Every ordering is checked before it is
returned.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..core.errors import ConsistencyError, InputError, PreconditionError
from ..core.progress_tracker import ProgressStatus, progress_tracker
from ..core.utils import popcount
from ..models.schemas import RcoNodeModel, RcoReportModel
from ..oriented.covectors import negate_signs, separation_set, signs_leq
from ..oriented.orient import OrientedSystem, bottom
from .covector_poset import TOP, augment, separation_poset, tope_poset
from .poset import FinitePoset

logger = logging.getLogger(__name__)


@dataclass
class RcoNode:
    top: str
    coatoms: List[str]
    children: List["RcoNode"] = field(default_factory=list)

    def to_model(self) -> RcoNodeModel:
        return RcoNodeModel(top=self.top, coatoms=self.coatoms, children=[c.to_model() for c in self.children])


@dataclass
class RecursiveCoatomOrdering:
    base: str
    root: RcoNode
    poset: FinitePoset
    passed: bool = True
    violation: Optional[str] = None

    def to_model(self) -> RcoReportModel:
        return RcoReportModel(base=self.base, passed=self.passed, violation=self.violation, ordering=self.root.to_model())


# ---------------------------------------------------------------- verification


def _verify_node(p: FinitePoset, node: RcoNode) -> Optional[str]:
    if node.top not in p:
        raise InputError(f"{node.top!r} is not an element of the poset")
    expected = set(p.lower_covers(node.top))
    if len(node.coatoms) != len(expected) or set(node.coatoms) != expected:
        return f"coatoms listed at {node.top} are not its lower covers"
    if not node.children:
        if any(p.lower_covers(q) for q in node.coatoms):
            return f"node {node.top} has no sub-orderings but its coatoms are not minimal"
        return None
    if len(node.children) != len(node.coatoms):
        return f"node {node.top} has {len(node.children)} sub-orderings for {len(node.coatoms)} coatoms"

    below = {q: set(p.below(q)) for q in node.coatoms}
    for i, (q, child) in enumerate(zip(node.coatoms, node.children)):
        if child.top != q:
            return f"sub-ordering {i} at {node.top} is rooted at {child.top}, expected {q}"
        earlier = node.coatoms[:i]
        shared = {c for c in child.coatoms if any(c in below[r] for r in earlier)}
        if set(child.coatoms[:len(shared)]) != shared:
            return f"at {node.top}, coatoms of {q} below earlier coatoms do not come first"
        covered = set()
        for z in shared:
            covered.update(p.below(z))
        for y in below[q]:
            if y != q and any(y in below[r] for r in earlier) and y not in covered:
                return f"at {node.top}, {y} below {q} and an earlier coatom lies under no shared facet"
        problem = _verify_node(p, child)
        if problem:
            return problem
    return None


def verify_rco(p: FinitePoset, root: RcoNode) -> Tuple[bool, Optional[str]]:
    """Check both recursive coatom ordering conditions at every node; returns the first violation"""
    problem = _verify_node(p, root)
    return problem is None, problem


# ---------------------------------------------------------------- construction


class _Builder:
    def __init__(self, oig: OrientedSystem):
        self.oig = oig
        self.lattice = oig.lattice
        self.phi = oig.lattice.as_poset()
        self.bottom = bottom(oig).signs
        self._posets: Dict[Tuple[int, str], FinitePoset] = {}

    def poset(self, flat: int, base: str) -> FinitePoset:
        key = (flat, base)
        if key not in self._posets:
            self._posets[key] = separation_poset(self.oig, flat, base)
        return self._posets[key]

    def facets(self, delta: str, flat: int) -> List[str]:
        return sorted(
            c.signs for c in self.oig.covectors
            if self.phi.is_cover(c.support, flat) and signs_leq(c.signs, delta)
        )

    def gallery(self, flat: int, base: str, delta: str) -> List[str]:
        """Least maximal chain from delta to -delta through base"""
        poset = self.poset(flat, delta)
        limit = separation_set(delta, base)
        target = negate_signs(delta)
        chain = [delta]
        reached = delta == base
        while chain[-1] != target:
            options = sorted(poset.upper_covers(chain[-1]))
            if not reached:
                options = [o for o in options if separation_set(delta, o) & ~limit == 0]
            if not options:
                raise ConsistencyError(f"no gallery from {delta} to {target} through {base}")
            chain.append(options[0])
            reached = reached or chain[-1] == base
        return chain

    def adapted(self, wall: str, flat: int, delta: str, previous: str) -> List[str]:
        """Extension of the separation poset at ``wall``: crossed covectors, then facets of delta, then the rest"""
        poset = self.poset(flat, wall)
        crossed = separation_set(delta, previous)
        facets = set(self.facets(delta, self.oig.get(delta).support))
        blocks: Tuple[List[str], List[str], List[str]] = ([], [], [])
        for e in poset.elements:
            if separation_set(delta, e) & crossed:
                blocks[0].append(e)
            elif e in facets:
                blocks[1].append(e)
            else:
                blocks[2].append(e)
        key = lambda e: (popcount(separation_set(wall, e)), e)
        order = sorted(blocks[0], key=key) + sorted(blocks[1], key=key) + sorted(blocks[2], key=key)
        if not poset.is_linear_extension(order):
            raise ConsistencyError(f"adapted order at {wall} is not a linear extension")
        return order

    def order_below(self, flat: int, base: str, delta: str) -> RcoNode:
        if self.phi.is_cover(self.lattice.bottom, flat):
            return RcoNode(delta, [self.bottom])

        chain = self.gallery(flat, base, delta)
        coatoms: List[str] = []
        walls: Dict[str, str] = {}
        for previous, current in zip(chain, chain[1:]):
            common = [
                f for f in self.facets(previous, flat) if signs_leq(f, current)
            ]
            if not common:
                raise ConsistencyError(f"{previous} and {current} share no facet")
            wall = common[0]
            wall_flat = self.oig.get(wall).support
            wanted = {f for f in self.facets(delta, flat) if self.oig.get(f).support == wall_flat}
            for f in self.adapted(wall, wall_flat, delta, previous):
                if f in wanted and f not in walls:
                    coatoms.append(f)
                    walls[f] = wall

        if set(coatoms) != set(self.facets(delta, flat)):
            raise ConsistencyError(f"gallery from {delta} does not reach every facet")
        children = [self.order_below(self.oig.get(f).support, walls[f], f) for f in coatoms]
        return RcoNode(delta, coatoms, children)


def recursive_coatom_ordering(
    oig: OrientedSystem,
    base: str,
    ext: Optional[Sequence[str]] = None,
) -> RecursiveCoatomOrdering:
    """
    Recursive coatom ordering of the augmented covector poset

    Args:
        oig: A validated oriented interval greedoid
        base: A tope
        ext: Linear extension of the tope poset at ``base``; defaults to
            separation-set size, then sign string

    Raises:
        PreconditionError: If base is not a tope or ext is not a linear extension
        ConsistencyError: If the construction or its verification fails
    """
    topes_at_base = tope_poset(oig, base)
    if ext is None:
        ext = list(topes_at_base.elements)
    ext = list(ext)
    if not topes_at_base.is_linear_extension(ext):
        raise PreconditionError(f"given order is not a linear extension of the tope poset at {base}")

    progress_tracker.update("rco", "construction", ProgressStatus.IN_PROGRESS, 0.0, f"ordering below {len(ext)} topes")
    builder = _Builder(oig)
    lattice = oig.lattice
    if lattice.top == lattice.bottom:
        root = RcoNode(TOP, ext)
    else:
        root = RcoNode(TOP, ext, [builder.order_below(lattice.top, base, t) for t in ext])

    poset = augment(oig)
    passed, violation = verify_rco(poset, root)
    status = ProgressStatus.COMPLETED if passed else ProgressStatus.FAILED
    progress_tracker.update("rco", "construction", status, 100.0, violation or "verified")
    if not passed:
        raise ConsistencyError(f"recursive coatom ordering at {base} fails verification: {violation}")
    logger.debug(f"recursive coatom ordering at {base} verified")
    return RecursiveCoatomOrdering(base, root, poset, passed, violation)
