"""
Covector posets of oriented interval greedoids

The augmented poset adjoins a maximum, keyed TOP, to the covectors under the
componentwise sign order. Topes are the covectors of support [empty set].
"""

import logging
from typing import Dict, List, Optional, Tuple

import networkx as nx

from ..core.errors import ConsistencyError, PreconditionError
from ..core.utils import popcount
from ..oriented.covectors import negate_signs, separation_set, signs_leq
from ..oriented.orient import OrientedSystem, subtopes, topes, underlying_oriented_matroid
from .poset import FinitePoset

logger = logging.getLogger(__name__)

TOP = "top"


def covector_poset(oig: OrientedSystem) -> FinitePoset:
    signs = [c.signs for c in oig.covectors]
    return FinitePoset.from_relation(signs, signs_leq)


def augment(oig: OrientedSystem) -> FinitePoset:
    """Covectors plus an adjoined maximum; bounded and graded of length rank + 1"""
    signs = [c.signs for c in oig.covectors]
    elements = signs + [TOP]
    poset = FinitePoset.from_relation(elements, lambda a, b: b == TOP or (a != TOP and signs_leq(a, b)))

    if not poset.is_bounded() or not poset.is_graded():
        raise ConsistencyError("augmented covector poset is not bounded and graded")
    if poset.length != oig.lattice.rank + 1:
        raise ConsistencyError(f"augmented covector poset has length {poset.length}, expected {oig.lattice.rank + 1}")
    logger.debug(f"augmented poset: {len(poset)} elements, length {poset.length}")
    return poset


def _require_bounded_graded(p: FinitePoset):
    if not p.is_bounded():
        raise PreconditionError("Poset is not bounded")
    if not p.is_graded():
        raise PreconditionError("Poset is not graded")


def is_thin(p: FinitePoset) -> Tuple[bool, Optional[Tuple]]:
    """Whether every interval of length two has four elements; returns the first bad interval"""
    _require_bounded_graded(p)
    for x in p.elements:
        for y in p.above(x):
            if p.rank(y) - p.rank(x) == 2 and len(p.interval(x, y)) != 4:
                return False, (x, y)
    return True, None


def is_eulerian(p: FinitePoset) -> bool:
    _require_bounded_graded(p)
    for x in p.elements:
        for y in p.above(x):
            if p.mobius(x, y) != (-1) ** (p.rank(y) - p.rank(x)):
                return False
    return True


def rank_cell_counts(p: FinitePoset) -> List[int]:
    """Number of elements of each rank strictly between bottom and top"""
    _require_bounded_graded(p)
    return [len(p.elements_of_rank(r)) for r in range(1, p.length)]


def two_topes_per_subtope(oig: OrientedSystem) -> bool:
    maximal = topes(oig)
    return all(sum(signs_leq(s, t) for t in maximal) == 2 for s in subtopes(oig))


def _raw_tope_graph(oig: OrientedSystem) -> nx.Graph:
    maximal = [t.signs for t in topes(oig)]
    graph = nx.Graph()
    graph.add_nodes_from(maximal)
    for s in subtopes(oig):
        above = [t for t in maximal if signs_leq(s, t)]
        for i, a in enumerate(above):
            for b in above[i + 1:]:
                graph.add_edge(a, b)
    return graph


def tope_graph(oig: OrientedSystem) -> nx.Graph:
    """
    Topes joined when they share a subtope

    Raises:
        ConsistencyError: If the graph differs from the tope graph of the
            underlying oriented matroid
    """
    graph = _raw_tope_graph(oig)
    if oig.report.passed:
        om_graph = _raw_tope_graph(underlying_oriented_matroid(oig))
        if not nx.is_isomorphic(graph, om_graph):
            raise ConsistencyError("tope graph is not isomorphic to the tope graph of the underlying oriented matroid")
    return graph


def separation_poset(oig: OrientedSystem, flat: int, base: str) -> FinitePoset:
    """Covectors of support ``flat`` ordered by separation from ``base``"""
    members = [c.signs for c in oig.covectors if c.support == flat]
    if base not in members:
        raise PreconditionError(f"{base} does not have support {oig.lattice.describe(flat)}")
    separated: Dict[str, int] = {m: separation_set(base, m) for m in members}
    members.sort(key=lambda m: (popcount(separated[m]), m))
    return FinitePoset.from_relation(members, lambda a, b: separated[a] & separated[b] == separated[a])


def tope_poset(oig: OrientedSystem, base: str) -> FinitePoset:
    """
    Topes ordered by inclusion of their separation sets from ``base``

    Raises:
        PreconditionError: If base is not a tope
        ConsistencyError: If the Hasse diagram is not an orientation of the tope graph
    """
    poset = separation_poset(oig, oig.lattice.top, base)
    if poset.bottom != base or poset.top != negate_signs(base):
        raise ConsistencyError(f"tope poset at {base} is not bounded by {base} and its negation")
    hasse = {frozenset(edge) for edge in poset.covers()}
    adjacency = {frozenset(edge) for edge in _raw_tope_graph(oig).edges}
    if hasse != adjacency:
        raise ConsistencyError("tope poset Hasse diagram is not an orientation of the tope graph")
    return poset


def tope_graph_dot(graph: nx.Graph) -> str:
    lines = ["graph topes {"]
    index = {node: position for position, node in enumerate(sorted(graph.nodes))}
    for node, position in index.items():
        lines.append(f'  n{position} [label="{node}"];')
    for a, b in sorted(tuple(sorted(edge)) for edge in graph.edges):
        lines.append(f"  n{index[a]} -- n{index[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
