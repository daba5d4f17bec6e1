"""
Finite poset kernel

Order is stored as a dense boolean matrix; the cover relation, ranks, meets,
joins and Möbius values are derived from it on demand and cached.
"""

import logging
from functools import cached_property
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..core.errors import InputError, PreconditionError

logger = logging.getLogger(__name__)


class FinitePoset:
    """Partial order on opaque hashable elements"""

    def __init__(self, elements: Sequence[Hashable], leq: np.ndarray):
        self.elements: Tuple[Hashable, ...] = tuple(elements)
        self.index: Dict[Hashable, int] = {}
        for position, element in enumerate(self.elements):
            if element in self.index:
                raise InputError(f"Duplicate poset element {element!r}")
            self.index[element] = position

        n = len(self.elements)
        leq = np.asarray(leq, dtype=bool)
        if leq.shape != (n, n):
            raise InputError(f"Order matrix has shape {leq.shape}, expected {(n, n)}")
        if not leq.diagonal().all():
            raise InputError("Order relation is not reflexive")
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            raise InputError("Order relation is not antisymmetric")
        as_int = leq.astype(np.int64)
        if ((as_int @ as_int > 0) & ~leq).any():
            raise InputError("Order relation is not transitive")

        self._leq = leq
        self._leq.setflags(write=False)
        self._mobius: Dict[int, Dict[int, int]] = {}

    # ------------------------------------------------------------ builders

    @classmethod
    def from_covers(cls, elements: Sequence[Hashable], covers: Iterable[Tuple[Hashable, Hashable]]) -> "FinitePoset":
        """Order = reflexive-transitive closure of (lower, upper) pairs"""
        graph = nx.DiGraph()
        graph.add_nodes_from(elements)
        graph.add_edges_from(covers)
        if len(graph) != len(elements):
            raise InputError("Cover relation names an element outside the poset")
        if not nx.is_directed_acyclic_graph(graph):
            raise InputError("Cover relation has a cycle")

        closure = nx.transitive_closure_dag(graph)
        index = {element: position for position, element in enumerate(elements)}
        leq = np.eye(len(elements), dtype=bool)
        for lower, upper in closure.edges:
            leq[index[lower], index[upper]] = True
        return cls(elements, leq)

    @classmethod
    def from_relation(cls, elements: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool]) -> "FinitePoset":
        elements = tuple(elements)
        matrix = np.array([[leq(a, b) for b in elements] for a in elements], dtype=bool).reshape(len(elements), len(elements))
        return cls(elements, matrix)

    def subposet(self, elements: Iterable[Hashable]) -> "FinitePoset":
        wanted = set(elements)
        chosen = [e for e in self.elements if e in wanted]
        positions = [self.index[e] for e in chosen]
        return FinitePoset(chosen, self._leq[np.ix_(positions, positions)])

    # ------------------------------------------------------------ order

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, element) -> bool:
        return element in self.index

    @property
    def leq_matrix(self) -> np.ndarray:
        return self._leq

    def _pos(self, element) -> int:
        try:
            return self.index[element]
        except KeyError:
            raise InputError(f"{element!r} is not an element of the poset") from None

    def leq(self, a, b) -> bool:
        return bool(self._leq[self._pos(a), self._pos(b)])

    def less(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        n = len(self.elements)
        strict = self._leq & ~np.eye(n, dtype=bool)
        as_int = strict.astype(np.int64)
        two_step = (as_int @ as_int) > 0
        cover = strict & ~two_step
        cover.setflags(write=False)
        return cover

    def covers(self) -> List[Tuple[Hashable, Hashable]]:
        """All (lower, upper) cover pairs in element order"""
        rows, cols = np.nonzero(self.cover_matrix)
        return [(self.elements[i], self.elements[j]) for i, j in zip(rows, cols)]

    def is_cover(self, lower, upper) -> bool:
        return bool(self.cover_matrix[self._pos(lower), self._pos(upper)])

    def upper_covers(self, element) -> List[Hashable]:
        row = self.cover_matrix[self._pos(element)]
        return [self.elements[j] for j in np.nonzero(row)[0]]

    def lower_covers(self, element) -> List[Hashable]:
        column = self.cover_matrix[:, self._pos(element)]
        return [self.elements[i] for i in np.nonzero(column)[0]]

    def below(self, element) -> List[Hashable]:
        """Elements <= element"""
        return [self.elements[i] for i in np.nonzero(self._leq[:, self._pos(element)])[0]]

    def above(self, element) -> List[Hashable]:
        return [self.elements[j] for j in np.nonzero(self._leq[self._pos(element)])[0]]

    def interval(self, a, b) -> List[Hashable]:
        i, j = self._pos(a), self._pos(b)
        mask = self._leq[i] & self._leq[:, j]
        return [self.elements[k] for k in np.nonzero(mask)[0]]

    @cached_property
    def bottom(self) -> Optional[Hashable]:
        hits = np.nonzero(self._leq.all(axis=1))[0]
        return self.elements[hits[0]] if len(hits) else None

    @cached_property
    def top(self) -> Optional[Hashable]:
        hits = np.nonzero(self._leq.all(axis=0))[0]
        return self.elements[hits[0]] if len(hits) else None

    def is_bounded(self) -> bool:
        return len(self.elements) > 0 and self.bottom is not None and self.top is not None

    def hasse_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.elements)
        graph.add_edges_from(self.covers())
        return graph

    # ------------------------------------------------------------ grading

    @cached_property
    def _ranks(self) -> Optional[Dict[Hashable, int]]:
        graph = self.hasse_graph()
        ranks: Dict[Hashable, int] = {}
        for element in nx.topological_sort(graph):
            lower = list(graph.predecessors(element))
            ranks[element] = 1 + max(ranks[x] for x in lower) if lower else 0
        for lower, upper in graph.edges:
            if ranks[upper] != ranks[lower] + 1:
                return None
        return ranks

    def is_graded(self) -> bool:
        if self._ranks is None:
            return False
        maximal = [e for e in self.elements if not self.upper_covers(e)]
        return len({self._ranks[e] for e in maximal}) <= 1

    def rank(self, element) -> int:
        if not self.is_graded():
            raise PreconditionError("Poset is not graded")
        return self._ranks[element]

    @property
    def length(self) -> int:
        """Rank of the top element of a bounded graded poset"""
        if not self.is_bounded():
            raise PreconditionError("Poset is not bounded")
        return self.rank(self.top)

    def elements_of_rank(self, r: int) -> List[Hashable]:
        return [e for e in self.elements if self.rank(e) == r]

    def is_linear_extension(self, order: Sequence[Hashable]) -> bool:
        """Whether ``order`` lists every element once with no element before one below it"""
        if len(order) != len(self.elements) or set(order) != set(self.elements):
            return False
        positions = [self._pos(e) for e in order]
        for i, a in enumerate(positions):
            for b in positions[i + 1:]:
                if self._leq[b, a]:
                    return False
        return True

    # ------------------------------------------------------------ lattices

    def _greatest(self, candidates: np.ndarray) -> Optional[int]:
        positions = np.nonzero(candidates)[0]
        for p in positions:
            if self._leq[positions, p].all():
                return int(p)
        return None

    def _least(self, candidates: np.ndarray) -> Optional[int]:
        positions = np.nonzero(candidates)[0]
        for p in positions:
            if self._leq[p, positions].all():
                return int(p)
        return None

    @cached_property
    def _meet_table(self) -> Optional[np.ndarray]:
        n = len(self.elements)
        table = np.full((n, n), -1, dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                m = self._greatest(self._leq[:, i] & self._leq[:, j])
                if m is None:
                    return None
                table[i, j] = table[j, i] = m
        return table

    @cached_property
    def _join_table(self) -> Optional[np.ndarray]:
        n = len(self.elements)
        table = np.full((n, n), -1, dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                m = self._least(self._leq[i] & self._leq[j])
                if m is None:
                    return None
                table[i, j] = table[j, i] = m
        return table

    def is_lattice(self) -> bool:
        return len(self.elements) > 0 and self._meet_table is not None and self._join_table is not None

    def meet(self, a, b) -> Hashable:
        if self._meet_table is None:
            raise PreconditionError("Poset is not a meet-semilattice")
        return self.elements[self._meet_table[self._pos(a), self._pos(b)]]

    def join(self, a, b) -> Hashable:
        if self._join_table is None:
            raise PreconditionError("Poset is not a join-semilattice")
        return self.elements[self._join_table[self._pos(a), self._pos(b)]]

    def lower_semimodular_violation(self) -> Optional[Tuple[Hashable, Hashable, Hashable]]:
        """First (a, b, c) with a, b covered by c whose meet is not covered by both"""
        for c in self.elements:
            lower = self.lower_covers(c)
            for i, a in enumerate(lower):
                for b in lower[i + 1:]:
                    m = self.meet(a, b)
                    if not (self.is_cover(m, a) and self.is_cover(m, b)):
                        return a, b, c
        return None

    # ------------------------------------------------------------ Möbius

    def _mobius_from(self, i: int) -> Dict[int, int]:
        if i not in self._mobius:
            above = np.nonzero(self._leq[i])[0]
            # fewer elements below means earlier in some linear extension
            depth = self._leq[:, above].sum(axis=0)
            ordered = [int(above[k]) for k in np.argsort(depth, kind="stable")]
            values: Dict[int, int] = {}
            for j in ordered:
                if j == i:
                    values[j] = 1
                    continue
                values[j] = -sum(v for z, v in values.items() if self._leq[z, j] and z != j)
            self._mobius[i] = values
        return self._mobius[i]

    def mobius(self, x, y) -> int:
        """Möbius function value; requires x <= y"""
        i, j = self._pos(x), self._pos(y)
        if not self._leq[i, j]:
            raise PreconditionError(f"mobius needs {x!r} <= {y!r}")
        return self._mobius_from(i)[j]

    # ------------------------------------------------------------ chains

    def maximal_chains(self, elements: Optional[Iterable[Hashable]] = None) -> Iterator[Tuple[Hashable, ...]]:
        """Maximal chains of the induced subposet on ``elements`` (default: all)"""
        sub = self if elements is None else self.subposet(elements)
        graph = sub.hasse_graph()
        sources = [e for e in sub.elements if graph.in_degree(e) == 0]

        def walk(path):
            successors = list(graph.successors(path[-1]))
            if not successors:
                yield tuple(path)
                return
            for nxt in successors:
                yield from walk(path + [nxt])

        for source in sources:
            yield from walk([source])

    # ------------------------------------------------------------ export

    def to_dot(self, label: Callable[[Hashable], str] = str, name: str = "poset") -> str:
        """Hasse diagram in DOT, edges from lower to upper element"""
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for position, element in enumerate(self.elements):
            text = label(element).replace('"', '\\"')
            lines.append(f'  n{position} [label="{text}"];')
        for lower, upper in self.covers():
            lines.append(f"  n{self.index[lower]} -> n{self.index[upper]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def chain_poset(n: int) -> FinitePoset:
    """The chain 0 < 1 < ... < n-1"""
    elements = list(range(n))
    return FinitePoset.from_covers(elements, [(k, k + 1) for k in range(n - 1)])


def boolean_lattice(atoms: Sequence[Hashable]) -> FinitePoset:
    """Subsets of ``atoms`` (as frozensets) ordered by inclusion"""
    atoms = list(atoms)
    elements = []
    for mask in range(1 << len(atoms)):
        elements.append(frozenset(a for k, a in enumerate(atoms) if mask >> k & 1))
    elements.sort(key=lambda s: (len(s), sorted(atoms.index(a) for a in s)))
    return FinitePoset.from_relation(elements, lambda a, b: a <= b)
