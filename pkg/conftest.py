"""
Shared fixtures: the named corpus and every small interval greedoid
"""

from functools import lru_cache
from itertools import combinations, permutations
from typing import List, Tuple

import pytest

from src.core.config import settings
from src.core.progress_tracker import progress_tracker
from src.geometry.arrangements import RationalArrangement, om_from_vectors
from src.geometry.complexified import complexified_oig
from src.greedoids.setsys import GroundSet, SetSystem, build_set_system, check_axioms
from src.models.schemas import AxiomClass
from src.oriented.orient import oig_from_antimatroid

COLINEAR_FEASIBLE = [[], ["x"], ["z"], ["x", "y"], ["x", "z"], ["y", "z"], ["x", "y", "z"]]


def _layers(n: int) -> List[Tuple[int, ...]]:
    """
    Accessible families on n elements built layer by layer, keeping exchange
    between consecutive layers; one family per isomorphism class

    Isomorphic families have isomorphic extensions, so each partial family is
    pruned against its canonical form before it grows.
    """
    images = [
        [sum(1 << perm[e] for e in range(n) if m >> e & 1) for m in range(1 << n)]
        for perm in permutations(range(n))
    ]
    seen = set()
    out = []

    def grow(family: Tuple[int, ...], layer: Tuple[int, ...], size: int):
        key = min(tuple(sorted(table[m] for m in family)) for table in images)
        if key in seen:
            return
        seen.add(key)
        out.append(family)
        if size == n:
            return
        candidates = sorted({m | 1 << e for m in layer for e in range(n) if not m >> e & 1})
        for k in range(1, len(candidates) + 1):
            for chosen in combinations(candidates, k):
                upper = set(chosen)
                reach = {y: sum(1 << e for e in range(n) if (y | 1 << e) in upper) for y in layer}
                if all(x & ~y & reach[y] for x in chosen for y in layer):
                    grow(family + chosen, chosen, size + 1)

    grow((0,), (0,), 0)
    return out


@lru_cache(maxsize=None)
def small_interval_greedoids(max_size: int = 4) -> Tuple[SetSystem, ...]:
    """Loopless interval greedoids on 1..max_size elements, one per isomorphism class"""
    systems = []
    for n in range(1, max_size + 1):
        full = (1 << n) - 1
        ground = GroundSet(tuple("abcdefgh"[:n]))
        for family in _layers(n):
            union = 0
            for m in family:
                union |= m
            if union != full:
                continue
            system = SetSystem(ground, frozenset(family))
            if check_axioms(system).passed:
                systems.append(system)
    return tuple(systems)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive sweeps over five-element greedoids or every pair deletion")


@pytest.fixture(autouse=True)
def reset_progress():
    progress_tracker.reset()
    yield


@pytest.fixture
def debug_checks(monkeypatch):
    """Turn on every internal cross-check for one test"""
    monkeypatch.setattr(settings, "debug_checks", True)
    yield settings


@pytest.fixture(scope="session")
def colinear_system() -> SetSystem:
    return build_set_system(["x", "y", "z"], COLINEAR_FEASIBLE)


@pytest.fixture(scope="session")
def colinear_oig(colinear_system):
    return oig_from_antimatroid(colinear_system)


@pytest.fixture(scope="session")
def rank1_arrangement() -> RationalArrangement:
    return RationalArrangement(1, ((1,),))


@pytest.fixture(scope="session")
def rank1_complex(rank1_arrangement):
    return complexified_oig(rank1_arrangement)


@pytest.fixture(scope="session")
def orthogonal_lines() -> RationalArrangement:
    return RationalArrangement(2, ((1, 0), (0, 1)))


@pytest.fixture(scope="session")
def orthogonal_complex(orthogonal_lines):
    return complexified_oig(orthogonal_lines)


@pytest.fixture(scope="session")
def three_vectors():
    return om_from_vectors([(-3, 1), (2, 1), (4, 1)], labels=["x", "y", "z"])


@pytest.fixture(scope="session")
def small_greedoids() -> Tuple[SetSystem, ...]:
    return small_interval_greedoids(4)


@pytest.fixture(scope="session")
def small_antimatroids(small_greedoids) -> Tuple[SetSystem, ...]:
    return tuple(s for s in small_greedoids if check_axioms(s, AxiomClass.ANTIMATROID).passed)


@pytest.fixture(scope="session", params=[4, pytest.param(5, marks=pytest.mark.slow)], ids=["upto4", "five"])
def interval_greedoids(request) -> Tuple[SetSystem, ...]:
    """Every small interval greedoid on at most four elements, then every one on exactly five"""
    if request.param == 4:
        return small_interval_greedoids(4)
    return tuple(s for s in small_interval_greedoids(5) if s.ground.size == 5)
