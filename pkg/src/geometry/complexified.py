"""
Complexified arrangements

C^d is identified with R^2d = (x, y) for z = x + iy. A real subspace is
stored as the reduced row echelon basis of its annihilator, so
intersection is stacking rows and containment is a rank comparison. For
each form l_e the ground set holds two subspaces:

    H_e    = {l(x) = 0, l(y) = 0}    label "H{e}"
    H_e^R  = {l(y) = 0}              label "H{e}^R"

in the interleaved order H0, H0^R, H1, H1^R, ...
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from ..core.errors import ConsistencyError, InputError
from ..core.utils import bits, mask_of
from ..greedoids.flats import FlatLattice, flat_lattice, ig_from_semimodular_lattice
from ..greedoids.setsys import SetSystem
from ..oriented.orient import OrientedSystem, validate_oig
from ..topology.poset import FinitePoset
from .arrangements import RationalArrangement, faces_of, from_sympy, rank_of_rows, real_covectors, to_sympy

logger = logging.getLogger(__name__)

Subspace = Tuple[Tuple[Fraction, ...], ...]
COMPLEX_PAIRS = frozenset({"00", "+0", "-0", "1+", "1-"})


def _reduce(rows: List[Tuple[Fraction, ...]], width: int) -> Subspace:
    if not rows:
        return ()
    reduced, pivots = to_sympy(rows, width).rref()
    return tuple(tuple(from_sympy(v) for v in reduced.row(i)) for i in range(len(pivots)))


class SubspaceAlgebra:
    """Intersections and inclusions of annihilator-encoded subspaces of R^width"""

    def __init__(self, width: int):
        self.width = width
        self._meets: Dict[Tuple[Subspace, Subspace], Subspace] = {}

    def meet(self, u: Subspace, v: Subspace) -> Subspace:
        key = (u, v) if u <= v else (v, u)
        if key not in self._meets:
            self._meets[key] = _reduce(list(u) + list(v), self.width)
        return self._meets[key]

    def contains(self, big: Subspace, small: Subspace) -> bool:
        """small is a subspace of big"""
        return rank_of_rows(list(small) + list(big), self.width) == len(small)

    def dimension(self, u: Subspace) -> int:
        return self.width - len(u)


@dataclass(frozen=True, eq=False)
class ComplexifiedArrangement:
    arrangement: RationalArrangement
    generators: Tuple[Subspace, ...]
    poset: FinitePoset
    system: SetSystem
    lattice: FlatLattice
    subspaces: Dict[int, Subspace]

    def subspace_of(self, flat: int) -> Subspace:
        return self.subspaces[flat]

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.system.ground.labels


def complex_labels(n: int) -> Tuple[str, ...]:
    return tuple(label for e in range(n) for label in (f"H{e}", f"H{e}^R"))


def _generators(arr: RationalArrangement, width: int) -> Tuple[Subspace, ...]:
    zero = (Fraction(0),) * arr.d
    out = []
    for form in arr.forms:
        out.append(_reduce([form + zero, zero + form], width))
        out.append(_reduce([zero + form], width))
    return tuple(out)


def _check_formulas(complexified: ComplexifiedArrangement, algebra: SubspaceAlgebra):
    """xi(X) is every generator containing the meet of X; Gamma(X) by the two-case rule"""
    gens = complexified.generators
    lattice = complexified.lattice
    sys = complexified.system
    for x in sys.members:
        meet = ()
        for h in bits(x):
            meet = algebra.meet(meet, gens[h])
        xi = mask_of(h for h in range(len(gens)) if algebra.contains(gens[h], meet))
        gamma = 0
        for e in range(len(gens) // 2):
            real, imaginary = 2 * e, 2 * e + 1
            if not algebra.contains(gens[imaginary], meet):
                gamma |= 1 << imaginary
            elif not algebra.contains(gens[real], meet):
                gamma |= 1 << real
        flat = lattice.flat_of(x)
        if xi != lattice.xi(flat) or gamma != lattice.gamma(flat):
            raise ConsistencyError(f"closed forms for xi and Gamma disagree at {sys.ground.describe(x)}")


def complexified_ig(arr: RationalArrangement) -> ComplexifiedArrangement:
    """
    Interval greedoid of the intersection lattice of a complexified arrangement

    Raises:
        InputError: If the arrangement is not essential
        ConsistencyError: If the meet-irreducibles are not the generators
    """
    if not arr.is_essential():
        raise InputError("Arrangement is not essential: the forms have a common nonzero kernel")
    width = 2 * arr.d
    algebra = SubspaceAlgebra(width)
    generators = _generators(arr, width)
    top: Subspace = ()

    found = set(generators) | {top}
    frontier = list(dict.fromkeys(generators))
    while frontier:
        next_frontier = []
        for u in frontier:
            for g in generators:
                m = algebra.meet(u, g)
                if m not in found:
                    found.add(m)
                    next_frontier.append(m)
        frontier = next_frontier

    rest = sorted(found - set(generators) - {top}, key=lambda u: (-algebra.dimension(u), u))
    elements = list(dict.fromkeys(generators)) + [top] + rest
    poset = FinitePoset.from_relation(elements, lambda u, v: algebra.contains(v, u))

    irreducible = [u for u in poset.elements if u != poset.top and len(poset.upper_covers(u)) == 1]
    if irreducible != list(generators):
        raise ConsistencyError("meet-irreducible subspaces are not exactly the hyperplanes and their real traces")

    labels = dict(zip(generators, complex_labels(arr.n)))
    system, iso = ig_from_semimodular_lattice(poset, label=lambda u: labels[u])
    lattice = flat_lattice(system)
    complexified = ComplexifiedArrangement(arr, generators, poset, system, lattice, iso)
    _check_formulas(complexified, algebra)
    logger.debug(f"complexified arrangement of {arr.n} forms: {len(poset)} subspaces, {len(system.feasible)} feasible sets")
    return complexified


def complex_covectors(arr: RationalArrangement) -> Tuple[str, ...]:
    """
    Sign strings of alpha_z over all z in C^d, enumerated from real faces

    For z = x + iy, the imaginary parts give a face v of the arrangement and
    the real parts, on the forms vanishing at y, give a face u of that
    subarrangement; x and y vary independently.
    """
    out = set()
    for v in real_covectors(arr):
        zeros = [e for e, s in enumerate(v) if s == "0"]
        for u in faces_of(arr, zeros):
            real = dict(zip(zeros, u))
            signs = []
            for e, s in enumerate(v):
                signs.append("1" + s if s != "0" else real[e] + "0")
            out.add("".join(signs))
    return tuple(sorted(out))


def complexified_oig(arr: RationalArrangement) -> OrientedSystem:
    """
    Oriented interval greedoid of a complexified arrangement

    Raises:
        InputError: If the arrangement is not essential
        ConsistencyError: If the covectors fail validation
    """
    complexified = complexified_ig(arr)
    covectors = complex_covectors(arr)
    for c in covectors:
        pairs = {c[k:k + 2] for k in range(0, len(c), 2)}
        if not pairs <= COMPLEX_PAIRS:
            raise ConsistencyError(f"covector {c} has a coordinate pair outside {sorted(COMPLEX_PAIRS)}")

    oig = validate_oig(complexified.system, covectors, lattice=complexified.lattice)
    if not oig.report.passed:
        raise ConsistencyError(f"complexified covectors fail validation: {oig.report.to_model(oig.lattice)}")
    logger.debug(f"complexified oriented greedoid: {len(oig)} covectors")
    return oig
