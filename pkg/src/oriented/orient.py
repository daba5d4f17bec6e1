"""
Oriented interval greedoids

An oriented interval greedoid is an interval greedoid together with a set of
covectors closed under negation and the signed-flat product, hitting every
flat as a support and satisfying an elimination axiom. This module validates
such sets, builds the orientation of an antimatroid, and transports oriented
structures through contraction and restriction.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.config import settings
from ..core.errors import ConsistencyError, InputError, PreconditionError
from ..core.progress_tracker import ProgressStatus, progress_tracker
from ..core.utils import bits, compress_mask, expand_mask, normalize_sign_string
from ..greedoids.flats import FlatLattice, flat_lattice
from ..greedoids.setsys import SetSystem, check_axioms, contract, contraction_support, require_class, restrict
from ..models.schemas import (
    AxiomClass,
    OG4WitnessModel,
    OIGBundle,
    OrientationReportModel,
    Rank2Class,
    RestrictedBundle,
)
from .covectors import Covector, CovectorAlgebra, negate_signs, separation_set, signs_leq

logger = logging.getLogger(__name__)


@dataclass
class OrientationReport:
    """Per-axiom witnesses; an empty list means the axiom holds"""
    non_covectors: List[str] = field(default_factory=list)
    og1_missing: List[int] = field(default_factory=list)
    og2_missing: List[str] = field(default_factory=list)
    og3_missing: List[Tuple[str, str]] = field(default_factory=list)
    og4_failures: List[Tuple[str, str, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.non_covectors or self.og1_missing or self.og2_missing
                    or self.og3_missing or self.og4_failures)

    @property
    def passed_og123(self) -> bool:
        return not (self.non_covectors or self.og1_missing or self.og2_missing or self.og3_missing)

    def to_model(self, lattice: FlatLattice) -> OrientationReportModel:
        ground = lattice.ground
        return OrientationReportModel(
            passed=self.passed,
            non_covectors=self.non_covectors,
            og1_missing_flats=[ground.labels_of(lattice.xi(f)) for f in self.og1_missing],
            og2_missing_negations=self.og2_missing,
            og3_missing_products=self.og3_missing,
            og4_failures=[
                OG4WitnessModel(a=a, b=b, element=ground.labels[x]) for a, b, x in self.og4_failures
            ],
        )


@dataclass(frozen=True, eq=False)
class OrientedSystem:
    greedoid: SetSystem
    lattice: FlatLattice
    covectors: Tuple[Covector, ...]
    report: OrientationReport

    @cached_property
    def algebra(self) -> CovectorAlgebra:
        return CovectorAlgebra(self.lattice)

    @cached_property
    def keys(self) -> frozenset:
        return frozenset(c.signs for c in self.covectors)

    @cached_property
    def _by_signs(self) -> Dict[str, Covector]:
        return {c.signs: c for c in self.covectors}

    def __len__(self) -> int:
        return len(self.covectors)

    def __contains__(self, signs) -> bool:
        return getattr(signs, "signs", signs) in self.keys

    def get(self, signs: str) -> Covector:
        try:
            return self._by_signs[signs]
        except KeyError:
            raise InputError(f"{signs!r} is not a covector of this oriented system") from None

    def parse(self, text: str) -> Covector:
        return self.get(self.algebra.parse(text).signs)

    def to_bundle(self) -> OIGBundle:
        return OIGBundle(system=self.greedoid.to_model(), covectors=sorted(self.keys))


@dataclass(frozen=True)
class RestrictedCovectors:
    """Restriction result tagged with whether res agrees with plain restriction"""
    oig: OrientedSystem
    hypothesis_holds: bool

    def to_model(self) -> RestrictedBundle:
        bundle = self.oig.to_bundle()
        return RestrictedBundle(
            system=bundle.system, covectors=bundle.covectors, hypothesis_holds=self.hypothesis_holds,
        )


# ---------------------------------------------------------------- validation


def _stage(name: str, status: ProgressStatus, progress: float, message: str):
    progress_tracker.update(name, "axiom", status, progress, message)


def _og4_requirement(ab: str, ba: str, sep: int) -> Optional[List[Tuple[int, str]]]:
    """Positions and signs an elimination witness must match, or None when none can exist"""
    required = []
    for y, s in enumerate(ab):
        if sep >> y & 1 or s == "1":
            continue
        if ba[y] != s:
            return None
        required.append((y, s))
    return required


def _og4_failures(algebra: CovectorAlgebra, covectors: Sequence[Covector], exhaustive: bool) -> List[Tuple[str, str, int]]:
    zero_at: Dict[int, List[str]] = {e: [] for e in range(algebra.size)}
    for c in covectors:
        for e, s in enumerate(c.signs):
            if s == "0":
                zero_at[e].append(c.signs)

    failures = []
    for a, b in combinations(covectors, 2):
        sep = separation_set(a, b)
        if not sep:
            continue
        ab = algebra.circ(a, b).signs
        ba = algebra.circ(b, a).signs
        required = _og4_requirement(ab, ba, sep)
        for x in bits(sep):
            if ab[x] == "1":
                continue
            found = required is not None and any(
                all(g[y] == s for y, s in required) for g in zero_at[x]
            )
            if not found:
                failures.append((a.signs, b.signs, x))
                if not exhaustive:
                    return failures
    return failures


def check_oig_axioms(
    lattice: FlatLattice,
    covectors: Sequence[Covector],
    exhaustive: bool = False,
) -> OrientationReport:
    """Run OG1 to OG4 on parsed covectors; witnesses are collected, nothing is raised"""
    algebra = CovectorAlgebra(lattice)
    keys = {c.signs for c in covectors}
    report = OrientationReport()

    _stage("OG1", ProgressStatus.IN_PROGRESS, 0.0, "support surjectivity")
    supports = {c.support for c in covectors}
    report.og1_missing = [f.id for f in lattice.flats if f.id not in supports]
    _stage("OG1", ProgressStatus.FAILED if report.og1_missing else ProgressStatus.COMPLETED, 25.0,
           f"{len(supports)} of {len(lattice)} flats are supports")

    _stage("OG2", ProgressStatus.IN_PROGRESS, 25.0, "negation closure")
    report.og2_missing = [c.signs for c in covectors if negate_signs(c) not in keys]
    _stage("OG2", ProgressStatus.FAILED if report.og2_missing else ProgressStatus.COMPLETED, 50.0,
           f"{len(report.og2_missing)} covectors lack a negation")

    _stage("OG3", ProgressStatus.IN_PROGRESS, 50.0, "product closure")
    missing = []
    for a in covectors:
        for b in covectors:
            product = algebra.circ(a, b).signs
            if product not in keys:
                missing.append((a.signs, b.signs))
                if not exhaustive:
                    break
        if missing and not exhaustive:
            break
    report.og3_missing = missing
    _stage("OG3", ProgressStatus.FAILED if missing else ProgressStatus.COMPLETED, 75.0,
           f"{len(missing)} products outside the set")

    _stage("OG4", ProgressStatus.IN_PROGRESS, 75.0, "elimination")
    report.og4_failures = _og4_failures(algebra, covectors, exhaustive)
    _stage("OG4", ProgressStatus.FAILED if report.og4_failures else ProgressStatus.COMPLETED, 100.0,
           f"{len(report.og4_failures)} eliminations without witness")
    return report


def validate_oig(
    greedoid: SetSystem,
    covectors: Iterable[str],
    exhaustive: bool = False,
    lattice: Optional[FlatLattice] = None,
) -> OrientedSystem:
    """
    Validate a covector set against OG1 to OG4

    Strings that are not covectors of the greedoid are reported in
    ``report.non_covectors`` and left out of the checked set.

    Args:
        greedoid: An interval greedoid
        covectors: Sign strings over 0 + - 1
        exhaustive: Collect every witness instead of the first per axiom
        lattice: Precomputed lattice of flats of ``greedoid``

    Raises:
        AxiomError: If greedoid is not an interval greedoid
        InputError: If a sign string has a symbol outside the alphabet
    """
    lattice = lattice or flat_lattice(greedoid)
    algebra = CovectorAlgebra(lattice)
    parsed: Dict[str, Covector] = {}
    rejected = []
    for text in covectors:
        signs = normalize_sign_string(text)
        try:
            parsed[signs] = Covector(signs, algebra.support_of(signs))
        except InputError:
            rejected.append(signs)

    ordered = tuple(sorted(parsed.values(), key=lambda c: c.signs))
    report = check_oig_axioms(lattice, ordered, exhaustive)
    report.non_covectors = sorted(set(rejected))
    logger.debug(f"validated {len(ordered)} covectors over {len(lattice)} flats: passed={report.passed}")
    return OrientedSystem(greedoid, lattice, ordered, report)


def og4_witnesses(oig: OrientedSystem, a: Covector, b: Covector, x: int) -> List[str]:
    """Every covector that eliminates x between a and b, sorted"""
    sep = separation_set(a, b)
    if not sep >> x & 1:
        raise PreconditionError(f"element {oig.lattice.ground.labels[x]} does not separate {a} and {b}")
    ab = oig.algebra.circ(a, b).signs
    ba = oig.algebra.circ(b, a).signs
    required = _og4_requirement(ab, ba, sep)
    if required is None:
        return []
    return sorted(
        c.signs for c in oig.covectors
        if c.signs[x] == "0" and all(c.signs[y] == s for y, s in required)
    )


def _require_valid(oig: OrientedSystem, what: str) -> OrientedSystem:
    if not oig.report.passed:
        raise ConsistencyError(f"{what} is not an oriented interval greedoid: {oig.report.to_model(oig.lattice)}")
    return oig


def oig_from_antimatroid(sys: SetSystem) -> OrientedSystem:
    """All covectors of an antimatroid; they always form an oriented interval greedoid"""
    require_class(sys, AxiomClass.ANTIMATROID)
    lattice = flat_lattice(sys)
    covectors = CovectorAlgebra(lattice).all_covectors()
    return _require_valid(
        validate_oig(sys, [c.signs for c in covectors], lattice=lattice), "antimatroid orientation"
    )


# ---------------------------------------------------------------- contraction


@dataclass(frozen=True)
class _ContractionMap:
    system: SetSystem
    lattice: FlatLattice
    below: Tuple[Covector, ...]
    images: Dict[str, str]


def _contraction_map(oig: OrientedSystem, x: int) -> _ContractionMap:
    sys, lattice = oig.greedoid, oig.lattice
    fx = lattice.flat_of(x)
    support = contraction_support(sys, x)
    csys = contract(sys, x)
    clat = flat_lattice(csys)

    to_contracted: Dict[int, int] = {}
    for f in clat.flats:
        original = lattice.flat_of(x | expand_mask(f.members[0], support))
        to_contracted[original] = f.id
    if len(to_contracted) != len(clat):
        raise ConsistencyError("flats of the contraction do not embed into the flats of the greedoid")

    below = tuple(c for c in oig.covectors if lattice.leq(c.support, fx))
    images = {}
    for c in below:
        if c.support not in to_contracted:
            raise ConsistencyError(f"support of {c} has no counterpart in the contraction")
        cf = to_contracted[c.support]
        xi_c, gamma_c = clat.xi(cf), clat.gamma(cf)
        signs = []
        for j, e in enumerate(bits(support)):
            if xi_c >> j & 1:
                signs.append("0")
            elif gamma_c >> j & 1:
                signs.append(c.signs[e])
            else:
                signs.append("1")
        images[c.signs] = "".join(signs)
    return _ContractionMap(csys, clat, below, images)


def check_contraction_semigroup(oig: OrientedSystem, x: int) -> bool:
    """Whether contraction is a product-preserving bijection from the covectors supported below [X]"""
    cmap = _contraction_map(oig, x)
    if len(set(cmap.images.values())) != len(cmap.below):
        return False
    contracted = CovectorAlgebra(cmap.lattice)
    for a in cmap.below:
        for b in cmap.below:
            lhs = cmap.images.get(oig.algebra.circ(a, b).signs)
            rhs = contracted.circ(contracted.parse(cmap.images[a.signs]), contracted.parse(cmap.images[b.signs]))
            if lhs != rhs.signs:
                return False
    return True


def contract_oig(oig: OrientedSystem, x: int) -> OrientedSystem:
    """
    Oriented interval greedoid over F/X

    Keeps the covectors whose support lies below [X] and rewrites each on
    the contracted ground set: 0 on xi, the original sign on Gamma, 1 elsewhere.

    Raises:
        NotFeasibleError: If X is not feasible
        ConsistencyError: If the image fails validation or is not a bijection
    """
    cmap = _contraction_map(oig, x)
    if len(set(cmap.images.values())) != len(cmap.below):
        raise ConsistencyError(f"contraction by {oig.lattice.ground.describe(x)} identifies covectors")
    result = validate_oig(cmap.system, cmap.images.values(), lattice=cmap.lattice)
    if oig.report.passed:
        _require_valid(result, f"contraction by {oig.lattice.ground.describe(x)}")
        if settings.debug_checks and not check_contraction_semigroup(oig, x):
            raise ConsistencyError("contraction does not preserve products")
    return result


# ---------------------------------------------------------------- restriction


def _restriction_map(oig: OrientedSystem, w: int) -> Tuple[SetSystem, FlatLattice, Dict[str, str], bool]:
    lattice = oig.lattice
    rsys = restrict(oig.greedoid, w)
    rlat = flat_lattice(rsys)
    images = {}
    agrees = True
    for c in oig.covectors:
        meet_w = compress_mask(w & lattice.xi(c.support), w)
        ra = rlat.mu(meet_w)
        xi_r, gamma_r = rlat.xi(ra), rlat.gamma(ra)
        signs = []
        for j, e in enumerate(bits(w)):
            if xi_r >> j & 1:
                signs.append("0")
            elif gamma_r >> j & 1:
                signs.append(c.signs[e])
            else:
                signs.append("1")
        image = "".join(signs)
        images[c.signs] = image
        if image != "".join(c.signs[e] for e in bits(w)):
            agrees = False
    return rsys, rlat, images, agrees


def restrict_oig(oig: OrientedSystem, w: int) -> RestrictedCovectors:
    """
    Restricted covectors over F|W

    ``hypothesis_holds`` is true when every restricted covector is the plain
    restriction of its source. Then the result is a full oriented interval
    greedoid; otherwise only OG1 to OG3 are guaranteed.

    Raises:
        InputError: If W is not inside the ground set
    """
    oig.lattice.ground.check_mask(w)
    rsys, rlat, images, agrees = _restriction_map(oig, w)
    result = validate_oig(rsys, set(images.values()), lattice=rlat)
    if oig.report.passed:
        if agrees:
            _require_valid(result, f"restriction to {oig.lattice.ground.describe(w)}")
        elif not result.report.passed_og123:
            raise ConsistencyError(f"restriction to {oig.lattice.ground.describe(w)} breaks OG1 to OG3")
    logger.debug(f"restricted to {oig.lattice.ground.describe(w)}: {len(result)} covectors, hypothesis={agrees}")
    return RestrictedCovectors(result, agrees)


def check_restriction_semigroup(oig: OrientedSystem, x: int, anchor: Optional[Covector] = None) -> bool:
    """
    Whether restriction to xi([X]) maps the covectors above ``anchor``
    bijectively and product-preservingly onto the restricted covectors

    ``anchor`` must have support [X]; the least such covector is used by default.
    """
    lattice = oig.lattice
    fx = lattice.flat_of(x)
    if anchor is None:
        anchor = next(c for c in oig.covectors if c.support == fx)
    elif anchor.support != fx:
        raise PreconditionError(f"{anchor} does not have support {lattice.describe(fx)}")

    w = lattice.xi(fx)
    rsys, rlat, images, _ = _restriction_map(oig, w)
    above = [c for c in oig.covectors if signs_leq(anchor, c)]
    image_set = {images[c.signs] for c in above}
    if len(image_set) != len(above) or image_set != set(images.values()):
        return False

    restricted = CovectorAlgebra(rlat)
    for a in above:
        for b in above:
            lhs = images.get(oig.algebra.circ(a, b).signs)
            rhs = restricted.circ(restricted.parse(images[a.signs]), restricted.parse(images[b.signs]))
            if lhs != rhs.signs:
                return False
    return True


def restrict_to_xi(oig: OrientedSystem, x: int) -> OrientedSystem:
    """
    Oriented interval greedoid over xi([X])

    Raises:
        NotFeasibleError: If X is not feasible
        ConsistencyError: If the restriction is not an oriented interval greedoid
            or the semigroup isomorphism check fails
    """
    fx = oig.lattice.flat_of(x)
    restricted = restrict_oig(oig, oig.lattice.xi(fx)).oig
    if oig.report.passed:
        _require_valid(restricted, f"restriction to xi({oig.lattice.describe(fx)})")
        if not check_restriction_semigroup(oig, x):
            raise ConsistencyError(f"restriction to xi({oig.lattice.describe(fx)}) is not a semigroup isomorphism")
    return restricted


def underlying_oriented_matroid(oig: OrientedSystem) -> OrientedSystem:
    """Restriction to the continuations of the empty set; always an oriented matroid"""
    lattice = oig.lattice
    w = lattice.gamma(lattice.top)
    restricted = restrict_oig(oig, w)
    om = restricted.oig
    if oig.report.passed:
        _require_valid(om, "underlying oriented matroid")
        if not check_axioms(om.greedoid, AxiomClass.MATROID).passed:
            raise ConsistencyError("underlying greedoid is not a matroid")
        if any("1" in c.signs for c in om.covectors):
            raise ConsistencyError("underlying oriented matroid has a covector with a 1 entry")
    return om


# ---------------------------------------------------------------- structure


def bottom(oig: OrientedSystem) -> Covector:
    found = [c for c in oig.covectors if c.support == oig.lattice.bottom]
    if len(found) != 1:
        raise ConsistencyError(f"expected one covector with support 0, found {len(found)}")
    return found[0]


def rank(oig: OrientedSystem) -> int:
    return oig.lattice.rank


def topes(oig: OrientedSystem) -> List[Covector]:
    return [c for c in oig.covectors if c.support == oig.lattice.top]


def subtopes(oig: OrientedSystem) -> List[Covector]:
    """Covectors covered by a tope"""
    lattice = oig.lattice
    coatoms = set(lattice.coatoms())
    maximal = topes(oig)
    return [c for c in oig.covectors if c.support in coatoms and any(signs_leq(c, t) for t in maximal)]


def drop_witness(oig: OrientedSystem, a: Covector, b: Covector) -> Covector:
    """
    A covector covered by b that agrees with b off S(a, b) wherever b is not 1

    Picks the least sign string among all candidates.

    Raises:
        PreconditionError: If supp a is not below supp b, or a <= b
        ConsistencyError: If no candidate exists
    """
    lattice = oig.lattice
    if not lattice.leq(a.support, b.support):
        raise PreconditionError(f"support of {a} is not below support of {b}")
    if signs_leq(a, b):
        raise PreconditionError(f"{a} <= {b}, nothing to drop")

    sep = separation_set(a, b)
    fixed = [(e, s) for e, s in enumerate(b.signs) if not sep >> e & 1 and s != "1"]
    poset = lattice.as_poset()
    candidates = sorted(
        c.signs for c in oig.covectors
        if c.signs != b.signs
        and poset.is_cover(c.support, b.support)
        and signs_leq(c, b)
        and all(c.signs[e] == s for e, s in fixed)
    )
    if not candidates:
        raise ConsistencyError(f"no covector drops from {b} away from {a}")
    return oig.get(candidates[0])


def classify_rank1(oig: OrientedSystem) -> Tuple[Covector, Covector, Covector]:
    """(bottom, beta, -beta) of a rank-1 oriented interval greedoid"""
    if rank(oig) != 1:
        raise PreconditionError(f"rank is {rank(oig)}, not 1")
    if len(oig) != 3:
        raise ConsistencyError(f"rank-1 oriented greedoid has {len(oig)} covectors, not 3")
    low = bottom(oig)
    beta, minus = sorted((c for c in oig.covectors if c != low), key=lambda c: c.signs)
    if negate_signs(beta) != minus.signs:
        raise ConsistencyError(f"{beta} and {minus} are not negatives")
    return low, beta, minus


def classify_rank2(oig: OrientedSystem) -> Rank2Class:
    """Rank-2 oriented interval greedoids are oriented matroids or one five-element shape"""
    if rank(oig) != 2:
        raise PreconditionError(f"rank is {rank(oig)}, not 2")
    lattice = oig.lattice
    coatoms = lattice.coatoms()

    if len(coatoms) >= 2:
        om = underlying_oriented_matroid(oig)
        w = lattice.gamma(lattice.top)
        plain = {c.signs: "".join(c.signs[e] for e in bits(w)) for c in oig.covectors}
        if len(set(plain.values())) != len(oig) or set(plain.values()) != om.keys:
            raise ConsistencyError("rank-2 covectors do not restrict bijectively onto their oriented matroid")
        return Rank2Class.ORIENTED_MATROID

    if len(oig) != 5:
        raise ConsistencyError(f"rank-2 oriented greedoid with one coatom has {len(oig)} covectors, not 5")
    middle = [c for c in oig.covectors if c.support == coatoms[0]]
    maximal = topes(oig)
    if len(middle) != 2 or len(maximal) != 2:
        raise ConsistencyError("one-coatom rank-2 shape must have two covectors per middle rank")
    if not all(signs_leq(g, t) for g in middle for t in maximal):
        raise ConsistencyError("middle covectors are not below both topes")
    return Rank2Class.SPECIAL


# ---------------------------------------------------------------- oriented matroids


@dataclass
class OMReport:
    has_zero: bool = True
    om2_missing: List[str] = field(default_factory=list)
    om3_missing: List[Tuple[str, str]] = field(default_factory=list)
    om4_failures: List[Tuple[str, str, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.has_zero and not (self.om2_missing or self.om3_missing or self.om4_failures)


def compose_signs(a: str, b: str) -> str:
    """Oriented-matroid composition: a where a is nonzero, otherwise b"""
    return "".join(x if x != "0" else y for x, y in zip(a, b))


def validate_om(n: int, sign_vectors: Iterable[str], exhaustive: bool = False) -> OMReport:
    """
    Covector axioms of an oriented matroid on n elements

    Raises:
        InputError: On a vector of the wrong length or with a symbol outside 0 + -
    """
    vectors = set()
    for v in sign_vectors:
        if len(v) != n or any(s not in "0+-" for s in v):
            raise InputError(f"{v!r} is not a sign vector over 0 + - of length {n}")
        vectors.add(v)
    ordered = sorted(vectors)

    report = OMReport(has_zero="0" * n in vectors)
    report.om2_missing = [v for v in ordered if negate_signs(v) not in vectors]

    for a in ordered:
        for b in ordered:
            if compose_signs(a, b) not in vectors:
                report.om3_missing.append((a, b))
                if not exhaustive:
                    break
        if report.om3_missing and not exhaustive:
            break

    for a, b in combinations(ordered, 2):
        sep = separation_set(a, b)
        ab = compose_signs(a, b)
        required = [(f, s) for f, s in enumerate(ab) if not sep >> f & 1]
        for e in bits(sep):
            if not any(z[e] == "0" and all(z[f] == s for f, s in required) for z in ordered):
                report.om4_failures.append((a, b, e))
                if not exhaustive:
                    break
        if report.om4_failures and not exhaustive:
            break

    logger.debug(f"oriented matroid check on {len(ordered)} vectors: passed={report.passed}")
    return report


def load_bundle(bundle: OIGBundle, exhaustive: bool = False) -> OrientedSystem:
    return validate_oig(SetSystem.from_model(bundle.system), bundle.covectors, exhaustive=exhaustive)


__all__ = [
    "OrientationReport", "OrientedSystem", "RestrictedCovectors", "OMReport",
    "check_oig_axioms", "validate_oig", "og4_witnesses", "oig_from_antimatroid",
    "contract_oig", "check_contraction_semigroup", "restrict_oig", "restrict_to_xi",
    "check_restriction_semigroup", "underlying_oriented_matroid", "bottom", "rank",
    "topes", "subtopes", "drop_witness", "classify_rank1", "classify_rank2",
    "compose_signs", "validate_om", "load_bundle",
]
