"""
Covectors of an interval greedoid

A covector is a sign string over the alphabet 0 + - 1, one symbol per
ground element in canonical order. On its support flat A it is 0 on xi(A),
+ or - on Gamma(A) and 1 everywhere else. Symbols are ordered as a diamond:
0 below + and -, both below 1.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Dict, Iterable, Mapping, Tuple, Union

from ..core.config import settings
from ..core.errors import CapExceededError, ConsistencyError, InputError
from ..core.utils import bits, mask_of, normalize_sign_string, popcount
from ..greedoids.flats import FlatLattice, flat_lattice
from ..greedoids.setsys import SetSystem
from ..models.schemas import CovectorModel

logger = logging.getLogger(__name__)


class Sign(str, Enum):
    ZERO = "0"
    PLUS = "+"
    MINUS = "-"
    ONE = "1"


_NEGATE = str.maketrans("+-", "-+")


def sign_leq(a: str, b: str) -> bool:
    """Diamond order on single sign symbols"""
    return a == b or a == "0" or b == "1"


@dataclass(frozen=True)
class Covector:
    signs: str
    support: int

    def __str__(self) -> str:
        return self.signs

    def __len__(self) -> int:
        return len(self.signs)

    @property
    def zero_set(self) -> int:
        return mask_of(i for i, s in enumerate(self.signs) if s == "0")

    @property
    def sign_set(self) -> int:
        return mask_of(i for i, s in enumerate(self.signs) if s in "+-")


@dataclass(frozen=True, init=False)
class SignedFlat:
    flat: int
    assignment: Tuple[Tuple[int, str], ...]

    def __init__(self, flat: int, assignment: Mapping[int, Union[str, Sign]]):
        object.__setattr__(self, "flat", flat)
        object.__setattr__(
            self, "assignment",
            tuple(sorted((int(e), Sign(s).value) for e, s in assignment.items())),
        )


SignsLike = Union[str, Covector]


def _signs(value: SignsLike) -> str:
    return value.signs if isinstance(value, Covector) else value


def _same_length(a: str, b: str):
    if len(a) != len(b):
        raise InputError(f"Ground-set mismatch: sign strings of length {len(a)} and {len(b)}")


def star(a: SignsLike, b: SignsLike) -> str:
    """Componentwise: b where b is strictly above a, otherwise a"""
    a, b = _signs(a), _signs(b)
    _same_length(a, b)
    return "".join(y if (x != y and sign_leq(x, y)) else x for x, y in zip(a, b))


def negate_signs(a: SignsLike) -> str:
    return _signs(a).translate(_NEGATE)


def signs_leq(a: SignsLike, b: SignsLike) -> bool:
    a, b = _signs(a), _signs(b)
    _same_length(a, b)
    return all(sign_leq(x, y) for x, y in zip(a, b))


def separation_set(a: SignsLike, b: SignsLike) -> int:
    """Positions where a and b carry opposite signs"""
    a, b = _signs(a), _signs(b)
    _same_length(a, b)
    return mask_of(i for i, (x, y) in enumerate(zip(a, b)) if x in "+-" and y in "+-" and x != y)


class CovectorAlgebra:
    """Covector operations that need the lattice of flats"""

    def __init__(self, lattice: FlatLattice):
        self.lattice = lattice
        self.size = lattice.ground.size
        self._zero_to_flat: Dict[int, int] = {f.xi: f.id for f in lattice.flats}

    # ------------------------------------------------------------ building

    def covector_of(self, signed: SignedFlat) -> Covector:
        flat = self.lattice.flats[signed.flat]
        assigned = dict(signed.assignment)
        if mask_of(assigned) != flat.gamma:
            raise InputError(
                f"Assignment must cover exactly Gamma = {self.lattice.ground.describe(flat.gamma)}"
            )
        out = []
        for e in range(self.size):
            if flat.xi >> e & 1:
                out.append("0")
            elif e in assigned:
                out.append(assigned[e])
            else:
                out.append("1")
        return Covector("".join(out), flat.id)

    def support_of(self, signs: str) -> int:
        """Support flat of a sign string, validating zero and sign positions"""
        if len(signs) != self.size:
            raise InputError(f"Covector {signs!r} has length {len(signs)}, ground set has {self.size}")
        zero = mask_of(i for i, s in enumerate(signs) if s == "0")
        signed = mask_of(i for i, s in enumerate(signs) if s in "+-")
        flat = self._zero_to_flat.get(zero)
        if flat is None:
            raise InputError(f"{signs!r} is not a covector: its zero set is no xi of a flat")
        if self.lattice.gamma(flat) != signed:
            raise InputError(f"{signs!r} is not a covector: its signed positions differ from Gamma of its support")
        if settings.debug_checks and self.lattice.mu(zero) != flat:
            raise ConsistencyError(f"mu of the zero set of {signs!r} is not its support")
        return flat

    def parse(self, text: SignsLike) -> Covector:
        if isinstance(text, Covector):
            text = text.signs
        signs = normalize_sign_string(text)
        return Covector(signs, self.support_of(signs))

    def is_covector(self, text: str) -> bool:
        try:
            self.parse(text)
        except InputError:
            return False
        return True

    # ------------------------------------------------------------ operations

    def circ(self, a: Covector, b: Covector) -> Covector:
        """Covector of the signed-flat product: star on Gamma and xi of the joined support, 1 elsewhere"""
        starred = star(a, b)
        joined = self.lattice.join(a.support, b.support)
        keep = self.lattice.gamma(joined) | self.lattice.xi(joined)
        signs = "".join(s if keep >> i & 1 else "1" for i, s in enumerate(starred))
        result = Covector(signs, joined)
        if settings.debug_checks and self.support_of(signs) != joined:
            raise ConsistencyError(f"product {a} o {b} = {signs} is not a covector of the joined support")
        return result

    def leq(self, a: Covector, b: Covector) -> bool:
        result = signs_leq(a, b)
        if settings.debug_checks:
            shared = self.lattice.gamma(a.support) & self.lattice.gamma(b.support)
            by_flats = self.lattice.leq(a.support, b.support) and all(
                a.signs[e] == b.signs[e] for e in bits(shared)
            )
            by_product = self.circ(a, b) == b
            if not (result == by_flats == by_product):
                raise ConsistencyError(f"order characterizations disagree on {a} <= {b}")
        return result

    def separation_set(self, a: Covector, b: Covector) -> int:
        return separation_set(a, b)

    def negate(self, a: Covector) -> Covector:
        return Covector(negate_signs(a), a.support)

    # ------------------------------------------------------------ enumeration

    def all_covectors(self) -> Tuple[Covector, ...]:
        """Every covector of the greedoid, sorted by sign string"""
        found = []
        for flat in self.lattice.flats:
            width = popcount(flat.gamma)
            if width > settings.covector_gamma_cap:
                raise CapExceededError(
                    f"|Gamma| of flat {self.lattice.describe(flat.id)}", width,
                    settings.covector_gamma_cap, "covector_gamma_cap",
                )
            positions = list(bits(flat.gamma))
            template = ["0" if flat.xi >> e & 1 else "1" for e in range(self.size)]
            for choice in product("+-", repeat=width):
                for e, s in zip(positions, choice):
                    template[e] = s
                found.append(Covector("".join(template), flat.id))
        found.sort(key=lambda c: c.signs)
        logger.debug(f"enumerated {len(found)} covectors over {len(self.lattice)} flats")
        return tuple(found)

    def bottom(self) -> Covector:
        flat = self.lattice.flats[self.lattice.bottom]
        return Covector("".join("0" if flat.xi >> e & 1 else "1" for e in range(self.size)), flat.id)

    def to_model(self, a: Covector) -> CovectorModel:
        return CovectorModel(signs=a.signs, support_xi=self.lattice.ground.labels_of(self.lattice.xi(a.support)))


# ---------------------------------------------------------------- functional surface


def _algebra(source: Union[SetSystem, FlatLattice, CovectorAlgebra]) -> CovectorAlgebra:
    if isinstance(source, CovectorAlgebra):
        return source
    if isinstance(source, SetSystem):
        source = flat_lattice(source)
    return CovectorAlgebra(source)


def covector_of(lattice: FlatLattice, signed: SignedFlat) -> Covector:
    return CovectorAlgebra(lattice).covector_of(signed)


def circ(lattice: FlatLattice, a: Covector, b: Covector) -> Covector:
    return CovectorAlgebra(lattice).circ(a, b)


def negate(a: Covector) -> Covector:
    return Covector(negate_signs(a), a.support)


def leq(a: SignsLike, b: SignsLike) -> bool:
    return signs_leq(a, b)


def all_covectors(source: Union[SetSystem, FlatLattice]) -> Tuple[Covector, ...]:
    return _algebra(source).all_covectors()


def parse_covectors(algebra: CovectorAlgebra, texts: Iterable[str]) -> Tuple[Covector, ...]:
    return tuple(sorted((algebra.parse(t) for t in texts), key=lambda c: c.signs))
