from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union
from enum import Enum

from pydantic import BaseModel, Field, field_validator, model_validator


class AxiomClass(str, Enum):
    ACCESSIBLE = "accessible"
    GREEDOID = "greedoid"
    INTERVAL_GREEDOID = "interval_greedoid"
    MATROID = "matroid"
    ANTIMATROID = "antimatroid"


class AxiomId(str, Enum):
    IG1 = "IG1"
    IG2 = "IG2"
    IG3 = "IG3"
    M1 = "M1"
    LIP = "LIP"
    UIP = "UIP"


class OutputFormat(str, Enum):
    JSON = "json"
    DOT = "dot"
    TEXT = "text"


class Rank2Class(str, Enum):
    ORIENTED_MATROID = "oriented_matroid"
    SPECIAL = "special"


RationalValue = Union[int, Tuple[int, int]]


def to_fraction(value: RationalValue) -> Fraction:
    if isinstance(value, int):
        return Fraction(value)
    numerator, denominator = value
    return Fraction(numerator, denominator)


# ---------------------------------------------------------------- inputs


class SetSystemModel(BaseModel):
    ground: List[str] = Field(..., description="Labels in canonical order")
    feasible: List[List[str]] = Field(default_factory=list, description="Feasible sets as label lists")


class OIGBundle(BaseModel):
    system: SetSystemModel
    covectors: List[str] = Field(default_factory=list, description="Sign strings over 0 + - 1")


class _RationalRows(BaseModel):
    d: int = Field(..., ge=0, description="Ambient dimension")

    @staticmethod
    def _check_rows(rows: List[List[RationalValue]], d: int, what: str):
        for index, row in enumerate(rows):
            if len(row) != d:
                raise ValueError(f"{what} {index} has {len(row)} coordinates, expected {d}")
            for value in row:
                if not isinstance(value, int) and value[1] == 0:
                    raise ValueError(f"{what} {index} has a zero denominator")


class ArrangementModel(_RationalRows):
    forms: List[List[RationalValue]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_dimensions(self):
        self._check_rows(self.forms, self.d, "form")
        return self

    def fractions(self) -> List[List[Fraction]]:
        return [[to_fraction(v) for v in row] for row in self.forms]


class PointSetModel(_RationalRows):
    points: List[List[RationalValue]] = Field(default_factory=list)
    labels: Optional[List[str]] = None

    @model_validator(mode="after")
    def check_dimensions(self):
        self._check_rows(self.points, self.d, "point")
        if self.labels is not None and len(self.labels) != len(self.points):
            raise ValueError("labels and points differ in length")
        return self

    def fractions(self) -> List[List[Fraction]]:
        return [[to_fraction(v) for v in row] for row in self.points]


class VectorConfigModel(_RationalRows):
    vectors: List[List[RationalValue]] = Field(default_factory=list)
    labels: Optional[List[str]] = None

    @model_validator(mode="after")
    def check_dimensions(self):
        self._check_rows(self.vectors, self.d, "vector")
        if self.labels is not None and len(self.labels) != len(self.vectors):
            raise ValueError("labels and vectors differ in length")
        return self

    def fractions(self) -> List[List[Fraction]]:
        return [[to_fraction(v) for v in row] for row in self.vectors]


# ---------------------------------------------------------------- reports


class AxiomViolationModel(BaseModel):
    axiom: AxiomId
    X: Optional[List[str]] = None
    Y: Optional[List[str]] = None
    Z: Optional[List[str]] = None
    element: Optional[str] = None
    note: Optional[str] = None


class AxiomReportModel(BaseModel):
    class_checked: AxiomClass
    passed: bool
    violations: List[AxiomViolationModel] = []


class FlatModel(BaseModel):
    id: int
    members: List[List[str]]
    xi: List[str]
    gamma: List[str]
    corank: int


class LatticeModel(BaseModel):
    flats: List[FlatModel]
    covers: List[Tuple[int, int]] = Field(default_factory=list, description="(lower, upper) flat id pairs")
    top: int
    bottom: int
    rank: int


class CovectorModel(BaseModel):
    signs: str
    support_xi: List[str]


class OG4WitnessModel(BaseModel):
    a: str
    b: str
    element: str


class OrientationReportModel(BaseModel):
    passed: bool
    non_covectors: List[str] = []
    og1_missing_flats: List[List[str]] = Field(default_factory=list, description="xi of flats with no covector")
    og2_missing_negations: List[str] = []
    og3_missing_products: List[Tuple[str, str]] = []
    og4_failures: List[OG4WitnessModel] = []


class RestrictedBundle(BaseModel):
    system: SetSystemModel
    covectors: List[str]
    hypothesis_holds: bool


class ToposModel(BaseModel):
    base: str
    topes: List[str]
    adjacency: List[Tuple[str, str]]
    poset_covers: List[Tuple[str, str]]


class RcoNodeModel(BaseModel):
    top: str
    coatoms: List[str]
    children: List["RcoNodeModel"] = []


class RcoReportModel(BaseModel):
    base: str
    passed: bool
    violation: Optional[str] = None
    ordering: RcoNodeModel


class SimplicialComplexModel(BaseModel):
    vertices: List[str] = Field(..., description="Vertices in linear-extension order")
    facets: List[List[str]] = Field(..., description="Maximal faces, each listed bottom-up")
    f_vector: List[int]


class HomologyReportModel(BaseModel):
    f_vector: List[int]
    euler: int
    reduced_betti: List[int]
    torsion: Dict[str, List[int]] = {}


class SphereReportModel(BaseModel):
    rank: int
    thin: bool
    eulerian: bool
    cell_counts: List[int]
    homology: HomologyReportModel
    sphere_evidence: bool
    rco_verified: bool


class FlagCountModel(BaseModel):
    chain: List[int]
    observed: int
    predicted: int

    @field_validator("chain")
    @classmethod
    def non_empty(cls, chain: List[int]) -> List[int]:
        if not chain:
            raise ValueError("a flag chain needs at least the bottom flat")
        return chain


class FlagTableModel(BaseModel):
    rows: List[FlagCountModel]
    all_agree: bool


RcoNodeModel.model_rebuild()
