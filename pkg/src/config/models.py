import json
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings

HARD_MAX_ATOMS = 10
DEFAULT_MAX_ATOMS = 6
DEFAULT_MAX_POINTS = 5
DEFAULT_EXCEPTION_BOUND = 6
DEFAULT_MAX_VALUATIONS = 1 << 16
DEFAULT_MAX_CLOSURE = 1024

STRUCTURES_FILE = Path(__file__).with_name("structures.json")

KindName = Literal["weak", "white", "black", "strong"]
CongruenceKindName = Literal["white", "black", "strong"]
ColourName = Literal["white", "black", "bi"]


class AlgebraDocument(BaseModel):
    atoms: int = Field(..., ge=0, description="Number of atoms of the powerset algebra")


class SubordinationDocument(BaseModel):
    algebra: AlgebraDocument = Field(..., description="Underlying powerset algebra")
    prec: List[Tuple[List[int], List[int]]] = Field(
        default_factory=list, description="Pairs (a, b) with a ≺ b, elements as atom-index arrays"
    )


class FrameDocument(BaseModel):
    points: List[str] = Field(..., description="Point labels, in order")
    edges: List[Tuple[str, str]] = Field(default_factory=list, description="Accessibility pairs")

    @model_validator(mode="after")
    def check_edges(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate point labels")
        known = set(self.points)
        for x, y in self.edges:
            if x not in known or y not in known:
                raise ValueError(f"edge ({x}, {y}) mentions an unknown point")
        return self


class MorphismDocument(BaseModel):
    source: SubordinationDocument
    target: SubordinationDocument
    images: List[List[int]] = Field(
        ..., description="Image of every source element, listed in element order"
    )
    kind: KindName = "weak"


class CongruenceDocument(BaseModel):
    structure: SubordinationDocument
    partition: List[List[List[int]]] = Field(..., description="Blocks of elements")
    kind: CongruenceKindName = "white"


class SubalgebraDocument(BaseModel):
    structure: SubordinationDocument
    members: List[List[int]] = Field(..., description="Elements of the candidate subalgebra")
    kind: CongruenceKindName = "white"


class OmegaSetDocument(BaseModel):
    kind: Literal["finite", "cofinite", "periodic"] = "finite"
    exceptions: List[int] = Field(default_factory=list, description="Finite part or removed part of the trace")
    omega: bool = Field(default=False, description="Membership of the limit point")
    offset: int = Field(default=0, ge=0, description="Start of the periodic tail (periodic kind)")
    period: int = Field(default=1, ge=1, description="Period of the tail (periodic kind)")
    residues: List[int] = Field(default_factory=list, description="Residues mod period present in the tail")

    @field_validator("exceptions", "residues")
    @classmethod
    def validate_naturals(cls, v):
        if any(n < 0 for n in v):
            raise ValueError("naturals only")
        return sorted(set(v))


class RelationSpecDocument(BaseModel):
    base_pairs: List[Tuple[int, int]] = Field(default_factory=list)
    diagonal: bool = False
    omega_row: bool = False
    omega_col: bool = False
    omega_loop: bool = False


class EquivSpecDocument(BaseModel):
    blocks: List[List[int]] = Field(default_factory=list, description="Finite blocks below the offset")
    omega_extra: List[int] = Field(default_factory=list, description="Naturals below the offset joined to ω")
    offset: int = Field(default=0, ge=0)
    period: int = Field(default=1, ge=1)
    shape: List[List[int]] = Field(default_factory=list, description="Residue blocks repeated every period")
    omega_shape: List[int] = Field(default_factory=list, description="Residues whose points join ω")


class FormulaNode(BaseModel):
    op: str = Field(..., description="var, top, bot, not, and, or, implies, dia, box, bdia, bbox")
    name: Optional[str] = None
    args: List["FormulaNode"] = Field(default_factory=list)


class ConditionNode(BaseModel):
    op: str = Field(..., description="forall, exists, not, and, or, implies, true, false, rel, eq, leq, prec, perp")
    var: Optional[str] = None
    power: int = 1
    args: List["ConditionNode"] = Field(default_factory=list)
    terms: List[dict] = Field(default_factory=list, description="Point variables or Boolean terms")


class NamedStructure(BaseModel):
    name: str
    description: str = ""
    kind: Literal["frame", "subordination", "omega"]
    frame: Optional[FrameDocument] = None
    subordination: Optional[SubordinationDocument] = None
    relation: Optional[RelationSpecDocument] = None

    @model_validator(mode="after")
    def check_payload(self):
        payload = {"frame": self.frame, "subordination": self.subordination, "omega": self.relation}[self.kind]
        if payload is None:
            raise ValueError(f"structure {self.name} of kind {self.kind} has no payload")
        return self


class RunConfig(BaseSettings):
    model_config = {"env_file": ".env", "env_prefix": "SUBALG_", "extra": "ignore"}

    max_atoms: int = DEFAULT_MAX_ATOMS
    max_points: int = DEFAULT_MAX_POINTS
    k: int = DEFAULT_EXCEPTION_BOUND
    seed: int = 0
    format: str = "text"
    max_valuations: int = DEFAULT_MAX_VALUATIONS
    max_closure: int = DEFAULT_MAX_CLOSURE

    @field_validator("max_atoms")
    @classmethod
    def validate_max_atoms(cls, v):
        return max(1, min(v, HARD_MAX_ATOMS))

    @field_validator("max_points")
    @classmethod
    def validate_max_points(cls, v):
        return max(1, min(v, HARD_MAX_ATOMS))

    @field_validator("k")
    @classmethod
    def validate_k(cls, v):
        return max(1, min(v, 12))

    @field_validator("format")
    @classmethod
    def validate_format(cls, v):
        if v not in ("text", "json"):
            return "text"
        return v

    @field_validator("max_valuations", "max_closure")
    @classmethod
    def validate_budget(cls, v):
        return max(1, v)

    def overridden(self, **flags) -> "RunConfig":
        """Return a copy with CLI flags applied on top of env/defaults."""
        updates = {key: value for key, value in flags.items() if value is not None}
        return RunConfig(**{**self.model_dump(), **updates})


def load_named_structures(path: Optional[Path] = None) -> Dict[str, NamedStructure]:
    """Load the bundled registry of named structures."""
    source = path or STRUCTURES_FILE
    with open(source, "r", encoding="utf-8") as f:
        raw = json.load(f)
    structures = {}
    for entry in raw:
        item = NamedStructure(**entry)
        structures[item.name] = item
    return structures
