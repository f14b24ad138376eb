from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Optional, List, Dict
from enum import Enum

from app.core.config import settings


# Enums
class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    DOT = "dot"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class VerdictKind(str, Enum):
    EQUIVALENT = "equivalent"
    INEQUIVALENT = "inequivalent"


# Configuration
class AlphabetConfig(BaseModel):
    tests: List[str] = []
    progs: List[str] = []

    @field_validator("tests", "progs", mode="before")
    @classmethod
    def split_names(cls, v):
        # accept "b,c" as well as ["b", "c"]
        if isinstance(v, str):
            return [name.strip() for name in v.split(",") if name.strip()]
        return v


class RunConfig(BaseModel):
    command: str
    alphabet: AlphabetConfig
    inputs: List[str] = []
    format: OutputFormat = OutputFormat(settings.DEFAULT_FORMAT)
    expr_type: Optional[str] = None
    max_len: int = Field(settings.DEFAULT_MAX_LEN, ge=0)
    state_cap: int = Field(settings.DEFAULT_STATE_CAP, ge=1)
    pending: Optional[str] = None


# Automata
class TransitionSchema(BaseModel):
    source: str
    symbol: str
    target: str


class AutomatonSchema(BaseModel):
    tests: List[str]
    programs: List[str]
    states: Dict[str, List[str]]
    output: Dict[str, int]
    transitions: List[TransitionSchema]
    start: Optional[str] = None
    legend: Optional[Dict[str, str]] = None

    @field_validator("output")
    @classmethod
    def validate_output(cls, v):
        for state, bit in v.items():
            if bit not in (0, 1):
                raise ValueError(f"output of {state} must be 0 or 1")
        return v


# Equivalence
class CertificateSchema(BaseModel):
    tests: List[str] = []
    programs: List[str] = []
    type: str
    pairs: Dict[str, List[List[str]]]

    @field_validator("pairs")
    @classmethod
    def validate_pairs(cls, v):
        for key, pairs in v.items():
            for pair in pairs:
                if len(pair) != 2:
                    raise ValueError(f"pairs under {key} must have two expressions")
        return v


class VerdictSchema(BaseModel):
    verdict: VerdictKind
    type: str
    pair_count: int = 0
    counterexample: Optional[str] = None
    side: Optional[Side] = None
    certificate: Optional[CertificateSchema] = None

    @model_validator(mode="after")
    def check_payload(self):
        if self.verdict == VerdictKind.INEQUIVALENT and self.counterexample is None:
            raise ValueError("an inequivalent verdict needs a counterexample")
        return self


# Command results
class DerivativeSchema(BaseModel):
    expression: str
    symbol: str
    type: str
    derivative: str
    derived_type: str


class LanguageSchema(BaseModel):
    expression: str
    type: str
    max_len: int
    strings: List[str]


class CompiledSchema(BaseModel):
    program: str
    expression: str
    type: str


class TypesSchema(BaseModel):
    expression: str
    types: List[str]


class MembershipSchema(BaseModel):
    string: str
    type: str
    accepted: bool


class CertificateCheckSchema(BaseModel):
    type: str
    pair_count: int
    valid: bool
