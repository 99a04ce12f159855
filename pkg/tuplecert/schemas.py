import json
from pydantic import BaseModel, Field, field_validator
from typing import Any, Dict, Optional
from datetime import datetime

from tuplecert.constants import RELATIONS, START_TERMS, STRATEGIES
from tuplecert.config import DEFAULT_BUDGET, DEFAULT_COEFF_BOUND, DEFAULT_KMAX, DEFAULT_TIME_BUDGET

# Fields of the --json envelope
ENVELOPE_FIELDS = {"command", "inputs", "verdict", "details", "seed", "elapsed_ms"}

# Pydantic schema for the outcome of one command
class RunReport(BaseModel):
    command: str
    inputs: Dict[str, str] = Field(default_factory=dict)  # file name -> sha256
    verdict: str
    details: Dict[str, Any] = Field(default_factory=dict)
    report: str = ""
    seed: Optional[int] = None
    elapsed_ms: int = 0
    exit_code: int = 0

    def envelope(self) -> Dict[str, Any]:
        """The --json fields."""
        return self.model_dump(include=ENVELOPE_FIELDS)

# Request bodies of the HTTP service carry file contents, not paths
class CheckRequest(BaseModel):
    trs: str
    interpretation: str

class BoundRequest(CheckRequest):
    pass

class SearchRequest(BaseModel):
    trs: str
    strategy: str = "progressive"
    seed: int = 0
    kmax: int = Field(DEFAULT_KMAX, ge=1)
    coeff_bound: int = Field(DEFAULT_COEFF_BOUND, ge=1)
    time_budget: float = Field(DEFAULT_TIME_BUDGET, gt=0)

    @field_validator("strategy")
    @classmethod
    def known_strategy(cls, value):
        if value not in STRATEGIES:
            raise ValueError(f"strategy must be one of {', '.join(STRATEGIES)}")
        return value

class OracleRequest(BaseModel):
    trs: str
    relation: str = "innermost"
    max_size: int = Field(6, ge=1)
    budget: int = Field(DEFAULT_BUDGET, ge=1)
    start: Optional[str] = None

    @field_validator("relation")
    @classmethod
    def known_relation(cls, value):
        if value not in RELATIONS:
            raise ValueError(f"relation must be one of {', '.join(RELATIONS)}")
        return value

    @field_validator("start")
    @classmethod
    def known_start(cls, value):
        if value is not None and value not in START_TERMS:
            raise ValueError(f"start must be one of {', '.join(START_TERMS)}")
        return value

# Pydantic schema for a recorded run
class RunResponse(BaseModel):
    id: int
    command: str
    inputs: Dict[str, str]
    verdict: str
    exit_code: int
    seed: Optional[int] = None
    elapsed_ms: int
    report: str
    created_at: datetime

    @field_validator("inputs", mode="before")
    @classmethod
    def decode_inputs(cls, value):
        if isinstance(value, str):
            return json.loads(value)
        return value

    class Config:
        from_attributes = True
