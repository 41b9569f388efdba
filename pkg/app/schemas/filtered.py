from pydantic import BaseModel, Field, model_validator
from typing import List, Optional

from app.schemas.complexes import ChainMapPayload, ComplexPayload
from app.services.filtered import FilteredStub


class StubPayload(BaseModel):
    """N-stub F^0 <- F^1 <- ... <- F^{N-1}, level s modelling F^s/F^N"""
    N: int = Field(..., ge=1)
    levels: List[ComplexPayload]
    transitions: List[ChainMapPayload] = Field(default_factory=list, description="F^{s+1} -> F^s")
    strict: Optional[bool] = Field(None, description="Claimed strictness, checked on load")

    @model_validator(mode="after")
    def validate_shape(self):
        if len(self.levels) != self.N:
            raise ValueError(f"an {self.N}-stub has {self.N} levels, got {len(self.levels)}")
        if len(self.transitions) != self.N - 1:
            raise ValueError(f"an {self.N}-stub has {self.N - 1} transitions")
        return self

    def to_stub(self) -> FilteredStub:
        return FilteredStub.from_payload(self.model_dump(exclude_none=True))


class StubSummary(BaseModel):
    """What the CLI prints for a stub: level homology and the graded pieces"""
    N: int
    strict: bool
    levels: List[dict] = Field(default_factory=list, description="Homology of each F^s/F^N")
    graded: List[dict] = Field(default_factory=list, description="Homology of each gr^s")
    truncated_above: Optional[int] = Field(None, description="Degree above which the levels were not computed")
