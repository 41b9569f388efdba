from pydantic import BaseModel, Field, field_validator
from typing import List, Literal

from app.services.dalg import AlgebraPresentation
from app.services.linalg import RingSpec


class PresentationPayload(BaseModel):
    """k[vars]/(rels) with a regularity claim"""
    ring: str = Field(..., description="Base ring label: Z, Q or Fp:<p>")
    vars: List[str] = Field(default_factory=list, description="Variable names")
    rels: List[str] = Field(default_factory=list, description='Relations, e.g. "x^2-3"; use * for products')
    regularity: Literal["smooth", "regseq", "unknown"] = "unknown"

    @field_validator("ring")
    @classmethod
    def validate_ring(cls, v: str) -> str:
        RingSpec.parse(v)
        return v.strip()

    @field_validator("vars")
    @classmethod
    def validate_vars(cls, v: List[str]) -> List[str]:
        cleaned = [name.strip() for name in v]
        for name in cleaned:
            if not name.isidentifier():
                raise ValueError(f"variable name {name!r} is not an identifier")
        return cleaned

    def to_presentation(self) -> AlgebraPresentation:
        return AlgebraPresentation.from_payload(self.model_dump())
