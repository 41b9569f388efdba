from pydantic import BaseModel, Field, field_validator
from typing import Dict, List, Optional

from app.services.complexes import ChainComplex, ChainMap, HomologyTable
from app.services.linalg import Matrix, RingSpec


def _check_ring(v: str) -> str:
    RingSpec.parse(v)
    return v.strip()


def _check_int(v) -> str:
    text = str(v).strip()
    try:
        int(text)
    except ValueError as exc:
        raise ValueError(f"{v!r} is not an integer") from exc
    return text


class MatrixPayload(BaseModel):
    """Dense matrix over Z, Q or F_p; scalars as decimal strings (fractions allowed over Q)"""
    ring: str = Field(..., description="Ring label: Z, Q or Fp:<p>")
    rows: int = Field(..., ge=0)
    cols: int = Field(..., ge=0)
    entries: List[List[str]] = Field(default_factory=list, description="Row-major entries")

    @field_validator("ring")
    @classmethod
    def validate_ring(cls, v: str) -> str:
        return _check_ring(v)

    @field_validator("entries", mode="before")
    @classmethod
    def stringify_entries(cls, v):
        return [[str(x).strip() for x in row] for row in (v or [])]

    def to_matrix(self) -> Matrix:
        return Matrix.from_payload(self.model_dump())


class ComplexPayload(BaseModel):
    """Chain complex with differential d_i: C_i -> C_{i-1} keyed by i"""
    ring: str = Field(..., description="Ring label: Z, Q or Fp:<p>")
    ranks: Dict[str, int] = Field(default_factory=dict, description="Degree -> rank")
    d: Dict[str, dict] = Field(default_factory=dict, description="Degree i -> matrix of d_i")
    truncated_above: Optional[int] = Field(None, description="Homology above this degree is not computed")

    @field_validator("ring")
    @classmethod
    def validate_ring(cls, v: str) -> str:
        return _check_ring(v)

    @field_validator("ranks")
    @classmethod
    def validate_ranks(cls, v: Dict[str, int]) -> Dict[str, int]:
        for degree, r in v.items():
            _check_int(degree)
            if r < 0:
                raise ValueError(f"rank in degree {degree} is negative")
        return v

    @field_validator("d")
    @classmethod
    def validate_differentials(cls, v: Dict[str, dict]) -> Dict[str, dict]:
        for degree in v:
            _check_int(degree)
        return v

    def to_complex(self) -> ChainComplex:
        return ChainComplex.from_payload(self.model_dump(exclude_none=True))


class ChainMapPayload(BaseModel):
    source: ComplexPayload
    target: ComplexPayload
    components: Dict[str, MatrixPayload] = Field(default_factory=dict, description="Degree -> f_i")

    def to_chain_map(self) -> ChainMap:
        return ChainMap.from_payload(self.model_dump(exclude_none=True))


class HomologyPayload(BaseModel):
    """Homology table: degree -> module label such as "Z^2+Z/2" or "F_3"; zero degrees omitted"""
    ring: str
    homology: Dict[str, str] = Field(default_factory=dict)
    truncated_above: Optional[int] = None

    @classmethod
    def from_table(cls, table: HomologyTable, truncated_above: Optional[int] = None) -> "HomologyPayload":
        return cls(ring=table.ring.label, homology=table.to_payload(), truncated_above=truncated_above)
