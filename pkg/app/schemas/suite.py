from pydantic import BaseModel, Field, field_validator
from typing import Any, List, Literal, Optional

Provenance = Literal["PAPER", "DERIVED", "TRIVIAL"]


class SuiteCaseResult(BaseModel):
    """One golden case: what was expected, what came out, and how long it took"""
    name: str
    group: str
    provenance: Provenance = Field(..., description="Where the golden value comes from")
    status: Literal["pass", "fail", "error"]
    runtime_seconds: float = Field(..., ge=0)
    digest: str = Field(..., description="sha256 of the canonical computed value")
    computed: Any = None
    expected: Any = None
    diff: Optional[List[str]] = Field(None, description="Paths where computed and expected differ")
    error: Optional[str] = None

    @field_validator("runtime_seconds")
    @classmethod
    def round_runtime(cls, v: float) -> float:
        return round(v, 4)


class SuiteReport(BaseModel):
    run_id: str
    golden_path: str
    cases: List[SuiteCaseResult] = Field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cases if c.status == "pass")

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.cases if c.status != "pass"]

    @property
    def ok(self) -> bool:
        return bool(self.cases) and not self.failed

    def summary(self) -> dict:
        return {
            "run_id": self.run_id,
            "total": len(self.cases),
            "passed": self.passed,
            "failed": self.failed,
            "ok": self.ok,
        }
