from app.schemas.complexes import ChainMapPayload, ComplexPayload, HomologyPayload, MatrixPayload
from app.schemas.filtered import StubPayload, StubSummary
from app.schemas.presentation import PresentationPayload
from app.schemas.suite import SuiteCaseResult, SuiteReport

__all__ = [
    "ChainMapPayload",
    "ComplexPayload",
    "HomologyPayload",
    "MatrixPayload",
    "StubPayload",
    "StubSummary",
    "PresentationPayload",
    "SuiteCaseResult",
    "SuiteReport",
]
