"""
Pydantic schemas for selftest results.
"""
from typing import Dict, List

from pydantic import BaseModel, Field

from app.services.selftest_service import SuiteResult


class SuiteSchema(BaseModel):
    name: str
    passed: bool
    cases: int
    failures: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list, description="Documented completeness boundaries")
    seconds: float


class SelftestResponse(BaseModel):
    passed: bool
    suites: List[SuiteSchema]

    @classmethod
    def from_results(cls, results: Dict[str, SuiteResult]) -> "SelftestResponse":
        suites = [
            SuiteSchema(
                name=r.name,
                passed=r.passed,
                cases=r.cases,
                failures=r.failures,
                notes=r.notes,
                seconds=round(r.seconds, 3),
            )
            for r in results.values()
        ]
        return cls(passed=all(s.passed for s in suites), suites=suites)
