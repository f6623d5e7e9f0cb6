"""
Job configuration: one command-line invocation as a validated document.
"""
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from app.models.chain_model import StepConvention
from app.models.level_model import Level
from app.models.weight_model import Weight
from app.services.root_system_service import parse_code


def _canonical_weight(text: Optional[str]) -> Optional[str]:
    if text is None:
        return None
    return Weight.parse(text).to_text()


class JobConfig(BaseModel):
    """
    Parsed CLI job. Weights and levels are stored in canonical text, so
    to_argv followed by parsing gives back an equal config.
    """
    command: str
    root_system: Optional[str] = None
    level: Optional[str] = None
    source: Optional[str] = None
    target: Optional[str] = None
    weight: Optional[str] = None
    highest_weight: Optional[str] = None
    weights: List[str] = Field(default_factory=list)
    max_chain_len: Optional[int] = Field(None, ge=0)
    max_m: Optional[int] = Field(None, ge=0)
    box: Optional[int] = Field(None, ge=0)
    max_depth: Optional[int] = Field(None, ge=0)
    convention: StepConvention = StepConvention.REFLECTION
    allow_empty_chain: bool = False
    depth: Optional[int] = Field(None, ge=0)
    height: Optional[int] = Field(None, ge=0)
    relation: str = "linked"
    p: Optional[int] = None
    q: Optional[int] = Field(None, gt=0)
    scale: int = Field(1, gt=0)
    l0_convention: Optional[str] = None
    suites: List[str] = Field(default_factory=list)
    json_output: bool = False
    out: Optional[str] = None

    @field_validator("root_system")
    @classmethod
    def _canonical_code(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return None
        series, rank = parse_code(value)
        return f"{series}{rank}"

    @field_validator("level")
    @classmethod
    def _canonical_level(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return None
        return Level.parse(value).to_json()

    @field_validator("source", "target", "weight", "highest_weight")
    @classmethod
    def _canonical_single(cls, value: Optional[str]) -> Optional[str]:
        return _canonical_weight(value)

    @field_validator("weights")
    @classmethod
    def _canonical_list(cls, values: List[str]) -> List[str]:
        return [_canonical_weight(v) for v in values]

    @field_validator("relation")
    @classmethod
    def _known_relation(cls, value: str) -> str:
        if value not in ("linked", "coarse", "rational"):
            raise ValueError(f"Unknown relation {value!r}")
        return value

    def to_argv(self) -> List[str]:
        """Command line that reproduces this job.

        Values are attached with "=" so negative weights such as -1/2 are
        not mistaken for options.
        """
        argv = [self.command]
        options = [
            ("--rs", self.root_system),
            ("--level", self.level),
            ("--from", self.source),
            ("--to", self.target),
            ("--weight", self.weight),
            ("--hw", self.highest_weight),
            ("--weights", ";".join(self.weights) if self.weights else None),
            ("--max-chain", self.max_chain_len),
            ("--max-m", self.max_m),
            ("--box", self.box),
            ("--max-depth", self.max_depth),
            ("--depth", self.depth),
            ("--height", self.height),
            ("--p", self.p),
            ("--q", self.q),
            ("--l0-convention", self.l0_convention),
            ("--out", self.out),
        ]
        for flag, value in options:
            if value is not None:
                argv.append(f"{flag}={value}")
        if self.convention != StepConvention.REFLECTION:
            argv.append(f"--convention={self.convention.value}")
        if self.relation != "linked":
            argv.append(f"--relation={self.relation}")
        if self.scale != 1:
            argv.append(f"--scale={self.scale}")
        for suite in self.suites:
            argv.append(f"--suite={suite}")
        if self.allow_empty_chain:
            argv.append("--allow-empty-chain")
        if self.json_output:
            argv.append("--json")
        return argv
