"""Pydantic request/response models: the wire format of the verification service.

The family payload mirrors the on-disk family file format exactly; semantic
validation (rational parsing, rank condition) happens in the core package so
the file parser and the API accept and reject the same inputs.
"""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, Field

RationalStr = Union[str, int]


class FamilyPayload(BaseModel):
    labels: list[Union[str, int]]
    F: list[list[RationalStr]]
    C: Optional[list[RationalStr]] = None
    C_log_of: Optional[list[RationalStr]] = None


class FamilySelector(BaseModel):
    """Exactly one input source: an inline family or the builtin binomial."""

    family: Optional[FamilyPayload] = None
    binomial_n: Optional[int] = None


class ShowRequest(FamilySelector):
    theta: list[float] = Field(default_factory=list)


class HullRequest(FamilySelector):
    pass


class VerifyRequest(FamilySelector):
    c_offset: list[RationalStr] = Field(default_factory=list)
    samples: int = Field(default=100, ge=1)
    seed: int = Field(default=0xA11CE, ge=0)
    count: int = Field(default=10, ge=1)
    tol_check: float = Field(default=1e-5, gt=0)
    fd_step: float = Field(default=1e-4, gt=0)


class BinomialExampleRequest(BaseModel):
    n: int = Field(ge=1)
    c_offset: list[RationalStr] = Field(default_factory=list)
    samples: int = Field(default=100, ge=1)
    seed: int = Field(default=0xA11CE, ge=0)
    count: int = Field(default=10, ge=1)
    tol_check: float = Field(default=1e-5, gt=0)
    fd_step: float = Field(default=1e-4, gt=0)


class WitnessModel(BaseModel):
    description: str
    expected: str
    actual: str
    ok: bool


class ReportModel(BaseModel):
    name: str
    passed: bool
    witnesses: list[WitnessModel]
    notes: list[str] = Field(default_factory=list)


class PolytopeModel(BaseModel):
    units: str
    vertices: list[list[str]]
    decimal: list[list[float]]


class ShowResponse(BaseModel):
    psi: float
    eta: list[float]
    fisher: list[list[float]]


class HullResponse(BaseModel):
    polytope: PolytopeModel


class VerifyResponse(BaseModel):
    passed: bool
    reports: list[ReportModel]
    polytope: Optional[PolytopeModel] = None
    display: Optional[str] = None


class HealthResponse(BaseModel):
    status: str
    version: str
