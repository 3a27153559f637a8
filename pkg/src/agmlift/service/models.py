"""Pydantic request/response models for the service and the CLI.

Field elements travel as arrays of lowercase hex strings, little-endian
in the generator t (constant coefficient first).  Residue-field values
are hex bitmasks, bit i holding the coefficient of t^i.  Valuations use
null for "vanishes at working precision".
"""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, Field


class CurveIn(BaseModel):
    d: int = Field(ge=1)
    a2: str = "0"
    a6: str = "1"


class CountRequest(BaseModel):
    d: int = Field(ge=1)
    a2: Optional[str] = None
    a6: Optional[str] = None
    random: bool = False
    rng_seed: int = 0


class CountBatchRequest(BaseModel):
    curves: list[CurveIn]
    rng_seed: int = 0


class CountResponse(BaseModel):
    d: int
    a2: str
    a6: str
    trace: int
    order: int
    omega_norm: list[str]
    precision_used: int
    verified: bool


class CountBatchResponse(BaseModel):
    results: list[CountResponse]


class LiftRequest(BaseModel):
    g: int = Field(ge=1, le=3)
    d: int = Field(ge=1)
    seed: list[str]
    precision: int = Field(ge=1)
    f: Optional[str] = None  # optional modulus bitmask, hex


class LiftResponse(BaseModel):
    g: int
    d: int
    N: int
    point: list[list[str]]
    omega: list[str]
    precision_achieved: int
    residual_valuation: int


class AgmRequest(BaseModel):
    g: int = Field(ge=1, le=4)
    d: int = Field(ge=1)
    start: list[Union[int, list[str]]]
    steps: int = Field(ge=0)
    precision: int = 40
    f: Optional[str] = None


class AgmStepReport(BaseModel):
    diff_valuations: list[Optional[int]]
    min_diff_valuation: Optional[int]
    zero_coord_delta_valuation: Optional[int]
    ratio_delta_valuations: list[Optional[int]]
    in_disc_g_plus_2: bool


class AgmResponse(BaseModel):
    g: int
    d: int
    N: int
    steps: list[AgmStepReport]
    final: list[list[str]]
    ratios: list[list[str]]


class VerifyRequest(BaseModel):
    g: int = Field(ge=1)
    d: int = Field(ge=1)
    N: int = Field(ge=1)
    level_exp: int = Field(default=1, ge=1)
    point: list[list[str]]
    omega: list[str]
    f: Optional[str] = None


class RelationReport(BaseModel):
    u: list[int]
    v: Optional[list[int]] = None
    valuation: Optional[int]


class VerifyResponse(BaseModel):
    relations: list[RelationReport]
    min_valuation: Optional[int]
    point_canonical_mod2: bool


class SelftestRequest(BaseModel):
    only: Optional[list[str]] = None
    rng_seed: int = 0


class SelftestItem(BaseModel):
    name: str
    passed: bool
    detail: str


class SelftestResponse(BaseModel):
    passed: bool
    items: list[SelftestItem]


class ErrorResponse(BaseModel):
    error: str
