"""Pydantic request/response models for the coexistence service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..params import WifiParams

Mode = Literal["weak", "strong"]


class WifiParamsModel(BaseModel):
    """Wire form of WifiParams; the empty-buffer probability is ``lambda``."""

    model_config = ConfigDict(populate_by_name=True)

    n: int = 17
    cw0: int = 16
    m_retries: int = 6
    lambda_: float = Field(0.0, alias="lambda", ge=0.0, le=1.0)
    payload_bits: int = 8192
    phy_rate_bps: float = 1_000_000.0
    slot_us: float = 9.0
    sifs_us: float = 16.0
    difs_us: float = 34.0
    rts_bits: int = 160
    cts_bits: int = 112
    ack_bits: int = 112
    mac_hdr_bits: int = 272
    phy_hdr_bits: int = 128
    use_rts_cts: bool = True

    def to_params(self) -> WifiParams:
        return WifiParams(**self.model_dump())

    @classmethod
    def from_params(cls, p: WifiParams) -> "WifiParamsModel":
        return cls(**{f: getattr(p, f) for f in cls.model_fields})


class SolveRequest(BaseModel):
    params: WifiParamsModel = Field(default_factory=WifiParamsModel)


class SolveResponse(BaseModel):
    tau: float
    p_c: float
    p_s: float
    t_s_slots: int
    t_c_slots: int
    mean_td_slots: float
    mean_td_ms: float
    residual: float


class RunRequest(BaseModel):
    params: WifiParamsModel = Field(default_factory=WifiParamsModel)
    period_ms: float = Field(500.0, gt=0)
    duty: float = Field(0.3, ge=0.0, le=1.0)
    q: float = Field(1.0, ge=0.0, le=1.0)
    mode: Mode = "weak"
    packets: int = Field(200_000, ge=1)
    warmup_packets: int = Field(1_000, ge=0)
    seed: int = Field(0, ge=0)
    sampled_td: bool = False


class ReferenceRequest(BaseModel):
    params: WifiParamsModel = Field(default_factory=WifiParamsModel)
    packets: int = Field(200_000, ge=1)
    warmup_packets: int = Field(1_000, ge=0)
    seed: int = Field(0, ge=0)


class RunResponse(BaseModel):
    mean_r: float
    se_r: float
    mean_d: float
    se_d: float
    drop_rate: float
    packets_used: int
    total_slots: float
    mean_r_recip: float
    se_r_recip: float


class SweepRequest(BaseModel):
    variable: Literal["period_ms", "alpha", "q", "payload_bytes"]
    values: list[float] = Field(min_length=1)
    regimes: list[Mode] = ["weak", "strong"]
    period_ms: float = Field(500.0, gt=0)
    alpha: float = Field(0.3, ge=0.0, le=1.0)
    q: float = Field(1.0, ge=0.0, le=1.0)
    payload_bytes: int = Field(1024, ge=1)
    stations: int = Field(17, ge=1)
    params: WifiParamsModel = Field(default_factory=WifiParamsModel)
    packets: int = Field(200_000, ge=1)
    warmup_packets: int = Field(1_000, ge=0)
    seed: int = Field(0, ge=0)
    seed_policy: Literal["paired", "per_point"] = "paired"
    threads: int = Field(1, ge=1)


class SweepRowModel(BaseModel):
    regime: str
    period_slots: int
    alpha: float
    q: float
    payload_bits: int
    n: int
    seed: int
    packets: int
    mean_r: Optional[float] = None
    se_r: Optional[float] = None
    mean_d: Optional[float] = None
    se_d: Optional[float] = None
    drop_rate: Optional[float] = None
    ref_r: Optional[float] = None
    ref_d: Optional[float] = None
    phi_r: Optional[float] = None
    phi_d: Optional[float] = None
    fair: Optional[bool] = None
    mean_r_recip: Optional[float] = None
    se_r_recip: Optional[float] = None
    phi_r_recip: Optional[float] = None
    error: str = ""


class SweepResponse(BaseModel):
    rows: list[SweepRowModel]


class ExactRequest(BaseModel):
    params: WifiParamsModel = Field(default_factory=WifiParamsModel)
    period_slots: int = Field(200, ge=1)
    alpha: float = Field(0.3, ge=0.0, le=1.0)
    q: float = Field(1.0, ge=0.0, le=1.0)
    mode: Mode = "weak"
    max_paths: int = Field(10 ** 6, ge=1)


class ExactRow(BaseModel):
    t0: int
    p_drop: float
    mean_d_slots: float
    mean_r_bits_per_slot: float
    pi: float


class ExactResponse(BaseModel):
    rows: list[ExactRow]
    e_r: float
    e_d: float
    e_r_ratio: float
    drop_rate: float


class ValidateRequest(BaseModel):
    params: WifiParamsModel = Field(default_factory=WifiParamsModel)
    horizon_slots: int = Field(10_000_000, ge=10 ** 5)
    seed: int = Field(0, ge=0)
    p_c_tolerance: float = Field(0.01, gt=0)
    td_atom_tolerance: float = Field(0.02, gt=0)


class ValidateResponse(BaseModel):
    solved_p_c: float
    empirical_p_c: float
    solved_tau: float
    empirical_tau: float
    solved_mean_td: float
    empirical_mean_td: float
    solved_td_pmf: dict[int, float]
    empirical_td_pmf: dict[int, float]
    p_c_ok: bool
    td_pmf_ok: bool
    passed: bool
