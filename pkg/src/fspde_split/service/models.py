"""Request and response schemas.

``StudyRequest`` doubles as the on-disk config format: the CLI loads a
JSON file, validates it through this model, and either runs the study
in-process or posts the same payload to a server.  Field names follow
the solver's conventions (T, N, L_ref, ...) rather than Python casing
so that configs read like the run they describe.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator

from ..flows import DriftSplit
from ..scheme import SchemeConfig
from ..study import StudyConfig

__all__ = [
    "DriftRequest",
    "StudyRequest",
    "StudySubmitted",
    "StudyStatus",
    "StudySummary",
    "NoiseRequest",
    "NoiseResponse",
    "LemmaRequest",
    "LemmaCheckModel",
    "LemmaReportModel",
    "HealthResponse",
]


class DriftRequest(BaseModel):
    f: Literal["poly_odd", "cubic_linear", "zero"] = "poly_odd"
    g: Literal["identity", "sine", "affine_sine", "zero"] = "identity"
    q: int = Field(default=1, ge=1)

    def to_split(self) -> DriftSplit:
        return DriftSplit(f_kind=self.f, g_kind=self.g, q=self.q)


class StudyRequest(BaseModel):
    """One convergence study: scheme parameters plus the sweep protocol."""

    T: float = Field(default=1.0, gt=0.0)
    N: int = Field(ge=1)
    eps: float = Field(default=1.0, gt=0.0)
    hurst: float = Field(gt=0.25, lt=1.0)
    x0: Union[str, List[float]] = "sin_pi"
    seed: int = Field(default=0, ge=0)
    drift: DriftRequest = DriftRequest()
    L_ref: int = Field(ge=2)
    L_list: List[int] = Field(min_length=1)
    M: int = Field(ge=2)
    error_norm: str = "L2"
    slope_band: Optional[Tuple[float, float]] = None
    workers: Optional[int] = Field(default=None, ge=1)
    output: Optional[str] = None

    @field_validator("error_norm")
    @classmethod
    def _norm_is_l2(cls, v: str) -> str:
        if v.lower() != "l2":
            raise ValueError("error_norm must be L2")
        return "L2"

    @field_validator("slope_band")
    @classmethod
    def _band_ordered(cls, v):
        if v is not None and not v[0] < v[1]:
            raise ValueError("slope_band must be (low, high) with low < high")
        return v

    def to_study_config(self, seed_override: Optional[int] = None) -> StudyConfig:
        base = SchemeConfig(
            t_end=self.T,
            n_steps=self.L_ref,
            n_modes=self.N,
            eps=self.eps,
            drift=self.drift.to_split(),
            hurst=self.hurst,
            x0=self.x0 if isinstance(self.x0, str) else list(self.x0),
            seed=self.seed if seed_override is None else seed_override,
        )
        return StudyConfig(
            base=base,
            l_list=tuple(self.L_list),
            l_ref=self.L_ref,
            n_realizations=self.M,
            error_norm="l2",
            output_path=self.output,
        )


class StudySubmitted(BaseModel):
    job_id: str
    status: str


class StudySummary(BaseModel):
    job_id: str
    status: str
    hurst: float
    submitted_at: float
    elapsed_seconds: Optional[float] = None


class StudyStatus(BaseModel):
    job_id: str
    status: Literal["queued", "running", "done", "failed"]
    submitted_at: float
    elapsed_seconds: Optional[float] = None
    report: Optional[dict] = None
    passed: Optional[bool] = None
    files: Optional[dict] = None
    error: Optional[str] = None


class NoiseRequest(BaseModel):
    modes: int = Field(default=1, ge=1)
    steps: int = Field(ge=1)
    hurst: float = Field(gt=0.0, lt=1.0)
    t_end: float = Field(default=1.0, gt=0.0)
    seed: int = Field(default=0, ge=0)


class NoiseResponse(BaseModel):
    modes: int
    steps: int
    hurst: float
    dt: float
    seed: int
    increments: List[List[float]]


class LemmaRequest(BaseModel):
    hurst: float = Field(gt=0.0, lt=1.0)
    fast: bool = False


class LemmaCheckModel(BaseModel):
    lemma: str
    hurst: float
    fitted_exponent: float
    expected_exponent: float
    tolerance: float
    passed: bool
    one_sided: bool
    grid: List[float]
    values: List[float]
    note: str


class LemmaReportModel(BaseModel):
    hurst: float
    passed: bool
    checks: List[LemmaCheckModel]


class HealthResponse(BaseModel):
    status: str
    version: str
