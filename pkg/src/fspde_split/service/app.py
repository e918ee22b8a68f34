"""FastAPI application.

Studies run minutes, not milliseconds, so POST /studies only enqueues:
a daemon thread runs the study and the caller polls GET /studies/{id}.
The registry is in-memory and lock-guarded; restarting the server
forgets finished jobs, which is acceptable for a desk-scale tool whose
durable outputs are the emitted report files.
"""

from __future__ import annotations

import dataclasses
import threading
import time
import uuid
from typing import Dict, Optional

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..lemmas import verify_lemmas
from ..noise import sample_noise_lattice
from ..study import convergence_study, emit_report
from .models import (
    HealthResponse,
    LemmaReportModel,
    LemmaRequest,
    NoiseRequest,
    NoiseResponse,
    StudyRequest,
    StudyStatus,
    StudySubmitted,
    StudySummary,
)

__all__ = ["create_app", "app"]

# JSON payload guard for the synchronous noise endpoint
_MAX_NOISE_VALUES = 1 << 20


class _Job:
    def __init__(self, request: StudyRequest):
        self.request = request
        self.status = "queued"
        self.submitted_at = time.time()
        self.elapsed_seconds: Optional[float] = None
        self.report: Optional[dict] = None
        self.passed: Optional[bool] = None
        self.files: Optional[dict] = None
        self.error: Optional[str] = None


class _Registry:
    def __init__(self):
        self._jobs: Dict[str, _Job] = {}
        self._lock = threading.Lock()

    def submit(self, request: StudyRequest) -> str:
        job_id = uuid.uuid4().hex
        job = _Job(request)
        with self._lock:
            self._jobs[job_id] = job
        thread = threading.Thread(target=self._run, args=(job_id,), daemon=True)
        thread.start()
        return job_id

    def _run(self, job_id: str) -> None:
        job = self.get(job_id)
        with self._lock:
            job.status = "running"
        try:
            study = job.request.to_study_config()
            report = convergence_study(study, n_workers=job.request.workers)
            files = None
            if study.output_path:
                files = emit_report(report, study.output_path)
            passed = None
            if job.request.slope_band is not None:
                low, high = job.request.slope_band
                passed = bool(low <= report.slope <= high)
            with self._lock:
                job.report = dataclasses.asdict(report)
                job.files = files
                job.passed = passed
                job.elapsed_seconds = report.elapsed_seconds
                job.status = "done"
        except Exception as exc:
            with self._lock:
                job.error = f"{type(exc).__name__}: {exc}"
                job.status = "failed"

    def get(self, job_id: str) -> _Job:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            raise KeyError(job_id)
        return job

    def snapshot(self) -> Dict[str, _Job]:
        with self._lock:
            return dict(self._jobs)


def create_app() -> FastAPI:
    api = FastAPI(title="fspde-split", version=__version__)
    registry = _Registry()

    @api.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @api.post("/studies", response_model=StudySubmitted, status_code=202)
    def submit_study(request: StudyRequest) -> StudySubmitted:
        try:
            request.to_study_config()  # surface config errors before queueing
        except (ValueError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        job_id = registry.submit(request)
        return StudySubmitted(job_id=job_id, status="queued")

    @api.get("/studies", response_model=list[StudySummary])
    def list_studies() -> list[StudySummary]:
        out = []
        for job_id, job in sorted(registry.snapshot().items(), key=lambda kv: kv[1].submitted_at):
            out.append(
                StudySummary(
                    job_id=job_id,
                    status=job.status,
                    hurst=job.request.hurst,
                    submitted_at=job.submitted_at,
                    elapsed_seconds=job.elapsed_seconds,
                )
            )
        return out

    @api.get("/studies/{job_id}", response_model=StudyStatus)
    def study_status(job_id: str) -> StudyStatus:
        try:
            job = registry.get(job_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no such job {job_id}")
        return StudyStatus(
            job_id=job_id,
            status=job.status,
            submitted_at=job.submitted_at,
            elapsed_seconds=job.elapsed_seconds,
            report=job.report,
            passed=job.passed,
            files=job.files,
            error=job.error,
        )

    @api.post("/noise/sample", response_model=NoiseResponse)
    def noise_sample(request: NoiseRequest) -> NoiseResponse:
        if request.modes * request.steps > _MAX_NOISE_VALUES:
            raise HTTPException(
                status_code=413,
                detail=f"modes * steps must not exceed {_MAX_NOISE_VALUES}",
            )
        lattice = sample_noise_lattice(
            n_modes=request.modes,
            n_steps=request.steps,
            hurst=request.hurst,
            dt_fine=request.t_end / request.steps,
            seed=request.seed,
        )
        return NoiseResponse(
            modes=request.modes,
            steps=request.steps,
            hurst=request.hurst,
            dt=lattice.dt_fine,
            seed=request.seed,
            increments=[list(map(float, row)) for row in lattice.increments],
        )

    @api.post("/lemmas/verify", response_model=LemmaReportModel)
    def lemmas_verify(request: LemmaRequest) -> LemmaReportModel:
        report = verify_lemmas(request.hurst, fast=request.fast)
        return LemmaReportModel.model_validate(report.to_dict())

    return api


app = create_app()
