"""Verification sweeps over (l, k, nu, mode, z, T, prec) combinations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Any, Optional

from ..config import DEFAULT_NU_MAX, DEFAULT_NU_MIN, DEFAULT_PREC_BITS, DEFAULT_T_MARGIN, SWEEP_WORKERS
from ..logging import log, now
from ..matrix_system.poly_matrix import DEFAULT_MATRICES, RecurrenceMatrices
from ..services.sweep_runner import SweepRunner
from ..types import (
    K_SETS,
    CheckReport,
    EvalPoint,
    ExactCheckSpec,
    ExactComplex,
    NumericCheckSpec,
    Precision,
)
from .recurrence import EQUATIONS, verify_exact_one, verify_numeric

MODES = ("exact", "numeric")


@dataclass(frozen=True)
class SweepPoint:
    """One (l, k) family over an inclusive nu range, in one mode."""
    l: int
    k: int
    nu_min: int = DEFAULT_NU_MIN
    nu_max: int = DEFAULT_NU_MAX
    mode: str = "exact"
    equations: tuple[str, ...] = EQUATIONS
    z: Optional[ExactComplex] = None
    truncation: Optional[int] = None
    t_margin: int = DEFAULT_T_MARGIN
    prec_bits: int = DEFAULT_PREC_BITS

    def __post_init__(self) -> None:
        ExactCheckSpec(self.l, self.k, self.nu_min, self.nu_max, self.truncation, self.t_margin)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)} (got {self.mode!r})")
        unknown = [e for e in self.equations if e not in EQUATIONS]
        if unknown:
            raise ValueError(f"unknown recurrences {unknown}")
        if self.mode == "numeric":
            if self.z is None:
                raise ValueError("numeric mode needs a point z")
            self.point()

    def spec(self) -> ExactCheckSpec:
        return ExactCheckSpec(self.l, self.k, self.nu_min, self.nu_max, self.truncation, self.t_margin)

    def point(self) -> EvalPoint:
        return EvalPoint(self.z, Precision(self.prec_bits))

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "l": self.l, "k": self.k, "nu_min": self.nu_min, "nu_max": self.nu_max,
            "mode": self.mode, "equations": list(self.equations), "t_margin": self.t_margin,
        }
        if self.truncation is not None:
            data["T"] = self.truncation
        if self.mode == "numeric":
            data["z"] = str(self.z)
            data["prec"] = self.prec_bits
        return data


@dataclass(frozen=True)
class SweepConfig:
    points: tuple[SweepPoint, ...] = field(default_factory=tuple)
    jobs: int = SWEEP_WORKERS

    def to_dict(self) -> dict[str, Any]:
        return {"jobs": self.jobs, "points": [p.to_dict() for p in self.points]}


def default_sweep_config(nu_min: int = DEFAULT_NU_MIN, nu_max: int = DEFAULT_NU_MAX,
                         jobs: int = SWEEP_WORKERS, t_margin: int = DEFAULT_T_MARGIN) -> SweepConfig:
    """Every l, every admissible k, both recurrences, exact mode."""
    points = tuple(
        SweepPoint(l, k, nu_min, nu_max, t_margin=t_margin)
        for l, ks in sorted(K_SETS.items()) for k in ks
    )
    return SweepConfig(points, jobs)


def numeric_sweep_config(zs, nu_min: int, nu_max: int, truncation: Optional[int] = None,
                         prec_bits: int = DEFAULT_PREC_BITS, jobs: int = SWEEP_WORKERS,
                         ls: tuple[int, ...] = (0, 1, 2)) -> SweepConfig:
    """Every admissible (l, k) at each point z, both recurrences, numeric mode."""
    points = tuple(
        SweepPoint(l, k, nu_min, nu_max, mode="numeric", z=z, truncation=truncation, prec_bits=prec_bits)
        for z in zs for l in ls for k in K_SETS[l]
    )
    return SweepConfig(points, jobs)


def _exact_task(which: str, l: int, k: int, nu: int, T: int, matrices: RecurrenceMatrices) -> list[CheckReport]:
    return [verify_exact_one(which, l, k, nu, T, matrices)]


def _numeric_task(which: str, spec: NumericCheckSpec, matrices: RecurrenceMatrices) -> list[CheckReport]:
    return [verify_numeric(spec, which, matrices)]


def sweep(config: SweepConfig, matrices: RecurrenceMatrices = DEFAULT_MATRICES,
          jobs: Optional[int] = None) -> list[CheckReport]:
    """Run every check the config names; reports come back sorted by check_id.

    A check that raises becomes a fail report; the sweep always completes.
    """
    start = now()
    runner = SweepRunner(jobs if jobs is not None else config.jobs)
    for point in config.points:
        spec = point.spec()
        for nu in spec.nus():
            T = spec.truncation_for(nu)
            for which in point.equations:
                params = {"l": point.l, "k": point.k, "nu": nu, "T": T, "mode": point.mode}
                if point.mode == "exact":
                    check_id = f"{which}/exact/l{point.l}/k{point.k}/nu{nu:03d}"
                    run = partial(_exact_task, which, point.l, point.k, nu, T, matrices)
                else:
                    numeric = NumericCheckSpec(point.l, point.k, nu, point.point(), point.truncation, point.t_margin)
                    check_id = f"{which}/numeric/l{point.l}/k{point.k}/nu{nu:03d}/z={point.z}"
                    params["z"] = str(point.z)
                    run = partial(_numeric_task, which, numeric, matrices)
                runner.submit(check_id, params, run, priority=nu)

    reports = runner.run()
    failed = sum(1 for r in reports if not r.passed)
    log(f"[SWEEP] {len(reports)} checks, {failed} failed, {now() - start:.1f}s")
    return reports
