"""Per-window complexity series over a bit stream, plus anomaly flagging."""

from __future__ import annotations

import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable

from .baselines import linguistic_complexity, topological_entropy
from .complexity import ConvergenceParams, k0_of_window
from .encoding import BitString
from .errors import DomainError, InvalidWindowError

MEASURES = ("k0", "te", "lc")
MAD_SCALE = 1.4826


@dataclass(frozen=True)
class WindowPlan:
    window_bits: int = 512
    stride_bits: int | None = None
    dropped_tail_bits: int = 0

    def __post_init__(self) -> None:
        w = self.window_bits
        if w < 2 or w & (w - 1):
            raise InvalidWindowError(f"window_bits must be a power of two >= 2, got {w}")
        if self.stride_bits is None:
            object.__setattr__(self, "stride_bits", w)
        elif self.stride_bits < 1:
            raise ValueError("stride_bits must be >= 1")


@dataclass(frozen=True)
class WindowRecord:
    index: int
    start_bit: int
    k0: float | None = None
    te: float | None = None
    lc: float | None = None
    anomaly: bool = False


@dataclass(frozen=True)
class WindowSeries:
    plan: WindowPlan
    records: tuple[WindowRecord, ...]
    encoding_tag: str = "raw"
    measures: tuple[str, ...] = MEASURES

    def column(self, measure: str) -> list[float | None]:
        return [getattr(r, measure) for r in self.records]


@dataclass(frozen=True)
class MeasureConfig:
    iso_depth: int = 2
    k_mode: str = "unit"
    weighting: str = "normalized"
    params: ConvergenceParams = field(default_factory=ConvergenceParams)


def segment(bits: BitString, plan: WindowPlan) -> tuple[list[BitString], WindowPlan]:
    """Cut full windows at every stride; the plan comes back with the tail size."""
    n = len(bits)
    w, stride = plan.window_bits, plan.stride_bits
    if n < w:
        return [], replace(plan, dropped_tail_bits=n)
    count = (n - w) // stride + 1
    windows = [bits[i * stride:i * stride + w] for i in range(count)]
    covered = (count - 1) * stride + w
    return windows, replace(plan, dropped_tail_bits=n - covered)


def _measure(args: tuple[BitString, tuple[str, ...], MeasureConfig]) -> dict:
    window, measures, cfg = args
    out: dict = {}
    if "k0" in measures:
        out["k0"] = k0_of_window(window, cfg.iso_depth, cfg.k_mode, cfg.params, cfg.weighting).K0
    if "te" in measures:
        out["te"] = topological_entropy(window, 2)
    if "lc" in measures:
        out["lc"] = linguistic_complexity(window, 2).lc
    return out


def analyze(
    bits: BitString,
    plan: WindowPlan | None = None,
    measures: Iterable[str] = MEASURES,
    config: MeasureConfig | None = None,
    encoding_tag: str = "raw",
    workers: int = 1,
) -> WindowSeries:
    plan = plan or WindowPlan()
    config = config or MeasureConfig()
    measures = tuple(m for m in MEASURES if m in set(measures))
    if not measures:
        raise ValueError(f"at least one measure from {MEASURES} is required")
    windows, plan = segment(bits, plan)
    jobs = [(w, measures, config) for w in windows]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_measure, jobs))
    else:
        results = [_measure(j) for j in jobs]
    records = tuple(
        WindowRecord(index=i, start_bit=i * plan.stride_bits, **vals)
        for i, vals in enumerate(results)
    )
    return WindowSeries(plan, records, encoding_tag, measures)


def robust_outliers(values: list[float], tau: float = 3.5) -> list[bool]:
    """Median/MAD outlier mask; with zero MAD only values off the median count."""
    if not values:
        raise DomainError("cannot flag anomalies in an empty series")
    if tau <= 0:
        raise ValueError("tau must be > 0")
    med = statistics.median(values)
    mad = MAD_SCALE * statistics.median(abs(v - med) for v in values)
    if mad == 0:
        return [v != med for v in values]
    return [abs(v - med) > tau * mad for v in values]


def flag_anomalies(series: WindowSeries, tau: float = 3.5, measure: str = "k0") -> WindowSeries:
    if not series.records:
        raise DomainError("cannot flag anomalies in an empty series")
    values = series.column(measure)
    if any(v is None for v in values):
        raise ValueError(f"measure {measure!r} was not computed for this series")
    mask = robust_outliers(values, tau)
    records = tuple(replace(r, anomaly=f) for r, f in zip(series.records, mask))
    return replace(series, records=records)
