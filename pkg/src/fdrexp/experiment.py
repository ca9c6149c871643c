"""Experiment summary types, hypothesis indexing, and summary validation.

An experiment compares G treatment groups against a single shared control
group across m metrics, using only per-cell sufficient statistics
(mean, variance, sample size) plus the covariance matrix of the control
group's metric means.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "Sidedness",
    "MetricCell",
    "ExperimentSummary",
    "flat_index",
    "group_metric",
    "validate_summary",
]

# Relative tolerance for the control_cov diagonal vs variance/n consistency.
DIAG_RTOL = 1e-9
# Eigenvalue floor for PSD checks, scaled by the largest eigenvalue.
PSD_RTOL = 1e-8


class Sidedness(str, enum.Enum):
    """Which tail(s) of the z distribution count as evidence."""

    TWO = "two"
    RIGHT = "right"
    LEFT = "left"

    @classmethod
    def coerce(cls, value) -> "Sidedness":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"sidedness must be one of {[s.value for s in cls]}, got {value!r}"
            ) from None


@dataclass(frozen=True)
class MetricCell:
    """Sufficient statistics for one (group, metric) cell.

    ``variance`` is the sample variance of unit-level outcomes, not the
    variance of the mean; division by ``n`` happens inside formulas.
    """

    mean: float
    variance: float
    n: int


def flat_index(group: int, metric: int, num_metrics: int) -> int:
    """Flat hypothesis index for treatment ``group`` (1-based) and ``metric``.

    Hypotheses are laid out group-major: indices 0..m-1 compare treatment
    group 1 to control, m..2m-1 compare group 2 to control, and so on.
    """
    if group < 1:
        raise ValueError(f"treatment group must be >= 1, got {group}")
    if not 0 <= metric < num_metrics:
        raise ValueError(f"metric index {metric} out of range for m={num_metrics}")
    return (group - 1) * num_metrics + metric


def group_metric(index: int, num_metrics: int) -> tuple[int, int]:
    """Inverse of :func:`flat_index`: returns (treatment group, metric)."""
    if index < 0:
        raise ValueError(f"hypothesis index must be >= 0, got {index}")
    return index // num_metrics + 1, index % num_metrics


@dataclass(frozen=True)
class ExperimentSummary:
    """Per-cell summary statistics for an MCC experiment.

    Arrays are indexed ``[group, metric]`` with group 0 the control and
    groups 1..G the treatments.  ``control_cov[q, q']`` estimates the
    covariance between the control-group *means* of metrics q and q'
    (so its diagonal is variance/n, not the unit-level variance).
    Instances are immutable and safe to share across threads.
    """

    means: np.ndarray
    variances: np.ndarray
    ns: np.ndarray
    control_cov: np.ndarray
    metric_ids: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        for name in ("means", "variances", "ns", "control_cov"):
            arr = np.array(getattr(self, name), dtype=np.int64 if name == "ns" else float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.means.ndim != 2:
            raise ValueError("means must be a (groups+1, metrics) array")
        if self.means.shape != self.variances.shape or self.means.shape != self.ns.shape:
            raise ValueError("means, variances and ns must share one shape")
        if self.means.shape[0] < 2:
            raise ValueError("need a control group and at least one treatment group")
        m = self.num_metrics
        if self.control_cov.shape != (m, m):
            raise ValueError(
                f"control_cov must be {m}x{m}, got {self.control_cov.shape}"
            )
        if self.metric_ids is not None and len(self.metric_ids) != m:
            raise ValueError("metric_ids length must match the number of metrics")

    @property
    def num_metrics(self) -> int:
        return self.means.shape[1]

    @property
    def num_treatment_groups(self) -> int:
        return self.means.shape[0] - 1

    @property
    def num_hypotheses(self) -> int:
        return self.num_treatment_groups * self.num_metrics

    def cell(self, group: int, metric: int) -> MetricCell:
        return MetricCell(
            mean=float(self.means[group, metric]),
            variance=float(self.variances[group, metric]),
            n=int(self.ns[group, metric]),
        )

    @classmethod
    def from_cells(
        cls,
        cells: Sequence[Sequence[MetricCell]],
        control_cov: np.ndarray,
        metric_ids: Sequence[str] | None = None,
    ) -> "ExperimentSummary":
        means = [[c.mean for c in row] for row in cells]
        variances = [[c.variance for c in row] for row in cells]
        ns = [[c.n for c in row] for row in cells]
        return cls(
            means=np.asarray(means, dtype=float),
            variances=np.asarray(variances, dtype=float),
            ns=np.asarray(ns, dtype=np.int64),
            control_cov=np.asarray(control_cov, dtype=float),
            metric_ids=tuple(metric_ids) if metric_ids is not None else None,
        )


def validate_summary(summary: ExperimentSummary) -> list[str]:
    """Check every summary invariant; returns one message per violation.

    Violations are data, not faults: an empty list means the summary is
    usable by every downstream operation.  The function is pure.
    """
    violations: list[str] = []
    G1, m = summary.means.shape

    for g in range(G1):
        for q in range(m):
            mean = summary.means[g, q]
            var = summary.variances[g, q]
            n = summary.ns[g, q]
            where = f"cell (group={g}, metric={q})"
            if not np.isfinite(mean):
                violations.append(f"{where}: mean is not finite")
            if not np.isfinite(var):
                violations.append(f"{where}: variance is not finite")
            elif var < 0:
                violations.append(f"{where}: variance must be >= 0, got {var}")
            if n < 2:
                violations.append(f"{where}: sample size must be >= 2, got {n}")

    cov = summary.control_cov
    if not np.all(np.isfinite(cov)):
        violations.append("control_cov: entries must be finite")
        return violations

    scale = np.maximum(np.abs(cov), np.abs(cov.T))
    asym = np.abs(cov - cov.T) > DIAG_RTOL * np.maximum(scale, 1e-300)
    for q, q2 in zip(*np.nonzero(np.triu(asym, k=1))):
        violations.append(
            f"control_cov: entry ({q},{q2}) != entry ({q2},{q}) (not symmetric)"
        )

    # Diagonal must match variance(control)/n(control) for each metric.
    expected = summary.variances[0] / summary.ns[0]
    diag = np.diag(cov)
    bad = np.abs(diag - expected) > DIAG_RTOL * np.maximum(np.abs(expected), 1e-300)
    for q in np.nonzero(bad)[0]:
        violations.append(
            f"control_cov: diagonal ({q},{q})={diag[q]!r} != variance/n={expected[q]!r}"
        )

    sym = 0.5 * (cov + cov.T)
    eigs = np.linalg.eigvalsh(sym)
    floor = -PSD_RTOL * max(eigs[-1], 0.0)
    if eigs[0] < floor:
        violations.append(
            f"control_cov: not positive semidefinite (min eigenvalue {eigs[0]!r})"
        )
    return violations
