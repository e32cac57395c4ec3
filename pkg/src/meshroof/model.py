"""Max-affine per-timestep runtime estimate and calibration fitting.

The estimated time per step is the maximum of five resource terms: neuron
updates, synaptic MACs, and synaptic memory reads on the busiest core for
each (independently), the heaviest NoC link's bits over the effective link
bandwidth, and the barrier synchronization floor. The maximum is a lower
bound: real execution overlaps these imperfectly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import FitError, ValidationError
from .traffic import HeaviestLink
from .workload import DEFAULT_INDEX_BITS, DEFAULT_WORD_WIDTH, OpCounts

TERM_ORDER = ("dendop", "synop", "synmem", "noc", "barrier")
NEAR_TIE_RELATIVE_TOL = 0.05


@dataclass(frozen=True)
class CalibrationParams:
    """Effective rates measured (or synthesized) from the microbenchmark
    suite, plus the packing constants the op-count derivation assumes.

    Units: seconds per operation, bits per second, seconds. The link
    bandwidth is the aggregate over the chip's parallel meshes.
    """

    t_dendop: float
    t_synop: float
    t_synmem_read: float
    link_bandwidth: float
    t_barrier: float
    word_width: int = DEFAULT_WORD_WIDTH
    index_bits: int = DEFAULT_INDEX_BITS
    bits_per_message_default: int = 32

    def __post_init__(self) -> None:
        for name in (
            "t_dendop", "t_synop", "t_synmem_read", "link_bandwidth",
            "t_barrier", "word_width", "index_bits", "bits_per_message_default",
        ):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be strictly positive")


def synthetic_calibration() -> CalibrationParams:
    """Placeholder rates for desk experiments. These are SYNTHETIC numbers
    chosen to exercise every bottleneck regime (the bandwidth is low enough
    that the traffic-heavy workloads really are NoC-bound); they are not
    measurements of any hardware."""
    return CalibrationParams(
        t_dendop=10e-9,
        t_synop=40e-9,
        t_synmem_read=10e-9,
        link_bandwidth=2e8,
        t_barrier=1e-6,
    )


@dataclass(frozen=True)
class RuntimeEstimate:
    """The five term values, their maximum, the first term attaining it, and
    every term within the near-tie tolerance of the maximum."""

    t_step: float
    terms: dict[str, float]
    bottleneck: str
    near_ties: frozenset[str]


def estimate(
    oc: OpCounts, hl: HeaviestLink, cal: CalibrationParams
) -> RuntimeEstimate:
    """Evaluate the max-affine model for one workload/placement.

    The per-core maxima for the three compute terms are taken independently:
    each is the busiest core for that operation, not one core's totals.
    """
    terms = {
        "dendop": oc.max_dend_ops * cal.t_dendop,
        "synop": oc.max_syn_ops * cal.t_synop,
        "synmem": oc.max_synmem_reads * cal.t_synmem_read,
        "noc": hl.bits_per_step / cal.link_bandwidth,
        "barrier": cal.t_barrier,
    }
    t_step = max(terms.values())
    bottleneck = next(name for name in TERM_ORDER if terms[name] == t_step)
    near = frozenset(
        name
        for name in TERM_ORDER
        if terms[name] >= t_step * (1.0 - NEAR_TIE_RELATIVE_TOL)
    )
    return RuntimeEstimate(t_step, terms, bottleneck, near)


class RooflinePoint(NamedTuple):
    """Roofline coordinates: synaptic MACs per NoC bit on x, achieved MACs
    per second on y. Traffic-free workloads sit at infinite intensity."""

    intensity: float
    attainable: float


def roofline_point(
    oc: OpCounts, hl: HeaviestLink, cal: CalibrationParams
) -> RooflinePoint:
    n_so = oc.max_syn_ops
    if n_so == 0.0:
        return RooflinePoint(float("inf") if hl.bits_per_step == 0 else 0.0, 0.0)
    intensity = (
        float("inf") if hl.bits_per_step == 0 else n_so / hl.bits_per_step
    )
    t = estimate(oc, hl, cal).t_step
    return RooflinePoint(intensity, n_so / t)


def roofline_curve(intensity: float, cal: CalibrationParams) -> float:
    """Attainable MACs per second at a given intensity: the lower of the
    bandwidth slope and the compute ceiling."""
    ceiling = 1.0 / cal.t_synop
    if intensity == float("inf"):
        return ceiling
    return min(cal.link_bandwidth * intensity, ceiling)


@dataclass(frozen=True)
class MeasurementSeries:
    """(count, mean time per step) pairs from scaling one workload knob;
    counts must be strictly increasing and at least three points long."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        pts = tuple((float(c), float(t)) for c, t in self.points)
        if len(pts) < 3:
            raise ValidationError("a measurement series needs at least 3 points")
        for (c0, _), (c1, _) in zip(pts, pts[1:]):
            if c1 <= c0:
                raise ValidationError("series counts must be strictly increasing")
        object.__setattr__(self, "points", pts)


class RateFit(NamedTuple):
    per_unit_time: float
    offset: float


def fit_effective_rate(series: MeasurementSeries) -> RateFit:
    """Least-squares affine fit time = offset + per_unit_time * count.

    The slope is the effective per-operation time; for bandwidth series
    (counts in bits) the caller inverts it.
    """
    xs = [c for c, _ in series.points]
    ys = [t for _, t in series.points]
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    var_x = sum((x - mean_x) ** 2 for x in xs)
    if var_x == 0.0:
        raise FitError("all counts in the series are equal")
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = cov / var_x
    return RateFit(slope, mean_y - slope * mean_x)


def rate_at_largest_count(series: MeasurementSeries) -> RateFit:
    """The divide-at-the-largest-point estimator: mean time per step at the
    largest count divided by that count. Matches the fit slope when the
    offset is negligible against slope * count."""
    count, time = series.points[-1]
    if count == 0.0:
        raise FitError("largest count is zero")
    return RateFit(time / count, 0.0)
