"""Pessimistic serialized-time oracle.

Where the max-affine estimate assumes perfect overlap of compute and
communication, this oracle assumes none: the busiest core runs its neuron
updates, MACs, and memory reads back to back, then the NoC drains the
heaviest link, then the barrier completes. The result therefore dominates
the estimate term by term, giving a desk-scale stand-in for hardware
measurements in lower-bound and correlation tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import CalibrationParams
from .traffic import HeaviestLink
from .workload import OpCounts


@dataclass(frozen=True)
class OracleTime:
    t_step: float
    compute: float
    comm: float
    barrier: float


def simulate_step(
    oc: OpCounts, hl: HeaviestLink, cal: CalibrationParams
) -> OracleTime:
    """Fully serialized per-step time: barrier + busiest core's summed
    compute + heaviest-link drain. Always >= the max-affine estimate."""
    compute = max(
        (
            ops.dend_ops * cal.t_dendop
            + ops.syn_ops * cal.t_synop
            + ops.synmem_reads * cal.t_synmem_read
            for ops in oc.per_core.values()
        ),
        default=0.0,
    )
    comm = hl.bits_per_step / cal.link_bandwidth
    return OracleTime(
        t_step=cal.t_barrier + compute + comm,
        compute=compute,
        comm=comm,
        barrier=cal.t_barrier,
    )
