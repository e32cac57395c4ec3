"""Per-link traffic accounting under dimension-order routing.

For every (origin core, destination core) entry of a workload's message
matrix, the expected bits per timestep are added to each directed link on
the unique X-Y route between the mapped physical cores. Loads on the chip's
parallel meshes are aggregated into one effective link, matching the
aggregate effective bandwidth used by the runtime model.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MappingError
from .mesh import DirectedLink, MeshConfig, route_path
from .placement import CoreMap
from .workload import WorkloadSpec, derive_message_matrix


@dataclass
class LinkLoadMap:
    """Expected bits per timestep on every directed link; absent links
    carry zero."""

    loads: dict[DirectedLink, float]

    def get(self, link: DirectedLink) -> float:
        return self.loads.get(link, 0.0)

    def items_sorted(self) -> list[tuple[DirectedLink, float]]:
        return sorted(self.loads.items(), key=lambda kv: kv[0].sort_key())

    def scaled(self, factor: float) -> "LinkLoadMap":
        return LinkLoadMap({link: v * factor for link, v in self.loads.items()})


@dataclass(frozen=True)
class HeaviestLink:
    """The maximum per-link load; this is the bits-per-step numerator of the
    runtime model's NoC term. ``link`` is None only for traffic-free
    workloads."""

    link: DirectedLink | None
    bits_per_step: float

    @property
    def label(self) -> str:
        if self.link is None:
            return "no-traffic"
        slot = "" if self.link.core_slot is None else f"/{self.link.core_slot}"
        return (
            f"{self.link.kind.label}@({self.link.anchor.i},{self.link.anchor.j}){slot}"
        )


def compute_link_loads(
    w: WorkloadSpec, core_map: CoreMap, mesh: MeshConfig
) -> LinkLoadMap:
    """Accumulate every core pair's bits over its X-Y route.

    Pairs are processed in sorted order so the floating-point result is
    identical run to run.
    """
    matrix = derive_message_matrix(w)
    loads: dict[DirectedLink, float] = {}
    for (origin, dest), flow in sorted(
        matrix.flows.items(), key=lambda kv: (kv[0][0], kv[0][1])
    ):
        phys_origin = core_map.get(origin)
        phys_dest = core_map.get(dest)
        if phys_origin is None or phys_dest is None:
            missing = origin if phys_origin is None else dest
            raise MappingError(
                f"core ({missing.router.i},{missing.router.j},{missing.slot}) "
                "has no physical mapping"
            )
        for link in route_path(phys_origin, phys_dest, mesh):
            loads[link] = loads.get(link, 0.0) + flow.bits
    return LinkLoadMap(loads)


def heaviest_link(l: LinkLoadMap) -> HeaviestLink:
    """Maximum load over all links; ties go to the smallest link under the
    fixed (kind, row, column, slot) order. An empty map yields the zero-load
    no-traffic sentinel."""
    best: DirectedLink | None = None
    best_load = 0.0
    for link, load in l.loads.items():
        if best is None or load > best_load or (
            load == best_load and link.sort_key() < best.sort_key()
        ):
            best, best_load = link, load
    if best is None:
        return HeaviestLink(None, 0.0)
    return HeaviestLink(best, best_load)


def heaviest_router_link(l: LinkLoadMap) -> HeaviestLink:
    """Like heaviest_link but restricted to router-to-router links."""
    router_only = LinkLoadMap(
        {link: v for link, v in l.loads.items() if not link.kind.is_core_side}
    )
    return heaviest_link(router_only)


@dataclass(frozen=True)
class RouterHeatmap:
    """Per-router aggregate outgoing router-to-router load, normalized to
    the grid maximum (all zeros when there is no traffic)."""

    values: tuple[tuple[float, ...], ...]
    max_load: float


def router_heatmap(l: LinkLoadMap, mesh: MeshConfig) -> RouterHeatmap:
    raw = [[0.0] * mesh.cols for _ in range(mesh.rows)]
    for link, load in l.loads.items():
        if link.kind.is_core_side:
            continue
        raw[link.anchor.i - 1][link.anchor.j - 1] += load
    peak = max((v for row in raw for v in row), default=0.0)
    if peak > 0.0:
        values = tuple(tuple(v / peak for v in row) for row in raw)
    else:
        values = tuple(tuple(row) for row in raw)
    return RouterHeatmap(values, peak)
