"""2D mesh topology: routers, core slots, directed links, and X-Y routing.

Coordinates are 1-based with row 1 at the top and column 1 at the left, so
"up" means decreasing row index. Router-to-router links exist only between
lattice neighbors (no wraparound). The two physical meshes of the chip are
aggregated into one set of effective links; the calibration bandwidth is the
matching aggregate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

from .errors import CoordinateError, ValidationError


class LinkKind(enum.IntEnum):
    """Directed link families, in the fixed order used for tie-breaking."""

    CORE_TO_ROUTER = 0
    ROUTER_TO_CORE = 1
    ROUTER_LEFT = 2
    ROUTER_RIGHT = 3
    ROUTER_UP = 4
    ROUTER_DOWN = 5

    @property
    def label(self) -> str:
        return _KIND_LABELS[self]

    @property
    def is_core_side(self) -> bool:
        return self in (LinkKind.CORE_TO_ROUTER, LinkKind.ROUTER_TO_CORE)


_KIND_LABELS = {
    LinkKind.CORE_TO_ROUTER: "core_to_router",
    LinkKind.ROUTER_TO_CORE: "router_to_core",
    LinkKind.ROUTER_LEFT: "router_left",
    LinkKind.ROUTER_RIGHT: "router_right",
    LinkKind.ROUTER_UP: "router_up",
    LinkKind.ROUTER_DOWN: "router_down",
}

KIND_BY_LABEL = {label: kind for kind, label in _KIND_LABELS.items()}


@dataclass(frozen=True, order=True)
class RouterCoord:
    """Router position: i = row (1 = top), j = column (1 = left)."""

    i: int
    j: int


@dataclass(frozen=True, order=True)
class CoreId:
    """A core slot attached to a router."""

    router: RouterCoord
    slot: int


@dataclass(frozen=True, order=True)
class DirectedLink:
    """One directed effective link.

    ``anchor`` is the router the link departs from (router-to-router and
    router-to-core kinds) or the router serving the core (core-to-router).
    ``core_slot`` identifies the core-side link group and is None for
    router-to-router kinds.
    """

    kind: LinkKind
    anchor: RouterCoord
    core_slot: int | None = None

    def sort_key(self) -> tuple:
        slot = -1 if self.core_slot is None else self.core_slot
        return (int(self.kind), self.anchor.i, self.anchor.j, slot)


@dataclass(frozen=True)
class MeshConfig:
    """Chip geometry. The single-chip default is 8 rows x 4 columns of
    routers with 4 cores each (128 cores) and 2 aggregated parallel meshes.

    ``core_link_sharing`` is the number of core slots sharing one effective
    core<->router link pair; the default of 1 gives every core its own
    effective links, which reproduces the per-core load accounting used by
    the analytic formulas. Raise it for sensitivity studies.
    """

    rows: int = 8
    cols: int = 4
    cores_per_router: int = 4
    parallel_meshes: int = 2
    reserved_slots: frozenset[CoreId] = field(default_factory=frozenset)
    core_link_sharing: int = 1

    def __post_init__(self) -> None:
        for name in ("rows", "cols", "cores_per_router", "parallel_meshes",
                     "core_link_sharing"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be >= 1")
        object.__setattr__(self, "reserved_slots", frozenset(self.reserved_slots))
        for core in self.reserved_slots:
            self.validate_core(core, check_reserved=False)

    # -- geometry helpers -------------------------------------------------

    def in_bounds(self, coord: RouterCoord) -> bool:
        return 1 <= coord.i <= self.rows and 1 <= coord.j <= self.cols

    def validate_router(self, coord: RouterCoord) -> None:
        if not self.in_bounds(coord):
            raise CoordinateError(
                f"router ({coord.i},{coord.j}) outside {self.rows}x{self.cols} mesh"
            )

    def validate_core(self, core: CoreId, *, check_reserved: bool = True) -> None:
        self.validate_router(core.router)
        if not 0 <= core.slot < self.cores_per_router:
            raise CoordinateError(
                f"slot {core.slot} outside [0, {self.cores_per_router}) at "
                f"router ({core.router.i},{core.router.j})"
            )
        if check_reserved and core in self.reserved_slots:
            raise CoordinateError(
                f"core ({core.router.i},{core.router.j},{core.slot}) is reserved"
            )

    def routers(self) -> Iterator[RouterCoord]:
        for i in range(1, self.rows + 1):
            for j in range(1, self.cols + 1):
                yield RouterCoord(i, j)

    def cores(self) -> Iterator[CoreId]:
        """All placeable cores, row-major, skipping reserved slots."""
        for router in self.routers():
            for slot in range(self.cores_per_router):
                core = CoreId(router, slot)
                if core not in self.reserved_slots:
                    yield core

    def free_slots(self, router: RouterCoord) -> list[int]:
        return [
            s
            for s in range(self.cores_per_router)
            if CoreId(router, s) not in self.reserved_slots
        ]

    @property
    def core_count(self) -> int:
        return self.rows * self.cols * self.cores_per_router - len(self.reserved_slots)

    def core_link(self, core: CoreId, kind: LinkKind) -> DirectedLink:
        """Effective core-side link for a core, honoring the sharing factor."""
        group = core.slot // self.core_link_sharing
        return DirectedLink(kind, core.router, group)


def single_chip() -> MeshConfig:
    """The default single-chip mesh: 8x4 routers, 4 cores each."""
    return MeshConfig()


def route_path(src: CoreId, dst: CoreId, mesh: MeshConfig) -> list[DirectedLink]:
    """Unique dimension-order (X-Y) route from src core to dst core.

    The path is core-to-router, then horizontal router hops toward the
    destination column, then vertical hops toward the destination row, then
    router-to-core. Horizontal hops strictly precede vertical hops. A
    same-router pair yields just the two core-side links.
    """
    mesh.validate_core(src, check_reserved=False)
    mesh.validate_core(dst, check_reserved=False)

    path = [mesh.core_link(src, LinkKind.CORE_TO_ROUTER)]
    i, j = src.router.i, src.router.j
    step = 1 if dst.router.j > j else -1
    kind = LinkKind.ROUTER_RIGHT if step > 0 else LinkKind.ROUTER_LEFT
    while j != dst.router.j:
        path.append(DirectedLink(kind, RouterCoord(i, j)))
        j += step
    step = 1 if dst.router.i > i else -1
    kind = LinkKind.ROUTER_DOWN if step > 0 else LinkKind.ROUTER_UP
    while i != dst.router.i:
        path.append(DirectedLink(kind, RouterCoord(i, j)))
        i += step
    path.append(mesh.core_link(dst, LinkKind.ROUTER_TO_CORE))
    return path
