"""Router-occupancy placement matrices and core maps.

A placement matrix marks which routers of an n x m grid hold one
origin-destination core pair. The named patterns (saturated rectangle,
square, X-shape, identity diagonal, generalized permutation, uniform
random) are the spatial layouts whose congestion behavior the analytic
module characterizes in closed form. ``realize`` turns a matrix plus a
paired workload into a concrete logical-to-physical core map.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError, ValidationError
from .mesh import CoreId, MeshConfig, RouterCoord
from .rng import SplitMix64
from .workload import WorkloadSpec


@dataclass(frozen=True)
class PlacementMatrix:
    """Binary router-occupancy matrix; entry (i, j) = 1 places one
    origin-destination core pair at router row i, column j (1-based)."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValidationError("placement matrix must be non-empty")
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise ValidationError("placement matrix rows differ in length")
            for v in row:
                if v not in (0, 1):
                    raise ValidationError("placement matrix entries must be 0 or 1")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def m(self) -> int:
        return len(self.entries[0])

    @property
    def pair_count(self) -> int:
        return sum(sum(row) for row in self.entries)

    def occupied(self) -> list[RouterCoord]:
        """Occupied routers in row-major order."""
        return [
            RouterCoord(i + 1, j + 1)
            for i, row in enumerate(self.entries)
            for j, v in enumerate(row)
            if v
        ]

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.entries)

    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(row[j] for row in self.entries) for j in range(self.m))


def saturated_rect(n: int, m: int) -> PlacementMatrix:
    """Every router of an n x m grid occupied (M = n*m pairs)."""
    if n < 1 or m < 1:
        raise ValidationError("rectangle dimensions must be >= 1")
    return PlacementMatrix(tuple(tuple(1 for _ in range(m)) for _ in range(n)))


def square(n: int) -> PlacementMatrix:
    """Saturated n x n square (M = n^2 pairs)."""
    return saturated_rect(n, n)


def x_shape(n: int) -> PlacementMatrix:
    """Both diagonals of an n x n grid (M = 2n pairs); n must be even so
    the diagonals do not intersect."""
    if n < 2 or n % 2:
        raise ValidationError("x-shape needs an even grid size >= 2")
    return PlacementMatrix(
        tuple(
            tuple(1 if j == i or j == n - 1 - i else 0 for j in range(n))
            for i in range(n)
        )
    )


def identity_diag(n: int) -> PlacementMatrix:
    """Main diagonal of an n x n grid (M = n pairs)."""
    if n < 1:
        raise ValidationError("diagonal size must be >= 1")
    return PlacementMatrix(
        tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    )


def permutation(n: int, a: int, seed: int) -> PlacementMatrix:
    """Generalized permutation on an n x n grid: binary with every row and
    column summing to ``a`` (M = a*n pairs).

    Built from the banded circulant with bandwidth ``a`` and randomized by
    seeded row and column permutations, which preserve the sums.
    """
    if not 1 <= a <= n:
        raise ValidationError(f"need 1 <= a <= n, got a={a}, n={n}")
    base = [[1 if (j - i) % n < a else 0 for j in range(n)] for i in range(n)]
    rng = SplitMix64(seed)
    row_order = list(range(n))
    col_order = list(range(n))
    rng.shuffle(row_order)
    rng.shuffle(col_order)
    return PlacementMatrix(
        tuple(tuple(base[row_order[i]][col_order[j]] for j in range(n)) for i in range(n))
    )


def random_placement(pairs: int, mesh: MeshConfig, seed: int) -> PlacementMatrix:
    """``pairs`` routers chosen uniformly without replacement from the mesh
    grid, via a seeded Fisher-Yates shuffle. Same seed, same placement."""
    routers = list(mesh.routers())
    if pairs < 1 or pairs > len(routers):
        raise ValidationError(
            f"pair count must be in [1, {len(routers)}], got {pairs}"
        )
    rng = SplitMix64(seed)
    rng.shuffle(routers)
    chosen = set(routers[:pairs])
    return PlacementMatrix(
        tuple(
            tuple(1 if RouterCoord(i, j) in chosen else 0 for j in range(1, mesh.cols + 1))
            for i in range(1, mesh.rows + 1)
        )
    )


_PATTERN_NAMES = ("rect", "square", "xshape", "identity", "permutation", "random")


def make_pattern(
    kind: str,
    *,
    n: int | None = None,
    m: int | None = None,
    a: int | None = None,
    pairs: int | None = None,
    seed: int = 0,
    mesh: MeshConfig | None = None,
) -> PlacementMatrix:
    """Name-based pattern dispatch used by the CLI and file loaders."""
    if kind == "rect":
        if n is None or m is None:
            raise ValidationError("rect needs n and m")
        return saturated_rect(n, m)
    if kind == "square":
        if n is None:
            raise ValidationError("square needs n")
        return square(n)
    if kind == "xshape":
        if n is None:
            raise ValidationError("xshape needs n")
        return x_shape(n)
    if kind == "identity":
        if n is None:
            raise ValidationError("identity needs n")
        return identity_diag(n)
    if kind == "permutation":
        if n is None or a is None:
            raise ValidationError("permutation needs n and a")
        return permutation(n, a, seed)
    if kind == "random":
        if pairs is None or mesh is None:
            raise ValidationError("random needs pairs and a mesh")
        return random_placement(pairs, mesh, seed)
    raise ValidationError(
        f"unknown pattern {kind!r}; expected one of {', '.join(_PATTERN_NAMES)}"
    )


@dataclass(frozen=True)
class CoreMap:
    """Injective map from a workload's logical cores to physical cores."""

    mapping: dict[CoreId, CoreId]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mapping", dict(self.mapping))
        targets = list(self.mapping.values())
        if len(set(targets)) != len(targets):
            raise ValidationError("core map is not injective")

    def __getitem__(self, core: CoreId) -> CoreId:
        return self.mapping[core]

    def get(self, core: CoreId) -> CoreId | None:
        return self.mapping.get(core)

    @staticmethod
    def identity(w: WorkloadSpec) -> "CoreMap":
        """Maps every assigned core to itself (use the workload as placed)."""
        cores = {core for cores in w.assignment.values() for core in cores}
        return CoreMap({core: core for core in cores})


def realize(
    p: PlacementMatrix,
    w: WorkloadSpec,
    mesh: MeshConfig,
    *,
    origin: str | None = None,
    dest: str | None = None,
) -> CoreMap:
    """Map a paired workload onto a placement matrix.

    The k-th origin core and k-th destination core (in assignment order) land
    on the k-th occupied router in row-major order, the origin on the first
    free slot and the destination on the second. Origin and destination
    populations default to the endpoints of the workload's single connection.
    """
    if origin is None or dest is None:
        if len(w.connections) != 1:
            raise ConfigurationError(
                "origin/dest populations must be given explicitly for workloads "
                "without exactly one connection"
            )
        origin = origin or w.connections[0].src
        dest = dest or w.connections[0].dst
    if origin == dest:
        raise ConfigurationError("paired placement needs distinct populations")

    origin_cores = w.assignment.get(origin) or ()
    dest_cores = w.assignment.get(dest) or ()
    routers = p.occupied()
    if len(origin_cores) != len(routers) or len(dest_cores) != len(routers):
        raise ConfigurationError(
            f"placement holds {len(routers)} pairs but workload has "
            f"{len(origin_cores)} origin and {len(dest_cores)} destination cores"
        )
    if p.n > mesh.rows or p.m > mesh.cols:
        raise ConfigurationError(
            f"{p.n}x{p.m} placement does not fit the {mesh.rows}x{mesh.cols} mesh"
        )

    mapping: dict[CoreId, CoreId] = {}
    for k, router in enumerate(routers):
        free = mesh.free_slots(router)
        if len(free) < 2:
            raise ConfigurationError(
                f"router ({router.i},{router.j}) lacks two free slots for a pair"
            )
        mapping[origin_cores[k]] = CoreId(router, free[0])
        mapping[dest_cores[k]] = CoreId(router, free[1])
    return CoreMap(mapping)
