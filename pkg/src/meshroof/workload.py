"""Workload description and per-timestep operation accounting.

A workload is a set of neuron populations, weighted connections between
them, and an assignment of each population onto cores. From that we derive
expected per-core operation counts (neuron updates, synaptic MACs, synaptic
memory reads) and the expected message volume between every pair of cores.

Counts are expectations: a population's activity rate scales synaptic work
and traffic linearly, while neuron updates happen every step regardless.
All derivations are closed-form per core pair, so multi-thousand-neuron
workloads cost no more than their core count squared.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .errors import ConfigurationError, InfeasibleWorkloadError, ValidationError
from .mesh import CoreId, MeshConfig, RouterCoord, single_chip
from .rng import hash_uniform

DEFAULT_WORD_WIDTH = 64
DEFAULT_INDEX_BITS = 16
DEFAULT_NEURON_CAPACITY = 8192
DEFAULT_MEMORY_BUDGET_BYTES = 128 * 1024


class Encoding(enum.Enum):
    """Synaptic weight storage scheme. Dense stores every entry including
    zeros; sparse stores only nonzeros plus an index per entry."""

    DENSE = "dense"
    SPARSE = "sparse"


# ---------------------------------------------------------------------------
# Connectivity patterns
#
# A pattern answers one question efficiently: for a block of source rows and
# a slice of destination columns, how many rows have each nonzero count?
# Everything else (SynOps, memory reads, messages) derives from that.
# ---------------------------------------------------------------------------


def _count_congruent(cols: range, rem: int, tile: int) -> int:
    """Number of integers in ``cols`` congruent to ``rem`` modulo ``tile``."""

    def upto(stop: int) -> int:
        return (stop - rem + tile - 1) // tile

    return upto(cols.stop) - upto(cols.start)


@dataclass(frozen=True)
class AllOnes:
    """Every weight nonzero."""

    name = "all_ones"

    def row_nnz_groups(self, rows: range, cols: range, n_cols: int) -> dict[int, int]:
        return {len(cols): len(rows)} if rows else {}

    def row_has_target(self, row: int, cols: range, n_cols: int) -> bool:
        return len(cols) > 0


@dataclass(frozen=True)
class Identity:
    """Nonzero exactly on the main diagonal."""

    name = "identity"

    def row_nnz_groups(self, rows: range, cols: range, n_cols: int) -> dict[int, int]:
        hit = len(range(max(rows.start, cols.start), min(rows.stop, cols.stop)))
        groups: dict[int, int] = {}
        if hit:
            groups[1] = hit
        miss = len(rows) - hit
        if miss:
            groups[0] = miss
        return groups

    def row_has_target(self, row: int, cols: range, n_cols: int) -> bool:
        return row in cols


@dataclass(frozen=True)
class TiledIdentity:
    """Identity tiles of size ``tile``: entry (i, j) is nonzero iff
    i = j modulo tile. The tile must divide both population sizes."""

    tile: int

    name = "tiled_identity"

    def __post_init__(self) -> None:
        if self.tile < 1:
            raise ValidationError("tile must be >= 1")

    def row_nnz_groups(self, rows: range, cols: range, n_cols: int) -> dict[int, int]:
        groups: dict[int, int] = {}
        for rem in range(self.tile):
            n_rows = _count_congruent(rows, rem, self.tile)
            if n_rows:
                nnz = _count_congruent(cols, rem, self.tile)
                groups[nnz] = groups.get(nnz, 0) + n_rows
        return groups

    def row_has_target(self, row: int, cols: range, n_cols: int) -> bool:
        return _count_congruent(cols, row % self.tile, self.tile) > 0


@dataclass(frozen=True)
class RandomDensity:
    """Independent Bernoulli nonzeros at the given density, realized by a
    portable stateless hash of (seed, flat index). The matrix is a pure
    function of the seed."""

    density: float
    seed: int

    name = "random_density"

    def __post_init__(self) -> None:
        if not 0.0 <= self.density <= 1.0:
            raise ValidationError("density must be in [0, 1]")

    def _nonzero(self, row: int, col: int, n_cols: int) -> bool:
        return hash_uniform(self.seed, row * n_cols + col) < self.density

    def row_nnz_groups(self, rows: range, cols: range, n_cols: int) -> dict[int, int]:
        groups: dict[int, int] = {}
        for row in rows:
            nnz = sum(1 for col in cols if self._nonzero(row, col, n_cols))
            groups[nnz] = groups.get(nnz, 0) + 1
        return groups

    def row_has_target(self, row: int, cols: range, n_cols: int) -> bool:
        return any(self._nonzero(row, col, n_cols) for col in cols)


ConnectivityPattern = AllOnes | Identity | TiledIdentity | RandomDensity


# ---------------------------------------------------------------------------
# Workload description
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Population:
    """A group of neurons with a shared expected activity rate."""

    id: str
    neurons: int
    spikes_per_step: float = 1.0
    bits_per_message: int = 32

    def __post_init__(self) -> None:
        if self.neurons < 1:
            raise ValidationError(f"population {self.id!r}: neurons must be >= 1")
        if not 0.0 <= self.spikes_per_step <= 1.0:
            raise ValidationError(
                f"population {self.id!r}: spikes_per_step must be in [0, 1]"
            )
        if self.bits_per_message < 1:
            raise ValidationError(
                f"population {self.id!r}: bits_per_message must be >= 1"
            )


@dataclass(frozen=True)
class Connection:
    src: str
    dst: str
    encoding: Encoding
    weight_bits: int
    pattern: ConnectivityPattern

    def __post_init__(self) -> None:
        if not 1 <= self.weight_bits <= 8:
            raise ValidationError("weight_bits must be in [1, 8]")


@dataclass(frozen=True)
class WorkloadSpec:
    """Populations, connections, and the population-to-core assignment.

    Each population's neurons are split evenly across its listed cores, with
    the remainder going to the earliest-listed cores, in contiguous index
    ranges.
    """

    populations: tuple[Population, ...]
    connections: tuple[Connection, ...]
    assignment: dict[str, tuple[CoreId, ...]]
    neuron_capacity: int = DEFAULT_NEURON_CAPACITY
    workload_id: str = "workload"

    def __post_init__(self) -> None:
        object.__setattr__(self, "populations", tuple(self.populations))
        object.__setattr__(self, "connections", tuple(self.connections))
        object.__setattr__(
            self,
            "assignment",
            {pid: tuple(cores) for pid, cores in self.assignment.items()},
        )

    def population(self, pid: str) -> Population:
        for pop in self.populations:
            if pop.id == pid:
                return pop
        raise ConfigurationError(f"unknown population {pid!r}")

    def fragments(self, pid: str) -> list[tuple[CoreId, range]]:
        """Contiguous neuron ranges hosted by each assigned core."""
        pop = self.population(pid)
        cores = self.assignment.get(pid)
        if not cores:
            raise ConfigurationError(f"population {pid!r} has no assigned cores")
        base, extra = divmod(pop.neurons, len(cores))
        out = []
        start = 0
        for idx, core in enumerate(cores):
            size = base + (1 if idx < extra else 0)
            out.append((core, range(start, start + size)))
            start += size
        return out

    def validate(self) -> None:
        seen = set()
        for pop in self.populations:
            if pop.id in seen:
                raise ConfigurationError(f"duplicate population id {pop.id!r}")
            seen.add(pop.id)
        for pid in self.assignment:
            if pid not in seen:
                raise ConfigurationError(f"assignment names unknown population {pid!r}")
        hosted: dict[CoreId, int] = {}
        for pop in self.populations:
            cores = self.assignment.get(pop.id)
            if not cores:
                raise ConfigurationError(f"population {pop.id!r} is unassigned")
            if len(set(cores)) != len(cores):
                raise ConfigurationError(
                    f"population {pop.id!r} lists a core more than once"
                )
            for core, rng in self.fragments(pop.id):
                hosted[core] = hosted.get(core, 0) + len(rng)
        for core, count in hosted.items():
            if count > self.neuron_capacity:
                raise ConfigurationError(
                    f"core ({core.router.i},{core.router.j},{core.slot}) hosts "
                    f"{count} neurons, capacity is {self.neuron_capacity}"
                )
        for conn in self.connections:
            src = self.population(conn.src)
            dst = self.population(conn.dst)
            if isinstance(conn.pattern, TiledIdentity):
                tile = conn.pattern.tile
                if src.neurons % tile or dst.neurons % tile:
                    raise ConfigurationError(
                        f"tile {tile} does not divide populations "
                        f"{conn.src!r} ({src.neurons}) and {conn.dst!r} ({dst.neurons})"
                    )


# ---------------------------------------------------------------------------
# Derived counts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoreOps:
    dend_ops: float = 0.0
    syn_ops: float = 0.0
    synmem_reads: float = 0.0


@dataclass
class OpCounts:
    """Expected per-timestep operation counts for every involved core."""

    per_core: dict[CoreId, CoreOps]

    def _max(self, attr: str) -> float:
        return max((getattr(ops, attr) for ops in self.per_core.values()), default=0.0)

    @property
    def max_dend_ops(self) -> float:
        return self._max("dend_ops")

    @property
    def max_syn_ops(self) -> float:
        return self._max("syn_ops")

    @property
    def max_synmem_reads(self) -> float:
        return self._max("synmem_reads")


@dataclass(frozen=True)
class MessageFlow:
    messages: float
    bits: float


@dataclass
class MessageMatrix:
    """Expected messages and bits per timestep for every (origin core,
    destination core) pair with nonzero traffic."""

    flows: dict[tuple[CoreId, CoreId], MessageFlow]

    @property
    def total_messages(self) -> float:
        return sum(f.messages for f in self.flows.values())

    @property
    def total_bits(self) -> float:
        return sum(f.bits for f in self.flows.values())


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def derive_op_counts(
    w: WorkloadSpec,
    *,
    word_width: int = DEFAULT_WORD_WIDTH,
    index_bits: int = DEFAULT_INDEX_BITS,
) -> OpCounts:
    """Expected per-core DendOps, SynOps, and SynMem reads per timestep.

    Every hosted neuron costs one DendOp per step. For each expected
    incoming spike at a destination core, SynOps count the nonzero weights
    of the spike's row slice there, and SynMem reads count the word fetches
    to scan the stored row slice: dense encoding scans every entry at
    weight_bits per entry, sparse scans only nonzeros at
    (weight_bits + index_bits) per entry. Word fetches round up per row.
    """
    w.validate()
    dend: dict[CoreId, float] = {}
    syn: dict[CoreId, float] = {}
    smr: dict[CoreId, float] = {}

    for pop in w.populations:
        for core, rng in w.fragments(pop.id):
            dend[core] = dend.get(core, 0.0) + len(rng)

    for conn in w.connections:
        src = w.population(conn.src)
        dst = w.population(conn.dst)
        rate = src.spikes_per_step
        if conn.encoding is Encoding.SPARSE:
            entry_bits = conn.weight_bits + index_bits
        for _, rows in w.fragments(conn.src):
            if not rows:
                continue
            for d_core, cols in w.fragments(conn.dst):
                if not cols:
                    continue
                groups = conn.pattern.row_nnz_groups(rows, cols, dst.neurons)
                dense_words = _ceil_div(len(cols) * conn.weight_bits, word_width)
                for nnz, n_rows in groups.items():
                    syn[d_core] = syn.get(d_core, 0.0) + rate * n_rows * nnz
                    if nnz == 0:
                        continue  # no message arrives, nothing is scanned
                    if conn.encoding is Encoding.DENSE:
                        words = dense_words
                    else:
                        words = _ceil_div(nnz * entry_bits, word_width)
                    smr[d_core] = smr.get(d_core, 0.0) + rate * n_rows * words

    cores = set(dend) | set(syn) | set(smr)
    return OpCounts(
        {
            core: CoreOps(
                dend.get(core, 0.0), syn.get(core, 0.0), smr.get(core, 0.0)
            )
            for core in cores
        }
    )


def derive_message_matrix(w: WorkloadSpec) -> MessageMatrix:
    """Expected per-core-pair message and bit volume per timestep.

    Each expected spiking neuron sends one message to every destination core
    on which it has at least one nonzero target (source-side replication;
    there is no in-network multicast). A neuron reaching the same core
    through several connections still sends one message to it.
    """
    w.validate()
    acc: dict[tuple[CoreId, CoreId], list[float]] = {}

    by_src: dict[str, list[Connection]] = {}
    for conn in w.connections:
        by_src.setdefault(conn.src, []).append(conn)

    for src_pid, conns in by_src.items():
        src = w.population(src_pid)
        rate = src.spikes_per_step
        if rate == 0.0:
            continue
        bpm = src.bits_per_message

        def add(o_core: CoreId, d_core: CoreId, count: float) -> None:
            cell = acc.setdefault((o_core, d_core), [0.0, 0.0])
            cell[0] += count
            cell[1] += count * bpm

        # Destination cores reachable through more than one connection force
        # per-row deduplication; otherwise closed-form counts suffice.
        targeting: dict[CoreId, int] = {}
        for conn in conns:
            for d_core, cols in w.fragments(conn.dst):
                if cols:
                    targeting[d_core] = targeting.get(d_core, 0) + 1

        if all(n == 1 for n in targeting.values()):
            for conn in conns:
                dst = w.population(conn.dst)
                for o_core, rows in w.fragments(conn.src):
                    if not rows:
                        continue
                    for d_core, cols in w.fragments(conn.dst):
                        if not cols:
                            continue
                        groups = conn.pattern.row_nnz_groups(rows, cols, dst.neurons)
                        senders = sum(n for nnz, n in groups.items() if nnz > 0)
                        if senders:
                            add(o_core, d_core, rate * senders)
        else:
            dst_slices = [
                (conn, w.population(conn.dst).neurons, d_core, cols)
                for conn in conns
                for d_core, cols in w.fragments(conn.dst)
                if cols
            ]
            for o_core, rows in w.fragments(src_pid):
                for row in rows:
                    reached = set()
                    for conn, n_cols, d_core, cols in dst_slices:
                        if d_core not in reached and conn.pattern.row_has_target(
                            row, cols, n_cols
                        ):
                            reached.add(d_core)
                    for d_core in reached:
                        add(o_core, d_core, rate)

    return MessageMatrix({key: MessageFlow(m, b) for key, (m, b) in acc.items()})


def synaptic_memory_bits(
    w: WorkloadSpec, *, index_bits: int = DEFAULT_INDEX_BITS
) -> dict[CoreId, int]:
    """Synaptic storage per destination core, in bits.

    Dense connections store every entry of the hosted column slice at
    weight_bits per entry; sparse connections store nonzeros only, at
    (weight_bits + index_bits) per entry.
    """
    w.validate()
    usage: dict[CoreId, int] = {}
    for conn in w.connections:
        src = w.population(conn.src)
        dst = w.population(conn.dst)
        for d_core, cols in w.fragments(conn.dst):
            if not cols:
                continue
            if conn.encoding is Encoding.DENSE:
                bits = src.neurons * len(cols) * conn.weight_bits
            else:
                nnz = 0
                for _, rows in w.fragments(conn.src):
                    groups = conn.pattern.row_nnz_groups(rows, cols, dst.neurons)
                    nnz += sum(k * n for k, n in groups.items())
                bits = nnz * (conn.weight_bits + index_bits)
            usage[d_core] = usage.get(d_core, 0) + bits
    return usage


# ---------------------------------------------------------------------------
# Workload generators
# ---------------------------------------------------------------------------


def _take_cores(pool: Iterable[CoreId], count: int, what: str) -> list[CoreId]:
    cores = list(pool)[:count]
    if len(cores) < count:
        raise ConfigurationError(f"mesh cannot host {count} {what} cores")
    return cores


def _bottom_half_cores(mesh: MeshConfig) -> Iterable[CoreId]:
    for i in range(mesh.rows, mesh.rows // 2, -1):
        for j in range(1, mesh.cols + 1):
            for slot in mesh.free_slots(RouterCoord(i, j)):
                yield CoreId(RouterCoord(i, j), slot)


def _top_half_cores(mesh: MeshConfig) -> Iterable[CoreId]:
    for i in range(1, mesh.rows // 2 + 1):
        for j in range(1, mesh.cols + 1):
            for slot in mesh.free_slots(RouterCoord(i, j)):
                yield CoreId(RouterCoord(i, j), slot)


def _pair_slots(mesh: MeshConfig) -> tuple[CoreId, CoreId]:
    router = RouterCoord(1, 1)
    free = mesh.free_slots(router)
    if len(free) < 2:
        raise ConfigurationError("router (1,1) lacks two free slots")
    return CoreId(router, free[0]), CoreId(router, free[1])


def gen_barrier(mesh: MeshConfig | None = None) -> WorkloadSpec:
    """Two one-neuron cores, non-spiking: per-step cost is pure barrier
    synchronization plus one trivial neuron update on each core."""
    mesh = mesh or single_chip()
    origin, dest = _pair_slots(mesh)
    return WorkloadSpec(
        populations=(
            Population("origin", 1, spikes_per_step=0.0),
            Population("dest", 1, spikes_per_step=0.0),
        ),
        connections=(
            Connection("origin", "dest", Encoding.SPARSE, 8, Identity()),
        ),
        assignment={"origin": (origin,), "dest": (dest,)},
        workload_id="microbench-barrier",
    )


def gen_dendop(n: int, mesh: MeshConfig | None = None) -> WorkloadSpec:
    """Single core with ``n`` non-spiking neurons: n neuron updates per step
    and nothing else."""
    mesh = mesh or single_chip()
    spec = WorkloadSpec(
        populations=(Population("pop", n, spikes_per_step=0.0),),
        connections=(),
        assignment={"pop": (next(iter(mesh.cores())),)},
        workload_id=f"microbench-dendop-n{n}",
    )
    spec.validate()
    return spec


def gen_synop(n: int, mesh: MeshConfig | None = None) -> WorkloadSpec:
    """Core pair joined by a dense all-ones n x n matrix with 1-bit weights:
    n^2 synaptic MACs per step at the destination with minimal memory
    scanning per MAC."""
    mesh = mesh or single_chip()
    origin, dest = _pair_slots(mesh)
    spec = WorkloadSpec(
        populations=(Population("origin", n), Population("dest", n)),
        connections=(
            Connection("origin", "dest", Encoding.DENSE, 1, AllOnes()),
        ),
        assignment={"origin": (origin,), "dest": (dest,)},
        workload_id=f"microbench-synop-n{n}",
    )
    spec.validate()
    return spec


def gen_synmem_read(n: int, mesh: MeshConfig | None = None) -> WorkloadSpec:
    """Core pair joined by a dense-packed identity n x n matrix with 8-bit
    weights: only n MACs per step, but the full zero-heavy rows are scanned,
    so memory reads grow with n^2."""
    mesh = mesh or single_chip()
    origin, dest = _pair_slots(mesh)
    spec = WorkloadSpec(
        populations=(Population("origin", n), Population("dest", n)),
        connections=(
            Connection("origin", "dest", Encoding.DENSE, 8, Identity()),
        ),
        assignment={"origin": (origin,), "dest": (dest,)},
        workload_id=f"microbench-synmem-n{n}",
    )
    spec.validate()
    return spec


def gen_link_bandwidth(
    n: int, m: int, mesh: MeshConfig | None = None
) -> WorkloadSpec:
    """``m`` origin-destination core pairs stacked in the leftmost router
    column, origins in the bottom half and destinations in the top half, so
    all m*n messages per step funnel through the column's middle vertical
    link. Sparse identity weights keep compute negligible."""
    mesh = mesh or single_chip()
    if mesh.rows < 2:
        raise ConfigurationError("link bandwidth workload needs at least 2 rows")

    def column_slots(rows: Iterable[int]) -> list[CoreId]:
        out = []
        for i in rows:
            router = RouterCoord(i, 1)
            out.extend(CoreId(router, s) for s in mesh.free_slots(router))
        return out

    bottom = column_slots(range(mesh.rows, mesh.rows // 2, -1))
    top = column_slots(range(1, mesh.rows // 2 + 1))
    if m > len(bottom) or m > len(top):
        raise ConfigurationError(
            f"column holds at most {min(len(bottom), len(top))} pairs, requested {m}"
        )

    populations = []
    connections = []
    assignment = {}
    for k in range(m):
        o_id, d_id = f"origin{k}", f"dest{k}"
        populations += [Population(o_id, n), Population(d_id, n)]
        connections.append(Connection(o_id, d_id, Encoding.SPARSE, 8, Identity()))
        assignment[o_id] = (bottom[k],)
        assignment[d_id] = (top[k],)

    spec = WorkloadSpec(
        populations=tuple(populations),
        connections=tuple(connections),
        assignment=assignment,
        workload_id=f"microbench-linkbw-n{n}-m{m}",
    )
    spec.validate()
    return spec


def gen_microbenchmark(
    kind: str, mesh: MeshConfig | None = None, **params: int
) -> WorkloadSpec:
    """Dispatch by name: barrier, dendop(n), synop(n), synmem(n),
    linkbw(n, m)."""
    generators = {
        "barrier": gen_barrier,
        "dendop": gen_dendop,
        "synop": gen_synop,
        "synmem": gen_synmem_read,
        "linkbw": gen_link_bandwidth,
    }
    if kind not in generators:
        raise ConfigurationError(f"unknown microbenchmark {kind!r}")
    if kind == "barrier":
        return gen_barrier(mesh)
    return generators[kind](**params, mesh=mesh)


def gen_dense_linear_layer(
    cores: int,
    neurons_per_core: int,
    weight_bits: int,
    mesh: MeshConfig | None = None,
    *,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET_BYTES,
) -> WorkloadSpec:
    """Dense all-ones linear layer with ``cores`` origin and ``cores``
    destination cores, origins in the bottom half of the mesh and
    destinations in the top half.

    Raises InfeasibleWorkloadError when a destination core's dense rows
    exceed the per-core synaptic memory budget.
    """
    mesh = mesh or single_chip()
    n = cores * neurons_per_core
    origin_cores = _take_cores(_bottom_half_cores(mesh), cores, "origin")
    dest_cores = _take_cores(_top_half_cores(mesh), cores, "destination")

    spec = WorkloadSpec(
        populations=(Population("origin", n), Population("dest", n)),
        connections=(
            Connection("origin", "dest", Encoding.DENSE, weight_bits, AllOnes()),
        ),
        assignment={"origin": tuple(origin_cores), "dest": tuple(dest_cores)},
        workload_id=f"dense-c{cores}-npc{neurons_per_core}-wb{weight_bits}",
    )
    spec.validate()

    worst = max(synaptic_memory_bits(spec).values())
    if worst > memory_budget_bytes * 8:
        raise InfeasibleWorkloadError(
            f"dense rows need {worst // 8} bytes per destination core, "
            f"budget is {memory_budget_bytes}"
        )
    return spec


DENSE_SWEEP_CORES = (1, 4, 8, 16, 32, 60)
DENSE_SWEEP_NEURONS_PER_CORE = (1, 16, 32, 64, 128, 256)
DENSE_SWEEP_WEIGHT_BITS = tuple(range(1, 9))


def dense_linear_sweep(
    mesh: MeshConfig | None = None,
    *,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET_BYTES,
) -> list[WorkloadSpec]:
    """The full dense-layer product sweep, memory-feasible configs only."""
    out = []
    for cores in DENSE_SWEEP_CORES:
        for npc in DENSE_SWEEP_NEURONS_PER_CORE:
            for wb in DENSE_SWEEP_WEIGHT_BITS:
                try:
                    out.append(
                        gen_dense_linear_layer(
                            cores, npc, wb, mesh,
                            memory_budget_bytes=memory_budget_bytes,
                        )
                    )
                except InfeasibleWorkloadError:
                    continue
    return out


def gen_tiled_identity(
    origin_cores: int = 8,
    dest_cores: int = 8,
    neurons_per_core: int = 1024,
    mesh: MeshConfig | None = None,
) -> WorkloadSpec:
    """Sparse tiled-identity layer: every origin core's neurons connect to
    every destination core through one identity tile, maximizing traffic at
    minimal compute. Defaults give the 8192 x 8192 matrix of 1024-sized
    tiles."""
    mesh = mesh or single_chip()
    spec = WorkloadSpec(
        populations=(
            Population("origin", origin_cores * neurons_per_core),
            Population("dest", dest_cores * neurons_per_core),
        ),
        connections=(
            Connection(
                "origin", "dest", Encoding.SPARSE, 8,
                TiledIdentity(tile=neurons_per_core),
            ),
        ),
        assignment={
            "origin": tuple(
                _take_cores(_bottom_half_cores(mesh), origin_cores, "origin")
            ),
            "dest": tuple(_take_cores(_top_half_cores(mesh), dest_cores, "destination")),
        },
        workload_id=(
            f"tiled-identity-{origin_cores}x{dest_cores}x{neurons_per_core}"
        ),
    )
    spec.validate()
    return spec


def gen_qubo(
    n: int,
    cores: int,
    checking_rate: float,
    switching_rate: float,
    mesh: MeshConfig | None = None,
) -> tuple[WorkloadSpec, WorkloadSpec]:
    """Recurrent all-to-all population of ``n`` state neurons split over
    ``cores`` cores, filled column-by-column from the bottom-left core.

    Returns (checking stage, switching stage): identical workloads except
    for the stage's expected activity rate. The stages share one traffic
    pattern, so link loads scale linearly with the rate.
    """
    mesh = mesh or single_chip()
    if n < 1:
        raise ValidationError("problem dimension must be >= 1")

    def column_major() -> Iterable[CoreId]:
        for j in range(1, mesh.cols + 1):
            for i in range(mesh.rows, 0, -1):
                router = RouterCoord(i, j)
                for slot in mesh.free_slots(router):
                    yield CoreId(router, slot)

    core_list = tuple(_take_cores(column_major(), cores, "state"))

    def stage(label: str, rate: float) -> WorkloadSpec:
        spec = WorkloadSpec(
            populations=(Population("state", n, spikes_per_step=rate),),
            connections=(
                Connection("state", "state", Encoding.DENSE, 8, AllOnes()),
            ),
            assignment={"state": core_list},
            workload_id=f"qubo-n{n}-{label}",
        )
        spec.validate()
        return spec

    return stage("checking", checking_rate), stage("switching", switching_rate)
