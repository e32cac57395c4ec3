"""Independent oracles and generators shared by the test suite.

Everything here recomputes results from first principles (explicit 0/1
matrices, per-message route walking, literal even-split arithmetic) without
going through the library's closed-form code paths, so agreement is
meaningful.
"""

from __future__ import annotations

import math
import random

from meshroof import (
    AllOnes,
    Connection,
    CoreId,
    Encoding,
    Identity,
    MeshConfig,
    Population,
    RandomDensity,
    RouterCoord,
    TiledIdentity,
    WorkloadSpec,
)
from meshroof.rng import hash_uniform


def dense_matrix(pattern, n_src: int, n_dst: int) -> list[list[int]]:
    """Explicit 0/1 realization of a connectivity pattern."""
    if isinstance(pattern, AllOnes):
        return [[1] * n_dst for _ in range(n_src)]
    if isinstance(pattern, Identity):
        return [[1 if i == j else 0 for j in range(n_dst)] for i in range(n_src)]
    if isinstance(pattern, TiledIdentity):
        t = pattern.tile
        return [[1 if i % t == j % t else 0 for j in range(n_dst)] for i in range(n_src)]
    if isinstance(pattern, RandomDensity):
        return [
            [
                1 if hash_uniform(pattern.seed, i * n_dst + j) < pattern.density else 0
                for j in range(n_dst)
            ]
            for i in range(n_src)
        ]
    raise TypeError(f"unknown pattern {pattern!r}")


def split_ranges(neurons: int, cores: int) -> list[range]:
    """Even split with the remainder on the earliest cores."""
    base, extra = divmod(neurons, cores)
    out = []
    start = 0
    for idx in range(cores):
        size = base + (1 if idx < extra else 0)
        out.append(range(start, start + size))
        start += size
    return out


def _pop(w: WorkloadSpec, pid: str) -> Population:
    return next(p for p in w.populations if p.id == pid)


def _fragments(w: WorkloadSpec, pid: str) -> list[tuple[CoreId, range]]:
    cores = w.assignment[pid]
    return list(zip(cores, split_ranges(_pop(w, pid).neurons, len(cores))))


def naive_op_counts(
    w: WorkloadSpec, word_width: int = 64, index_bits: int = 16
) -> dict[CoreId, tuple[float, float, float]]:
    """Row-by-row operation counting over explicit matrices."""
    dend: dict[CoreId, float] = {}
    syn: dict[CoreId, float] = {}
    smr: dict[CoreId, float] = {}
    for pop in w.populations:
        for core, rng in _fragments(w, pop.id):
            dend[core] = dend.get(core, 0.0) + len(rng)
    for conn in w.connections:
        src = _pop(w, conn.src)
        dst = _pop(w, conn.dst)
        matrix = dense_matrix(conn.pattern, src.neurons, dst.neurons)
        for _, rows in _fragments(w, conn.src):
            for row in rows:
                for d_core, cols in _fragments(w, conn.dst):
                    if not cols:
                        continue
                    nnz = sum(matrix[row][c] for c in cols)
                    syn[d_core] = syn.get(d_core, 0.0) + src.spikes_per_step * nnz
                    if nnz == 0:
                        continue
                    if conn.encoding is Encoding.DENSE:
                        bits = len(cols) * conn.weight_bits
                    else:
                        bits = nnz * (conn.weight_bits + index_bits)
                    words = math.ceil(bits / word_width)
                    smr[d_core] = smr.get(d_core, 0.0) + src.spikes_per_step * words
    cores = set(dend) | set(syn) | set(smr)
    return {
        c: (dend.get(c, 0.0), syn.get(c, 0.0), smr.get(c, 0.0)) for c in cores
    }


def naive_message_matrix(
    w: WorkloadSpec,
) -> dict[tuple[CoreId, CoreId], tuple[float, float]]:
    """Per-neuron distinct-destination-core counting over explicit
    matrices, deduplicated across a source population's connections."""
    acc: dict[tuple[CoreId, CoreId], list[float]] = {}
    by_src: dict[str, list[Connection]] = {}
    for conn in w.connections:
        by_src.setdefault(conn.src, []).append(conn)
    for src_pid, conns in by_src.items():
        src = _pop(w, src_pid)
        if src.spikes_per_step == 0.0:
            continue
        matrices = {
            id(conn): dense_matrix(conn.pattern, src.neurons, _pop(w, conn.dst).neurons)
            for conn in conns
        }
        for o_core, rows in _fragments(w, src_pid):
            for row in rows:
                reached = set()
                for conn in conns:
                    matrix = matrices[id(conn)]
                    for d_core, cols in _fragments(w, conn.dst):
                        if any(matrix[row][c] for c in cols):
                            reached.add(d_core)
                for d_core in reached:
                    cell = acc.setdefault((o_core, d_core), [0.0, 0.0])
                    cell[0] += src.spikes_per_step
                    cell[1] += src.spikes_per_step * src.bits_per_message
    return {k: (v[0], v[1]) for k, v in acc.items()}


def walk_route(si: int, sj: int, di: int, dj: int):
    """Independent X-Y walker: yields (direction, row, col) for each
    router-to-router link departing (row, col), horizontal first."""
    i, j = si, sj
    while j != dj:
        if dj < j:
            yield ("left", i, j)
            j -= 1
        else:
            yield ("right", i, j)
            j += 1
    while i != di:
        if di < i:
            yield ("up", i, j)
            i -= 1
        else:
            yield ("down", i, j)
            i += 1


def naive_link_loads(w: WorkloadSpec, mesh: MeshConfig) -> dict[tuple, float]:
    """Per-pair route walking with explicit coordinate stepping, using the
    workload's own assignment (identity core map). Keys are
    ('c2r'|'r2c', i, j, slot) or (direction, i, j)."""
    loads: dict[tuple, float] = {}
    flows = naive_message_matrix(w)
    for (o, d), (_, bits) in flows.items():
        key = ("c2r", o.router.i, o.router.j, o.slot // mesh.core_link_sharing)
        loads[key] = loads.get(key, 0.0) + bits
        for hop in walk_route(o.router.i, o.router.j, d.router.i, d.router.j):
            loads[hop] = loads.get(hop, 0.0) + bits
        key = ("r2c", d.router.i, d.router.j, d.slot // mesh.core_link_sharing)
        loads[key] = loads.get(key, 0.0) + bits
    return loads


def paired_unit_workload(m: int) -> WorkloadSpec:
    """M origin cores and M destination cores, one neuron each, all-to-all
    with one-bit messages: every core pair exchanges exactly one message per
    step, so link loads come out in message units."""
    # Logical cores only; realize() maps them onto a placement matrix.
    logical_origin = tuple(CoreId(RouterCoord(1, k + 1), 0) for k in range(m))
    logical_dest = tuple(CoreId(RouterCoord(2, k + 1), 0) for k in range(m))
    return WorkloadSpec(
        populations=(
            Population("origin", m, bits_per_message=1),
            Population("dest", m, bits_per_message=1),
        ),
        connections=(
            Connection("origin", "dest", Encoding.SPARSE, 1, AllOnes()),
        ),
        assignment={"origin": logical_origin, "dest": logical_dest},
        workload_id=f"paired-unit-m{m}",
    )


def random_workload(rng: random.Random, mesh: MeshConfig) -> WorkloadSpec:
    """Small random workload for property sweeps: 1-2 populations on random
    cores, 0-3 random connections (self-connections allowed)."""
    all_cores = list(mesh.cores())
    pops = []
    assignment = {}
    for idx in range(rng.randint(1, 2)):
        pid = f"p{idx}"
        pops.append(
            Population(
                pid,
                neurons=rng.randint(1, 40),
                spikes_per_step=rng.choice([0.0, 1.0, rng.random()]),
                bits_per_message=rng.choice([8, 24, 32]),
            )
        )
        assignment[pid] = tuple(
            rng.sample(all_cores, rng.randint(1, min(4, len(all_cores))))
        )

    def common_divisor(a: int, b: int) -> int:
        g = math.gcd(a, b)
        divs = [d for d in range(1, g + 1) if g % d == 0]
        return rng.choice(divs)

    conns = []
    for _ in range(rng.randint(0, 3)):
        src = rng.choice(pops)
        dst = rng.choice(pops)
        kind = rng.randrange(4)
        if kind == 0:
            pattern = AllOnes()
        elif kind == 1:
            pattern = Identity()
        elif kind == 2:
            pattern = TiledIdentity(tile=common_divisor(src.neurons, dst.neurons))
        else:
            pattern = RandomDensity(density=rng.random(), seed=rng.randrange(2**32))
        conns.append(
            Connection(
                src.id,
                dst.id,
                rng.choice([Encoding.DENSE, Encoding.SPARSE]),
                rng.randint(1, 8),
                pattern,
            )
        )
    spec = WorkloadSpec(
        populations=tuple(pops),
        connections=tuple(conns),
        assignment=assignment,
        workload_id=f"random-{rng.randrange(10**6)}",
    )
    spec.validate()
    return spec


def random_calibration(rng: random.Random):
    from meshroof import CalibrationParams

    def log_uniform(lo: float, hi: float) -> float:
        return math.exp(rng.uniform(math.log(lo), math.log(hi)))

    return CalibrationParams(
        t_dendop=log_uniform(1e-9, 1e-7),
        t_synop=log_uniform(1e-9, 1e-7),
        t_synmem_read=log_uniform(1e-9, 1e-7),
        link_bandwidth=log_uniform(1e7, 1e11),
        t_barrier=log_uniform(1e-7, 1e-5),
    )
