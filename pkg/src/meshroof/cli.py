"""Command-line front end and the file schemas it owns.

Subcommands: estimate (one workload), sweep (named suites), traffic
(per-link CSV and ASCII heatmap), analytic (closed forms vs. formula vs.
brute force), calibrate (rate fitting from a measurement series CSV).

File formats are strict: unknown fields are rejected and schema errors name
the file and the JSON pointer of the offending value. Reports are emitted
deterministically (sorted rows, shortest-round-trip floats, '.' decimals,
newline-terminated) so golden-file comparisons are byte-exact.

Exit codes: 0 success, 2 validation error, 3 infeasible workload,
4 analytic/brute-force mismatch.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import analytic
from .errors import InfeasibleWorkloadError, ValidationError
from .mesh import CoreId, MeshConfig, RouterCoord, single_chip
from .model import (
    CalibrationParams,
    MeasurementSeries,
    estimate,
    fit_effective_rate,
    rate_at_largest_count,
)
from .placement import CoreMap, PlacementMatrix, make_pattern, realize
from .simref import simulate_step
from .traffic import LinkLoadMap, RouterHeatmap, compute_link_loads, heaviest_link, router_heatmap
from .workload import (
    Connection,
    Encoding,
    AllOnes,
    Identity,
    Population,
    RandomDensity,
    TiledIdentity,
    WorkloadSpec,
    dense_linear_sweep,
    derive_op_counts,
    gen_dendop,
    gen_link_bandwidth,
    gen_qubo,
    gen_synmem_read,
    gen_synop,
    gen_tiled_identity,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_MISMATCH = 4

HEAT_RAMP = " .:-=+*#%@"


class SchemaError(ValidationError):
    """Input file violates its schema; carries the JSON pointer."""

    def __init__(self, pointer: str, message: str) -> None:
        self.pointer = pointer or "/"
        super().__init__(f"{self.pointer}: {message}")


# ---------------------------------------------------------------------------
# Strict JSON helpers
# ---------------------------------------------------------------------------


def _require_obj(value: Any, pointer: str, known: set[str], required: set[str]) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(pointer, "expected an object")
    for key in value:
        if key not in known:
            raise SchemaError(f"{pointer}/{key}", "unknown field")
    for key in required:
        if key not in value:
            raise SchemaError(pointer, f"missing required field {key!r}")
    return value


def _get_int(obj: dict, key: str, pointer: str, default: int | None = None) -> int:
    if key not in obj:
        if default is None:
            raise SchemaError(pointer, f"missing required field {key!r}")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{pointer}/{key}", "expected an integer")
    return v


def _get_num(obj: dict, key: str, pointer: str, default: float | None = None) -> float:
    if key not in obj:
        if default is None:
            raise SchemaError(pointer, f"missing required field {key!r}")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"{pointer}/{key}", "expected a number")
    return float(v)


def _get_str(obj: dict, key: str, pointer: str, default: str | None = None) -> str:
    if key not in obj:
        if default is None:
            raise SchemaError(pointer, f"missing required field {key!r}")
        return default
    v = obj[key]
    if not isinstance(v, str):
        raise SchemaError(f"{pointer}/{key}", "expected a string")
    return v


def _get_list(obj: dict, key: str, pointer: str) -> list:
    if key not in obj:
        raise SchemaError(pointer, f"missing required field {key!r}")
    v = obj[key]
    if not isinstance(v, list):
        raise SchemaError(f"{pointer}/{key}", "expected an array")
    return v


def _check_version(data: dict, pointer: str = "") -> None:
    version = _get_int(data, "schema_version", pointer)
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"{pointer}/schema_version",
            f"unsupported version {version}, expected {SCHEMA_VERSION}",
        )


def _load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read file: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


# ---------------------------------------------------------------------------
# Core-id, mesh, workload, placement, calibration (de)serialization
# ---------------------------------------------------------------------------


def _core_from_json(value: Any, pointer: str) -> CoreId:
    obj = _require_obj(value, pointer, {"i", "j", "slot"}, {"i", "j", "slot"})
    return CoreId(
        RouterCoord(_get_int(obj, "i", pointer), _get_int(obj, "j", pointer)),
        _get_int(obj, "slot", pointer),
    )


def core_to_json(core: CoreId) -> dict:
    return {"i": core.router.i, "j": core.router.j, "slot": core.slot}


def mesh_from_json(data: Any, pointer: str = "") -> MeshConfig:
    obj = _require_obj(
        data, pointer,
        {"schema_version", "rows", "cols", "cores_per_router", "parallel_meshes",
         "reserved_slots", "core_link_sharing"},
        {"schema_version"},
    )
    _check_version(obj, pointer)
    reserved = []
    if "reserved_slots" in obj:
        items = _get_list(obj, "reserved_slots", pointer)
        reserved = [
            _core_from_json(item, f"{pointer}/reserved_slots/{idx}")
            for idx, item in enumerate(items)
        ]
    return MeshConfig(
        rows=_get_int(obj, "rows", pointer, 8),
        cols=_get_int(obj, "cols", pointer, 4),
        cores_per_router=_get_int(obj, "cores_per_router", pointer, 4),
        parallel_meshes=_get_int(obj, "parallel_meshes", pointer, 2),
        reserved_slots=frozenset(reserved),
        core_link_sharing=_get_int(obj, "core_link_sharing", pointer, 1),
    )


def mesh_to_json(mesh: MeshConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "rows": mesh.rows,
        "cols": mesh.cols,
        "cores_per_router": mesh.cores_per_router,
        "parallel_meshes": mesh.parallel_meshes,
        "reserved_slots": [core_to_json(c) for c in sorted(mesh.reserved_slots)],
        "core_link_sharing": mesh.core_link_sharing,
    }


_PATTERN_FIELDS = {
    "all_ones": set(),
    "identity": set(),
    "tiled_identity": {"tile"},
    "random_density": {"density", "seed"},
}


def _pattern_from_json(value: Any, pointer: str):
    if not isinstance(value, dict) or "kind" not in value:
        raise SchemaError(pointer, "expected an object with a 'kind' field")
    kind = _get_str(value, "kind", pointer)
    if kind not in _PATTERN_FIELDS:
        raise SchemaError(f"{pointer}/kind", f"unknown pattern kind {kind!r}")
    _require_obj(value, pointer, {"kind"} | _PATTERN_FIELDS[kind], {"kind"})
    if kind == "all_ones":
        return AllOnes()
    if kind == "identity":
        return Identity()
    if kind == "tiled_identity":
        return TiledIdentity(tile=_get_int(value, "tile", pointer))
    return RandomDensity(
        density=_get_num(value, "density", pointer),
        seed=_get_int(value, "seed", pointer),
    )


def _pattern_to_json(pattern) -> dict:
    out: dict[str, Any] = {"kind": pattern.name}
    if isinstance(pattern, TiledIdentity):
        out["tile"] = pattern.tile
    elif isinstance(pattern, RandomDensity):
        out["density"] = pattern.density
        out["seed"] = pattern.seed
    return out


def workload_from_json(data: Any, pointer: str = "") -> WorkloadSpec:
    obj = _require_obj(
        data, pointer,
        {"schema_version", "id", "neuron_capacity", "populations", "connections",
         "assignment"},
        {"schema_version", "populations", "connections", "assignment"},
    )
    _check_version(obj, pointer)

    populations = []
    for idx, item in enumerate(_get_list(obj, "populations", pointer)):
        p = f"{pointer}/populations/{idx}"
        entry = _require_obj(
            item, p,
            {"id", "neurons", "spikes_per_step", "bits_per_message"},
            {"id", "neurons"},
        )
        populations.append(
            Population(
                id=_get_str(entry, "id", p),
                neurons=_get_int(entry, "neurons", p),
                spikes_per_step=_get_num(entry, "spikes_per_step", p, 1.0),
                bits_per_message=_get_int(entry, "bits_per_message", p, 32),
            )
        )

    connections = []
    for idx, item in enumerate(_get_list(obj, "connections", pointer)):
        p = f"{pointer}/connections/{idx}"
        entry = _require_obj(
            item, p,
            {"src", "dst", "encoding", "weight_bits", "pattern"},
            {"src", "dst", "encoding", "weight_bits", "pattern"},
        )
        encoding = _get_str(entry, "encoding", p)
        if encoding not in ("dense", "sparse"):
            raise SchemaError(f"{p}/encoding", "expected 'dense' or 'sparse'")
        connections.append(
            Connection(
                src=_get_str(entry, "src", p),
                dst=_get_str(entry, "dst", p),
                encoding=Encoding(encoding),
                weight_bits=_get_int(entry, "weight_bits", p),
                pattern=_pattern_from_json(entry["pattern"], f"{p}/pattern"),
            )
        )

    assignment_obj = obj["assignment"]
    if not isinstance(assignment_obj, dict):
        raise SchemaError(f"{pointer}/assignment", "expected an object")
    assignment = {}
    for pid, cores in assignment_obj.items():
        p = f"{pointer}/assignment/{pid}"
        if not isinstance(cores, list):
            raise SchemaError(p, "expected an array of cores")
        assignment[pid] = tuple(
            _core_from_json(core, f"{p}/{idx}") for idx, core in enumerate(cores)
        )

    spec = WorkloadSpec(
        populations=tuple(populations),
        connections=tuple(connections),
        assignment=assignment,
        neuron_capacity=_get_int(obj, "neuron_capacity", pointer, 8192),
        workload_id=_get_str(obj, "id", pointer, "workload"),
    )
    spec.validate()
    return spec


def workload_to_json(w: WorkloadSpec) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "id": w.workload_id,
        "neuron_capacity": w.neuron_capacity,
        "populations": [
            {
                "id": p.id,
                "neurons": p.neurons,
                "spikes_per_step": p.spikes_per_step,
                "bits_per_message": p.bits_per_message,
            }
            for p in w.populations
        ],
        "connections": [
            {
                "src": c.src,
                "dst": c.dst,
                "encoding": c.encoding.value,
                "weight_bits": c.weight_bits,
                "pattern": _pattern_to_json(c.pattern),
            }
            for c in w.connections
        ],
        "assignment": {
            pid: [core_to_json(c) for c in cores]
            for pid, cores in w.assignment.items()
        },
    }


_PLACEMENT_PARAMS = {
    "rect": {"n", "m"},
    "square": {"n"},
    "xshape": {"n"},
    "identity": {"n"},
    "permutation": {"n", "a", "seed"},
    "random": {"pairs", "seed"},
}


def placement_from_json(
    data: Any, mesh: MeshConfig, pointer: str = ""
) -> tuple[PlacementMatrix, str]:
    """Returns the matrix and a descriptive placement id."""
    obj = _require_obj(
        data, pointer,
        {"schema_version", "pattern", "matrix"},
        {"schema_version"},
    )
    _check_version(obj, pointer)
    if ("pattern" in obj) == ("matrix" in obj):
        raise SchemaError(pointer, "exactly one of 'pattern' or 'matrix' is required")

    if "matrix" in obj:
        rows = _get_list(obj, "matrix", pointer)
        entries = []
        for i, row in enumerate(rows):
            if not isinstance(row, list):
                raise SchemaError(f"{pointer}/matrix/{i}", "expected an array")
            for j, v in enumerate(row):
                if v not in (0, 1) or isinstance(v, bool):
                    raise SchemaError(f"{pointer}/matrix/{i}/{j}", "expected 0 or 1")
            entries.append(tuple(row))
        matrix = PlacementMatrix(tuple(entries))
        return matrix, f"matrix-{matrix.n}x{matrix.m}"

    spec = obj["pattern"]
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SchemaError(f"{pointer}/pattern", "expected an object with 'kind'")
    kind = _get_str(spec, "kind", f"{pointer}/pattern")
    if kind not in _PLACEMENT_PARAMS:
        raise SchemaError(f"{pointer}/pattern/kind", f"unknown pattern {kind!r}")
    _require_obj(spec, f"{pointer}/pattern", {"kind"} | _PLACEMENT_PARAMS[kind], {"kind"})
    p = f"{pointer}/pattern"
    kwargs: dict[str, Any] = {}
    if "n" in _PLACEMENT_PARAMS[kind]:
        kwargs["n"] = _get_int(spec, "n", p)
    if "m" in _PLACEMENT_PARAMS[kind]:
        kwargs["m"] = _get_int(spec, "m", p)
    if "a" in _PLACEMENT_PARAMS[kind]:
        kwargs["a"] = _get_int(spec, "a", p)
    if "pairs" in _PLACEMENT_PARAMS[kind]:
        kwargs["pairs"] = _get_int(spec, "pairs", p)
    if "seed" in _PLACEMENT_PARAMS[kind]:
        kwargs["seed"] = _get_int(spec, "seed", p, 0)
    matrix = make_pattern(kind, mesh=mesh, **kwargs)
    label = kind + "".join(
        f"-{k}{kwargs[k]}" for k in ("n", "m", "a", "pairs", "seed") if k in kwargs
    )
    return matrix, label


def placement_to_json(matrix: PlacementMatrix) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "matrix": [list(row) for row in matrix.entries],
    }


_CALIB_KEYS = {
    "t_dendop_s", "t_synop_s", "t_synmem_read_s", "link_bandwidth_bps",
    "t_barrier_s", "word_width_bits", "index_bits", "bits_per_message_default",
}


def calibration_from_mapping(data: Any, pointer: str = "") -> CalibrationParams:
    obj = _require_obj(
        data, pointer, _CALIB_KEYS,
        {"t_dendop_s", "t_synop_s", "t_synmem_read_s", "link_bandwidth_bps",
         "t_barrier_s"},
    )
    return CalibrationParams(
        t_dendop=_get_num(obj, "t_dendop_s", pointer),
        t_synop=_get_num(obj, "t_synop_s", pointer),
        t_synmem_read=_get_num(obj, "t_synmem_read_s", pointer),
        link_bandwidth=_get_num(obj, "link_bandwidth_bps", pointer),
        t_barrier=_get_num(obj, "t_barrier_s", pointer),
        word_width=_get_int(obj, "word_width_bits", pointer, 64),
        index_bits=_get_int(obj, "index_bits", pointer, 16),
        bits_per_message_default=_get_int(obj, "bits_per_message_default", pointer, 32),
    )


def load_calibration(path: str | Path) -> CalibrationParams:
    """Load calibration from .toml or .json by extension."""
    path = Path(path)
    if path.suffix.lower() == ".toml":
        try:
            import tomllib  # Python >= 3.11
        except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
            import tomli as tomllib
        try:
            data = tomllib.loads(path.read_text())
        except OSError as exc:
            raise ValidationError(f"{path}: cannot read file: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ValidationError(f"{path}: invalid TOML: {exc}") from exc
    else:
        data = _load_json(path)
    try:
        return calibration_from_mapping(data)
    except SchemaError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def load_mesh(path: str | Path | None) -> MeshConfig:
    if path is None:
        return single_chip()
    try:
        return mesh_from_json(_load_json(path))
    except SchemaError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def load_workload(path: str | Path) -> WorkloadSpec:
    try:
        return workload_from_json(_load_json(path))
    except SchemaError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def load_placement(path: str | Path, mesh: MeshConfig) -> tuple[PlacementMatrix, str]:
    try:
        return placement_from_json(_load_json(path), mesh)
    except SchemaError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

REPORT_COLUMNS = (
    "workload_id", "placement_id", "n_do_max", "n_so_max", "n_smr_max",
    "n_ll_bits", "term_dendop_s", "term_synop_s", "term_synmem_s",
    "term_noc_s", "t_barrier_s", "t_estimate_s", "bottleneck",
)


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        if value.is_integer() and abs(value) < 1e15:
            return str(int(value))
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class ReportRow:
    workload_id: str
    placement_id: str
    n_do_max: float
    n_so_max: float
    n_smr_max: float
    n_ll_bits: float
    term_dendop_s: float
    term_synop_s: float
    term_synmem_s: float
    term_noc_s: float
    t_barrier_s: float
    t_estimate_s: float
    bottleneck: str
    oracle_s: float | None = None

    def values(self, with_oracle: bool) -> list[str]:
        out = [_fmt(getattr(self, col)) for col in REPORT_COLUMNS]
        if with_oracle:
            out.append("" if self.oracle_s is None else _fmt(self.oracle_s))
        return out

    def as_dict(self, with_oracle: bool) -> dict:
        out: dict[str, Any] = {col: getattr(self, col) for col in REPORT_COLUMNS}
        if with_oracle:
            out["oracle_s"] = self.oracle_s
        return out


def evaluate_row(
    w: WorkloadSpec,
    core_map: CoreMap,
    mesh: MeshConfig,
    cal: CalibrationParams,
    placement_id: str,
    with_oracle: bool,
) -> ReportRow:
    oc = derive_op_counts(w, word_width=cal.word_width, index_bits=cal.index_bits)
    loads = compute_link_loads(w, core_map, mesh)
    hl = heaviest_link(loads)
    est = estimate(oc, hl, cal)
    oracle = simulate_step(oc, hl, cal).t_step if with_oracle else None
    return ReportRow(
        workload_id=w.workload_id,
        placement_id=placement_id,
        n_do_max=oc.max_dend_ops,
        n_so_max=oc.max_syn_ops,
        n_smr_max=oc.max_synmem_reads,
        n_ll_bits=hl.bits_per_step,
        term_dendop_s=est.terms["dendop"],
        term_synop_s=est.terms["synop"],
        term_synmem_s=est.terms["synmem"],
        term_noc_s=est.terms["noc"],
        t_barrier_s=est.terms["barrier"],
        t_estimate_s=est.t_step,
        bottleneck=est.bottleneck,
        oracle_s=oracle,
    )


def write_report_csv(rows: Sequence[ReportRow], with_oracle: bool, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    header = list(REPORT_COLUMNS) + (["oracle_s"] if with_oracle else [])
    writer.writerow(header)
    for row in rows:
        writer.writerow(row.values(with_oracle))


def write_link_csv(loads: LinkLoadMap, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["kind", "i", "j", "slot", "bits_per_step"])
    for link, bits in loads.items_sorted():
        slot = "" if link.core_slot is None else link.core_slot
        writer.writerow(
            [link.kind.label, link.anchor.i, link.anchor.j, slot, _fmt(bits)]
        )


def render_heatmap(hm: RouterHeatmap) -> str:
    lines = [
        "".join(HEAT_RAMP[int(v * 9 + 0.5)] for v in row) for row in hm.values
    ]
    lines.append(f"max: {_fmt(hm.max_load)}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Sweep suites
# ---------------------------------------------------------------------------

MICROBENCH_DENDOP_N = (16, 64, 256, 1024, 4095)
MICROBENCH_SYNOP_N = (64, 256, 1024, 2048)
MICROBENCH_SYNMEM_N = (64, 256, 1024, 2048)
MICROBENCH_LINKBW_M = (2, 4, 8, 12)
MICROBENCH_LINKBW_N = 4095

TILED_PLACEMENT_RANDOM_SEEDS = (0, 1, 2, 3)

QUBO_SIZES = (512, 1024, 2048, 4096)


def _suite_configs(
    suite: str, mesh: MeshConfig, params: dict[str, float]
) -> list[tuple[WorkloadSpec, CoreMap, MeshConfig, str]]:
    """Each config is (workload, core map, mesh, placement id)."""
    configs: list[tuple[WorkloadSpec, CoreMap, MeshConfig, str]] = []

    if suite == "dense-linear":
        for w in dense_linear_sweep(mesh):
            configs.append((w, CoreMap.identity(w), mesh, "as-assigned"))
    elif suite == "microbench":
        specs = [gen_dendop(n, mesh) for n in MICROBENCH_DENDOP_N]
        specs += [gen_synop(n, mesh) for n in MICROBENCH_SYNOP_N]
        specs += [gen_synmem_read(n, mesh) for n in MICROBENCH_SYNMEM_N]
        specs += [
            gen_link_bandwidth(MICROBENCH_LINKBW_N, m, mesh)
            for m in MICROBENCH_LINKBW_M
        ]
        configs = [(w, CoreMap.identity(w), mesh, "as-assigned") for w in specs]
    elif suite == "tiled-identity-placements":
        # The identity-diagonal placement of 8 pairs needs an 8x8 router
        # grid, so this suite runs on a square mesh of that size.
        suite_mesh = MeshConfig(rows=8, cols=8)
        w = gen_tiled_identity(mesh=suite_mesh)
        placements = [
            ("xshape-n4", make_pattern("xshape", n=4)),
            ("rect-n4-m2", make_pattern("rect", n=4, m=2)),
            ("identity-n8", make_pattern("identity", n=8)),
        ]
        placements += [
            (f"random-pairs8-seed{s}",
             make_pattern("random", pairs=8, seed=s, mesh=suite_mesh))
            for s in TILED_PLACEMENT_RANDOM_SEEDS
        ]
        for label, matrix in placements:
            configs.append((w, realize(matrix, w, suite_mesh), suite_mesh, label))
    elif suite == "qubo":
        checking = params.get("checking_rate", 0.5)
        switching = params.get("switching_rate", 0.1)
        for n in QUBO_SIZES:
            cores = max(1, n // 256)
            for stage in gen_qubo(n, cores, checking, switching, mesh):
                configs.append((stage, CoreMap.identity(stage), mesh, "as-assigned"))
    else:
        raise ValidationError(
            f"unknown suite {suite!r}; expected dense-linear, microbench, "
            "tiled-identity-placements, or qubo"
        )
    return configs


def _max_workers() -> int:
    env = os.environ.get("MESHROOF_THREADS")
    if env is not None:
        try:
            workers = int(env)
        except ValueError as exc:
            raise ValidationError(f"MESHROOF_THREADS must be an integer: {env!r}") from exc
        if workers < 1:
            raise ValidationError("MESHROOF_THREADS must be >= 1")
        return workers
    return min(8, os.cpu_count() or 1)


def _evaluate_all(
    configs: Sequence[tuple[WorkloadSpec, CoreMap, MeshConfig, str]],
    cal: CalibrationParams,
    with_oracle: bool,
) -> list[ReportRow]:
    def run(cfg: tuple[WorkloadSpec, CoreMap, MeshConfig, str]) -> ReportRow:
        w, core_map, mesh, placement_id = cfg
        return evaluate_row(w, core_map, mesh, cal, placement_id, with_oracle)

    workers = _max_workers()
    if workers == 1 or len(configs) <= 1:
        rows = [run(cfg) for cfg in configs]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, configs))
    rows.sort(key=lambda r: (r.workload_id, r.placement_id))
    return rows


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_estimate(args: argparse.Namespace, out) -> int:
    mesh = load_mesh(args.mesh)
    w = load_workload(args.workload)
    cal = load_calibration(args.calib)
    if args.placement:
        matrix, placement_id = load_placement(args.placement, mesh)
        core_map = realize(matrix, w, mesh)
    else:
        core_map, placement_id = CoreMap.identity(w), "as-assigned"
    row = evaluate_row(w, core_map, mesh, cal, placement_id, args.oracle)
    if args.format == "json":
        json.dump(row.as_dict(args.oracle), out)
        out.write("\n")
    else:
        write_report_csv([row], args.oracle, out)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace, out) -> int:
    mesh = load_mesh(args.mesh)
    cal = load_calibration(args.calib)
    params: dict[str, float] = {}
    for item in args.params or []:
        if "=" not in item:
            raise ValidationError(f"--params entries must be key=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            params[key] = float(raw)
        except ValueError as exc:
            raise ValidationError(f"--params {key}: {raw!r} is not a number") from exc
    known = {"checking_rate", "switching_rate"}
    unknown = set(params) - known
    if unknown:
        raise ValidationError(f"unknown sweep parameter {sorted(unknown)[0]!r}")
    configs = _suite_configs(args.suite, mesh, params)
    rows = _evaluate_all(configs, cal, args.oracle)
    write_report_csv(rows, args.oracle, out)
    return EXIT_OK


def _cmd_traffic(args: argparse.Namespace, out) -> int:
    mesh = load_mesh(args.mesh)
    w = load_workload(args.workload)
    if args.placement:
        matrix, _ = load_placement(args.placement, mesh)
        core_map = realize(matrix, w, mesh)
    else:
        core_map = CoreMap.identity(w)
    loads = compute_link_loads(w, core_map, mesh)
    write_link_csv(loads, out)
    if args.heatmap:
        out.write("\n")
        out.write(render_heatmap(router_heatmap(loads, mesh)))
        out.write("\n")
    return EXIT_OK


def _cmd_analytic(args: argparse.Namespace, out) -> int:
    kind = args.pattern
    if kind in ("rect", "square", "xshape", "identity"):
        if kind == "rect":
            if args.m is None:
                raise ValidationError("rect needs --m")
            matrix = make_pattern("rect", n=args.n, m=args.m)
        else:
            matrix = make_pattern(kind, n=args.n)
        closed = analytic.nll_closed_form(kind, args.n, args.m)
        load = analytic.nll_eq2(matrix)
        out.write(f"pattern={kind} n={args.n}"
                  + (f" m={args.m}" if kind == "rect" else "")
                  + f" pairs={matrix.pair_count}\n")
        out.write(f"closed_form={closed}\n")
        # The named closed forms are leftward-link identities.
        eq2_left = load.by_direction["left"]
        out.write(f"eq2={eq2_left}\n")
        out.write(f"eq2_overall={load.value}\n")
        ok = closed == eq2_left
        if args.compare_bruteforce:
            brute = analytic.nll_bruteforce(matrix)
            out.write(f"bruteforce={brute.by_direction['left']}\n")
            out.write(f"bruteforce_overall={brute.value}\n")
            ok = ok and brute.by_direction["left"] == eq2_left
            ok = ok and brute.value == load.value
        if not ok:
            print("error: analytic values disagree", file=sys.stderr)
            return EXIT_MISMATCH
        return EXIT_OK
    if kind == "permutation":
        if args.a is None:
            raise ValidationError("permutation needs --a")
        matrix = make_pattern("permutation", n=args.n, a=args.a, seed=args.seed)
        bound = analytic.nll_permutation_bound(args.n, args.a)
        load = analytic.nll_eq2(matrix)
        out.write(
            f"pattern=permutation n={args.n} a={args.a} seed={args.seed} "
            f"pairs={matrix.pair_count}\n"
        )
        out.write(f"bound={bound}\n")
        out.write(f"eq2_overall={load.value}\n")
        ok = load.value <= bound
        if args.compare_bruteforce:
            brute = analytic.nll_bruteforce(matrix)
            out.write(f"bruteforce_overall={brute.value}\n")
            ok = ok and brute.value == load.value and brute.value <= bound
        if not ok:
            print("error: analytic values disagree", file=sys.stderr)
            return EXIT_MISMATCH
        return EXIT_OK
    raise ValidationError(
        f"unknown pattern {kind!r}; expected rect, square, xshape, identity, "
        "or permutation"
    )


def _cmd_calibrate(args: argparse.Namespace, out) -> int:
    path = Path(args.series)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read file: {exc}") from exc
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError(f"{path}: empty series file") from None
    if [h.strip() for h in header] != ["count", "time_s"]:
        raise ValidationError(f"{path}: expected header 'count,time_s'")
    points = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != 2:
            raise ValidationError(f"{path}: line {lineno}: expected 2 columns")
        try:
            points.append((float(rec[0]), float(rec[1])))
        except ValueError as exc:
            raise ValidationError(f"{path}: line {lineno}: {exc}") from exc
    series = MeasurementSeries(tuple(points))
    if args.method == "largest-n":
        fit = rate_at_largest_count(series)
    else:
        fit = fit_effective_rate(series)
    if args.quantity == "bandwidth":
        out.write(f"link_bandwidth_bps={_fmt(1.0 / fit.per_unit_time)}\n")
    else:
        out.write(f"per_unit_time_s={_fmt(fit.per_unit_time)}\n")
    out.write(f"offset_s={_fmt(fit.offset)}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshroof",
        description="Max-affine runtime estimation for 2D-mesh neuromorphic chips",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate one workload/placement")
    p.add_argument("--workload", required=True)
    p.add_argument("--placement")
    p.add_argument("--calib", required=True)
    p.add_argument("--mesh")
    p.add_argument("--oracle", action="store_true",
                   help="append the serialized-time oracle column")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("sweep", help="run a named workload suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--calib", required=True)
    p.add_argument("--mesh")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--params", nargs="*", metavar="KEY=VALUE")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("traffic", help="per-link load CSV and heatmap")
    p.add_argument("--workload", required=True)
    p.add_argument("--placement")
    p.add_argument("--mesh")
    p.add_argument("--heatmap", action="store_true")
    p.set_defaults(func=_cmd_traffic)

    p = sub.add_parser("analytic", help="closed-form vs formula vs brute force")
    p.add_argument("--pattern", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--compare-bruteforce", action="store_true")
    p.set_defaults(func=_cmd_analytic)

    p = sub.add_parser("calibrate", help="fit effective rates from a series CSV")
    p.add_argument("--series", required=True)
    p.add_argument("--quantity", required=True,
                   choices=("dendop", "synop", "synmem", "bandwidth"))
    p.add_argument("--method", choices=("fit", "largest-n"), default="fit")
    p.set_defaults(func=_cmd_calibrate)

    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which matches the validation code
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except InfeasibleWorkloadError as exc:
        print(f"error: infeasible workload: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
