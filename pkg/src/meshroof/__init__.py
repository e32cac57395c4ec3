"""Runtime estimation toolkit for 2D-mesh neuromorphic chips.

Predicts per-timestep runtime as the maximum of calibrated resource terms
(neuron updates, synaptic MACs, memory reads, heaviest NoC link, barrier),
computes dimension-order-routed link loads for arbitrary workloads and
placements, and provides closed-form congestion expressions for named
placement patterns.
"""

from .analytic import (
    AnalyticLoad,
    RouteAccumulation,
    ScalingRow,
    identity_load,
    nll_bruteforce,
    nll_closed_form,
    nll_eq2,
    nll_permutation_bound,
    rect_load,
    scaling_table,
    square_load,
    x_shape_load,
)
from .errors import (
    ConfigurationError,
    CoordinateError,
    FitError,
    InfeasibleWorkloadError,
    MappingError,
    ValidationError,
)
from .mesh import (
    CoreId,
    DirectedLink,
    LinkKind,
    MeshConfig,
    RouterCoord,
    route_path,
    single_chip,
)
from .model import (
    CalibrationParams,
    MeasurementSeries,
    RateFit,
    RooflinePoint,
    RuntimeEstimate,
    estimate,
    fit_effective_rate,
    rate_at_largest_count,
    roofline_curve,
    roofline_point,
    synthetic_calibration,
)
from .placement import (
    CoreMap,
    PlacementMatrix,
    identity_diag,
    make_pattern,
    permutation,
    random_placement,
    realize,
    saturated_rect,
    square,
    x_shape,
)
from .simref import OracleTime, simulate_step
from .traffic import (
    HeaviestLink,
    LinkLoadMap,
    RouterHeatmap,
    compute_link_loads,
    heaviest_link,
    heaviest_router_link,
    router_heatmap,
)
from .workload import (
    AllOnes,
    Connection,
    Encoding,
    Identity,
    MessageFlow,
    MessageMatrix,
    OpCounts,
    Population,
    RandomDensity,
    TiledIdentity,
    WorkloadSpec,
    dense_linear_sweep,
    derive_message_matrix,
    derive_op_counts,
    gen_barrier,
    gen_dendop,
    gen_dense_linear_layer,
    gen_link_bandwidth,
    gen_microbenchmark,
    gen_qubo,
    gen_synmem_read,
    gen_synop,
    gen_tiled_identity,
    synaptic_memory_bits,
)

__version__ = "0.1.0"
