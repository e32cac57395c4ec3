import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from meshroof import (
    AllOnes,
    ConfigurationError,
    Connection,
    CoreId,
    Encoding,
    Identity,
    InfeasibleWorkloadError,
    MeshConfig,
    Population,
    RandomDensity,
    RouterCoord,
    TiledIdentity,
    ValidationError,
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

from helpers import naive_message_matrix, naive_op_counts, random_workload


def core(i, j, slot=0):
    return CoreId(RouterCoord(i, j), slot)


def pair_spec(n_src, n_dst, encoding, weight_bits, pattern, *,
              rate=1.0, src_cores=1, dst_cores=1, bits_per_message=32):
    """Two populations on disjoint routers with one connection."""
    src_list = tuple(core(1, 1, s) if s < 4 else core(1, 2, s - 4) for s in range(src_cores))
    dst_list = tuple(core(2, 1, s) if s < 4 else core(2, 2, s - 4) for s in range(dst_cores))
    return WorkloadSpec(
        populations=(
            Population("src", n_src, spikes_per_step=rate,
                       bits_per_message=bits_per_message),
            Population("dst", n_dst),
        ),
        connections=(Connection("src", "dst", encoding, weight_bits, pattern),),
        assignment={"src": src_list, "dst": dst_list},
    )


class TestOpCounts:
    @pytest.mark.parametrize("n", [1, 7, 64])
    def test_all_ones_synops_square(self, n):
        oc = derive_op_counts(gen_synop(n))
        assert oc.max_syn_ops == n * n
        assert oc.max_dend_ops == n

    def test_synmem_packing_rule_n1024(self):
        # dense identity, 8-bit weights, 64-bit words: every spike scans
        # ceil(1024*8/64) = 128 words at the destination
        oc = derive_op_counts(gen_synmem_read(1024))
        assert oc.max_syn_ops == 1024
        assert oc.max_synmem_reads == 1024 * 128 == 131072

    def test_zero_activity_keeps_dendops(self):
        spec = pair_spec(16, 16, Encoding.DENSE, 4, AllOnes(), rate=0.0)
        oc = derive_op_counts(spec)
        assert oc.max_syn_ops == 0.0
        assert oc.max_synmem_reads == 0.0
        assert oc.max_dend_ops == 16

    def test_identity_dense_vs_sparse_read_scaling(self):
        # dense identity scans the whole row slice; sparse touches one entry
        for n in (8, 16, 64):
            dense = derive_op_counts(pair_spec(n, n, Encoding.DENSE, 8, Identity()))
            sparse = derive_op_counts(pair_spec(n, n, Encoding.SPARSE, 8, Identity()))
            assert dense.max_syn_ops == sparse.max_syn_ops == n
            assert dense.max_synmem_reads == n * math.ceil(n * 8 / 64)
            assert sparse.max_synmem_reads == n * math.ceil((8 + 16) / 64) == n

    @pytest.mark.parametrize("pattern", [
        AllOnes(), Identity(), TiledIdentity(tile=4),
        RandomDensity(density=0.3, seed=11), RandomDensity(density=0.0, seed=5),
    ])
    @pytest.mark.parametrize("encoding", [Encoding.DENSE, Encoding.SPARSE])
    @pytest.mark.parametrize("split", [(1, 1), (3, 2), (4, 5)])
    def test_matches_bruteforce_matrix_counting(self, pattern, encoding, split):
        spec = pair_spec(24, 36, encoding, 5, pattern, rate=0.5,
                         src_cores=split[0], dst_cores=split[1])
        oc = derive_op_counts(spec)
        expected = naive_op_counts(spec)
        assert set(oc.per_core) == set(expected)
        for c, (dend, syn, smr) in expected.items():
            got = oc.per_core[c]
            assert got.dend_ops == pytest.approx(dend, abs=1e-12)
            assert got.syn_ops == pytest.approx(syn, abs=1e-12)
            assert got.synmem_reads == pytest.approx(smr, abs=1e-12)

    def test_random_workloads_match_bruteforce(self):
        rng = random.Random(42)
        mesh = MeshConfig(rows=3, cols=3, cores_per_router=2)
        for _ in range(30):
            spec = random_workload(rng, mesh)
            oc = derive_op_counts(spec)
            expected = naive_op_counts(spec)
            for c, (dend, syn, smr) in expected.items():
                got = oc.per_core[c]
                assert got.dend_ops == pytest.approx(dend, rel=1e-12, abs=1e-12)
                assert got.syn_ops == pytest.approx(syn, rel=1e-12, abs=1e-12)
                assert got.synmem_reads == pytest.approx(smr, rel=1e-12, abs=1e-12)

    @given(rate=st.floats(0.0, 1.0), n=st.integers(1, 32))
    @settings(max_examples=40, deadline=None)
    def test_linear_in_activity(self, rate, n):
        base = derive_op_counts(pair_spec(n, n, Encoding.DENSE, 2, AllOnes(), rate=1.0))
        scaled = derive_op_counts(pair_spec(n, n, Encoding.DENSE, 2, AllOnes(), rate=rate))
        for c, ops in scaled.per_core.items():
            ref = base.per_core[c]
            assert ops.syn_ops == pytest.approx(ref.syn_ops * rate, rel=1e-12, abs=0)
            assert ops.synmem_reads == pytest.approx(ref.synmem_reads * rate, rel=1e-12, abs=0)
            assert ops.dend_ops == ref.dend_ops

    @given(src_cores=st.integers(1, 6), dst_cores=st.integers(1, 6),
           n_src=st.integers(1, 50), n_dst=st.integers(1, 50))
    @settings(max_examples=60, deadline=None)
    def test_all_ones_total_law(self, src_cores, dst_cores, n_src, n_dst):
        spec = pair_spec(n_src, n_dst, Encoding.DENSE, 1, AllOnes(),
                         src_cores=src_cores, dst_cores=dst_cores)
        oc = derive_op_counts(spec)
        dst_cores_set = set(spec.assignment["dst"])
        total = sum(
            ops.syn_ops for c, ops in oc.per_core.items() if c in dst_cores_set
        )
        assert total == n_src * n_dst

    def test_unassigned_population_rejected(self):
        spec = WorkloadSpec(
            populations=(Population("a", 4),),
            connections=(),
            assignment={},
        )
        with pytest.raises(ConfigurationError):
            derive_op_counts(spec)

    def test_capacity_enforced(self):
        spec = WorkloadSpec(
            populations=(Population("a", 10),),
            connections=(),
            assignment={"a": (core(1, 1),)},
            neuron_capacity=8,
        )
        with pytest.raises(ConfigurationError):
            spec.validate()

    def test_tile_must_divide(self):
        spec = pair_spec(10, 10, Encoding.SPARSE, 8, TiledIdentity(tile=3))
        with pytest.raises(ConfigurationError):
            spec.validate()


class TestMessageMatrix:
    def test_sparse_identity_pair_sends_n_messages(self):
        spec = pair_spec(100, 100, Encoding.SPARSE, 8, Identity())
        mm = derive_message_matrix(spec)
        assert len(mm.flows) == 1
        flow = next(iter(mm.flows.values()))
        assert flow.messages == 100
        assert flow.bits == 100 * 32

    def test_tiled_identity_all_to_all(self):
        w = gen_tiled_identity()
        mm = derive_message_matrix(w)
        assert len(mm.flows) == 64
        assert all(f.messages == 1024 for f in mm.flows.values())

    def test_zero_density_empty(self):
        spec = pair_spec(16, 16, Encoding.SPARSE, 4, RandomDensity(0.0, seed=3))
        assert derive_message_matrix(spec).flows == {}

    def test_conservation_against_bruteforce(self):
        rng = random.Random(7)
        mesh = MeshConfig(rows=3, cols=3, cores_per_router=2)
        for _ in range(30):
            spec = random_workload(rng, mesh)
            mm = derive_message_matrix(spec)
            expected = naive_message_matrix(spec)
            assert set(mm.flows) == set(expected)
            for key, (msgs, bits) in expected.items():
                assert mm.flows[key].messages == pytest.approx(msgs, rel=1e-12, abs=1e-12)
                assert mm.flows[key].bits == pytest.approx(bits, rel=1e-12, abs=1e-12)

    def test_dedup_across_connections(self):
        # two connections from one source reaching the same destination core:
        # each spiking neuron must send one message, not two
        shared = (core(2, 2, 0),)
        spec = WorkloadSpec(
            populations=(
                Population("src", 8),
                Population("d1", 8),
                Population("d2", 8),
            ),
            connections=(
                Connection("src", "d1", Encoding.DENSE, 1, AllOnes()),
                Connection("src", "d2", Encoding.DENSE, 1, AllOnes()),
            ),
            assignment={"src": (core(1, 1),), "d1": shared, "d2": (core(2, 2, 1),)},
        )
        mm = derive_message_matrix(spec)
        expected = naive_message_matrix(spec)
        assert {k: (f.messages, f.bits) for k, f in mm.flows.items()} == expected
        # d1's core gets 8 messages total despite two incoming connections
        assert mm.flows[(core(1, 1), core(2, 2, 0))].messages == 8


class TestGenerators:
    def test_barrier_one_dendop_per_core_no_messages(self):
        w = gen_barrier()
        oc = derive_op_counts(w)
        assert sorted(ops.dend_ops for ops in oc.per_core.values()) == [1, 1]
        assert all(ops.syn_ops == 0 for ops in oc.per_core.values())
        assert derive_message_matrix(w).flows == {}

    def test_dendop_single_core(self):
        w = gen_dendop(4095)
        assert len(w.assignment["pop"]) == 1
        oc = derive_op_counts(w)
        assert oc.max_dend_ops == 4095
        assert derive_message_matrix(w).flows == {}

    def test_link_bandwidth_pairs_in_one_column(self):
        w = gen_link_bandwidth(4095, 12)
        cores = [c for cs in w.assignment.values() for c in cs]
        assert len(cores) == 24
        assert all(c.router.j == 1 for c in cores)
        mm = derive_message_matrix(w)
        assert len(mm.flows) == 12
        assert all(f.messages == 4095 for f in mm.flows.values())

    def test_link_bandwidth_capacity(self):
        with pytest.raises(ConfigurationError):
            gen_link_bandwidth(64, 17)  # a column hosts at most 16 pairs

    def test_microbenchmark_dispatch(self):
        assert gen_microbenchmark("dendop", n=64).workload_id == "microbench-dendop-n64"
        assert gen_microbenchmark("barrier").workload_id == "microbench-barrier"
        with pytest.raises(ConfigurationError):
            gen_microbenchmark("nope")

    def test_dense_layer_counts(self):
        w = gen_dense_linear_layer(8, 256, 1)
        oc = derive_op_counts(w)
        assert oc.max_syn_ops == 2048 * 256
        tiny = gen_dense_linear_layer(1, 1, 8)
        oc = derive_op_counts(tiny)
        assert oc.max_syn_ops == 1
        assert derive_message_matrix(tiny).total_messages == 1

    def test_dense_layer_memory_filter(self):
        # 60 cores x 256 neurons at 1 bit: rows are 15360*256 bits per core
        with pytest.raises(InfeasibleWorkloadError):
            gen_dense_linear_layer(60, 256, 1)
        # exactly at the budget: 1024 x 1024 x 1 bit = 128 KiB
        w = gen_dense_linear_layer(4, 256, 1)
        assert max(synaptic_memory_bits(w).values()) == 1024 * 256 * 1

    def test_dense_sweep_is_feasible_subset(self):
        sweep = dense_linear_sweep()
        assert 0 < len(sweep) < 288
        budget_bits = 128 * 1024 * 8
        for w in sweep:
            assert max(synaptic_memory_bits(w).values()) <= budget_bits
        # recompute the expected count straight from the memory rule
        expected = 0
        for cores in (1, 4, 8, 16, 32, 60):
            for npc in (1, 16, 32, 64, 128, 256):
                for wb in range(1, 9):
                    if cores * npc * npc * wb <= budget_bits:
                        expected += 1
        assert len(sweep) == expected

    def test_tiled_identity_degenerate_tile(self):
        w = gen_tiled_identity(neurons_per_core=1)
        mm = derive_message_matrix(w)
        assert len(mm.flows) == 64
        assert all(f.messages == 1 for f in mm.flows.values())

    def test_qubo_stages_share_structure(self):
        checking, switching = gen_qubo(256, 8, 0.4, 0.1)
        assert checking.assignment == switching.assignment
        assert checking.populations[0].spikes_per_step == 0.4
        assert switching.populations[0].spikes_per_step == 0.1

    def test_qubo_rate_validation(self):
        with pytest.raises(ValidationError):
            gen_qubo(16, 2, 1.5, 0.1)

    def test_qubo_zero_rate_no_traffic(self):
        checking, _ = gen_qubo(64, 4, 0.0, 0.0)
        assert derive_message_matrix(checking).flows == {}

    def test_qubo_fills_column_major_from_bottom_left(self):
        checking, _ = gen_qubo(64, 3, 1.0, 1.0)
        cores = checking.assignment["state"]
        assert cores[0].router == RouterCoord(8, 1)
        assert all(c.router.j == 1 for c in cores)
