import math

import numpy as np
import pytest

from gmqc import oracle, protocol, verify
from gmqc.compiler import CPhase, Init, LogicalCircuit, Readout, RX, RZ
from gmqc.errors import CombinatorialSizeError, DimensionCapError


def test_ideal_distribution_hand_values():
    flip = LogicalCircuit(1, [Init(0), RX(0, math.pi), Readout(0)])
    d = oracle.ideal_distribution(flip)
    assert d[(1,)] == pytest.approx(1.0) and d.get((0,), 0.0) < 1e-15
    half = LogicalCircuit(1, [Init(0), RX(0, math.pi / 2), RZ(0, 0.3), Readout(0)])
    d = oracle.ideal_distribution(half)
    assert d[(0,)] == pytest.approx(0.5) and d[(1,)] == pytest.approx(0.5)


def test_cphase_in_ideal_unitary():
    c = LogicalCircuit(2, [Init(0), Init(1), CPhase(0, 1), Readout(0), Readout(1)])
    np.testing.assert_allclose(oracle.dense_logical_unitary(c), np.diag([1, 1, 1, -1]), atol=1e-14)


def test_wire_zero_is_most_significant():
    c = LogicalCircuit(2, [Init(0), Init(1), RX(0, math.pi), Readout(0), Readout(1)])
    d = oracle.ideal_distribution(c)
    assert d[(1, 0)] == pytest.approx(1.0)


def test_enumeration_probabilities_sum_to_one():
    c = LogicalCircuit(2, [Init(0), Init(1), RZ(1, 0.4), CPhase(0, 1), Readout(0), Readout(1)])
    branches = oracle.enumerate_branches(c, 4)
    assert sum(b.probability for b in branches) == pytest.approx(1.0, abs=1e-12)
    assert {b.status for b in branches} == {"complete", "exhausted"}


def test_exhaustion_probability_matches_geometric_law():
    # one rotation on N sites fails every attempt with probability (1/3)^N
    c = LogicalCircuit(1, [Init(0), RZ(0, 1.0), Readout(0)])
    for n in (1, 2, 4):
        lost = sum(b.probability for b in oracle.enumerate_branches(c, n) if b.status == "exhausted")
        assert lost == pytest.approx(3.0**-n, abs=1e-12)


def test_enumeration_matches_ideal():
    c = LogicalCircuit(2, [Init(0), Init(1), RX(0, 1.1), CPhase(0, 1), RX(1, -0.7), Readout(0), Readout(1)])
    branches = oracle.enumerate_branches(c, 4)
    assert min(oracle.snapshot_fidelities(c, branches)) > 1 - 1e-10
    tvd = oracle.total_variation(oracle.decoded_distribution(branches), oracle.ideal_distribution(c))
    assert tvd < 1e-10
    for dist in oracle.distribution_by_failure_pattern(branches).values():
        assert oracle.total_variation(dist, oracle.ideal_distribution(c)) < 1e-10


def test_branch_cap():
    c = LogicalCircuit(1, [Init(0), RZ(0, 1.0), RX(0, 1.0), Readout(0)])
    with pytest.raises(CombinatorialSizeError):
        oracle.enumerate_branches(c, 8, cap=10)


def test_outcome_laws_on_random_state(rng):
    laws = oracle.attempt_outcome_laws(verify.random_state(rng, 3), 3, rng)
    for name, probs in laws.items():
        target = 1 / 9 if name.startswith("CPHASE") else 1 / 3
        assert probs == pytest.approx([target] * len(probs), abs=1e-12)


def test_total_variation():
    assert oracle.total_variation({(0,): 1.0}, {(1,): 1.0}) == 1.0
    assert oracle.total_variation({(0,): 0.5, (1,): 0.5}, {(0,): 0.5, (1,): 0.5}) == 0.0


def test_dense_ground_state_is_annihilated():
    chains = oracle.DenseChains.ground(2, 2)
    assert chains.residual() < 1e-10
    assert np.linalg.norm(chains.psi) == pytest.approx(1.0)


def test_dense_boundary_density_after_init():
    # each unused site shrinks the Bloch vector by -1/3, so two sites leave 1/9
    c = LogicalCircuit(1, [Init(0), Readout(0)])
    for b in oracle.dense_physical_sim(c, 2):
        rho = b.boundary_density
        assert abs(rho[0, 1]) < 1e-12
        assert sorted(np.diag(rho).real) == pytest.approx([4 / 9, 5 / 9], abs=1e-12)


@pytest.mark.parametrize("case", range(len(verify.DENSE_CASES)))
def test_dense_simulation_agrees_with_engine(case):
    row = verify.measure_dense_agreement([verify.DENSE_CASES[case]])[0]
    assert row["unmatched"] == 0
    assert row["probability_error"] < 1e-10
    assert row["density_error"] < 1e-10
    assert row["max_residual"] < 1e-8
    assert row["probability_sum"] == pytest.approx(1.0, abs=1e-10)


def test_dense_simulation_size_cap():
    c = LogicalCircuit(1, [Init(0), Readout(0)])
    with pytest.raises(DimensionCapError):
        oracle.dense_physical_sim(c, 5)


def test_bruteforce_gap_small_values():
    assert oracle.bulk_gap_bruteforce(2) == pytest.approx(1.0, abs=1e-12)
    # three sites: two bonds of P2
    assert 0.35 < oracle.bulk_gap_bruteforce(3) < 1.0
