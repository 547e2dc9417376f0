import json
import math

import numpy as np
import pytest

from gmqc import compiler, oracle
from gmqc.compiler import CPhase, Init, LogicalCircuit, Readout, RX, RZ
from gmqc.errors import BudgetExhaustedError, CircuitError

BELL = LogicalCircuit(2, [Init(0), Init(1), RX(0, math.pi / 2), CPhase(0, 1), RX(1, math.pi / 2), Readout(0), Readout(1)])


def test_text_round_trip():
    text = """
    # prepare and rotate
    INIT 0
    RZ 0 0.25
    rx 0 -1.5   # lowercase is fine
    READ 0
    """
    c = compiler.parse_circuit(text)
    assert c.n_wires == 1
    assert [g.kind for g in c.gates] == ["INIT", "RZ", "RX", "READ"]
    assert compiler.parse_circuit(c.to_text()) == c


def test_json_round_trip():
    assert compiler.parse_circuit(BELL.to_json()) == BELL
    raw = json.dumps([{"gate": "INIT", "wire": 0}, {"gate": "RZ", "wires": [0], "theta": 1}, {"gate": "READ", "wires": [0]}])
    assert compiler.parse_circuit(raw).gates[1].theta == 1.0


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("FOO 0", "unknown gate"),
        ("RZ 0", "numeric angle"),
        ("RZ 0 nan", "finite"),
        ("CPHASE 0", "2 wire"),
        ("READ 0 1.0", "no angle"),
        ("RZ 0 1 2", "too many"),
        ("INIT x", "integers"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(CircuitError, match=fragment):
        compiler.parse_text(text)


def test_parse_json_errors():
    with pytest.raises(CircuitError):
        compiler.parse_json("{not json")
    with pytest.raises(CircuitError):
        compiler.parse_json('[{"wires": [0]}]')


@pytest.mark.parametrize(
    "gates, n, fragment",
    [
        ([Init(0), Init(2), CPhase(0, 2), Readout(0), Readout(2)], 3, "adjacent"),
        ([Init(0), Readout(0), RZ(0, 1.0)], 1, "after READ"),
        ([RZ(0, 1.0), Readout(0)], 1, "before INIT"),
        ([Init(0), Init(0), Readout(0)], 1, "twice"),
        ([Init(0)], 1, "missing READ"),
        ([Init(0), Readout(0)], 2, "missing INIT"),
        ([Init(0), RZ(3, 1.0), Readout(0)], 1, "outside"),
    ],
)
def test_validate_diagnostics(gates, n, fragment):
    problems = compiler.validate(LogicalCircuit(n, gates))
    assert any(fragment in p for p in problems), problems
    with pytest.raises(CircuitError):
        compiler.check(LogicalCircuit(n, gates))


def test_validate_accepts_good_circuit():
    assert compiler.validate(BELL) == []
    assert len(BELL.logical_gates) == 3


def test_run_is_deterministic():
    a = compiler.run(BELL, 12, seed=5)
    b = compiler.run(BELL, 12, seed=5)
    assert a.to_dict() == b.to_dict()
    assert json.loads(json.dumps(a.to_dict())) == a.to_dict()


def test_run_consumes_every_site_with_flush():
    t = compiler.run(BELL, 12, seed=1)
    assert t.status == "complete"
    assert t.sites_consumed == [12, 12]
    reads = t.attempts("readout")
    assert [r.sites for r in reads] == [(13,), (13,)]
    assert all(b in (0, 1) for b in t.bits)


def test_run_without_flush_stops_early():
    t = compiler.run(LogicalCircuit(1, [Init(0), Readout(0)]), 5, seed=0, flush=False)
    assert t.sites_consumed == [0]
    assert t.bits == [0]  # INIT leaves |0> and no gate follows


def test_rotation_retries_until_success():
    c = LogicalCircuit(1, [Init(0), RZ(0, 0.8), Readout(0)])
    for seed in range(30):
        t = compiler.run(c, 30, seed, flush=False)
        rot = t.attempts("rotation")
        assert [r.success for r in rot] == [False] * (len(rot) - 1) + [True]
        assert [r.sites[0] for r in rot] == list(range(1, len(rot) + 1))


def test_cphase_aligns_wires_first():
    c = LogicalCircuit(2, [Init(0), Init(1), RZ(0, 1.0), CPhase(0, 1), Readout(0), Readout(1)])
    t = compiler.run(c, 30, seed=3, flush=False)
    lead = len(t.attempts("rotation"))
    tele = t.attempts("teleport", gate=3)
    assert len(tele) == lead
    assert all(r.wires == (1,) for r in tele)
    first = t.attempts("cphase")[0]
    assert first.sites == (lead + 1, lead + 1)


def test_budget_exhaustion_carries_partial_trace():
    c = LogicalCircuit(1, [Init(0)] + [RZ(0, 0.5)] * 6 + [Readout(0)])
    with pytest.raises(BudgetExhaustedError) as info:
        compiler.run(c, 3, seed=0)
    err = info.value
    assert err.trace.status == "exhausted"
    assert 1 <= err.gate_index <= 6
    assert err.trace.records


def test_adapted_angles_in_trace():
    c = LogicalCircuit(1, [Init(0), RZ(0, 0.7), RX(0, 0.4), Readout(0)])
    for seed in range(10):
        t = compiler.run(c, 40, seed)
        for r in t.attempts("rotation"):
            assert abs(r.angle) == pytest.approx(0.7 if r.basis == "Z" else 0.4)


def test_logical_state_snapshot_matches_ideal():
    t = compiler.run(BELL, 20, seed=4)
    state = t.logical_frames and oracle.frames_matrix(t.logical_frames).conj().T @ t.logical_state
    ideal = oracle.dense_logical_unitary(BELL)[:, 0]
    assert abs(np.vdot(ideal, state)) ** 2 == pytest.approx(1.0, abs=1e-10)


def test_resource_estimates():
    assert compiler.expected_attempts("RZ") == pytest.approx(1.5)
    assert compiler.expected_attempts("CPHASE") == pytest.approx(2.25)
    assert compiler.expected_attempts("READ") == 0
    est = compiler.expected_sites(LogicalCircuit(1, [Init(0), RZ(0, 1), RX(0, 1), Readout(0)]))
    assert est == pytest.approx([3.0])
