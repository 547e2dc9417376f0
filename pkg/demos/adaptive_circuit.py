"""
Running a logical circuit by single-site measurements
=====================================================

"""

import math

from gmqc import compiler, oracle
from gmqc.compiler import CPhase, Init, LogicalCircuit, Readout, RX

circuit = LogicalCircuit(2, [Init(0), Init(1), RX(0, math.pi / 2), CPhase(0, 1), RX(1, math.pi / 2), Readout(0), Readout(1)])
print(circuit.to_text())

# a sampled run: failed rotations are retried on the next site
trace = compiler.run(circuit, n_sites=12, seed=2)
for r in trace.records:
    flag = "ok" if r.success else "retry"
    print(f"gate {r.gate} {r.kind:<9} sites={r.sites} outcome={r.outcome} {flag}")
print("bits:", trace.bits)

# exhaustive enumeration against the ideal output distribution
branches = oracle.enumerate_branches(circuit, 4)
got = oracle.decoded_distribution(branches)
want = oracle.ideal_distribution(circuit)
print("branches:", len(branches))
print("TVD vs ideal:", oracle.total_variation(got, want))

# expected cost
print("mean attempts per rotation:", compiler.expected_attempts("RX"))
print("mean attempts per CPHASE:", compiler.expected_attempts("CPHASE"))
