"""Independent ground truth for the measurement engine.

Three routes, each sharing as little as possible with the code it checks:

* :func:`dense_logical_unitary` multiplies the ideal logical gates;
* :func:`enumerate_branches` walks every measurement branch of the engine
  and lets the caller compare decoded states against the ideal unitary;
* :func:`dense_physical_sim` runs the same schedule on the full spin-chain
  Hilbert space, starting from an eigensolver ground state and applying
  plain projectors, so probabilities and post-measurement states can be
  compared with the bond-space engine and with the residual Hamiltonians.

:func:`bulk_gap_bruteforce` rebuilds the boundary-free Hamiltonian from the
two-site Casimir operator and diagonalises it without symmetry blocking.
"""

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from . import compiler, hamiltonian, linalg, mps, protocol, spin
from .errors import CombinatorialSizeError, DimensionCapError, ImpossibleOutcomeError

BRANCH_CAP = 1_000_000
DENSE_CAP = 200_000


# -- ideal logical evolution -------------------------------------------------

def _embed_logical(op, wires, n):
    if len(wires) == 1:
        (w,) = wires
        return linalg.kron(np.eye(2**w), op, np.eye(2 ** (n - w - 1)))
    a, b = wires
    if b == a + 1:
        return linalg.kron(np.eye(2**a), op, np.eye(2 ** (n - b - 1)))
    if a == b + 1:
        swap = np.eye(4)[[0, 2, 1, 3]]
        return _embed_logical(swap @ op @ swap, (b, a), n)
    raise ValueError("two-wire gates must act on adjacent wires")


def gate_matrix(gate):
    if gate.kind == "RZ":
        return protocol.rz(gate.theta)
    if gate.kind == "RX":
        return protocol.rx(gate.theta)
    if gate.kind == "CPHASE":
        return protocol.CPHASE
    return None


def dense_logical_unitary(circuit, gates=None):
    """Ordered product of the circuit's logical gates (``2^n x 2^n``)."""
    n = circuit.n_wires
    if n > 10:
        raise DimensionCapError(f"{n} wires exceed the logical simulation cap of 10")
    u = np.eye(2**n, dtype=complex)
    for g in circuit.gates if gates is None else gates:
        m = gate_matrix(g)
        if m is not None:
            u = _embed_logical(m, g.wires, n) @ u
    return u


def prefix_unitary(circuit):
    """Unitary of the gates before the first readout."""
    gates = []
    for g in circuit.gates:
        if g.kind == "READ":
            break
        gates.append(g)
    return dense_logical_unitary(circuit, gates)


def ideal_distribution(circuit):
    """``{bits: probability}`` of the ideal computational-basis readout."""
    n = circuit.n_wires
    amps = dense_logical_unitary(circuit)[:, 0]
    return {
        bits: float(abs(amps[i]) ** 2)
        for i, bits in enumerate(itertools.product((0, 1), repeat=n))
    }


def frames_matrix(frames):
    return linalg.kron(*[f.matrix() for f in frames])


# -- branch enumeration ------------------------------------------------------

@dataclass
class BranchRecord:
    """One leaf of the measurement tree."""

    outcomes: tuple
    probability: float
    status: str
    bits: tuple
    frames: tuple
    records: tuple = field(repr=False)
    snapshot_state: object = field(default=None, repr=False)
    snapshot_frames: tuple = None
    snapshot_sites: tuple = None
    final_state: object = field(default=None, repr=False)

    @property
    def failure_pattern(self):
        return tuple(
            (r.gate, r.success) for r in self.records if r.kind in ("rotation", "cphase")
        )


def outcome_key(records):
    return tuple((r.kind, r.wires, r.outcome) for r in records)


def _record(cur):
    snap_state = snap_frames = snap_sites = None
    if cur.snapshot is not None:
        snap_state, snap_frames, snap_sites = cur.snapshot
    return BranchRecord(
        outcomes=outcome_key(cur.records),
        probability=cur.probability,
        status=cur.status,
        bits=cur.bits,
        frames=cur.frames,
        records=cur.records,
        snapshot_state=snap_state,
        snapshot_frames=snap_frames,
        snapshot_sites=snap_sites,
        final_state=cur.state,
    )


def _raise_cap(cap):
    def hit(visited):
        raise CombinatorialSizeError(f"branch enumeration exceeded the cap of {cap} events")
    return hit


def enumerate_branches(circuit, max_sites, cap=BRANCH_CAP, flush=False, state=None):
    """Every measurement branch of ``circuit`` with ``max_sites`` sites per wire.

    Branches that run out of sites end with ``status == "exhausted"``; their
    probabilities are still included so the total is 1.
    """
    compiler.check(circuit)
    if state is None:
        state = protocol.LogicalRegister.fresh(circuit.n_wires)
    leaves = compiler.explore(circuit, max_sites, state, flush=flush, cap=cap, on_cap=_raise_cap(cap))
    return [_record(c) for c in leaves]


def decoded_snapshot(branch):
    """Snapshot logical vector with the pending byproducts undone."""
    v = branch.snapshot_state.vector
    return frames_matrix(branch.snapshot_frames).conj().T @ v


def snapshot_fidelities(circuit, branches):
    """Fidelity of each completed branch's decoded state with ``U_prefix |0..0>``."""
    target = prefix_unitary(circuit)[:, 0]
    return [
        linalg.fidelity(target, decoded_snapshot(b))
        for b in branches
        if b.status == "complete" and b.snapshot_state is not None
    ]


def decoded_distribution(branches):
    """Readout distribution of completed branches, renormalised."""
    dist, total = {}, 0.0
    for b in branches:
        if b.status != "complete":
            continue
        dist[b.bits] = dist.get(b.bits, 0.0) + b.probability
        total += b.probability
    return {k: v / total for k, v in dist.items()} if total > 0 else {}


def total_variation(p, q):
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def distribution_by_failure_pattern(branches):
    """``{failure pattern: decoded distribution}`` over completed branches."""
    groups = {}
    for b in branches:
        if b.status == "complete":
            groups.setdefault(b.failure_pattern, []).append(b)
    return {k: decoded_distribution(v) for k, v in groups.items()}


def attempt_outcome_laws(state, wire_count, rng_state=None):
    """Branch probabilities of every single-wire attempt type and CPHASE on ``state``.

    Returns ``{name: [probabilities]}``.
    """
    f = protocol.IDENTITY
    laws = {}
    for w in range(wire_count):
        theta = 1.234 if rng_state is None else float(rng_state.uniform(-np.pi, np.pi))
        laws[f"RZ[{w}]"] = [b.probability for b in protocol.rotation_branches(state, w, 1, "Z", theta, f)]
        laws[f"RX[{w}]"] = [b.probability for b in protocol.rotation_branches(state, w, 1, "X", theta, f)]
        laws[f"teleport[{w}]"] = [b.probability for b in protocol.teleport_branches(state, w, 1, f)]
    for a in range(wire_count - 1):
        laws[f"CPHASE[{a},{a + 1}]"] = [
            b.probability for b in protocol.cphase_branches(state, a, a + 1, 1, (f, f))
        ]
    return laws


# -- dense physical simulation -----------------------------------------------

@dataclass(frozen=True)
class DenseChains:
    """Full Hilbert-space state of ``n_wires`` AKLT chains with boundary spins.

    Tensor order: wire 0 sites ``0..N+1``, then wire 1, and so on; bulk sites
    in the ``S^z`` basis. ``next_bulk[w]`` is the first unmeasured bulk site
    and ``initialized[w]`` whether site 0 has been measured. ``max_residual``
    is the largest residual-Hamiltonian norm seen along the branch.
    """

    n_sites: int
    psi: np.ndarray = field(repr=False)
    initialized: tuple
    next_bulk: tuple
    max_residual: float = 0.0

    @classmethod
    def ground(cls, n_wires, n_sites):
        spec = hamiltonian.ChainSpec(n_sites)
        dim = spec.dim**n_wires
        if dim > DENSE_CAP:
            raise DimensionCapError(f"dense simulation dimension {dim} exceeds {DENSE_CAP}")
        _, basis = hamiltonian.chain_ground_space(spec)
        if basis.shape[1] != 1:
            raise AssertionError("chain ground state is not unique")
        g = basis[:, 0]
        psi = linalg.kron(*[g[:, None]] * n_wires)[:, 0]
        state = cls(n_sites, psi, (False,) * n_wires, (1,) * n_wires)
        return replace(state, max_residual=state.residual())

    @property
    def n_wires(self):
        return len(self.initialized)

    @property
    def dims(self):
        return ([2] + [3] * self.n_sites + [2]) * self.n_wires

    def pos(self, wire, site):
        return wire * (self.n_sites + 2) + site

    def residual_terms(self, wire):
        spec = hamiltonian.ChainSpec(self.n_sites)
        j = self.next_bulk[wire]
        if not self.initialized[wire]:
            return hamiltonian.terms(spec)
        if j > self.n_sites:
            return []
        return hamiltonian.terms(spec, first_bulk=j, include_left=False)

    def residual(self):
        """``|| sum_w H_w(residual) psi ||`` over all wires."""
        total = np.zeros_like(self.psi)
        for w in range(self.n_wires):
            for _, p, op in self.residual_terms(w):
                total += linalg.apply_local(op, self.psi, [self.pos(w, p), self.pos(w, p) + 1], self.dims)
        return float(np.linalg.norm(total))

    def _project(self, vectors, positions, label, **changes):
        psi = self.psi
        for v, p in zip(vectors, positions):
            proj = np.outer(v, v.conj())
            psi = linalg.apply_local(proj, psi, [p], self.dims)
        prob = float(np.vdot(psi, psi).real)
        if prob < mps.ZERO_BRANCH:
            return None
        new = replace(self, psi=psi / np.sqrt(prob), **changes)
        return label, prob, replace(new, max_residual=max(self.max_residual, new.residual()))

    def init_branches(self, wire):
        init = list(self.initialized)
        init[wire] = True
        out = []
        for r in protocol.READOUT_LABELS:
            b = self._project([np.eye(2)[r]], [self.pos(wire, 0)], r, initialized=tuple(init))
            if b is not None:
                out.append(b)
        return out

    def _frame_states(self, basis):
        return [spin.to_sz(row) for row in basis]

    def site_branches(self, wire, site, basis):
        if site != self.next_bulk[wire]:
            raise ValueError(f"wire {wire}: measuring site {site}, expected {self.next_bulk[wire]}")
        nb = list(self.next_bulk)
        nb[wire] = site + 1
        out = []
        for label, v in zip(protocol.STANDARD_LABELS, self._frame_states(basis)):
            b = self._project([v], [self.pos(wire, site)], label, next_bulk=tuple(nb))
            if b is None:
                raise ImpossibleOutcomeError(f"dense branch {label} at wire {wire} site {site}")
            out.append(b)
        return out

    def cphase_branches(self, a, b, site):
        pa, pb = self.pos(a, site), self.pos(b, site)
        coupled = replace(
            self,
            psi=linalg.apply_local(protocol.interaction_unitary(), self.psi, [pa, pb], self.dims),
        )
        nb = list(self.next_bulk)
        nb[a] = nb[b] = site + 1
        states = self._frame_states(protocol.standard_basis())
        out = []
        for (la, va), (lb, vb) in itertools.product(zip(protocol.STANDARD_LABELS, states), repeat=2):
            br = coupled._project([va, vb], [pa, pb], (la, lb), next_bulk=tuple(nb))
            if br is None:
                raise ImpossibleOutcomeError(f"dense CPHASE branch {(la, lb)}")
            out.append(br)
        return out

    def readout_branches(self, wire):
        out = []
        for r in protocol.READOUT_LABELS:
            b = self._project([np.eye(2)[r]], [self.pos(wire, self.n_sites + 1)], r)
            if b is not None:
                out.append(b)
        return out

    def boundary_density(self):
        """Reduced density matrix of all site-(N+1) spins (physical frame)."""
        n = self.n_wires
        keep = [self.pos(w, self.n_sites + 1) for w in range(n)]
        t = self.psi.reshape(self.dims)
        rest = [k for k in range(t.ndim) if k not in keep]
        m = np.transpose(t, keep + rest).reshape(2**n, -1)
        return m @ m.conj().T


def teleport_channel(rho, wire, n_wires):
    """Average over the three standard-basis outcomes on one bond qubit."""
    out = np.zeros_like(rho)
    for k in mps.site_kraus():
        op = _embed_logical(k, (wire,), n_wires)
        out += op @ rho @ op.conj().T
    return out


def predicted_boundary_density(vector, remaining):
    """Physical boundary state implied by a bond vector and unused sites per wire.

    Unused sites act as the teleportation channel; the physical spin is the
    bond qubit seen through ``BOUNDARY_FRAME``.
    """
    n = len(remaining)
    rho = np.outer(vector, vector.conj())
    for w, r in enumerate(remaining):
        for _ in range(r):
            rho = teleport_channel(rho, w, n)
    y = linalg.kron(*[mps.BOUNDARY_FRAME] * n)
    return y @ rho @ y.conj().T


@dataclass
class DenseBranch:
    record: BranchRecord
    max_residual: float
    boundary_density: np.ndarray = field(default=None, repr=False)


def dense_physical_sim(circuit, n_sites, flush=True, cap=BRANCH_CAP):
    """Run ``circuit`` on the full Hilbert space of ``n_wires`` chains.

    Returns one :class:`DenseBranch` per leaf. ``max_residual`` is the largest
    ``||H_residual psi||`` after any measurement on that branch, and
    ``boundary_density`` the reduced state of the site-(N+1) spins at the
    first readout when every wire has been initialised by then.
    """
    compiler.check(circuit)
    if circuit.n_wires > 2 or n_sites > 4:
        raise DimensionCapError("dense physical simulation supports at most 2 wires and N <= 4")
    start = DenseChains.ground(circuit.n_wires, n_sites)
    out = []
    for cur in compiler.explore(circuit, n_sites, start, flush=flush, cap=cap, on_cap=_raise_cap(cap)):
        rec = _record(cur)
        rho = None
        snap = rec.snapshot_state
        if snap is not None and all(snap.initialized):
            rho = snap.boundary_density()
        residual = cur.state.max_residual
        out.append(DenseBranch(rec, residual, rho))
    return out


def engine_boundary_density(branch, n_sites):
    """Prediction of :meth:`DenseChains.boundary_density` from an engine branch."""
    remaining = [n_sites - (s - 1) for s in branch.snapshot_sites]
    return predicted_boundary_density(branch.snapshot_state.vector, remaining)


# -- independent spectral oracle ---------------------------------------------

def _ladder_spin1():
    sp = np.sqrt(2) * (np.eye(3, k=1))
    sm = sp.T
    sz = np.diag([1.0, 0.0, -1.0])
    return (sp + sm) / 2, (sp - sm) / 2j, sz


def spin2_projector_from_casimir():
    """Projector on total spin 2 from the eigenvectors of ``(S_1 + S_2)^2``."""
    ops = _ladder_spin1()
    total = [np.kron(s, np.eye(3)) + np.kron(np.eye(3), s) for s in ops]
    casimir = sum(t @ t for t in total)
    w, v = np.linalg.eigh(casimir)
    top = v[:, np.isclose(w, 6.0)]
    return (top @ top.conj().T).real


def bulk_gap_bruteforce(n_sites, threshold=1e-6):
    """Gap of the boundary-free chain from a full, unblocked eigensolve."""
    p = spin2_projector_from_casimir()
    dim = 3**n_sites
    h = np.zeros((dim, dim))
    for k in range(n_sites - 1):
        h += np.kron(np.kron(np.eye(3**k), p), np.eye(3 ** (n_sites - k - 2)))
    w = np.linalg.eigvalsh(h)
    return float(w[w > threshold][0])
