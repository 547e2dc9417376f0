"""Measurement-based gates on AKLT wires with Pauli-frame bookkeeping.

Gates are expressed as *branch functions*: each returns every possible
outcome of one measurement as an :class:`AttemptResult` carrying the
post-measurement state. Sampling picks one branch; the oracle walks all of
them. Any state object providing ``init_branches``, ``site_branches``,
``cphase_branches`` and ``readout_branches`` can be driven this way; the
bond-space :class:`LogicalRegister` is the fast one.

Byproduct tables are not hard-coded: they are recovered by decomposing the
outcome Kraus operators into ``Pauli @ intended gate``.
"""

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import mps, spin
from .errors import ImpossibleOutcomeError

STANDARD_LABELS = (1, 2, 3)
READOUT_LABELS = (0, 1)  # 0: boundary spin up (s^z = +1/2), 1: down
_PROBE_ANGLES = (0.7391, -2.113)


@dataclass(frozen=True)
class PauliFrame:
    """Pending byproduct ``X^x Z^z`` on one wire, phase discarded."""

    x: int = 0
    z: int = 0

    def __mul__(self, other):
        return PauliFrame(self.x ^ other.x, self.z ^ other.z)

    def matrix(self):
        m = np.eye(2, dtype=complex)
        if self.x:
            m = m @ spin.X
        if self.z:
            m = m @ spin.Z
        return m

    def label(self):
        return {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "XZ"}[(self.x, self.z)]

    def to_list(self):
        return [self.x, self.z]


IDENTITY = PauliFrame()
_ALL_FRAMES = [PauliFrame(x, z) for x in (0, 1) for z in (0, 1)]


def pauli_class(m, tol=1e-10):
    """Frame ``f`` with ``m = c * f.matrix()`` for ``|c| > 0``, else ``None``."""
    m = np.asarray(m)
    for f in _ALL_FRAMES:
        p = f.matrix()
        c = np.trace(p.conj().T @ m) / 2
        if abs(c) > tol and np.allclose(m, c * p, atol=tol):
            return f
    return None


def pauli_pair_class(m, tol=1e-10):
    """Pair ``(fa, fb)`` with ``m = c * fa (x) fb``, else ``None``."""
    m = np.asarray(m)
    for fa, fb in itertools.product(_ALL_FRAMES, repeat=2):
        p = np.kron(fa.matrix(), fb.matrix())
        c = np.trace(p.conj().T @ m) / 4
        if abs(c) > tol and np.allclose(m, c * p, atol=tol):
            return fa, fb
    return None


# -- logical gates ---------------------------------------------------------

def rz(theta):
    """``|0><0| + e^{i theta} |1><1|``."""
    return np.diag([1.0, np.exp(1j * theta)])


def rx(theta):
    """``|+><+| + e^{i theta} |-><-|``."""
    e = np.exp(1j * theta)
    return 0.5 * np.array([[1 + e, 1 - e], [1 - e, 1 + e]])


CPHASE = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
LOGICAL_GATES = {"Z": rz, "X": rx}


# -- measurement bases (rows are states on |1>, |2>, |3>) --------------------

def rz_basis(theta):
    e = np.exp(-1j * theta)
    return np.array(
        [[(1 + e) / 2, (1 - e) / 2, 0], [(1 - e) / 2, (1 + e) / 2, 0], [0, 0, 1]],
        dtype=complex,
    )


def rx_basis(theta):
    e = np.exp(1j * theta)
    return np.array(
        [[0, (1 + e) / 2, (1 - e) / 2], [0, (1 - e) / 2, (1 + e) / 2], [1, 0, 0]],
        dtype=complex,
    )


def standard_basis():
    return np.eye(3, dtype=complex)


BASES = {"Z": rz_basis, "X": rx_basis}


def outcome_kraus(basis, label):
    """Unnormalised bond operator ``<gamma_label|M>`` (a unitary)."""
    return np.sqrt(3) * mps.kraus_for_state(basis[label - 1])


@lru_cache(maxsize=None)
def rotation_table(axis):
    """``{label: (success, byproduct)}`` for a rotation about ``axis``.

    Successful outcomes satisfy ``<gamma|M> = byproduct @ R(theta)``, the
    failed one ``<gamma|M> = byproduct`` (logical identity), up to phase.
    """
    table = {}
    for label in STANDARD_LABELS:
        found = set()
        for theta in _PROBE_ANGLES:
            k = outcome_kraus(BASES[axis](theta), label)
            gate = LOGICAL_GATES[axis](theta)
            hit = pauli_class(k @ gate.conj().T)
            miss = pauli_class(k)
            found.add((True, hit) if hit is not None else (False, miss))
        if len(found) != 1 or None in {f for _, f in found}:
            raise AssertionError(f"outcome {label} of the {axis} basis has no Pauli decomposition")
        table[label] = found.pop()
    return table


@lru_cache(maxsize=None)
def teleport_table():
    """``{label: byproduct}`` for a standard-basis (teleportation) measurement."""
    return {a: pauli_class(outcome_kraus(standard_basis(), a)) for a in STANDARD_LABELS}


def adapt_angle(frame, axis, theta):
    """Measurement angle that realises ``R^axis(theta)`` behind ``frame``.

    ``X`` anticommutes with the ``Z``-rotation generator and ``Z`` with the
    ``X``-rotation generator; either flips the sign of the angle.
    """
    if axis == "Z":
        return -theta if frame.x else theta
    if axis == "X":
        return -theta if frame.z else theta
    raise ValueError(f"axis must be 'Z' or 'X', got {axis!r}")


# -- two-wire interaction --------------------------------------------------

def interaction_unitary():
    """``exp(i pi H_int / chi)`` on two spin-1 sites, ``S^z`` basis (9x9)."""
    u = np.eye(9, dtype=complex)
    u[0, 0] = np.exp(1j * np.pi)
    return u


def interaction_in_frame():
    """The 9x9 interaction unitary expressed in the ``|1>,|2>,|3>`` frame."""
    w = spin.frame_change()
    ww = np.kron(w.conj(), w.conj())
    return ww @ interaction_unitary() @ np.kron(w, w).T


def gamma_unitary():
    """Restriction of the interaction to ``span{|1>,|2>} (x) span{|1>,|2>}``."""
    idx = [0, 1, 3, 4]
    return interaction_in_frame()[np.ix_(idx, idx)]


def cphase_kraus(alpha, beta):
    """Bond operator (4x4) for the joint outcome ``(alpha, beta)``, times 3."""
    return _cphase_kraus_ops()[alpha, beta].copy()


@lru_cache(maxsize=None)
def _cphase_kraus_ops():
    return {pair: _cphase_kraus(*pair) for pair in itertools.product(STANDARD_LABELS, repeat=2)}


def _cphase_kraus(alpha, beta):
    k = mps.site_kraus() * np.sqrt(3)
    u = interaction_in_frame()
    row = (alpha - 1) * 3 + (beta - 1)
    out = np.zeros((4, 4), dtype=complex)
    for a2, b2 in itertools.product(range(3), repeat=2):
        c = u[row, a2 * 3 + b2]
        if c != 0:
            out += c * np.kron(k[a2], k[b2])
    return out


@lru_cache(maxsize=None)
def cphase_table():
    """``{(alpha, beta): (success, (byproduct_a, byproduct_b))}``."""
    table = {}
    for alpha, beta in itertools.product(STANDARD_LABELS, repeat=2):
        k = cphase_kraus(alpha, beta)
        hit = pauli_pair_class(k @ CPHASE.conj().T)
        if alpha != 3 and beta != 3 and hit is not None:
            table[alpha, beta] = (True, hit)
        else:
            miss = pauli_pair_class(k)
            if miss is None:
                raise AssertionError(f"CPHASE outcome {(alpha, beta)} has no Pauli decomposition")
            table[alpha, beta] = (False, miss)
    return table


def propagate_through_cphase(fa, fb):
    """Frames after commuting ``fa (x) fb`` through CPHASE (``X_a -> X_a Z_b``)."""
    return PauliFrame(fa.x, fa.z ^ fb.x), PauliFrame(fb.x, fb.z ^ fa.x)


# -- boundary spins --------------------------------------------------------

@lru_cache(maxsize=None)
def init_map():
    """``{r: (probability, bond bit)}`` for the site-0 ``s^z`` outcome ``r``.

    Derived from the boundary singlet: projecting the physical site 0 on
    ``|r>`` leaves the site-(N+1) bond qubit in a computational basis state.
    """
    out = {}
    y = mps.BOUNDARY_FRAME
    for r in READOUT_LABELS:
        bra = np.eye(2)[r] @ y
        v = np.kron(bra, np.eye(2)) @ mps.SINGLET
        p = float(np.vdot(v, v).real)
        bit = int(np.argmax(np.abs(v)))
        assert np.isclose(abs(v[bit]) ** 2, p)
        out[r] = (p, bit)
    return out


@lru_cache(maxsize=None)
def readout_bond_bits():
    """``{r: bond bit}``: the bond basis state selected by a site-(N+1) outcome ``r``."""
    y = mps.BOUNDARY_FRAME
    out = {}
    for r in READOUT_LABELS:
        phi = y.conj().T @ np.eye(2)[r]
        out[r] = int(np.argmax(np.abs(phi)))
    return out


def decode_readout(r, frame):
    """Logical bit for boundary outcome ``r`` (0 = up) given the pending frame."""
    return readout_bond_bits()[r] ^ frame.x


# -- bond-space backend ----------------------------------------------------

def _apply(vector, n, op, wires):
    k = len(wires)
    t = vector.reshape((2,) * n)
    opt = np.asarray(op).reshape((2,) * (2 * k))
    t = np.tensordot(opt, t, axes=(list(range(k, 2 * k)), list(wires)))
    t = np.moveaxis(t, list(range(k)), list(wires))
    return t.reshape(-1)


@dataclass(frozen=True)
class LogicalRegister:
    """Joint bond-frame state of the site-(N+1) qubits of ``n_wires`` chains.

    Wire 0 is the most significant tensor factor. Every wire starts in
    ``|0>`` and is set by :meth:`init_branches`.
    """

    vector: np.ndarray = field(repr=False)

    @classmethod
    def fresh(cls, n_wires):
        v = np.zeros(2**n_wires, dtype=complex)
        v[0] = 1.0
        return cls(v)

    @property
    def n_wires(self):
        return int(np.log2(self.vector.size))

    def _branch(self, op, wires, what):
        w = _apply(self.vector, self.n_wires, op, wires)
        p = float(np.vdot(w, w).real)
        if p < mps.ZERO_BRANCH:
            raise ImpossibleOutcomeError(f"zero-probability branch: {what}")
        return p, LogicalRegister(w / np.sqrt(p))

    def init_branches(self, wire):
        out = []
        for r, (p, bit) in init_map().items():
            state = LogicalRegister(_apply(self.vector, self.n_wires, spin.X, [wire])) if bit else self
            out.append((r, p, state))
        return out

    def site_branches(self, wire, site, basis):
        out = []
        for label in STANDARD_LABELS:
            k = mps.kraus_for_state(basis[label - 1])
            p, state = self._branch(k, [wire], f"wire {wire} site {site} outcome {label}")
            out.append((label, p, state))
        return out

    def cphase_branches(self, a, b, site):
        out = []
        for alpha, beta in itertools.product(STANDARD_LABELS, repeat=2):
            k = _cphase_kraus_ops()[alpha, beta] / 3
            p, state = self._branch(k, [a, b], f"wires {a},{b} site {site} outcome {(alpha, beta)}")
            out.append(((alpha, beta), p, state))
        return out

    def readout_branches(self, wire):
        out = []
        for r, bit in readout_bond_bits().items():
            proj = np.zeros((2, 2), dtype=complex)
            proj[bit, bit] = 1.0
            w = _apply(self.vector, self.n_wires, proj, [wire])
            p = float(np.vdot(w, w).real)
            if p >= mps.ZERO_BRANCH:
                out.append((r, p, LogicalRegister(w / np.sqrt(p))))
        return out


# -- attempts --------------------------------------------------------------

@dataclass(frozen=True)
class AttemptResult:
    """One measurement outcome and its consequences.

    ``frames`` are the updated frames of ``wires`` (same order); ``bit`` is
    set only for readouts.
    """

    kind: str
    wires: tuple
    sites: tuple
    basis: str
    angle: float
    outcome: object
    probability: float
    success: bool
    frame_delta: tuple
    frames: tuple
    state: object = field(repr=False, compare=False)
    bit: int = None


def init_branches(state, wire):
    out = []
    for r, p, new in state.init_branches(wire):
        bit = init_map()[r][1]
        delta = PauliFrame(x=bit)
        out.append(AttemptResult("init", (wire,), (0,), "z", 0.0, r, p, True, (delta,), (delta,), new))
    return out


def rotation_branches(state, wire, site, axis, angle, frame):
    """All outcomes of a rotation attempt measured at ``angle`` (already adapted)."""
    table = rotation_table(axis)
    out = []
    for label, p, new in state.site_branches(wire, site, BASES[axis](angle)):
        success, delta = table[label]
        out.append(
            AttemptResult("rotation", (wire,), (site,), axis, angle, label, p, success, (delta,), (frame * delta,), new)
        )
    return out


def teleport_branches(state, wire, site, frame):
    table = teleport_table()
    out = []
    for label, p, new in state.site_branches(wire, site, standard_basis()):
        delta = table[label]
        out.append(
            AttemptResult("teleport", (wire,), (site,), "std", 0.0, label, p, True, (delta,), (frame * delta,), new)
        )
    return out


def cphase_branches(state, a, b, site, frames):
    table = cphase_table()
    fa, fb = frames
    out = []
    for pair, p, new in state.cphase_branches(a, b, site):
        success, (da, db) = table[pair]
        if success:
            pa, pb = propagate_through_cphase(fa, fb)
        else:
            pa, pb = fa, fb
        out.append(
            AttemptResult("cphase", (a, b), (site, site), "std", 0.0, pair, p, success, (da, db), (pa * da, pb * db), new)
        )
    return out


def readout_branches(state, wire, frame, site=None):
    """Both outcomes of the boundary ``s^z`` measurement, with decoded bits."""
    out = []
    for r, p, new in state.readout_branches(wire):
        out.append(
            AttemptResult("readout", (wire,), (site,), "z", 0.0, r, p, True, (IDENTITY,), (frame,), new, decode_readout(r, frame))
        )
    return out


def sample(branches, rng):
    """Pick one branch with its probability using ``rng`` (a numpy Generator)."""
    p = np.array([b.probability for b in branches])
    return branches[int(rng.choice(len(branches), p=p / p.sum()))]


def init_wire(state, wire, rng):
    return sample(init_branches(state, wire), rng)


def attempt_rotation(state, wire, site, axis, angle, frame, rng):
    return sample(rotation_branches(state, wire, site, axis, angle, frame), rng)


def teleport_step(state, wire, site, frame, rng):
    return sample(teleport_branches(state, wire, site, frame), rng)


def cphase_attempt(state, a, b, site, frames, rng):
    return sample(cphase_branches(state, a, b, site, frames), rng)


def readout(state, wire, frame, rng, site=None):
    return sample(readout_branches(state, wire, frame, site), rng)
