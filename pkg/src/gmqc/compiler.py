"""Logical circuits, their validation, and adaptive execution on AKLT wires.

A circuit runs as a sequence of measurement *events*. Each event branches;
:func:`run` samples one branch per event with a seeded generator, while
:func:`explore` (used by the oracle) can follow all of them. Both share the
same scheduler, so sampled traces are always paths of the enumerated tree.

Scheduling rules:

* a rotation or CPHASE that fails (heralded logical identity) is retried on
  the next site(s) of the same wire(s);
* before a CPHASE the lagging wire teleports forward until both wires sit
  at the same site index;
* before a readout, unused sites of that wire are teleported through, so the
  boundary spin carries the logical state alone (``flush=True``).
"""

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import protocol
from .errors import BudgetExhaustedError, CircuitError
from .protocol import IDENTITY, LogicalRegister

GATE_KINDS = ("INIT", "RZ", "RX", "CPHASE", "READ")
ROTATION_SUCCESS = 2 / 3
CPHASE_SUCCESS = 4 / 9


@dataclass(frozen=True)
class Gate:
    kind: str
    wires: tuple
    theta: float = None

    def to_dict(self):
        d = {"gate": self.kind, "wires": list(self.wires)}
        if self.theta is not None:
            d["theta"] = self.theta
        return d

    def to_line(self):
        parts = [self.kind, *map(str, self.wires)]
        if self.theta is not None:
            parts.append(repr(float(self.theta)))
        return " ".join(parts)


def Init(w):
    return Gate("INIT", (w,))


def RZ(w, theta):
    return Gate("RZ", (w,), float(theta))


def RX(w, theta):
    return Gate("RX", (w,), float(theta))


def CPhase(a, b):
    return Gate("CPHASE", (a, b))


def Readout(w):
    return Gate("READ", (w,))


@dataclass(frozen=True)
class LogicalCircuit:
    n_wires: int
    gates: tuple

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def to_text(self):
        return "\n".join(g.to_line() for g in self.gates) + "\n"

    def to_json(self):
        return json.dumps([g.to_dict() for g in self.gates])

    @property
    def logical_gates(self):
        return [g for g in self.gates if g.kind in ("RZ", "RX", "CPHASE")]


# -- parsing ---------------------------------------------------------------

_ARITY = {"INIT": (1, False), "RZ": (1, True), "RX": (1, True), "CPHASE": (2, False), "READ": (1, False)}


def _make_gate(kind, wires, theta, where):
    kind = kind.upper()
    if kind not in _ARITY:
        raise CircuitError(f"{where}: unknown gate {kind!r}")
    n, has_theta = _ARITY[kind]
    if len(wires) != n:
        raise CircuitError(f"{where}: {kind} takes {n} wire(s), got {len(wires)}")
    try:
        wires = tuple(int(w) for w in wires)
    except (TypeError, ValueError):
        raise CircuitError(f"{where}: wire indices must be integers") from None
    if has_theta:
        try:
            theta = float(theta)
        except (TypeError, ValueError):
            raise CircuitError(f"{where}: {kind} needs a numeric angle") from None
        if not math.isfinite(theta):
            raise CircuitError(f"{where}: angle must be finite")
    elif theta is not None:
        raise CircuitError(f"{where}: {kind} takes no angle")
    return Gate(kind, wires, theta if has_theta else None)


def parse_text(text, n_wires=None):
    """Parse ``INIT w`` / ``RZ w theta`` / ``RX w theta`` / ``CPHASE a b`` / ``READ w`` lines.

    Blank lines and ``#`` comments are ignored. ``n_wires`` defaults to one
    more than the largest wire index mentioned.
    """
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *args = line.split()
        kind = kind.upper()
        n = _ARITY.get(kind, (len(args), False))[0]
        theta = args[n] if len(args) > n else None
        if len(args) > n + 1:
            raise CircuitError(f"line {lineno}: too many fields")
        gates.append(_make_gate(kind, args[:n], theta, f"line {lineno}"))
    return _finish(gates, n_wires)


def parse_json(text, n_wires=None):
    """Parse a JSON array of ``{"gate": ..., "wires": [...], "theta": ...}`` objects.

    A top-level object ``{"n_wires": n, "gates": [...]}`` is accepted too.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitError(f"invalid JSON: {exc}") from None
    if isinstance(data, dict):
        n_wires = data.get("n_wires", n_wires)
        data = data.get("gates")
    if not isinstance(data, list):
        raise CircuitError("JSON circuit must be a list of gate objects")
    gates = []
    for i, obj in enumerate(data):
        if not isinstance(obj, dict) or "gate" not in obj:
            raise CircuitError(f"gate {i}: expected an object with a 'gate' field")
        wires = obj.get("wires", [obj["wire"]] if "wire" in obj else [])
        gates.append(_make_gate(str(obj["gate"]), wires, obj.get("theta"), f"gate {i}"))
    return _finish(gates, n_wires)


def parse_circuit(text, n_wires=None):
    """Parse either format, choosing JSON when the text starts with ``[`` or ``{``."""
    if text.lstrip()[:1] in ("[", "{"):
        return parse_json(text, n_wires)
    return parse_text(text, n_wires)


def _finish(gates, n_wires):
    if n_wires is None:
        n_wires = 1 + max((w for g in gates for w in g.wires), default=-1)
    return LogicalCircuit(int(n_wires), gates)


def validate(circuit):
    """Return a list of diagnostics; empty means the circuit is runnable."""
    problems = []
    n = circuit.n_wires
    if n < 1:
        problems.append("circuit has no wires")
    status = ["new"] * max(n, 0)
    for i, g in enumerate(circuit.gates):
        where = f"gate {i} ({g.to_line()})"
        if g.kind not in GATE_KINDS:
            problems.append(f"{where}: unknown gate kind")
            continue
        bad = [w for w in g.wires if not 0 <= w < n]
        if bad:
            problems.append(f"{where}: wire(s) {bad} outside 0..{n - 1}")
            continue
        if g.kind == "CPHASE":
            a, b = g.wires
            if abs(a - b) != 1:
                problems.append(f"{where}: CPHASE needs adjacent wires")
        if g.kind in ("RZ", "RX") and (g.theta is None or not math.isfinite(g.theta)):
            problems.append(f"{where}: missing or non-finite angle")
        for w in g.wires:
            if g.kind == "INIT":
                if status[w] != "new":
                    problems.append(f"{where}: wire {w} initialised twice")
                status[w] = "live"
            elif status[w] == "new":
                problems.append(f"{where}: wire {w} used before INIT")
                status[w] = "live"
            elif status[w] == "read":
                problems.append(f"{where}: wire {w} used after READ")
            if g.kind == "READ" and status[w] == "live":
                status[w] = "read"
    for w, s in enumerate(status):
        if s == "new":
            problems.append(f"wire {w}: missing INIT")
        elif s == "live":
            problems.append(f"wire {w}: missing READ")
    return problems


def check(circuit):
    problems = validate(circuit)
    if problems:
        raise CircuitError(problems)
    return circuit


# -- execution -------------------------------------------------------------

@dataclass(frozen=True)
class AttemptRecord:
    """One logged measurement event."""

    gate: int
    kind: str
    wires: tuple
    sites: tuple
    basis: str
    angle: float
    outcome: object
    probability: float
    success: bool
    frame_delta: tuple
    bit: int = None

    def to_dict(self):
        out = self.outcome
        return {
            "gate": self.gate,
            "kind": self.kind,
            "wires": list(self.wires),
            "sites": list(self.sites),
            "basis": self.basis,
            "angle": self.angle,
            "outcome": list(out) if isinstance(out, tuple) else out,
            "probability": self.probability,
            "success": self.success,
            "frame_delta": [f.label() for f in self.frame_delta],
            "bit": self.bit,
        }


@dataclass(frozen=True)
class Cursor:
    """Scheduler position inside one branch of a run."""

    state: object
    frames: tuple
    next_site: tuple
    gate: int = 0
    records: tuple = ()
    probability: float = 1.0
    bits: tuple = ()
    snapshot: tuple = None
    status: str = "running"
    failed_gate: int = None


def _start(circuit, state):
    n = circuit.n_wires
    return Cursor(state, (IDENTITY,) * n, (1,) * n, bits=(None,) * n)


def _advance(cur, gate_index, res, done):
    frames = list(cur.frames)
    for w, f in zip(res.wires, res.frames):
        frames[w] = f
    next_site = list(cur.next_site)
    if res.kind in ("rotation", "teleport", "cphase"):
        for w in res.wires:
            next_site[w] += 1
    bits = list(cur.bits)
    if res.bit is not None:
        bits[res.wires[0]] = res.bit
    rec = AttemptRecord(
        gate_index, res.kind, res.wires, res.sites, res.basis, res.angle,
        res.outcome, res.probability, res.success, res.frame_delta, res.bit,
    )
    return replace(
        cur,
        state=res.state,
        frames=tuple(frames),
        next_site=tuple(next_site),
        gate=gate_index + 1 if done(res) else gate_index,
        records=cur.records + (rec,),
        probability=cur.probability * res.probability,
        bits=tuple(bits),
    )


def step(circuit, cur, n_sites, flush=True):
    """Branch the next measurement event of ``cur``.

    Returns a list of child cursors, or an empty list when ``cur`` is
    terminal (finished, or stopped on an exhausted wire).
    """
    if cur.status != "running":
        return []
    if cur.gate >= len(circuit.gates):
        return []
    g = circuit.gates[cur.gate]
    i = cur.gate

    def exhausted():
        return [replace(cur, status="exhausted", failed_gate=i)]

    if g.kind == "INIT":
        (w,) = g.wires
        return [_advance(cur, i, r, lambda r: True) for r in protocol.init_branches(cur.state, w)]

    if g.kind in ("RZ", "RX"):
        (w,) = g.wires
        site = cur.next_site[w]
        if site > n_sites:
            return exhausted()
        axis = g.kind[1]
        angle = protocol.adapt_angle(cur.frames[w], axis, g.theta)
        results = protocol.rotation_branches(cur.state, w, site, axis, angle, cur.frames[w])
        return [_advance(cur, i, r, lambda r: r.success) for r in results]

    if g.kind == "CPHASE":
        a, b = g.wires
        sa, sb = cur.next_site[a], cur.next_site[b]
        if sa != sb:
            lag = a if sa < sb else b
            if max(sa, sb) > n_sites:
                return exhausted()
            results = protocol.teleport_branches(cur.state, lag, cur.next_site[lag], cur.frames[lag])
            return [_advance(cur, i, r, lambda r: False) for r in results]
        if sa > n_sites:
            return exhausted()
        results = protocol.cphase_branches(cur.state, a, b, sa, (cur.frames[a], cur.frames[b]))
        return [_advance(cur, i, r, lambda r: r.success) for r in results]

    if g.kind == "READ":
        (w,) = g.wires
        if cur.snapshot is None:
            cur = replace(cur, snapshot=(cur.state, cur.frames, cur.next_site))
        site = cur.next_site[w]
        if flush and site <= n_sites:
            results = protocol.teleport_branches(cur.state, w, site, cur.frames[w])
            return [_advance(cur, i, r, lambda r: False) for r in results]
        results = protocol.readout_branches(cur.state, w, cur.frames[w], n_sites + 1)
        return [_advance(cur, i, r, lambda r: True) for r in results]

    raise CircuitError(f"gate {i}: unknown kind {g.kind!r}")


def finish(cur, circuit):
    if cur.status == "running" and cur.gate >= len(circuit.gates):
        return replace(cur, status="complete")
    return cur


@dataclass
class RunTrace:
    """Outcome log of one sampled run."""

    n_wires: int
    n_sites: int
    seed: int
    records: list
    frames: list
    bits: list
    sites_consumed: list
    probability: float
    status: str
    failed_gate: int = None
    logical_state: np.ndarray = field(default=None, repr=False)
    logical_frames: list = None

    def attempts(self, kind=None, gate=None):
        return [
            r for r in self.records
            if (kind is None or r.kind == kind) and (gate is None or r.gate == gate)
        ]

    def to_dict(self):
        state = None
        if self.logical_state is not None:
            state = [[float(z.real), float(z.imag)] for z in self.logical_state]
        return {
            "n_wires": self.n_wires,
            "n_sites": self.n_sites,
            "seed": self.seed,
            "status": self.status,
            "failed_gate": self.failed_gate,
            "probability": self.probability,
            "bits": self.bits,
            "frames": [f.label() for f in self.frames],
            "sites_consumed": self.sites_consumed,
            "logical_state": state,
            "logical_frames": None if self.logical_frames is None else [f.label() for f in self.logical_frames],
            "records": [r.to_dict() for r in self.records],
        }


def trace_from_cursor(cur, circuit, n_sites, seed=None):
    state, frames = None, None
    if cur.snapshot is not None:
        reg, fr, _ = cur.snapshot
        state = getattr(reg, "vector", None)
        frames = list(fr)
    return RunTrace(
        n_wires=circuit.n_wires,
        n_sites=n_sites,
        seed=seed,
        records=list(cur.records),
        frames=list(cur.frames),
        bits=list(cur.bits),
        sites_consumed=[s - 1 for s in cur.next_site],
        probability=cur.probability,
        status=cur.status,
        failed_gate=cur.failed_gate,
        logical_state=state,
        logical_frames=frames,
    )


def run(circuit, n_sites, seed, flush=True, state=None):
    """Execute ``circuit`` on chains of ``n_sites`` bulk sites with a seeded RNG.

    Parameters
    ----------
    circuit : LogicalCircuit
    n_sites : int
        Site budget ``N`` of every chain.
    seed : int
        Seed of the run's ``numpy.random.Generator``; identical inputs give
        identical traces.
    flush : bool
        Teleport through unused sites before each readout.
    state : optional
        Backend state; defaults to a fresh :class:`LogicalRegister`.

    Raises
    ------
    CircuitError
        If the circuit does not validate.
    BudgetExhaustedError
        If a wire runs out of sites; the partial trace is attached.
    """
    check(circuit)
    rng = np.random.default_rng(seed)
    cur = _start(circuit, state if state is not None else LogicalRegister.fresh(circuit.n_wires))
    while True:
        children = step(circuit, cur, n_sites, flush)
        if not children:
            break
        if len(children) == 1:
            cur = children[0]
            continue
        p = np.array([c.records[-1].probability for c in children])
        cur = children[int(rng.choice(len(children), p=p / p.sum()))]
    cur = finish(cur, circuit)
    trace = trace_from_cursor(cur, circuit, n_sites, seed)
    if cur.status == "exhausted":
        g = circuit.gates[cur.failed_gate]
        raise BudgetExhaustedError(
            f"site budget {n_sites} exhausted at gate {cur.failed_gate} ({g.to_line()})",
            cur.failed_gate,
            trace,
        )
    return trace


def explore(circuit, n_sites, state, flush=False, cap=1_000_000, on_cap=None):
    """Depth-first walk over every branch; yields terminal cursors.

    ``cap`` bounds the number of measurement events visited; ``on_cap`` is
    called (and should raise) when it is exceeded.
    """
    stack = [_start(circuit, state)]
    visited = 0
    while stack:
        cur = stack.pop()
        children = step(circuit, cur, n_sites, flush)
        if not children:
            yield finish(cur, circuit)
            continue
        visited += 1
        if visited > cap and on_cap is not None:
            on_cap(visited)
        stack.extend(reversed(children))


# -- resource estimates ----------------------------------------------------

def expected_attempts(kind):
    """Mean number of attempts until success for ``RZ``/``RX``/``CPHASE``."""
    if kind in ("RZ", "RX"):
        return 1 / ROTATION_SUCCESS
    if kind == "CPHASE":
        return 1 / CPHASE_SUCCESS
    return 0.0


def expected_sites(circuit):
    """Estimated bulk sites consumed per wire, excluding readout flushes.

    Rotations cost ``3/2`` sites on average and CPHASE ``9/4`` on each wire.
    Alignment teleports are estimated from the mean positions of the two
    wires (``max`` of means), which is a lower bound on the true mean.
    """
    pos = [0.0] * circuit.n_wires
    for g in circuit.gates:
        if g.kind in ("RZ", "RX"):
            pos[g.wires[0]] += expected_attempts(g.kind)
        elif g.kind == "CPHASE":
            a, b = g.wires
            aligned = max(pos[a], pos[b]) + expected_attempts("CPHASE")
            pos[a] = pos[b] = aligned
    return pos
