"""Command-line front end: ``gmqc spectrum|run|verify|trace``.

Exit codes: 0 success, 1 usage or parse error, 2 resource cap exceeded,
3 site budget exhausted, 4 verification failure.
"""

import argparse
import json
import sys
import time

from . import compiler, hamiltonian, linalg, spin, verify
from .errors import BudgetExhaustedError, CircuitError, DimensionCapError

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4
STRING_CHECK_MAX_DIM = 1000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_sizes(text):
    """``"3"``, ``"2..5"`` or ``"2,4,6"`` to a list of ints."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError(f"empty size list {text!r}")
    return out


def report(command, inputs, results, seed=None, tolerances=None, passed=None, wall_time=None):
    return {
        "command": command,
        "input": inputs,
        "seed": seed,
        "results": results,
        "tolerances": tolerances or {},
        "passed": passed,
        "wall_time": wall_time,
    }


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _spectrum_row(spec):
    energy, basis = hamiltonian.chain_ground_space(spec)
    evals = hamiltonian.spectrum(spec) / spec.J
    above = evals[evals > hamiltonian.GAP_TOL]
    row = {
        "N": spec.n_sites,
        "dim": spec.dim,
        "ground_energy": energy / spec.J,
        "degeneracy": int(basis.shape[1]),
        "gap": float(above[0]) if above.size else None,
        "frustration_residual": hamiltonian.frustration_residuals(spec, basis) / spec.J,
        "string_commutator": None,
        "string_anticommutator": None,
    }
    if spec.right_boundary and spec.dim <= STRING_CHECK_MAX_DIM:
        comm = anti = 0.0
        for j in range(1, spec.n_sites + 1):
            h = hamiltonian.residual_hamiltonian(spec, j)
            sig = {mu: hamiltonian.string_operator(spec, j, mu) for mu in spin.AXES}
            comm = max([comm] + [linalg.op_norm(linalg.commutator(s, h)) / spec.J for s in sig.values()])
            anti = max(anti, linalg.op_norm(linalg.anticommutator(sig["x"], sig["z"])))
        row["string_commutator"] = comm
        row["string_anticommutator"] = anti
    return row


def cmd_spectrum(args, out):
    sizes = parse_sizes(args.n)
    specs = [hamiltonian.ChainSpec.from_config(n, args.boundaries) for n in sizes]
    for spec in specs:
        if spec.dim > hamiltonian.MAX_DIM:
            raise DimensionCapError(
                f"N={spec.n_sites} with boundaries={args.boundaries} needs dimension {spec.dim} "
                f"> cap {hamiltonian.MAX_DIM}"
            )
    t0 = time.perf_counter()
    rows = [_spectrum_row(s) for s in specs]
    doc = report(
        "spectrum",
        {"n": sizes, "boundaries": args.boundaries},
        {"rows": rows, "units": "J"},
        tolerances={"ground": hamiltonian.GROUND_TOL, "gap_threshold": hamiltonian.GAP_TOL},
        wall_time=time.perf_counter() - t0 if args.timing else None,
    )
    if args.format == "json":
        out.write(dumps(doc))
    else:
        out.write(f"{'N':>3} {'dim':>6} {'E0/J':>12} {'deg':>4} {'gap/J':>10} {'frustration':>12}\n")
        for r in rows:
            gap = "-" if r["gap"] is None else f"{r['gap']:.6f}"
            out.write(
                f"{r['N']:>3} {r['dim']:>6} {r['ground_energy']:>12.3e} {r['degeneracy']:>4} "
                f"{gap:>10} {r['frustration_residual']:>12.3e}\n"
            )
    return EXIT_OK


def _load_circuit(path):
    with open(path) as fh:
        return compiler.parse_circuit(fh.read())


def _write_trace(args, out, circuit, trace, status):
    doc = report(
        "run",
        {"circuit": [g.to_dict() for g in circuit.gates], "n_wires": circuit.n_wires, "sites": args.sites},
        {"status": status, "trace": trace.to_dict(),
         "expected_sites": compiler.expected_sites(circuit)},
        seed=args.seed,
    )
    if args.format == "json":
        out.write(dumps(doc))
    else:
        out.write(format_trace(trace.to_dict()))


def cmd_run(args, out):
    circuit = _load_circuit(args.circuit)
    compiler.check(circuit)
    try:
        trace = compiler.run(circuit, args.sites, args.seed, flush=not args.no_flush)
    except BudgetExhaustedError as exc:
        _write_trace(args, out, circuit, exc.trace, "exhausted")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _write_trace(args, out, circuit, trace, "complete")
    return EXIT_OK


def cmd_verify(args, out):
    t0 = time.perf_counter()
    checks = verify.run_suite(args.suite)
    passed = all(c.passed for c in checks)
    doc = report(
        "verify",
        {"suite": args.suite},
        {"checks": [c.to_dict() for c in checks]},
        tolerances=verify.TOLERANCES,
        passed=passed,
        wall_time=time.perf_counter() - t0 if args.timing else None,
    )
    if args.format == "json":
        out.write(dumps(doc))
    else:
        for c in checks:
            flag = "PASS" if c.passed else "FAIL"
            out.write(f"{flag}  {c.name}: {c.value:.3e} (tol {c.tolerance:g}) {c.detail}\n")
        out.write(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed\n")
    return EXIT_OK if passed else EXIT_VERIFY


def format_trace(trace):
    lines = [
        f"status {trace['status']}  wires {trace['n_wires']}  sites/wire {trace['n_sites']}  seed {trace['seed']}",
        f"{'gate':>4} {'kind':<9} {'wires':<6} {'sites':<6} {'basis':<5} {'angle':>8} {'outcome':<8} "
        f"{'prob':>7} {'ok':<3} {'delta':<8} {'bit':<3}",
    ]
    for r in trace["records"]:
        outcome = r["outcome"]
        outcome = ",".join(map(str, outcome)) if isinstance(outcome, list) else str(outcome)
        lines.append(
            f"{r['gate']:>4} {r['kind']:<9} {','.join(map(str, r['wires'])):<6} "
            f"{','.join(map(str, r['sites'])):<6} {r['basis']:<5} {r['angle']:>8.4f} {outcome:<8} "
            f"{r['probability']:>7.4f} {'y' if r['success'] else 'n':<3} {'/'.join(r['frame_delta']):<8} "
            f"{'' if r['bit'] is None else r['bit']:<3}"
        )
    lines.append(f"final frames {trace['frames']}  bits {trace['bits']}  sites consumed {trace['sites_consumed']}")
    lines.append(f"trace probability {trace['probability']:.6g}")
    return "\n".join(lines) + "\n"


def cmd_trace(args, out):
    with open(args.file) as fh:
        doc = json.load(fh)
    trace = doc.get("results", {}).get("trace", doc)
    if "records" not in trace:
        raise CircuitError(f"{args.file}: no run trace found")
    out.write(format_trace(trace))
    return EXIT_OK


def build_parser():
    p = _Parser(prog="gmqc", description="AKLT ground-code measurement-based quantum computation")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", help="ground space, gap and string-operator checks per N")
    s.add_argument("--n", required=True, help="chain sizes: 3, 2..5 or 2,4")
    s.add_argument("--boundaries", default="both", choices=["both", "left", "right", "none"])
    s.add_argument("--format", default="json", choices=["json", "text"])
    s.add_argument("--timing", action="store_true", help="record wall time in the report")
    s.set_defaults(func=cmd_spectrum)

    r = sub.add_parser("run", help="execute a logical circuit with a seeded RNG")
    r.add_argument("circuit", help="circuit file (line format or JSON)")
    r.add_argument("--sites", type=int, required=True, help="bulk sites per chain")
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--format", default="json", choices=["json", "text"])
    r.add_argument("--no-flush", action="store_true", help="do not teleport through unused sites before readout")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(verify.SUITES) + ["all"])
    v.add_argument("--format", default="text", choices=["json", "text"])
    v.add_argument("--timing", action="store_true")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("trace", help="pretty-print a stored run trace")
    t.add_argument("file")
    t.set_defaults(func=cmd_trace)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except CircuitError as exc:
        for d in exc.diagnostics:
            print(f"error: {d}", file=sys.stderr)
        return EXIT_USAGE
    except DimensionCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
