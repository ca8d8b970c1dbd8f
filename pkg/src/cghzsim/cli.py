"""Command-line surface: build, run, sweep, target, oracle.

Exit codes: 0 success, 1 usage error, 2 runtime/domain error,
3 circuit validation (or parse) failure.  The N*m size cap honours the
CGHZ_MAX_NM environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import fock
from .analysis import evaluate_point, theoretical_p
from .coherent import CsState
from .dsl import parse, serialize
from .engine import RunResult, run
from .errors import SimulationError
from .fock import csstate_to_fock, fock_fidelity, run_fock
from .optics import SelectionMode
from .protocol import (
    DEFAULT_NM_CAP,
    ProtocolParams,
    build_cghz_circuit,
    ideal_cghz_state,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_VALIDATION = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nm_cap() -> int:
    raw = os.environ.get("CGHZ_MAX_NM")
    if raw is None:
        return DEFAULT_NM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise SimulationError(f"CGHZ_MAX_NM={raw!r} is not an integer")
    if cap < 1:
        raise SimulationError(f"CGHZ_MAX_NM={cap} must be >= 1")
    return cap


def _selection_mode(name: str, branch_tol: float) -> SelectionMode:
    if name == "exact":
        return SelectionMode.exact()
    return SelectionMode.branch(branch_tol)


def _parse_alpha_range(spec: str) -> list[float]:
    """'START:STOP:STEP' (inclusive endpoints) or a single value."""
    parts = spec.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError("alpha range must be START:STOP:STEP")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise ValueError("alpha range needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def _write_output(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _state_payload(state: CsState) -> dict:
    return {
        "mode_count": state.mode_count,
        "terms": [
            {"coeff": [c.real, c.imag],
             "amps": [[a.real, a.imag] for a in row]}
            for c, row in zip(state.coeffs.tolist(), state.amps.tolist())
        ],
    }


def _run_payload(result: RunResult) -> dict:
    return {
        "p_success": result.p_success,
        "total_false_vacuum": result.total_false_vacuum,
        "mode_order": list(result.mode_order),
        "selections": [
            {"mode_name": rec.mode_name,
             "kept_prob": rec.kept_prob,
             "discarded_weight": rec.discarded_weight,
             "false_vacuum_prob": rec.false_vacuum_prob}
            for rec in result.selections
        ],
        "final_state": _state_payload(result.final_state),
    }


def _fmt(x: float) -> str:
    return repr(float(x))


def _print_diagnostics(diags):
    for d in diags:
        print(str(d), file=sys.stderr)


def _cmd_build(args) -> int:
    params = ProtocolParams(args.n, args.m, args.alpha, cap=_nm_cap())
    circuit = build_cghz_circuit(params)
    _write_output(serialize(circuit), args.output)
    return EXIT_OK


def _read_circuit(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def _cmd_run(args) -> int:
    result = _read_circuit(args.file)
    if not result.ok:
        _print_diagnostics(result.diagnostics)
        return EXIT_VALIDATION
    sel = _selection_mode(args.mode, args.branch_tol)
    outcome = run(result.circuit, sel)
    if args.json:
        print(json.dumps(_run_payload(outcome), indent=2))
        return EXIT_OK
    print(f"modes: {' '.join(outcome.mode_order)}")
    print(f"p_success: {_fmt(outcome.p_success)}")
    print(f"total_false_vacuum: {_fmt(outcome.total_false_vacuum)}")
    for rec in outcome.selections:
        print(f"select0 {rec.mode_name}: kept_prob={_fmt(rec.kept_prob)} "
              f"false_vacuum={_fmt(rec.false_vacuum_prob)}")
    print(f"final state: {outcome.final_state.term_count} terms")
    for c, row in zip(outcome.final_state.coeffs, outcome.final_state.amps):
        amps = " ".join(f"({a.real:+.6g}{a.imag:+.6g}i)" for a in row)
        print(f"  {c.real:+.9g}{c.imag:+.9g}i  | {amps}")
    return EXIT_OK


def _sweep_rows(points):
    header = ["alpha", "n", "m", "mode", "fidelity", "p_success_sim",
              "p_success_theory", "false_vacuum_total", "term_count"]
    rows = []
    for p in points:
        d = p.as_dict()
        rows.append([_fmt(d["alpha"]), str(d["n"]), str(d["m"]), d["mode"],
                     _fmt(d["fidelity"]), _fmt(d["p_success_sim"]),
                     _fmt(d["p_success_theory"]),
                     _fmt(d["false_vacuum_total"]), str(d["term_count"])])
    return header, rows


def _cmd_sweep(args) -> int:
    try:
        alphas = _parse_alpha_range(args.alpha)
    except ValueError as exc:
        print(f"cghzsim sweep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sel = _selection_mode(args.mode, args.branch_tol)
    cap = _nm_cap()
    points = []
    diagnostics = []
    for alpha in alphas:
        try:
            points.append(evaluate_point(args.n, args.m, alpha, sel, cap=cap))
        except SimulationError as exc:
            diagnostics.append((alpha, str(exc)))
    for alpha, msg in diagnostics:
        print(f"sweep point alpha={alpha!r} failed: {msg}", file=sys.stderr)

    if args.format == "json":
        payload = {"version": 1, "points": [p.as_dict() for p in points]}
        _write_output(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        header, rows = _sweep_rows(points)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        writer.writerows(rows)
        _write_output(buf.getvalue(), args.output)
    return EXIT_OK if not diagnostics else EXIT_RUNTIME


def _cmd_target(args) -> int:
    params = ProtocolParams(args.n, args.m, args.alpha, cap=_nm_cap())
    state = ideal_cghz_state(params)
    if args.json:
        print(json.dumps(_state_payload(state), indent=2))
        return EXIT_OK
    print(f"ideal target for n={args.n} m={args.m} alpha={_fmt(args.alpha)}: "
          f"{state.term_count} terms on {state.mode_count} modes")
    print(f"asymptotic heralding probability: "
          f"{_fmt(theoretical_p(args.n, args.m))}")
    for c, row in zip(state.coeffs, state.amps):
        amps = " ".join(f"({a.real:+.6g}{a.imag:+.6g}i)" for a in row)
        print(f"  {c.real:+.12g}{c.imag:+.12g}i  | {amps}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    result = _read_circuit(args.file)
    if not result.ok:
        _print_diagnostics(result.diagnostics)
        return EXIT_VALIDATION
    circuit = result.circuit
    analytic = run(circuit, SelectionMode.exact())
    reference = run_fock(circuit, n_max=args.nmax)
    converted = csstate_to_fock(analytic.final_state, n_max=args.nmax)
    overlap = fock_fidelity(converted, reference.final)
    dp = abs(analytic.p_success - reference.p_success)
    print(f"modes: {' '.join(reference.mode_order)}")
    print(f"p_success analytic:  {_fmt(analytic.p_success)}")
    print(f"p_success fock:      {_fmt(reference.p_success)}")
    print(f"|delta p_success|:   {_fmt(dp)}")
    per = [abs(a.kept_prob - b) for a, b in
           zip(analytic.selections, reference.probabilities)]
    if per:
        print(f"max |delta kept_prob|: {_fmt(max(per))}")
    print(f"final-state overlap |<fock|analytic>|^2: {_fmt(overlap)}")
    agree = dp <= 1e-6 and (1.0 - overlap) <= 1e-6
    print(f"agreement within 1e-6: {'yes' if agree else 'NO'}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _Parser(prog="cghzsim",
                     description="Exact linear-optics simulator for "
                                 "entangled-coherent-state generation "
                                 "circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="emit a generation circuit "
                             "in the DSL")
    p_build.add_argument("--n", type=int, required=True,
                         help="logical qubits")
    p_build.add_argument("--m", type=int, required=True,
                         help="physical qubits per logical qubit")
    p_build.add_argument("--alpha", type=float, required=True,
                         help="coherent amplitude")
    p_build.add_argument("-o", "--output", default=None, help="output file")
    p_build.set_defaults(fn=_cmd_build)

    p_run = sub.add_parser("run", help="execute a circuit file")
    p_run.add_argument("file")
    p_run.add_argument("--mode", choices=["exact", "branch"],
                       default="branch")
    p_run.add_argument("--branch-tol", type=float, default=1e-9)
    p_run.add_argument("--json", action="store_true")
    p_run.set_defaults(fn=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="evaluate a protocol over an "
                             "alpha grid")
    p_sweep.add_argument("--n", type=int, required=True)
    p_sweep.add_argument("--m", type=int, required=True)
    p_sweep.add_argument("--alpha", required=True,
                         help="START:STOP:STEP (inclusive) or a single value")
    p_sweep.add_argument("--mode", choices=["exact", "branch"],
                         default="branch")
    p_sweep.add_argument("--branch-tol", type=float, default=1e-9)
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("-o", "--output", default=None)
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_target = sub.add_parser("target", help="emit the ideal target state")
    p_target.add_argument("--n", type=int, required=True)
    p_target.add_argument("--m", type=int, required=True)
    p_target.add_argument("--alpha", type=float, required=True)
    p_target.add_argument("--json", action="store_true")
    p_target.set_defaults(fn=_cmd_target)

    p_oracle = sub.add_parser("oracle", help="cross-check a circuit "
                              "against the number-basis pipeline")
    p_oracle.add_argument("file")
    p_oracle.add_argument("--nmax", type=int, default=fock.DEFAULT_NMAX)
    p_oracle.set_defaults(fn=_cmd_oracle)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except OSError as exc:
        print(f"cghzsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except SimulationError as exc:
        print(f"cghzsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
