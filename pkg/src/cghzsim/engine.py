"""Circuit intermediate representation and sequential executor.

Circuits are straight-line programs over symbolically named modes.  The
executor maintains the name -> position map itself, so removing a mode at
a vacuum selection never invalidates later instructions; this mirrors how
the generation protocol keeps relabelling surviving spatial modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .coherent import (
    DEFAULT_MERGE_TOL,
    CsState,
    merge_terms,
    normalize,
)
from .errors import (
    CircuitValidationError,
    RunError,
    SimulationError,
)
from .optics import (
    SelectionMode,
    SelectionRecord,
    apply_bs,
    apply_hadamard,
    select_vacuum,
    split_mode,
)

_IDENT_OK = str.isidentifier


@dataclass(frozen=True)
class Prep:
    """Bind a new mode prepared in the coherent state |amp>."""
    mode: str
    amp: complex


@dataclass(frozen=True)
class Hadamard:
    """Coherent-qubit Hadamard; alpha_ref None means the circuit alpha."""
    mode: str
    alpha_ref: float | None = None


@dataclass(frozen=True)
class BeamSplitter:
    """50:50 beam splitter; first output carries (a+b)/sqrt2."""
    mode_a: str
    mode_b: str


@dataclass(frozen=True)
class Split:
    """Beam splitter against a fresh vacuum port bound to new_mode."""
    mode: str
    new_mode: str


@dataclass(frozen=True)
class SelectVacuum:
    """Herald vacuum on the mode and remove it."""
    mode: str


Instruction = Union[Prep, Hadamard, BeamSplitter, Split, SelectVacuum]


@dataclass(frozen=True)
class Circuit:
    """Ordered instruction list with the declared base amplitude."""
    alpha: float
    instructions: tuple[Instruction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))


@dataclass(frozen=True)
class Diagnostic:
    """One static-validation finding; index is None for circuit-level
    problems (e.g. a bad declared alpha)."""
    index: int | None
    message: str

    def __str__(self):
        where = "circuit" if self.index is None else f"instruction {self.index}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class RunResult:
    """Final state plus full probability bookkeeping for one execution."""
    final_state: CsState
    mode_order: tuple[str, ...]
    selections: tuple[SelectionRecord, ...]
    p_success: float
    total_false_vacuum: float
    max_term_count: int = 0


def validate(circuit: Circuit) -> list[Diagnostic]:
    """Statically check a circuit; an empty list means it can run.

    Every mode name must be bound by Prep before use, used only while
    live, and never rebound; SelectVacuum consumes its mode.
    """
    out: list[Diagnostic] = []
    if not (isinstance(circuit.alpha, (int, float))
            and math.isfinite(circuit.alpha) and circuit.alpha > 0):
        out.append(Diagnostic(None, f"declared alpha must be a positive "
                                    f"finite real, got {circuit.alpha!r}"))
    live: set[str] = set()
    ever: set[str] = set()

    def check_live(idx, name):
        if name not in live:
            reason = ("was consumed" if name in ever else "is unbound")
            out.append(Diagnostic(idx, f"mode '{name}' {reason}"))
            return False
        return True

    def check_new(idx, name):
        if not name or not _IDENT_OK(name):
            out.append(Diagnostic(idx, f"'{name}' is not a valid mode name"))
            return False
        if name in ever:
            out.append(Diagnostic(idx, f"mode '{name}' already used"))
            return False
        return True

    for idx, ins in enumerate(circuit.instructions):
        if isinstance(ins, Prep):
            amp = complex(ins.amp)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                out.append(Diagnostic(idx, "prep amplitude is not finite"))
            if check_new(idx, ins.mode):
                live.add(ins.mode)
                ever.add(ins.mode)
        elif isinstance(ins, Hadamard):
            check_live(idx, ins.mode)
            if ins.alpha_ref is not None and not (
                    math.isfinite(ins.alpha_ref) and ins.alpha_ref > 0):
                out.append(Diagnostic(
                    idx, f"hadamard reference {ins.alpha_ref!r} must be "
                         f"a positive real"))
        elif isinstance(ins, BeamSplitter):
            ok_a = check_live(idx, ins.mode_a)
            ok_b = check_live(idx, ins.mode_b)
            if ok_a and ok_b and ins.mode_a == ins.mode_b:
                out.append(Diagnostic(
                    idx, "beam splitter needs two distinct modes"))
        elif isinstance(ins, Split):
            check_live(idx, ins.mode)
            if check_new(idx, ins.new_mode):
                live.add(ins.new_mode)
                ever.add(ins.new_mode)
        elif isinstance(ins, SelectVacuum):
            if check_live(idx, ins.mode):
                live.discard(ins.mode)
        else:
            out.append(Diagnostic(idx, f"unknown instruction {ins!r}"))
    return out


def run(circuit: Circuit, sel: SelectionMode,
        merge_tol: float = DEFAULT_MERGE_TOL) -> RunResult:
    """Execute a circuit and return the final state with probabilities.

    Instructions are applied strictly in order.  The working state is kept
    normalized (re-normalizing after Hadamards, which are not isometries
    on entangled inputs, and after selections), so each recorded
    ``kept_prob`` is the conditional heralding probability of that
    selection and ``p_success`` is their product.  Exact selection lets
    vacuum residue into gate modes, so Hadamards then run with the
    off-basis projection rule; under branch selection an off-basis
    amplitude aborts the run.

    Raises CircuitValidationError if validate() reports anything, and
    RunError (with the instruction index) if a branch dies at runtime.
    """
    diags = validate(circuit)
    if diags:
        raise CircuitValidationError(diags)

    off_basis = "project" if sel.kind == "exact" else "raise"
    # the empty tensor product: one term, zero modes, norm one
    state = CsState(np.ones(1, dtype=np.complex128),
                    np.zeros((1, 0), dtype=np.complex128), normalized=True)
    order: list[str] = []
    selections: list[SelectionRecord] = []
    p_success = 1.0
    total_false = 0.0
    max_terms = 0

    for idx, ins in enumerate(circuit.instructions):
        try:
            if isinstance(ins, Prep):
                col = np.full((state.term_count, 1), complex(ins.amp))
                state = CsState(state.coeffs,
                                np.concatenate([state.amps, col], axis=1),
                                normalized=state.normalized)
                order.append(ins.mode)
            elif isinstance(ins, Hadamard):
                ref = circuit.alpha if ins.alpha_ref is None else ins.alpha_ref
                state = apply_hadamard(state, order.index(ins.mode), ref,
                                       off_basis=off_basis,
                                       merge_tol=merge_tol)
                state = normalize(state)
            elif isinstance(ins, BeamSplitter):
                state = apply_bs(state, order.index(ins.mode_a),
                                 order.index(ins.mode_b))
            elif isinstance(ins, Split):
                state = split_mode(state, order.index(ins.mode))
                order.append(ins.new_mode)
            elif isinstance(ins, SelectVacuum):
                i = order.index(ins.mode)
                state, record = select_vacuum(state, i, sel)
                record = SelectionRecord(
                    mode=record.mode,
                    kept_prob=record.kept_prob,
                    discarded_weight=record.discarded_weight,
                    false_vacuum_prob=record.false_vacuum_prob,
                    mode_name=ins.mode)
                if sel.kind == "branch":
                    state = normalize(state)
                selections.append(record)
                p_success *= record.kept_prob
                total_false += record.false_vacuum_prob
                order.pop(i)
        except SimulationError as exc:
            raise RunError(idx, str(exc)) from exc
        state = merge_terms(state, merge_tol)
        max_terms = max(max_terms, state.term_count)

    return RunResult(final_state=normalize(state),
                     mode_order=tuple(order),
                     selections=tuple(selections),
                     p_success=p_success,
                     total_false_vacuum=total_false,
                     max_term_count=max_terms)
