"""Fidelity, success-probability and heralding-error metrics, plus
parameter sweeps over (alpha, n, m).

The asymptotic heralding success probability of a full (n, m) build is
2^(1 - n*m): one factor 1/2 per vacuum selection.  Fidelities are always
taken against the finite-alpha ideal target (computed normalization),
not the infinite-alpha orthogonal-qubit limit, so they isolate protocol
error from the encoding's intrinsic nonorthogonality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .coherent import CsState, state_inner
from .engine import RunResult, run
from .errors import DomainError, ModeShapeError, SimulationError
from .optics import SelectionMode
from .protocol import ProtocolParams, build_cghz_circuit, ideal_cghz_state

FIDELITY_SLACK = 1e-10


def fidelity(s: CsState, target: CsState) -> float:
    """Squared overlap |<target|s>|^2 for normalized states.

    Clamped into [0, 1]; an excursion beyond the 1e-10 round-off slack
    means a caller handed in unnormalized states.
    """
    if s.mode_count != target.mode_count:
        raise ModeShapeError(
            f"mode counts differ: {s.mode_count} vs {target.mode_count}")
    f = abs(state_inner(target, s)) ** 2
    if f > 1.0 + FIDELITY_SLACK:
        raise DomainError(
            f"fidelity {f} exceeds 1; states must be normalized")
    return min(max(f, 0.0), 1.0)


def theoretical_p(n: int, m: int) -> float:
    """Asymptotic heralding probability 2^(1 - n*m)."""
    if n < 1 or m < 1:
        raise DomainError("n and m must be >= 1")
    return 2.0 ** (1 - n * m)


@dataclass(frozen=True)
class SweepPoint:
    """One evaluated grid point of a parameter sweep."""

    alpha: float
    n_logical: int
    m_physical: int
    fidelity: float
    p_success_sim: float
    p_success_theory: float
    false_vacuum_total: float
    term_count: int
    selection_mode: str

    def as_dict(self) -> dict:
        """Field order and names match the CSV schema."""
        return {
            "alpha": self.alpha,
            "n": self.n_logical,
            "m": self.m_physical,
            "mode": self.selection_mode,
            "fidelity": self.fidelity,
            "p_success_sim": self.p_success_sim,
            "p_success_theory": self.p_success_theory,
            "false_vacuum_total": self.false_vacuum_total,
            "term_count": self.term_count,
        }


@dataclass(frozen=True)
class SweepDiagnostic:
    """A grid point that failed to evaluate; sweeps never abort."""

    alpha: float
    n_logical: int
    m_physical: int
    message: str


def evaluate_point(n: int, m: int, alpha: float, sel: SelectionMode,
                   cap: int | None = None) -> SweepPoint:
    """Build, run and score one (n, m, alpha) protocol instance."""
    kwargs = {} if cap is None else {"cap": cap}
    params = ProtocolParams(n, m, alpha, **kwargs)
    circuit = build_cghz_circuit(params)
    result = run(circuit, sel)
    target = ideal_cghz_state(params)
    f = fidelity(result.final_state, target)
    return SweepPoint(alpha=alpha, n_logical=n, m_physical=m,
                      fidelity=f,
                      p_success_sim=result.p_success,
                      p_success_theory=theoretical_p(n, m),
                      false_vacuum_total=result.total_false_vacuum,
                      term_count=result.final_state.term_count,
                      selection_mode=sel.kind)


def sweep(alphas: Sequence[float], pairs: Iterable[tuple[int, int]],
          sel: SelectionMode, cap: int | None = None,
          ) -> tuple[list[SweepPoint], list[SweepDiagnostic]]:
    """Evaluate the full (n, m) x alpha grid.

    Points are independent and emitted in grid order (pairs outer,
    alphas inner) regardless of how they were computed.  A failing point
    becomes a diagnostic instead of aborting the sweep.
    """
    points: list[SweepPoint] = []
    diagnostics: list[SweepDiagnostic] = []
    for n, m in pairs:
        for alpha in alphas:
            try:
                points.append(evaluate_point(n, m, alpha, sel, cap=cap))
            except SimulationError as exc:
                diagnostics.append(
                    SweepDiagnostic(alpha=alpha, n_logical=n, m_physical=m,
                                    message=str(exc)))
    return points, diagnostics


@dataclass(frozen=True)
class ErrorReport:
    """Summary of the false-vacuum heralding error of one run.

    ``dominant_scale`` is exp(-2 alpha^2), the nonorthogonality scale
    that controls how fast the error vanishes with growing alpha.
    """

    total_false_vacuum: float
    max_selection_error: float
    dominant_scale: float
    per_selection: tuple[float, ...]


def error_report(result: RunResult, alpha: float) -> ErrorReport:
    """Collect the per-selection false-vacuum probabilities of a run."""
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be positive, got {alpha}")
    per = tuple(rec.false_vacuum_prob for rec in result.selections)
    return ErrorReport(
        total_false_vacuum=sum(per),
        max_selection_error=max(per) if per else 0.0,
        dominant_scale=math.exp(-2.0 * alpha * alpha),
        per_selection=per)
