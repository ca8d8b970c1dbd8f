"""Linear-optics primitives on coherent superpositions.

Three physical operations drive the whole generation protocol:

* 50:50 beam splitter:  |a>|b> -> |(a+b)/sqrt2> |(a-b)/sqrt2>
* mode split: a beam splitter whose second input port is fresh vacuum,
  turning |sqrt2 a> into |a>|a>
* coherent-qubit Hadamard on the {|a>, |-a>} basis:
      |a>  ->  (N/sqrt2)  (|a> + |-a>),   N  = (1 + exp(-2 a^2))^(-1/2)
      |-a> ->  (N'/sqrt2) (|a> - |-a>),   N' = (1 - exp(-2 a^2))^(-1/2)

plus vacuum post-selection on one mode, in two flavours: ``branch``
(keep only exactly-vacuum branches; the usual idealization) and ``exact``
(project every term onto <0|, retaining the false-vacuum amplitudes that
a real no-click herald cannot distinguish).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coherent import (
    DEFAULT_MERGE_TOL,
    CsState,
    merge_terms,
    normalize,
    state_norm,
)
from .errors import (
    DomainError,
    GateBasisError,
    ModeShapeError,
    ZeroProbabilityError,
)

# Amplitude magnitude below which a mode label counts as vacuum when
# classifying false-vacuum contributions (and as the default branch-mode
# selection tolerance).  Labels are produced by exact +-alpha/sqrt2
# arithmetic, so any drift is pure round-off.
VACUUM_LABEL_TOL = 1e-9

# Hadamard qubit-basis check tolerance (same round-off argument).
GATE_BASIS_TOL = 1e-9


@dataclass(frozen=True)
class SelectionMode:
    """How vacuum post-selection treats non-vacuum amplitudes.

    ``exact`` keeps every term, scaled by its true vacuum overlap;
    ``branch`` discards terms whose selected-mode label exceeds ``tol``.
    """

    kind: str            # "exact" or "branch"
    tol: float = 0.0

    def __post_init__(self):
        if self.kind not in ("exact", "branch"):
            raise DomainError(f"unknown selection mode {self.kind!r}")
        if self.tol < 0:
            raise DomainError("branch tolerance must be >= 0")

    @classmethod
    def exact(cls) -> "SelectionMode":
        return cls("exact")

    @classmethod
    def branch(cls, tol: float = VACUUM_LABEL_TOL) -> "SelectionMode":
        return cls("branch", tol)


@dataclass(frozen=True)
class SelectionRecord:
    """Bookkeeping for one vacuum selection.

    ``kept_prob`` is the heralding probability of the kept branch,
    ``discarded_weight`` the squared norm of what branch mode threw away,
    and ``false_vacuum_prob`` the probability that a non-vacuum branch
    nevertheless leaves the detector silent (weight |c <0|a>|^2 summed
    over non-vacuum labels).
    """

    mode: int
    kept_prob: float
    discarded_weight: float = 0.0
    false_vacuum_prob: float = 0.0
    mode_name: str | None = None


def _check_mode_index(s: CsState, i: int):
    if not (0 <= i < s.mode_count):
        raise ModeShapeError(
            f"mode index {i} out of range for {s.mode_count} modes")


def apply_bs(s: CsState, i: int, j: int) -> CsState:
    """50:50 beam splitter on modes (i, j).

    Labels map as (a_i, a_j) -> ((a_i+a_j)/sqrt2, (a_i-a_j)/sqrt2);
    coefficients are untouched and the norm is preserved exactly (the
    splitter is a passive unitary).  Applying it twice restores the input.
    """
    _check_mode_index(s, i)
    _check_mode_index(s, j)
    if i == j:
        raise ModeShapeError("beam splitter needs two distinct modes")
    amps = s.amps.copy()
    ai = amps[:, i].copy()
    aj = amps[:, j].copy()
    inv = 1.0 / math.sqrt(2.0)
    amps[:, i] = (ai + aj) * inv
    amps[:, j] = (ai - aj) * inv
    return CsState(s.coeffs, amps, normalized=s.normalized)


def split_mode(s: CsState, i: int) -> CsState:
    """Split mode i on a beam splitter against a fresh vacuum port.

    The new mode is appended; |sqrt2 a> terms become |a>|a>.
    """
    _check_mode_index(s, i)
    amps = np.concatenate(
        [s.amps, np.zeros((s.term_count, 1), dtype=np.complex128)], axis=1)
    out = CsState(s.coeffs, amps, normalized=s.normalized)
    return apply_bs(out, i, s.mode_count)


def apply_hadamard(s: CsState, i: int, alpha_ref: float,
                   off_basis: str = "raise",
                   merge_tol: float = DEFAULT_MERGE_TOL) -> CsState:
    """Coherent-qubit Hadamard on mode i with qubit basis {|a>, |-a>}.

    The gate is the rank-2 linear map |a> -> |even cat>, |-a> -> |odd cat>
    (the cats are exactly orthonormal even though |+-a> are not).  For a
    term whose mode-i label is b, the label is decomposed in the
    biorthogonal frame of {|a>, |-a>} and the component outside that span
    is dropped; on-basis labels reproduce the defining map exactly.

    ``off_basis="raise"`` additionally demands every label be within
    1e-9 of +-alpha_ref and raises GateBasisError otherwise; under branch
    selection a violation always means a protocol-construction bug.
    ``off_basis="project"`` accepts any label (exact selection leaks
    vacuum residue into gate modes, which the linear map handles).
    """
    _check_mode_index(s, i)
    if not (math.isfinite(alpha_ref) and alpha_ref > 0):
        raise DomainError(f"alpha_ref must be positive, got {alpha_ref}")
    if off_basis not in ("raise", "project"):
        raise DomainError(f"unknown off-basis policy {off_basis!r}")
    if s.term_count == 0:
        return s

    beta = s.amps[:, i]
    if off_basis == "raise":
        dist = np.minimum(np.abs(beta - alpha_ref), np.abs(beta + alpha_ref))
        bad = np.nonzero(dist > GATE_BASIS_TOL)[0]
        if bad.size:
            raise GateBasisError(
                f"mode {i} amplitude {complex(beta[bad[0]])} is not "
                f"+-{alpha_ref} (off by {dist[bad[0]]:.3g})")

    a2 = alpha_ref * alpha_ref
    q = math.exp(-2.0 * a2)
    n_even = (1.0 + q) ** -0.5
    n_odd = (1.0 - q) ** -0.5 if q < 1.0 else math.inf
    if not math.isfinite(n_odd):
        raise DomainError("qubit basis degenerate: exp(-2 a^2) ~ 1")

    # biorthogonal coordinates of each label's in-span component
    babs2 = beta.real**2 + beta.imag**2
    ov_p = np.exp(-0.5 * (a2 + babs2) + alpha_ref * beta)      # <a|b>
    ov_m = np.exp(-0.5 * (a2 + babs2) - alpha_ref * beta)      # <-a|b>
    det = 1.0 - q * q
    u = (ov_p - q * ov_m) / det
    v = (ov_m - q * ov_p) / det

    inv = 1.0 / math.sqrt(2.0)
    c_plus = s.coeffs * (u * n_even + v * n_odd) * inv
    c_minus = s.coeffs * (u * n_even - v * n_odd) * inv

    amps_plus = s.amps.copy()
    amps_plus[:, i] = alpha_ref
    amps_minus = s.amps.copy()
    amps_minus[:, i] = -alpha_ref
    out = CsState(np.concatenate([c_plus, c_minus]),
                  np.concatenate([amps_plus, amps_minus], axis=0))
    return merge_terms(out, merge_tol)


def select_vacuum(s: CsState, i: int,
                  mode: SelectionMode) -> tuple[CsState, SelectionRecord]:
    """Post-select "no photon" on mode i and remove that mode.

    exact:  every coefficient is scaled by <0|a_i> = exp(-|a_i|^2/2);
            kept_prob is the heralding probability of the projected state
            and the result is renormalized.
    branch: terms with |a_i| <= tol survive with coefficients unchanged;
            the rest are discarded.  kept_prob / discarded_weight are the
            squared norms of the two portions, and false_vacuum_prob is
            the probability the discarded branches would have heralded
            silently anyway (the selection error of a no-click detector).

    Probabilities are relative to the incoming squared norm, so callers
    need not renormalize between selections.
    """
    _check_mode_index(s, i)
    in_sq = state_norm(s) ** 2
    if in_sq <= 1e-24:
        raise ZeroProbabilityError("selection on a zero-norm state")

    keep_cols = [k for k in range(s.mode_count) if k != i]
    labels = s.amps[:, i]
    vac_overlap = np.exp(-0.5 * (labels.real**2 + labels.imag**2))
    nonvac = np.abs(labels) > VACUUM_LABEL_TOL

    if mode.kind == "exact":
        projected = CsState(s.coeffs * vac_overlap, s.amps[:, keep_cols])
        kept_sq = state_norm(projected) ** 2
        kept_prob = min(max(kept_sq / in_sq, 0.0), 1.0)
        false_prob = float(
            np.sum(np.abs(s.coeffs[nonvac] * vac_overlap[nonvac]) ** 2)
        ) / in_sq
        if math.sqrt(kept_sq) <= 1e-12:
            raise ZeroProbabilityError(
                f"vacuum projection on mode {i} has vanishing probability")
        out = normalize(projected)
        return out, SelectionRecord(mode=i, kept_prob=kept_prob,
                                    discarded_weight=0.0,
                                    false_vacuum_prob=false_prob)

    vac = np.abs(labels) <= mode.tol
    kept = CsState(s.coeffs[vac], s.amps[vac][:, keep_cols])
    discarded = CsState(s.coeffs[~vac], s.amps[~vac])
    kept_sq = state_norm(kept) ** 2
    kept_prob = min(max(kept_sq / in_sq, 0.0), 1.0)
    discarded_weight = state_norm(discarded) ** 2 / in_sq
    false_prob = float(
        np.sum(np.abs(s.coeffs[~vac] * vac_overlap[~vac]) ** 2)) / in_sq
    if math.sqrt(kept_sq) <= 1e-12:
        raise ZeroProbabilityError(
            f"no surviving vacuum branch on mode {i}")
    return kept, SelectionRecord(mode=i, kept_prob=kept_prob,
                                 discarded_weight=discarded_weight,
                                 false_vacuum_prob=false_prob)
