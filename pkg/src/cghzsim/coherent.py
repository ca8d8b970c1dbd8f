"""Exact algebra of finite superpositions of multimode coherent states.

A state is stored as a list of product terms

    |psi> = sum_i c_i |a_i1>|a_i2>...|a_iM>,

where each |a> is a coherent state labelled by a complex amplitude.
Coherent states are never orthogonal, so every norm and inner product is
evaluated through the exact pairwise Gram sum

    <a|b> = exp(-(|a|^2 + |b|^2)/2 + conj(a) b),

with no orthogonalization attempted anywhere: exactness over the
nonorthogonal term basis is the whole point of this representation.

Amplitudes and coefficients are plain Python/NumPy complex numbers.
All operations are pure; states are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ModeShapeError, ZeroStateError

# Coherent overlaps smaller than this in magnitude are flushed to exactly
# zero: alpha = 10 sweeps produce exp(-200)-scale overlaps whose products
# would otherwise denormalize.
OVERLAP_FLUSH = 1e-300

# Squared norms may round off slightly negative for nearly parallel terms.
NEGATIVE_NORM_TOL = 1e-12

DEFAULT_MERGE_TOL = 1e-12


def _require_finite(z: complex, what: str) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{what} must be finite, got {z!r}")
    return z


def coherent_overlap(a: complex, b: complex) -> complex:
    """Overlap <a|b> of two single-mode coherent states.

    Evaluated as exp(-(|a|^2+|b|^2)/2 + conj(a)*b) in a single exponential
    call; |<a|b>| <= 1 always.  Magnitudes below 1e-300 are flushed to 0.
    """
    a = _require_finite(a, "amplitude a")
    b = _require_finite(b, "amplitude b")
    expo = -0.5 * (a.real * a.real + a.imag * a.imag
                   + b.real * b.real + b.imag * b.imag) + a.conjugate() * b
    val = np.exp(complex(expo))
    if abs(val) < OVERLAP_FLUSH:
        return 0.0 + 0.0j
    return complex(val)


@dataclass(frozen=True)
class CoherentTerm:
    """One superposition branch: a complex weight and one coherent
    amplitude per mode."""

    coeff: complex
    amps: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeff", _require_finite(self.coeff, "coeff"))
        object.__setattr__(
            self, "amps",
            tuple(_require_finite(a, "mode amplitude") for a in self.amps))


class CsState:
    """Finite coherent superposition over a fixed number of modes.

    Term data is held in two read-only arrays: ``coeffs`` with shape (T,)
    and ``amps`` with shape (T, M).  ``normalized`` records whether the
    state was produced by an operation guaranteeing unit norm.
    """

    __slots__ = ("coeffs", "amps", "normalized")

    def __init__(self, coeffs, amps, normalized: bool = False):
        coeffs = np.array(coeffs, dtype=np.complex128).reshape(-1)
        amps = np.array(amps, dtype=np.complex128)
        if amps.size == 0:
            amps = amps.reshape(len(coeffs), 0 if amps.ndim < 2
                                else amps.shape[1])
        if amps.ndim != 2 or amps.shape[0] != coeffs.shape[0]:
            raise ModeShapeError(
                f"amps shape {amps.shape} does not match {len(coeffs)} terms")
        if not np.isfinite(coeffs).all():
            raise DomainError("non-finite coefficient in state")
        if not np.isfinite(amps).all():
            raise DomainError("non-finite amplitude in state")
        coeffs.setflags(write=False)
        amps.setflags(write=False)
        self.coeffs = coeffs
        self.amps = amps
        self.normalized = bool(normalized)

    # -- constructors -------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Iterable[CoherentTerm | tuple],
                   mode_count: int | None = None,
                   normalized: bool = False) -> "CsState":
        rows = []
        coeffs = []
        for t in terms:
            if isinstance(t, CoherentTerm):
                coeffs.append(t.coeff)
                rows.append(t.amps)
            else:
                c, amps = t
                coeffs.append(c)
                rows.append(tuple(amps))
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ModeShapeError("terms have differing mode counts")
            if mode_count is not None and width != mode_count:
                raise ModeShapeError(
                    f"terms have {width} modes, expected {mode_count}")
            mode_count = width
        elif mode_count is None:
            raise ModeShapeError("empty state needs an explicit mode_count")
        return cls(np.asarray(coeffs, dtype=np.complex128),
                   np.asarray(rows, dtype=np.complex128).reshape(len(rows),
                                                                 mode_count),
                   normalized=normalized)

    @classmethod
    def single(cls, amps: Sequence[complex]) -> "CsState":
        """The product coherent state |a_1>...|a_M> (unit norm)."""
        return cls([1.0 + 0.0j], [list(amps)], normalized=True)

    @classmethod
    def empty(cls, mode_count: int) -> "CsState":
        return cls(np.zeros(0, dtype=np.complex128),
                   np.zeros((0, mode_count), dtype=np.complex128))

    # -- basic views ---------------------------------------------------

    @property
    def mode_count(self) -> int:
        return self.amps.shape[1]

    @property
    def term_count(self) -> int:
        return self.coeffs.shape[0]

    @property
    def terms(self) -> list[CoherentTerm]:
        return [CoherentTerm(complex(c), tuple(complex(a) for a in row))
                for c, row in zip(self.coeffs, self.amps)]

    def __repr__(self):
        return (f"CsState(modes={self.mode_count}, terms={self.term_count}, "
                f"normalized={self.normalized})")


def _overlap_matrix(s1: CsState, s2: CsState) -> np.ndarray:
    """Pairwise products of per-mode overlaps: K[i, j] = prod_k <a_ik|b_jk>.

    The per-mode log-overlaps are summed first and exponentiated once, so
    deeply suppressed products never underflow partway.
    """
    a, b = s1.amps, s2.amps
    ra = np.sum(a.real**2 + a.imag**2, axis=1)
    rb = np.sum(b.real**2 + b.imag**2, axis=1)
    expo = np.conj(a) @ b.T - 0.5 * (ra[:, None] + rb[None, :])
    k = np.exp(expo)
    if k.size:
        k[np.abs(k) < OVERLAP_FLUSH] = 0.0
    return k


def state_inner(s1: CsState, s2: CsState) -> complex:
    """Gram inner product <s1|s2> = sum_ij conj(c_i) d_j prod_k <a_ik|b_jk>."""
    if s1.mode_count != s2.mode_count:
        raise ModeShapeError(
            f"mode counts differ: {s1.mode_count} vs {s2.mode_count}")
    if s1.term_count == 0 or s2.term_count == 0:
        return 0.0 + 0.0j
    k = _overlap_matrix(s1, s2)
    return complex(np.conj(s1.coeffs) @ k @ s2.coeffs)


def state_norm(s: CsState) -> float:
    """Euclidean norm sqrt(<s|s>); tiny negative round-off is clamped to 0."""
    sq = state_inner(s, s).real
    if sq < 0.0:
        if sq < -NEGATIVE_NORM_TOL:
            raise DomainError(
                f"squared norm {sq} is negative beyond round-off")
        sq = 0.0
    return math.sqrt(sq)


def normalize(s: CsState) -> CsState:
    """Scale to unit norm; a vanishing norm signals a dead branch."""
    n = state_norm(s)
    if n <= 1e-12:
        raise ZeroStateError(f"cannot normalize state with norm {n}")
    return CsState(s.coeffs / n, s.amps, normalized=True)


def merge_terms(s: CsState, tol: float = DEFAULT_MERGE_TOL) -> CsState:
    """Combine terms with (per-mode) coinciding amplitude labels.

    Terms whose amplitude vectors agree within ``tol`` in max-norm on each
    mode are summed into the earliest representative; afterwards terms with
    |coeff| <= tol * max|coeff| are dropped.  Protocol circuits produce
    exactly coinciding labels, so the default tolerance is lossless.
    """
    if tol < 0:
        raise DomainError("merge tolerance must be >= 0")
    t = s.term_count
    if t == 0:
        return s
    coeffs = s.coeffs
    amps = s.amps
    rep_rows: list[int] = []
    rep_coeffs: list[complex] = []
    assigned = np.zeros(t, dtype=bool)
    for i in range(t):
        if assigned[i]:
            continue
        # distance of every later term to this representative
        if i + 1 < t:
            rest = slice(i + 1, t)
            d = np.abs(amps[rest] - amps[i])
            if d.shape[1] == 0:
                dmax = np.zeros(d.shape[0])
            else:
                dmax = d.max(axis=1)
            close = (dmax <= tol) & ~assigned[rest]
        else:
            close = np.zeros(0, bool)
        total = coeffs[i]
        if close.any():
            idx = np.nonzero(close)[0] + i + 1
            total = total + coeffs[idx].sum()
            assigned[idx] = True
        assigned[i] = True
        rep_rows.append(i)
        rep_coeffs.append(total)
    new_coeffs = np.asarray(rep_coeffs, dtype=np.complex128)
    new_amps = amps[rep_rows]
    mags = np.abs(new_coeffs)
    cutoff = tol * (mags.max() if mags.size else 0.0)
    keep = mags > cutoff
    return CsState(new_coeffs[keep], new_amps[keep], normalized=s.normalized)


# -- closed-form normalization constants -------------------------------

@dataclass(frozen=True)
class NormKind:
    """Which closed-form normalization constant to evaluate.

    ``cat``/``cat_odd`` are the single-mode even/odd cat constants
    (1 +- exp(-2 a^2))^(-1/2); ``ghz_plus(k)``/``ghz_minus(k)`` are the
    k-mode GHZ-type constants [2(1 +- exp(-2 k a^2))]^(-1/2).
    """

    tag: str          # "cat", "cat_odd", "ghz_plus", "ghz_minus"
    k: int = 1

    def __post_init__(self):
        if self.tag not in ("cat", "cat_odd", "ghz_plus", "ghz_minus"):
            raise DomainError(f"unknown normalization kind {self.tag!r}")
        if self.k < 1:
            raise DomainError("mode count k must be >= 1")

    @classmethod
    def cat(cls) -> "NormKind":
        return cls("cat")

    @classmethod
    def cat_odd(cls) -> "NormKind":
        return cls("cat_odd")

    @classmethod
    def ghz_plus(cls, k: int) -> "NormKind":
        return cls("ghz_plus", k)

    @classmethod
    def ghz_minus(cls, k: int) -> "NormKind":
        return cls("ghz_minus", k)


def norm_const(kind: NormKind, alpha: float) -> float:
    """Evaluate a cat / GHZ-type normalization constant at real alpha > 0."""
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be positive and finite, got {alpha}")
    if kind.tag == "cat":
        return (1.0 + math.exp(-2.0 * alpha * alpha)) ** -0.5
    if kind.tag == "cat_odd":
        den = 1.0 - math.exp(-2.0 * alpha * alpha)
        if den <= 1e-15:
            raise DomainError("odd-cat constant underflows at this alpha")
        return den ** -0.5
    q = math.exp(-2.0 * kind.k * alpha * alpha)
    if kind.tag == "ghz_plus":
        return (2.0 * (1.0 + q)) ** -0.5
    den = 1.0 - q
    if den <= 1e-15:
        raise DomainError("odd GHZ constant underflows at this alpha")
    return (2.0 * den) ** -0.5
